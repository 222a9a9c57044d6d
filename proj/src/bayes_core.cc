// Copyright 2026 The peerdata Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "peerdata/bayes_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "peerdata/error.h"

namespace peerdata {
namespace {

void CheckFinite(double x, const char* what) {
  if (!std::isfinite(x)) Fail(ErrorKind::kInvalidArgument, what);
}

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Rescales so the largest entry is one; keeps long products away from
// underflow without changing the normalized result.
void RescaleByMax(std::vector<double>& w) {
  const double top = *std::max_element(w.begin(), w.end());
  if (top > 0.0) {
    for (double& x : w) x /= top;
  }
}

void CheckProvider(const World& world, std::size_t provider) {
  if (provider >= world.num_providers()) {
    Fail(ErrorKind::kInvalidArgument,
         "provider index " + std::to_string(provider) + " out of range");
  }
}

void CheckDataset(const World& world, std::size_t provider,
                  const Dataset& dataset) {
  CheckProvider(world, provider);
  const std::size_t alphabet = world.provider(provider).likelihood.num_points();
  for (std::size_t d : dataset.points) {
    if (d >= alphabet) {
      Fail(ErrorKind::kInvalidArgument,
           "point index " + std::to_string(d) + " out of range for provider " +
               std::to_string(provider));
    }
  }
}

// Every dataset of a provider at its own size, plus p(D | theta) per dataset.
struct DatasetTable {
  std::vector<Dataset> datasets;
  std::vector<std::vector<double>> likelihoods;
};

DatasetTable BuildTable(const World& world, std::size_t provider) {
  DatasetTable table;
  const Provider& p = world.provider(provider);
  table.datasets = enumerate_datasets(p.likelihood.num_points(), p.n_points);
  table.likelihoods.reserve(table.datasets.size());
  for (const Dataset& d : table.datasets) {
    table.likelihoods.push_back(dataset_likelihood(world, provider, d));
  }
  return table;
}

// Visits every combination of the given tables in lexicographic order, with
// the elementwise product of the chosen likelihood vectors.
template <typename Visitor>
void ForEachProfile(const std::vector<const DatasetTable*>& tables,
                    std::size_t m, Visitor&& visit) {
  const std::size_t slots = tables.size();
  std::vector<std::size_t> index(slots, 0);
  for (const DatasetTable* t : tables) {
    if (t->datasets.empty()) return;
  }
  std::vector<double> product(m);
  while (true) {
    std::fill(product.begin(), product.end(), 1.0);
    for (std::size_t s = 0; s < slots; ++s) {
      const std::vector<double>& lik = tables[s]->likelihoods[index[s]];
      for (std::size_t k = 0; k < m; ++k) product[k] *= lik[k];
    }
    visit(index, product);
    std::size_t s = slots;
    while (s > 0) {
      --s;
      if (++index[s] < tables[s]->datasets.size()) break;
      index[s] = 0;
      if (s == 0) return;
    }
    if (slots == 0) return;
  }
}

}  // namespace

ProbVector::ProbVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) Fail(ErrorKind::kInvalidArgument, "empty ProbVector");
  double total = 0.0;
  for (double x : entries_) {
    CheckFinite(x, "non-finite probability");
    if (x < 0.0) Fail(ErrorKind::kInvalidArgument, "negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    Fail(ErrorKind::kInvalidArgument,
         "probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

ProbVector ProbVector::Normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double x : weights) {
    CheckFinite(x, "non-finite weight");
    if (x < 0.0) Fail(ErrorKind::kInvalidArgument, "negative weight");
    total += x;
  }
  if (!(total > 0.0)) Fail(ErrorKind::kZeroEvidence, "all weights are zero");
  for (double& x : weights) x /= total;
  return ProbVector(std::move(weights));
}

ProbVector ProbVector::Uniform(std::size_t m) {
  return ProbVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double ProbVector::min() const {
  return *std::min_element(entries_.begin(), entries_.end());
}

double ProbVector::max() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

double MaxAbsDiff(const ProbVector& a, const ProbVector& b) {
  if (a.size() != b.size()) Fail(ErrorKind::kDimensionMismatch, "MaxAbsDiff");
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
  }
  return diff;
}

LikelihoodMatrix::LikelihoodMatrix(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    Fail(ErrorKind::kInvalidArgument, "likelihood matrix is empty");
  }
  points_ = rows.size();
  params_ = rows.front().size();
  data_.reserve(points_ * params_);
  for (const auto& row : rows) {
    if (row.size() != params_) {
      Fail(ErrorKind::kDimensionMismatch, "ragged likelihood matrix");
    }
    for (double x : row) {
      CheckFinite(x, "non-finite likelihood");
      if (x < 0.0) Fail(ErrorKind::kInvalidArgument, "negative likelihood");
      data_.push_back(x);
    }
  }
  for (std::size_t t = 0; t < params_; ++t) {
    double total = 0.0;
    for (std::size_t d = 0; d < points_; ++d) total += (*this)(d, t);
    if (std::abs(total - 1.0) > kSumTolerance) {
      Fail(ErrorKind::kInvalidArgument,
           "likelihood column " + std::to_string(t) + " sums to " +
               std::to_string(total) + ", not 1");
    }
  }
}

std::string ToString(const Dataset& dataset) {
  std::string out = "(";
  for (std::size_t k = 0; k < dataset.points.size(); ++k) {
    if (k > 0) out += ' ';
    out += std::to_string(dataset.points[k]);
  }
  out += ')';
  return out;
}

std::vector<std::size_t> PointCounts(const Dataset& dataset,
                                     std::size_t alphabet) {
  std::vector<std::size_t> counts(alphabet, 0);
  for (std::size_t d : dataset.points) ++counts.at(d);
  return counts;
}

World::World(ProbVector prior, std::vector<Provider> providers, double budget)
    : prior_(std::move(prior)),
      providers_(std::move(providers)),
      budget_(budget) {
  if (prior_.size() == 0) Fail(ErrorKind::kInvalidArgument, "empty prior");
  for (double x : prior_.entries()) {
    if (!(x > 0.0)) {
      Fail(ErrorKind::kInvalidArgument, "prior must be strictly positive");
    }
  }
  if (providers_.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "a world needs at least 2 providers");
  }
  for (std::size_t i = 0; i < providers_.size(); ++i) {
    const Provider& p = providers_[i];
    if (p.likelihood.num_params() != prior_.size()) {
      Fail(ErrorKind::kDimensionMismatch,
           "provider " + std::to_string(i) +
               " likelihood has the wrong number of parameter columns");
    }
    if (p.n_points < 0) {
      Fail(ErrorKind::kInvalidArgument, "negative dataset size");
    }
  }
  if (!std::isfinite(budget_) || budget_ < 0.0) {
    Fail(ErrorKind::kInvalidArgument, "budget must be finite and nonnegative");
  }
}

World World::Permuted(std::span<const std::size_t> order) const {
  if (order.size() != providers_.size()) {
    Fail(ErrorKind::kDimensionMismatch, "permutation length");
  }
  std::vector<Provider> permuted;
  permuted.reserve(order.size());
  for (std::size_t k : order) permuted.push_back(providers_.at(k));
  return World(prior_, std::move(permuted), budget_);
}

ProbVector point_posterior(const World& world, std::size_t provider,
                           std::size_t point) {
  CheckDataset(world, provider, Dataset{{point}});
  const LikelihoodMatrix& lik = world.provider(provider).likelihood;
  std::vector<double> w(world.num_params());
  for (std::size_t t = 0; t < w.size(); ++t) {
    w[t] = lik(point, t) * world.prior()[t];
  }
  return ProbVector::Normalized(std::move(w));
}

std::optional<ProbVector> try_dataset_posterior(const World& world,
                                                std::size_t provider,
                                                const Dataset& dataset) {
  CheckDataset(world, provider, dataset);
  if (dataset.empty()) return world.prior();
  const ProbVector& prior = world.prior();
  const std::size_t m = prior.size();
  const std::size_t alphabet = world.provider(provider).likelihood.num_points();
  const std::vector<std::size_t> counts = PointCounts(dataset, alphabet);

  std::vector<double> w(prior.entries().begin(), prior.entries().end());
  for (std::size_t d = 0; d < alphabet; ++d) {
    if (counts[d] == 0) continue;
    std::optional<ProbVector> post;
    try {
      post = point_posterior(world, provider, d);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kZeroEvidence) return std::nullopt;
      throw;
    }
    for (std::size_t c = 0; c < counts[d]; ++c) {
      for (std::size_t t = 0; t < m; ++t) w[t] *= (*post)[t] / prior[t];
      RescaleByMax(w);
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) return std::nullopt;
  return ProbVector::Normalized(std::move(w));
}

ProbVector dataset_posterior(const World& world, std::size_t provider,
                             const Dataset& dataset) {
  std::optional<ProbVector> post =
      try_dataset_posterior(world, provider, dataset);
  if (!post) {
    Fail(ErrorKind::kZeroEvidence,
         "dataset " + ToString(dataset) + " is impossible for provider " +
             std::to_string(provider));
  }
  return *std::move(post);
}

std::optional<ProbVector> try_joint_posterior(
    const ProbVector& prior, std::span<const ProbVector> posts) {
  for (const ProbVector& p : posts) {
    if (p.size() != prior.size()) {
      Fail(ErrorKind::kDimensionMismatch, "joint_posterior input length");
    }
  }
  for (double x : prior.entries()) {
    if (!(x > 0.0)) {
      Fail(ErrorKind::kInvalidArgument, "prior must be strictly positive");
    }
  }
  if (posts.empty()) return prior;
  if (posts.size() == 1) return posts.front();
  std::vector<double> w(prior.entries().begin(), prior.entries().end());
  for (const ProbVector& p : posts) {
    for (std::size_t t = 0; t < w.size(); ++t) w[t] *= p[t] / prior[t];
    RescaleByMax(w);
  }
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) return std::nullopt;
  return ProbVector::Normalized(std::move(w));
}

ProbVector joint_posterior(const ProbVector& prior,
                           std::span<const ProbVector> posts) {
  std::optional<ProbVector> post = try_joint_posterior(prior, posts);
  if (!post) Fail(ErrorKind::kZeroEvidence, "posteriors have disjoint support");
  return *std::move(post);
}

std::vector<double> dataset_likelihood(const World& world, std::size_t provider,
                                       const Dataset& dataset) {
  CheckDataset(world, provider, dataset);
  const LikelihoodMatrix& lik = world.provider(provider).likelihood;
  const std::vector<std::size_t> counts =
      PointCounts(dataset, lik.num_points());
  std::vector<double> out(world.num_params(), 1.0);
  for (std::size_t d = 0; d < counts.size(); ++d) {
    for (std::size_t c = 0; c < counts[d]; ++c) {
      for (std::size_t t = 0; t < out.size(); ++t) out[t] *= lik(d, t);
    }
  }
  return out;
}

std::uint64_t dataset_count(std::size_t alphabet, int size) {
  std::uint64_t count = 1;
  for (int k = 0; k < size; ++k) count = SaturatingMul(count, alphabet);
  return count;
}

std::vector<Dataset> enumerate_datasets(std::size_t alphabet, int size) {
  if (size < 0) Fail(ErrorKind::kInvalidArgument, "negative dataset size");
  std::vector<Dataset> out;
  if (alphabet == 0 && size > 0) return out;
  Dataset current{std::vector<std::size_t>(static_cast<std::size_t>(size), 0)};
  while (true) {
    out.push_back(current);
    int pos = size;
    while (pos > 0) {
      --pos;
      if (++current.points[pos] < alphabet) break;
      current.points[pos] = 0;
      if (pos == 0) return out;
    }
    if (size == 0) return out;
  }
}

std::vector<Dataset> enumerate_datasets_up_to(std::size_t alphabet,
                                              int max_size) {
  std::vector<Dataset> out;
  for (int size = 0; size <= max_size; ++size) {
    std::vector<Dataset> level = enumerate_datasets(alphabet, size);
    out.insert(out.end(), std::make_move_iterator(level.begin()),
               std::make_move_iterator(level.end()));
  }
  return out;
}

std::uint64_t profile_count(const World& world,
                            std::optional<std::size_t> excluded) {
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < world.num_providers(); ++j) {
    if (excluded && *excluded == j) continue;
    const Provider& p = world.provider(j);
    count = SaturatingMul(count,
                          dataset_count(p.likelihood.num_points(), p.n_points));
  }
  return count;
}

std::vector<WeightedProfile> profile_distribution(
    const World& world, const std::optional<ProfileCondition>& condition,
    std::uint64_t cap) {
  std::optional<std::size_t> excluded;
  if (condition) {
    CheckDataset(world, condition->provider, condition->dataset);
    excluded = condition->provider;
  }
  const std::uint64_t count = profile_count(world, excluded);
  if (count > cap) {
    Fail(ErrorKind::kEnumerationTooLarge,
         std::to_string(count) + " profiles exceed the cap of " +
             std::to_string(cap));
  }
  const ProbVector belief =
      condition ? dataset_posterior(world, condition->provider,
                                    condition->dataset)
                : world.prior();

  std::vector<DatasetTable> tables;
  std::vector<std::size_t> slots;
  for (std::size_t j = 0; j < world.num_providers(); ++j) {
    if (excluded && *excluded == j) continue;
    tables.push_back(BuildTable(world, j));
    slots.push_back(j);
  }
  std::vector<const DatasetTable*> table_ptrs;
  for (const DatasetTable& t : tables) table_ptrs.push_back(&t);

  const std::size_t m = world.num_params();
  std::vector<WeightedProfile> out;
  out.reserve(static_cast<std::size_t>(count));
  ForEachProfile(table_ptrs, m,
                 [&](const std::vector<std::size_t>& index,
                     const std::vector<double>& lik) {
                   WeightedProfile wp;
                   wp.profile.resize(world.num_providers());
                   for (std::size_t s = 0; s < slots.size(); ++s) {
                     wp.profile[slots[s]] = tables[s].datasets[index[s]];
                   }
                   if (condition) {
                     wp.profile[condition->provider] = condition->dataset;
                   }
                   for (std::size_t t = 0; t < m; ++t) {
                     wp.prob += belief[t] * lik[t];
                   }
                   out.push_back(std::move(wp));
                 });
  return out;
}

double dataset_marginal(const World& world, std::size_t provider,
                        const Dataset& dataset) {
  const std::vector<double> lik = dataset_likelihood(world, provider, dataset);
  double total = 0.0;
  for (std::size_t t = 0; t < lik.size(); ++t) {
    total += world.prior()[t] * lik[t];
  }
  return total;
}

PeerSpace::PeerSpace(const World& world, std::size_t provider,
                     std::uint64_t cap)
    : provider_(provider), params_(world.num_params()) {
  CheckProvider(world, provider);
  const std::uint64_t count = profile_count(world, provider);
  if (count > cap) {
    Fail(ErrorKind::kEnumerationTooLarge,
         std::to_string(count) + " peer profiles exceed the cap of " +
             std::to_string(cap));
  }
  std::vector<DatasetTable> tables;
  std::vector<std::size_t> slots;
  std::vector<std::vector<std::optional<ProbVector>>> table_posts;
  for (std::size_t j = 0; j < world.num_providers(); ++j) {
    if (j == provider) continue;
    tables.push_back(BuildTable(world, j));
    slots.push_back(j);
    auto& posts = table_posts.emplace_back();
    for (const Dataset& d : tables.back().datasets) {
      posts.push_back(try_dataset_posterior(world, j, d));
    }
  }
  std::vector<const DatasetTable*> table_ptrs;
  for (const DatasetTable& t : tables) table_ptrs.push_back(&t);

  const ProbVector& prior = world.prior();
  profiles_.reserve(static_cast<std::size_t>(count));
  ForEachProfile(
      table_ptrs, params_,
      [&](const std::vector<std::size_t>& index,
          const std::vector<double>& lik) {
        std::vector<Dataset> profile(world.num_providers());
        std::vector<ProbVector> posts;
        bool possible = true;
        for (std::size_t s = 0; s < slots.size(); ++s) {
          profile[slots[s]] = tables[s].datasets[index[s]];
          const auto& post = table_posts[s][index[s]];
          if (post) {
            posts.push_back(*post);
          } else {
            possible = false;
          }
        }
        profiles_.push_back(std::move(profile));
        likelihood_.insert(likelihood_.end(), lik.begin(), lik.end());
        double marginal = 0.0;
        for (std::size_t t = 0; t < params_; ++t) marginal += prior[t] * lik[t];
        marginals_.push_back(marginal);
        posteriors_.push_back(possible ? try_joint_posterior(prior, posts)
                                       : std::nullopt);
      });
}

std::vector<double> PeerSpace::predictive(const ProbVector& belief) const {
  if (belief.size() != params_) {
    Fail(ErrorKind::kDimensionMismatch, "predictive belief length");
  }
  std::vector<double> out(profiles_.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::span<const double> lik = likelihood(k);
    for (std::size_t t = 0; t < params_; ++t) out[k] += belief[t] * lik[t];
  }
  return out;
}

}  // namespace peerdata
