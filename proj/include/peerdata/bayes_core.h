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

// Finite-parameter Bayesian world: a prior over m parameter values, one
// likelihood matrix per data provider, and exact enumeration of dataset
// profiles. Datasets are i.i.d. given the parameter and providers are
// conditionally independent given the parameter.

#ifndef PEERDATA_BAYES_CORE_H_
#define PEERDATA_BAYES_CORE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace peerdata {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// A distribution over the m parameter values. Entries are nonnegative and sum
// to one within kSumTolerance.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> entries);

  // Divides by the total mass. Throws ZeroEvidence when every weight is zero.
  static ProbVector Normalized(std::vector<double> weights);
  static ProbVector Uniform(std::size_t m);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t k) const { return entries_[k]; }
  std::span<const double> entries() const { return entries_; }
  double min() const;
  double max() const;

  bool operator==(const ProbVector&) const = default;

 private:
  std::vector<double> entries_;
};

// Max absolute entrywise difference.
double MaxAbsDiff(const ProbVector& a, const ProbVector& b);

// entry(d, theta) = p(d | theta). Rows are point values, columns parameters;
// every column is a distribution over the point alphabet.
class LikelihoodMatrix {
 public:
  LikelihoodMatrix() = default;
  explicit LikelihoodMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t num_points() const { return points_; }
  std::size_t num_params() const { return params_; }
  double operator()(std::size_t d, std::size_t theta) const {
    return data_[d * params_ + theta];
  }

 private:
  std::size_t points_ = 0;
  std::size_t params_ = 0;
  std::vector<double> data_;
};

// An ordered tuple of point indices. Order matters for probability accounting
// (each arrangement of i.i.d. draws is its own outcome); posteriors ignore it.
struct Dataset {
  std::vector<std::size_t> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  auto operator<=>(const Dataset&) const = default;
};

std::string ToString(const Dataset& dataset);
std::vector<std::size_t> PointCounts(const Dataset& dataset,
                                     std::size_t alphabet);

struct Provider {
  LikelihoodMatrix likelihood;
  int n_points = 0;
};

class World {
 public:
  World(ProbVector prior, std::vector<Provider> providers, double budget);

  const ProbVector& prior() const { return prior_; }
  std::size_t num_params() const { return prior_.size(); }
  std::size_t num_providers() const { return providers_.size(); }
  const Provider& provider(std::size_t i) const { return providers_.at(i); }
  const std::vector<Provider>& providers() const { return providers_; }
  double budget() const { return budget_; }

  // Same model with the provider order permuted: result.provider(k) is
  // this->provider(order[k]).
  World Permuted(std::span<const std::size_t> order) const;

 private:
  ProbVector prior_;
  std::vector<Provider> providers_;
  double budget_;
};

// p(theta | d) for a single point.
ProbVector point_posterior(const World& world, std::size_t provider,
                           std::size_t point);

// p(theta | D), computed from point posteriors as
// prod_j p(theta|d_j) / p(theta)^(N-1). Empty datasets return the prior.
// Products run over point values in index order so permutations of the same
// multiset give bit-identical results.
ProbVector dataset_posterior(const World& world, std::size_t provider,
                             const Dataset& dataset);
// As above, but returns nullopt instead of throwing ZeroEvidence.
std::optional<ProbVector> try_dataset_posterior(const World& world,
                                                std::size_t provider,
                                                const Dataset& dataset);

// Posterior given several conditionally independent datasets:
// prod_k posts[k] / prior^(K-1), normalized. One input is returned unchanged;
// zero inputs return the prior.
ProbVector joint_posterior(const ProbVector& prior,
                           std::span<const ProbVector> posts);
std::optional<ProbVector> try_joint_posterior(
    const ProbVector& prior, std::span<const ProbVector> posts);

// p(D | theta) for every theta.
std::vector<double> dataset_likelihood(const World& world, std::size_t provider,
                                       const Dataset& dataset);

// All ordered tuples of the given size, lexicographic.
std::vector<Dataset> enumerate_datasets(std::size_t alphabet, int size);
// All tuples of sizes 0..max_size, grouped by size.
std::vector<Dataset> enumerate_datasets_up_to(std::size_t alphabet,
                                              int max_size);

// alphabet^size, saturating at UINT64_MAX.
std::uint64_t dataset_count(std::size_t alphabet, int size);

// Number of joint dataset profiles over all providers except `excluded`.
std::uint64_t profile_count(const World& world,
                            std::optional<std::size_t> excluded = {});

struct WeightedProfile {
  std::vector<Dataset> profile;  // one dataset per provider
  double prob = 0.0;
};

struct ProfileCondition {
  std::size_t provider = 0;
  Dataset dataset;
};

// Exact distribution over dataset profiles. Unconditioned: p(D_1..D_n).
// Conditioned on (i, D_i): every returned profile has D_i in slot i and the
// probability is p(D_-i | D_i).
std::vector<WeightedProfile> profile_distribution(
    const World& world, const std::optional<ProfileCondition>& condition,
    std::uint64_t cap = kDefaultEnumerationCap);

// p(D_i): marginal probability of one provider's dataset.
double dataset_marginal(const World& world, std::size_t provider,
                        const Dataset& dataset);

// The space of peer profiles D_-i for a fixed provider i, with everything the
// mechanisms and audits need per row precomputed.
class PeerSpace {
 public:
  PeerSpace(const World& world, std::size_t provider,
            std::uint64_t cap = kDefaultEnumerationCap);

  std::size_t provider() const { return provider_; }
  std::size_t size() const { return profiles_.size(); }

  // Full-length profile with an empty dataset in the provider's own slot.
  const std::vector<Dataset>& profile(std::size_t k) const {
    return profiles_[k];
  }
  // p(D_-i | theta), m entries.
  std::span<const double> likelihood(std::size_t k) const {
    return {likelihood_.data() + k * params_, params_};
  }
  // p(theta | D_-i) as the analyst computes it from the peers' reports, or
  // nullopt when the profile is impossible under every theta.
  const std::optional<ProbVector>& posterior(std::size_t k) const {
    return posteriors_[k];
  }
  // p(D_-i).
  double marginal(std::size_t k) const { return marginals_[k]; }

  // sum_theta belief(theta) p(D_-i | theta) for every row; with the true
  // posterior p(theta | D_i) this is p(D_-i | D_i).
  std::vector<double> predictive(const ProbVector& belief) const;

 private:
  std::size_t provider_;
  std::size_t params_;
  std::vector<std::vector<Dataset>> profiles_;
  std::vector<double> likelihood_;
  std::vector<std::optional<ProbVector>> posteriors_;
  std::vector<double> marginals_;
};

}  // namespace peerdata

#endif  // PEERDATA_BAYES_CORE_H_
