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

#include "support/fixtures.h"

#include <cmath>
#include <random>
#include <utility>

namespace peerdata::testing {
namespace {

Provider MakeProvider(const std::vector<std::vector<double>>& rows, int n) {
  return Provider{LikelihoodMatrix(rows), n};
}

std::vector<double> RandomSimplex(std::size_t size, std::mt19937_64& rng) {
  // Bounded away from zero so every fixture has a strictly positive prior.
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> w(size);
  double total = 0.0;
  for (double& x : w) {
    x = unit(rng);
    total += x;
  }
  for (double& x : w) x /= total;
  // Push the rounding residue into the last entry so sums are exact enough.
  double head = 0.0;
  for (std::size_t k = 0; k + 1 < size; ++k) head += w[k];
  w.back() = 1.0 - head;
  return w;
}

// Every point tells every pair of parameters apart by at least
// kMinSeparation in likelihood. A nearly flat row moves the posterior so
// little that exact payment gaps fall below any fixed test threshold.
constexpr double kMinSeparation = 0.05;

bool Separated(const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        if (std::abs(row[a] - row[b]) < kMinSeparation) return false;
      }
    }
  }
  return true;
}

}  // namespace

World CoinWorld(std::vector<int> sizes, std::vector<double> prior,
                double budget) {
  std::vector<Provider> providers;
  for (int n : sizes) {
    providers.push_back(MakeProvider({{0.2, 0.8}, {0.8, 0.2}}, n));
  }
  return World(ProbVector(std::move(prior)), std::move(providers), budget);
}

World ThreeParamWorld() {
  return World(ProbVector({0.3, 0.3, 0.4}),
               {MakeProvider({{0.6, 0.2, 0.1}, {0.3, 0.5, 0.2}, {0.1, 0.3, 0.7}},
                             1),
                MakeProvider({{0.7, 0.1, 0.3}, {0.2, 0.6, 0.1}, {0.1, 0.3, 0.6}},
                             1)},
               10.0);
}

World CorollaryWorld() {
  // Two points give G_j two rows, so its three columns have Kruskal rank 2.
  const std::vector<std::vector<double>> lik = {{0.7, 0.2, 0.4},
                                                {0.3, 0.8, 0.6}};
  return World(ProbVector({0.3, 0.3, 0.4}),
               {MakeProvider(lik, 1), MakeProvider(lik, 1),
                MakeProvider(lik, 1)},
               3.0);
}

World RankDeficientWorld() {
  return World(
      ProbVector({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}),
      {MakeProvider({{0.5, 0.8, 0.2}, {0.5, 0.2, 0.8}}, 1),
       MakeProvider({{0.9, 0.3, 0.3}, {0.1, 0.7, 0.7}}, 2)},
      2.0);
}

World UninformativeWorld() {
  return World(ProbVector({0.25, 0.75}),
               {MakeProvider({{0.4, 0.4}, {0.6, 0.6}}, 2),
                MakeProvider({{0.1, 0.1}, {0.5, 0.5}, {0.4, 0.4}}, 1)},
               1.0);
}

World ZeroEntryWorld() {
  return World(ProbVector({0.2, 0.5, 0.3}),
               {MakeProvider({{0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}}, 2),
                MakeProvider({{0.6, 0.0, 0.3}, {0.4, 0.3, 0.0}, {0.0, 0.7, 0.7}},
                             1)},
               5.0);
}

World RandomWorld(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const auto m = static_cast<std::size_t>(pick(2, 3));
  const int n = pick(2, 3);
  std::vector<Provider> providers;
  for (int j = 0; j < n; ++j) {
    const auto alphabet = static_cast<std::size_t>(pick(2, 3));
    std::vector<std::vector<double>> rows(alphabet, std::vector<double>(m));
    do {
      for (std::size_t t = 0; t < m; ++t) {
        const std::vector<double> col = RandomSimplex(alphabet, rng);
        for (std::size_t d = 0; d < alphabet; ++d) rows[d][t] = col[d];
      }
    } while (!Separated(rows));
    providers.push_back(MakeProvider(rows, pick(1, 2)));
  }
  return World(ProbVector(RandomSimplex(m, rng)), std::move(providers),
               static_cast<double>(pick(1, 20)));
}

std::vector<NamedWorld> FixtureSuite() {
  std::vector<NamedWorld> out;
  out.push_back({"coin_n1", CoinWorld({1, 1})});
  out.push_back({"coin_n2", CoinWorld({2, 2})});
  out.push_back({"coin_three_providers", CoinWorld({1, 2, 1})});
  out.push_back({"coin_skewed_prior", CoinWorld({2, 1}, {0.7, 0.3}, 4.0)});
  out.push_back({"three_param", ThreeParamWorld()});
  out.push_back({"corollary", CorollaryWorld()});
  out.push_back({"rank_deficient", RankDeficientWorld()});
  out.push_back({"uninformative", UninformativeWorld()});
  out.push_back({"zero_entries", ZeroEntryWorld()});
  for (std::uint64_t seed = 1; seed <= 14; ++seed) {
    out.push_back({"random_" + std::to_string(seed), RandomWorld(seed)});
  }
  return out;
}

std::vector<Dataset> RealizableDatasets(const World& world,
                                        std::size_t provider) {
  std::vector<Dataset> out;
  const Provider& p = world.provider(provider);
  for (Dataset& d :
       enumerate_datasets(p.likelihood.num_points(), p.n_points)) {
    if (dataset_marginal(world, provider, d) > 0.0) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace peerdata::testing
