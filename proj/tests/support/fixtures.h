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

// Small finite worlds shared by the unit and acceptance tests.

#ifndef PEERDATA_TESTS_SUPPORT_FIXTURES_H_
#define PEERDATA_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "peerdata/bayes_core.h"

namespace peerdata::testing {

// Binary points with p(1 | theta_1) = 0.8 and p(1 | theta_2) = 0.2 for every
// provider.
World CoinWorld(std::vector<int> sizes = {1, 1},
                std::vector<double> prior = {0.5, 0.5}, double budget = 1.0);

// m = 3 with informative, generic likelihoods; Q_-i has full rank.
World ThreeParamWorld();

// m = 3, three providers with one point each and Kruskal rank 2 point
// posterior matrices, so the counting condition holds with equality.
World CorollaryWorld();

// Peers cannot tell theta_2 from theta_3 while provider 0 can.
World RankDeficientWorld();

// Every likelihood column identical: data carries no information.
World UninformativeWorld();

// Some likelihood entries are zero, so some reports are impossible under some
// parameters.
World ZeroEntryWorld();

// m <= 3, alphabet <= 3, N <= 2, n in {2, 3}, drawn from `seed`. Within
// each point row, likelihoods differ by at least 0.05 between parameters.
World RandomWorld(std::uint64_t seed);

struct NamedWorld {
  std::string name;
  World world;
};

// At least 20 worlds: the hand-built ones above plus seeded random ones.
std::vector<NamedWorld> FixtureSuite();

// Every dataset of the provider's own size with positive marginal
// probability.
std::vector<Dataset> RealizableDatasets(const World& world,
                                        std::size_t provider);

}  // namespace peerdata::testing

#endif  // PEERDATA_TESTS_SUPPORT_FIXTURES_H_
