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

#include "peerdata/pmi.h"

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "doctest.h"
#include "peerdata/bayes_core.h"
#include "peerdata/error.h"
#include "support/errors.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace peerdata {
namespace {

using testing::FixtureSuite;
using testing::ThrownKind;

// Every report profile with provider j reporting at most caps[j] points.
std::vector<std::vector<Dataset>> ReportProfiles(const World& world,
                                                 const std::vector<int>& caps) {
  std::vector<std::vector<Dataset>> out = {{}};
  for (std::size_t j = 0; j < world.num_providers(); ++j) {
    const auto options = enumerate_datasets_up_to(
        world.provider(j).likelihood.num_points(), caps[j]);
    std::vector<std::vector<Dataset>> next;
    for (const auto& prefix : out) {
      for (const Dataset& d : options) {
        next.push_back(prefix);
        next.back().push_back(d);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<ProbVector> PeersPosterior(const World& world,
                                         const std::vector<Dataset>& profile,
                                         std::size_t i) {
  std::vector<ProbVector> posts;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == i) continue;
    auto p = try_dataset_posterior(world, j, profile[j]);
    if (!p) return std::nullopt;
    posts.push_back(*p);
  }
  return try_joint_posterior(world.prior(), posts);
}

TEST_CASE("pmi_finite examples") {
  const ProbVector uniform = ProbVector::Uniform(2);
  const ProbVector prior({0.3, 0.7});
  CHECK(pmi_finite(prior, ProbVector({0.9, 0.1}), prior) ==
        doctest::Approx(1.0).epsilon(1e-15));
  const ProbVector mass({1.0, 0.0});
  CHECK(pmi_finite(mass, mass, uniform) == 2.0);
  CHECK(pmi_finite(mass, ProbVector({0.0, 1.0}), uniform) == 0.0);
  CHECK(ThrownKind([&] {
          pmi_finite(ProbVector::Uniform(3), mass, uniform);
        }) == ErrorKind::kDimensionMismatch);
}

TEST_CASE("in_support examples") {
  const ProbVector uniform = ProbVector::Uniform(2);
  CHECK(in_support(ProbVector({0.6, 0.4}), ProbVector({0.1, 0.9}), uniform));
  CHECK_FALSE(
      in_support(ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0}), uniform));
  CHECK(in_support(uniform, ProbVector({0.0, 1.0}), uniform));
  // Entries at the support epsilon count as zero.
  CHECK_FALSE(in_support(ProbVector({1.0 - 1e-16, 1e-16}),
                         ProbVector({0.0, 1.0}), uniform));
}

TEST_CASE("log_pmi_score examples") {
  const ProbVector uniform = ProbVector::Uniform(2);
  CHECK(log_pmi_score(uniform, ProbVector({0.2, 0.8}), uniform) ==
        doctest::Approx(0.0));
  const ProbVector mass({1.0, 0.0});
  CHECK(log_pmi_score(mass, mass, uniform) == std::log(2.0));
  CHECK(ThrownKind([&] {
          log_pmi_score(mass, ProbVector({0.0, 1.0}), uniform);
        }) == ErrorKind::kOutOfSupport);
}

TEST_CASE("pmi_finite is symmetric") {
  for (const auto& [name, world] : FixtureSuite()) {
    CAPTURE(name);
    const auto a = testing::RealizableDatasets(world, 0);
    const auto b = testing::RealizableDatasets(world, 1);
    for (const Dataset& x : a) {
      for (const Dataset& y : b) {
        const ProbVector px = dataset_posterior(world, 0, x);
        const ProbVector py = dataset_posterior(world, 1, y);
        CHECK(pmi_finite(px, py, world.prior()) ==
              pmi_finite(py, px, world.prior()));
      }
    }
  }
}

TEST_CASE("pmi_finite with true posteriors is the dependence ratio") {
  for (const auto& [name, world] : FixtureSuite()) {
    CAPTURE(name);
    for (std::size_t i = 0; i < world.num_providers(); ++i) {
      std::map<std::vector<Dataset>, double> peer_marginal;
      for (const WeightedProfile& wp : profile_distribution(world, {})) {
        std::vector<Dataset> peers = wp.profile;
        peers[i] = Dataset{};
        peer_marginal[peers] += wp.prob;
      }
      for (const WeightedProfile& wp : profile_distribution(world, {})) {
        if (wp.prob == 0.0) continue;
        std::vector<Dataset> peers = wp.profile;
        peers[i] = Dataset{};
        const double ratio =
            wp.prob / (testing::NaiveMarginal(world, i, wp.profile[i]) *
                       peer_marginal.at(peers));
        const ProbVector post_i = dataset_posterior(world, i, wp.profile[i]);
        const ProbVector post_mi = *PeersPosterior(world, wp.profile, i);
        CHECK(std::abs(pmi_finite(post_i, post_mi, world.prior()) - ratio) <=
              1e-10);
      }
    }
  }
}

TEST_CASE("bounds_finite examples") {
  const World coin = testing::CoinWorld();
  CHECK(bounds_finite(coin).upper == std::log(2.0));
  const World flat = testing::UninformativeWorld();
  const PmiBounds b = bounds_finite(flat);
  CHECK(b.lower <= 0.0);
  CHECK(b.upper >= 0.0);
  CHECK(b.lower < b.upper);
}

TEST_CASE("bound_details components") {
  const World w = testing::CoinWorld({2, 1}, {0.25, 0.75});
  const std::vector<int> caps = {2, 1};
  const BoundDetails d = bound_details(w, caps);
  // T = 3; point posteriors are (1/13, 12/13) and (4/7, 3/7).
  CHECK(d.prior_ratio == doctest::Approx(3.0));
  const double u = (12.0 / 13.0) / (1.0 / 13.0);
  CHECK(d.point_ratio[0] == doctest::Approx(u));
  CHECK(d.eta_own[0] == doctest::Approx(1.0 / (1.0 + 2.0 * u * u * 3.0)));
  CHECK(d.eta_peers[0] == doctest::Approx(1.0 / (1.0 + 2.0 * u)));
  CHECK(d.eta_own[1] == doctest::Approx(1.0 / (1.0 + 2.0 * u)));
  CHECK(d.bounds.lower ==
        doctest::Approx(std::log(d.eta_own[0] * d.eta_peers[0])));
  CHECK(d.bounds.upper == doctest::Approx(std::log(4.0)));
  const std::vector<int> wrong = {1};
  CHECK(ThrownKind([&] { bound_details(w, wrong); }) ==
        ErrorKind::kDimensionMismatch);
}

TEST_CASE("bounds bracket every in-support log PMI") {
  for (int slack : {0, 1}) {
    for (const auto& [name, world] : FixtureSuite()) {
      CAPTURE(name);
      CAPTURE(slack);
      const std::vector<int> caps = size_caps_with_slack(world, slack);
      const PmiBounds b = bounds_finite(world, caps);
      REQUIRE(b.lower < b.upper);
      for (const auto& profile : ReportProfiles(world, caps)) {
        for (std::size_t i = 0; i < world.num_providers(); ++i) {
          const auto post_i = try_dataset_posterior(world, i, profile[i]);
          const auto post_mi = PeersPosterior(world, profile, i);
          if (!post_i || !post_mi) continue;
          if (!in_support(*post_i, *post_mi, world.prior())) continue;
          const double s = log_pmi_score(*post_i, *post_mi, world.prior());
          CHECK(s >= b.lower);
          CHECK(s <= b.upper);
        }
      }
    }
  }
}

TEST_CASE("bounds widen with the size caps") {
  const World w = testing::ThreeParamWorld();
  const std::vector<int> small = {1, 1};
  const std::vector<int> large = {2, 3};
  CHECK(bounds_finite(w, large).lower < bounds_finite(w, small).lower);
  CHECK(bounds_finite(w, large).upper == bounds_finite(w, small).upper);
}

}  // namespace
}  // namespace peerdata
