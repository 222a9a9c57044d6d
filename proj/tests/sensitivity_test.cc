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

#include "peerdata/sensitivity.h"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "peerdata/error.h"
#include "peerdata/pmi.h"
#include "support/errors.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace peerdata {
namespace {

using testing::ThrownKind;

Eigen::MatrixXd RandomIntegerMatrix(Eigen::Index rows, Eigen::Index cols,
                                    std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-3, 3);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(rng);
  }
  return m;
}

// Integer matrix whose columns include deliberate duplicates and sums so
// that both ranks are often below full.
Eigen::MatrixXd StructuredMatrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rows_d(2, 5);
  std::uniform_int_distribution<int> cols_d(2, 6);
  const Eigen::Index rows = rows_d(rng);
  const Eigen::Index cols = cols_d(rng);
  Eigen::MatrixXd m = RandomIntegerMatrix(rows, cols, rng);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<Eigen::Index> pick(0, cols - 1);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const int mode = coin(rng);
    if (mode == 1) m.col(c) = 2.0 * m.col(pick(rng));
    if (mode == 2) m.col(c) = m.col(pick(rng)) - m.col(pick(rng));
  }
  return m;
}

TEST_CASE("matrix_rank examples") {
  CHECK(matrix_rank(Eigen::MatrixXd::Identity(3, 3)) == 3);
  Eigen::VectorXd u(4), v(3);
  u << 1, 2, 3, 4;
  v << 0.5, -1, 2;
  CHECK(matrix_rank(u * v.transpose()) == 1);
  CHECK(matrix_rank(Eigen::MatrixXd::Zero(3, 2)) == 0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd m = RandomIntegerMatrix(4, 3, rng);
    CHECK(matrix_rank(m) == testing::ExactRank(m));
  }
}

TEST_CASE("matrix_rank agrees with exact elimination on structured matrices") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::MatrixXd m = StructuredMatrix(rng);
    CHECK(matrix_rank(m) == testing::ExactRank(m));
  }
}

TEST_CASE("kruskal_rank examples") {
  for (int m = 1; m <= 5; ++m) {
    CHECK(kruskal_rank(Eigen::MatrixXd::Identity(m, m)) ==
          static_cast<std::size_t>(m));
  }
  Eigen::MatrixXd twins(3, 3);
  twins << 1, 1, 0, 2, 2, 1, 3, 3, 5;
  CHECK(kruskal_rank(twins) == 1);
  Eigen::MatrixXd zero_col(2, 2);
  zero_col << 1, 0, 0, 0;
  CHECK(kruskal_rank(zero_col) == 0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd m = RandomIntegerMatrix(3, 3, rng);
    CHECK(kruskal_rank(m) == testing::ExactKruskalRank(m));
  }
  CHECK(ThrownKind([] { kruskal_rank(Eigen::MatrixXd::Identity(13, 13)); }) ==
        ErrorKind::kTooManyColumns);
}

TEST_CASE("kruskal_rank agrees with exact subset ranks and is at most rank") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::MatrixXd m = StructuredMatrix(rng);
    const std::size_t k = kruskal_rank(m);
    CHECK(k == testing::ExactKruskalRank(m));
    CHECK(k <= matrix_rank(m));
  }
}

TEST_CASE("smallest_singular_value matches one-sided Jacobi") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd m(3 + trial % 5, 1 + trial % 3);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = unit(rng);
    }
    const auto oracle = testing::JacobiSingularValues(m);
    CHECK(std::abs(smallest_singular_value(m) - oracle.back()) <= 1e-12);
  }
  CHECK(smallest_singular_value(Eigen::MatrixXd::Ones(2, 3)) == 0.0);
}

TEST_CASE("build_q_minus_i and build_p_minus_i") {
  SUBCASE("one peer with one point gives its point posteriors") {
    const World w = testing::ThreeParamWorld();
    const Eigen::MatrixXd q = build_q_minus_i(w, 0);
    const Eigen::MatrixXd g = point_posterior_matrix(w, 1);
    REQUIRE(q.rows() == 3);
    CHECK((q - g).cwiseAbs().maxCoeff() <= 1e-15);
  }
  for (const auto& [name, w] : testing::FixtureSuite()) {
    CAPTURE(name);
    for (std::size_t i = 0; i < w.num_providers(); ++i) {
      const PeerSpace space(w, i);
      const Eigen::MatrixXd q = build_q_minus_i(space);
      const Eigen::MatrixXd p = build_p_minus_i(space);
      std::uint64_t rows = 1;
      for (std::size_t j = 0; j < w.num_providers(); ++j) {
        if (j == i) continue;
        rows *= dataset_count(w.provider(j).likelihood.num_points(),
                              w.provider(j).n_points);
      }
      REQUIRE(static_cast<std::uint64_t>(q.rows()) == rows);
      REQUIRE(q.cols() == static_cast<Eigen::Index>(w.num_params()));
      for (Eigen::Index r = 0; r < q.rows(); ++r) {
        const auto& profile = space.profile(r);
        // Direct products of likelihood entries.
        std::vector<double> naive(w.num_params());
        double z = 0.0;
        for (std::size_t t = 0; t < naive.size(); ++t) {
          double lik = 1.0;
          for (std::size_t j = 0; j < profile.size(); ++j) {
            for (std::size_t d : profile[j].points) {
              lik *= w.provider(j).likelihood(d, t);
            }
          }
          CHECK(std::abs(p(r, t) - lik) <= 1e-15);
          naive[t] = w.prior()[t] * lik;
          z += naive[t];
        }
        if (z == 0.0) {
          CHECK(q.row(r).cwiseAbs().maxCoeff() == 0.0);
          continue;
        }
        CHECK(std::abs(q.row(r).sum() - 1.0) <= 1e-12);
        for (std::size_t t = 0; t < naive.size(); ++t) {
          CHECK(std::abs(q(r, t) - naive[t] / z) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("corollary_check examples") {
  // m = 2 and a peer whose G has Kruskal rank 2 with one point.
  CHECK(corollary_check(testing::CoinWorld(), 0));
  // Every point posterior equals the prior, so G's columns are parallel.
  const World flat = testing::UninformativeWorld();
  CHECK(kruskal_rank(point_posterior_matrix(flat, 1)) == 1);
  CHECK_FALSE(corollary_check(flat, 0));
  // m = 3, one peer with Kruskal rank 2 and two points: 1 * 2 + 1 >= 3.
  const LikelihoodMatrix lik({{0.7, 0.2, 0.4}, {0.3, 0.8, 0.6}});
  const World w(ProbVector::Uniform(3), {{lik, 1}, {lik, 2}}, 1.0);
  CHECK(kruskal_rank(point_posterior_matrix(w, 1)) == 2);
  CHECK(corollary_check(w, 0));
  // With one point the sum is 1 * 1 + 1 < 3.
  CHECK_FALSE(corollary_check(w, 1));
}

TEST_CASE("alpha_bound examples") {
  const PmiBounds b{-2.0, std::log(2.0)};
  SUBCASE("parallel columns give no certification") {
    const World flat = testing::UninformativeWorld();
    CHECK(alpha_bound(flat, 0, b) <= 1e-15);
  }
  SUBCASE("orthonormal columns give B / (n (R - L))") {
    const LikelihoodMatrix exact({{1.0, 0.0}, {0.0, 1.0}});
    const World w(ProbVector::Uniform(2), {{exact, 1}, {exact, 1}}, 6.0);
    CHECK(alpha_bound(w, 0, b) ==
          doctest::Approx(6.0 / (2.0 * (b.upper - b.lower))).epsilon(1e-14));
  }
  CHECK(ThrownKind([] {
          alpha_bound(testing::CoinWorld(), 0, PmiBounds{1.0, 1.0});
        }) == ErrorKind::kDegenerateBounds);
}

TEST_CASE("alpha_bound matches the Jacobi singular value oracle") {
  for (const auto& [name, w] : testing::FixtureSuite()) {
    CAPTURE(name);
    const PmiBounds b = bounds_finite(w);
    for (std::size_t i = 0; i < w.num_providers(); ++i) {
      const Eigen::MatrixXd p = build_p_minus_i(w, i);
      const auto sv = testing::JacobiSingularValues(p);
      const double e = p.rows() < p.cols() ? 0.0 : sv.back();
      const double want = e * w.budget() /
                          (w.num_providers() * (b.upper - b.lower));
      CHECK(std::abs(alpha_bound(w, i, b) - want) <= 1e-10);
    }
  }
}

TEST_CASE("audit_sensitivity verdicts") {
  SUBCASE("full rank") {
    const World w = testing::ThreeParamWorld();
    const AuditReport r = audit_sensitivity(w, bounds_finite(w));
    CHECK(r.verdict == Verdict::kCertifiedSensitive);
    for (const ProviderAudit& a : r.providers) {
      CHECK(a.q_full_rank);
      CHECK(a.q_rank == 3);
      CHECK(a.alpha_lower_bound > 0.0);
    }
  }
  SUBCASE("Kruskal-rank condition") {
    const World w = testing::CorollaryWorld();
    const AuditReport r = audit_sensitivity(w, bounds_finite(w));
    CHECK(r.verdict == Verdict::kCertifiedSensitive);
    for (const ProviderAudit& a : r.providers) CHECK(a.krank_condition_met);
  }
  SUBCASE("rank deficient") {
    const World w = testing::RankDeficientWorld();
    const AuditReport r = audit_sensitivity(w, bounds_finite(w));
    CHECK(r.verdict == Verdict::kInconclusive);
    CHECK_FALSE(r.providers[0].q_full_rank);
    CHECK(r.providers[0].q_rank == 2);
    CHECK_FALSE(r.providers[0].krank_condition_met);
  }
  CHECK(VerdictName(Verdict::kCertifiedSensitive) == "certified_sensitive");
  CHECK(VerdictName(Verdict::kInconclusive) == "inconclusive");
}

TEST_CASE("audit q_rank agrees with the Jacobi oracle's count") {
  for (const auto& [name, w] : testing::FixtureSuite()) {
    CAPTURE(name);
    const AuditReport r = audit_sensitivity(w, bounds_finite(w));
    for (std::size_t i = 0; i < w.num_providers(); ++i) {
      const auto sv = testing::JacobiSingularValues(build_q_minus_i(w, i));
      std::size_t count = 0;
      for (double s : sv) count += s > kRankTolerance * sv.front() ? 1 : 0;
      CHECK(r.providers[i].q_rank == count);
    }
  }
}

TEST_CASE("h scan: Gaussian candidates") {
  const GaussianKnownVariance gauss(1.0, 0.0, 1.0);
  const ConjParams p0 = gauss.prior();
  const std::vector<ConjParams> contexts = {
      gauss.posterior(1, -1.0), gauss.posterior(2, 0.0),
      gauss.posterior(3, 0.5)};
  SUBCASE("differing sizes are distinguishable") {
    const HScanReport r = h_distinguishability_scan(
        gauss, p0,
        {gauss.posterior(1, 0.0), gauss.posterior(2, 0.0),
         gauss.posterior(4, 0.0)},
        contexts);
    CHECK(r.all_distinguishable);
    CHECK(r.pairs.size() == 3);
  }
  SUBCASE("differing means are distinguishable once g carries the mean term") {
    const HScanReport r = h_distinguishability_scan(
        gauss, p0,
        {gauss.posterior(2, -0.5), gauss.posterior(2, 0.0),
         gauss.posterior(2, 0.75)},
        contexts);
    CHECK(r.all_distinguishable);
  }
  SUBCASE("a single context that balances the mean term") {
    // With p_i = (nu, tau) and p_i' = (nu, -tau) the log h gap is
    // 2 tau nu K / (sigma^2 nu_c) with K the context's offset from the prior,
    // so a context at the prior mean leaves the two indistinguishable.
    const HScanReport r = h_distinguishability_scan(
        gauss, p0, {gauss.posterior(2, 0.6), gauss.posterior(2, -0.6)},
        {gauss.posterior(3, 0.0)});
    CHECK_FALSE(r.all_distinguishable);
    REQUIRE(r.indistinguishable.size() == 1);
  }
}

TEST_CASE("h scan: Beta four-neighbor contexts distinguish every pair") {
  const BernoulliBeta beta(1.0, 1.0);
  std::vector<ConjParams> grid;
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) grid.push_back(beta.posterior(a, b));
  }
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      const HScanReport r = h_distinguishability_scan(
          beta, beta.prior(), grid, beta_four_neighbor_contexts(beta, a, b));
      CHECK(r.all_distinguishable);
      CHECK(r.pairs.size() == grid.size() * (grid.size() - 1) / 2);
    }
  }
}

TEST_CASE("h scan: one symmetric Beta context cannot separate mirror images") {
  const BernoulliBeta beta(1.0, 1.0);
  const std::vector<ConjParams> mirror = {beta.posterior(2, 0),
                                          beta.posterior(0, 2)};
  const HScanReport one = h_distinguishability_scan(
      beta, beta.prior(), mirror, {beta.posterior(1, 1)});
  CHECK_FALSE(one.all_distinguishable);
  const HScanReport four = h_distinguishability_scan(
      beta, beta.prior(), mirror, beta_four_neighbor_contexts(beta, 1, 1));
  CHECK(four.all_distinguishable);
}

TEST_CASE("h scan propagates illegal parameters") {
  const BernoulliBeta beta(1.0, 1.0);
  CHECK(ThrownKind([&] {
          h_distinguishability_scan(beta, beta.prior(),
                                    {BernoulliBeta::FromShapes(0.3, 0.3)},
                                    {BernoulliBeta::FromShapes(0.3, 0.3)});
        }) == ErrorKind::kIllegalCompositeParams);
}

}  // namespace
}  // namespace peerdata
