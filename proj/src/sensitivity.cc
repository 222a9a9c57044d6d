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
#include <optional>
#include <string>

#include <Eigen/SVD>

#include "peerdata/error.h"

namespace peerdata {
namespace {

Eigen::VectorXd SingularValues(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
  return svd.singularValues();
}

// Visits every size-r subset of {0..n-1} in lexicographic order until the
// visitor returns false.
template <typename Visitor>
bool AllSubsets(std::size_t n, std::size_t r, Visitor&& visit) {
  std::vector<std::size_t> idx(r);
  for (std::size_t k = 0; k < r; ++k) idx[k] = k;
  while (true) {
    if (!visit(idx)) return false;
    std::size_t k = r;
    while (k > 0 && idx[k - 1] == n - r + (k - 1)) --k;
    if (k == 0) return true;
    ++idx[k - 1];
    for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Eigen::MatrixXd build_q_minus_i(const PeerSpace& space) {
  const std::size_t rows = space.size();
  const std::size_t cols = rows == 0 ? 0 : space.likelihood(0).size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    const std::optional<ProbVector>& post = space.posterior(k);
    if (!post) continue;
    for (std::size_t t = 0; t < cols; ++t) q(k, t) = (*post)[t];
  }
  return q;
}

Eigen::MatrixXd build_q_minus_i(const World& world, std::size_t provider,
                                std::uint64_t cap) {
  return build_q_minus_i(PeerSpace(world, provider, cap));
}

Eigen::MatrixXd build_p_minus_i(const PeerSpace& space) {
  const std::size_t rows = space.size();
  const std::size_t cols = rows == 0 ? 0 : space.likelihood(0).size();
  Eigen::MatrixXd p(rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto lik = space.likelihood(k);
    for (std::size_t t = 0; t < cols; ++t) p(k, t) = lik[t];
  }
  return p;
}

Eigen::MatrixXd build_p_minus_i(const World& world, std::size_t provider,
                                std::uint64_t cap) {
  return build_p_minus_i(PeerSpace(world, provider, cap));
}

Eigen::MatrixXd point_posterior_matrix(const World& world,
                                       std::size_t provider) {
  const std::size_t points = world.provider(provider).likelihood.num_points();
  const std::size_t m = world.num_params();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(points, m);
  for (std::size_t d = 0; d < points; ++d) {
    std::optional<ProbVector> post;
    try {
      post = point_posterior(world, provider, d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kZeroEvidence) throw;
      continue;
    }
    for (std::size_t t = 0; t < m; ++t) g(d, t) = (*post)[t];
  }
  return g;
}

std::size_t matrix_rank(const Eigen::MatrixXd& matrix, double tol) {
  const Eigen::VectorXd sv = SingularValues(matrix);
  if (sv.size() == 0 || sv.maxCoeff() <= 0.0) return 0;
  const double cutoff = tol * sv.maxCoeff();
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > cutoff) ++rank;
  }
  return rank;
}

std::size_t kruskal_rank(const Eigen::MatrixXd& matrix, double tol) {
  const auto cols = static_cast<std::size_t>(matrix.cols());
  if (cols > kMaxKruskalColumns) {
    Fail(ErrorKind::kTooManyColumns,
         std::to_string(cols) + " columns exceed the Kruskal-rank limit of " +
             std::to_string(kMaxKruskalColumns));
  }
  Eigen::MatrixXd unit = matrix;
  for (std::size_t c = 0; c < cols; ++c) {
    const double norm = matrix.col(c).norm();
    if (!(norm > 0.0)) return 0;
    unit.col(c) /= norm;
  }
  std::size_t krank = 0;
  for (std::size_t r = 1; r <= cols; ++r) {
    const bool all_independent =
        AllSubsets(cols, r, [&](const std::vector<std::size_t>& subset) {
          // More columns than rows are always dependent.
          if (static_cast<Eigen::Index>(r) > unit.rows()) return false;
          Eigen::MatrixXd sub(unit.rows(), r);
          for (std::size_t k = 0; k < r; ++k) sub.col(k) = unit.col(subset[k]);
          // Spanned volume as the product of singular values; squaring into
          // a Gram determinant would lose half the digits.
          return SingularValues(sub).prod() > tol;
        });
    if (!all_independent) break;
    krank = r;
  }
  return krank;
}

double smallest_singular_value(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < matrix.cols() || matrix.size() == 0) return 0.0;
  return SingularValues(matrix).minCoeff();
}

bool corollary_check(const World& world, std::size_t provider) {
  double total = 1.0;
  for (std::size_t j = 0; j < world.num_providers(); ++j) {
    if (j == provider) continue;
    const auto krank =
        static_cast<double>(kruskal_rank(point_posterior_matrix(world, j)));
    total += (krank - 1.0) * world.provider(j).n_points;
  }
  return total >= static_cast<double>(world.num_params());
}

namespace {

double AlphaFromSingular(double e, const World& world,
                         const PmiBounds& bounds) {
  return e * world.budget() /
         (static_cast<double>(world.num_providers()) *
          (bounds.upper - bounds.lower));
}

}  // namespace

double alpha_bound(const World& world, std::size_t provider,
                   const PmiBounds& bounds, std::uint64_t cap) {
  if (!(bounds.lower < bounds.upper)) {
    Fail(ErrorKind::kDegenerateBounds, "L must be below R");
  }
  const double e = smallest_singular_value(build_p_minus_i(world, provider, cap));
  return AlphaFromSingular(e, world, bounds);
}

std::string_view VerdictName(Verdict verdict) {
  return verdict == Verdict::kCertifiedSensitive ? "certified_sensitive"
                                                 : "inconclusive";
}

AuditReport audit_sensitivity(const World& world, const PmiBounds& bounds,
                              std::uint64_t cap) {
  if (!(bounds.lower < bounds.upper)) {
    Fail(ErrorKind::kDegenerateBounds, "L must be below R");
  }
  AuditReport report;
  bool all_full_rank = true;
  bool all_krank = true;
  for (std::size_t i = 0; i < world.num_providers(); ++i) {
    const PeerSpace space(world, i, cap);
    ProviderAudit audit;
    audit.q_rank = matrix_rank(build_q_minus_i(space));
    audit.q_full_rank = audit.q_rank == world.num_params();
    audit.krank_condition_met = corollary_check(world, i);
    audit.smallest_singular_value =
        smallest_singular_value(build_p_minus_i(space));
    audit.alpha_lower_bound =
        AlphaFromSingular(audit.smallest_singular_value, world, bounds);
    all_full_rank = all_full_rank && audit.q_full_rank;
    all_krank = all_krank && audit.krank_condition_met;
    report.providers.push_back(audit);
  }
  report.verdict = (all_full_rank || all_krank) ? Verdict::kCertifiedSensitive
                                                : Verdict::kInconclusive;
  return report;
}

HScanReport h_distinguishability_scan(
    const ExpFamily& family, const ConjParams& p0,
    const std::vector<ConjParams>& candidates_i,
    const std::vector<ConjParams>& contexts_mi, double tol) {
  // log h for every (candidate, context), computed once.
  std::vector<std::vector<double>> log_h(candidates_i.size());
  for (std::size_t a = 0; a < candidates_i.size(); ++a) {
    for (const ConjParams& ctx : contexts_mi) {
      log_h[a].push_back(std::log(h_value(family, candidates_i[a], ctx, p0)));
    }
  }
  HScanReport report;
  for (std::size_t a = 0; a < candidates_i.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates_i.size(); ++b) {
      if (candidates_i[a] == candidates_i[b]) continue;
      CandidatePairResult result{a, b, false, 0.0};
      for (std::size_t c = 0; c < contexts_mi.size(); ++c) {
        result.max_log_gap =
            std::max(result.max_log_gap, std::abs(log_h[a][c] - log_h[b][c]));
      }
      result.distinguishable = result.max_log_gap > tol;
      if (!result.distinguishable) {
        report.indistinguishable.emplace_back(a, b);
        report.all_distinguishable = false;
      }
      report.pairs.push_back(result);
    }
  }
  return report;
}

std::vector<ConjParams> beta_four_neighbor_contexts(const BernoulliBeta& family,
                                                    double successes,
                                                    double failures) {
  return {family.posterior(successes, failures),
          family.posterior(successes + 1.0, failures),
          family.posterior(successes, failures + 1.0),
          family.posterior(successes + 1.0, failures + 1.0)};
}

}  // namespace peerdata
