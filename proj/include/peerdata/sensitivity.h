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

// Structural sensitivity audits: rank of the peer-posterior matrix Q_-i,
// Kruskal ranks of the point-posterior matrices G_j, the smallest singular
// value of the peer-likelihood matrix P_-i, and h-function scans for
// exponential families.

#ifndef PEERDATA_SENSITIVITY_H_
#define PEERDATA_SENSITIVITY_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "peerdata/bayes_core.h"
#include "peerdata/expfam.h"
#include "peerdata/pmi.h"

namespace peerdata {

inline constexpr double kRankTolerance = 1e-10;
inline constexpr std::size_t kMaxKruskalColumns = 12;

// Rows: every peer profile D_-i; columns: theta; entries p(theta | D_-i).
// Profiles impossible under every theta give zero rows.
Eigen::MatrixXd build_q_minus_i(const World& world, std::size_t provider,
                                std::uint64_t cap = kDefaultEnumerationCap);
Eigen::MatrixXd build_q_minus_i(const PeerSpace& space);

// Rows: every peer profile D_-i; columns: theta; entries p(D_-i | theta).
Eigen::MatrixXd build_p_minus_i(const World& world, std::size_t provider,
                                std::uint64_t cap = kDefaultEnumerationCap);
Eigen::MatrixXd build_p_minus_i(const PeerSpace& space);

// G_j: rows are the provider's point values, entries p(theta | d). Points
// impossible under every theta give zero rows.
Eigen::MatrixXd point_posterior_matrix(const World& world,
                                       std::size_t provider);

// Number of singular values above tol * sigma_max.
std::size_t matrix_rank(const Eigen::MatrixXd& matrix,
                        double tol = kRankTolerance);

// Largest r such that every r columns are linearly independent; 0 when a
// column is zero. A subset counts as independent when the volume it spans
// after scaling each column to unit length exceeds tol.
std::size_t kruskal_rank(const Eigen::MatrixXd& matrix,
                         double tol = kRankTolerance);

// Smallest of the min(rows, cols) singular values, or 0 when rows < cols.
double smallest_singular_value(const Eigen::MatrixXd& matrix);

// sum_{j != i} (krank(G_j) - 1) * N_j + 1 >= m.
bool corollary_check(const World& world, std::size_t provider);

// e_i * B / (n (R - L)) with e_i the smallest singular value of P_-i.
double alpha_bound(const World& world, std::size_t provider,
                   const PmiBounds& bounds,
                   std::uint64_t cap = kDefaultEnumerationCap);

enum class Verdict { kCertifiedSensitive, kInconclusive };
std::string_view VerdictName(Verdict verdict);

struct ProviderAudit {
  std::size_t q_rank = 0;
  bool q_full_rank = false;
  bool krank_condition_met = false;
  double smallest_singular_value = 0.0;
  double alpha_lower_bound = 0.0;
};

struct AuditReport {
  std::vector<ProviderAudit> providers;
  // Certified when every provider has a full-rank Q_-i, or every provider
  // meets the Kruskal-rank counting condition.
  Verdict verdict = Verdict::kInconclusive;
};

AuditReport audit_sensitivity(const World& world, const PmiBounds& bounds,
                              std::uint64_t cap = kDefaultEnumerationCap);

struct CandidatePairResult {
  std::size_t first = 0;
  std::size_t second = 0;
  bool distinguishable = false;
  // max over contexts of |log h(first) - log h(second)|.
  double max_log_gap = 0.0;
};

struct HScanReport {
  std::vector<CandidatePairResult> pairs;
  std::vector<std::pair<std::size_t, std::size_t>> indistinguishable;
  // True when every pair is distinguished by some scanned context. This is a
  // statement about the scanned grid only.
  bool all_distinguishable = true;
};

// For every pair of distinct candidate posteriors, whether some peer context
// gives h values that differ by more than tol in relative terms (compared in
// log space, so the test does not depend on the scale of h).
HScanReport h_distinguishability_scan(
    const ExpFamily& family, const ConjParams& p0,
    const std::vector<ConjParams>& candidates_i,
    const std::vector<ConjParams>& contexts_mi, double tol = kRankTolerance);

// Peer contexts with (a, b), (a+1, b), (a, b+1), (a+1, b+1) observed
// successes and failures.
std::vector<ConjParams> beta_four_neighbor_contexts(const BernoulliBeta& family,
                                                    double successes,
                                                    double failures);

}  // namespace peerdata

#endif  // PEERDATA_SENSITIVITY_H_
