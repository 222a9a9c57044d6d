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

// Strategic audits. Expectations are exact sums over the peer profile space
// against truthful peers; the seeded sampler is only used to produce example
// multi-day ledgers.

#ifndef PEERDATA_SIM_H_
#define PEERDATA_SIM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peerdata/bayes_core.h"
#include "peerdata/expfam.h"
#include "peerdata/mechanisms.h"
#include "peerdata/pmi.h"

namespace peerdata {

// Reports equal within this are payment-equivalent, and posteriors equal
// within it are the same posterior.
inline constexpr double kTieTolerance = 1e-12;

class Strategy {
 public:
  enum class Kind {
    kTruthful,
    kReplicate,
    kWithhold,
    kPermuteValues,
    kConstant,
    kCustom
  };

  static Strategy Truthful();
  // Appends the first k points again (cyclically when k exceeds N).
  static Strategy Replicate(int k);
  // Drops the last k points.
  static Strategy Withhold(int k);
  // Replaces every point d by value_map[d].
  static Strategy PermuteValues(std::vector<std::size_t> value_map);
  static Strategy Constant(Dataset report);
  // Looks the true dataset up; unknown datasets are reported truthfully.
  static Strategy Custom(std::map<Dataset, Dataset> table);

  Kind kind() const { return kind_; }
  int count() const { return count_; }

  // Report for a provider whose point alphabet has `alphabet` values. Throws
  // InvalidArgument if the result leaves the alphabet.
  Dataset Apply(const Dataset& truth, std::size_t alphabet) const;
  // Same for real-valued points; only truthful, replicate and withhold apply.
  std::vector<double> ApplyValues(const std::vector<double>& truth) const;

  std::string Describe() const;

 private:
  Kind kind_ = Kind::kTruthful;
  int count_ = 0;
  std::vector<std::size_t> value_map_;
  Dataset constant_;
  std::map<Dataset, Dataset> table_;
};

enum class MechanismKind { kOneTime, kBrier, kMultiTime };
std::string_view MechanismKindName(MechanismKind kind);
MechanismKind ParseMechanismKind(std::string_view name);

struct Mechanism {
  MechanismKind kind = MechanismKind::kOneTime;
  // One-time rule only. Must bracket every report the audit will try; see
  // audit_bounds.
  PmiBounds bounds;
  // Multi-time rule only; null means the logistic pair.
  const ConvexPair* pair = nullptr;

  const ConvexPair& convex_pair() const;
};

// bounds_finite with every provider allowed n_points + slack points, so that
// misreports up to that size stay inside [L, R].
PmiBounds audit_bounds(const World& world, int slack = 1);

// Exact expectations for one provider against truthful peers.
class ReportEvaluator {
 public:
  ReportEvaluator(const World& world, std::size_t provider, Mechanism mechanism,
                  std::uint64_t cap = kDefaultEnumerationCap);

  // Expected payment (one-time, Brier) or expected day score (multi-time)
  // of reporting `report` while holding `truth`.
  double expected_value(const Dataset& truth, const Dataset& report) const;
  double expected_value(const ProbVector& truth_post,
                        const std::optional<ProbVector>& report_post) const;

  // Expected payment under every mechanism; multi-time scores are mapped
  // through the pair's score range and the world budget.
  double expected_payment(const Dataset& truth, const Dataset& report) const;

  const PeerSpace& space() const { return space_; }
  const World& world() const { return world_; }
  std::size_t provider() const { return provider_; }
  const Mechanism& mechanism() const { return mechanism_; }

 private:
  double OneTime(std::span<const double> cond,
                 const std::optional<ProbVector>& report_post) const;
  double Brier(std::span<const double> cond,
               const std::optional<ProbVector>& report_post) const;
  double MultiTime(std::span<const double> cond,
                   const std::optional<ProbVector>& report_post) const;

  World world_;
  std::size_t provider_;
  Mechanism mechanism_;
  PeerSpace space_;
  double share_;
};

// Convenience wrapper around ReportEvaluator::expected_payment.
double expected_payment(const World& world, const Mechanism& mechanism,
                        std::size_t provider, const Dataset& truth,
                        const Dataset& report,
                        std::uint64_t cap = kDefaultEnumerationCap);

// Expected day score of the multi-time rule computed from the full joint
// distribution of both days' peer profiles, without using day independence
// to factor the first term. Used to cross-check ReportEvaluator.
double expected_multi_day_score_joint(const World& world, std::size_t provider,
                                      const Dataset& truth,
                                      const Dataset& report,
                                      const ConvexPair& pair,
                                      std::uint64_t cap = kDefaultEnumerationCap);

struct ReportSpace {
  bool same_size_only = false;
  // Largest report size scanned when same_size_only is false; negative means
  // n_points + 1.
  int max_size = -1;

  static ReportSpace SameSize() { return {true, -1}; }
  static ReportSpace AllSizesUpTo(int k) { return {false, k}; }
};

std::vector<Dataset> report_candidates(const World& world, std::size_t provider,
                                       const Dataset& truth,
                                       const ReportSpace& space);

struct CandidateValue {
  Dataset report;
  double value = 0.0;
  // truthful value minus this value.
  double gap = 0.0;
  bool posterior_changing = false;
};

struct GapReport {
  double truthful_value = 0.0;
  // Best value among reports other than the true tuple.
  double best_misreport_value = 0.0;
  double gap = 0.0;
  // truthful value minus the best posterior-changing report's value;
  // +infinity when no scanned report changes the posterior.
  double posterior_changing_min_gap = 0.0;
  // Largest KL-identity residual over scanned reports that meet its support
  // condition; 0 when none does.
  double kl_identity_residual = 0.0;
  std::vector<Dataset> argmax_reports;
  // Reports other than the true tuple that change the posterior yet are worth
  // the truthful value within kTieTolerance.
  std::vector<Dataset> payment_equivalent;
  std::vector<CandidateValue> candidates;
};

GapReport best_response_scan(const ReportEvaluator& evaluator,
                             const Dataset& truth,
                             const ReportSpace& space = {},
                             std::uint64_t cap = kDefaultEnumerationCap);
GapReport best_response_scan(const World& world, const Mechanism& mechanism,
                             std::size_t provider, const Dataset& truth,
                             const ReportSpace& space = {},
                             std::uint64_t cap = kDefaultEnumerationCap);

struct KlCheck {
  double score_gap = 0.0;  // E[log PMI(truth)] - E[log PMI(report)]
  double kl = 0.0;         // KL(p(.|truth) || p~(.|report))
  double residual = 0.0;
};

// Throws SupportViolation when some peer profile with p(D_-i | truth) > 0 has
// zero probability under the report's predictive.
KlCheck kl_gap_check(const PeerSpace& space, const World& world,
                     const Dataset& truth, const Dataset& report);
KlCheck kl_gap_check(const World& world, std::size_t provider,
                     const Dataset& truth, const Dataset& report,
                     std::uint64_t cap = kDefaultEnumerationCap);

struct MultiDayLedger {
  std::vector<std::vector<Dataset>> truths;   // per day, per provider
  std::vector<std::vector<Dataset>> reports;  // per day, per provider
  std::vector<PaymentVector> payments;        // per day
};

struct MultiDayConfig {
  int days = 1;
  std::vector<double> budgets;  // one per day
  const ConvexPair* pair = nullptr;
  LastDayRule last_day_rule = LastDayRule::kEqualSplit;
  // Needed for the mechanism1 last day.
  std::optional<PmiBounds> bounds;
  std::uint64_t seed = 0;
};

// Draws theta and every provider's dataset afresh each day, applies the
// strategies and pays through run_mechanism_schedule.
MultiDayLedger run_multi_day(const World& world,
                             const std::vector<Strategy>& strategies,
                             const MultiDayConfig& config);

struct ExpFamLedger {
  std::vector<std::vector<std::vector<double>>> truths;  // day, provider
  std::vector<std::vector<std::vector<double>>> reports;
  std::vector<std::vector<ConjParams>> report_params;
  std::vector<PaymentVector> payments;
};

// Same for an exponential-family world. The last day is always an equal
// split.
ExpFamLedger run_multi_day_expfam(const ExpFamily& family,
                                  const std::vector<int>& dataset_sizes,
                                  const std::vector<Strategy>& strategies,
                                  const MultiDayConfig& config);

// Expected day score when holding posterior `truth`, reporting `report`, and
// facing truthful peers with `peer_points` points in total. Gaussian
// expectations use adaptive quadrature; Beta expectations are exact sums.
double expected_multi_day_score_expfam(const ExpFamily& family, int peer_points,
                                       const ConjParams& truth,
                                       const ConjParams& report,
                                       const ConvexPair& pair);

}  // namespace peerdata

#endif  // PEERDATA_SIM_H_
