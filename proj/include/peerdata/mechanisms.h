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

// Payment rules: one-time log-PMI, Brier score, and the multi-day
// f-mutual-information-gain score, plus the convex pairs the latter uses.

#ifndef PEERDATA_MECHANISMS_H_
#define PEERDATA_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peerdata/bayes_core.h"
#include "peerdata/expfam.h"
#include "peerdata/pmi.h"

namespace peerdata {

// A differentiable convex f with derivative and convex conjugate. Ranges are
// over x >= 0.
struct ConvexPair {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::function<double(double)> fstar;
  Interval fprime_range;
  Interval fstar_range;
  // lim f'(x) as x -> infinity; used when the cross-day PMI is zero.
  double fprime_limit = 0.0;

  // [min f' - max f*, max f' - min f*].
  Interval score_range() const;
};

// f(x) = ln(1 + e^x), f'(x) = sigmoid(x), f*(y) = y ln y + (1-y) ln(1-y).
// Registered as is: f(1) != 0, which shifts f* by a constant and leaves the
// score's incentives untouched.
const ConvexPair& logistic_pair();
// Throws InvalidArgument for unknown names.
const ConvexPair& convex_pair_by_name(std::string_view name);

// Per-provider result of any payment rule.
struct ProviderOutcome {
  double score = 0.0;
  double payment = 0.0;
  bool in_support = false;
};

class PaymentVector {
 public:
  // Checks individual rationality and budget feasibility; throws
  // BudgetViolation otherwise.
  PaymentVector(std::vector<ProviderOutcome> outcomes, double budget,
                Interval score_range);

  std::size_t size() const { return outcomes_.size(); }
  const ProviderOutcome& operator[](std::size_t i) const {
    return outcomes_[i];
  }
  const std::vector<ProviderOutcome>& outcomes() const { return outcomes_; }
  std::vector<double> payments() const;
  std::vector<double> scores() const;
  double budget() const { return budget_; }
  // [L, R] used for normalization.
  Interval score_range() const { return score_range_; }
  // Left-to-right sum of payments.
  double total() const;

 private:
  std::vector<ProviderOutcome> outcomes_;
  double budget_;
  Interval score_range_;
};

// The largest per-provider cap c <= budget / n such that adding c to itself
// n times in floating point stays within budget. Any payments in [0, c] then
// sum to at most budget exactly.
double budget_share(double budget, std::size_t n);

// (score - lower) / (upper - lower) * share, with the score required to lie
// in [lower, upper].
double normalize_payment(double score, Interval range, double share);

// One provider under the one-time rule. report_post is nullopt when the
// report is impossible under every parameter, peer_post when the peers'
// reports are; both count as out of support and pay 0.
ProviderOutcome one_time_outcome(const std::optional<ProbVector>& report_post,
                                 const std::optional<ProbVector>& peer_post,
                                 const ProbVector& prior,
                                 const PmiBounds& bounds, double share);

// Pays B/n * (log PMI - L) / (R - L) in support and 0 otherwise. Throws
// InternalBracketViolation when a score falls outside [L, R].
PaymentVector one_time_payments(const World& world,
                                std::span<const Dataset> reports,
                                const PmiBounds& bounds);
PaymentVector one_time_payments(const World& world,
                                std::span<const Dataset> reports,
                                const PmiBounds& bounds, double budget);

// Posterior of the reports of everyone except `provider`, or nullopt when any
// of them is impossible or they contradict each other.
std::optional<ProbVector> peer_posterior(const World& world,
                                         std::span<const Dataset> reports,
                                         std::size_t provider);

// 1 - (1/K) sum_k (predictive[k] - [k == realized])^2 over the K peer
// profiles of `space`. `realized` is nullopt when the peers' reports are not
// a profile of the space.
double brier_score(std::span<const double> predictive,
                   std::optional<std::size_t> realized);

// Index of `peers` (a full-length profile, own slot ignored) in the space.
std::optional<std::size_t> find_profile(const PeerSpace& space,
                                        std::span<const Dataset> peers);

// Brier rule: r_i = B * s_i / n. An impossible report scores 0.
PaymentVector brier_payments(const World& world,
                             std::span<const Dataset> reports,
                             std::uint64_t cap = kDefaultEnumerationCap);

struct DayScores {
  std::vector<double> scores;
  std::vector<bool> in_support;
};

// Score from the two PMIs of one provider: f'(1/cross) - f*(f'(1/same)).
// Pass 0 for a PMI whose supports are disjoint. A zero same-day PMI scores
// the range minimum; a zero cross-day PMI uses f'(infinity).
double multi_time_score(double pmi_cross, double pmi_same,
                        const ConvexPair& pair);

// Scores for day t-1 reports from PMI against the peers' day t-1 and day t
// reports.
DayScores multi_time_scores(const World& world,
                            std::span<const Dataset> reports_prev,
                            std::span<const Dataset> reports_curr,
                            const ConvexPair& pair);

// The same scores for an exponential-family model, with each report given by
// its posterior parameters.
DayScores multi_time_scores_expfam(const ExpFamily& family,
                                   std::span<const ConjParams> reports_prev,
                                   std::span<const ConjParams> reports_curr,
                                   const ConvexPair& pair);

// B/n * (s - L) / (R - L) with [L, R] the pair's analytic score range.
PaymentVector multi_time_payments(const DayScores& scores, double budget_prev,
                                  Interval score_range);

enum class LastDayRule { kMechanism1, kEqualSplit };

std::string_view LastDayRuleName(LastDayRule rule);
LastDayRule ParseLastDayRule(std::string_view name);

// Pays days 1..T-1 from each day's scores against the next day's reports and
// day T by `last_day_rule`. bounds is required for kMechanism1.
std::vector<PaymentVector> run_mechanism_schedule(
    const World& world, int days,
    const std::vector<std::vector<Dataset>>& reports,
    std::span<const double> budgets, const ConvexPair& pair,
    LastDayRule last_day_rule, const std::optional<PmiBounds>& bounds = {});

// Equal split of budget among n providers (the equal_split last day).
PaymentVector equal_split_payments(std::size_t n, double budget);

}  // namespace peerdata

#endif  // PEERDATA_MECHANISMS_H_
