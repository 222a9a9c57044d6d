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

#include "peerdata/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "peerdata/error.h"

namespace peerdata {
namespace {

// Scores may leave the analytic range by a few ulps; anything further is a
// bug.
constexpr double kRangeSlack = 1e-12;

double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

ConvexPair MakeLogistic() {
  ConvexPair pair;
  pair.name = "logistic";
  pair.f = [](double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  pair.fprime = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  pair.fstar = [](double y) { return XLogX(y) + XLogX(1.0 - y); };
  pair.fprime_range = {0.5, 1.0};
  pair.fstar_range = {-std::numbers::ln2, 0.0};
  pair.fprime_limit = 1.0;
  return pair;
}

std::string RangeText(Interval range) {
  return "[" + std::to_string(range.lower) + ", " +
         std::to_string(range.upper) + "]";
}

void CheckReportCount(const World& world, std::span<const Dataset> reports) {
  if (reports.size() != world.num_providers()) {
    Fail(ErrorKind::kDimensionMismatch,
         "expected " + std::to_string(world.num_providers()) +
             " reports, got " + std::to_string(reports.size()));
  }
}

}  // namespace

Interval ConvexPair::score_range() const {
  return {fprime_range.lower - fstar_range.upper,
          fprime_range.upper - fstar_range.lower};
}

const ConvexPair& logistic_pair() {
  static const ConvexPair pair = MakeLogistic();
  return pair;
}

const ConvexPair& convex_pair_by_name(std::string_view name) {
  if (name == "logistic") return logistic_pair();
  Fail(ErrorKind::kInvalidArgument,
       "unknown convex pair '" + std::string(name) + "'");
}

PaymentVector::PaymentVector(std::vector<ProviderOutcome> outcomes,
                             double budget, Interval score_range)
    : outcomes_(std::move(outcomes)),
      budget_(budget),
      score_range_(score_range) {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    const double r = outcomes_[i].payment;
    if (!std::isfinite(r) || r < 0.0) {
      Fail(ErrorKind::kBudgetViolation,
           "payment " + std::to_string(r) + " to provider " +
               std::to_string(i) + " is negative or not finite");
    }
  }
  if (total() > budget_) {
    Fail(ErrorKind::kBudgetViolation,
         "payments total " + std::to_string(total()) + " exceeds budget " +
             std::to_string(budget_));
  }
}

std::vector<double> PaymentVector::payments() const {
  std::vector<double> out;
  for (const ProviderOutcome& o : outcomes_) out.push_back(o.payment);
  return out;
}

std::vector<double> PaymentVector::scores() const {
  std::vector<double> out;
  for (const ProviderOutcome& o : outcomes_) out.push_back(o.score);
  return out;
}

double PaymentVector::total() const {
  double sum = 0.0;
  for (const ProviderOutcome& o : outcomes_) sum += o.payment;
  return sum;
}

double budget_share(double budget, std::size_t n) {
  if (n == 0) Fail(ErrorKind::kInvalidArgument, "no providers");
  if (!std::isfinite(budget) || budget < 0.0) {
    Fail(ErrorKind::kInvalidArgument, "budget must be finite and nonnegative");
  }
  double share = budget / static_cast<double>(n);
  auto sum_of = [n](double c) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += c;
    return sum;
  };
  while (share > 0.0 && sum_of(share) > budget) {
    share = std::nextafter(share, 0.0);
  }
  return share;
}

double normalize_payment(double score, Interval range, double share) {
  if (!(range.lower < range.upper)) {
    Fail(ErrorKind::kDegenerateRange, "empty score range " + RangeText(range));
  }
  if (!(score >= range.lower && score <= range.upper)) {
    Fail(ErrorKind::kInternalBracketViolation,
         "score " + std::to_string(score) + " outside " + RangeText(range));
  }
  return share * ((score - range.lower) / (range.upper - range.lower));
}

ProviderOutcome one_time_outcome(const std::optional<ProbVector>& report_post,
                                 const std::optional<ProbVector>& peer_post,
                                 const ProbVector& prior,
                                 const PmiBounds& bounds, double share) {
  if (!report_post || !peer_post ||
      !in_support(*report_post, *peer_post, prior)) {
    return {bounds.lower, 0.0, false};
  }
  const double score = log_pmi_score(*report_post, *peer_post, prior);
  return {score,
          normalize_payment(score, {bounds.lower, bounds.upper}, share), true};
}

std::optional<ProbVector> peer_posterior(const World& world,
                                         std::span<const Dataset> reports,
                                         std::size_t provider) {
  CheckReportCount(world, reports);
  std::vector<ProbVector> posts;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    if (j == provider) continue;
    std::optional<ProbVector> post =
        try_dataset_posterior(world, j, reports[j]);
    if (!post) return std::nullopt;
    posts.push_back(*std::move(post));
  }
  return try_joint_posterior(world.prior(), posts);
}

PaymentVector one_time_payments(const World& world,
                                std::span<const Dataset> reports,
                                const PmiBounds& bounds, double budget) {
  CheckReportCount(world, reports);
  if (!(bounds.lower < bounds.upper)) {
    Fail(ErrorKind::kDegenerateBounds, "L must be below R");
  }
  const double share = budget_share(budget, reports.size());
  std::vector<ProviderOutcome> outcomes;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    outcomes.push_back(one_time_outcome(
        try_dataset_posterior(world, i, reports[i]),
        peer_posterior(world, reports, i), world.prior(), bounds, share));
  }
  return PaymentVector(std::move(outcomes), budget,
                       {bounds.lower, bounds.upper});
}

PaymentVector one_time_payments(const World& world,
                                std::span<const Dataset> reports,
                                const PmiBounds& bounds) {
  return one_time_payments(world, reports, bounds, world.budget());
}

double brier_score(std::span<const double> predictive,
                   std::optional<std::size_t> realized) {
  if (predictive.empty()) {
    Fail(ErrorKind::kInvalidArgument, "empty peer profile space");
  }
  double squared = 0.0;
  for (std::size_t k = 0; k < predictive.size(); ++k) {
    const double hit = (realized && *realized == k) ? 1.0 : 0.0;
    const double diff = predictive[k] - hit;
    squared += diff * diff;
  }
  // The squared error is at most 2 and K >= 2 whenever it can exceed 1, so
  // only rounding can push this below zero.
  return std::max(0.0,
                  1.0 - squared / static_cast<double>(predictive.size()));
}

std::optional<std::size_t> find_profile(const PeerSpace& space,
                                        std::span<const Dataset> peers) {
  for (std::size_t k = 0; k < space.size(); ++k) {
    const std::vector<Dataset>& profile = space.profile(k);
    if (profile.size() != peers.size()) return std::nullopt;
    bool same = true;
    for (std::size_t j = 0; j < peers.size() && same; ++j) {
      if (j != space.provider() && profile[j] != peers[j]) same = false;
    }
    if (same) return k;
  }
  return std::nullopt;
}

PaymentVector brier_payments(const World& world,
                             std::span<const Dataset> reports,
                             std::uint64_t cap) {
  CheckReportCount(world, reports);
  const double share = budget_share(world.budget(), reports.size());
  std::vector<ProviderOutcome> outcomes;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const PeerSpace space(world, i, cap);
    const std::optional<ProbVector> post =
        try_dataset_posterior(world, i, reports[i]);
    if (!post) {
      outcomes.push_back({0.0, 0.0, false});
      continue;
    }
    const double score =
        brier_score(space.predictive(*post), find_profile(space, reports));
    outcomes.push_back({score, share * score, true});
  }
  return PaymentVector(std::move(outcomes), world.budget(), {0.0, 1.0});
}

double multi_time_score(double pmi_cross, double pmi_same,
                        const ConvexPair& pair) {
  const Interval range = pair.score_range();
  if (!(pmi_same > 0.0)) return range.lower;
  const double first =
      pmi_cross > 0.0 ? pair.fprime(1.0 / pmi_cross) : pair.fprime_limit;
  const double score = first - pair.fstar(pair.fprime(1.0 / pmi_same));
  if (score < range.lower - kRangeSlack || score > range.upper + kRangeSlack) {
    Fail(ErrorKind::kInternalBracketViolation,
         "score " + std::to_string(score) + " outside " + RangeText(range));
  }
  return std::clamp(score, range.lower, range.upper);
}

DayScores multi_time_scores(const World& world,
                            std::span<const Dataset> reports_prev,
                            std::span<const Dataset> reports_curr,
                            const ConvexPair& pair) {
  CheckReportCount(world, reports_prev);
  CheckReportCount(world, reports_curr);
  const ProbVector& prior = world.prior();
  DayScores out;
  for (std::size_t i = 0; i < reports_prev.size(); ++i) {
    const std::optional<ProbVector> own =
        try_dataset_posterior(world, i, reports_prev[i]);
    const std::optional<ProbVector> peers_prev =
        peer_posterior(world, reports_prev, i);
    const std::optional<ProbVector> peers_curr =
        peer_posterior(world, reports_curr, i);
    const bool same_ok = own && peers_prev && in_support(*own, *peers_prev, prior);
    const double same = same_ok ? pmi_finite(*own, *peers_prev, prior) : 0.0;
    const bool cross_ok =
        own && peers_curr && in_support(*own, *peers_curr, prior);
    const double cross = cross_ok ? pmi_finite(*own, *peers_curr, prior) : 0.0;
    out.scores.push_back(multi_time_score(cross, same, pair));
    out.in_support.push_back(same_ok);
  }
  return out;
}

DayScores multi_time_scores_expfam(const ExpFamily& family,
                                   std::span<const ConjParams> reports_prev,
                                   std::span<const ConjParams> reports_curr,
                                   const ConvexPair& pair) {
  if (reports_prev.size() != reports_curr.size()) {
    Fail(ErrorKind::kDimensionMismatch, "day report lists differ in length");
  }
  const ConjParams p0 = family.prior();
  auto peers_of = [&](std::span<const ConjParams> reports, std::size_t i) {
    std::vector<ConjParams> others;
    for (std::size_t j = 0; j < reports.size(); ++j) {
      if (j != i) others.push_back(reports[j]);
    }
    return family.pool(others, p0);
  };
  DayScores out;
  for (std::size_t i = 0; i < reports_prev.size(); ++i) {
    const double same =
        pmi_expfam(family, reports_prev[i], peers_of(reports_prev, i), p0);
    const double cross =
        pmi_expfam(family, reports_prev[i], peers_of(reports_curr, i), p0);
    out.scores.push_back(multi_time_score(cross, same, pair));
    out.in_support.push_back(same > 0.0);
  }
  return out;
}

PaymentVector multi_time_payments(const DayScores& scores, double budget_prev,
                                  Interval score_range) {
  if (!(score_range.lower < score_range.upper)) {
    Fail(ErrorKind::kDegenerateRange,
         "empty score range " + RangeText(score_range));
  }
  const double share = budget_share(budget_prev, scores.scores.size());
  std::vector<ProviderOutcome> outcomes;
  for (std::size_t i = 0; i < scores.scores.size(); ++i) {
    const double s = scores.scores[i];
    outcomes.push_back({s, normalize_payment(s, score_range, share),
                        scores.in_support[i]});
  }
  return PaymentVector(std::move(outcomes), budget_prev, score_range);
}

std::string_view LastDayRuleName(LastDayRule rule) {
  return rule == LastDayRule::kMechanism1 ? "mechanism1" : "equal_split";
}

LastDayRule ParseLastDayRule(std::string_view name) {
  if (name == "mechanism1") return LastDayRule::kMechanism1;
  if (name == "equal_split") return LastDayRule::kEqualSplit;
  Fail(ErrorKind::kInvalidArgument,
       "unknown last_day_rule '" + std::string(name) + "'");
}

PaymentVector equal_split_payments(std::size_t n, double budget) {
  const double share = budget_share(budget, n);
  std::vector<ProviderOutcome> outcomes(n, ProviderOutcome{0.0, share, true});
  return PaymentVector(std::move(outcomes), budget, {0.0, 0.0});
}

std::vector<PaymentVector> run_mechanism_schedule(
    const World& world, int days,
    const std::vector<std::vector<Dataset>>& reports,
    std::span<const double> budgets, const ConvexPair& pair,
    LastDayRule last_day_rule, const std::optional<PmiBounds>& bounds) {
  if (days < 1) Fail(ErrorKind::kInvalidArgument, "days must be >= 1");
  const auto t_count = static_cast<std::size_t>(days);
  if (reports.size() != t_count || budgets.size() != t_count) {
    Fail(ErrorKind::kDimensionMismatch,
         "need one report list and one budget per day");
  }
  std::vector<PaymentVector> ledger;
  for (std::size_t t = 0; t + 1 < t_count; ++t) {
    const DayScores scores =
        multi_time_scores(world, reports[t], reports[t + 1], pair);
    ledger.push_back(
        multi_time_payments(scores, budgets[t], pair.score_range()));
  }
  const std::vector<Dataset>& last = reports.back();
  if (last_day_rule == LastDayRule::kMechanism1) {
    if (!bounds) {
      Fail(ErrorKind::kInvalidArgument,
           "the mechanism1 last-day rule needs score bounds");
    }
    ledger.push_back(one_time_payments(world, last, *bounds, budgets.back()));
  } else {
    CheckReportCount(world, last);
    ledger.push_back(equal_split_payments(last.size(), budgets.back()));
  }
  return ledger;
}

}  // namespace peerdata
