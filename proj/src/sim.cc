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

#include "peerdata/sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "peerdata/error.h"

namespace peerdata {
namespace {

using Rng = std::mt19937_64;

// 53 random bits mapped to [0, 1).
double UnitUniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Probability>
std::size_t SampleIndex(std::size_t count, Probability&& prob, Rng& rng) {
  const double u = UnitUniform(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double p = prob(k);
    if (p > 0.0) last_positive = k;
    cumulative += p;
    if (u < cumulative) return k;
  }
  return last_positive;
}

double PmiOrZero(const std::optional<ProbVector>& report_post,
                 const std::optional<ProbVector>& peer_post,
                 const ProbVector& prior) {
  if (!report_post || !peer_post ||
      !in_support(*report_post, *peer_post, prior)) {
    return 0.0;
  }
  return pmi_finite(*report_post, *peer_post, prior);
}

}  // namespace

Strategy Strategy::Truthful() { return Strategy(); }

Strategy Strategy::Replicate(int k) {
  if (k < 0) Fail(ErrorKind::kInvalidArgument, "replicate count < 0");
  Strategy s;
  s.kind_ = Kind::kReplicate;
  s.count_ = k;
  return s;
}

Strategy Strategy::Withhold(int k) {
  if (k < 0) Fail(ErrorKind::kInvalidArgument, "withhold count < 0");
  Strategy s;
  s.kind_ = Kind::kWithhold;
  s.count_ = k;
  return s;
}

Strategy Strategy::PermuteValues(std::vector<std::size_t> value_map) {
  Strategy s;
  s.kind_ = Kind::kPermuteValues;
  s.value_map_ = std::move(value_map);
  return s;
}

Strategy Strategy::Constant(Dataset report) {
  Strategy s;
  s.kind_ = Kind::kConstant;
  s.constant_ = std::move(report);
  return s;
}

Strategy Strategy::Custom(std::map<Dataset, Dataset> table) {
  Strategy s;
  s.kind_ = Kind::kCustom;
  s.table_ = std::move(table);
  return s;
}

Dataset Strategy::Apply(const Dataset& truth, std::size_t alphabet) const {
  Dataset out;
  switch (kind_) {
    case Kind::kTruthful:
      out = truth;
      break;
    case Kind::kReplicate:
      out = truth;
      if (!truth.empty()) {
        for (int k = 0; k < count_; ++k) {
          out.points.push_back(truth.points[k % truth.size()]);
        }
      }
      break;
    case Kind::kWithhold: {
      out = truth;
      const std::size_t drop =
          std::min(truth.size(), static_cast<std::size_t>(count_));
      out.points.resize(truth.size() - drop);
      break;
    }
    case Kind::kPermuteValues:
      for (std::size_t d : truth.points) {
        if (d >= value_map_.size()) {
          Fail(ErrorKind::kInvalidArgument,
               "permute_values map has no entry for point " +
                   std::to_string(d));
        }
        out.points.push_back(value_map_[d]);
      }
      break;
    case Kind::kConstant:
      out = constant_;
      break;
    case Kind::kCustom: {
      const auto it = table_.find(truth);
      out = it == table_.end() ? truth : it->second;
      break;
    }
  }
  for (std::size_t d : out.points) {
    if (d >= alphabet) {
      Fail(ErrorKind::kInvalidArgument,
           Describe() + " produced point " + std::to_string(d) +
               " outside an alphabet of " + std::to_string(alphabet));
    }
  }
  return out;
}

std::vector<double> Strategy::ApplyValues(
    const std::vector<double>& truth) const {
  std::vector<double> out = truth;
  switch (kind_) {
    case Kind::kTruthful:
      break;
    case Kind::kReplicate:
      if (!truth.empty()) {
        for (int k = 0; k < count_; ++k) out.push_back(truth[k % truth.size()]);
      }
      break;
    case Kind::kWithhold:
      out.resize(truth.size() -
                 std::min(truth.size(), static_cast<std::size_t>(count_)));
      break;
    default:
      Fail(ErrorKind::kInvalidArgument,
           Describe() + " does not apply to real-valued data");
  }
  return out;
}

std::string Strategy::Describe() const {
  switch (kind_) {
    case Kind::kTruthful:
      return "truthful";
    case Kind::kReplicate:
      return "replicate(" + std::to_string(count_) + ")";
    case Kind::kWithhold:
      return "withhold(" + std::to_string(count_) + ")";
    case Kind::kPermuteValues: {
      std::string out = "permute_values(";
      for (std::size_t k = 0; k < value_map_.size(); ++k) {
        if (k > 0) out += ' ';
        out += std::to_string(value_map_[k]);
      }
      return out + ")";
    }
    case Kind::kConstant:
      return "constant" + ToString(constant_);
    case Kind::kCustom:
      return "custom(" + std::to_string(table_.size()) + " entries)";
  }
  return "unknown";
}

std::string_view MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kOneTime:
      return "one_time";
    case MechanismKind::kBrier:
      return "brier";
    case MechanismKind::kMultiTime:
      return "multi_time";
  }
  return "unknown";
}

MechanismKind ParseMechanismKind(std::string_view name) {
  if (name == "one_time") return MechanismKind::kOneTime;
  if (name == "brier") return MechanismKind::kBrier;
  if (name == "multi_time") return MechanismKind::kMultiTime;
  Fail(ErrorKind::kInvalidArgument,
       "unknown mechanism '" + std::string(name) + "'");
}

const ConvexPair& Mechanism::convex_pair() const {
  return pair != nullptr ? *pair : logistic_pair();
}

PmiBounds audit_bounds(const World& world, int slack) {
  const std::vector<int> caps = size_caps_with_slack(world, slack);
  return bounds_finite(world, caps);
}

ReportEvaluator::ReportEvaluator(const World& world, std::size_t provider,
                                 Mechanism mechanism, std::uint64_t cap)
    : world_(world),
      provider_(provider),
      mechanism_(mechanism),
      space_(world_, provider, cap),
      share_(budget_share(world.budget(), world.num_providers())) {
  if (mechanism_.kind == MechanismKind::kOneTime &&
      !(mechanism_.bounds.lower < mechanism_.bounds.upper)) {
    Fail(ErrorKind::kDegenerateBounds, "one-time rule needs L < R");
  }
}

double ReportEvaluator::OneTime(
    std::span<const double> cond,
    const std::optional<ProbVector>& report_post) const {
  double total = 0.0;
  for (std::size_t k = 0; k < cond.size(); ++k) {
    if (cond[k] == 0.0) continue;
    total += cond[k] * one_time_outcome(report_post, space_.posterior(k),
                                        world_.prior(), mechanism_.bounds,
                                        share_)
                           .payment;
  }
  return total;
}

double ReportEvaluator::Brier(
    std::span<const double> cond,
    const std::optional<ProbVector>& report_post) const {
  if (!report_post) return 0.0;
  const std::vector<double> q = space_.predictive(*report_post);
  const auto profiles = static_cast<double>(q.size());
  double squares = 0.0;
  for (double x : q) squares += x * x;
  // With realized profile k the squared error is squares - 2 q_k + 1.
  double total = 0.0;
  for (std::size_t k = 0; k < cond.size(); ++k) {
    if (cond[k] == 0.0) continue;
    const double score =
        std::max(0.0, 1.0 - (squares - 2.0 * q[k] + 1.0) / profiles);
    total += cond[k] * share_ * score;
  }
  return total;
}

double ReportEvaluator::MultiTime(
    std::span<const double> cond,
    const std::optional<ProbVector>& report_post) const {
  const ConvexPair& pair = mechanism_.convex_pair();
  const double lower = pair.score_range().lower;
  std::vector<double> pmi(space_.size());
  for (std::size_t k = 0; k < pmi.size(); ++k) {
    pmi[k] = PmiOrZero(report_post, space_.posterior(k), world_.prior());
  }
  // Next day's peers are independent of today's data, so the first term is an
  // expectation over the marginal and does not depend on today's profile.
  double first = 0.0;
  for (std::size_t k = 0; k < pmi.size(); ++k) {
    const double marg = space_.marginal(k);
    if (marg == 0.0) continue;
    first += marg * (pmi[k] > 0.0 ? pair.fprime(1.0 / pmi[k])
                                  : pair.fprime_limit);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < cond.size(); ++k) {
    if (cond[k] == 0.0) continue;
    total += cond[k] * (pmi[k] > 0.0
                            ? first - pair.fstar(pair.fprime(1.0 / pmi[k]))
                            : lower);
  }
  return total;
}

double ReportEvaluator::expected_value(
    const ProbVector& truth_post,
    const std::optional<ProbVector>& report_post) const {
  const std::vector<double> cond = space_.predictive(truth_post);
  switch (mechanism_.kind) {
    case MechanismKind::kOneTime:
      return OneTime(cond, report_post);
    case MechanismKind::kBrier:
      return Brier(cond, report_post);
    case MechanismKind::kMultiTime:
      return MultiTime(cond, report_post);
  }
  return 0.0;
}

double ReportEvaluator::expected_value(const Dataset& truth,
                                       const Dataset& report) const {
  return expected_value(dataset_posterior(world_, provider_, truth),
                        try_dataset_posterior(world_, provider_, report));
}

double ReportEvaluator::expected_payment(const Dataset& truth,
                                         const Dataset& report) const {
  const double value = expected_value(truth, report);
  if (mechanism_.kind != MechanismKind::kMultiTime) return value;
  const Interval range = mechanism_.convex_pair().score_range();
  return share_ * (value - range.lower) / (range.upper - range.lower);
}

double expected_payment(const World& world, const Mechanism& mechanism,
                        std::size_t provider, const Dataset& truth,
                        const Dataset& report, std::uint64_t cap) {
  return ReportEvaluator(world, provider, mechanism, cap)
      .expected_payment(truth, report);
}

double expected_multi_day_score_joint(const World& world, std::size_t provider,
                                      const Dataset& truth,
                                      const Dataset& report,
                                      const ConvexPair& pair,
                                      std::uint64_t cap) {
  const PeerSpace space(world, provider, cap);
  const std::optional<ProbVector> report_post =
      try_dataset_posterior(world, provider, report);
  const ProbVector truth_post = dataset_posterior(world, provider, truth);
  // Joint law of (D_i today, D_-i today, D_-i tomorrow) given D_i today:
  // p(D_-i | D_i) * p(D_-i'), each term scored directly.
  double total = 0.0;
  for (std::size_t k = 0; k < space.size(); ++k) {
    double cond = 0.0;
    const auto lik = space.likelihood(k);
    for (std::size_t t = 0; t < lik.size(); ++t) cond += truth_post[t] * lik[t];
    if (cond == 0.0) continue;
    const double same =
        PmiOrZero(report_post, space.posterior(k), world.prior());
    for (std::size_t kk = 0; kk < space.size(); ++kk) {
      const double marg = space.marginal(kk);
      if (marg == 0.0) continue;
      const double cross =
          PmiOrZero(report_post, space.posterior(kk), world.prior());
      total += cond * marg * multi_time_score(cross, same, pair);
    }
  }
  return total;
}

std::vector<Dataset> report_candidates(const World& world, std::size_t provider,
                                       const Dataset& truth,
                                       const ReportSpace& space) {
  const Provider& p = world.provider(provider);
  const std::size_t alphabet = p.likelihood.num_points();
  if (space.same_size_only) {
    return enumerate_datasets(alphabet, static_cast<int>(truth.size()));
  }
  const int max_size = space.max_size < 0 ? p.n_points + 1 : space.max_size;
  return enumerate_datasets_up_to(alphabet, max_size);
}

namespace {

std::uint64_t CandidateCount(const World& world, std::size_t provider,
                             const Dataset& truth, const ReportSpace& space) {
  const Provider& p = world.provider(provider);
  const std::size_t alphabet = p.likelihood.num_points();
  if (space.same_size_only) {
    return dataset_count(alphabet, static_cast<int>(truth.size()));
  }
  const int max_size = space.max_size < 0 ? p.n_points + 1 : space.max_size;
  std::uint64_t total = 0;
  for (int s = 0; s <= max_size; ++s) {
    const std::uint64_t level = dataset_count(alphabet, s);
    if (level > std::numeric_limits<std::uint64_t>::max() - total) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += level;
  }
  return total;
}

}  // namespace

GapReport best_response_scan(const ReportEvaluator& evaluator,
                             const Dataset& truth, const ReportSpace& space,
                             std::uint64_t cap) {
  const World& world = evaluator.world();
  const std::size_t provider = evaluator.provider();
  const std::uint64_t count = CandidateCount(world, provider, truth, space);
  if (count > cap) {
    Fail(ErrorKind::kEnumerationTooLarge,
         std::to_string(count) + " candidate reports exceed the cap of " +
             std::to_string(cap));
  }
  const ProbVector truth_post = dataset_posterior(world, provider, truth);

  GapReport report;
  report.truthful_value = evaluator.expected_value(truth_post, truth_post);
  report.best_misreport_value = -std::numeric_limits<double>::infinity();
  double best_changing = -std::numeric_limits<double>::infinity();
  double best_any = report.truthful_value;

  for (Dataset& candidate :
       report_candidates(world, provider, truth, space)) {
    const std::optional<ProbVector> post =
        try_dataset_posterior(world, provider, candidate);
    CandidateValue cv;
    cv.value = evaluator.expected_value(truth_post, post);
    cv.gap = report.truthful_value - cv.value;
    cv.posterior_changing =
        !post || MaxAbsDiff(*post, truth_post) > kTieTolerance;
    if (candidate != truth) {
      report.best_misreport_value =
          std::max(report.best_misreport_value, cv.value);
      if (cv.posterior_changing) {
        best_changing = std::max(best_changing, cv.value);
        if (std::abs(cv.gap) <= kTieTolerance) {
          report.payment_equivalent.push_back(candidate);
        }
      }
    }
    best_any = std::max(best_any, cv.value);
    try {
      report.kl_identity_residual =
          std::max(report.kl_identity_residual,
                   kl_gap_check(evaluator.space(), world, truth, candidate)
                       .residual);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSupportViolation) throw;
    }
    cv.report = std::move(candidate);
    report.candidates.push_back(std::move(cv));
  }
  report.gap = report.truthful_value - report.best_misreport_value;
  report.posterior_changing_min_gap =
      std::isfinite(best_changing)
          ? report.truthful_value - best_changing
          : std::numeric_limits<double>::infinity();
  for (const CandidateValue& cv : report.candidates) {
    if (cv.value >= best_any - kTieTolerance) {
      report.argmax_reports.push_back(cv.report);
    }
  }
  return report;
}

GapReport best_response_scan(const World& world, const Mechanism& mechanism,
                             std::size_t provider, const Dataset& truth,
                             const ReportSpace& space, std::uint64_t cap) {
  const ReportEvaluator evaluator(world, provider, mechanism, cap);
  return best_response_scan(evaluator, truth, space, cap);
}

KlCheck kl_gap_check(const PeerSpace& space, const World& world,
                     const Dataset& truth, const Dataset& report) {
  const std::size_t provider = space.provider();
  const ProbVector truth_post = dataset_posterior(world, provider, truth);
  const std::optional<ProbVector> report_post =
      try_dataset_posterior(world, provider, report);
  if (!report_post) {
    Fail(ErrorKind::kSupportViolation,
         "report " + ToString(report) + " is impossible");
  }
  const std::vector<double> p = space.predictive(truth_post);
  const std::vector<double> p_tilde = space.predictive(*report_post);
  const ProbVector& prior = world.prior();

  KlCheck out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    const std::optional<ProbVector>& peer = space.posterior(k);
    if (!(p_tilde[k] > 0.0) || !peer || !in_support(*report_post, *peer, prior)) {
      Fail(ErrorKind::kSupportViolation,
           "report " + ToString(report) +
               " gives zero probability to a realizable peer profile");
    }
    out.kl += p[k] * std::log(p[k] / p_tilde[k]);
    out.score_gap += p[k] * (log_pmi_score(truth_post, *peer, prior) -
                             log_pmi_score(*report_post, *peer, prior));
  }
  out.residual = std::abs(out.score_gap - out.kl);
  return out;
}

KlCheck kl_gap_check(const World& world, std::size_t provider,
                     const Dataset& truth, const Dataset& report,
                     std::uint64_t cap) {
  return kl_gap_check(PeerSpace(world, provider, cap), world, truth, report);
}

namespace {

void CheckConfig(const MultiDayConfig& config, std::size_t strategies,
                 std::size_t providers) {
  if (config.days < 1) Fail(ErrorKind::kInvalidArgument, "days must be >= 1");
  if (config.budgets.size() != static_cast<std::size_t>(config.days)) {
    Fail(ErrorKind::kDimensionMismatch, "need one budget per day");
  }
  if (strategies != providers) {
    Fail(ErrorKind::kDimensionMismatch, "need one strategy per provider");
  }
}

}  // namespace

MultiDayLedger run_multi_day(const World& world,
                             const std::vector<Strategy>& strategies,
                             const MultiDayConfig& config) {
  CheckConfig(config, strategies.size(), world.num_providers());
  Rng rng(config.seed);
  const ProbVector& prior = world.prior();
  MultiDayLedger ledger;
  for (int day = 0; day < config.days; ++day) {
    const std::size_t theta = SampleIndex(
        prior.size(), [&](std::size_t t) { return prior[t]; }, rng);
    std::vector<Dataset> truths;
    std::vector<Dataset> reports;
    for (std::size_t j = 0; j < world.num_providers(); ++j) {
      const Provider& p = world.provider(j);
      const std::size_t alphabet = p.likelihood.num_points();
      Dataset truth;
      for (int k = 0; k < p.n_points; ++k) {
        truth.points.push_back(SampleIndex(
            alphabet, [&](std::size_t d) { return p.likelihood(d, theta); },
            rng));
      }
      reports.push_back(strategies[j].Apply(truth, alphabet));
      truths.push_back(std::move(truth));
    }
    ledger.truths.push_back(std::move(truths));
    ledger.reports.push_back(std::move(reports));
  }
  const ConvexPair& pair =
      config.pair != nullptr ? *config.pair : logistic_pair();
  ledger.payments =
      run_mechanism_schedule(world, config.days, ledger.reports, config.budgets,
                             pair, config.last_day_rule, config.bounds);
  return ledger;
}

namespace {

ConjParams ParamsFor(const ExpFamily& family,
                     const std::vector<double>& points) {
  double sum = 0.0;
  for (double x : points) sum += x;
  const auto n = static_cast<double>(points.size());
  return family.update(family.prior(), n > 0.0 ? sum / n : 0.0, n);
}

}  // namespace

ExpFamLedger run_multi_day_expfam(const ExpFamily& family,
                                  const std::vector<int>& dataset_sizes,
                                  const std::vector<Strategy>& strategies,
                                  const MultiDayConfig& config) {
  CheckConfig(config, strategies.size(), dataset_sizes.size());
  if (dataset_sizes.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "a world needs at least 2 providers");
  }
  const auto* gaussian = dynamic_cast<const GaussianKnownVariance*>(&family);
  const auto* beta = dynamic_cast<const BernoulliBeta*>(&family);
  if (gaussian == nullptr && beta == nullptr) {
    Fail(ErrorKind::kInvalidArgument, "unsupported family for simulation");
  }
  Rng rng(config.seed);
  ExpFamLedger ledger;
  for (int day = 0; day < config.days; ++day) {
    double theta = 0.0;
    if (gaussian != nullptr) {
      theta = std::normal_distribution<double>(
          gaussian->mu0(), std::sqrt(gaussian->sigma0_sq()))(rng);
    } else {
      const double x = std::gamma_distribution<double>(beta->alpha0())(rng);
      const double y = std::gamma_distribution<double>(beta->beta0())(rng);
      theta = x / (x + y);
    }
    std::vector<std::vector<double>> truths;
    std::vector<std::vector<double>> reports;
    std::vector<ConjParams> params;
    for (std::size_t j = 0; j < dataset_sizes.size(); ++j) {
      std::vector<double> truth;
      for (int k = 0; k < dataset_sizes[j]; ++k) {
        if (gaussian != nullptr) {
          truth.push_back(std::normal_distribution<double>(
              theta, std::sqrt(gaussian->sigma2()))(rng));
        } else {
          truth.push_back(UnitUniform(rng) < theta ? 1.0 : 0.0);
        }
      }
      reports.push_back(strategies[j].ApplyValues(truth));
      params.push_back(ParamsFor(family, reports.back()));
      truths.push_back(std::move(truth));
    }
    ledger.truths.push_back(std::move(truths));
    ledger.reports.push_back(std::move(reports));
    ledger.report_params.push_back(std::move(params));
  }
  const ConvexPair& pair =
      config.pair != nullptr ? *config.pair : logistic_pair();
  for (int day = 0; day + 1 < config.days; ++day) {
    const DayScores scores = multi_time_scores_expfam(
        family, ledger.report_params[day], ledger.report_params[day + 1],
        pair);
    ledger.payments.push_back(
        multi_time_payments(scores, config.budgets[day], pair.score_range()));
  }
  ledger.payments.push_back(
      equal_split_payments(dataset_sizes.size(), config.budgets.back()));
  return ledger;
}

namespace {

// E[F(X)] for X ~ N(mean, var).
template <typename F>
double NormalExpectation(double mean, double var, F&& fn) {
  const double sd = std::sqrt(var);
  const double inv_root_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [&](double z) {
    return inv_root_2pi * std::exp(-0.5 * z * z) * fn(mean + sd * z);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -12.0, 12.0, 15, 1e-13);
}

// P(S = s) for S ~ BetaBinomial(n, a, b).
double BetaBinomialPmf(int n, int s, double a, double b) {
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(s + 1.0) -
                            std::lgamma(n - s + 1.0);
  const double log_beta_num =
      std::lgamma(s + a) + std::lgamma(n - s + b) - std::lgamma(n + a + b);
  const double log_beta_den = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(log_choose + log_beta_num - log_beta_den);
}

}  // namespace

double expected_multi_day_score_expfam(const ExpFamily& family, int peer_points,
                                       const ConjParams& truth,
                                       const ConjParams& report,
                                       const ConvexPair& pair) {
  if (peer_points < 0) Fail(ErrorKind::kInvalidArgument, "peer_points < 0");
  const ConjParams p0 = family.prior();
  auto first = [&](const ConjParams& peers) {
    return pair.fprime(1.0 / pmi_expfam(family, report, peers, p0));
  };
  auto second = [&](const ConjParams& peers) {
    return pair.fstar(
        pair.fprime(1.0 / pmi_expfam(family, report, peers, p0)));
  };
  if (peer_points == 0) return first(p0) - second(p0);

  if (const auto* gaussian =
          dynamic_cast<const GaussianKnownVariance*>(&family)) {
    const double n = peer_points;
    const double noise = gaussian->sigma2() / n;
    auto peers_at = [&](double mean) {
      return gaussian->posterior(peer_points, mean);
    };
    const double a = NormalExpectation(
        gaussian->mu0(), noise + gaussian->sigma0_sq(),
        [&](double mean) { return first(peers_at(mean)); });
    const double b = NormalExpectation(
        truth.tau, noise + gaussian->sigma2() / truth.nu,
        [&](double mean) { return second(peers_at(mean)); });
    return a - b;
  }
  if (const auto* beta = dynamic_cast<const BernoulliBeta*>(&family)) {
    const auto [a0, b0] = BernoulliBeta::Shapes(p0);
    const auto [at, bt] = BernoulliBeta::Shapes(truth);
    double a = 0.0;
    double b = 0.0;
    for (int s = 0; s <= peer_points; ++s) {
      const ConjParams peers = beta->posterior(s, peer_points - s);
      a += BetaBinomialPmf(peer_points, s, a0, b0) * first(peers);
      b += BetaBinomialPmf(peer_points, s, at, bt) * second(peers);
    }
    return a - b;
  }
  Fail(ErrorKind::kInvalidArgument, "unsupported family");
}

}  // namespace peerdata
