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

#include "peerdata/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "peerdata/bayes_core.h"
#include "peerdata/expfam.h"
#include "peerdata/mechanisms.h"
#include "peerdata/pmi.h"
#include "peerdata/scenario.h"
#include "peerdata/sensitivity.h"
#include "peerdata/sim.h"

namespace peerdata {
namespace {

using Json = nlohmann::ordered_json;

// Gap floor below which an audit counts as violated.
constexpr double kGapFloor = -1e-9;
// Largest KL-identity residual an audit accepts.
constexpr double kKlResidualCeiling = 1e-9;

// Shortest decimal that reads back to the same double.
std::string Num(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ec == std::errc() ? end : buf);
}

Json PointsJson(const Dataset& d) { return Json(d.points); }

// JSON has no infinities; they are written as null.
Json FiniteOrNull(double x) { return std::isfinite(x) ? Json(x) : Json(); }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) {
    Row(header);
  }
  void Row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) text_ << ',';
      text_ << cells[k];
    }
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    Fail(ErrorKind::kInvalidArgument, "cannot write '" + path.string() + "'");
  }
}

struct Context {
  const CliOptions& options;
  Scenario scenario;
  std::uint64_t cap;
  std::filesystem::path out_dir;
  std::ostream& out;

  void Emit(const std::string& name, const Json& json) const {
    const std::string text = json.dump(2) + "\n";
    WriteFile(out_dir / name, text);
    if (options.json) out << text;
  }
  void Emit(const std::string& name, const Csv& csv) const {
    WriteFile(out_dir / name, csv.str());
  }
  void Summary(const std::string& text) const {
    if (!options.json) out << text;
  }
  const World& RequireFinite(const std::string& command) const {
    if (!scenario.finite) {
      Fail(ErrorKind::kInvalidArgument,
           command + " needs a finite world in this configuration");
    }
    return *scenario.finite;
  }
};

Json Header(const std::string& command, const Scenario& s) {
  Json j;
  j["schema"] = kScenarioSchema;
  j["command"] = command;
  j["mechanism"] = MechanismKindName(s.mechanism);
  j["seed"] = s.seed;
  return j;
}

PmiBounds OneTimeBounds(const World& world, const Scenario& s,
                        int report_max_size = -1) {
  std::vector<int> caps = size_caps_with_slack(world, s.bound_slack);
  for (int& c : caps) c = std::max(c, report_max_size);
  return bounds_finite(world, caps);
}

// Row cells for one provider outcome.
void PaymentRows(Csv& csv, Json& providers, int day, const PaymentVector& pv,
                 const std::vector<Dataset>* truths,
                 const std::vector<Dataset>& reports) {
  for (std::size_t i = 0; i < pv.size(); ++i) {
    csv.Row({std::to_string(day), std::to_string(i), Num(pv[i].score),
             Num(pv[i].payment), pv[i].in_support ? "1" : "0"});
    Json p;
    p["provider"] = i;
    if (truths != nullptr) p["truth"] = PointsJson((*truths)[i]);
    p["report"] = PointsJson(reports[i]);
    p["score"] = pv[i].score;
    p["payment"] = pv[i].payment;
    p["in_support"] = pv[i].in_support;
    providers.push_back(p);
  }
}

std::string PaymentTable(const std::vector<PaymentVector>& days) {
  std::ostringstream t;
  t << std::left << std::setw(5) << "day" << std::setw(10) << "provider"
    << std::setw(14) << "score" << std::setw(14) << "payment"
    << "in_support\n";
  for (std::size_t d = 0; d < days.size(); ++d) {
    for (std::size_t i = 0; i < days[d].size(); ++i) {
      t << std::left << std::setw(5) << d << std::setw(10) << i
        << std::setw(14) << std::setprecision(6) << days[d][i].score
        << std::setw(14) << days[d][i].payment
        << (days[d][i].in_support ? "yes" : "no") << '\n';
    }
  }
  return t.str();
}

int RunOnce(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  const World& world = ctx.RequireFinite("run-once");
  std::vector<Dataset> reports;
  std::optional<std::vector<Dataset>> truths;
  if (s.reports) {
    reports = *s.reports;
  } else {
    MultiDayConfig config;
    config.days = 1;
    config.budgets = {s.budgets.front()};
    config.seed = s.seed;
    const MultiDayLedger ledger = run_multi_day(world, s.strategies, config);
    truths = ledger.truths.front();
    reports = ledger.reports.front();
  }
  Json report = Header("run-once", s);
  std::optional<PaymentVector> pv;
  switch (s.mechanism) {
    case MechanismKind::kOneTime: {
      const PmiBounds b = OneTimeBounds(world, s);
      report["bounds"] = {{"lower", b.lower}, {"upper", b.upper}};
      pv = one_time_payments(world, reports, b, s.budgets.front());
      break;
    }
    case MechanismKind::kBrier:
      pv = brier_payments(world, reports, ctx.cap);
      break;
    case MechanismKind::kMultiTime:
      Fail(ErrorKind::kInvalidArgument,
           "the multi_time mechanism scores pairs of days; use run-multi");
  }
  Csv csv({"day", "provider", "score", "payment", "in_support"});
  Json providers = Json::array();
  PaymentRows(csv, providers, 0, *pv, truths ? &*truths : nullptr, reports);
  report["budget"] = s.budgets.front();
  report["total"] = pv->total();
  report["providers"] = providers;
  ctx.Emit("payments.csv", csv);
  ctx.Emit("run_once.json", report);
  ctx.Summary(PaymentTable({*pv}));
  return kExitOk;
}

int RunMulti(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  if (s.mechanism != MechanismKind::kMultiTime) {
    Fail(ErrorKind::kInvalidArgument,
         "run-multi needs mechanism.kind multi_time");
  }
  MultiDayConfig config;
  config.days = s.days;
  config.budgets = s.budgets;
  config.pair = &convex_pair_by_name(s.convex_pair);
  config.last_day_rule = s.last_day_rule;
  config.seed = s.seed;

  Json report = Header("run-multi", s);
  report["days"] = s.days;
  report["convex_pair"] = s.convex_pair;
  report["last_day_rule"] = LastDayRuleName(s.last_day_rule);
  Json strategies = Json::array();
  for (const Strategy& st : s.strategies) strategies.push_back(st.Describe());
  report["strategies"] = strategies;

  Csv csv({"day", "provider", "score", "payment", "in_support"});
  Json days = Json::array();
  std::vector<PaymentVector> payments;
  if (s.finite) {
    config.bounds = OneTimeBounds(*s.finite, s);
    const MultiDayLedger ledger = run_multi_day(*s.finite, s.strategies, config);
    for (int t = 0; t < s.days; ++t) {
      Json providers = Json::array();
      PaymentRows(csv, providers, t, ledger.payments[t], &ledger.truths[t],
                  ledger.reports[t]);
      days.push_back({{"day", t},
                      {"budget", s.budgets[t]},
                      {"total", ledger.payments[t].total()},
                      {"providers", providers}});
    }
    payments = ledger.payments;
  } else {
    if (s.last_day_rule != LastDayRule::kEqualSplit) {
      Fail(ErrorKind::kInvalidArgument,
           "exponential-family runs end with an equal split");
    }
    const auto family = s.expfam->Make();
    const ExpFamLedger ledger = run_multi_day_expfam(
        *family, s.expfam->dataset_sizes, s.strategies, config);
    for (int t = 0; t < s.days; ++t) {
      Json providers = Json::array();
      const PaymentVector& pv = ledger.payments[t];
      for (std::size_t i = 0; i < pv.size(); ++i) {
        csv.Row({std::to_string(t), std::to_string(i), Num(pv[i].score),
                 Num(pv[i].payment), pv[i].in_support ? "1" : "0"});
        providers.push_back({{"provider", i},
                             {"truth", ledger.truths[t][i]},
                             {"report", ledger.reports[t][i]},
                             {"nu", ledger.report_params[t][i].nu},
                             {"tau", ledger.report_params[t][i].tau},
                             {"score", pv[i].score},
                             {"payment", pv[i].payment},
                             {"in_support", pv[i].in_support}});
      }
      days.push_back({{"day", t},
                      {"budget", s.budgets[t]},
                      {"total", pv.total()},
                      {"providers", providers}});
    }
    payments = ledger.payments;
  }
  report["ledger"] = days;
  ctx.Emit("payments.csv", csv);
  ctx.Emit("run_multi.json", report);
  ctx.Summary(PaymentTable(payments));
  return kExitOk;
}

Json GapJson(const Dataset& truth, const GapReport& r) {
  Json j;
  j["true_dataset"] = PointsJson(truth);
  j["truthful_value"] = r.truthful_value;
  j["best_misreport_value"] = FiniteOrNull(r.best_misreport_value);
  j["gap"] = FiniteOrNull(r.gap);
  j["posterior_changing_min_gap"] = FiniteOrNull(r.posterior_changing_min_gap);
  j["kl_identity_residual"] = r.kl_identity_residual;
  Json argmax = Json::array();
  for (const Dataset& d : r.argmax_reports) argmax.push_back(PointsJson(d));
  j["argmax_reports"] = argmax;
  Json equivalent = Json::array();
  for (const Dataset& d : r.payment_equivalent) {
    equivalent.push_back(PointsJson(d));
  }
  j["payment_equivalent"] = equivalent;
  return j;
}

int AuditTruthfulnessFinite(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  const World& world = *s.finite;
  Mechanism mechanism;
  mechanism.kind = s.mechanism;
  mechanism.pair = &convex_pair_by_name(s.convex_pair);
  int max_size = s.report_space.max_size;
  if (s.report_space.same_size_only) max_size = -1;
  if (s.mechanism == MechanismKind::kOneTime) {
    mechanism.bounds = OneTimeBounds(world, s, max_size);
  }

  Csv csv({"provider", "true_dataset", "report", "value", "gap"});
  Json providers = Json::array();
  std::ostringstream table;
  table << std::left << std::setw(10) << "provider" << std::setw(14) << "truth"
        << std::setw(14) << "gap" << std::setw(16) << "changing_gap"
        << "equivalent\n";
  int violations = 0;
  for (std::size_t i = 0; i < world.num_providers(); ++i) {
    const ReportEvaluator evaluator(world, i, mechanism, ctx.cap);
    Json truths = Json::array();
    const Provider& p = world.provider(i);
    for (const Dataset& truth :
         enumerate_datasets(p.likelihood.num_points(), p.n_points)) {
      if (dataset_marginal(world, i, truth) == 0.0) continue;
      const GapReport r =
          best_response_scan(evaluator, truth, s.report_space, ctx.cap);
      for (const CandidateValue& cv : r.candidates) {
        csv.Row({std::to_string(i), ToString(truth), ToString(cv.report),
                 Num(cv.value), Num(cv.gap)});
      }
      const bool bad = r.gap < kGapFloor ||
                       r.kl_identity_residual > kKlResidualCeiling;
      violations += bad ? 1 : 0;
      Json entry = GapJson(truth, r);
      entry["violation"] = bad;
      truths.push_back(entry);
      table << std::left << std::setw(10) << i << std::setw(14)
            << ToString(truth) << std::setw(14) << std::setprecision(4)
            << r.gap << std::setw(16) << r.posterior_changing_min_gap
            << r.payment_equivalent.size() << (bad ? "  VIOLATION" : "")
            << '\n';
    }
    providers.push_back({{"provider", i}, {"truths", truths}});
  }
  Json report = Header("audit-truthfulness", s);
  report["gap_floor"] = kGapFloor;
  report["providers"] = providers;
  report["violations"] = violations;
  report["pass"] = violations == 0;
  ctx.Emit("audit.csv", csv);
  ctx.Emit("audit_truthfulness.json", report);
  table << (violations == 0 ? "PASS" : "FAIL") << ": " << violations
        << " truthfulness violation(s)\n";
  ctx.Summary(table.str());
  return violations == 0 ? kExitOk : kExitAuditViolation;
}

// Beta worlds: every realizable success count as the truth, every report of
// up to N + 1 points, exact expected day scores against truthful peers.
// A Bernoulli dataset with the given counts, zeros first.
Dataset BinaryDataset(int ones, int zeros) {
  Dataset d;
  d.points.assign(static_cast<std::size_t>(zeros), 0);
  d.points.insert(d.points.end(), static_cast<std::size_t>(ones), 1);
  return d;
}

int AuditTruthfulnessBeta(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  const auto family = s.expfam->Make();
  const auto* beta = dynamic_cast<const BernoulliBeta*>(family.get());
  if (beta == nullptr) {
    Fail(ErrorKind::kInvalidArgument,
         "audit-truthfulness supports finite and bernoulli_beta worlds");
  }
  const ConvexPair& pair = convex_pair_by_name(s.convex_pair);
  const std::vector<int>& sizes = s.expfam->dataset_sizes;
  const int total = std::accumulate(sizes.begin(), sizes.end(), 0);

  Csv csv({"provider", "true_dataset", "report", "value", "gap"});
  Json providers = Json::array();
  int violations = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int n = sizes[i];
    const int peers = total - n;
    int max_size = s.report_space.max_size < 0 ? n + 1
                                               : s.report_space.max_size;
    Json truths = Json::array();
    for (int ones = 0; ones <= n; ++ones) {
      const ConjParams truth = beta->posterior(ones, n - ones);
      const Dataset truth_data = BinaryDataset(ones, n - ones);
      GapReport r;
      r.truthful_value =
          expected_multi_day_score_expfam(*beta, peers, truth, truth, pair);
      r.best_misreport_value = -std::numeric_limits<double>::infinity();
      for (int size = 0; size <= max_size; ++size) {
        if (s.report_space.same_size_only && size != n) continue;
        for (int r1 = 0; r1 <= size; ++r1) {
          const ConjParams report = beta->posterior(r1, size - r1);
          const double v = expected_multi_day_score_expfam(*beta, peers, truth,
                                                           report, pair);
          const Dataset report_data = BinaryDataset(r1, size - r1);
          csv.Row({std::to_string(i), ToString(truth_data),
                   ToString(report_data), Num(v), Num(r.truthful_value - v)});
          r.candidates.push_back({report_data, v, r.truthful_value - v,
                                  !(r1 == ones && size == n)});
          // Counts are sufficient, so every other report moves the posterior.
          if (!(r1 == ones && size == n)) {
            r.best_misreport_value = std::max(r.best_misreport_value, v);
          }
        }
      }
      r.gap = r.truthful_value - r.best_misreport_value;
      r.posterior_changing_min_gap = r.gap;
      const double top = std::max(r.truthful_value, r.best_misreport_value);
      for (const CandidateValue& c : r.candidates) {
        if (c.value >= top - kTieTolerance) r.argmax_reports.push_back(c.report);
        if (c.report != truth_data &&
            std::abs(c.value - r.truthful_value) <= kTieTolerance) {
          r.payment_equivalent.push_back(c.report);
        }
      }
      const bool bad = r.gap < kGapFloor;
      violations += bad ? 1 : 0;
      Json entry = GapJson(truth_data, r);
      entry["ones"] = ones;
      entry["zeros"] = n - ones;
      entry["violation"] = bad;
      truths.push_back(entry);
    }
    providers.push_back({{"provider", i}, {"truths", truths}});
  }
  Json report = Header("audit-truthfulness", s);
  report["gap_floor"] = kGapFloor;
  report["providers"] = providers;
  report["violations"] = violations;
  report["pass"] = violations == 0;
  ctx.Emit("audit.csv", csv);
  ctx.Emit("audit_truthfulness.json", report);
  ctx.Summary(std::string(violations == 0 ? "PASS" : "FAIL") + ": " +
              std::to_string(violations) + " truthfulness violation(s)\n");
  return violations == 0 ? kExitOk : kExitAuditViolation;
}

int AuditTruthfulness(const Context& ctx) {
  return ctx.scenario.finite ? AuditTruthfulnessFinite(ctx)
                             : AuditTruthfulnessBeta(ctx);
}

int AuditSensitivity(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  Json report = Header("audit-sensitivity", s);
  if (s.finite) {
    const World& world = *s.finite;
    const PmiBounds b = OneTimeBounds(world, s);
    const AuditReport audit = audit_sensitivity(world, b, ctx.cap);
    Csv csv({"provider", "q_rank", "q_full_rank", "krank_condition_met",
             "smallest_singular_value", "alpha_lower_bound"});
    Json providers = Json::array();
    std::ostringstream table;
    table << std::left << std::setw(10) << "provider" << std::setw(8)
          << "rank" << std::setw(11) << "full_rank" << std::setw(8)
          << "krank" << std::setw(14) << "sigma_min" << "alpha\n";
    for (std::size_t i = 0; i < audit.providers.size(); ++i) {
      const ProviderAudit& a = audit.providers[i];
      csv.Row({std::to_string(i), std::to_string(a.q_rank),
               a.q_full_rank ? "1" : "0", a.krank_condition_met ? "1" : "0",
               Num(a.smallest_singular_value), Num(a.alpha_lower_bound)});
      providers.push_back({{"provider", i},
                           {"q_rank", a.q_rank},
                           {"q_full_rank", a.q_full_rank},
                           {"krank_condition_met", a.krank_condition_met},
                           {"smallest_singular_value", a.smallest_singular_value},
                           {"alpha_lower_bound", a.alpha_lower_bound}});
      table << std::left << std::setw(10) << i << std::setw(8) << a.q_rank
            << std::setw(11) << (a.q_full_rank ? "yes" : "no") << std::setw(8)
            << (a.krank_condition_met ? "yes" : "no") << std::setw(14)
            << std::setprecision(6) << a.smallest_singular_value
            << a.alpha_lower_bound << '\n';
    }
    report["bounds"] = {{"lower", b.lower}, {"upper", b.upper}};
    report["providers"] = providers;
    report["verdict"] = VerdictName(audit.verdict);
    ctx.Emit("sensitivity.csv", csv);
    ctx.Emit("audit_sensitivity.json", report);
    table << "verdict: " << VerdictName(audit.verdict) << '\n';
    ctx.Summary(table.str());
    return kExitOk;
  }
  const auto family = s.expfam->Make();
  const auto* beta = dynamic_cast<const BernoulliBeta*>(family.get());
  if (beta == nullptr) {
    Fail(ErrorKind::kInvalidArgument,
         "audit-sensitivity supports finite and bernoulli_beta worlds");
  }
  // Candidate posteriors from every report of up to N_max + 1 points,
  // against the four neighbors of every peer count in the same range.
  const auto& sizes = s.expfam->dataset_sizes;
  const int n_max = *std::max_element(sizes.begin(), sizes.end()) + 1;
  std::vector<ConjParams> candidates;
  std::vector<std::pair<int, int>> labels;
  for (int a = 0; a <= n_max; ++a) {
    for (int b = 0; a + b <= n_max; ++b) {
      candidates.push_back(beta->posterior(a, b));
      labels.emplace_back(a, b);
    }
  }
  std::vector<ConjParams> contexts;
  for (int a = 0; a <= n_max; ++a) {
    for (int b = 0; a + b <= n_max; ++b) {
      for (const ConjParams& c : beta_four_neighbor_contexts(*beta, a, b)) {
        contexts.push_back(c);
      }
    }
  }
  const HScanReport scan =
      h_distinguishability_scan(*beta, beta->prior(), candidates, contexts);
  Csv csv({"first", "second", "distinguishable", "max_log_gap"});
  for (const CandidatePairResult& r : scan.pairs) {
    auto label = [&](std::size_t k) {
      return "(" + std::to_string(labels[k].first) + " " +
             std::to_string(labels[k].second) + ")";
    };
    csv.Row({label(r.first), label(r.second), r.distinguishable ? "1" : "0",
             Num(r.max_log_gap)});
  }
  report["candidates"] = candidates.size();
  report["contexts"] = contexts.size();
  report["indistinguishable_pairs"] = scan.indistinguishable.size();
  report["verdict"] = scan.all_distinguishable ? "certified_sensitive"
                                               : "inconclusive";
  ctx.Emit("sensitivity.csv", csv);
  ctx.Emit("audit_sensitivity.json", report);
  ctx.Summary("verdict: " + report["verdict"].get<std::string>() + " (" +
              std::to_string(scan.indistinguishable.size()) +
              " indistinguishable pair(s))\n");
  return kExitOk;
}

int Bounds(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  Json report = Header("bounds", s);
  std::ostringstream table;
  table << std::setprecision(10);
  if (s.finite) {
    const World& world = *s.finite;
    const BoundDetails d =
        bound_details(world, size_caps_with_slack(world, s.bound_slack));
    report["lower"] = d.bounds.lower;
    report["upper"] = d.bounds.upper;
    report["prior_ratio"] = d.prior_ratio;
    Json providers = Json::array();
    table << "L = " << d.bounds.lower << "\nR = " << d.bounds.upper
          << "\nprior ratio = " << d.prior_ratio << '\n'
          << std::left << std::setw(10) << "provider" << std::setw(6) << "cap"
          << std::setw(18) << "point_ratio" << std::setw(18) << "eta_own"
          << "eta_peers\n";
    for (std::size_t i = 0; i < world.num_providers(); ++i) {
      providers.push_back({{"provider", i},
                           {"size_cap", d.size_caps[i]},
                           {"point_ratio", d.point_ratio[i]},
                           {"eta_own", d.eta_own[i]},
                           {"eta_peers", d.eta_peers[i]}});
      table << std::left << std::setw(10) << i << std::setw(6)
            << d.size_caps[i] << std::setw(18) << d.point_ratio[i]
            << std::setw(18) << d.eta_own[i] << d.eta_peers[i] << '\n';
    }
    report["providers"] = providers;
  } else {
    if (s.expfam->family != "gaussian_known_var") {
      Fail(ErrorKind::kInvalidArgument,
           "bounds supports finite and gaussian_known_var worlds");
    }
    const auto& h = s.expfam->hyperparameters;
    const auto& sizes = s.expfam->dataset_sizes;
    const int n_max = std::accumulate(sizes.begin(), sizes.end(), 0);
    const Interval b = gaussian_pmi_bounds(std::sqrt(h.at("sigma2")),
                                           std::sqrt(h.at("sigma0_sq")),
                                           std::max(n_max, 1));
    report["n_max"] = n_max;
    report["pmi_lower"] = b.lower;
    report["pmi_upper"] = b.upper;
    report["lower"] = std::log(b.lower);
    report["upper"] = std::log(b.upper);
    report["note"] = "holds for datasets whose sample means equal mu0";
    table << "PMI in [" << b.lower << ", " << b.upper << "] for N_max = "
          << n_max << " (sample means at mu0)\n";
  }
  ctx.Emit("bounds.json", report);
  ctx.Summary(table.str());
  return kExitOk;
}

std::uint64_t ParseCap(const std::string& text, const std::string& source) {
  std::uint64_t value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value == 0) {
    Fail(ErrorKind::kInvalidArgument,
         source + " must be a positive integer, got '" + text + "'");
  }
  return value;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError:
    case ErrorKind::kValidationError:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kZeroEvidence:
    case ErrorKind::kIllegalCompositeParams:
    case ErrorKind::kDegenerateBounds:
    case ErrorKind::kDegenerateRange:
    case ErrorKind::kOutOfSupport:
    case ErrorKind::kSupportViolation:
      return kExitInputError;
    case ErrorKind::kEnumerationTooLarge:
    case ErrorKind::kTooManyColumns:
      return kExitResourceLimit;
    case ErrorKind::kBudgetViolation:
    case ErrorKind::kInternalBracketViolation:
      return kExitAuditViolation;
  }
  return kExitInternal;
}

int Dispatch(const CliOptions& options,
             const std::optional<std::string>& env_cap, std::ostream& out,
             std::ostream& err) {
  try {
    Scenario scenario = load_scenario(options.scenario_path);
    std::uint64_t cap = scenario.enumeration_cap;
    if (env_cap) cap = ParseCap(*env_cap, kCapEnvVar);
    if (options.cap) cap = ParseCap(std::to_string(*options.cap), "--cap");
    if (options.seed) scenario.seed = *options.seed;
    scenario.enumeration_cap = cap;
    std::filesystem::create_directories(options.out_dir);
    const Context ctx{options, std::move(scenario), cap, options.out_dir, out};
    if (options.subcommand == "run-once") return RunOnce(ctx);
    if (options.subcommand == "run-multi") return RunMulti(ctx);
    if (options.subcommand == "audit-truthfulness") {
      return AuditTruthfulness(ctx);
    }
    if (options.subcommand == "audit-sensitivity") return AuditSensitivity(ctx);
    if (options.subcommand == "bounds") return Bounds(ctx);
    Fail(ErrorKind::kInvalidArgument,
         "unknown subcommand '" + options.subcommand + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int RunCli(const std::vector<std::string>& args,
           const std::optional<std::string>& env_cap, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Peer-prediction data market mechanisms and audits", "peerdata");
  CliOptions options;
  app.add_option("--scenario", options.scenario_path, "Scenario YAML file")
      ->required();
  app.add_option("--out", options.out_dir, "Output directory for artifacts");
  std::uint64_t cap = 0;
  std::uint64_t seed = 0;
  CLI::Option* cap_opt =
      app.add_option("--cap", cap, "Enumeration cap (overrides the scenario "
                                   "and DATAMARKET_ENUM_CAP)");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Seed (overrides the scenario)");
  app.add_flag("--json", options.json,
               "Print the JSON report instead of the summary table");
  app.require_subcommand(1);
  for (const char* name : {"run-once", "run-multi", "audit-truthfulness",
                           "audit-sensitivity", "bounds"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("run-once")->description("Pay one day of reports");
  app.get_subcommand("run-multi")->description("Simulate a multi-day schedule");
  app.get_subcommand("audit-truthfulness")
      ->description("Exact best-response scan for every provider");
  app.get_subcommand("audit-sensitivity")
      ->description("Rank, Kruskal-rank and alpha certificates");
  app.get_subcommand("bounds")->description("Score bounds and components");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  if (*cap_opt) options.cap = cap;
  if (*seed_opt) options.seed = seed;
  options.subcommand = app.get_subcommands().front()->get_name();
  return Dispatch(options, env_cap, out, err);
}

}  // namespace peerdata
