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

#include "peerdata/scenario.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <yaml-cpp/yaml.h>

#include "peerdata/error.h"

namespace peerdata {
namespace {

// A YAML node together with its dotted path for error messages.
class Field {
 public:
  Field(YAML::Node node, std::string path)
      : node_(std::move(node)), path_(std::move(path)) {}

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }
  bool present() const { return node_.IsDefined() && !node_.IsNull(); }

  [[noreturn]] void Invalid(const std::string& reason) const {
    std::string where = path_.empty() ? "scenario" : path_;
    if (node_.IsDefined() && node_.Mark().line >= 0) {
      where += " (line " + std::to_string(node_.Mark().line + 1) + ")";
    }
    Fail(ErrorKind::kValidationError, where + ": " + reason);
  }

  Field Child(const std::string& key) const {
    if (!node_.IsMap()) Invalid("expected a mapping");
    return Field(node_[key], path_.empty() ? key : path_ + "." + key);
  }

  Field Required(const std::string& key) const {
    Field child = Child(key);
    if (!child.present()) Invalid("missing required field '" + key + "'");
    return child;
  }

  Field Item(std::size_t k) const {
    return Field(node_[k], path_ + "[" + std::to_string(k) + "]");
  }

  std::size_t SequenceSize() const {
    if (!node_.IsSequence()) Invalid("expected a list");
    return node_.size();
  }

  void OnlyKeys(const std::set<std::string>& allowed) const {
    if (!node_.IsMap()) Invalid("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.contains(key)) {
        Field(kv.first, path_).Invalid("unknown field '" + key + "'");
      }
    }
  }

  double Double() const {
    if (!node_.IsScalar()) Invalid("expected a number");
    double x = 0.0;
    if (!YAML::convert<double>::decode(node_, x) || !std::isfinite(x)) {
      Invalid("expected a finite decimal number, got '" +
              node_.Scalar() + "'");
    }
    return x;
  }

  long long Integer() const {
    if (!node_.IsScalar()) Invalid("expected an integer");
    long long x = 0;
    if (!YAML::convert<long long>::decode(node_, x)) {
      Invalid("expected an integer, got '" + node_.Scalar() + "'");
    }
    return x;
  }

  std::string String() const {
    if (!node_.IsScalar()) Invalid("expected a string");
    return node_.Scalar();
  }

  std::vector<double> Doubles() const {
    std::vector<double> out;
    for (std::size_t k = 0; k < SequenceSize(); ++k) {
      out.push_back(Item(k).Double());
    }
    return out;
  }

  Dataset Points() const {
    Dataset d;
    for (std::size_t k = 0; k < SequenceSize(); ++k) {
      const long long x = Item(k).Integer();
      if (x < 0) Item(k).Invalid("point index must be nonnegative");
      d.points.push_back(static_cast<std::size_t>(x));
    }
    return d;
  }

 private:
  YAML::Node node_;
  std::string path_;
};

// Rethrows construction errors from the library as validation errors
// attributed to `field`.
template <typename Fn>
auto Attributed(const Field& field, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    // Drop the "Kind: " prefix; the message is re-raised as a validation
    // error.
    const std::string what = e.what();
    field.Invalid(what.substr(ErrorKindName(e.kind()).size() + 2));
  }
}

World ParseFiniteWorld(const Field& world, double budget) {
  world.OnlyKeys({"type", "prior", "providers"});
  const Field prior_field = world.Required("prior");
  const std::vector<double> prior = prior_field.Doubles();
  if (prior.empty()) prior_field.Invalid("prior must not be empty");
  for (double p : prior) {
    if (!(p > 0.0)) prior_field.Invalid("prior must be strictly positive");
  }
  const ProbVector prior_vec =
      Attributed(prior_field, [&] { return ProbVector(prior); });

  const Field providers = world.Required("providers");
  std::vector<Provider> out;
  for (std::size_t j = 0; j < providers.SequenceSize(); ++j) {
    const Field p = providers.Item(j);
    p.OnlyKeys({"likelihood", "n_points"});
    const Field lik = p.Required("likelihood");
    std::vector<std::vector<double>> rows;
    for (std::size_t d = 0; d < lik.SequenceSize(); ++d) {
      rows.push_back(lik.Item(d).Doubles());
      if (rows.back().size() != prior.size()) {
        lik.Item(d).Invalid("row has " + std::to_string(rows.back().size()) +
                            " entries but the prior has " +
                            std::to_string(prior.size()));
      }
    }
    const Field n_field = p.Required("n_points");
    const long long n = n_field.Integer();
    if (n < 0) n_field.Invalid("n_points must be nonnegative");
    out.push_back({Attributed(lik, [&] { return LikelihoodMatrix(rows); }),
                   static_cast<int>(n)});
  }
  return Attributed(world, [&] {
    return World(prior_vec, std::move(out), budget);
  });
}

ExpFamSpec ParseExpFam(const Field& world) {
  world.OnlyKeys({"type", "family", "hyperparameters", "dataset_sizes"});
  ExpFamSpec spec;
  const Field family = world.Required("family");
  spec.family = family.String();
  std::set<std::string> keys;
  if (spec.family == "gaussian_known_var") {
    keys = {"sigma2", "mu0", "sigma0_sq"};
  } else if (spec.family == "bernoulli_beta") {
    keys = {"alpha0", "beta0"};
  } else {
    family.Invalid("unknown family '" + spec.family +
                   "' (expected gaussian_known_var or bernoulli_beta)");
  }
  const Field hyper = world.Required("hyperparameters");
  hyper.OnlyKeys(keys);
  for (const std::string& key : keys) {
    spec.hyperparameters[key] = hyper.Required(key).Double();
  }
  const Field sizes = world.Required("dataset_sizes");
  for (std::size_t j = 0; j < sizes.SequenceSize(); ++j) {
    const long long n = sizes.Item(j).Integer();
    if (n < 0) sizes.Item(j).Invalid("dataset size must be nonnegative");
    spec.dataset_sizes.push_back(static_cast<int>(n));
  }
  if (spec.dataset_sizes.size() < 2) {
    sizes.Invalid("a world needs at least 2 providers");
  }
  Attributed(hyper, [&] { return spec.Make(); });
  return spec;
}

Strategy ParseStrategy(const Field& f) {
  if (f.node().IsScalar()) {
    const std::string name = f.String();
    if (name == "truthful") return Strategy::Truthful();
    f.Invalid("unknown strategy '" + name + "'");
  }
  if (!f.node().IsMap() || f.node().size() != 1) {
    f.Invalid("a strategy is 'truthful' or a one-key mapping");
  }
  const std::string kind = f.node().begin()->first.as<std::string>();
  const Field arg = f.Child(kind);
  auto count = [&] {
    const long long k = arg.Integer();
    if (k < 0) arg.Invalid("count must be nonnegative");
    return static_cast<int>(k);
  };
  if (kind == "replicate") return Strategy::Replicate(count());
  if (kind == "withhold") return Strategy::Withhold(count());
  if (kind == "permute_values") {
    return Strategy::PermuteValues(arg.Points().points);
  }
  if (kind == "constant") return Strategy::Constant(arg.Points());
  if (kind == "custom") {
    std::map<Dataset, Dataset> table;
    for (std::size_t k = 0; k < arg.SequenceSize(); ++k) {
      const Field entry = arg.Item(k);
      entry.OnlyKeys({"truth", "report"});
      table[entry.Required("truth").Points()] =
          entry.Required("report").Points();
    }
    return Strategy::Custom(std::move(table));
  }
  f.Invalid("unknown strategy '" + kind + "'");
}

std::uint64_t NonNegative(const Field& f) {
  const long long x = f.Integer();
  if (x < 0) f.Invalid("must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

Scenario Build(const YAML::Node& root_node) {
  const Field root(root_node, "");
  if (!root_node.IsMap()) {
    Fail(ErrorKind::kValidationError, "scenario: expected a mapping");
  }
  root.OnlyKeys({"schema", "world", "mechanism", "days", "budgets", "budget",
                 "strategies", "reports", "audit", "seed", "enumeration_cap"});
  const Field schema = root.Required("schema");
  if (schema.Integer() != kScenarioSchema) {
    schema.Invalid("unsupported schema version (expected " +
                   std::to_string(kScenarioSchema) + ")");
  }

  Scenario s;
  if (const Field days = root.Child("days"); days.present()) {
    const long long t = days.Integer();
    if (t < 1) days.Invalid("days must be at least 1");
    s.days = static_cast<int>(t);
  }

  const Field budgets = root.Child("budgets");
  const Field budget = root.Child("budget");
  if (budgets.present() && budget.present()) {
    budget.Invalid("give either 'budget' or 'budgets', not both");
  }
  if (budgets.present()) {
    s.budgets = budgets.Doubles();
    if (s.budgets.size() != static_cast<std::size_t>(s.days)) {
      budgets.Invalid("need one budget per day (" + std::to_string(s.days) +
                      ")");
    }
  } else if (budget.present()) {
    s.budgets.assign(s.days, budget.Double());
  } else {
    root.Invalid("missing required field 'budgets'");
  }
  for (std::size_t t = 0; t < s.budgets.size(); ++t) {
    if (s.budgets[t] < 0.0) {
      (budgets.present() ? budgets.Item(t) : budget)
          .Invalid("budget must be nonnegative");
    }
  }

  const Field world = root.Required("world");
  const std::string type = world.Required("type").String();
  if (type == "finite") {
    s.finite = ParseFiniteWorld(world, s.budgets.front());
  } else if (type == "expfam") {
    s.expfam = ParseExpFam(world);
  } else {
    world.Child("type").Invalid("unknown world type '" + type +
                                "' (expected finite or expfam)");
  }
  const std::size_t n = s.num_providers();

  const Field mech = root.Required("mechanism");
  mech.OnlyKeys({"kind", "convex_pair", "last_day_rule", "bound_slack"});
  s.mechanism = Attributed(mech.Child("kind"), [&] {
    return ParseMechanismKind(mech.Required("kind").String());
  });
  if (const Field pair = mech.Child("convex_pair"); pair.present()) {
    s.convex_pair = pair.String();
    Attributed(pair, [&] { return &convex_pair_by_name(s.convex_pair); });
  }
  if (const Field rule = mech.Child("last_day_rule"); rule.present()) {
    s.last_day_rule =
        Attributed(rule, [&] { return ParseLastDayRule(rule.String()); });
  }
  if (const Field slack = mech.Child("bound_slack"); slack.present()) {
    s.bound_slack = static_cast<int>(NonNegative(slack));
  }
  if (s.expfam && s.mechanism != MechanismKind::kMultiTime) {
    mech.Child("kind").Invalid(
        "exponential-family worlds support only the multi_time mechanism");
  }

  if (const Field strategies = root.Child("strategies"); strategies.present()) {
    if (strategies.SequenceSize() != n) {
      strategies.Invalid("need one strategy per provider (" +
                         std::to_string(n) + ")");
    }
    for (std::size_t j = 0; j < n; ++j) {
      s.strategies.push_back(ParseStrategy(strategies.Item(j)));
      if (s.expfam) {
        const Strategy::Kind k = s.strategies.back().kind();
        if (k != Strategy::Kind::kTruthful && k != Strategy::Kind::kReplicate &&
            k != Strategy::Kind::kWithhold) {
          strategies.Item(j).Invalid(
              "real-valued data supports truthful, replicate and withhold");
        }
      }
    }
  } else {
    s.strategies.assign(n, Strategy::Truthful());
  }

  if (const Field reports = root.Child("reports"); reports.present()) {
    if (!s.finite) reports.Invalid("fixed reports need a finite world");
    if (reports.SequenceSize() != n) {
      reports.Invalid("need one report per provider (" + std::to_string(n) +
                      ")");
    }
    std::vector<Dataset> profile;
    for (std::size_t j = 0; j < n; ++j) {
      profile.push_back(reports.Item(j).Points());
      const std::size_t alphabet =
          s.finite->provider(j).likelihood.num_points();
      for (std::size_t d : profile.back().points) {
        if (d >= alphabet) {
          reports.Item(j).Invalid("point " + std::to_string(d) +
                                  " is outside an alphabet of " +
                                  std::to_string(alphabet));
        }
      }
    }
    s.reports = std::move(profile);
  }

  if (const Field audit = root.Child("audit"); audit.present()) {
    audit.OnlyKeys({"report_space", "max_size"});
    if (const Field space = audit.Child("report_space"); space.present()) {
      const std::string name = space.String();
      if (name == "same_size") {
        s.report_space = ReportSpace::SameSize();
      } else if (name != "all_sizes") {
        space.Invalid("expected same_size or all_sizes");
      }
    }
    if (const Field max = audit.Child("max_size"); max.present()) {
      if (s.report_space.same_size_only) {
        max.Invalid("max_size applies to all_sizes only");
      }
      s.report_space.max_size = static_cast<int>(NonNegative(max));
    }
  }

  if (const Field seed = root.Child("seed"); seed.present()) {
    s.seed = NonNegative(seed);
  }
  if (const Field cap = root.Child("enumeration_cap"); cap.present()) {
    s.enumeration_cap = NonNegative(cap);
  }
  return s;
}

}  // namespace

std::unique_ptr<ExpFamily> ExpFamSpec::Make() const {
  auto at = [&](const char* key) { return hyperparameters.at(key); };
  if (family == "gaussian_known_var") {
    return std::make_unique<GaussianKnownVariance>(at("sigma2"), at("mu0"),
                                                   at("sigma0_sq"));
  }
  if (family == "bernoulli_beta") {
    return std::make_unique<BernoulliBeta>(at("alpha0"), at("beta0"));
  }
  Fail(ErrorKind::kInvalidArgument, "unknown family '" + family + "'");
}

std::size_t Scenario::num_providers() const {
  if (finite) return finite->num_providers();
  if (expfam) return expfam->dataset_sizes.size();
  return 0;
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    Fail(ErrorKind::kParseError, std::string("scenario: ") + e.what());
  }
  return Build(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kParseError, "cannot open scenario '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace peerdata
