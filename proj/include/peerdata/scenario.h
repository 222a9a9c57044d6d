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

// Scenario files: a YAML document with a `schema: 1` header describing a
// world, a mechanism, a budget schedule and per-provider strategies. See
// README.md for the full field list.

#ifndef PEERDATA_SCENARIO_H_
#define PEERDATA_SCENARIO_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peerdata/bayes_core.h"
#include "peerdata/expfam.h"
#include "peerdata/mechanisms.h"
#include "peerdata/sim.h"

namespace peerdata {

inline constexpr int kScenarioSchema = 1;

struct ExpFamSpec {
  // "gaussian_known_var" or "bernoulli_beta".
  std::string family;
  // sigma2, mu0, sigma0_sq for the Gaussian; alpha0, beta0 for the Beta.
  std::map<std::string, double> hyperparameters;
  std::vector<int> dataset_sizes;

  std::unique_ptr<ExpFamily> Make() const;
};

struct Scenario {
  // Exactly one of these is set.
  std::optional<World> finite;
  std::optional<ExpFamSpec> expfam;

  MechanismKind mechanism = MechanismKind::kOneTime;
  std::string convex_pair = "logistic";
  LastDayRule last_day_rule = LastDayRule::kEqualSplit;
  // One-time bounds allow every provider n_points + bound_slack points.
  int bound_slack = 1;

  int days = 1;
  std::vector<double> budgets;  // one per day
  std::vector<Strategy> strategies;
  // Optional fixed report profile for run-once.
  std::optional<std::vector<Dataset>> reports;
  ReportSpace report_space;

  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  std::size_t num_providers() const;
};

// Both throw ParseError for malformed YAML and ValidationError, with the
// field path and source line, for a well-formed document that breaks an
// invariant.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace peerdata

#endif  // PEERDATA_SCENARIO_H_
