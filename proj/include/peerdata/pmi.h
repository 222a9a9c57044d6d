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

// Pointwise mutual information between two datasets on a finite parameter
// space, and the score bounds [L, R] used to normalize log-PMI payments.

#ifndef PEERDATA_PMI_H_
#define PEERDATA_PMI_H_

#include <span>
#include <vector>

#include "peerdata/bayes_core.h"

namespace peerdata {

// Posterior entries at or below this are treated as zero when deciding
// support.
inline constexpr double kSupportEpsilon = 1e-15;

struct PmiBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// sum_theta post_i(theta) * post_mi(theta) / prior(theta).
double pmi_finite(const ProbVector& post_i, const ProbVector& post_mi,
                  const ProbVector& prior);

// True when some theta has both posteriors above kSupportEpsilon.
bool in_support(const ProbVector& post_i, const ProbVector& post_mi,
                const ProbVector& prior);

// log of pmi_finite; throws OutOfSupport when the supports are disjoint.
double log_pmi_score(const ProbVector& post_i, const ProbVector& post_mi,
                     const ProbVector& prior);

// Everything bounds_finite derives on the way to [L, R].
struct BoundDetails {
  PmiBounds bounds;
  double prior_ratio = 1.0;          // max p(theta) / min p(theta)
  std::vector<double> point_ratio;   // per provider, over its point posteriors
  std::vector<double> eta_own;       // per provider i, eta(D_i, cap_i)
  std::vector<double> eta_peers;     // per provider i, eta(D_-i, caps_-i)
  std::vector<int> size_caps;
};

// Bounds valid for every report profile in which provider j reports at most
// size_caps[j] points. Polynomial in the alphabet sizes, m and the caps.
BoundDetails bound_details(const World& world, std::span<const int> size_caps);

// bound_details with each provider capped at its own n_points.
PmiBounds bounds_finite(const World& world);
PmiBounds bounds_finite(const World& world, std::span<const int> size_caps);

// Caps of n_points + slack for every provider.
std::vector<int> size_caps_with_slack(const World& world, int slack);

}  // namespace peerdata

#endif  // PEERDATA_PMI_H_
