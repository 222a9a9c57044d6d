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

#include "peerdata/pmi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "peerdata/error.h"

namespace peerdata {
namespace {

void CheckShapes(const ProbVector& post_i, const ProbVector& post_mi,
                 const ProbVector& prior) {
  if (post_i.size() != prior.size() || post_mi.size() != prior.size()) {
    Fail(ErrorKind::kDimensionMismatch,
         "PMI inputs have lengths " + std::to_string(post_i.size()) + ", " +
             std::to_string(post_mi.size()) + ", " +
             std::to_string(prior.size()));
  }
}

// Upper bound on max/min over the positive entries of any posterior built from
// `points` point posteriors with point ratio `u` and prior ratio `t`.
double RatioBound(double u, int points, double t) {
  if (points <= 0) return t;
  return std::max(t, std::pow(u, points) * std::pow(t, points - 1));
}

double Eta(double ratio, std::size_t m) {
  return 1.0 / (1.0 + static_cast<double>(m) * ratio);
}

}  // namespace

double pmi_finite(const ProbVector& post_i, const ProbVector& post_mi,
                  const ProbVector& prior) {
  CheckShapes(post_i, post_mi, prior);
  double total = 0.0;
  for (std::size_t t = 0; t < prior.size(); ++t) {
    total += post_i[t] * post_mi[t] / prior[t];
  }
  return total;
}

bool in_support(const ProbVector& post_i, const ProbVector& post_mi,
                const ProbVector& prior) {
  CheckShapes(post_i, post_mi, prior);
  for (std::size_t t = 0; t < prior.size(); ++t) {
    if (post_i[t] > kSupportEpsilon && post_mi[t] > kSupportEpsilon) {
      return true;
    }
  }
  return false;
}

double log_pmi_score(const ProbVector& post_i, const ProbVector& post_mi,
                     const ProbVector& prior) {
  if (!in_support(post_i, post_mi, prior)) {
    Fail(ErrorKind::kOutOfSupport, "posteriors have disjoint support");
  }
  return std::log(pmi_finite(post_i, post_mi, prior));
}

std::vector<int> size_caps_with_slack(const World& world, int slack) {
  std::vector<int> caps;
  for (const Provider& p : world.providers()) {
    caps.push_back(p.n_points + slack);
  }
  return caps;
}

BoundDetails bound_details(const World& world, std::span<const int> size_caps) {
  const std::size_t n = world.num_providers();
  const std::size_t m = world.num_params();
  if (size_caps.size() != n) {
    Fail(ErrorKind::kDimensionMismatch, "one size cap per provider");
  }
  BoundDetails out;
  out.size_caps.assign(size_caps.begin(), size_caps.end());
  const ProbVector& prior = world.prior();
  out.prior_ratio = prior.max() / prior.min();

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t alphabet = world.provider(i).likelihood.num_points();
    double top = 0.0;
    double bottom = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < alphabet; ++d) {
      ProbVector post;
      try {
        post = point_posterior(world, i, d);
      } catch (const Error& e) {
        // A point that no parameter can produce never appears in a posterior.
        if (e.kind() == ErrorKind::kZeroEvidence) continue;
        throw;
      }
      for (double x : post.entries()) {
        top = std::max(top, x);
        if (x > 0.0) bottom = std::min(bottom, x);
      }
    }
    out.point_ratio.push_back(std::isfinite(bottom) ? top / bottom : 1.0);
  }

  const double t = out.prior_ratio;
  double lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double own =
        Eta(RatioBound(out.point_ratio[i], size_caps[i], t), m);
    // The peers' posterior is a product of all their point posteriors over
    // prior^(sum caps - 1); its ratio bound composes multiplicatively.
    int peer_points = 0;
    double peer_u_power = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      peer_points += size_caps[j];
      peer_u_power *= std::pow(out.point_ratio[j], size_caps[j]);
    }
    const double peer_ratio =
        peer_points <= 0
            ? t
            : std::max(t, peer_u_power * std::pow(t, peer_points - 1));
    const double peers = Eta(peer_ratio, m);
    out.eta_own.push_back(own);
    out.eta_peers.push_back(peers);
    lower = std::min(lower, std::log(own) + std::log(peers));
  }
  out.bounds.lower = lower;
  out.bounds.upper = std::log(1.0 / prior.min());
  if (!(out.bounds.lower < out.bounds.upper)) {
    Fail(ErrorKind::kDegenerateBounds,
         "L = " + std::to_string(out.bounds.lower) +
             " is not below R = " + std::to_string(out.bounds.upper));
  }
  return out;
}

PmiBounds bounds_finite(const World& world, std::span<const int> size_caps) {
  return bound_details(world, size_caps).bounds;
}

PmiBounds bounds_finite(const World& world) {
  const std::vector<int> caps = size_caps_with_slack(world, 0);
  return bounds_finite(world, caps);
}

}  // namespace peerdata
