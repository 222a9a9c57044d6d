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

#include "peerdata/expfam.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "peerdata/error.h"

namespace peerdata {
namespace {

std::string Describe(const ConjParams& p) {
  return "(nu=" + std::to_string(p.nu) + ", tau=" + std::to_string(p.tau) +
         ")";
}

double LogBeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void RequirePositive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    Fail(ErrorKind::kInvalidArgument, std::string(what) + " must be positive");
  }
}

}  // namespace

double ExpFamily::g(const ConjParams& params) const {
  return std::exp(log_g(params));
}

void ExpFamily::RequireLegal(const ConjParams& params) const {
  if (!legal(params)) {
    Fail(ErrorKind::kIllegalCompositeParams,
         std::string(name()) + " parameters " + Describe(params) +
             " are outside the legal set");
  }
}

ConjParams ExpFamily::update(const ConjParams& params0, double suff_mean,
                             double n) const {
  if (!(n >= 0.0)) Fail(ErrorKind::kInvalidArgument, "negative sample count");
  if (n == 0.0) return params0;
  const double nu = params0.nu + n;
  return {nu, (params0.nu * params0.tau + n * suff_mean) / nu};
}

ConjParams ExpFamily::composite(const ConjParams& p_i, const ConjParams& p_mi,
                                const ConjParams& p0) const {
  RequireLegal(p_i);
  RequireLegal(p_mi);
  RequireLegal(p0);
  const double nu = p_i.nu + p_mi.nu - p0.nu;
  if (!(nu > 0.0)) {
    Fail(ErrorKind::kIllegalCompositeParams,
         "composite pseudo-count " + std::to_string(nu) + " is not positive");
  }
  const ConjParams out{
      nu, (p_i.nu * p_i.tau + p_mi.nu * p_mi.tau - p0.nu * p0.tau) / nu};
  RequireLegal(out);
  return out;
}

ConjParams ExpFamily::pool(const std::vector<ConjParams>& posts,
                           const ConjParams& p0) const {
  ConjParams out = p0;
  for (const ConjParams& p : posts) out = composite(out, p, p0);
  return out;
}

GaussianKnownVariance::GaussianKnownVariance(double sigma2, double mu0,
                                             double sigma0_sq)
    : sigma2_(sigma2), mu0_(mu0), sigma0_sq_(sigma0_sq) {
  RequirePositive(sigma2, "sigma2");
  RequirePositive(sigma0_sq, "sigma0_sq");
  if (!std::isfinite(mu0)) Fail(ErrorKind::kInvalidArgument, "mu0");
}

ConjParams GaussianKnownVariance::prior() const {
  return {sigma2_ / sigma0_sq_, mu0_};
}

bool GaussianKnownVariance::legal(const ConjParams& params) const {
  return params.nu > 0.0 && std::isfinite(params.nu) &&
         std::isfinite(params.tau);
}

// The conjugate density is N(tau, sigma2 / nu) written as
// g * exp(nu * (tau * theta - theta^2 / 2) / sigma2), hence
// g = sqrt(nu / (2 pi sigma2)) * exp(-nu tau^2 / (2 sigma2)).
double GaussianKnownVariance::log_g(const ConjParams& params) const {
  RequireLegal(params);
  return 0.5 * std::log(params.nu / (2.0 * std::numbers::pi * sigma2_)) -
         params.nu * params.tau * params.tau / (2.0 * sigma2_);
}

double GaussianKnownVariance::pdf(double theta,
                                  const ConjParams& params) const {
  RequireLegal(params);
  const auto [mean, var] = moments(params);
  const double z = theta - mean;
  return std::exp(-0.5 * z * z / var) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

Interval GaussianKnownVariance::domain() const {
  return {-std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
}

ConjParams GaussianKnownVariance::posterior(int n, double mean) const {
  return update(prior(), mean, static_cast<double>(n));
}

std::pair<double, double> GaussianKnownVariance::moments(
    const ConjParams& params) const {
  return {params.tau, sigma2_ / params.nu};
}

BernoulliBeta::BernoulliBeta(double alpha0, double beta0)
    : alpha0_(alpha0), beta0_(beta0) {
  RequirePositive(alpha0, "alpha0");
  RequirePositive(beta0, "beta0");
}

ConjParams BernoulliBeta::prior() const { return FromShapes(alpha0_, beta0_); }

bool BernoulliBeta::legal(const ConjParams& params) const {
  if (!(params.nu > 0.0) || !std::isfinite(params.nu)) return false;
  const auto [a, b] = Shapes(params);
  return a > 0.0 && b > 0.0;
}

// With base measure d theta / (theta (1 - theta)) the conjugate density is
// theta^a (1 - theta)^b * g, so g = 1 / B(a, b).
double BernoulliBeta::log_g(const ConjParams& params) const {
  RequireLegal(params);
  const auto [a, b] = Shapes(params);
  return -LogBeta(a, b);
}

double BernoulliBeta::pdf(double theta, const ConjParams& params) const {
  RequireLegal(params);
  if (theta <= 0.0 || theta >= 1.0) return 0.0;
  const auto [a, b] = Shapes(params);
  return std::exp((a - 1.0) * std::log(theta) + (b - 1.0) * std::log1p(-theta) -
                  LogBeta(a, b));
}

Interval BernoulliBeta::domain() const { return {0.0, 1.0}; }

ConjParams BernoulliBeta::posterior(double ones, double zeros) const {
  if (ones < 0.0 || zeros < 0.0) {
    Fail(ErrorKind::kInvalidArgument, "negative Bernoulli counts");
  }
  const double n = ones + zeros;
  return update(prior(), n > 0.0 ? ones / n : 0.0, n);
}

ConjParams BernoulliBeta::FromShapes(double a, double b) {
  return {a + b, a / (a + b)};
}

std::pair<double, double> BernoulliBeta::Shapes(const ConjParams& params) {
  const double a = params.nu * params.tau;
  return {a, params.nu - a};
}

double log_pmi_expfam(const ExpFamily& family, const ConjParams& p_i,
                      const ConjParams& p_mi, const ConjParams& p0) {
  const ConjParams joint = family.composite(p_i, p_mi, p0);
  return family.log_g(p_i) + family.log_g(p_mi) - family.log_g(p0) -
         family.log_g(joint);
}

double pmi_expfam(const ExpFamily& family, const ConjParams& p_i,
                  const ConjParams& p_mi, const ConjParams& p0) {
  return std::exp(log_pmi_expfam(family, p_i, p_mi, p0));
}

double h_value(const ExpFamily& family, const ConjParams& p_i,
               const ConjParams& p_mi, const ConjParams& p0) {
  const ConjParams joint = family.composite(p_i, p_mi, p0);
  return std::exp(family.log_g(p_i) - family.log_g(joint));
}

Interval gaussian_pmi_bounds(double sigma, double sigma0, int n_max) {
  RequirePositive(sigma, "sigma");
  RequirePositive(sigma0, "sigma0");
  if (n_max < 1) Fail(ErrorKind::kInvalidArgument, "n_max must be >= 1");
  const double spread =
      1.0 + static_cast<double>(n_max) * sigma0 * sigma0 / (sigma * sigma);
  return {1.0 / std::sqrt(spread), spread};
}

}  // namespace peerdata
