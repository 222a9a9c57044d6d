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

// One-parameter exponential families with conjugate priors written as
//   p(theta | nu, tau) = g(nu, tau) * b(theta) * exp(nu * (tau * eta(theta) -
//   A(theta)))
// so that PMI and the h-function reduce to ratios of normalizers g.
// Normalizers are handled in log space throughout.

#ifndef PEERDATA_EXPFAM_H_
#define PEERDATA_EXPFAM_H_

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

namespace peerdata {

// Conjugate-prior coordinates: pseudo-count nu and mean parameter tau.
struct ConjParams {
  double nu = 0.0;
  double tau = 0.0;

  bool operator==(const ConjParams&) const = default;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

class ExpFamily {
 public:
  virtual ~ExpFamily() = default;

  virtual std::string_view name() const = 0;
  // The prior's coordinates (nu_0, tau_0).
  virtual ConjParams prior() const = 0;
  virtual bool legal(const ConjParams& params) const = 0;
  // log g(params); throws IllegalCompositeParams outside the legal set.
  virtual double log_g(const ConjParams& params) const = 0;
  // Density of theta under the conjugate distribution, w.r.t. d theta.
  virtual double pdf(double theta, const ConjParams& params) const = 0;
  // Support of theta.
  virtual Interval domain() const = 0;

  double g(const ConjParams& params) const;

  // (nu0 + n, (nu0 * tau0 + n * suff_mean) / (nu0 + n)); n == 0 returns
  // params0 unchanged.
  ConjParams update(const ConjParams& params0, double suff_mean,
                    double n) const;

  // Parameters of the posterior given both parties' data:
  // nu_i + nu_mi - nu_0 and the matching pseudo-count-weighted tau.
  ConjParams composite(const ConjParams& p_i, const ConjParams& p_mi,
                       const ConjParams& p0) const;

  // Posterior given every dataset behind `posts`, each of which was updated
  // from p0 independently. An empty list returns p0.
  ConjParams pool(const std::vector<ConjParams>& posts,
                  const ConjParams& p0) const;

 protected:
  void RequireLegal(const ConjParams& params) const;
};

// Mean of a normal with known variance sigma2, prior N(mu0, sigma0_sq).
// tau is the posterior mean of the unknown mean and nu = sigma2 / variance of
// that posterior, so the prior sits at (sigma2 / sigma0_sq, mu0).
class GaussianKnownVariance final : public ExpFamily {
 public:
  GaussianKnownVariance(double sigma2, double mu0, double sigma0_sq);

  std::string_view name() const override { return "gaussian_known_var"; }
  ConjParams prior() const override;
  bool legal(const ConjParams& params) const override;
  double log_g(const ConjParams& params) const override;
  double pdf(double theta, const ConjParams& params) const override;
  Interval domain() const override;

  // Posterior after n points with sample mean `mean`.
  ConjParams posterior(int n, double mean) const;
  // Mean and variance of the normal distribution over theta.
  std::pair<double, double> moments(const ConjParams& params) const;

  double sigma2() const { return sigma2_; }
  double mu0() const { return mu0_; }
  double sigma0_sq() const { return sigma0_sq_; }

 private:
  double sigma2_;
  double mu0_;
  double sigma0_sq_;
};

// Bernoulli success probability with a Beta(alpha0, beta0) prior.
// Beta(a, b) corresponds to nu = a + b and tau = a / (a + b).
class BernoulliBeta final : public ExpFamily {
 public:
  BernoulliBeta(double alpha0, double beta0);

  std::string_view name() const override { return "bernoulli_beta"; }
  ConjParams prior() const override;
  bool legal(const ConjParams& params) const override;
  double log_g(const ConjParams& params) const override;
  double pdf(double theta, const ConjParams& params) const override;
  Interval domain() const override;

  // Posterior after `ones` successes and `zeros` failures.
  ConjParams posterior(double ones, double zeros) const;
  static ConjParams FromShapes(double a, double b);
  static std::pair<double, double> Shapes(const ConjParams& params);

  double alpha0() const { return alpha0_; }
  double beta0() const { return beta0_; }

 private:
  double alpha0_;
  double beta0_;
};

// g(p_i) g(p_mi) / (g(p0) g(composite)).
double pmi_expfam(const ExpFamily& family, const ConjParams& p_i,
                  const ConjParams& p_mi, const ConjParams& p0);
double log_pmi_expfam(const ExpFamily& family, const ConjParams& p_i,
                      const ConjParams& p_mi, const ConjParams& p0);

// g(p_i) / g(composite).
double h_value(const ExpFamily& family, const ConjParams& p_i,
               const ConjParams& p_mi, const ConjParams& p0);

// Closed-form PMI interval for the Gaussian family when at most n_max points
// are observed in total: [(1 + n_max s0^2/s^2)^(-1/2), 1 + n_max s0^2/s^2].
// Only a bound on PMI for datasets whose sample means equal the prior mean;
// shifted means make the PMI unbounded.
Interval gaussian_pmi_bounds(double sigma, double sigma0, int n_max);

}  // namespace peerdata

#endif  // PEERDATA_EXPFAM_H_
