#pragma once

// Residual-reporting classifiers for the structure of a Kropina space:
// weakly-Berwald / Berwald conditions in both presentations, the conformal
// split identity linking them, and position-only flag curvature.
//
// Every test reports residuals and a verdict; nothing here samples randomly.
// Callers supply the evaluation points (and flag probes), so reports are
// deterministic reductions over the given inputs.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kropina/kropina.hpp"
#include "kropina/riemann.hpp"

namespace kropina {

// Covariant derivative of the 1-form b with respect to the a-metric's
// Levi-Civita connection (denoted ";"), split into symmetric and
// antisymmetric parts, plus the transvected covector.
struct RSTensors {
  Eigen::MatrixXd d;   // d(i, j) = b_{i;j}
  Eigen::MatrixXd r;   // r_ij = (b_{i;j} + b_{j;i}) / 2
  Eigen::MatrixXd s;   // s_ij = (b_{i;j} - b_{j;i}) / 2
  Eigen::VectorXd s1;  // s_i = a^{rs} b_r s_si
};
RSTensors rs_tensors(const KropinaData& k, const Eigen::VectorXd& x);

// Least-squares fit of t against c * m.
struct ProportionalityFit {
  double c = 0.0;         // fitted scalar
  double residual = 0.0;  // ||t - c m||_F / max(||t||_F, 1e-30)
  double misfit = 0.0;    // ||t - c m||_F
};

// c = (m^{ij} t_ij) / n, the minimizer in the inner product weighted by
// m^{-1}; m must be positive definite.
ProportionalityFit fit_proportional(const Eigen::MatrixXd& t,
                                    const Eigen::MatrixXd& m);

// c = <t, m>_F / ||m||_F^2; safe for singular m (the fit used when m has a
// kernel, as h_ij - W_i W_j does).
ProportionalityFit fit_frobenius(const Eigen::MatrixXd& t,
                                 const Eigen::MatrixXd& m);

// One classifier's aggregate over its evaluation points.
struct PredicateResult {
  std::string name;
  bool verdict = false;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  std::map<std::string, double> fitted;  // fitted scalars by label
  std::string note;                      // set when a route disagrees etc.
};

using PointList = std::vector<Eigen::VectorXd>;

// r_ij = c(x) a_ij fit over the points; residual is the absolute Frobenius
// misfit after the fit.  fitted reports the mean c and, for diagnostic use,
// max |c + W_r kappabar^r| (zero wherever the condition itself holds).
PredicateResult weakly_berwald_test(const KropinaData& k,
                                    const PointList& points, double tol);

// Weakly-Berwald fit plus the extra closure condition
// s_j b_i - s_i b_j = b^2 s_ij; residual is the max of both streams.
PredicateResult berwald_test(const KropinaData& k, const PointList& points,
                             double tol);

// Navigation-side routes: max ||R_ij||_F (Killing residual) and
// max ||W_{i||j}||_F (parallel residual).
PredicateResult nav_weakly_berwald_test(const NavigationData& nav,
                                        const PointList& points, double tol);
PredicateResult nav_berwald_test(const NavigationData& nav,
                                 const PointList& points, double tol);

// || r_ij - 2 e^{-kappa} (R_ij - (W_r kappabar^r) h_ij / 2) ||_F at x, the
// identity tying the a-connection derivative of b to the h-connection
// deformation of W.  Holds in any gauge, Killing or not.
double conformal_split_residual(const KropinaData& k,
                                const NavigationData& nav,
                                const Eigen::VectorXd& x);

// || S_ij - (W_i S_j - W_j S_i) ||_F at x; the Berwald closure condition
// transported to navigation data (and an identity when n = 2).
double deformation_skew_residual(const NavigationData& nav,
                                 const Eigen::VectorXd& x);

// Flag samples at one point: poles ys[k] paired with transverse edges us[k].
struct FlagProbe {
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> ys;
  std::vector<Eigen::VectorXd> us;
};

// Position-only flag curvature test.  Preconditions W Killing at the probe
// points; fits K(x) from h_rs W^s_{||i} W^r_{||j} = K(x)(h_ij - W_i W_j),
// requires K(x) >= -tol, and cross-checks against the spread of direct flag
// curvatures over the probes' flags.
PredicateResult p_scalar_test(const NavigationData& nav,
                              const std::vector<FlagProbe>& probes,
                              double tol_predicate, double tol_spread);

}  // namespace kropina
