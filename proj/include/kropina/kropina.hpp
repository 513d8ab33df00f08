#pragma once

// The Kropina metric F = alpha^2 / beta and its navigation description.
//
// A pair (a, b) with a Riemannian and b nowhere-zero determines F; the same
// F is described by navigation data (h, W) through
//   h_ij = e^kappa a_ij,   2 W_i = e^kappa b_i,   e^kappa |b|_a^2 = 4,
// which makes W a unit field for h and pins kappa = log 4 - log |b|_a^2.
// In navigation form F(x, y) = h(y, y) / (2 h(W, y)) on the half-space
// h(W, y) > 0 of each tangent space.

#include <Eigen/Dense>

#include "kropina/fields.hpp"
#include "kropina/riemann.hpp"
#include "kropina/tensors.hpp"

namespace kropina {

struct NavigationData {
  MetricFieldPtr h;
  VectorFieldPtr W;
  int dim() const { return h->dim(); }
};

struct KropinaData {
  MetricFieldPtr a;
  CovectorFieldPtr b;
  ScalarFieldPtr kappa;  // log 4 - log |b|_a^2, kept explicit for reuse
  int dim() const { return a->dim(); }
};

// h = e^kappa a, W^i = a^{ij} b_j / 2.
NavigationData to_navigation(const KropinaData& k);

// Gauge kappa == 0: a = h, b = 2 W-flat.  Valid when |W|_h == 1; that is
// checked where fields are sampled (scene validation), not here.
KropinaData from_navigation(const NavigationData& nav);

// Arbitrary gauge: a = e^{-kappa} h, b = 2 e^{-kappa} W-flat.
KropinaData from_navigation_gauged(const NavigationData& nav,
                                   ScalarFieldPtr kappa);

struct TangentSample {
  Eigen::VectorXd x, y;
};

// Conic admissibility threshold on W_0 = h(W, y).
inline constexpr double kConicEps = 1e-9;

double eval_F(const NavigationData& nav, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);  // throws ConicDomainError
double eval_F(const KropinaData& k, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);  // alpha^2 / beta on beta > 0

// F as a jet over the phase table (2n, order): variables 0..n-1 are x,
// n..2n-1 are y.
Jet phase_jet_F(const NavigationData& nav, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y, int order);

// g_ij(x, y) = 1/2 d^2 F^2 / dy^i dy^j; positive definite on the conic
// domain, with a conditioning guard (cond > 1e12 is an error).
Eigen::MatrixXd fundamental_tensor(const NavigationData& nav,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y);

// Geodesic spray coefficients and their fiber derivatives at one sample:
//   2 G^i = g^{il} (y^m d^2 F^2/dx^m dy^l - dF^2/dx^l) / 2.
struct SprayResult {
  Eigen::VectorXd G;             // spray coefficients G^i
  Eigen::MatrixXd G_y;           // dG^i/dy^j               (i, j)
  Tensor3<double> berwald;       // d2G^i/dy^j dy^k         (i, j, k)
  Tensor4<double> berwald_y;     // d3G^i/dy^j dy^k dy^l    (i, j, k, l)
  Eigen::MatrixXd mean_berwald;  // trace of berwald_y over i = l
  Eigen::MatrixXd g;             // fundamental tensor
  Eigen::MatrixXd R;             // spray curvature R^i_k
};
SprayResult spray(const NavigationData& nav, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y);

// Value-only spray, cheap enough for an integrator step.
Eigen::VectorXd spray_value(const NavigationData& nav, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

// Closed form valid when W is unit Killing:
//   G^i = gamma^i_{jk} y^j y^k / 2 - F S^i_j y^j,  S^i_j = h^{ir} S_{rj}.
Eigen::VectorXd spray_killing_closed_form(const NavigationData& nav,
                                          const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y);

// Flag curvature with pole y and transverse edge u:
//   K = u^m (g_mi R^i_k) u^k / (g(y,y) g(u,u) - g(y,u)^2).
double flag_curvature(const NavigationData& nav, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& u);

}  // namespace kropina
