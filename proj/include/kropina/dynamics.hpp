#pragma once

// Flows of the wind and their tangent lifts, Killing equations in both the
// Finsler and the (alpha, beta) form, and fixed-step RK4 geodesics.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kropina/classify.hpp"
#include "kropina/kropina.hpp"

namespace kropina {

// K_V(F) = dF/dx^s V^s + dF/dy^s (dV^s/dx^u) y^u: the derivative of F along
// the tangent-lifted flow of V, from exact phase jets.
double killing_eq_F(const NavigationData& nav, const VectorField& V,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& y);
// With V = the wind itself.
double killing_eq_F(const NavigationData& nav, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

// K_V(alpha) = (V_{i;j} + V_{j;i}) y^i y^j / (2 alpha), ";" the a-connection.
double k_alpha(const MetricField& a, const VectorField& V,
               const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// K_V(beta) = (b_{j;i} V^i + b^i V_{i;j}) y^j.
double k_beta(const MetricField& a, const CovectorField& b,
              const VectorField& V, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);

// The named phi family for F = alpha * phi(beta/alpha).
enum class PhiFamily { kropina, randers, riemann };

struct AlphaBetaKilling {
  double eq_lhs;        // (phi - s phi') K_V(alpha) + phi' K_V(beta)
  double kropina_form;  // 2 beta K_V(alpha) - alpha K_V(beta)
};

// Both forms of the Killing equation; eq_lhs equals K_V(F) for the family
// member, and for the kropina member kropina_form = (beta^2/alpha) * eq_lhs.
AlphaBetaKilling alpha_beta_killing(PhiFamily phi, const MetricField& a,
                                    const CovectorField& b,
                                    const VectorField& V,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y);

// Flow-invariance of the metric through the (a, b) data: fits
// 2 r_ij = c(x) a_ij and confirms the transvected equation
// b_{t;s} b^s + b^s b_{s;t} = c(x) b_t is implied (its residual is bounded
// by the primary misfit times |b^sharp|).
PredicateResult ab_flow_killing_test(const KropinaData& k,
                                     const PointList& points, double tol);

struct FlowState {
  double t = 0.0;
  Eigen::VectorXd x, y;
};

struct FlowTrack {
  std::vector<FlowState> states;  // includes the initial state
  double dt = 0.0;
  bool exited = false;  // left the chart box before reaching T
  double t_exit = 0.0;
  std::string exit_reason;
};

// RK4 on xdot = W(x), ydot = (dW/dx) y.  T may be negative (reverse flow).
// On chart exit the track is truncated and flagged, not thrown.
FlowTrack integrate_flow(const NavigationData& nav, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& y0, double T, double dt,
                         const Box& box);

enum class GeodesicMode { finsler, riemann };

// RK4 on xdot = y, ydot = -2G(x, y).  Finsler mode normalizes y0 to
// F(x0, y0) = 1 and uses the Kropina spray (conic exit flagged); riemann
// mode uses the h-spray gamma^i_jk y^j y^k / 2 with y0 as given.
FlowTrack integrate_geodesic(const NavigationData& nav,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& y0, double T, double dt,
                             const Box& box, GeodesicMode mode);

// Max geodesic-equation residual || d(ybar)/dtau + 2G(xbar, ybar) || over
// sampled interior states of the track pushed through the wind flow for
// flow_time: the quantitative form of "isometries map geodesics to
// geodesics".  Central differences in the track parameter.
double flow_image_geodesic_residual(const NavigationData& nav,
                                    const FlowTrack& track, double flow_time,
                                    double flow_dt, const Box& box,
                                    int samples = 20);

// d/dt F(x(t), y(t)) at t = 0 along the lifted flow, by central differences
// over two short flow integrations; the ODE-side oracle for killing_eq_F.
double flow_F_derivative_fd(const NavigationData& nav,
                            const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& y0, double eps, double dt,
                            const Box& box);

}  // namespace kropina
