#pragma once

// Point-local Riemannian computations on a chart: Christoffel symbols,
// covariant derivatives, curvature, sectional curvature, Lie derivative.
//
// Curvature index convention, fixed once for the whole library:
//   R(k, r, i, j) = R_k{}^r{}_{ij}
//                 = d_j Gamma^r_{ki} - d_i Gamma^r_{kj}
//                   + Gamma^r_{mj} Gamma^m_{ki} - Gamma^r_{mi} Gamma^m_{kj},
// under which a space of constant sectional curvature K satisfies
//   R_k{}^r{}_{ji} = K (h_kj delta^r_i - h_ki delta^r_j)
// and the unit sphere comes out at K = +1.

#include <Eigen/Dense>

#include "kropina/fields.hpp"
#include "kropina/tensors.hpp"

namespace kropina {

// Jets of h and h^-1 at x, with the positive-definiteness of h(x) already
// checked (Cholesky); the starting point of every computation below.
struct MetricFrame {
  int n = 0;
  Eigen::VectorXd x;
  int order = 0;
  JetMat h, h_inv;            // jets over the chart table (n, order)
  Eigen::MatrixXd value, inv;  // their value parts
};

MetricFrame metric_frame(const MetricField& g, const Eigen::VectorXd& x,
                         int order = 3);

// Gamma^i_{jk} as jets of one order less than the frame; slot order
// (upper, lower, lower).
Tensor3<Jet> christoffel_jets(const MetricFrame& f);
Tensor3<double> christoffel(const MetricField& g, const Eigen::VectorXd& x);

// W_{i||j} = d_j W_i - Gamma^r_{ij} W_r, where W_i = h_ir W^r; jets of one
// order less than the frame.
JetMat covariant_deriv_jets(const MetricFrame& f, const VectorField& W);
Eigen::MatrixXd covariant_deriv(const MetricField& h, const VectorField& W,
                                const Eigen::VectorXd& x);

// b_{i;j} = d_j b_i - Gamma^r_{ij} b_r for a covector field, same connection.
Eigen::MatrixXd covariant_deriv_covector(const MetricField& g,
                                         const CovectorField& b,
                                         const Eigen::VectorXd& x);

// Symmetric / antisymmetric split of W_{i||j}, plus S_i = W^r S_{ri}.
struct NavDeform {
  Eigen::MatrixXd R;   // R_ij = (W_{i||j} + W_{j||i}) / 2
  Eigen::MatrixXd S;   // S_ij = (W_{i||j} - W_{j||i}) / 2
  Eigen::VectorXd S1;  // S_i = W^r S_{ri}
};
NavDeform nav_deform(const MetricField& h, const VectorField& W,
                     const Eigen::VectorXd& x);

// (L_W h)_ij = W^r d_r h_ij + h_rj d_i W^r + h_ir d_j W^r, straight from
// partial derivatives -- an independent route to 2 R_ij.
Eigen::MatrixXd lie_derivative_metric(const MetricField& h,
                                      const VectorField& W,
                                      const Eigen::VectorXd& x);

// R(k, r, i, j) = R_k{}^r{}_{ij}; see the header comment.
Tensor4<double> riemann_mixed(const MetricField& h, const Eigen::VectorXd& x);

// sec(u, v) = R_k{}^r{}_{ji} u^k v_r u^j v^i / (|u|^2 |v|^2 - <u,v>^2).
double sectional_curvature(const MetricField& h, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// W_{i||j||k}: covariant derivative of W_{i||j} in the slot k.
Tensor3<double> second_covariant_deriv(const MetricField& h,
                                       const VectorField& W,
                                       const Eigen::VectorXd& x);

}  // namespace kropina
