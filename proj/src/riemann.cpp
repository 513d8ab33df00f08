#include "kropina/riemann.hpp"

#include <cassert>
#include <sstream>

namespace kropina {

namespace {

std::string point_text(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "(" << x.transpose() << ")";
  return os.str();
}

}  // namespace

MetricFrame metric_frame(const MetricField& g, const Eigen::VectorXd& x,
                         int order) {
  MetricFrame f;
  f.n = g.dim();
  f.x = x;
  f.order = order;
  f.h = g.eval_jet(x, order);
  f.value = jet_mat_values(f.h);
  Eigen::LLT<Eigen::MatrixXd> llt(f.value);
  if (llt.info() != Eigen::Success)
    throw SingularMetricError("metric not positive definite at " +
                              point_text(x));
  f.h_inv = jet_mat_inverse(f.h);
  f.inv = jet_mat_values(f.h_inv);
  return f;
}

Tensor3<Jet> christoffel_jets(const MetricFrame& f) {
  assert(f.order >= 1);
  const int n = f.n;
  const int q = f.order - 1;

  // dh(l, k, j) = d_j h_lk, one order below the frame.
  Tensor3<Jet> dh(n);
  for (int l = 0; l < n; ++l)
    for (int k = l; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        Jet d = f.h(l, k).derivative(j);
        dh(l, k, j) = d;
        if (k != l) dh(k, l, j) = d;
      }

  JetMat hi(n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) hi(i, l) = f.h_inv(i, l).truncated(q);

  Tensor3<Jet> gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet acc = Jet::constant(JetTable::get(n, q), 0.0);
        for (int l = 0; l < n; ++l)
          acc += hi(i, l) * (dh(l, k, j) + dh(l, j, k) - dh(j, k, l));
        acc *= 0.5;
        gamma(i, j, k) = acc;
        if (k != j) gamma(i, k, j) = acc;
      }
  return gamma;
}

Tensor3<double> christoffel(const MetricField& g, const Eigen::VectorXd& x) {
  MetricFrame f = metric_frame(g, x, 1);
  Tensor3<Jet> gj = christoffel_jets(f);
  Tensor3<double> r(f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k) r(i, j, k) = gj(i, j, k).value();
  return r;
}

JetMat covariant_deriv_jets(const MetricFrame& f, const VectorField& W) {
  assert(f.order >= 1);
  const int n = f.n;
  const int q = f.order - 1;
  JetVec w = W.eval_jet(f.x, f.order);
  JetVec wlow = jet_mat_vec(f.h, w);
  Tensor3<Jet> gamma = christoffel_jets(f);

  JetVec wlow_q(n);
  for (int r = 0; r < n; ++r) wlow_q[r] = wlow[r].truncated(q);

  JetMat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet acc = wlow[i].derivative(j);
      for (int r = 0; r < n; ++r) acc -= gamma(r, i, j) * wlow_q[r];
      d(i, j) = acc;
    }
  return d;
}

Eigen::MatrixXd covariant_deriv(const MetricField& h, const VectorField& W,
                                const Eigen::VectorXd& x) {
  MetricFrame f = metric_frame(h, x, 1);
  return jet_mat_values(covariant_deriv_jets(f, W));
}

Eigen::MatrixXd covariant_deriv_covector(const MetricField& g,
                                         const CovectorField& b,
                                         const Eigen::VectorXd& x) {
  MetricFrame f = metric_frame(g, x, 1);
  const int n = f.n;
  JetVec bj = b.eval_jet(x, 1);
  Tensor3<Jet> gamma = christoffel_jets(f);
  Eigen::VectorXd bv = jet_vec_values(bj);

  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = bj[i].partial({j});
      for (int r = 0; r < n; ++r) acc -= gamma(r, i, j).value() * bv[r];
      d(i, j) = acc;
    }
  return d;
}

NavDeform nav_deform(const MetricField& h, const VectorField& W,
                     const Eigen::VectorXd& x) {
  Eigen::MatrixXd d = covariant_deriv(h, W, x);
  Eigen::VectorXd w = W.values(x);
  NavDeform nd;
  nd.R = 0.5 * (d + d.transpose());
  nd.S = 0.5 * (d - d.transpose());
  nd.S1 = nd.S.transpose() * w;  // S_i = W^r S_{ri}
  return nd;
}

Eigen::MatrixXd lie_derivative_metric(const MetricField& h,
                                      const VectorField& W,
                                      const Eigen::VectorXd& x) {
  const int n = h.dim();
  JetMat hj = h.eval_jet(x, 1);
  JetVec wj = W.eval_jet(x, 1);
  Eigen::VectorXd w = jet_vec_values(wj);
  Eigen::MatrixXd dW(n, n);  // dW(r, j) = d_j W^r
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) dW(r, j) = wj[r].partial({j});

  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) {
        acc += w[r] * hj(i, j).partial({r});
        acc += hj(r, j).value() * dW(r, i);
        acc += hj(i, r).value() * dW(r, j);
      }
      L(i, j) = acc;
    }
  return L;
}

Tensor4<double> riemann_mixed(const MetricField& h, const Eigen::VectorXd& x) {
  MetricFrame f = metric_frame(h, x, 2);
  const int n = f.n;
  Tensor3<Jet> gj = christoffel_jets(f);  // order 1: values and first partials

  Tensor3<double> g(n);
  Tensor4<double> dg(n);  // dg(r, k, i, j) = d_j Gamma^r_{ki}
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        g(r, k, i) = gj(r, k, i).value();
        for (int j = 0; j < n; ++j) dg(r, k, i, j) = gj(r, k, i).partial({j});
      }

  Tensor4<double> R(n);
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = dg(r, k, i, j) - dg(r, k, j, i);
          for (int m = 0; m < n; ++m)
            acc += g(r, m, j) * g(m, k, i) - g(r, m, i) * g(m, k, j);
          R(k, r, i, j) = acc;
        }
  return R;
}

double sectional_curvature(const MetricField& h, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int n = h.dim();
  Eigen::MatrixXd hv = h.values(x);
  Tensor4<double> R = riemann_mixed(h, x);
  Eigen::VectorXd vlow = hv * v;

  double num = 0.0;
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          num += R(k, r, j, i) * u[k] * vlow[r] * u[j] * v[i];

  double uu = u.dot(hv * u), vv = v.dot(hv * v), uv = u.dot(hv * v);
  double den = uu * vv - uv * uv;
  if (!(den > 1e-14 * std::max(1.0, uu * vv)))
    throw DomainError("sectional curvature of a degenerate plane");
  return num / den;
}

Tensor3<double> second_covariant_deriv(const MetricField& h,
                                       const VectorField& W,
                                       const Eigen::VectorXd& x) {
  MetricFrame f = metric_frame(h, x, 3);
  const int n = f.n;
  JetMat d = covariant_deriv_jets(f, W);     // order 2
  Tensor3<Jet> gj = christoffel_jets(f);     // order 2

  Eigen::MatrixXd dv = jet_mat_values(d);
  Tensor3<double> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = d(i, j).partial({k});
        for (int r = 0; r < n; ++r) {
          acc -= gj(r, i, k).value() * dv(r, j);
          acc -= gj(r, j, k).value() * dv(i, r);
        }
        t(i, j, k) = acc;
      }
  return t;
}

}  // namespace kropina
