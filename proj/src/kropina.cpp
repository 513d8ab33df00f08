#include "kropina/kropina.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace kropina {

namespace {

std::string point_text(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::ostringstream os;
  os << "x = (" << x.transpose() << "), y = (" << y.transpose() << ")";
  return os.str();
}

// Jets of h, W-flat and the fiber variables over the phase table (2n, order).
struct PhaseFrame {
  int n = 0;
  const JetTable* table = nullptr;
  JetMat h;      // h_ij embedded in phase variables
  JetVec wlow;   // W_i = h_ij W^j
  JetVec yvar;   // fiber variables y^i
  Jet h00, w0;   // h(y, y) and h(W, y)
};

PhaseFrame phase_frame(const NavigationData& nav, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, int order) {
  PhaseFrame f;
  f.n = nav.dim();
  const JetTable& tp = JetTable::get(2 * f.n, order);
  f.table = &tp;

  JetMat hx = nav.h->eval_jet(x, order);
  JetVec wx = nav.W->eval_jet(x, order);
  JetVec wlow_x = jet_mat_vec(hx, wx);

  f.h = JetMat(f.n, f.n);
  f.wlow.resize(f.n);
  f.yvar.resize(f.n);
  for (int i = 0; i < f.n; ++i) {
    f.wlow[i] = wlow_x[i].embedded(tp);
    f.yvar[i] = Jet::variable(tp, f.n + i, y[i]);
    for (int j = 0; j < f.n; ++j) f.h(i, j) = hx(i, j).embedded(tp);
  }

  Jet h00 = Jet::constant(tp, 0.0);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) h00 += f.h(i, j) * f.yvar[i] * f.yvar[j];
  Jet w0 = Jet::constant(tp, 0.0);
  for (int i = 0; i < f.n; ++i) w0 += f.wlow[i] * f.yvar[i];

  if (!(w0.value() > kConicEps))
    throw ConicDomainError("tangent vector outside the conic domain (h(W, y) = " +
                           std::to_string(w0.value()) + ") at " +
                           point_text(x, y));
  f.h00 = h00;
  f.w0 = w0;
  return f;
}

// The full jet-calculus spray pipeline at one sample.  F^2 carries phase
// order `order + 2`; two fiber derivatives leave everything at `order`.
struct SprayJets {
  int n = 0;
  Eigen::VectorXd y;
  JetMat g;       // fundamental tensor jets, phase order `order`
  JetVec G;       // spray coefficient jets, phase order `order`
};

SprayJets spray_jets(const NavigationData& nav, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y, int order) {
  const int n = nav.dim();
  PhaseFrame f = phase_frame(nav, x, y, order + 2);
  Jet F = f.h00 * recip(2.0 * f.w0);
  Jet F2 = F * F;

  SprayJets s;
  s.n = n;
  s.y = y;

  // g_jl = 1/2 d^2 F^2 / dy^j dy^l
  s.g = JetMat(n, n);
  for (int j = 0; j < n; ++j) {
    Jet dj = F2.derivative(n + j);
    for (int l = j; l < n; ++l) {
      Jet v = 0.5 * dj.derivative(n + l);
      s.g(j, l) = v;
      if (l != j) s.g(l, j) = v;
    }
  }

  Eigen::MatrixXd g0 = jet_mat_values(s.g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g0);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0))
    throw SingularMetricError(
        "fundamental tensor not positive definite at " + point_text(x, y));
  if (lmax / lmin > 1e12)
    throw NumericError("fundamental tensor condition number exceeds 1e12 at " +
                       point_text(x, y));

  // B_l = y^m d^2 F^2/dx^m dy^l - dF^2/dx^l, at phase order `order`.
  const JetTable& tq = JetTable::get(2 * n, order);
  JetVec yq(n);
  for (int m = 0; m < n; ++m) yq[m] = Jet::variable(tq, n + m, y[m]);
  JetVec B(n);
  for (int l = 0; l < n; ++l) {
    Jet acc = Jet::constant(tq, 0.0);
    for (int m = 0; m < n; ++m)
      acc += F2.derivative(m).derivative(n + l) * yq[m];
    acc -= F2.derivative(l).truncated(order);
    B[l] = acc;
  }

  JetMat ginv = jet_mat_inverse(s.g);
  s.G.resize(n);
  for (int i = 0; i < n; ++i) {
    Jet acc = Jet::constant(tq, 0.0);
    for (int l = 0; l < n; ++l) acc += ginv(i, l) * B[l];
    s.G[i] = 0.25 * acc;
  }
  return s;
}

}  // namespace

NavigationData to_navigation(const KropinaData& k) {
  NavigationData nav;
  nav.h = make_scaled_metric(k.a, k.kappa, +1.0);
  nav.W = make_raised_covector(k.a, k.b, 0.5);
  return nav;
}

KropinaData from_navigation(const NavigationData& nav) {
  KropinaData k;
  k.a = nav.h;
  k.b = make_lowered_vector(nav.h, nav.W, nullptr, 0.0, 2.0);
  k.kappa = make_const_scalar(nav.dim(), 0.0);
  return k;
}

KropinaData from_navigation_gauged(const NavigationData& nav,
                                   ScalarFieldPtr kappa) {
  KropinaData k;
  k.a = make_scaled_metric(nav.h, kappa, -1.0);
  k.b = make_lowered_vector(nav.h, nav.W, kappa, -1.0, 2.0);
  k.kappa = std::move(kappa);
  return k;
}

double eval_F(const NavigationData& nav, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  Eigen::MatrixXd h = nav.h->values(x);
  Eigen::VectorXd w = nav.W->values(x);
  double h00 = y.dot(h * y);
  double w0 = w.dot(h * y);
  if (!(w0 > kConicEps))
    throw ConicDomainError("tangent vector outside the conic domain (h(W, y) = " +
                           std::to_string(w0) + ") at " + point_text(x, y));
  return h00 / (2.0 * w0);
}

double eval_F(const KropinaData& k, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  Eigen::MatrixXd a = k.a->values(x);
  Eigen::VectorXd b = k.b->values(x);
  double alpha2 = y.dot(a * y);
  double beta = b.dot(y);
  if (!(beta > 0.0))
    throw ConicDomainError("tangent vector outside the conic domain (beta = " +
                           std::to_string(beta) + ") at " + point_text(x, y));
  return alpha2 / beta;
}

Jet phase_jet_F(const NavigationData& nav, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y, int order) {
  PhaseFrame f = phase_frame(nav, x, y, order);
  return f.h00 * recip(2.0 * f.w0);
}

Eigen::MatrixXd fundamental_tensor(const NavigationData& nav,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) {
  const int n = nav.dim();
  Jet F = phase_jet_F(nav, x, y, 2);
  Jet F2 = F * F;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = 0.5 * F2.partial({n + i, n + j});
      g(j, i) = g(i, j);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0))
    throw SingularMetricError(
        "fundamental tensor not positive definite at " + point_text(x, y));
  if (lmax / lmin > 1e12)
    throw NumericError("fundamental tensor condition number exceeds 1e12 at " +
                       point_text(x, y));
  return g;
}

SprayResult spray(const NavigationData& nav, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  const int n = nav.dim();
  SprayJets s = spray_jets(nav, x, y, 3);

  SprayResult r;
  r.G.resize(n);
  r.G_y.resize(n, n);
  r.berwald = Tensor3<double>(n);
  r.berwald_y = Tensor4<double>(n);
  r.mean_berwald = Eigen::MatrixXd::Zero(n, n);
  r.g = jet_mat_values(s.g);
  r.R.resize(n, n);

  for (int i = 0; i < n; ++i) {
    r.G[i] = s.G[i].value();
    for (int j = 0; j < n; ++j) {
      r.G_y(i, j) = s.G[i].partial({n + j});
      for (int k = 0; k < n; ++k) {
        r.berwald(i, j, k) = s.G[i].partial({n + j, n + k});
        for (int l = 0; l < n; ++l)
          r.berwald_y(i, j, k, l) = s.G[i].partial({n + j, n + k, n + l});
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int rr = 0; rr < n; ++rr)
        r.mean_berwald(i, j) += r.berwald_y(rr, i, j, rr);

  // R^i_k = 2 dG^i/dx^k - y^j d2G^i/dx^j dy^k + 2 G^j d2G^i/dy^j dy^k
  //         - dG^i/dy^j dG^j/dy^k
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double acc = 2.0 * s.G[i].partial({k});
      for (int j = 0; j < n; ++j) {
        acc -= y[j] * s.G[i].partial({j, n + k});
        acc += 2.0 * r.G[j] * r.berwald(i, j, k);
        acc -= r.G_y(i, j) * r.G_y(j, k);
      }
      r.R(i, k) = acc;
    }
  return r;
}

Eigen::VectorXd spray_value(const NavigationData& nav, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
  const int n = nav.dim();
  Jet F = phase_jet_F(nav, x, y, 2);
  Jet F2 = F * F;

  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = 0.5 * F2.partial({n + i, n + j});
      g(j, i) = g(i, j);
    }
  Eigen::VectorXd B(n);
  for (int l = 0; l < n; ++l) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += y[m] * F2.partial({m, n + l});
    acc -= F2.partial({l});
    B[l] = acc;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success)
    throw SingularMetricError("fundamental tensor not positive definite at " +
                              point_text(x, y));
  return 0.25 * ldlt.solve(B);
}

Eigen::VectorXd spray_killing_closed_form(const NavigationData& nav,
                                          const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) {
  const int n = nav.dim();
  double F = eval_F(nav, x, y);
  Tensor3<double> gamma = christoffel(*nav.h, x);
  NavDeform nd = nav_deform(*nav.h, *nav.W, x);
  Eigen::MatrixXd hinv = nav.h->values(x).inverse();
  Eigen::MatrixXd S_mixed = hinv * nd.S;  // S^i_j = h^{ir} S_{rj}

  Eigen::VectorXd G(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc += gamma(i, j, k) * y[j] * y[k];
    G[i] = 0.5 * acc - F * (S_mixed.row(i).dot(y));
  }
  return G;
}

double flag_curvature(const NavigationData& nav, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& u) {
  SprayResult s = spray(nav, x, y);
  double F2 = y.dot(s.g * y);  // g(y, y) = F^2 by homogeneity
  double guu = u.dot(s.g * u);
  double gyu = y.dot(s.g * u);
  double den = F2 * guu - gyu * gyu;
  if (!(den > 1e-10 * std::max(F2 * guu, 1e-300)))
    throw DomainError("flag with transverse edge parallel to the pole");
  double num = u.dot(s.g * (s.R * u));
  return num / den;
}

}  // namespace kropina
