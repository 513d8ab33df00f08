#include "kropina/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kropina/errors.hpp"

namespace kropina {

double killing_eq_F(const NavigationData& nav, const VectorField& V,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = nav.dim();
  Jet F = phase_jet_F(nav, x, y, 1);
  JetVec vj = V.eval_jet(x, 1);
  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    acc += F.partial({s}) * vj[s].value();
    double vy = 0.0;
    for (int u = 0; u < n; ++u) vy += vj[s].partial({u}) * y[u];
    acc += F.partial({n + s}) * vy;
  }
  return acc;
}

double killing_eq_F(const NavigationData& nav, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  return killing_eq_F(nav, *nav.W, x, y);
}

double k_alpha(const MetricField& a, const VectorField& V,
               const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd d = covariant_deriv(a, V, x);
  double alpha = std::sqrt(y.dot(a.values(x) * y));
  if (!(alpha > 0.0)) throw DomainError("k_alpha at a zero tangent vector");
  return y.dot((d + d.transpose()) * y) / (2.0 * alpha);
}

double k_beta(const MetricField& a, const CovectorField& b,
              const VectorField& V, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  const int n = a.dim();
  Eigen::MatrixXd dv = covariant_deriv(a, V, x);              // V_{i;j}
  Eigen::MatrixXd db = covariant_deriv_covector(a, b, x);     // b_{j;i}
  Eigen::MatrixXd av = a.values(x);
  Eigen::VectorXd vv = V.values(x);
  Eigen::VectorXd braise = av.llt().solve(b.values(x));       // b^i
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double term = 0.0;
    for (int i = 0; i < n; ++i) term += db(j, i) * vv[i] + braise[i] * dv(i, j);
    acc += term * y[j];
  }
  return acc;
}

AlphaBetaKilling alpha_beta_killing(PhiFamily phi, const MetricField& a,
                                    const CovectorField& b,
                                    const VectorField& V,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y) {
  double ka = k_alpha(a, V, x, y);
  double kb = k_beta(a, b, V, x, y);
  double alpha = std::sqrt(y.dot(a.values(x) * y));
  double beta = b.values(x).dot(y);
  double s = beta / alpha;
  double phi_v = 1.0, dphi = 0.0;
  switch (phi) {
    case PhiFamily::kropina:
      if (!(beta > 0.0))
        throw ConicDomainError("alpha-beta Killing form needs beta > 0");
      phi_v = 1.0 / s;
      dphi = -1.0 / (s * s);
      break;
    case PhiFamily::randers:
      phi_v = 1.0 + s;
      dphi = 1.0;
      break;
    case PhiFamily::riemann:
      break;
  }
  AlphaBetaKilling r;
  r.eq_lhs = (phi_v - s * dphi) * ka + dphi * kb;
  r.kropina_form = 2.0 * beta * ka - alpha * kb;
  return r;
}

PredicateResult ab_flow_killing_test(const KropinaData& k,
                                     const PointList& points, double tol) {
  PredicateResult res;
  res.name = "flow-killing-ab";
  double mx = 0.0, sum = 0.0, c_sum = 0.0, trans_mx = 0.0;
  bool implied_ok = true;
  for (const auto& x : points) {
    RSTensors t = rs_tensors(k, x);
    Eigen::MatrixXd av = k.a->values(x);
    ProportionalityFit f = fit_proportional(2.0 * t.r, av);
    mx = std::max(mx, f.misfit);
    sum += f.misfit;
    c_sum += f.c;

    Eigen::VectorXd bv = k.b->values(x);
    Eigen::VectorXd braise = av.llt().solve(bv);
    Eigen::VectorXd e1 =
        t.d * braise + t.d.transpose() * braise - f.c * bv;
    trans_mx = std::max(trans_mx, e1.norm());
    double bound = f.misfit * braise.norm() * (1.0 + 1e-10) + 1e-13;
    if (e1.norm() > bound) implied_ok = false;
  }
  res.residual_max = mx;
  res.residual_mean = points.empty() ? 0.0 : sum / points.size();
  res.verdict = mx <= tol;
  res.fitted["c_mean"] = points.empty() ? 0.0 : c_sum / points.size();
  res.fitted["transvected_max"] = trans_mx;
  if (!implied_ok) {
    res.verdict = false;
    res.note = "transvected equation exceeded the bound implied by the fit";
  }
  return res;
}

namespace {

void flow_rhs(const NavigationData& nav, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y, Eigen::VectorXd& dx,
              Eigen::VectorXd& dy) {
  const int n = nav.dim();
  JetVec wj = nav.W->eval_jet(x, 1);
  dx.resize(n);
  dy.resize(n);
  for (int i = 0; i < n; ++i) {
    dx[i] = wj[i].value();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += wj[i].partial({j}) * y[j];
    dy[i] = acc;
  }
}

template <typename Rhs>
void rk4_step(const Rhs& rhs, double h, Eigen::VectorXd& x,
              Eigen::VectorXd& y) {
  Eigen::VectorXd k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
  rhs(x, y, k1x, k1y);
  rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
  rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
  rhs(x + h * k3x, y + h * k3y, k4x, k4y);
  x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
}

}  // namespace

FlowTrack integrate_flow(const NavigationData& nav, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& y0, double T, double dt,
                         const Box& box) {
  if (!(dt > 0.0)) throw DomainError("flow step must be positive");
  FlowTrack tr;
  tr.dt = dt;
  Eigen::VectorXd x = x0, y = y0;
  tr.states.push_back({0.0, x, y});
  if (!box.contains(x0)) {
    tr.exited = true;
    tr.exit_reason = "chart";
    return tr;
  }
  int steps = static_cast<int>(std::llround(std::abs(T) / dt));
  double h = T >= 0.0 ? dt : -dt;
  auto rhs = [&nav](const Eigen::VectorXd& px, const Eigen::VectorXd& py,
                    Eigen::VectorXd& dx, Eigen::VectorXd& dy) {
    flow_rhs(nav, px, py, dx, dy);
  };
  for (int k = 0; k < steps; ++k) {
    rk4_step(rhs, h, x, y);
    double t = (k + 1) * h;
    if (!box.contains(x)) {
      tr.exited = true;
      tr.t_exit = t;
      tr.exit_reason = "chart";
      return tr;
    }
    tr.states.push_back({t, x, y});
  }
  return tr;
}

FlowTrack integrate_geodesic(const NavigationData& nav,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& y0, double T, double dt,
                             const Box& box, GeodesicMode mode) {
  if (!(dt > 0.0)) throw DomainError("geodesic step must be positive");
  FlowTrack tr;
  tr.dt = dt;
  Eigen::VectorXd x = x0, y = y0;
  if (mode == GeodesicMode::finsler) y /= eval_F(nav, x0, y0);
  tr.states.push_back({0.0, x, y});
  if (!box.contains(x0)) {
    tr.exited = true;
    tr.exit_reason = "chart";
    return tr;
  }
  int steps = static_cast<int>(std::llround(std::abs(T) / dt));
  double h = T >= 0.0 ? dt : -dt;
  auto rhs = [&nav, mode](const Eigen::VectorXd& px, const Eigen::VectorXd& py,
                          Eigen::VectorXd& dx, Eigen::VectorXd& dy) {
    const int n = nav.dim();
    dx = py;
    if (mode == GeodesicMode::finsler) {
      dy = -2.0 * spray_value(nav, px, py);
    } else {
      Tensor3<double> g = christoffel(*nav.h, px);
      dy.resize(n);
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
          for (int kk = 0; kk < n; ++kk) acc += g(i, j, kk) * py[j] * py[kk];
        dy[i] = -acc;
      }
    }
  };
  for (int k = 0; k < steps; ++k) {
    double t = (k + 1) * h;
    try {
      rk4_step(rhs, h, x, y);
    } catch (const ConicDomainError&) {
      tr.exited = true;
      tr.t_exit = t;
      tr.exit_reason = "conic";
      return tr;
    }
    if (!box.contains(x)) {
      tr.exited = true;
      tr.t_exit = t;
      tr.exit_reason = "chart";
      return tr;
    }
    if (mode == GeodesicMode::finsler) {
      double w0 = nav.W->values(x).dot(nav.h->values(x) * y);
      if (!(w0 > kConicEps)) {
        tr.exited = true;
        tr.t_exit = t;
        tr.exit_reason = "conic";
        return tr;
      }
    }
    tr.states.push_back({t, x, y});
  }
  return tr;
}

double flow_image_geodesic_residual(const NavigationData& nav,
                                    const FlowTrack& track, double flow_time,
                                    double flow_dt, const Box& box,
                                    int samples) {
  const auto& st = track.states;
  if (st.size() < 3)
    throw DomainError("geodesic track too short for an image residual");
  std::size_t lo = 1, hi = st.size() - 2;
  int m = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(samples), hi - lo + 1));

  auto push = [&](const FlowState& s, Eigen::VectorXd& px,
                  Eigen::VectorXd& py) {
    FlowTrack f = integrate_flow(nav, s.x, s.y, flow_time, flow_dt, box);
    if (f.exited) return false;
    px = f.states.back().x;
    py = f.states.back().y;
    return true;
  };

  double worst = 0.0;
  int used = 0;
  for (int j = 0; j < m; ++j) {
    std::size_t k = lo + (hi - lo) * j / std::max(1, m - 1);
    Eigen::VectorXd xm, ym, xc, yc, xp, yp;
    if (!push(st[k - 1], xm, ym) || !push(st[k], xc, yc) ||
        !push(st[k + 1], xp, yp))
      continue;
    Eigen::VectorXd acc = (yp - ym) / (2.0 * track.dt);
    Eigen::VectorXd resid = acc + 2.0 * spray_value(nav, xc, yc);
    worst = std::max(worst, resid.norm());
    ++used;
  }
  if (used == 0)
    throw NumericError("flow left the chart for every sampled track state");
  return worst;
}

double flow_F_derivative_fd(const NavigationData& nav,
                            const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& y0, double eps, double dt,
                            const Box& box) {
  FlowTrack fp = integrate_flow(nav, x0, y0, eps, dt, box);
  FlowTrack fm = integrate_flow(nav, x0, y0, -eps, dt, box);
  if (fp.exited || fm.exited)
    throw ChartExitError("flow left the chart during the derivative probe",
                         fp.exited ? fp.t_exit : fm.t_exit);
  double Fp = eval_F(nav, fp.states.back().x, fp.states.back().y);
  double Fm = eval_F(nav, fm.states.back().x, fm.states.back().y);
  return (Fp - Fm) / (2.0 * eps);
}

}  // namespace kropina
