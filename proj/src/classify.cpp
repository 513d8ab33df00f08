#include "kropina/classify.hpp"

#include <algorithm>
#include <cmath>

namespace kropina {

namespace {

struct Agg {
  double mx = 0.0, sum = 0.0;
  int count = 0;
  void add(double v) {
    mx = std::max(mx, v);
    sum += v;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
};

// W_r kappabar^r = W^s d_s kappa, with W^s = a^{sj} b_j / 2 (gauge-free).
double wind_kappa_rate(const KropinaData& k, const Eigen::VectorXd& x) {
  const int n = k.dim();
  Eigen::MatrixXd a = k.a->values(x);
  Eigen::VectorXd b = k.b->values(x);
  Eigen::VectorXd w = 0.5 * a.llt().solve(b);
  Jet kj = k.kappa->eval_jet(x, 1);
  double acc = 0.0;
  for (int s = 0; s < n; ++s) acc += w[s] * kj.partial({s});
  return acc;
}

}  // namespace

RSTensors rs_tensors(const KropinaData& k, const Eigen::VectorXd& x) {
  RSTensors t;
  t.d = covariant_deriv_covector(*k.a, *k.b, x);
  t.r = 0.5 * (t.d + t.d.transpose());
  t.s = 0.5 * (t.d - t.d.transpose());
  Eigen::MatrixXd a = k.a->values(x);
  Eigen::VectorXd braise = a.llt().solve(k.b->values(x));  // b^s
  t.s1 = t.s.transpose() * braise;                         // s_i = b^s s_si
  return t;
}

ProportionalityFit fit_proportional(const Eigen::MatrixXd& t,
                                    const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(t.rows());
  ProportionalityFit f;
  f.c = m.llt().solve(t).trace() / n;
  f.misfit = (t - f.c * m).norm();
  f.residual = f.misfit / std::max(t.norm(), 1e-30);
  return f;
}

ProportionalityFit fit_frobenius(const Eigen::MatrixXd& t,
                                 const Eigen::MatrixXd& m) {
  ProportionalityFit f;
  double mm = m.squaredNorm();
  f.c = mm > 1e-30 ? t.cwiseProduct(m).sum() / mm : 0.0;
  f.misfit = (t - f.c * m).norm();
  f.residual = f.misfit / std::max(t.norm(), 1e-30);
  return f;
}

PredicateResult weakly_berwald_test(const KropinaData& k,
                                    const PointList& points, double tol) {
  PredicateResult res;
  res.name = "weakly-berwald-fit";
  Agg misfit;
  double c_sum = 0.0, c_kappa_max = 0.0;
  for (const auto& x : points) {
    RSTensors t = rs_tensors(k, x);
    ProportionalityFit f = fit_proportional(t.r, k.a->values(x));
    misfit.add(f.misfit);
    c_sum += f.c;
    c_kappa_max =
        std::max(c_kappa_max, std::abs(f.c + wind_kappa_rate(k, x)));
  }
  res.residual_max = misfit.mx;
  res.residual_mean = misfit.mean();
  res.verdict = misfit.mx <= tol;
  res.fitted["c_mean"] = points.empty() ? 0.0 : c_sum / points.size();
  res.fitted["c_plus_wind_kappa_max"] = c_kappa_max;
  return res;
}

PredicateResult berwald_test(const KropinaData& k, const PointList& points,
                             double tol) {
  PredicateResult wb = weakly_berwald_test(k, points, tol);
  PredicateResult res;
  res.name = "berwald-closure";
  Agg scond;
  for (const auto& x : points) {
    RSTensors t = rs_tensors(k, x);
    Eigen::VectorXd b = k.b->values(x);
    Eigen::MatrixXd a = k.a->values(x);
    double b2 = b.dot(a.llt().solve(b));
    Eigen::MatrixXd e =
        b * t.s1.transpose() - t.s1 * b.transpose() - b2 * t.s;
    scond.add(e.norm());
  }
  res.residual_max = std::max(wb.residual_max, scond.mx);
  res.residual_mean = std::max(wb.residual_mean, scond.mean());
  res.verdict = wb.verdict && scond.mx <= tol;
  res.fitted = wb.fitted;
  res.fitted["s_condition_max"] = scond.mx;
  return res;
}

PredicateResult nav_weakly_berwald_test(const NavigationData& nav,
                                        const PointList& points, double tol) {
  PredicateResult res;
  res.name = "killing";
  Agg a;
  for (const auto& x : points) a.add(nav_deform(*nav.h, *nav.W, x).R.norm());
  res.residual_max = a.mx;
  res.residual_mean = a.mean();
  res.verdict = a.mx <= tol;
  return res;
}

PredicateResult nav_berwald_test(const NavigationData& nav,
                                 const PointList& points, double tol) {
  PredicateResult res;
  res.name = "parallel";
  Agg a;
  for (const auto& x : points)
    a.add(covariant_deriv(*nav.h, *nav.W, x).norm());
  res.residual_max = a.mx;
  res.residual_mean = a.mean();
  res.verdict = a.mx <= tol;
  return res;
}

double conformal_split_residual(const KropinaData& k,
                                const NavigationData& nav,
                                const Eigen::VectorXd& x) {
  RSTensors t = rs_tensors(k, x);
  NavDeform nd = nav_deform(*nav.h, *nav.W, x);
  Eigen::MatrixXd h = nav.h->values(x);
  double rate = wind_kappa_rate(k, x);
  double ek = std::exp(-k.kappa->value(x));
  Eigen::MatrixXd rhs = 2.0 * ek * (nd.R - 0.5 * rate * h);
  return (t.r - rhs).norm();
}

double deformation_skew_residual(const NavigationData& nav,
                                 const Eigen::VectorXd& x) {
  NavDeform nd = nav_deform(*nav.h, *nav.W, x);
  Eigen::VectorXd wlow = nav.h->values(x) * nav.W->values(x);
  Eigen::MatrixXd rhs =
      wlow * nd.S1.transpose() - nd.S1 * wlow.transpose();
  return (nd.S - rhs).norm();
}

PredicateResult p_scalar_test(const NavigationData& nav,
                              const std::vector<FlagProbe>& probes,
                              double tol_predicate, double tol_spread) {
  PredicateResult res;
  res.name = "p-scalar";

  Agg killing;
  for (const auto& p : probes)
    killing.add(nav_deform(*nav.h, *nav.W, p.x).R.norm());
  if (killing.mx > tol_predicate) {
    res.verdict = false;
    res.residual_max = killing.mx;
    res.residual_mean = killing.mean();
    res.note = "not p-scalar: W not Killing";
    return res;
  }

  Agg misfit, spread, cross;
  std::vector<double> Ks;
  Ks.reserve(probes.size());
  for (const auto& p : probes) {
    Eigen::MatrixXd h = nav.h->values(p.x);
    Eigen::VectorXd wlow = h * nav.W->values(p.x);
    Eigen::MatrixXd dW = covariant_deriv(*nav.h, *nav.W, p.x);
    Eigen::MatrixXd t = dW.transpose() * h.llt().solve(dW);
    Eigen::MatrixXd m = h - wlow * wlow.transpose();
    ProportionalityFit f = fit_frobenius(t, m);
    misfit.add(f.misfit);
    Ks.push_back(f.c);

    double kmin = 0.0, kmax = 0.0;
    for (std::size_t j = 0; j < p.ys.size(); ++j) {
      double kf = flag_curvature(nav, p.x, p.ys[j], p.us[j]);
      kmin = j == 0 ? kf : std::min(kmin, kf);
      kmax = j == 0 ? kf : std::max(kmax, kf);
      cross.add(std::abs(kf - f.c));
    }
    if (!p.ys.empty()) spread.add(kmax - kmin);
  }

  double mean = 0.0;
  for (double k : Ks) mean += k;
  if (!Ks.empty()) mean /= Ks.size();
  double var = 0.0;
  for (double k : Ks) var += (k - mean) * (k - mean);
  double stddev = Ks.size() > 1 ? std::sqrt(var / (Ks.size() - 1)) : 0.0;
  double kmin_all = Ks.empty() ? 0.0 : *std::min_element(Ks.begin(), Ks.end());
  double kabs_all = 0.0;
  for (double k : Ks) kabs_all = std::max(kabs_all, std::abs(k));

  res.residual_max = misfit.mx;
  res.residual_mean = misfit.mean();
  res.fitted["K_mean"] = mean;
  res.fitted["K_stddev"] = stddev;
  res.fitted["K_min"] = kmin_all;
  res.fitted["K_absmax"] = kabs_all;
  res.fitted["flag_spread_max"] = spread.mx;
  res.fitted["K_vs_flag_max"] = cross.mx;
  res.verdict = misfit.mx <= tol_predicate && kmin_all >= -tol_predicate &&
                spread.mx <= tol_spread && cross.mx <= tol_spread;
  return res;
}

}  // namespace kropina
