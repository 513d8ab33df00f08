#include "kropina/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "kropina/classify.hpp"
#include "kropina/dynamics.hpp"
#include "kropina/errors.hpp"

namespace kropina {

namespace {

using nlohmann::ordered_json;

const char* const kSuiteKeys[13] = {
    "T-constantK", "T-wB",         "T-B",       "I-eq22",
    "I-eq26",      "T-pscalar",    "T-K0-berwald", "E-killingF",
    "E-eq413",     "E-eq414",      "E-eq416",   "T-geodesic-image",
    "T-isometry-equiv"};

bool dynamics_key(const std::string& key) {
  return key[0] == 'E' || key == "T-geodesic-image" ||
         key == "T-isometry-equiv";
}

// One shared draw: every entry that samples tangent space uses these, so
// routes compared against each other see the same (x, y, u).
struct SampleSet {
  PointList pts;
  std::vector<std::vector<Eigen::VectorXd>> ys, us;
};

SampleSet draw_samples(const SceneRuntime& rt, std::uint64_t seed, int points,
                       int tangents) {
  SampleSet s;
  SplitMix64 rng(seed);
  for (int p = 0; p < points; ++p) {
    Eigen::VectorXd x = sample_point(rng, rt.scene.box);
    s.pts.push_back(x);
    s.ys.emplace_back();
    s.us.emplace_back();
    for (int t = 0; t < tangents; ++t) {
      Eigen::VectorXd y = sample_tangent(rng, rt.nav, x);
      s.ys.back().push_back(y);
      s.us.back().push_back(sample_transverse(rng, rt.nav, x, y));
    }
  }
  return s;
}

// Independent stream per integrator consumer, so adding or skipping entries
// never shifts another entry's samples.
SplitMix64 salted(std::uint64_t seed, std::uint64_t salt) {
  return SplitMix64(seed ^ (0xd1b54a32d192ed03ULL * (salt + 1)));
}

struct SuiteCtx {
  const SceneRuntime& rt;
  const SampleSet& s;
  SceneTolerances tol;
  std::uint64_t seed;

  // Fiber-derivative routes: the traced mean Berwald tensor and the Berwald
  // curvature are analytic in y and ill-conditioned next to the cone, so
  // these draw tangents with a directional margin (same x-points).
  bool spray_done = false;
  double mean_berwald_max = 0.0;
  double berwald_y_max = 0.0;
  void ensure_spray() {
    if (spray_done) return;
    SplitMix64 rng = salted(seed, 0xc3);
    int tangents = static_cast<int>(s.ys.empty() ? 0 : s.ys[0].size());
    for (const auto& x : s.pts)
      for (int t = 0; t < tangents; ++t) {
        Eigen::VectorXd y = sample_tangent_cone(rng, rt.nav, x, 0.1);
        SprayResult sr = spray(rt.nav, x, y);
        mean_berwald_max = std::max(mean_berwald_max,
                                    sr.mean_berwald.cwiseAbs().maxCoeff());
        berwald_y_max = std::max(berwald_y_max, max_abs(sr.berwald_y));
      }
    spray_done = true;
  }

  bool flags_done = false;
  double flag_min = 0.0, flag_max = 0.0;
  void ensure_flags() {
    if (flags_done) return;
    bool first = true;
    for (std::size_t p = 0; p < s.pts.size(); ++p)
      for (std::size_t t = 0; t < s.ys[p].size(); ++t) {
        double k = flag_curvature(rt.nav, s.pts[p], s.ys[p][t], s.us[p][t]);
        flag_min = first ? k : std::min(flag_min, k);
        flag_max = first ? k : std::max(flag_max, k);
        first = false;
      }
    flags_done = true;
  }

  bool killing_done = false;
  double killing_max_ = 0.0;
  double killing_max() {
    if (!killing_done) {
      for (const auto& x : s.pts)
        killing_max_ = std::max(
            killing_max_, nav_deform(*rt.nav.h, *rt.nav.W, x).R.norm());
      killing_done = true;
    }
    return killing_max_;
  }

  // Verdicts later entries depend on.
  bool tB = false;
  bool pscalar = false;
  double pscalar_kabs = 0.0;
};

ordered_json fitted_json(const PredicateResult& pr) {
  ordered_json f = ordered_json::object();
  for (const auto& [k, v] : pr.fitted) f[k] = v;
  return f;
}

ordered_json entry_constantK(SuiteCtx& c) {
  double smin = 0.0, smax = 0.0;
  bool first = true;
  for (std::size_t p = 0; p < c.s.pts.size(); ++p)
    for (std::size_t t = 0; t < c.s.ys[p].size(); ++t) {
      double k = sectional_curvature(*c.rt.nav.h, c.s.pts[p], c.s.ys[p][t],
                                     c.s.us[p][t]);
      smin = first ? k : std::min(smin, k);
      smax = first ? k : std::max(smax, k);
      first = false;
    }
  c.ensure_flags();

  double flag_spread = c.flag_max - c.flag_min;
  double sec_spread = smax - smin;
  bool flag_const = flag_spread <= c.tol.ode;
  bool h_side = c.killing_max() <= c.tol.predicate && sec_spread <= c.tol.ode;

  ordered_json e;
  e["verdict"] = flag_const == h_side;
  e["flag_constant"] = flag_const;
  e["flag_spread"] = flag_spread;
  e["flag_value_mean"] = 0.5 * (c.flag_min + c.flag_max);
  e["sectional_spread"] = sec_spread;
  e["killing_max"] = c.killing_max();
  return e;
}

ordered_json entry_wB(SuiteCtx& c) {
  PredicateResult fit = weakly_berwald_test(c.rt.ab, c.s.pts, c.tol.predicate);
  PredicateResult nav =
      nav_weakly_berwald_test(c.rt.nav, c.s.pts, c.tol.predicate);
  c.ensure_spray();
  bool mean_ok = c.mean_berwald_max <= c.tol.predicate;
  bool agree = fit.verdict == nav.verdict && fit.verdict == mean_ok;

  ordered_json e;
  e["verdict"] = agree ? fit.verdict : false;
  e["fit_misfit_max"] = fit.residual_max;
  e["killing_max"] = nav.residual_max;
  e["mean_berwald_max"] = c.mean_berwald_max;
  e["fitted"] = fitted_json(fit);
  if (!agree)
    e["note"] = "routes disagree: (a,b) fit vs wind deformation vs mean "
                "Berwald curvature";
  return e;
}

ordered_json entry_B(SuiteCtx& c) {
  PredicateResult fit = berwald_test(c.rt.ab, c.s.pts, c.tol.predicate);
  PredicateResult nav = nav_berwald_test(c.rt.nav, c.s.pts, c.tol.predicate);
  c.ensure_spray();
  bool by_ok = c.berwald_y_max <= c.tol.predicate;
  bool agree = fit.verdict == nav.verdict && fit.verdict == by_ok;

  ordered_json e;
  bool verdict = agree ? fit.verdict : false;
  e["verdict"] = verdict;
  e["fit_misfit_max"] = fit.residual_max;
  e["parallel_max"] = nav.residual_max;
  e["berwald_curvature_max"] = c.berwald_y_max;
  e["fitted"] = fitted_json(fit);
  if (!agree)
    e["note"] = "routes disagree: (r,s) closure vs parallel wind vs Berwald "
                "curvature";
  c.tB = verdict;
  return e;
}

ordered_json entry_eq22(SuiteCtx& c) {
  double mx = 0.0, sum = 0.0;
  for (const auto& x : c.s.pts) {
    double r = conformal_split_residual(c.rt.ab, c.rt.nav, x);
    mx = std::max(mx, r);
    sum += r;
  }
  ordered_json e;
  e["verdict"] = mx <= c.tol.identity;
  e["residual_max"] = mx;
  e["residual_mean"] = c.s.pts.empty() ? 0.0 : sum / c.s.pts.size();
  return e;
}

ordered_json entry_eq26(SuiteCtx& c) {
  double mx = 0.0, sum = 0.0;
  for (const auto& x : c.s.pts) {
    double r = deformation_skew_residual(c.rt.nav, x);
    mx = std::max(mx, r);
    sum += r;
  }
  ordered_json e;
  e["verdict"] = mx <= c.tol.identity;
  e["residual_max"] = mx;
  e["residual_mean"] = c.s.pts.empty() ? 0.0 : sum / c.s.pts.size();
  if (c.rt.scene.n > 2 && mx > c.tol.identity)
    e["note"] = "skew decomposition is forced only in dimension 2";
  return e;
}

ordered_json entry_pscalar(SuiteCtx& c) {
  std::vector<FlagProbe> probes;
  probes.reserve(c.s.pts.size());
  for (std::size_t p = 0; p < c.s.pts.size(); ++p)
    probes.push_back({c.s.pts[p], c.s.ys[p], c.s.us[p]});
  PredicateResult pr =
      p_scalar_test(c.rt.nav, probes, c.tol.predicate, c.tol.ode);

  c.pscalar = pr.verdict;
  auto it = pr.fitted.find("K_absmax");
  c.pscalar_kabs = it == pr.fitted.end() ? 0.0 : it->second;

  ordered_json e;
  e["verdict"] = pr.verdict;
  e["residual_max"] = pr.residual_max;
  e["residual_mean"] = pr.residual_mean;
  if (!pr.fitted.empty()) e["fitted"] = fitted_json(pr);
  if (!pr.note.empty()) e["note"] = pr.note;
  return e;
}

ordered_json entry_K0_berwald(SuiteCtx& c) {
  ordered_json e;
  if (!c.pscalar) {
    e["verdict"] = true;
    e["note"] = "vacuous: flag curvature is not a function of position alone";
    return e;
  }
  bool k_zero = c.pscalar_kabs <= c.tol.predicate;
  e["verdict"] = k_zero == c.tB;
  e["K_absmax"] = c.pscalar_kabs;
  e["K_identically_zero"] = k_zero;
  e["berwald"] = c.tB;
  return e;
}

ordered_json entry_killingF(SuiteCtx& c) {
  double mx = 0.0, sum = 0.0;
  int count = 0;
  for (std::size_t p = 0; p < c.s.pts.size(); ++p)
    for (std::size_t t = 0; t < c.s.ys[p].size(); ++t) {
      double k = std::abs(killing_eq_F(c.rt.nav, c.s.pts[p], c.s.ys[p][t]));
      mx = std::max(mx, k);
      sum += k;
      ++count;
    }
  bool kf_ok = mx <= c.tol.predicate;
  bool lie_ok = c.killing_max() <= c.tol.predicate;

  ordered_json e;
  e["verdict"] = kf_ok == lie_ok ? kf_ok : false;
  e["kF_max"] = mx;
  e["kF_mean"] = count ? sum / count : 0.0;
  e["killing_deform_max"] = c.killing_max();
  if (kf_ok != lie_ok)
    e["note"] = "routes disagree: K_W(F) vs wind deformation of h";
  return e;
}

ordered_json entry_eq413(SuiteCtx& c) {
  double mx = 0.0;
  for (std::size_t p = 0; p < c.s.pts.size(); ++p)
    for (std::size_t t = 0; t < c.s.ys[p].size(); ++t) {
      AlphaBetaKilling abk =
          alpha_beta_killing(PhiFamily::kropina, *c.rt.ab.a, *c.rt.ab.b,
                             *c.rt.nav.W, c.s.pts[p], c.s.ys[p][t]);
      double kf = killing_eq_F(c.rt.nav, c.s.pts[p], c.s.ys[p][t]);
      mx = std::max(mx, std::abs(abk.eq_lhs - kf));
    }
  ordered_json e;
  e["verdict"] = mx <= c.tol.identity;
  e["residual_max"] = mx;
  return e;
}

ordered_json entry_eq414(SuiteCtx& c) {
  double form_mx = 0.0, cross_mx = 0.0;
  for (std::size_t p = 0; p < c.s.pts.size(); ++p)
    for (std::size_t t = 0; t < c.s.ys[p].size(); ++t) {
      const Eigen::VectorXd& x = c.s.pts[p];
      const Eigen::VectorXd& y = c.s.ys[p][t];
      AlphaBetaKilling abk = alpha_beta_killing(
          PhiFamily::kropina, *c.rt.ab.a, *c.rt.ab.b, *c.rt.nav.W, x, y);
      double alpha = std::sqrt(y.dot(c.rt.ab.a->values(x) * y));
      double beta = c.rt.ab.b->values(x).dot(y);
      cross_mx = std::max(
          cross_mx, std::abs(abk.kropina_form - beta * beta / alpha *
                                                    abk.eq_lhs));
      form_mx = std::max(form_mx, std::abs(abk.kropina_form));
    }
  ordered_json e;
  e["verdict"] = form_mx <= c.tol.predicate;
  e["form_max"] = form_mx;
  e["vs_eq413_max"] = cross_mx;
  if (cross_mx > c.tol.identity)
    e["note"] = "the two Killing forms drifted apart beyond the identity "
                "tolerance";
  return e;
}

ordered_json entry_eq416(SuiteCtx& c) {
  PredicateResult pr = ab_flow_killing_test(c.rt.ab, c.s.pts, c.tol.predicate);
  bool nav_ok = c.killing_max() <= c.tol.predicate;
  bool agree = pr.verdict == nav_ok;

  ordered_json e;
  e["verdict"] = agree ? pr.verdict : false;
  e["fit_misfit_max"] = pr.residual_max;
  e["killing_max"] = c.killing_max();
  if (!pr.fitted.empty()) e["fitted"] = fitted_json(pr);
  if (!pr.note.empty())
    e["note"] = pr.note;
  else if (!agree)
    e["note"] = "routes disagree: (a,b) flow equations vs wind deformation";
  return e;
}

ordered_json entry_geodesic_image(SuiteCtx& c) {
  SplitMix64 rng = salted(c.seed, 0xa1);
  const Box& box = c.rt.scene.box;
  Eigen::VectorXd x0 = 0.5 * (box.lo + box.hi);
  Eigen::VectorXd y0 = sample_tangent(rng, c.rt.nav, x0);

  FlowTrack track = integrate_geodesic(c.rt.nav, x0, y0, 0.3, 1e-3, box,
                                       GeodesicMode::finsler);
  if (track.states.size() < 5)
    throw NumericError("geodesic track left the chart almost immediately");
  double resid =
      flow_image_geodesic_residual(c.rt.nav, track, 0.25, 1e-3, box, 10);

  ordered_json e;
  e["verdict"] = resid <= c.tol.ode;
  e["residual_max"] = resid;
  e["track_states"] = track.states.size();
  e["track_exited"] = track.exited;
  return e;
}

ordered_json entry_isometry_equiv(SuiteCtx& c) {
  SplitMix64 rng = salted(c.seed, 0xb2);
  const Box& box = c.rt.scene.box;
  Eigen::VectorXd center = 0.5 * (box.lo + box.hi);

  double dF = 0.0, dh = 0.0;
  int used = 0;
  bool left_cone = false;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd x0 = center + 0.3 * (sample_point(rng, box) - center);
    Eigen::VectorXd y0 = sample_tangent(rng, c.rt.nav, x0);
    FlowTrack tr = integrate_flow(c.rt.nav, x0, y0, 0.5, 1e-3, box);
    if (tr.exited || tr.states.size() < 2) continue;
    ++used;
    const FlowState& last = tr.states.back();
    double h0 = y0.dot(c.rt.nav.h->values(x0) * y0);
    double h1 = last.y.dot(c.rt.nav.h->values(last.x) * last.y);
    dh = std::max(dh, std::abs(h1 - h0));
    try {
      double f0 = eval_F(c.rt.nav, x0, y0);
      double f1 = eval_F(c.rt.nav, last.x, last.y);
      dF = std::max(dF, std::abs(f1 - f0));
    } catch (const ConicDomainError&) {
      dF = std::max(dF, 1.0);  // transported y left the cone: F not preserved
      left_cone = true;
    }
  }
  if (used == 0)
    throw NumericError("every flow trial left the chart box");

  bool f_ok = dF <= c.tol.ode;
  bool h_ok = dh <= c.tol.ode;

  ordered_json e;
  e["verdict"] = f_ok == h_ok;
  e["F_preserved"] = f_ok;
  e["h_preserved"] = h_ok;
  e["F_drift_max"] = dF;
  e["h_drift_max"] = dh;
  e["flows_used"] = used;
  if (left_cone) e["note"] = "a transported tangent left the conic domain";
  return e;
}

ordered_json run_entry(const std::string& key, SuiteCtx& c) {
  if (key == "T-constantK") return entry_constantK(c);
  if (key == "T-wB") return entry_wB(c);
  if (key == "T-B") return entry_B(c);
  if (key == "I-eq22") return entry_eq22(c);
  if (key == "I-eq26") return entry_eq26(c);
  if (key == "T-pscalar") return entry_pscalar(c);
  if (key == "T-K0-berwald") return entry_K0_berwald(c);
  if (key == "E-killingF") return entry_killingF(c);
  if (key == "E-eq413") return entry_eq413(c);
  if (key == "E-eq414") return entry_eq414(c);
  if (key == "E-eq416") return entry_eq416(c);
  if (key == "T-geodesic-image") return entry_geodesic_image(c);
  return entry_isometry_equiv(c);
}

}  // namespace

ordered_json run_suite(const SceneRuntime& rt, const SuiteOptions& opt) {
  if (opt.selector != "all" && opt.selector != "classify" &&
      opt.selector != "dynamics")
    throw SceneError("suite selector must be all, classify or dynamics",
                     "suite");

  std::uint64_t seed = opt.seed.value_or(rt.scene.seed);
  int points = opt.points.value_or(rt.scene.points);
  if (points < 1) throw SceneError("points must be positive", "sampling");
  int tangents = rt.scene.tangents_per_point;

  SampleSet samples = draw_samples(rt, seed, points, tangents);
  SuiteCtx ctx{rt, samples, rt.scene.tol, seed};

  ordered_json out;
  out["scene"] = rt.scene.name;
  out["n"] = rt.scene.n;
  out["presentation"] = rt.scene.presentation == Presentation::navigation
                            ? "navigation"
                            : "alphabeta";
  out["suite"] = opt.selector;
  out["seed"] = seed;
  out["points"] = points;
  out["tangents_per_point"] = tangents;
  out["tolerances"] = {{"identity", rt.scene.tol.identity},
                       {"predicate", rt.scene.tol.predicate},
                       {"ode", rt.scene.tol.ode}};

  ordered_json entries = ordered_json::object();
  ordered_json timings = ordered_json::object();
  bool all_match = true;

  for (const char* key_c : kSuiteKeys) {
    std::string key(key_c);
    bool selected = opt.selector == "all" ||
                    (opt.selector == "dynamics") == dynamics_key(key);
    if (!selected) {
      entries[key] = {{"skipped", true}};
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    ordered_json e = run_entry(key, ctx);
    auto t1 = std::chrono::steady_clock::now();
    timings[key] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (rt.expected) {
      bool exp = rt.expected->at(key);
      bool match = e["verdict"].get<bool>() == exp;
      e["expected"] = exp;
      e["matches_expected"] = match;
      all_match = all_match && match;
    }
    entries[key] = std::move(e);
  }

  out["entries"] = std::move(entries);
  out["all_match_expected"] = all_match;
  if (opt.timings) out["timings_ms"] = std::move(timings);
  return out;
}

bool suite_matches(const ordered_json& result) {
  auto it = result.find("all_match_expected");
  return it == result.end() || it->get<bool>();
}

ordered_json classification_report(const SceneRuntime& rt,
                                   std::optional<std::uint64_t> seed_opt,
                                   std::optional<int> points_opt) {
  std::uint64_t seed = seed_opt.value_or(rt.scene.seed);
  int points = points_opt.value_or(rt.scene.points);
  if (points < 1) throw SceneError("points must be positive", "sampling");

  SampleSet samples =
      draw_samples(rt, seed, points, rt.scene.tangents_per_point);
  const SceneTolerances& tol = rt.scene.tol;

  std::vector<PredicateResult> preds;
  preds.push_back(weakly_berwald_test(rt.ab, samples.pts, tol.predicate));
  preds.push_back(berwald_test(rt.ab, samples.pts, tol.predicate));
  preds.push_back(nav_weakly_berwald_test(rt.nav, samples.pts, tol.predicate));
  preds.push_back(nav_berwald_test(rt.nav, samples.pts, tol.predicate));

  {
    PredicateResult id;
    id.name = "conformal-split-identity";
    double sum = 0.0;
    for (const auto& x : samples.pts) {
      double r = conformal_split_residual(rt.ab, rt.nav, x);
      id.residual_max = std::max(id.residual_max, r);
      sum += r;
    }
    id.residual_mean = samples.pts.empty() ? 0.0 : sum / samples.pts.size();
    id.verdict = id.residual_max <= tol.identity;
    preds.push_back(std::move(id));
  }
  {
    PredicateResult id;
    id.name = "deformation-skew";
    double sum = 0.0;
    for (const auto& x : samples.pts) {
      double r = deformation_skew_residual(rt.nav, x);
      id.residual_max = std::max(id.residual_max, r);
      sum += r;
    }
    id.residual_mean = samples.pts.empty() ? 0.0 : sum / samples.pts.size();
    id.verdict = id.residual_max <= tol.identity;
    preds.push_back(std::move(id));
  }

  std::vector<FlagProbe> probes;
  probes.reserve(samples.pts.size());
  for (std::size_t p = 0; p < samples.pts.size(); ++p)
    probes.push_back({samples.pts[p], samples.ys[p], samples.us[p]});
  preds.push_back(p_scalar_test(rt.nav, probes, tol.predicate, tol.ode));

  ordered_json out;
  out["scene"] = rt.scene.name;
  out["seed"] = seed;
  out["tolerances"] = {{"identity", tol.identity},
                       {"predicate", tol.predicate},
                       {"ode", tol.ode}};
  ordered_json arr = ordered_json::array();
  for (const auto& pr : preds) {
    ordered_json e;
    e["name"] = pr.name;
    e["verdict"] = pr.verdict;
    e["residual_max"] = pr.residual_max;
    e["residual_mean"] = pr.residual_mean;
    if (!pr.fitted.empty()) e["fitted"] = fitted_json(pr);
    if (!pr.note.empty()) e["note"] = pr.note;
    arr.push_back(std::move(e));
  }
  out["predicates"] = std::move(arr);
  out["points_evaluated"] = points;
  return out;
}

std::vector<std::array<std::string, 3>> coverage_table() {
  return {
      {"T-constantK",
       "riemann.sectional_curvature, kropina.flag_curvature, "
       "classify.nav_weakly_berwald_test",
       "F has constant flag curvature exactly when h has constant sectional "
       "curvature and the wind is a Killing field."},
      {"T-wB",
       "classify.weakly_berwald_test, classify.nav_weakly_berwald_test, "
       "kropina.spray",
       "r proportional to a, a deformation-free wind, and zero mean Berwald "
       "curvature are one and the same condition."},
      {"T-B",
       "classify.berwald_test, classify.nav_berwald_test, kropina.spray",
       "the (r,s) closure condition holds exactly when the wind is parallel, "
       "exactly when the Berwald curvature vanishes."},
      {"I-eq22", "classify.conformal_split_residual",
       "the symmetrized derivative of b equals 2 e^-kappa (R - (wind kappa "
       "rate) h / 2) in every gauge."},
      {"I-eq26", "classify.deformation_skew_residual",
       "the skew deformation decomposes through W and its transvection "
       "(forced in dimension 2, scene-dependent above)."},
      {"T-pscalar", "classify.p_scalar_test, kropina.flag_curvature",
       "for a unit Killing wind the flag curvature is a nonnegative function "
       "of position fitted by the squared covariant derivative of W."},
      {"T-K0-berwald", "classify.p_scalar_test, classify.berwald_test",
       "under position-only flag curvature, K vanishes identically exactly "
       "when the space is Berwald."},
      {"E-killingF", "dynamics.killing_eq_F, riemann.nav_deform",
       "K_W(F) vanishes on the conic domain exactly when W is a Killing "
       "field of h."},
      {"E-eq413", "dynamics.alpha_beta_killing, dynamics.killing_eq_F",
       "the (alpha,beta) Killing expression reproduces K_W(F) sample for "
       "sample."},
      {"E-eq414", "dynamics.alpha_beta_killing",
       "the Kropina form 2 beta K_W(alpha) - alpha K_W(beta) of the Killing "
       "equation vanishes."},
      {"E-eq416", "dynamics.ab_flow_killing_test",
       "2r = c(x) a holds, and the transvected companion equation is implied "
       "with the bound carried by the fit misfit."},
      {"T-geodesic-image",
       "dynamics.integrate_geodesic, dynamics.integrate_flow, "
       "dynamics.flow_image_geodesic_residual",
       "an isometric wind flow carries geodesics to geodesics: the pushed "
       "track still satisfies the geodesic equation."},
      {"T-isometry-equiv", "dynamics.integrate_flow, kropina.eval_F",
       "the wind flow preserves F exactly when it preserves h."},
  };
}

}  // namespace kropina
