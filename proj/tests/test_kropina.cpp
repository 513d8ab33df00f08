#include "doctest.h"

#include <cmath>
#include <vector>

#include "kropina/errors.hpp"
#include "kropina/expr.hpp"
#include "kropina/fields.hpp"
#include "kropina/kropina.hpp"
#include "kropina/riemann.hpp"
#include "kropina/scene.hpp"
#include "oracles.hpp"

using namespace kropina;

namespace {

MetricFieldPtr metric(int n, std::vector<const char*> upper) {
  std::vector<ExprPtr> e;
  for (const char* s : upper) e.push_back(parse_expr(s));
  return make_expr_metric(n, std::move(e));
}

CovectorFieldPtr covector(int n, std::vector<const char*> comps) {
  std::vector<ExprPtr> e;
  for (const char* s : comps) e.push_back(parse_expr(s));
  return make_expr_covector(n, std::move(e));
}

KropinaData ab_data(MetricFieldPtr a, CovectorFieldPtr b) {
  ScalarFieldPtr kappa = make_kropina_kappa(a, b);
  return KropinaData{std::move(a), std::move(b), std::move(kappa)};
}

SceneRuntime runtime(const char* name) {
  return make_runtime(builtin_scene(name));
}

struct MarginSamples {
  std::vector<TangentSample> s;
};

MarginSamples draw(const SceneRuntime& rt, int points, int tangents,
                   double margin, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MarginSamples out;
  for (int p = 0; p < points; ++p) {
    Eigen::VectorXd x = sample_point(rng, rt.scene.box);
    for (int t = 0; t < tangents; ++t)
      out.s.push_back({x, sample_tangent_cone(rng, rt.nav, x, margin)});
  }
  return out;
}

}  // namespace

TEST_CASE("navigation gauge from (a, b)") {
  SUBCASE("already normalized: |b|_a^2 = 4") {
    KropinaData k = ab_data(metric(2, {"1", "0", "1"}), covector(2, {"2", "0"}));
    Eigen::VectorXd x(2);
    x << 0.3, -0.8;
    CHECK(k.kappa->value(x) == doctest::Approx(0.0).epsilon(1e-15));
    NavigationData nav = to_navigation(k);
    CHECK((nav.h->values(x) - Eigen::MatrixXd::Identity(2, 2)).norm() <=
          1e-15);
    Eigen::VectorXd w = nav.W->values(x);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(0.0));
  }
  SUBCASE("joint rescaling of a and b keeps the gauge") {
    KropinaData k = ab_data(metric(2, {"4", "0", "4"}), covector(2, {"4", "0"}));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    CHECK(k.kappa->value(x) == doctest::Approx(0.0).epsilon(1e-15));
    NavigationData nav = to_navigation(k);
    CHECK(nav.h->values(x)(0, 0) == doctest::Approx(4.0));
    CHECK(nav.W->values(x)[0] == doctest::Approx(0.5));
    // |W|_h = 1 by construction
    Eigen::VectorXd w = nav.W->values(x);
    CHECK(w.dot(nav.h->values(x) * w) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("short 1-form forces a conformal factor") {
    KropinaData k = ab_data(metric(2, {"1", "0", "1"}), covector(2, {"1", "0"}));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    CHECK(k.kappa->value(x) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-14));
    NavigationData nav = to_navigation(k);
    CHECK(nav.h->values(x)(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(nav.W->values(x)[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("metric values and the conic domain") {
  SceneRuntime rt = runtime("flat-const");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd y(2);

  y << 1.0, 0.0;
  CHECK(eval_F(rt.nav, x, y) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_F(rt.ab, x, y) == doctest::Approx(0.5).epsilon(1e-15));
  y << 1.0, 1.0;
  CHECK(eval_F(rt.nav, x, y) == doctest::Approx(1.0).epsilon(1e-15));
  y << -1.0, 0.0;
  CHECK_THROWS_AS(eval_F(rt.nav, x, y), ConicDomainError);
  y << 0.0, 1.0;  // h(W, y) = 0 exactly
  CHECK_THROWS_AS(eval_F(rt.nav, x, y), ConicDomainError);

  SUBCASE("the wind itself always has F = 1/2") {
    SceneRuntime hopf = runtime("hopf-s3");
    Eigen::VectorXd p(3);
    p << 0.4, -0.2, 0.7;
    CHECK(eval_F(hopf.nav, p, hopf.nav.W->values(p)) == 0.5);
    CHECK(eval_F(rt.nav, x, rt.nav.W->values(x)) == 0.5);
  }
}

TEST_CASE("presentation round trips") {
  SUBCASE("navigation -> (a, b) -> navigation on the fixtures") {
    for (const std::string& name : builtin_names()) {
      SceneRuntime rt = runtime(name.c_str());
      KropinaData k = from_navigation(rt.nav);
      NavigationData back = to_navigation(k);
      SplitMix64 rng(7);
      for (int i = 0; i < 6; ++i) {
        Eigen::VectorXd x = sample_point(rng, rt.scene.box);
        CHECK((back.h->values(x) - rt.nav.h->values(x)).cwiseAbs().maxCoeff() <=
              1e-12);
        CHECK((back.W->values(x) - rt.nav.W->values(x)).cwiseAbs().maxCoeff() <=
              1e-12);
      }
    }
  }
  SUBCASE("(a, b) -> navigation -> gauged (a, b) on random scenes") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
      SceneRuntime rt = make_runtime(random_ab_scene(2, seed));
      KropinaData back = from_navigation_gauged(to_navigation(rt.ab),
                                                rt.ab.kappa);
      SplitMix64 rng(seed);
      for (int i = 0; i < 5; ++i) {
        Eigen::VectorXd x = sample_point(rng, rt.scene.box);
        CHECK((back.a->values(x) - rt.ab.a->values(x)).cwiseAbs().maxCoeff() <=
              1e-12);
        Eigen::VectorXd b0 = rt.ab.b->values(x);
        Eigen::VectorXd b1 = back.b->values(x);
        CHECK((b1 - b0).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  SUBCASE("F is gauge invariant") {
    SceneRuntime rt = make_runtime(random_ab_scene(3, 21));
    NavigationData nav = to_navigation(rt.ab);
    SplitMix64 rng(42);
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd x = sample_point(rng, rt.scene.box);
      Eigen::VectorXd y = sample_tangent(rng, nav, x);
      double fn = eval_F(nav, x, y);
      double fa = eval_F(rt.ab, x, y);
      CHECK(oracles::rel_close(fn, fa, 1e-12));
    }
  }
}

TEST_CASE("homogeneity in the fiber") {
  for (const char* name : {"shear", "hopf-s3"}) {
    SceneRuntime rt = runtime(name);
    MarginSamples ms = draw(rt, 5, 4, 0.05, 101);
    for (const TangentSample& s : ms.s) {
      double F = eval_F(rt.nav, s.x, s.y);
      Eigen::MatrixXd g = fundamental_tensor(rt.nav, s.x, s.y);
      Eigen::VectorXd G = spray_value(rt.nav, s.x, s.y);
      for (double lam : {0.5, 2.7}) {
        CHECK(oracles::rel_close(eval_F(rt.nav, s.x, lam * s.y), lam * F,
                                 1e-10));
        Eigen::MatrixXd gl = fundamental_tensor(rt.nav, s.x, lam * s.y);
        CHECK((gl - g).cwiseAbs().maxCoeff() <= 1e-9 * (1 + g.norm()));
        Eigen::VectorXd Gl = spray_value(rt.nav, s.x, lam * s.y);
        CHECK((Gl - lam * lam * G).cwiseAbs().maxCoeff() <=
              1e-8 * (1 + G.cwiseAbs().maxCoeff()));
      }
      // Euler: y^i y^j g_ij = F^2
      CHECK(oracles::rel_close(s.y.dot(g * s.y), F * F, 1e-10));
    }
  }
}

TEST_CASE("fundamental tensor matches the fiber Hessian of F^2/2") {
  SceneRuntime rt = runtime("hopf-s3");
  Eigen::VectorXd x(3), y(3);
  x << 0.2, -0.4, 0.3;
  y << 0.9, 0.1, 0.6;  // h(W, y) comfortably positive here
  Eigen::MatrixXd g = fundamental_tensor(rt.nav, x, y);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      oracles::RealFn f2 = [&](const Eigen::VectorXd& yy) {
        double F = eval_F(rt.nav, x, yy);
        return 0.5 * F * F;
      };
      double fd = oracles::partial_fd(f2, y, {i, j}, 0.02);
      CHECK(oracles::rel_close(g(i, j), fd, 1e-7));
    }
}

TEST_CASE("spray coefficients") {
  SUBCASE("translation-invariant data has a trivial spray") {
    SceneRuntime rt = runtime("flat-const");
    Eigen::VectorXd x(2), y(2);
    x << 0.7, -0.4;
    y << 0.8, 0.5;
    CHECK(spray_value(rt.nav, x, y).cwiseAbs().maxCoeff() == 0.0);
    SprayResult s = spray(rt.nav, x, y);
    CHECK(s.G.cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs(s.berwald) == 0.0);
    CHECK(s.R.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("closed form for a unit Killing wind") {
    SceneRuntime rt = runtime("hopf-s3");
    MarginSamples ms = draw(rt, 6, 3, 0.05, 202);
    for (const TangentSample& s : ms.s) {
      Eigen::VectorXd jet_G = spray_value(rt.nav, s.x, s.y);
      Eigen::VectorXd closed = spray_killing_closed_form(rt.nav, s.x, s.y);
      CHECK((jet_G - closed).cwiseAbs().maxCoeff() <=
            1e-8 * (1 + closed.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("berwald structure of the fixtures") {
  SUBCASE("parallel wind: fiber-quadratic spray with the h-connection") {
    SceneRuntime rt = runtime("prod-r-s2");
    MarginSamples ms = draw(rt, 5, 3, 0.1, 303);
    for (const TangentSample& s : ms.s) {
      SprayResult sr = spray(rt.nav, s.x, s.y);
      Tensor3<double> gamma = christoffel(*rt.nav.h, s.x);
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            worst = std::max(worst,
                             std::abs(sr.berwald(i, j, k) - gamma(i, j, k)));
      CHECK(worst <= 1e-8);
      CHECK(max_abs(sr.berwald_y) <= 1e-8);
    }
  }
  SUBCASE("rotational wind: weakly quadratic only") {
    SceneRuntime rt = runtime("hopf-s3");
    MarginSamples ms = draw(rt, 5, 3, 0.1, 404);
    double max_third = 0.0;
    for (const TangentSample& s : ms.s) {
      SprayResult sr = spray(rt.nav, s.x, s.y);
      Tensor3<double> gamma = christoffel(*rt.nav.h, s.x);
      CHECK(sr.mean_berwald.cwiseAbs().maxCoeff() <= 1e-7);
      double worst = 0.0;
      for (int j = 0; j < 3; ++j) {
        double tb = 0.0, tg = 0.0;
        for (int r = 0; r < 3; ++r) {
          tb += sr.berwald(r, j, r);
          tg += gamma(r, j, r);
        }
        worst = std::max(worst, std::abs(tb - tg));
      }
      CHECK(worst <= 1e-7);  // traced connection is Riemannian
      max_third = std::max(max_third, max_abs(sr.berwald_y));
    }
    CHECK(max_third > 1e-2);  // but the spray is not quadratic
  }
  SUBCASE("shearing wind is not even weakly quadratic") {
    SceneRuntime rt = runtime("shear");
    MarginSamples ms = draw(rt, 5, 3, 0.1, 505);
    double worst = 0.0;
    for (const TangentSample& s : ms.s)
      worst = std::max(
          worst, spray(rt.nav, s.x, s.y).mean_berwald.cwiseAbs().maxCoeff());
    CHECK(worst > 1e-2);
  }
}

TEST_CASE("flag curvature of the round fixture") {
  SceneRuntime rt = runtime("hopf-s3");
  SplitMix64 rng(909);
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd x = sample_point(rng, rt.scene.box);
    Eigen::VectorXd y = sample_tangent_cone(rng, rt.nav, x, 0.05);
    Eigen::VectorXd u = sample_transverse(rng, rt.nav, x, y);
    CHECK(flag_curvature(rt.nav, x, y, u) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("conditioning guard near the cone") {
  SceneRuntime rt = runtime("flat-const");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd y(2);
  y << 1e-7, 1.0;  // inside the domain but hugging the boundary
  CHECK_THROWS_AS(fundamental_tensor(rt.nav, x, y), NumericError);
}
