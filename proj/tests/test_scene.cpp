#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "kropina/errors.hpp"
#include "kropina/scene.hpp"

using namespace kropina;

namespace {

const char* kGood = R"ini(
# a comment line
[scene]
name = demo
n = 2
presentation = navigation

[metric]
h11 = "1"          # trailing comment
h12 = "0"
h22 = "1"

[wind]
W1 = "cos(x1)"
W2 = "sin(x1)"

[sampling]
box1 = -1 1
box2 = -0.5 0.5
points = 12
tangents = 3
seed = 99
tol_predicate = 1e-7
)ini";

Scene good() { return load_scene_text(kGood, "demo.ini"); }

std::string patched(const std::string& from, const std::string& to) {
  std::string s = kGood;
  std::size_t at = s.find(from);
  REQUIRE(at != std::string::npos);
  s.replace(at, from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("scene text parsing") {
  Scene s = good();
  CHECK(s.name == "demo");
  CHECK(s.n == 2);
  CHECK(s.presentation == Presentation::navigation);
  CHECK(s.box.lo[1] == doctest::Approx(-0.5));
  CHECK(s.box.hi[0] == doctest::Approx(1.0));
  CHECK(s.points == 12);
  CHECK(s.tangents_per_point == 3);
  CHECK(s.seed == 99);
  CHECK(s.tol.identity == doctest::Approx(1e-8));   // default kept
  CHECK(s.tol.predicate == doctest::Approx(1e-7));  // overridden
  CHECK(s.metric->values(Eigen::VectorXd::Zero(2))(0, 0) == 1.0);
  CHECK(s.wind->values(Eigen::VectorXd::Zero(2))[0] == 1.0);
}

TEST_CASE("parse-level rejections carry positions") {
  CHECK_THROWS_AS(load_scene_text("x = 1\n", "t"), ParseError);
  try {
    load_scene_text("[scene\nname = x\n", "t");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("unterminated section header") !=
          std::string::npos);
  }
  try {
    load_scene_text("[scene]\nnoequals\n", "t");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_scene_text("[scene]\nname = \"x\n", "t"), ParseError);
  CHECK_THROWS_AS(load_scene_text("[]\n", "t"), ParseError);
}

TEST_CASE("schema rejections name the field") {
  auto field_of = [](const std::string& text) {
    try {
      load_scene_text(text, "t");
    } catch (const SceneError& e) {
      return std::string(e.field());
    }
    return std::string("NO THROW");
  };

  CHECK(field_of(patched("n = 2", "n = 2\nn2 = 3")) == "scene.n2");
  CHECK(field_of(patched("n = 2", "n = 9")) == "scene.n");
  CHECK(field_of(patched("[sampling]", "[bogus]\nz = 1\n\n[sampling]")) ==
        "bogus");
  CHECK(field_of(patched("points = 12", "points = 12\npoints = 13")) ==
        "sampling.points");
  CHECK(field_of(patched("presentation = navigation",
                         "presentation = euclidean")) == "scene.presentation");
  CHECK(field_of(patched("box2 = -0.5 0.5", "box2 = 1 -1")) ==
        "sampling.box2");
  CHECK(field_of(patched("box2 = -0.5 0.5", "box2 = 7")) == "sampling.box2");
  CHECK(field_of(patched("tol_predicate = 1e-7", "tol_predicate = -1")) ==
        "sampling.tol_identity");
  CHECK(field_of(patched("points = 12", "points = \"12\"")) ==
        "sampling.points");
  CHECK(field_of(patched("W1 = \"cos(x1)\"", "W1 = cos(x1)")) == "wind.W1");
  CHECK(field_of(patched("W1 = \"cos(x1)\"", "W1 = \"cos(x3)\"")) ==
        "wind.W1");
  CHECK(field_of(patched("h22 = \"1\"", "h22 = \"1\"\nkappa = \"0\"")) ==
        "metric.kappa");

  // a missing required key
  std::string no_n = kGood;
  std::size_t at = no_n.find("n = 2\n");
  no_n.erase(at, 6);
  CHECK(field_of(no_n) == "scene.n");

  // expression syntax errors are wrapped with the field
  try {
    load_scene_text(patched("W2 = \"sin(x1)\"", "W2 = \"sin(x1\""), "t");
    FAIL("expected a scene error");
  } catch (const SceneError& e) {
    CHECK(std::string(e.field()) == "wind.W2");
    CHECK(std::string(e.what()).find("expression error") != std::string::npos);
  }
}

TEST_CASE("grid validation walks the chart") {
  SUBCASE("wind must have unit length") {
    try {
      make_runtime(load_scene_text(
          patched("W1 = \"cos(x1)\"", "W1 = \"2*cos(x1)\""), "t"));
      FAIL("expected a scene error");
    } catch (const SceneError& e) {
      std::string w = e.what();
      CHECK(w.find("unit-length violation at") != std::string::npos);
      CHECK(w.find("|W|=") != std::string::npos);
    }
  }
  SUBCASE("metric must be positive definite") {
    try {
      make_runtime(
          load_scene_text(patched("h22 = \"1\"", "h22 = \"0 - 1\""), "t"));
      FAIL("expected a scene error");
    } catch (const SceneError& e) {
      CHECK(std::string(e.what()).find("not positive definite at") !=
            std::string::npos);
    }
  }
  SUBCASE("alphabeta needs b^2 > 0 and a consistent gauge") {
    const char* ab = R"ini(
[scene]
name = abdemo
n = 2
presentation = alphabeta

[metric]
a11 = "1"
a12 = "0"
a22 = "1"
kappa = "log(4) - log(4 + x1^2)"

[wind]
b1 = "2"
b2 = "x1"

[sampling]
box1 = -1 1
box2 = -1 1
)ini";
    CHECK_NOTHROW(make_runtime(load_scene_text(ab, "t")));

    // without an explicit kappa the gauge is derived, so the b^2 > 0 check
    // is the first to see the degenerate grid column
    std::string zero_b = ab;
    zero_b.replace(zero_b.find("b1 = \"2\""), 8, "b1 = \"x1\"");
    zero_b.replace(zero_b.find("kappa = \"log(4) - log(4 + x1^2)\"\n"), 33,
                   "");
    try {
      make_runtime(load_scene_text(zero_b, "t"));
      FAIL("expected a scene error");
    } catch (const SceneError& e) {
      CHECK(std::string(e.what()).find("b^2 must be positive") !=
            std::string::npos);
    }

    std::string bad_gauge = ab;
    bad_gauge.replace(bad_gauge.find("kappa = \"log(4) - log(4 + x1^2)\""), 32,
                      "kappa = \"1\"");
    try {
      make_runtime(load_scene_text(bad_gauge, "t"));
      FAIL("expected a scene error");
    } catch (const SceneError& e) {
      CHECK(std::string(e.field()) == "metric.kappa");
      CHECK(std::string(e.what()).find("kappa inconsistent") !=
            std::string::npos);
    }
  }
}

TEST_CASE("builtin catalog") {
  std::vector<std::string> names = builtin_names();
  REQUIRE(names.size() == 4);
  for (const std::string& name : names) {
    CHECK(is_builtin(name));
    SceneRuntime rt = make_runtime(builtin_scene(name));
    CHECK(rt.scene.name == name);
    REQUIRE(rt.expected != nullptr);
    CHECK(rt.expected->size() == 13);
  }
  CHECK(!is_builtin("no-such-scene"));
  CHECK(expected_verdicts("no-such-scene") == nullptr);
  CHECK_THROWS_AS(builtin_scene("no-such-scene"), SceneError);
}

TEST_CASE("scene files load like scene text") {
  std::string path = "/tmp/kropina_scene_test.ini";
  {
    std::ofstream out(path);
    out << kGood;
  }
  Scene s = load_scene(path);
  CHECK(s.name == "demo");
  CHECK(s.tangents_per_point == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_scene("/tmp/does_not_exist_kropina.ini"), SceneError);
}

TEST_CASE("derived scenes") {
  Scene base = builtin_scene("hopf-s3");
  SUBCASE("zero perturbation keeps the wind") {
    SceneRuntime rt = make_runtime(perturbed_scene(base, 0.0, 5));
    SceneRuntime rb = make_runtime(base);
    SplitMix64 rng(8);
    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXd x = sample_point(rng, rb.scene.box);
      CHECK((rt.nav.W->values(x) - rb.nav.W->values(x)).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }
  SUBCASE("small perturbations stay valid scenes") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull})
      CHECK_NOTHROW(make_runtime(perturbed_scene(base, 1e-2, seed)));
  }
  SUBCASE("random alphabeta scenes are valid and deterministic") {
    for (int n : {2, 3}) {
      Scene a = random_ab_scene(n, 17);
      Scene b = random_ab_scene(n, 17);
      Scene c = random_ab_scene(n, 18);
      SceneRuntime ra = make_runtime(a);
      Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.2);
      CHECK((a.metric->values(x) - b.metric->values(x)).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK((a.oneform->values(x) - c.oneform->values(x))
                .cwiseAbs()
                .maxCoeff() != 0.0);
      CHECK(ra.nav.dim() == n);
    }
  }
}

TEST_CASE("random streams") {
  SplitMix64 a(123), b(123), c(124);
  for (int i = 0; i < 10; ++i) {
    std::uint64_t va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
  }
  SplitMix64 u(7);
  for (int i = 0; i < 100; ++i) {
    double d = u.uniform01();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
    CHECK(std::isfinite(u.normal()));
  }
}

TEST_CASE("samplers respect the chart and the cone") {
  SceneRuntime rt = make_runtime(builtin_scene("hopf-s3"));
  SplitMix64 rng(64);
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd x = sample_point(rng, rt.scene.box);
    CHECK(rt.scene.box.contains(x));
    Eigen::MatrixXd h = rt.nav.h->values(x);
    Eigen::VectorXd w = rt.nav.W->values(x);

    Eigen::VectorXd y = sample_tangent(rng, rt.nav, x);
    CHECK(w.dot(h * y) > 0.0);

    Eigen::VectorXd yc = sample_tangent_cone(rng, rt.nav, x, 0.1);
    CHECK(w.dot(h * yc) >= 0.1 * std::sqrt(yc.dot(h * yc)) * (1 - 1e-12));

    Eigen::VectorXd u = sample_transverse(rng, rt.nav, x, y);
    double gram = y.dot(h * y) * u.dot(h * u) -
                  y.dot(h * u) * y.dot(h * u);
    CHECK(gram > 1e-6 * y.dot(h * y) * u.dot(h * u));
  }
  SUBCASE("an impossible cone margin is reported, not spun on") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(sample_tangent_cone(rng, rt.nav, x, 10.0), NumericError);
  }
}
