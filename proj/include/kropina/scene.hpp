#pragma once

// Scene ingestion: an INI-like description of a chart (metric + wind or
// a-metric + 1-form, box, tolerances, sampling), the compiled-in fixture
// catalog with expected suite verdicts, grid pre-validation, and the
// deterministic samplers every suite run draws from.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kropina/kropina.hpp"

namespace kropina {

enum class Presentation { navigation, alphabeta };

struct SceneTolerances {
  double identity = 1e-8;
  double predicate = 1e-6;
  double ode = 1e-5;
};

struct Scene {
  std::string name;
  int n = 0;
  Presentation presentation = Presentation::navigation;
  Box box;
  SceneTolerances tol;
  int points = 40;
  int tangents_per_point = 5;
  std::uint64_t seed = 1;

  MetricFieldPtr metric;     // h (navigation) or a (alphabeta)
  VectorFieldPtr wind;       // navigation presentation
  CovectorFieldPtr oneform;  // alphabeta presentation
  ScalarFieldPtr kappa;      // alphabeta only; null means derived from (a,b)
};

Scene load_scene(const std::string& path);
Scene load_scene_text(const std::string& text, const std::string& origin);

bool is_builtin(const std::string& name);
std::vector<std::string> builtin_names();
Scene builtin_scene(const std::string& name);

// Suite keys -> expected verdicts for the compiled-in fixtures; null for
// scenes without a declared table.
const std::map<std::string, bool>* expected_verdicts(const std::string& name);

// Scene with both presentations materialized and the 5^n-grid constraints
// checked (positive definiteness, |W| = 1 or b^2 > 0, fixture self-oracles).
struct SceneRuntime {
  Scene scene;
  NavigationData nav;
  KropinaData ab;
  const std::map<std::string, bool>* expected = nullptr;
};
SceneRuntime make_runtime(const Scene& s);

// Base scene with wind W + delta * V, V a seeded degree-1 polynomial field
// passed through the expression parser, renormalized to unit h-length.
Scene perturbed_scene(const Scene& base, double delta, std::uint64_t seed);

// Random (a, b) scene: diagonally dominant polynomial a, 1-form near
// (2, 0, ...); exercises the alphabeta path and the navigation round trip.
Scene random_ab_scene(int n, std::uint64_t seed);

// splitmix64; the one RNG stream every sampler draws from.
struct SplitMix64 {
  std::uint64_t state = 0;
  bool has_cached = false;
  double cached = 0.0;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double normal();  // Box-Muller over uniform01
};

Eigen::VectorXd sample_point(SplitMix64& rng, const Box& box);

// Standard normal components, reflected into the conic half-space, redrawn
// while |W_0| < 1e-6.
Eigen::VectorXd sample_tangent(SplitMix64& rng, const NavigationData& nav,
                               const Eigen::VectorXd& x);

// Same draw with a directional floor W_0 >= margin |y|_h.  Third fiber
// derivatives of the spray lose roughly four digits per decade of cone
// proximity, so routes that need them to vanish sample inside this subcone;
// vanishing there extends to the whole cone by analyticity in y.
Eigen::VectorXd sample_tangent_cone(SplitMix64& rng,
                                    const NavigationData& nav,
                                    const Eigen::VectorXd& x, double margin);

// Transverse edge for a flag at (x, y): redrawn until the h-plane of (y, u)
// is comfortably nondegenerate.
Eigen::VectorXd sample_transverse(SplitMix64& rng, const NavigationData& nav,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y);

}  // namespace kropina
