#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kropina/dynamics.hpp"
#include "kropina/errors.hpp"
#include "kropina/kropina.hpp"
#include "kropina/scene.hpp"
#include "kropina/suite.hpp"

namespace {

using namespace kropina;

Scene resolve_scene(const std::string& ref) {
  if (is_builtin(ref)) return builtin_scene(ref);
  return load_scene(ref);
}

std::string fmt_num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Eigen::VectorXd parse_components(const std::string& text, int n,
                                 const std::string& flag) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double v = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw SceneError("not a number: '" + item + "'", "cli." + flag);
    vals.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(vals.size()) != n)
    throw SceneError("expected " + std::to_string(n) +
                         " comma-separated components, got " +
                         std::to_string(vals.size()),
                     "cli." + flag);
  return Eigen::Map<Eigen::VectorXd>(vals.data(), n);
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw SceneError("cannot open for writing", "cli.out");
  os << payload;
}

std::string track_csv(const NavigationData& nav, const FlowTrack& track,
                      int n) {
  std::ostringstream os;
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",y" << i;
  os << ",F\n";
  for (const FlowState& s : track.states) {
    os << fmt_num(s.t);
    for (int i = 0; i < n; ++i) os << ',' << fmt_num(s.x[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt_num(s.y[i]);
    try {
      os << ',' << fmt_num(eval_F(nav, s.x, s.y));
    } catch (const ConicDomainError&) {
      os << ",nan";
    }
    os << '\n';
  }
  return os.str();
}

int finish_track(const NavigationData& nav, const FlowTrack& track, int n,
                 const std::string& out_path) {
  emit(out_path, track_csv(nav, track, n));
  if (track.exited) {
    std::cerr << "track left the chart (" << track.exit_reason << ") at t="
              << fmt_num(track.t_exit) << "; CSV is partial\n";
    return 3;
  }
  return 0;
}

int run_verify(const std::string& scene_ref, const SuiteOptions& opt,
               const std::string& out_path) {
  SceneRuntime rt = make_runtime(resolve_scene(scene_ref));
  nlohmann::ordered_json result = run_suite(rt, opt);
  emit(out_path, result.dump(2) + "\n");
  return suite_matches(result) ? 0 : 1;
}

int run_classify(const std::string& scene_ref,
                 std::optional<std::uint64_t> seed, std::optional<int> points,
                 const std::string& out_path) {
  SceneRuntime rt = make_runtime(resolve_scene(scene_ref));
  nlohmann::ordered_json report = classification_report(rt, seed, points);
  emit(out_path, report.dump(2) + "\n");
  return 0;
}

void print_coverage() {
  for (const auto& row : coverage_table())
    std::cout << row[0] << " | " << row[1] << " | " << row[2] << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-based laboratory for Kropina metrics F = h(y,y)/2h(W,y)"};
  app.require_subcommand(0, 1);

  std::string scene_ref, suite_sel = "all", out_path;
  std::uint64_t seed_val = 0;
  int points_val = 0;
  bool no_timings = false, list_cov = false;

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("scene", scene_ref, "scene file or builtin name");
  verify->add_option("--suite", suite_sel, "all | classify | dynamics")
      ->check(CLI::IsMember({"all", "classify", "dynamics"}));
  verify->add_option("--out", out_path, "write JSON here instead of stdout");
  verify->add_option("--seed", seed_val, "override the scene seed");
  verify->add_option("--points", points_val, "override the sample-point count");
  verify->add_flag("--no-timings", no_timings, "omit timings from the JSON");
  verify->add_flag("--list-coverage", list_cov,
                   "print the suite-key coverage table and exit");

  std::string x0_text, y0_text, mode_sel = "finsler";
  double T = 0.0, dt = 0.0;

  CLI::App* geodesic =
      app.add_subcommand("geodesic", "integrate a geodesic, CSV out");
  geodesic->add_option("scene", scene_ref)->required();
  geodesic->add_option("--x0", x0_text, "start point, comma-separated")
      ->required();
  geodesic->add_option("--y0", y0_text, "start tangent, comma-separated")
      ->required();
  geodesic->add_option("--T", T, "parameter span")->required();
  geodesic->add_option("--dt", dt, "step size")->required();
  geodesic->add_option("--mode", mode_sel, "finsler | riemann")
      ->check(CLI::IsMember({"finsler", "riemann"}));
  geodesic->add_option("--out", out_path, "write CSV here instead of stdout");

  CLI::App* flow = app.add_subcommand("flow", "integrate the wind flow's "
                                              "tangent lift, CSV out");
  flow->add_option("scene", scene_ref)->required();
  flow->add_option("--x0", x0_text, "start point, comma-separated")
      ->required();
  flow->add_option("--y0", y0_text, "transported tangent, comma-separated")
      ->required();
  flow->add_option("--T", T, "parameter span (may be negative)")->required();
  flow->add_option("--dt", dt, "step size")->required();
  flow->add_option("--out", out_path, "write CSV here instead of stdout");

  CLI::App* classify =
      app.add_subcommand("classify", "per-predicate JSON report");
  classify->add_option("scene", scene_ref)->required();
  classify->add_option("--seed", seed_val, "override the scene seed");
  classify->add_option("--points", points_val,
                       "override the sample-point count");
  classify->add_option("--out", out_path, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      if (list_cov) {
        print_coverage();
        return 0;
      }
      if (scene_ref.empty()) {
        std::cerr << "error: verify needs a scene (or --list-coverage)\n";
        return 2;
      }
      SuiteOptions opt;
      opt.selector = suite_sel;
      opt.timings = !no_timings;
      if (verify->count("--seed")) opt.seed = seed_val;
      if (verify->count("--points")) opt.points = points_val;
      return run_verify(scene_ref, opt, out_path);
    }
    if (geodesic->parsed() || flow->parsed()) {
      if (!(dt > 0.0)) throw SceneError("dt must be positive", "cli.dt");
      Scene scene = resolve_scene(scene_ref);
      SceneRuntime rt = make_runtime(scene);
      Eigen::VectorXd x0 = parse_components(x0_text, scene.n, "x0");
      Eigen::VectorXd y0 = parse_components(y0_text, scene.n, "y0");
      FlowTrack track;
      if (geodesic->parsed()) {
        GeodesicMode mode = mode_sel == "riemann" ? GeodesicMode::riemann
                                                  : GeodesicMode::finsler;
        track = integrate_geodesic(rt.nav, x0, y0, T, dt, scene.box, mode);
      } else {
        track = integrate_flow(rt.nav, x0, y0, T, dt, scene.box);
      }
      return finish_track(rt.nav, track, scene.n, out_path);
    }
    if (classify->parsed()) {
      std::optional<std::uint64_t> seed;
      std::optional<int> points;
      if (classify->count("--seed")) seed = seed_val;
      if (classify->count("--points")) points = points_val;
      return run_classify(scene_ref, seed, points, out_path);
    }
    std::cout << app.help();
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SceneError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
