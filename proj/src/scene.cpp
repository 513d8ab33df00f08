#include "kropina/scene.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kropina/errors.hpp"
#include "kropina/riemann.hpp"

namespace kropina {

double SplitMix64::normal() {
  if (has_cached) {
    has_cached = false;
    return cached;
  }
  double u1 = 1.0 - uniform01();  // (0, 1]
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  cached = r * std::sin(a);
  has_cached = true;
  return r * std::cos(a);
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string point_text(const Eigen::VectorXd& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += fmt_num(x[i]);
  }
  return s + ")";
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct IniValue {
  std::string text;
  bool quoted = false;
  int line = 0;
  bool used = false;
};

struct IniDoc {
  // section -> key -> value; insertion-ordered not needed, lookups only
  std::map<std::string, std::map<std::string, IniValue>> sections;
};

IniDoc parse_ini(const std::string& text) {
  IniDoc doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    // strip comments, but not inside a quoted value
    bool quote = false;
    std::string line;
    for (char c : raw) {
      if (c == '"') quote = !quote;
      if (c == '#' && !quote) break;
      line += c;
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", lineno, 1);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("empty section name", lineno, 1);
      doc.sections[section];  // a section may be empty
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno, 1);
    if (section.empty())
      throw ParseError("key outside any [section]", lineno, 1);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno, 1);
    IniValue v;
    v.line = lineno;
    if (!val.empty() && val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        throw ParseError("unterminated quoted value", lineno,
                         static_cast<int>(eq + 2));
      v.text = val.substr(1, val.size() - 2);
      v.quoted = true;
    } else {
      v.text = val;
    }
    auto [it, inserted] = doc.sections[section].emplace(key, v);
    if (!inserted)
      throw SceneError("duplicate key", section + "." + key);
  }
  return doc;
}

class SceneReader {
public:
  SceneReader(const std::string& text, std::string origin)
      : doc_(parse_ini(text)), origin_(std::move(origin)) {}

  IniValue* find(const std::string& section, const std::string& key) {
    auto s = doc_.sections.find(section);
    if (s == doc_.sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  const IniValue& require(const std::string& section, const std::string& key) {
    IniValue* v = find(section, key);
    if (!v) throw SceneError("missing key", section + "." + key);
    return *v;
  }

  std::string bare(const std::string& section, const std::string& key) {
    const IniValue& v = require(section, key);
    if (v.quoted)
      throw SceneError("value must not be quoted", section + "." + key);
    return v.text;
  }

  double number(const std::string& section, const std::string& key) {
    return to_double(bare(section, key), section + "." + key);
  }

  double number_or(const std::string& section, const std::string& key,
                   double dflt) {
    if (!find(section, key)) return dflt;
    return number(section, key);
  }

  long integer_or(const std::string& section, const std::string& key,
                  long dflt) {
    if (!find(section, key)) return dflt;
    const std::string t = bare(section, key);
    long out = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw SceneError("expected an integer, got '" + t + "'",
                       section + "." + key);
    return out;
  }

  std::uint64_t seed_or(const std::string& section, const std::string& key,
                        std::uint64_t dflt) {
    if (!find(section, key)) return dflt;
    const std::string t = bare(section, key);
    std::uint64_t out = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw SceneError("expected an unsigned integer, got '" + t + "'",
                       section + "." + key);
    return out;
  }

  ExprPtr expr(const std::string& section, const std::string& key, int n) {
    const IniValue& v = require(section, key);
    if (!v.quoted)
      throw SceneError("expressions must be quoted", section + "." + key);
    ExprPtr e;
    try {
      e = parse_expr(v.text);
    } catch (const ParseError& pe) {
      throw SceneError(std::string("expression error: ") + pe.what(),
                       section + "." + key);
    }
    if (expr_dimension(*e) > n)
      throw SceneError("expression uses a coordinate beyond dimension " +
                           std::to_string(n),
                       section + "." + key);
    return e;
  }

  void finish() {
    static const char* known[] = {"scene", "metric", "wind", "sampling"};
    for (const auto& [sec, keys] : doc_.sections) {
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return sec == k;
          }) == std::end(known))
        throw SceneError("unknown section", sec);
      for (const auto& [key, v] : keys)
        if (!v.used) throw SceneError("unknown key", sec + "." + key);
    }
  }

  static double to_double(const std::string& t, const std::string& path) {
    double out = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw SceneError("expected a number, got '" + t + "'", path);
    return out;
  }

private:
  IniDoc doc_;
  std::string origin_;
};

}  // namespace

Scene load_scene_text(const std::string& text, const std::string& origin) {
  SceneReader rd(text, origin);
  Scene s;

  s.name = rd.bare("scene", "name");
  long n = rd.integer_or("scene", "n", 0);
  if (rd.find("scene", "n") == nullptr)
    throw SceneError("missing key", "scene.n");
  if (n < 2 || n > 6)
    throw SceneError("n must be between 2 and 6", "scene.n");
  s.n = static_cast<int>(n);

  std::string pres = rd.bare("scene", "presentation");
  if (pres == "navigation")
    s.presentation = Presentation::navigation;
  else if (pres == "alphabeta")
    s.presentation = Presentation::alphabeta;
  else
    throw SceneError("presentation must be navigation or alphabeta",
                     "scene.presentation");

  s.box.lo.resize(s.n);
  s.box.hi.resize(s.n);
  for (int i = 0; i < s.n; ++i) {
    std::string key = "box" + std::to_string(i + 1);
    std::string path = "sampling." + key;
    std::istringstream bs(rd.bare("sampling", key));
    std::string a, b, extra;
    if (!(bs >> a >> b) || (bs >> extra))
      throw SceneError("expected 'lo hi'", path);
    s.box.lo[i] = SceneReader::to_double(a, path);
    s.box.hi[i] = SceneReader::to_double(b, path);
    if (!(s.box.lo[i] < s.box.hi[i]))
      throw SceneError("box must satisfy lo < hi", path);
  }
  s.points = static_cast<int>(rd.integer_or("sampling", "points", 40));
  s.tangents_per_point =
      static_cast<int>(rd.integer_or("sampling", "tangents", 5));
  if (s.points < 1) throw SceneError("points must be >= 1", "sampling.points");
  if (s.tangents_per_point < 1)
    throw SceneError("tangents must be >= 1", "sampling.tangents");
  s.seed = rd.seed_or("sampling", "seed", 1);
  s.tol.identity = rd.number_or("sampling", "tol_identity", 1e-8);
  s.tol.predicate = rd.number_or("sampling", "tol_predicate", 1e-6);
  s.tol.ode = rd.number_or("sampling", "tol_ode", 1e-5);
  if (!(s.tol.identity > 0 && s.tol.predicate > 0 && s.tol.ode > 0))
    throw SceneError("tolerances must be positive", "sampling.tol_identity");

  const char* mprefix =
      s.presentation == Presentation::navigation ? "h" : "a";
  std::vector<ExprPtr> upper;
  for (int i = 1; i <= s.n; ++i)
    for (int j = i; j <= s.n; ++j)
      upper.push_back(rd.expr(
          "metric", mprefix + std::to_string(i) + std::to_string(j), s.n));
  s.metric = make_expr_metric(s.n, upper);

  if (s.presentation == Presentation::navigation) {
    if (rd.find("metric", "kappa"))
      throw SceneError("kappa belongs to the alphabeta presentation",
                       "metric.kappa");
    std::vector<ExprPtr> comps;
    for (int i = 1; i <= s.n; ++i)
      comps.push_back(rd.expr("wind", "W" + std::to_string(i), s.n));
    s.wind = make_expr_vector(s.n, comps);
  } else {
    std::vector<ExprPtr> comps;
    for (int i = 1; i <= s.n; ++i)
      comps.push_back(rd.expr("wind", "b" + std::to_string(i), s.n));
    s.oneform = make_expr_covector(s.n, comps);
    if (rd.find("metric", "kappa"))
      s.kappa = make_expr_scalar(s.n, rd.expr("metric", "kappa", s.n));
  }

  rd.finish();
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file '" + path + "'", "scene");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene_text(buf.str(), path);
}

namespace {

const char* kFlatConst = R"ini(
[scene]
name = flat-const
n = 2
presentation = navigation

[metric]
h11 = "1"
h12 = "0"
h22 = "1"

[wind]
W1 = "1"
W2 = "0"

[sampling]
box1 = -1 1
box2 = -1 1
points = 40
tangents = 5
seed = 1
)ini";

const char* kShear = R"ini(
[scene]
name = shear
n = 2
presentation = navigation

[metric]
h11 = "1"
h12 = "0"
h22 = "1"

[wind]
W1 = "cos(x1)"
W2 = "sin(x1)"

[sampling]
box1 = -1 1
box2 = -1 1
points = 40
tangents = 5
seed = 1
)ini";

const char* kHopf = R"ini(
[scene]
name = hopf-s3
n = 3
presentation = navigation

[metric]
h11 = "4/((1 + x1^2 + x2^2 + x3^2)^2)"
h12 = "0"
h13 = "0"
h22 = "4/((1 + x1^2 + x2^2 + x3^2)^2)"
h23 = "0"
h33 = "4/((1 + x1^2 + x2^2 + x3^2)^2)"

[wind]
W1 = "x1*x3 - x2"
W2 = "x1 + x2*x3"
W3 = "(1 - x1^2 - x2^2 + x3^2)/2"

[sampling]
box1 = -2 2
box2 = -2 2
box3 = -2 2
points = 40
tangents = 5
seed = 1
)ini";

const char* kProd = R"ini(
[scene]
name = prod-r-s2
n = 3
presentation = navigation

[metric]
h11 = "1"
h12 = "0"
h13 = "0"
h22 = "1"
h23 = "0"
h33 = "sin(x2)^2"

[wind]
W1 = "1"
W2 = "0"
W3 = "0"

[sampling]
box1 = -1 1
box2 = 0.4 1.1
box3 = -1 1
points = 40
tangents = 5
seed = 1
)ini";

using VerdictTable = std::map<std::string, bool>;

const VerdictTable kFlatExpected = {
    {"T-constantK", true},  {"T-wB", true},         {"T-B", true},
    {"I-eq22", true},       {"I-eq26", true},       {"T-pscalar", true},
    {"T-K0-berwald", true}, {"E-killingF", true},   {"E-eq413", true},
    {"E-eq414", true},      {"E-eq416", true},      {"T-geodesic-image", true},
    {"T-isometry-equiv", true}};

const VerdictTable kShearExpected = {
    {"T-constantK", true},  {"T-wB", false},        {"T-B", false},
    {"I-eq22", true},       {"I-eq26", true},       {"T-pscalar", false},
    {"T-K0-berwald", true}, {"E-killingF", false},  {"E-eq413", true},
    {"E-eq414", false},     {"E-eq416", false},     {"T-geodesic-image", false},
    {"T-isometry-equiv", true}};

const VerdictTable kHopfExpected = {
    {"T-constantK", true},  {"T-wB", true},         {"T-B", false},
    {"I-eq22", true},       {"I-eq26", false},      {"T-pscalar", true},
    {"T-K0-berwald", true}, {"E-killingF", true},   {"E-eq413", true},
    {"E-eq414", true},      {"E-eq416", true},      {"T-geodesic-image", true},
    {"T-isometry-equiv", true}};

const VerdictTable kProdExpected = {
    {"T-constantK", true},  {"T-wB", true},         {"T-B", true},
    {"I-eq22", true},       {"I-eq26", true},       {"T-pscalar", false},
    {"T-K0-berwald", true}, {"E-killingF", true},   {"E-eq413", true},
    {"E-eq414", true},      {"E-eq416", true},      {"T-geodesic-image", true},
    {"T-isometry-equiv", true}};

const std::map<std::string, std::pair<const char*, const VerdictTable*>>
    kBuiltins = {{"flat-const", {kFlatConst, &kFlatExpected}},
                 {"shear", {kShear, &kShearExpected}},
                 {"hopf-s3", {kHopf, &kHopfExpected}},
                 {"prod-r-s2", {kProd, &kProdExpected}}};

}  // namespace

bool is_builtin(const std::string& name) { return kBuiltins.count(name) > 0; }

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : kBuiltins) out.push_back(name);
  return out;
}

Scene builtin_scene(const std::string& name) {
  auto it = kBuiltins.find(name);
  if (it == kBuiltins.end())
    throw SceneError("unknown builtin scene '" + name + "'", "scene.name");
  return load_scene_text(it->second.first, name);
}

const std::map<std::string, bool>* expected_verdicts(const std::string& name) {
  auto it = kBuiltins.find(name);
  return it == kBuiltins.end() ? nullptr : it->second.second;
}

namespace {

void validate_grid(const SceneRuntime& rt) {
  const Scene& s = rt.scene;
  const int n = s.n;
  const int per_axis = 5;
  std::vector<int> idx(n, 0);
  Eigen::VectorXd x(n);

  double worst_dev = -1.0, worst_len = 0.0;
  Eigen::VectorXd worst_x;
  double worst_killing = 0.0;
  Eigen::VectorXd worst_killing_x;
  bool is_hopf = s.name == "hopf-s3";

  for (;;) {
    for (int i = 0; i < n; ++i)
      x[i] = s.box.lo[i] +
             (s.box.hi[i] - s.box.lo[i]) * idx[i] / (per_axis - 1);

    Eigen::MatrixXd m = s.metric->values(x);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw SceneError("metric not positive definite at " + point_text(x),
                       "metric");

    if (s.presentation == Presentation::navigation) {
      Eigen::VectorXd w = s.wind->values(x);
      double len = std::sqrt(w.dot(m * w));
      double dev = std::abs(len - 1.0);
      if (dev > worst_dev) {
        worst_dev = dev;
        worst_len = len;
        worst_x = x;
      }
      if (is_hopf) {
        double kr = nav_deform(*s.metric, *s.wind, x).R.norm();
        if (kr > worst_killing) {
          worst_killing = kr;
          worst_killing_x = x;
        }
      }
    } else {
      Eigen::VectorXd b = rt.ab.b->values(x);
      double b2 = b.dot(llt.solve(b));
      if (!(b2 > 0))
        throw SceneError("b^2 must be positive, got " + fmt_num(b2) + " at " +
                             point_text(x),
                         "wind");
      double gauge = std::exp(rt.ab.kappa->value(x)) * b2;
      if (std::abs(gauge - 4.0) > 1e-8)
        throw SceneError("kappa inconsistent: e^kappa b^2 = " +
                             fmt_num(gauge) + " at " + point_text(x),
                         "metric.kappa");
    }

    int i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) break;
  }

  if (s.presentation == Presentation::navigation && worst_dev > 1e-8)
    throw SceneError("unit-length violation at " + point_text(worst_x) +
                         ": |W|=" + fmt_num(worst_len),
                     "wind");
  if (is_hopf && worst_killing > 1e-9)
    throw NumericError("fixture self-check failed: Killing residual " +
                       fmt_num(worst_killing) + " at " +
                       point_text(worst_killing_x));
}

}  // namespace

SceneRuntime make_runtime(const Scene& s) {
  SceneRuntime rt;
  rt.scene = s;
  if (s.presentation == Presentation::navigation) {
    rt.nav = NavigationData{s.metric, s.wind};
    rt.ab = from_navigation(rt.nav);
  } else {
    ScalarFieldPtr kap =
        s.kappa ? s.kappa : make_kropina_kappa(s.metric, s.oneform);
    rt.ab = KropinaData{s.metric, s.oneform, kap};
    rt.nav = to_navigation(rt.ab);
  }
  validate_grid(rt);
  rt.expected = expected_verdicts(s.name);
  return rt;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf);
}

// c0 + c1*x1 + ... + cn*xn with coefficients in [-1, 1], written without
// any unary minus (the grammar has none).
std::string random_poly_text(SplitMix64& rng, int n, double scale) {
  auto coef = [&] { return scale * (2.0 * rng.uniform01() - 1.0); };
  double c0 = coef();
  std::string out =
      c0 < 0 ? "0 - " + fixed4(-c0) : fixed4(c0);
  for (int i = 0; i < n; ++i) {
    double c = coef();
    out += (c < 0 ? " - " : " + ") + fixed4(std::abs(c)) + "*x" +
           std::to_string(i + 1);
  }
  return out;
}

}  // namespace

Scene perturbed_scene(const Scene& base, double delta, std::uint64_t seed) {
  if (base.presentation != Presentation::navigation || !base.wind)
    throw SceneError("perturbation needs a navigation scene",
                     "scene.presentation");
  SplitMix64 rng(seed);
  std::vector<ExprPtr> comps;
  for (int i = 0; i < base.n; ++i)
    comps.push_back(parse_expr(random_poly_text(rng, base.n, 1.0)));
  Scene s = base;
  std::ostringstream nm;
  nm << base.name << "~d" << delta << "s" << seed;
  s.name = nm.str();
  s.wind = make_unit_vector(base.metric, base.wind,
                            make_expr_vector(base.n, comps), delta);
  s.seed = seed;
  return s;
}

Scene random_ab_scene(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto small = [&](double scale) {
    return scale * (2.0 * rng.uniform01() - 1.0);
  };
  auto term = [&](double scale) {
    double c = small(scale);
    int v = 1 + static_cast<int>(rng.next() % n);
    return std::string(c < 0 ? " - " : " + ") + fixed4(std::abs(c)) + "*x" +
           std::to_string(v);
  };

  std::ostringstream os;
  os << "[scene]\nname = random-ab-" << seed << "\nn = " << n
     << "\npresentation = alphabeta\n\n[metric]\n";
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      os << "a" << i << j << " = \"";
      if (i == j)
        os << "1" << term(0.08) << term(0.08);
      else
        os << "0" << term(0.03);
      os << "\"\n";
    }
  os << "\n[wind]\n";
  for (int i = 1; i <= n; ++i) {
    os << "b" << i << " = \"";
    if (i == 1)
      os << "2" << term(0.2);
    else
      os << "0" << term(0.2);
    os << "\"\n";
  }
  os << "\n[sampling]\n";
  for (int i = 1; i <= n; ++i) os << "box" << i << " = -1 1\n";
  os << "points = 20\ntangents = 4\nseed = " << seed << "\n";
  return load_scene_text(os.str(), "random-ab");
}

Eigen::VectorXd sample_point(SplitMix64& rng, const Box& box) {
  Eigen::VectorXd x(box.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = box.lo[i] + rng.uniform01() * (box.hi[i] - box.lo[i]);
  return x;
}

Eigen::VectorXd sample_tangent_cone(SplitMix64& rng,
                                    const NavigationData& nav,
                                    const Eigen::VectorXd& x, double margin) {
  const int n = nav.dim();
  Eigen::MatrixXd h = nav.h->values(x);
  Eigen::VectorXd wlow = h * nav.W->values(x);
  for (int tries = 0; tries < 256; ++tries) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    double w0 = wlow.dot(y);
    if (w0 < 0) {
      y = -y;
      w0 = -w0;
    }
    if (w0 >= 1e-6 && w0 >= margin * std::sqrt(y.dot(h * y))) return y;
  }
  throw NumericError("tangent sampler kept hitting the conic boundary at " +
                     point_text(x));
}

Eigen::VectorXd sample_tangent(SplitMix64& rng, const NavigationData& nav,
                               const Eigen::VectorXd& x) {
  return sample_tangent_cone(rng, nav, x, 0.0);
}

Eigen::VectorXd sample_transverse(SplitMix64& rng, const NavigationData& nav,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y) {
  const int n = nav.dim();
  Eigen::MatrixXd h = nav.h->values(x);
  double yy = y.dot(h * y);
  for (int tries = 0; tries < 256; ++tries) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.normal();
    double uu = u.dot(h * u), uy = u.dot(h * y);
    if (uu * yy - uy * uy > 1e-3 * uu * yy) return u;
  }
  throw NumericError("transverse sampler kept drawing degenerate flags at " +
                     point_text(x));
}

}  // namespace kropina
