#include "doctest.h"

#include <cmath>

#include "kropina/jet.hpp"
#include "oracles.hpp"

using namespace kropina;

namespace {
int binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}
}  // namespace

TEST_CASE("table layout") {
  SUBCASE("sizes are binomial coefficients") {
    CHECK(JetTable::get(2, 3).size() == binom(5, 3));   // 10
    CHECK(JetTable::get(3, 5).size() == binom(8, 5));   // 56
    CHECK(JetTable::get(1, 15).size() == 16);
    CHECK(JetTable::get(6, 3).size() == binom(9, 3));   // 84
  }
  SUBCASE("registry hands out one table per shape") {
    CHECK(&JetTable::get(2, 3) == &JetTable::get(2, 3));
    CHECK(&JetTable::get(2, 3) != &JetTable::get(2, 4));
  }
  SUBCASE("graded order with lexicographic ties") {
    const JetTable& t = JetTable::get(2, 2);
    // (0,0) (1,0) (0,1) (2,0) (1,1) (0,2)
    CHECK(t.total_degree(0) == 0);
    CHECK(t.exponents(1)[0] == 1);
    CHECK(t.exponents(2)[1] == 1);
    CHECK(t.exponents(4)[0] == 1);
    CHECK(t.exponents(4)[1] == 1);
    CHECK(t.degree_offset(1) == 1);
    CHECK(t.degree_offset(2) == 3);
    CHECK(t.degree_offset(3) == t.size());
  }
  SUBCASE("lower order is a prefix of higher order") {
    const JetTable& lo = JetTable::get(3, 2);
    const JetTable& hi = JetTable::get(3, 4);
    for (int r = 0; r < lo.size(); ++r)
      for (int v = 0; v < 3; ++v)
        CHECK(lo.exponents(r)[v] == hi.exponents(r)[v]);
  }
  SUBCASE("rank inverts exponents") {
    const JetTable& t = JetTable::get(3, 4);
    for (int r = 0; r < t.size(); ++r) {
      auto e = t.exponents(r);
      int ints[3] = {e[0], e[1], e[2]};
      CHECK(t.rank(std::span<const int>(ints, 3)) == r);
    }
    int over[3] = {5, 0, 0};
    CHECK(t.rank(std::span<const int>(over, 3)) == -1);
  }
}

TEST_CASE("constants and variables") {
  const JetTable& t = JetTable::get(2, 3);
  Jet c = Jet::constant(t, 2.5);
  CHECK(c.value() == 2.5);
  for (int r = 1; r < t.size(); ++r) CHECK(c.coeff(r) == 0.0);

  Jet x = Jet::variable(t, 0, 3.0);
  CHECK(x.value() == 3.0);
  CHECK(x.partial({0}) == 1.0);
  CHECK(x.partial({1}) == 0.0);
  CHECK(x.partial({0, 0}) == 0.0);
}

TEST_CASE("polynomial partials: x1*x2 at (3,5)") {
  const JetTable& t = JetTable::get(2, 3);
  Jet p = Jet::variable(t, 0, 3.0) * Jet::variable(t, 1, 5.0);
  CHECK(p.value() == 15.0);
  CHECK(p.partial({0}) == 5.0);
  CHECK(p.partial({1}) == 3.0);
  CHECK(p.partial({0, 1}) == 1.0);
  CHECK(p.partial({1, 0}) == 1.0);  // listing order immaterial
  CHECK(p.partial({0, 0}) == 0.0);
}

TEST_CASE("sin partials at 0") {
  const JetTable& t = JetTable::get(1, 3);
  Jet s = sin(Jet::variable(t, 0, 0.0));
  CHECK(s.value() == 0.0);
  CHECK(s.partial({0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.partial({0, 0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.partial({0, 0, 0}) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("arithmetic identities on composite jets") {
  const JetTable& t = JetTable::get(2, 4);
  Jet x = Jet::variable(t, 0, 0.7);
  Jet y = Jet::variable(t, 1, -0.4);
  Jet a = sin(x) + x * y;
  Jet b = exp(y * 0.5) - x;
  Jet c = 2.0 + cos(x * y);

  SUBCASE("distributivity") {
    Jet lhs = (a + b) * c;
    Jet rhs = a * c + b * c;
    for (int r = 0; r < t.size(); ++r)
      CHECK(lhs.coeff(r) == doctest::Approx(rhs.coeff(r)).epsilon(1e-14));
  }
  SUBCASE("sin^2 + cos^2 = 1") {
    Jet one = sin(a) * sin(a) + cos(a) * cos(a);
    CHECK(one.value() == doctest::Approx(1.0).epsilon(1e-15));
    for (int r = 1; r < t.size(); ++r)
      CHECK(std::abs(one.coeff(r)) <= 1e-14);
  }
  SUBCASE("exp(log(u)) == u") {
    Jet u = c;  // value > 0
    Jet v = exp(log(u));
    for (int r = 0; r < t.size(); ++r)
      CHECK(v.coeff(r) == doctest::Approx(u.coeff(r)).epsilon(1e-13));
  }
  SUBCASE("sqrt(u)^2 == u") {
    Jet u = c;
    Jet v = sqrt(u) * sqrt(u);
    for (int r = 0; r < t.size(); ++r)
      CHECK(v.coeff(r) == doctest::Approx(u.coeff(r)).epsilon(1e-13));
  }
  SUBCASE("u * recip(u) == 1") {
    Jet v = a - 2.0;  // nonzero value
    Jet one = v * recip(v);
    CHECK(one.value() == doctest::Approx(1.0).epsilon(1e-15));
    for (int r = 1; r < t.size(); ++r)
      CHECK(std::abs(one.coeff(r)) <= 1e-13);
  }
  SUBCASE("tan == sin / cos") {
    Jet lhs = tan(a);
    Jet rhs = sin(a) / cos(a);
    for (int r = 0; r < t.size(); ++r)
      CHECK(lhs.coeff(r) == doctest::Approx(rhs.coeff(r)).epsilon(1e-13));
  }
  SUBCASE("atan cancels tan near 0") {
    Jet small = 0.2 * a;
    Jet back = atan(tan(small));
    for (int r = 0; r < t.size(); ++r)
      CHECK(back.coeff(r) == doctest::Approx(small.coeff(r)).epsilon(1e-12));
  }
  SUBCASE("pow by repeated multiplication") {
    Jet p5 = pow(a, 5);
    Jet m = a * a * a * a * a;
    for (int r = 0; r < t.size(); ++r)
      CHECK(p5.coeff(r) == doctest::Approx(m.coeff(r)).epsilon(1e-12));
    Jet p0 = pow(a, 0);
    CHECK(p0.value() == 1.0);
  }
}

TEST_CASE("truncation is a coefficient prefix") {
  const JetTable& t5 = JetTable::get(2, 5);
  Jet w = exp(0.3 * sin(Jet::variable(t5, 0, 0.4))) *
          (1.0 + Jet::variable(t5, 1, -0.2));
  Jet w3 = w.truncated(3);
  CHECK(w3.table().order() == 3);
  for (int r = 0; r < w3.table().size(); ++r)
    CHECK(w3.coeff(r) == w.coeff(r));  // exact copy, not approximate
}

TEST_CASE("truncated operands reproduce the truncated product exactly") {
  const JetTable& t5 = JetTable::get(2, 5);
  Jet a = sin(Jet::variable(t5, 0, 0.9)) + Jet::variable(t5, 1, 0.3);
  Jet b = cos(Jet::variable(t5, 1, 0.3)) * 1.7 - Jet::variable(t5, 0, 0.9);
  Jet full = (a * b).truncated(2);
  Jet low = a.truncated(2) * b.truncated(2);
  for (int r = 0; r < low.table().size(); ++r)
    CHECK(full.coeff(r) == doctest::Approx(low.coeff(r)).epsilon(1e-15));
}

TEST_CASE("derivative lowers the order and matches the analytic rule") {
  const JetTable& t = JetTable::get(1, 5);
  Jet x = Jet::variable(t, 0, 0.6);
  Jet ds = sin(x).derivative(0);
  Jet c = cos(Jet::variable(JetTable::get(1, 4), 0, 0.6));
  CHECK(ds.table().order() == 4);
  for (int r = 0; r < ds.table().size(); ++r)
    CHECK(ds.coeff(r) == doctest::Approx(c.coeff(r)).epsilon(1e-14));
}

TEST_CASE("embedding into a wider table") {
  const JetTable& t2 = JetTable::get(2, 3);
  const JetTable& t3 = JetTable::get(3, 3);
  Jet f = sin(Jet::variable(t2, 0, 0.5)) * Jet::variable(t2, 1, 2.0);
  Jet g = f.embedded(t3);
  CHECK(g.table().nvars() == 3);
  CHECK(g.value() == f.value());
  CHECK(g.partial({0, 1}) == doctest::Approx(f.partial({0, 1})));
  CHECK(g.partial({2}) == 0.0);
  CHECK(g.partial({0, 2}) == 0.0);
}

TEST_CASE("apply_taylor_series is Horner composition") {
  const JetTable& t = JetTable::get(2, 3);
  Jet u = Jet::variable(t, 0, 1.2) + 0.5 * Jet::variable(t, 1, -0.3);
  // series of p(v) = 2 + 3(v-v0) + (v-v0)^2 around v0 = u.value()
  double a[] = {2.0, 3.0, 1.0, 0.0};
  Jet lhs = apply_taylor_series(u, a);
  Jet d = u - u.value();
  Jet rhs = 2.0 + 3.0 * d + d * d;
  for (int r = 0; r < t.size(); ++r)
    CHECK(lhs.coeff(r) == doctest::Approx(rhs.coeff(r)).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  const JetTable& t = JetTable::get(1, 2);
  Jet z = Jet::variable(t, 0, 0.0);
  Jet neg = z - 1.0;
  CHECK_THROWS_AS((void)log(neg), DomainError);
  CHECK_THROWS_AS((void)log(z), DomainError);   // log 0
  CHECK_THROWS_AS((void)sqrt(neg), DomainError);
  CHECK_THROWS_AS((void)recip(z), DomainError);
  CHECK_THROWS_AS((void)(Jet::constant(t, 1.0) / z), DomainError);
  Jet pole = Jet::constant(t, std::acos(-1.0) / 2.0) + z;
  CHECK_THROWS_AS((void)tan(pole), DomainError);
}

TEST_CASE("jet partials agree with the finite-difference oracle") {
  const JetTable& t = JetTable::get(2, 3);
  auto f = [](const Eigen::VectorXd& x) {
    return std::exp(0.3 * std::sin(x[0])) * std::atan(x[1]) +
           x[0] * x[0] * x[1];
  };
  Eigen::VectorXd x0(2);
  x0 << 0.4, -0.7;
  Jet fx = exp(0.3 * sin(Jet::variable(t, 0, x0[0]))) *
               atan(Jet::variable(t, 1, x0[1])) +
           Jet::variable(t, 0, x0[0]) * Jet::variable(t, 0, x0[0]) *
               Jet::variable(t, 1, x0[1]);
  const std::vector<std::vector<int>> multis = {
      {0}, {1}, {0, 0}, {0, 1}, {1, 1}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  for (const auto& m : multis) {
    double fd = oracles::partial_fd(f, x0, m);
    double jv = fx.partial(std::span<const int>(m.data(), m.size()));
    CHECK_MESSAGE(oracles::rel_close(jv, fd, 1e-7), "multi-index size ",
                  m.size(), ": jet ", jv, " vs fd ", fd);
  }
}
