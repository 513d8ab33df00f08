#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet stores the Taylor coefficients c_a = (d^a f)(x0) / a! of a smooth
// scalar function, one per multi-index a with |a| <= order.  Mixed partials
// commute by construction: there is a single storage slot per multi-index.
//
// Multi-indices are ordered by total degree, ties broken lexicographically,
// so tables with the same variable count agree rank-for-rank on the shared
// degree prefix.  Truncating to a lower order is therefore a prefix copy,
// and a derivative lands naturally in the table of one order less.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "kropina/errors.hpp"

namespace kropina {

class JetTable {
public:
  // Canonical table for (nvars, order), cached for the process lifetime;
  // pointer identity doubles as table identity.
  static const JetTable& get(int nvars, int order);

  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  int size() const noexcept { return static_cast<int>(degree_of_.size()); }

  // First rank with total degree d; degree_offset(order + 1) == size().
  int degree_offset(int d) const { return offsets_[d]; }

  std::span<const std::uint8_t> exponents(int rank) const {
    return {exps_.data() + static_cast<std::size_t>(rank) * nvars_,
            static_cast<std::size_t>(nvars_)};
  }
  int total_degree(int rank) const { return degree_of_[rank]; }

  // Rank of the exponent vector e, or -1 when |e| > order.
  int rank(std::span<const int> e) const;

  // rank(e + e_var), or -1 when that leaves the table.
  int raised(int var, int rank) const {
    return raise_[static_cast<std::size_t>(var) * size() + rank];
  }

  struct MulTriple {
    std::uint32_t out, lhs, rhs;
  };
  std::span<const MulTriple> mul_triples() const { return mul_; }

  JetTable(const JetTable&) = delete;
  JetTable& operator=(const JetTable&) = delete;

private:
  JetTable(int nvars, int order);

  int nvars_, order_;
  std::vector<std::uint8_t> exps_;  // size() * nvars exponents, graded-lex
  std::vector<int> degree_of_;
  std::vector<int> offsets_;
  std::vector<int> raise_;
  std::vector<MulTriple> mul_;
  std::unordered_map<std::uint64_t, int> rank_of_;
};

class Jet {
public:
  Jet() = default;  // invalid until assigned

  static Jet constant(const JetTable& t, double v);
  static Jet variable(const JetTable& t, int var, double value);

  const JetTable& table() const { return *tab_; }
  bool valid() const noexcept { return tab_ != nullptr; }

  double value() const { return c_[0]; }
  double coeff(int rank) const { return c_[rank]; }
  const Eigen::VectorXd& coeffs() const { return c_; }

  // Value of a partial derivative; vars lists one variable index per
  // differentiation, e.g. {0, 0, 2} = d^3/dx0^2 dx2.  Order of listing is
  // immaterial.
  double partial(std::span<const int> vars) const;
  double partial(std::initializer_list<int> vars) const {
    return partial(std::span<const int>(vars.begin(), vars.size()));
  }

  // d/dx_var, exact to one order less; lives in table(nvars, order - 1).
  Jet derivative(int var) const;

  // Prefix copy into table(nvars, lower_order).
  Jet truncated(int lower_order) const;

  // Reinterpret over a table with more variables (same leading variables,
  // order at least as large); new variables simply do not occur.
  Jet embedded(const JetTable& target) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    c_ *= s;
    return *this;
  }
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

  friend Jet apply_taylor_series(const Jet& u, std::span<const double> a);

private:
  explicit Jet(const JetTable& t)
      : tab_(&t), c_(Eigen::VectorXd::Zero(t.size())) {}

  const JetTable* tab_ = nullptr;
  Eigen::VectorXd c_;
};

// sum_k a[k] * (u - u.value())^k via Horner; a must have order + 1 entries.
// This is the composition engine behind every elementary function below.
Jet apply_taylor_series(const Jet& u, std::span<const double> a);

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet tan(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);   // requires u.value() > 0
Jet sqrt(const Jet& u);  // requires u.value() > 0
Jet atan(const Jet& u);
Jet recip(const Jet& u);  // requires u.value() != 0
Jet pow(const Jet& u, int e);

}  // namespace kropina
