#include "kropina/jet.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace kropina {

namespace {

// 4 bits per exponent: enough for order <= 15 and nvars <= 16.
std::uint64_t pack(std::span<const std::uint8_t> e) {
  std::uint64_t key = 0;
  for (std::size_t v = 0; v < e.size(); ++v)
    key |= static_cast<std::uint64_t>(e[v] & 0xF) << (4 * v);
  return key;
}

}  // namespace

JetTable::JetTable(int nvars, int order) : nvars_(nvars), order_(order) {
  assert(nvars >= 1 && nvars <= 16);
  assert(order >= 0 && order <= 15);

  // Graded-lex enumeration: degree 0, 1, ..., ties by first variable high.
  offsets_.assign(order + 2, 0);
  std::vector<std::uint8_t> e(nvars, 0);
  auto emit = [&] {
    exps_.insert(exps_.end(), e.begin(), e.end());
    int r = static_cast<int>(degree_of_.size());
    degree_of_.push_back(static_cast<int>(
        std::accumulate(e.begin(), e.end(), 0)));
    rank_of_.emplace(pack(e), r);
  };
  auto gen = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == nvars - 1) {
      e[pos] = static_cast<std::uint8_t>(remaining);
      emit();
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[pos] = static_cast<std::uint8_t>(k);
      self(self, pos + 1, remaining - k);
    }
    e[pos] = 0;
  };
  for (int d = 0; d <= order; ++d) {
    offsets_[d] = size();
    gen(gen, 0, d);
  }
  offsets_[order + 1] = size();

  // Up-shift table: rank(e + e_v) for every entry and variable.
  raise_.assign(static_cast<std::size_t>(nvars) * size(), -1);
  std::vector<std::uint8_t> up(nvars);
  for (int r = 0; r < size(); ++r) {
    if (degree_of_[r] == order) continue;
    auto er = exponents(r);
    for (int v = 0; v < nvars; ++v) {
      std::copy(er.begin(), er.end(), up.begin());
      ++up[v];
      raise_[static_cast<std::size_t>(v) * size() + r] = rank_of_.at(pack(up));
    }
  }

  // Product support: all (lhs, rhs) with deg(lhs) + deg(rhs) <= order.
  std::vector<std::uint8_t> sum(nvars);
  for (int i = 0; i < size(); ++i) {
    auto ei = exponents(i);
    int jmax = offsets_[order - degree_of_[i] + 1];
    for (int j = 0; j < jmax; ++j) {
      auto ej = exponents(j);
      for (int v = 0; v < nvars; ++v)
        sum[v] = static_cast<std::uint8_t>(ei[v] + ej[v]);
      mul_.push_back({static_cast<std::uint32_t>(rank_of_.at(pack(sum))),
                      static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(j)});
    }
  }
}

const JetTable& JetTable::get(int nvars, int order) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::unique_ptr<JetTable>> registry;
  std::lock_guard lock(m);
  auto& slot = registry[{nvars, order}];
  if (!slot) slot.reset(new JetTable(nvars, order));
  return *slot;
}

int JetTable::rank(std::span<const int> e) const {
  assert(static_cast<int>(e.size()) == nvars_);
  int total = 0;
  std::uint64_t key = 0;
  for (int v = 0; v < nvars_; ++v) {
    assert(e[v] >= 0);
    total += e[v];
    key |= static_cast<std::uint64_t>(e[v] & 0xF) << (4 * v);
  }
  if (total > order_) return -1;
  return rank_of_.at(key);
}

Jet Jet::constant(const JetTable& t, double v) {
  Jet r(t);
  r.c_[0] = v;
  return r;
}

Jet Jet::variable(const JetTable& t, int var, double value) {
  assert(var >= 0 && var < t.nvars());
  Jet r(t);
  r.c_[0] = value;
  if (t.order() >= 1) r.c_[t.raised(var, 0)] = 1.0;
  return r;
}

double Jet::partial(std::span<const int> vars) const {
  assert(tab_);
  std::vector<int> e(tab_->nvars(), 0);
  for (int v : vars) {
    assert(v >= 0 && v < tab_->nvars());
    ++e[v];
  }
  int r = tab_->rank(e);
  assert(r >= 0 && "partial order exceeds jet order");
  double factor = 1.0;
  for (int v = 0; v < tab_->nvars(); ++v)
    for (int k = 2; k <= e[v]; ++k) factor *= k;
  return c_[r] * factor;
}

Jet Jet::derivative(int var) const {
  assert(tab_ && tab_->order() >= 1);
  const JetTable& dst = JetTable::get(tab_->nvars(), tab_->order() - 1);
  Jet r(dst);
  for (int k = 0; k < dst.size(); ++k) {
    // Shared-prefix property: rank k means the same multi-index in both
    // tables, and raising it stays inside the source table.
    int up = tab_->raised(var, k);
    r.c_[k] = c_[up] * (tab_->exponents(k)[var] + 1);
  }
  return r;
}

Jet Jet::truncated(int lower_order) const {
  assert(tab_ && lower_order >= 0 && lower_order <= tab_->order());
  const JetTable& dst = JetTable::get(tab_->nvars(), lower_order);
  Jet r(dst);
  r.c_ = c_.head(dst.size());
  return r;
}

Jet Jet::embedded(const JetTable& target) const {
  assert(tab_);
  assert(target.nvars() >= tab_->nvars());
  assert(target.order() >= tab_->order());
  Jet r(target);
  std::vector<int> e(target.nvars(), 0);
  for (int k = 0; k < tab_->size(); ++k) {
    auto ek = tab_->exponents(k);
    for (int v = 0; v < tab_->nvars(); ++v) e[v] = ek[v];
    r.c_[target.rank(e)] = c_[k];
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  r.c_ = -r.c_;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  assert(tab_ == o.tab_ && "jets must live on the same table");
  c_ += o.c_;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  assert(tab_ == o.tab_ && "jets must live on the same table");
  c_ -= o.c_;
  return *this;
}

Jet& Jet::operator/=(double s) {
  if (s == 0.0) throw DomainError("division by zero");
  c_ /= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  assert(a.tab_ == b.tab_ && "jets must live on the same table");
  Jet r(*a.tab_);
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  double* pr = r.c_.data();
  for (const auto& t : a.tab_->mul_triples()) pr[t.out] += pa[t.lhs] * pb[t.rhs];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet operator/(double s, const Jet& a) { return recip(a) *= s; }

Jet apply_taylor_series(const Jet& u, std::span<const double> a) {
  assert(u.tab_);
  assert(static_cast<int>(a.size()) == u.tab_->order() + 1);
  Jet n = u;
  n.c_[0] = 0.0;  // nilpotent part: n^(order+1) vanishes identically
  Jet r = Jet::constant(*u.tab_, a.back());
  for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
    r = r * n;
    r.c_[0] += a[k];
  }
  return r;
}

namespace {

// Each series_* returns a[k] = f^(k)(u0) / k! for k = 0..order.

std::vector<double> series_exp(double u0, int order) {
  std::vector<double> a(order + 1);
  a[0] = std::exp(u0);
  for (int k = 1; k <= order; ++k) a[k] = a[k - 1] / k;
  return a;
}

std::vector<double> series_log(double u0, int order) {
  if (!(u0 > 0.0)) throw DomainError("log of non-positive value");
  std::vector<double> a(order + 1);
  a[0] = std::log(u0);
  if (order >= 1) a[1] = 1.0 / u0;
  for (int k = 2; k <= order; ++k) a[k] = -a[k - 1] * (k - 1) / (k * u0);
  return a;
}

std::vector<double> series_sqrt(double u0, int order) {
  if (!(u0 > 0.0)) throw DomainError("sqrt of non-positive value");
  std::vector<double> a(order + 1);
  double s = std::sqrt(u0);
  a[0] = s;
  double binom = 1.0;  // C(1/2, k), built up recursively
  double pw = 1.0;     // u0^k
  for (int k = 1; k <= order; ++k) {
    binom *= (0.5 - (k - 1)) / k;
    pw *= u0;
    a[k] = s * binom / pw;
  }
  return a;
}

std::vector<double> series_sin(double u0, int order) {
  std::vector<double> a(order + 1);
  const double cyc[4] = {std::sin(u0), std::cos(u0), -std::sin(u0),
                         -std::cos(u0)};
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    a[k] = cyc[k % 4] / fact;
  }
  return a;
}

std::vector<double> series_cos(double u0, int order) {
  std::vector<double> a(order + 1);
  const double cyc[4] = {std::cos(u0), -std::sin(u0), -std::cos(u0),
                         std::sin(u0)};
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    a[k] = cyc[k % 4] / fact;
  }
  return a;
}

std::vector<double> series_recip(double u0, int order) {
  if (u0 == 0.0) throw DomainError("division by zero");
  std::vector<double> a(order + 1);
  a[0] = 1.0 / u0;
  for (int k = 1; k <= order; ++k) a[k] = -a[k - 1] / u0;
  return a;
}

std::vector<double> series_tan(double u0, int order) {
  double t0 = std::tan(u0);
  // tan of a finite double is never inf; within ~1e-15 of a pole the
  // series coefficients are pure noise, so treat that as the pole.
  if (!std::isfinite(t0) || std::abs(t0) > 1e15)
    throw DomainError("tan at a pole");
  // t' = 1 + t^2 termwise: (k+1) t_{k+1} = [e^k](1 + T^2).
  std::vector<double> a(order + 1);
  a[0] = t0;
  for (int k = 0; k < order; ++k) {
    double conv = (k == 0) ? 1.0 : 0.0;
    for (int j = 0; j <= k; ++j) conv += a[j] * a[k - j];
    a[k + 1] = conv / (k + 1);
  }
  return a;
}

std::vector<double> series_atan(double u0, int order) {
  // atan' = 1 / q with q(e) = (1 + u0^2) + 2 u0 e + e^2; invert q as a
  // power series, then integrate termwise.
  std::vector<double> a(order + 1);
  a[0] = std::atan(u0);
  if (order == 0) return a;
  const double q0 = 1.0 + u0 * u0, q1 = 2.0 * u0, q2 = 1.0;
  std::vector<double> r(order);
  r[0] = 1.0 / q0;
  for (int k = 1; k < order; ++k) {
    double acc = q1 * r[k - 1];
    if (k >= 2) acc += q2 * r[k - 2];
    r[k] = -acc / q0;
  }
  for (int k = 0; k < order; ++k) a[k + 1] = r[k] / (k + 1);
  return a;
}

}  // namespace

Jet sin(const Jet& u) {
  return apply_taylor_series(u, series_sin(u.value(), u.table().order()));
}
Jet cos(const Jet& u) {
  return apply_taylor_series(u, series_cos(u.value(), u.table().order()));
}
Jet tan(const Jet& u) {
  return apply_taylor_series(u, series_tan(u.value(), u.table().order()));
}
Jet exp(const Jet& u) {
  return apply_taylor_series(u, series_exp(u.value(), u.table().order()));
}
Jet log(const Jet& u) {
  return apply_taylor_series(u, series_log(u.value(), u.table().order()));
}
Jet sqrt(const Jet& u) {
  return apply_taylor_series(u, series_sqrt(u.value(), u.table().order()));
}
Jet atan(const Jet& u) {
  return apply_taylor_series(u, series_atan(u.value(), u.table().order()));
}
Jet recip(const Jet& u) {
  return apply_taylor_series(u, series_recip(u.value(), u.table().order()));
}

Jet pow(const Jet& u, int e) {
  if (e < 0) return recip(pow(u, -e));
  Jet acc = Jet::constant(u.table(), 1.0);
  Jet base = u;
  int k = e;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return acc;
}

}  // namespace kropina
