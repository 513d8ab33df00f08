#include "kropina/fields.hpp"

#include <cassert>
#include <cmath>

namespace kropina {

Eigen::MatrixXd jet_mat_values(const JetMat& m) {
  Eigen::MatrixXd r(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r(i, j) = m(i, j).value();
  return r;
}

Eigen::VectorXd jet_vec_values(const JetVec& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
  return r;
}

namespace {

JetMat jet_mat_mul(const JetMat& a, const JetMat& b) {
  assert(a.cols == b.rows);
  const JetTable& t = a.e[0].table();
  JetMat r(a.rows, b.cols);
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) {
      Jet acc = Jet::constant(t, 0.0);
      for (int k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

JetMat jet_mat_from_values(const JetTable& t, const Eigen::MatrixXd& m) {
  JetMat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = Jet::constant(t, m(i, j));
  return r;
}

}  // namespace

JetMat jet_mat_inverse(const JetMat& m) {
  assert(m.rows == m.cols && m.rows > 0);
  const JetTable& t = m.e[0].table();
  const int n = m.rows;

  Eigen::MatrixXd m0 = jet_mat_values(m);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m0);
  if (!lu.isInvertible())
    throw SingularMetricError("matrix of jets has singular value part");
  Eigen::MatrixXd a = lu.inverse();

  // m = m0 + N with N nilpotent-valued; m^-1 = (I + m0^-1 N)^-1 m0^-1,
  // and the Neumann series terminates at the table order.
  JetMat k(n, n);  // m0^-1 N
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet acc = Jet::constant(t, 0.0);
      for (int l = 0; l < n; ++l) {
        Jet nl = m(l, j);
        nl -= nl.value();
        acc += a(i, l) * nl;
      }
      k(i, j) = acc;
    }

  JetMat s = jet_mat_from_values(t, Eigen::MatrixXd::Identity(n, n));
  for (int step = 0; step < t.order(); ++step) {
    JetMat ks = jet_mat_mul(k, s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet v = -ks(i, j);
        if (i == j) v += 1.0;
        s(i, j) = v;
      }
  }
  return jet_mat_mul(s, jet_mat_from_values(t, a));
}

JetVec jet_mat_vec(const JetMat& m, const JetVec& v) {
  assert(m.cols == static_cast<int>(v.size()));
  const JetTable& t = m.e[0].table();
  JetVec r(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    Jet acc = Jet::constant(t, 0.0);
    for (int j = 0; j < m.cols; ++j) acc += m(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

Jet jet_dot(const JetVec& a, const JetVec& b) {
  assert(a.size() == b.size() && !a.empty());
  Jet acc = Jet::constant(a[0].table(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

namespace {

const JetTable& chart_table(int dim, int order) {
  return JetTable::get(dim, order);
}

class ConstScalar final : public ScalarField {
public:
  ConstScalar(int dim, double v) : dim_(dim), v_(v) {}
  int dim() const override { return dim_; }
  Jet eval_jet(const Eigen::VectorXd& x, int order) const override {
    (void)x;
    return Jet::constant(chart_table(dim_, order), v_);
  }

private:
  int dim_;
  double v_;
};

class ExprScalar final : public ScalarField {
public:
  ExprScalar(int dim, ExprPtr e) : dim_(dim), e_(std::move(e)) {
    assert(expr_dimension(*e_) <= dim_);
  }
  int dim() const override { return dim_; }
  Jet eval_jet(const Eigen::VectorXd& x, int order) const override {
    return kropina::eval_jet(*e_, chart_table(dim_, order), x);
  }

private:
  int dim_;
  ExprPtr e_;
};

template <class Base>
class ExprComponents final : public Base {
public:
  ExprComponents(int dim, std::vector<ExprPtr> comps)
      : dim_(dim), comps_(std::move(comps)) {
    assert(static_cast<int>(comps_.size()) == dim_);
  }
  int dim() const override { return dim_; }
  JetVec eval_jet(const Eigen::VectorXd& x, int order) const override {
    const JetTable& t = chart_table(dim_, order);
    JetVec r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = kropina::eval_jet(*comps_[i], t, x);
    return r;
  }

private:
  int dim_;
  std::vector<ExprPtr> comps_;
};

class ExprMetric final : public MetricField {
public:
  ExprMetric(int dim, std::vector<ExprPtr> upper) : dim_(dim) {
    assert(static_cast<int>(upper.size()) == dim * (dim + 1) / 2);
    entries_.resize(static_cast<std::size_t>(dim) * dim);
    std::size_t k = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        entries_[static_cast<std::size_t>(i) * dim + j] = upper[k];
        entries_[static_cast<std::size_t>(j) * dim + i] = upper[k];
        ++k;
      }
  }
  int dim() const override { return dim_; }
  JetMat eval_jet(const Eigen::VectorXd& x, int order) const override {
    const JetTable& t = chart_table(dim_, order);
    JetMat r(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) {
        Jet v = kropina::eval_jet(*entries_[static_cast<std::size_t>(i) * dim_ + j], t, x);
        r(i, j) = v;
        if (j != i) r(j, i) = v;
      }
    }
    return r;
  }

private:
  int dim_;
  std::vector<ExprPtr> entries_;
};

class ScaledMetric final : public MetricField {
public:
  ScaledMetric(MetricFieldPtr base, ScalarFieldPtr s, double sign, double factor)
      : base_(std::move(base)), s_(std::move(s)), sign_(sign), factor_(factor) {}
  int dim() const override { return base_->dim(); }
  JetMat eval_jet(const Eigen::VectorXd& x, int order) const override {
    JetMat m = base_->eval_jet(x, order);
    if (s_) {
      Jet scale = exp(sign_ * s_->eval_jet(x, order)) * factor_;
      for (Jet& v : m.e) v = v * scale;
    } else if (factor_ != 1.0) {
      for (Jet& v : m.e) v *= factor_;
    }
    return m;
  }

private:
  MetricFieldPtr base_;
  ScalarFieldPtr s_;
  double sign_, factor_;
};

class LoweredVector final : public CovectorField {
public:
  LoweredVector(MetricFieldPtr g, VectorFieldPtr v, ScalarFieldPtr s,
                double sign, double factor)
      : g_(std::move(g)), v_(std::move(v)), s_(std::move(s)), sign_(sign),
        factor_(factor) {}
  int dim() const override { return g_->dim(); }
  JetVec eval_jet(const Eigen::VectorXd& x, int order) const override {
    JetVec b = jet_mat_vec(g_->eval_jet(x, order), v_->eval_jet(x, order));
    if (s_) {
      Jet scale = exp(sign_ * s_->eval_jet(x, order)) * factor_;
      for (Jet& c : b) c = c * scale;
    } else if (factor_ != 1.0) {
      for (Jet& c : b) c *= factor_;
    }
    return b;
  }

private:
  MetricFieldPtr g_;
  VectorFieldPtr v_;
  ScalarFieldPtr s_;
  double sign_, factor_;
};

class RaisedCovector final : public VectorField {
public:
  RaisedCovector(MetricFieldPtr g, CovectorFieldPtr b, double factor)
      : g_(std::move(g)), b_(std::move(b)), factor_(factor) {}
  int dim() const override { return g_->dim(); }
  JetVec eval_jet(const Eigen::VectorXd& x, int order) const override {
    JetMat ginv = jet_mat_inverse(g_->eval_jet(x, order));
    JetVec v = jet_mat_vec(ginv, b_->eval_jet(x, order));
    if (factor_ != 1.0)
      for (Jet& c : v) c *= factor_;
    return v;
  }

private:
  MetricFieldPtr g_;
  CovectorFieldPtr b_;
  double factor_;
};

class UnitVector final : public VectorField {
public:
  UnitVector(MetricFieldPtr g, VectorFieldPtr base, VectorFieldPtr pert,
             double delta)
      : g_(std::move(g)), base_(std::move(base)), pert_(std::move(pert)),
        delta_(delta) {}
  int dim() const override { return g_->dim(); }
  JetVec eval_jet(const Eigen::VectorXd& x, int order) const override {
    JetVec u = base_->eval_jet(x, order);
    if (pert_ && delta_ != 0.0) {
      JetVec p = pert_->eval_jet(x, order);
      for (int i = 0; i < dim(); ++i) u[i] += delta_ * p[i];
    }
    Jet n2 = jet_dot(jet_mat_vec(g_->eval_jet(x, order), u), u);
    if (!(n2.value() > 0.0))
      throw DomainError("cannot normalize a vector of vanishing length");
    Jet inv_len = recip(sqrt(n2));
    for (Jet& c : u) c = c * inv_len;
    return u;
  }

private:
  MetricFieldPtr g_;
  VectorFieldPtr base_, pert_;
  double delta_;
};

class KropinaKappa final : public ScalarField {
public:
  KropinaKappa(MetricFieldPtr a, CovectorFieldPtr b)
      : a_(std::move(a)), b_(std::move(b)) {}
  int dim() const override { return a_->dim(); }
  Jet eval_jet(const Eigen::VectorXd& x, int order) const override {
    JetVec b = b_->eval_jet(x, order);
    Jet b2 = jet_dot(jet_mat_vec(jet_mat_inverse(a_->eval_jet(x, order)), b), b);
    if (!(b2.value() > 0.0))
      throw DomainError("one-form has non-positive squared length");
    return std::log(4.0) - log(b2);
  }

private:
  MetricFieldPtr a_;
  CovectorFieldPtr b_;
};

}  // namespace

ScalarFieldPtr make_const_scalar(int dim, double v) {
  return std::make_shared<ConstScalar>(dim, v);
}
ScalarFieldPtr make_expr_scalar(int dim, ExprPtr e) {
  return std::make_shared<ExprScalar>(dim, std::move(e));
}
VectorFieldPtr make_expr_vector(int dim, std::vector<ExprPtr> comps) {
  return std::make_shared<ExprComponents<VectorField>>(dim, std::move(comps));
}
CovectorFieldPtr make_expr_covector(int dim, std::vector<ExprPtr> comps) {
  return std::make_shared<ExprComponents<CovectorField>>(dim, std::move(comps));
}
MetricFieldPtr make_expr_metric(int dim, std::vector<ExprPtr> upper) {
  return std::make_shared<ExprMetric>(dim, std::move(upper));
}
MetricFieldPtr make_scaled_metric(MetricFieldPtr base, ScalarFieldPtr s,
                                  double sign, double factor) {
  return std::make_shared<ScaledMetric>(std::move(base), std::move(s), sign,
                                        factor);
}
CovectorFieldPtr make_lowered_vector(MetricFieldPtr g, VectorFieldPtr v,
                                     ScalarFieldPtr s, double sign,
                                     double factor) {
  return std::make_shared<LoweredVector>(std::move(g), std::move(v),
                                         std::move(s), sign, factor);
}
VectorFieldPtr make_raised_covector(MetricFieldPtr g, CovectorFieldPtr b,
                                    double factor) {
  return std::make_shared<RaisedCovector>(std::move(g), std::move(b), factor);
}
VectorFieldPtr make_unit_vector(MetricFieldPtr g, VectorFieldPtr base,
                                VectorFieldPtr pert, double delta) {
  return std::make_shared<UnitVector>(std::move(g), std::move(base),
                                      std::move(pert), delta);
}
ScalarFieldPtr make_kropina_kappa(MetricFieldPtr a, CovectorFieldPtr b) {
  return std::make_shared<KropinaKappa>(std::move(a), std::move(b));
}

}  // namespace kropina
