#pragma once

// Chart-local smooth fields, evaluated on demand as truncated Taylor jets
// over the chart variables x1..xn.  Derived providers compose base fields
// through jet arithmetic, so a rescaled metric or a renormalized wind is as
// differentiable as its ingredients.

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "kropina/expr.hpp"
#include "kropina/jet.hpp"

namespace kropina {

using JetVec = std::vector<Jet>;

struct JetMat {
  int rows = 0, cols = 0;
  std::vector<Jet> e;

  JetMat() = default;
  JetMat(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c) {}
  Jet& operator()(int i, int j) { return e[static_cast<std::size_t>(i) * cols + j]; }
  const Jet& operator()(int i, int j) const {
    return e[static_cast<std::size_t>(i) * cols + j];
  }
};

Eigen::MatrixXd jet_mat_values(const JetMat& m);
Eigen::VectorXd jet_vec_values(const JetVec& v);

// Inverse of a matrix of jets whose value part is invertible, exact to the
// table order (nilpotent Neumann series around the value inverse).
JetMat jet_mat_inverse(const JetMat& m);

JetVec jet_mat_vec(const JetMat& m, const JetVec& v);
Jet jet_dot(const JetVec& a, const JetVec& b);

class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual Jet eval_jet(const Eigen::VectorXd& x, int order) const = 0;
  double value(const Eigen::VectorXd& x) const { return eval_jet(x, 0).value(); }
};

class VectorField {  // contravariant components v^i
public:
  virtual ~VectorField() = default;
  virtual int dim() const = 0;
  virtual JetVec eval_jet(const Eigen::VectorXd& x, int order) const = 0;
  Eigen::VectorXd values(const Eigen::VectorXd& x) const {
    return jet_vec_values(eval_jet(x, 0));
  }
};

class CovectorField {  // covariant components b_i
public:
  virtual ~CovectorField() = default;
  virtual int dim() const = 0;
  virtual JetVec eval_jet(const Eigen::VectorXd& x, int order) const = 0;
  Eigen::VectorXd values(const Eigen::VectorXd& x) const {
    return jet_vec_values(eval_jet(x, 0));
  }
};

class MetricField {  // symmetric covariant 2-tensor g_ij
public:
  virtual ~MetricField() = default;
  virtual int dim() const = 0;
  virtual JetMat eval_jet(const Eigen::VectorXd& x, int order) const = 0;
  Eigen::MatrixXd values(const Eigen::VectorXd& x) const {
    return jet_mat_values(eval_jet(x, 0));
  }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;
using VectorFieldPtr = std::shared_ptr<const VectorField>;
using CovectorFieldPtr = std::shared_ptr<const CovectorField>;
using MetricFieldPtr = std::shared_ptr<const MetricField>;

// --- expression-backed fields ---

ScalarFieldPtr make_const_scalar(int dim, double v);
ScalarFieldPtr make_expr_scalar(int dim, ExprPtr e);
VectorFieldPtr make_expr_vector(int dim, std::vector<ExprPtr> comps);
CovectorFieldPtr make_expr_covector(int dim, std::vector<ExprPtr> comps);
// entries in row-major upper triangle order: g11, g12, ..., g1n, g22, ...
MetricFieldPtr make_expr_metric(int dim, std::vector<ExprPtr> upper);

// --- derived fields ---

// g_ij(x) = factor * e^{sign * s(x)} * base_ij(x); pass s == nullptr for a
// plain constant rescale.
MetricFieldPtr make_scaled_metric(MetricFieldPtr base, ScalarFieldPtr s,
                                  double sign, double factor = 1.0);

// b_i(x) = factor * e^{sign * s(x)} * g_ij(x) v^j(x)
CovectorFieldPtr make_lowered_vector(MetricFieldPtr g, VectorFieldPtr v,
                                     ScalarFieldPtr s, double sign,
                                     double factor = 1.0);

// v^i(x) = factor * g^{ij}(x) b_j(x)
VectorFieldPtr make_raised_covector(MetricFieldPtr g, CovectorFieldPtr b,
                                    double factor = 1.0);

// (base + delta * pert) normalized to unit length in the metric g.
VectorFieldPtr make_unit_vector(MetricFieldPtr g, VectorFieldPtr base,
                                VectorFieldPtr pert, double delta);

// s(x) = log(4) - log(g^{ij} b_i b_j); the conformal factor a Kropina metric
// determines from its own (a, b) data.
ScalarFieldPtr make_kropina_kappa(MetricFieldPtr a, CovectorFieldPtr b);

// Axis-aligned chart box; everything here is local to one chart.
struct Box {
  Eigen::VectorXd lo, hi;
  bool contains(const Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

}  // namespace kropina
