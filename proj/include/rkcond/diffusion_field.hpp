#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rkcond/mesh.hpp"

namespace rkcond {

/// Symmetric positive definite tensor field D(x).
class DiffusionField {
 public:
  using Evaluator = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  DiffusionField(int dim, std::string name, Evaluator evaluate,
                 std::optional<double> d_min = std::nullopt,
                 std::optional<double> d_max = std::nullopt);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  /// Evaluates D(x); enforces symmetry to 1e-14 and positive definiteness.
  Eigen::MatrixXd operator()(const Eigen::VectorXd& x) const;

  std::optional<double> analytic_d_min() const { return d_min_; }
  std::optional<double> analytic_d_max() const { return d_max_; }

 private:
  int dim_;
  std::string name_;
  Evaluator evaluate_;
  std::optional<double> d_min_, d_max_;
};

struct PiecewiseConstantConfig {
  Eigen::VectorXd left;   // diagonal of D for x < split
  Eigen::VectorXd right;  // diagonal of D for x >= split
  double split = 0.5;
};

/// name in {identity, rotated_anisotropic, piecewise_constant}.
DiffusionField builtin_field(const std::string& name, int dim);
DiffusionField piecewise_constant_field(int dim, PiecewiseConstantConfig config);

/// Per-element averages D_K with inverses and sqrt(det(D_K^{-1})).
struct ElementAverages {
  std::vector<Eigen::MatrixXd> average;
  std::vector<Eigen::MatrixXd> inverse;
  Eigen::VectorXd sqrt_det_inverse;
  Eigen::Index size() const { return sqrt_det_inverse.size(); }
};

/// Average of the field over one element by a symmetric simplex quadrature
/// (degree 2 by default; order <= 1 selects the centroid rule).
Eigen::MatrixXd element_average(const DiffusionField& field, const ElementGeometry& geometry,
                                int quadrature_order = 2);

ElementAverages element_averages(const DiffusionField& field, const SimplicialMesh& mesh,
                                 int quadrature_order = 2);

}  // namespace rkcond
