#include "rkcond/diffusion_field.hpp"

#include <cmath>

#include "rkcond/errors.hpp"

namespace rkcond {

DiffusionField::DiffusionField(int dim, std::string name, Evaluator evaluate,
                               std::optional<double> d_min, std::optional<double> d_max)
    : dim_(dim), name_(std::move(name)), evaluate_(std::move(evaluate)), d_min_(d_min), d_max_(d_max) {}

Eigen::MatrixXd DiffusionField::operator()(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd d = evaluate_(x);
  const double asym = (d - d.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14 * std::max(1.0, d.cwiseAbs().maxCoeff()))
    throw NumericalError("diffusion tensor is not symmetric at an evaluation point of field '" + name_ + "'");
  d = 0.5 * (d + d.transpose());
  if (Eigen::LLT<Eigen::MatrixXd>(d).info() != Eigen::Success)
    throw NumericalError("diffusion tensor is not positive definite at an evaluation point of field '" + name_ + "'");
  return d;
}

DiffusionField builtin_field(const std::string& name, int dim) {
  if (name == "identity") {
    return DiffusionField(
        dim, name, [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(dim, dim); }, 1.0, 1.0);
  }
  if (name == "rotated_anisotropic") {
    if (dim != 2) throw ConfigError("rotated_anisotropic field is two-dimensional");
    auto eval = [](const Eigen::VectorXd& x) {
      const double theta = M_PI * std::sin(x[0]) * std::cos(x[1]);
      const double c = std::cos(theta), s = std::sin(theta);
      Eigen::Matrix2d rot;
      rot << c, -s, s, c;
      return Eigen::MatrixXd(rot * Eigen::Vector2d(10.0, 0.1).asDiagonal() * rot.transpose());
    };
    return DiffusionField(2, name, eval, 0.1, 10.0);
  }
  if (name == "piecewise_constant") {
    PiecewiseConstantConfig config;
    config.left = Eigen::VectorXd::Ones(dim);
    config.right = 10.0 * Eigen::VectorXd::Ones(dim);
    return piecewise_constant_field(dim, std::move(config));
  }
  throw ConfigError("unknown diffusion field '" + name + "'");
}

DiffusionField piecewise_constant_field(int dim, PiecewiseConstantConfig config) {
  if (config.left.size() != dim || config.right.size() != dim)
    throw ConfigError("piecewise_constant diagonals must have one entry per dimension");
  if (config.left.minCoeff() <= 0.0 || config.right.minCoeff() <= 0.0)
    throw ConfigError("piecewise_constant diagonals must be positive");
  const double d_min = std::min(config.left.minCoeff(), config.right.minCoeff());
  const double d_max = std::max(config.left.maxCoeff(), config.right.maxCoeff());
  auto eval = [config](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd((x[0] < config.split ? config.left : config.right).asDiagonal());
  };
  return DiffusionField(dim, "piecewise_constant", std::move(eval), d_min, d_max);
}

namespace {

// Symmetric rules, exact for quadratic integrands (2-point Gauss in 1d).
// Rows are barycentric coordinates; all weights are equal.
Eigen::MatrixXd quadrature_barycentric(int dim, int order) {
  if (order <= 1) return Eigen::MatrixXd::Constant(1, dim + 1, 1.0 / (dim + 1));
  switch (dim) {
    case 1: {
      const double offset = 0.5 / std::sqrt(3.0);
      Eigen::MatrixXd b(2, 2);
      b << 0.5 + offset, 0.5 - offset, 0.5 - offset, 0.5 + offset;
      return b;
    }
    case 2: {
      Eigen::MatrixXd b(3, 3);
      b << 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, 2.0 / 3;
      return b;
    }
    default: {
      const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
      const double c = (5.0 - std::sqrt(5.0)) / 20.0;
      Eigen::MatrixXd b = Eigen::MatrixXd::Constant(4, 4, c);
      b.diagonal().setConstant(a);
      return b;
    }
  }
}

}  // namespace

Eigen::MatrixXd element_average(const DiffusionField& field, const ElementGeometry& geometry,
                                int quadrature_order) {
  if (quadrature_order < 1) throw ConfigError("quadrature order must be >= 1");
  const int dim = static_cast<int>(geometry.vertices.cols());
  const Eigen::MatrixXd bary = quadrature_barycentric(dim, quadrature_order);
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index q = 0; q < bary.rows(); ++q) {
    const Eigen::VectorXd point = (bary.row(q) * geometry.vertices).transpose();
    avg += field(point);
  }
  avg /= static_cast<double>(bary.rows());
  if (Eigen::LLT<Eigen::MatrixXd>(avg).info() != Eigen::Success)
    throw NumericalError("element average of field '" + field.name() + "' is not positive definite");
  return avg;
}

ElementAverages element_averages(const DiffusionField& field, const SimplicialMesh& mesh,
                                 int quadrature_order) {
  if (field.dim() != mesh.dim()) throw ConfigError("field dimension does not match mesh dimension");
  ElementAverages out;
  const Eigen::Index n = mesh.num_elements();
  out.average.resize(static_cast<std::size_t>(n));
  out.inverse.resize(static_cast<std::size_t>(n));
  out.sqrt_det_inverse.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::MatrixXd avg = element_average(field, mesh.element_geometry(k), quadrature_order);
    Eigen::LLT<Eigen::MatrixXd> llt(avg);
    // det(D_K^{-1}) from the Cholesky diagonal, inverse from the factor.
    const Eigen::VectorXd chol_diag = llt.matrixL().toDenseMatrix().diagonal();
    out.sqrt_det_inverse[k] = 1.0 / chol_diag.prod();
    out.inverse[static_cast<std::size_t>(k)] =
        llt.solve(Eigen::MatrixXd::Identity(mesh.dim(), mesh.dim()));
    out.average[static_cast<std::size_t>(k)] = std::move(avg);
  }
  return out;
}

}  // namespace rkcond
