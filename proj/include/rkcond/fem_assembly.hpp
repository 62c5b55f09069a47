#pragma once

#include <Eigen/Sparse>

#include <string>

#include "rkcond/diffusion_field.hpp"
#include "rkcond/mesh.hpp"

namespace rkcond {

/// Symmetric sparse matrix on the interior degrees of freedom.
struct SparseSym {
  Eigen::SparseMatrix<double> matrix;
  bool is_diagonal = false;

  Eigen::Index dim() const { return matrix.rows(); }
  Eigen::VectorXd diagonal() const { return matrix.diagonal(); }
};

/// Mass matrix of linear elements with Dirichlet rows/columns eliminated.
SparseSym assemble_mass(const SimplicialMesh& mesh);

/// Stiffness matrix with D replaced by its element averages.
SparseSym assemble_stiffness(const SimplicialMesh& mesh, const ElementAverages& averages);

SparseSym diagonal_part(const SparseSym& s);

/// Row-sum lumping of the assembled mass matrix.
SparseSym lumped_mass(const SparseSym& mass);

/// Coordinate text format: `N nnz` header, then 1-based `i j value` lines
/// covering the full symmetric storage.
std::string dump_triplets(const SparseSym& s);

}  // namespace rkcond
