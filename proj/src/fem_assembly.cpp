#include "rkcond/fem_assembly.hpp"

#include <sstream>
#include <vector>

#include "rkcond/errors.hpp"
#include "rkcond/num_format.hpp"

namespace rkcond {

namespace {

using Triplet = Eigen::Triplet<double>;

// Scatters a local (d+1)x(d+1) matrix into the interior-only triplet list.
void scatter(const SimplicialMesh& mesh, Eigen::Index k, const Eigen::MatrixXd& local,
             std::vector<Triplet>& out) {
  const int nloc = mesh.dim() + 1;
  for (int a = 0; a < nloc; ++a) {
    const Eigen::Index ia = mesh.interior_index(mesh.elements()(k, a));
    if (ia < 0) continue;
    for (int b = 0; b < nloc; ++b) {
      const Eigen::Index ib = mesh.interior_index(mesh.elements()(k, b));
      if (ib < 0) continue;
      out.emplace_back(static_cast<int>(ia), static_cast<int>(ib), local(a, b));
    }
  }
}

SparseSym from_triplets(Eigen::Index n, const std::vector<Triplet>& triplets) {
  SparseSym s;
  s.matrix.resize(n, n);
  s.matrix.setFromTriplets(triplets.begin(), triplets.end());
  s.matrix.makeCompressed();
  return s;
}

// Constant gradients of the barycentric basis, one per row.
Eigen::MatrixXd basis_gradients(const ElementGeometry& g) {
  const int d = static_cast<int>(g.jacobian.rows());
  Eigen::MatrixXd edges(d, d);
  for (int j = 0; j < d; ++j) edges.col(j) = (g.vertices.row(j + 1) - g.vertices.row(0)).transpose();
  Eigen::MatrixXd grads(d + 1, d);
  grads.bottomRows(d) = edges.inverse();
  grads.row(0) = -grads.bottomRows(d).colwise().sum();
  return grads;
}

}  // namespace

SparseSym assemble_mass(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  const double scale = 1.0 / ((d + 1.0) * (d + 2.0));
  Eigen::MatrixXd pattern = Eigen::MatrixXd::Ones(d + 1, d + 1) + Eigen::MatrixXd::Identity(d + 1, d + 1);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * (d + 1) * (d + 1));
  for (Eigen::Index k = 0; k < mesh.num_elements(); ++k) {
    const Eigen::MatrixXd local = mesh.element_volume(k) * scale * pattern;
    scatter(mesh, k, local, triplets);
  }
  return from_triplets(mesh.num_interior(), triplets);
}

SparseSym assemble_stiffness(const SimplicialMesh& mesh, const ElementAverages& averages) {
  if (averages.size() != mesh.num_elements())
    throw ConfigError("element average count does not match mesh");
  std::vector<Triplet> triplets;
  const int d = mesh.dim();
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * (d + 1) * (d + 1));
  for (Eigen::Index k = 0; k < mesh.num_elements(); ++k) {
    const ElementGeometry g = mesh.element_geometry(k);
    const Eigen::MatrixXd grads = basis_gradients(g);
    const Eigen::MatrixXd local =
        g.volume * grads * averages.average[static_cast<std::size_t>(k)] * grads.transpose();
    scatter(mesh, k, local, triplets);
  }
  return from_triplets(mesh.num_interior(), triplets);
}

SparseSym diagonal_part(const SparseSym& s) {
  SparseSym d;
  d.is_diagonal = true;
  d.matrix.resize(s.dim(), s.dim());
  const Eigen::VectorXd diag = s.matrix.diagonal();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(s.dim()));
  for (Eigen::Index i = 0; i < s.dim(); ++i) triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diag[i]);
  d.matrix.setFromTriplets(triplets.begin(), triplets.end());
  d.matrix.makeCompressed();
  return d;
}

SparseSym lumped_mass(const SparseSym& mass) {
  SparseSym d;
  d.is_diagonal = true;
  d.matrix.resize(mass.dim(), mass.dim());
  const Eigen::VectorXd row_sums = mass.matrix * Eigen::VectorXd::Ones(mass.dim());
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mass.dim()));
  for (Eigen::Index i = 0; i < mass.dim(); ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), row_sums[i]);
  d.matrix.setFromTriplets(triplets.begin(), triplets.end());
  d.matrix.makeCompressed();
  return d;
}

std::string dump_triplets(const SparseSym& s) {
  std::ostringstream out;
  out << s.dim() << ' ' << s.matrix.nonZeros() << '\n';
  for (int col = 0; col < s.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(s.matrix, col); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << shortest_repr(it.value()) << '\n';
  return out.str();
}

}  // namespace rkcond
