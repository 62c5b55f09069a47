#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rkcond {

/// Affine data of one element: x = jacobian * x̂ + shift, where x̂ lives on the
/// unit-volume equilateral reference simplex, so det(jacobian) = volume.
struct ElementGeometry {
  Eigen::MatrixXd jacobian;  // d x d
  double volume = 0.0;
  Eigen::MatrixXd vertices;  // (d+1) x d, one corner per row
};

/// Vertices of the unit-volume equilateral reference simplex, one per row.
Eigen::MatrixXd reference_simplex(int dim);

class SimplicialMesh {
 public:
  enum class Orientation {
    normalize,        // reorder vertices of negative elements
    require_positive  // reject inverted elements
  };

  SimplicialMesh(int dim, Eigen::MatrixXd vertices, Eigen::MatrixXi elements,
                 std::vector<std::uint8_t> boundary,
                 Orientation policy = Orientation::normalize,
                 bool unit_cube_domain = false);

  int dim() const { return dim_; }
  Eigen::Index num_vertices() const { return vertices_.rows(); }
  Eigen::Index num_elements() const { return elements_.rows(); }
  Eigen::Index num_interior() const { return num_interior_; }

  const Eigen::MatrixXd& vertices() const { return vertices_; }
  const Eigen::MatrixXi& elements() const { return elements_; }
  bool is_boundary(Eigen::Index v) const { return boundary_[static_cast<std::size_t>(v)] != 0; }

  /// Permutation of vertex ids with the interior vertices first.
  const std::vector<Eigen::Index>& interior_order() const { return interior_order_; }
  /// Vertex id -> position in [0, num_interior()), or -1 for boundary vertices.
  Eigen::Index interior_index(Eigen::Index v) const { return interior_index_[static_cast<std::size_t>(v)]; }

  ElementGeometry element_geometry(Eigen::Index k) const;
  double element_volume(Eigen::Index k) const { return volumes_[static_cast<std::size_t>(k)]; }
  double total_volume() const { return total_volume_; }

  /// True for generated meshes whose domain is (0,1)^d.
  bool unit_cube_domain() const { return unit_cube_domain_; }

 private:
  int dim_;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXi elements_;
  std::vector<std::uint8_t> boundary_;
  std::vector<Eigen::Index> interior_order_;
  std::vector<Eigen::Index> interior_index_;
  std::vector<double> volumes_;
  Eigen::Index num_interior_ = 0;
  double total_volume_ = 0.0;
  bool unit_cube_domain_ = false;
};

struct VertexPatches {
  std::vector<std::vector<Eigen::Index>> elements;  // ω_j as element ids
  Eigen::VectorXd volume;                           // |ω_j|
};

VertexPatches vertex_patches(const SimplicialMesh& mesh);

/// Parses the line-oriented mesh format: header `d N_v N N_b`, N_v coordinate
/// lines, N element lines (1-based indices), then N_b boundary vertex ids.
/// `#` starts a comment.
SimplicialMesh load_mesh(std::string_view text);

/// Inverse of load_mesh; coordinates are written in shortest round-trip form.
std::string serialize_mesh(const SimplicialMesh& mesh);

SimplicialMesh generate_uniform(int dim, int n);
SimplicialMesh generate_graded(int dim, int n, double grading_exponent);
SimplicialMesh generate_perturbed(int dim, int n, double magnitude, std::uint64_t seed);

/// 2d only; map_id must name a registered coordinate map.
SimplicialMesh generate_mapped_anisotropic(int n, const std::string& map_id);
std::vector<std::string> anisotropic_map_ids();

}  // namespace rkcond
