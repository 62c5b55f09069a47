#include "rkcond/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

#include "rkcond/errors.hpp"
#include "rkcond/num_format.hpp"

namespace rkcond {

namespace {

constexpr double kGeomTol = 1e-12;

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw ConfigError("mesh dimension must be 1, 2, or 3, got " + std::to_string(dim));
}

// Edge matrix of the reference simplex and its inverse, cached per dimension.
const Eigen::MatrixXd& reference_edge_inverse(int dim) {
  static const std::array<Eigen::MatrixXd, 3> cache = [] {
    std::array<Eigen::MatrixXd, 3> c;
    for (int d = 1; d <= 3; ++d) {
      Eigen::MatrixXd ref = reference_simplex(d);
      Eigen::MatrixXd edges(d, d);
      for (int j = 0; j < d; ++j) edges.col(j) = (ref.row(j + 1) - ref.row(0)).transpose();
      c[static_cast<std::size_t>(d - 1)] = edges.inverse();
    }
    return c;
  }();
  return cache[static_cast<std::size_t>(dim - 1)];
}

double factorial(int d) { return d == 3 ? 6.0 : (d == 2 ? 2.0 : 1.0); }

double signed_volume(const Eigen::MatrixXd& verts, const Eigen::MatrixXi& elements, Eigen::Index k) {
  const int d = static_cast<int>(verts.cols());
  Eigen::MatrixXd edges(d, d);
  for (int j = 0; j < d; ++j)
    edges.col(j) = (verts.row(elements(k, j + 1)) - verts.row(elements(k, 0))).transpose();
  return edges.determinant() / factorial(d);
}

}  // namespace

Eigen::MatrixXd reference_simplex(int dim) {
  check_dim(dim);
  switch (dim) {
    case 1: {
      Eigen::MatrixXd v(2, 1);
      v << 0.0, 1.0;
      return v;
    }
    case 2: {
      // Equilateral triangle with unit area: side a, area = (sqrt(3)/4) a^2 = 1.
      const double a = 2.0 / std::pow(3.0, 0.25);
      Eigen::MatrixXd v(3, 2);
      v << 0.0, 0.0, a, 0.0, a / 2.0, a * std::sqrt(3.0) / 2.0;
      return v;
    }
    default: {
      // Regular tetrahedron with unit volume: side a, volume = a^3/(6 sqrt(2)) = 1.
      const double a = std::sqrt(2.0) * std::cbrt(3.0);
      Eigen::MatrixXd v(4, 3);
      v << 0.0, 0.0, 0.0,
           a, 0.0, 0.0,
           a / 2.0, a * std::sqrt(3.0) / 2.0, 0.0,
           a / 2.0, a / (2.0 * std::sqrt(3.0)), a * std::sqrt(2.0 / 3.0);
      return v;
    }
  }
}

SimplicialMesh::SimplicialMesh(int dim, Eigen::MatrixXd vertices, Eigen::MatrixXi elements,
                               std::vector<std::uint8_t> boundary, Orientation policy,
                               bool unit_cube_domain)
    : dim_(dim),
      vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)),
      unit_cube_domain_(unit_cube_domain) {
  check_dim(dim_);
  if (vertices_.cols() != dim_) throw TopologyError("vertex coordinate count does not match dimension");
  if (elements_.cols() != dim_ + 1) throw TopologyError("element vertex count does not match dimension");
  if (boundary_.size() != static_cast<std::size_t>(vertices_.rows()))
    throw TopologyError("boundary flag count does not match vertex count");

  const Eigen::Index nv = vertices_.rows();
  for (Eigen::Index k = 0; k < elements_.rows(); ++k) {
    std::array<int, 4> ids{-1, -1, -1, -1};
    for (int a = 0; a <= dim_; ++a) {
      const int v = elements_(k, a);
      if (v < 0 || v >= nv)
        throw TopologyError("element " + std::to_string(k) + " references vertex " + std::to_string(v + 1) +
                            " of " + std::to_string(nv));
      ids[static_cast<std::size_t>(a)] = v;
    }
    std::sort(ids.begin(), ids.begin() + dim_ + 1);
    if (std::adjacent_find(ids.begin(), ids.begin() + dim_ + 1) != ids.begin() + dim_ + 1)
      throw TopologyError("element " + std::to_string(k) + " has repeated vertices");
  }

  const double extent = (vertices_.colwise().maxCoeff() - vertices_.colwise().minCoeff()).maxCoeff();
  const double vol_floor = kGeomTol * std::pow(std::max(extent, 1e-30), dim_);

  volumes_.resize(static_cast<std::size_t>(elements_.rows()));
  for (Eigen::Index k = 0; k < elements_.rows(); ++k) {
    double vol = signed_volume(vertices_, elements_, k);
    if (vol < 0.0) {
      if (policy == Orientation::require_positive)
        throw TopologyError("inverted element " + std::to_string(k));
      std::swap(elements_(k, dim_ - 1), elements_(k, dim_));
      vol = -vol;
    }
    if (vol <= vol_floor) throw TopologyError("element " + std::to_string(k) + " has zero volume");
    volumes_[static_cast<std::size_t>(k)] = vol;
    total_volume_ += vol;
  }

  interior_index_.assign(static_cast<std::size_t>(nv), -1);
  interior_order_.reserve(static_cast<std::size_t>(nv));
  for (Eigen::Index v = 0; v < nv; ++v)
    if (!boundary_[static_cast<std::size_t>(v)]) {
      interior_index_[static_cast<std::size_t>(v)] = num_interior_;
      interior_order_.push_back(v);
      ++num_interior_;
    }
  for (Eigen::Index v = 0; v < nv; ++v)
    if (boundary_[static_cast<std::size_t>(v)]) interior_order_.push_back(v);
}

ElementGeometry SimplicialMesh::element_geometry(Eigen::Index k) const {
  ElementGeometry g;
  g.vertices.resize(dim_ + 1, dim_);
  for (int a = 0; a <= dim_; ++a) g.vertices.row(a) = vertices_.row(elements_(k, a));
  Eigen::MatrixXd edges(dim_, dim_);
  for (int j = 0; j < dim_; ++j) edges.col(j) = (g.vertices.row(j + 1) - g.vertices.row(0)).transpose();
  g.jacobian = edges * reference_edge_inverse(dim_);
  g.volume = volumes_[static_cast<std::size_t>(k)];
  return g;
}

VertexPatches vertex_patches(const SimplicialMesh& mesh) {
  VertexPatches p;
  p.elements.resize(static_cast<std::size_t>(mesh.num_vertices()));
  p.volume = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (Eigen::Index k = 0; k < mesh.num_elements(); ++k)
    for (int a = 0; a <= mesh.dim(); ++a) {
      const Eigen::Index v = mesh.elements()(k, a);
      p.elements[static_cast<std::size_t>(v)].push_back(k);
      p.volume[v] += mesh.element_volume(k);
    }
  return p;
}

namespace {

// Strips `#` comments and splits into whitespace-separated tokens.
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_comment = false;
  for (char c : text) {
    if (c == '\n') in_comment = false;
    if (c == '#') in_comment = true;
    if (in_comment || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  long next_int(const char* what) {
    const std::string& t = next(what);
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(t, &pos);
    } catch (const std::exception&) {
      throw ParseError(std::string("expected integer for ") + what + ", got '" + t + "'");
    }
    if (pos != t.size()) throw ParseError(std::string("trailing characters in integer for ") + what + ": '" + t + "'");
    return v;
  }

  double next_double(const char* what) {
    const std::string& t = next(what);
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw ParseError(std::string("expected number for ") + what + ", got '" + t + "'");
    }
    if (pos != t.size()) throw ParseError(std::string("trailing characters in number for ") + what + ": '" + t + "'");
    return v;
  }

  bool exhausted() const { return pos_ == tokens_.size(); }

 private:
  const std::string& next(const char* what) {
    if (pos_ >= tokens_.size()) throw ParseError(std::string("unexpected end of input, expected ") + what);
    return tokens_[pos_++];
  }

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

SimplicialMesh load_mesh(std::string_view text) {
  TokenReader in(tokenize(text));
  const long dim = in.next_int("dimension");
  if (dim < 1 || dim > 3) throw ParseError("dimension must be 1, 2, or 3, got " + std::to_string(dim));
  const long nv = in.next_int("vertex count");
  const long ne = in.next_int("element count");
  const long nb = in.next_int("boundary vertex count");
  if (nv < dim + 1 || ne < 1 || nb < 0 || nb > nv) throw ParseError("inconsistent mesh header counts");

  Eigen::MatrixXd vertices(nv, dim);
  for (long i = 0; i < nv; ++i)
    for (long j = 0; j < dim; ++j) vertices(i, j) = in.next_double("vertex coordinate");

  Eigen::MatrixXi elements(ne, dim + 1);
  for (long k = 0; k < ne; ++k)
    for (long a = 0; a <= dim; ++a) {
      const long v = in.next_int("element vertex index");
      if (v < 1 || v > nv)
        throw TopologyError("element " + std::to_string(k) + " references vertex " + std::to_string(v) + " of " +
                            std::to_string(nv));
      elements(k, a) = static_cast<int>(v - 1);
    }

  std::vector<std::uint8_t> boundary(static_cast<std::size_t>(nv), 0);
  for (long i = 0; i < nb; ++i) {
    const long v = in.next_int("boundary vertex index");
    if (v < 1 || v > nv) throw TopologyError("boundary vertex index " + std::to_string(v) + " out of range");
    boundary[static_cast<std::size_t>(v - 1)] = 1;
  }
  if (!in.exhausted()) throw ParseError("trailing tokens after boundary vertex list");

  return SimplicialMesh(static_cast<int>(dim), std::move(vertices), std::move(elements), std::move(boundary));
}

std::string serialize_mesh(const SimplicialMesh& mesh) {
  std::ostringstream out;
  Eigen::Index nb = mesh.num_vertices() - mesh.num_interior();
  out << mesh.dim() << ' ' << mesh.num_vertices() << ' ' << mesh.num_elements() << ' ' << nb << '\n';
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
    for (int j = 0; j < mesh.dim(); ++j) {
      if (j) out << ' ';
      out << shortest_repr(mesh.vertices()(i, j));
    }
    out << '\n';
  }
  for (Eigen::Index k = 0; k < mesh.num_elements(); ++k) {
    for (int a = 0; a <= mesh.dim(); ++a) {
      if (a) out << ' ';
      out << mesh.elements()(k, a) + 1;
    }
    out << '\n';
  }
  int on_line = 0;
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.is_boundary(v)) continue;
    out << v + 1;
    if (++on_line == 10) {
      out << '\n';
      on_line = 0;
    } else {
      out << ' ';
    }
  }
  if (on_line) out << '\n';
  return out.str();
}

namespace {

// Tensor-grid nodes with per-axis coordinates xs; boundary = nodes with any
// coordinate at 0 or 1 (flags are assigned before any coordinate map).
struct GridBuild {
  Eigen::MatrixXd vertices;
  Eigen::MatrixXi elements;
  std::vector<std::uint8_t> boundary;
};

GridBuild build_grid(int dim, int n, const Eigen::VectorXd& xs) {
  GridBuild g;
  const int m = n + 1;
  if (dim == 1) {
    g.vertices.resize(m, 1);
    for (int i = 0; i < m; ++i) g.vertices(i, 0) = xs[i];
    g.elements.resize(n, 2);
    for (int k = 0; k < n; ++k) g.elements.row(k) << k, k + 1;
    g.boundary.assign(static_cast<std::size_t>(m), 0);
    g.boundary.front() = g.boundary.back() = 1;
  } else if (dim == 2) {
    g.vertices.resize(static_cast<Eigen::Index>(m) * m, 2);
    auto id = [m](int i, int j) { return i * m + j; };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g.vertices.row(id(i, j)) << xs[i], xs[j];
    g.elements.resize(2L * n * n, 3);
    Eigen::Index k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
        g.elements.row(k++) << v00, v10, v11;
        g.elements.row(k++) << v00, v11, v01;
      }
    g.boundary.assign(static_cast<std::size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i == 0 || i == n || j == 0 || j == n) g.boundary[static_cast<std::size_t>(id(i, j))] = 1;
  } else {
    g.vertices.resize(static_cast<Eigen::Index>(m) * m * m, 3);
    auto id = [m](int i, int j, int k) { return (i * m + j) * m + k; };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) g.vertices.row(id(i, j, k)) << xs[i], xs[j], xs[k];
    // Kuhn split: one tetrahedron per vertex-increasing path through the cube.
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    g.elements.resize(6L * n * n * n, 4);
    Eigen::Index t = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (const auto& p : perms) {
            int c[3] = {i, j, k};
            g.elements(t, 0) = id(c[0], c[1], c[2]);
            for (int step = 0; step < 3; ++step) {
              ++c[p[step]];
              g.elements(t, step + 1) = id(c[0], c[1], c[2]);
            }
            ++t;
          }
    g.boundary.assign(static_cast<std::size_t>(m) * m * m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          if (i == 0 || i == n || j == 0 || j == n || k == 0 || k == n)
            g.boundary[static_cast<std::size_t>(id(i, j, k))] = 1;
  }
  return g;
}

Eigen::VectorXd uniform_nodes(int n) {
  Eigen::VectorXd xs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = static_cast<double>(i) / n;
  return xs;
}

}  // namespace

SimplicialMesh generate_uniform(int dim, int n) {
  check_dim(dim);
  if (n < 1) throw ConfigError("subdivision count must be >= 1");
  GridBuild g = build_grid(dim, n, uniform_nodes(n));
  return SimplicialMesh(dim, std::move(g.vertices), std::move(g.elements), std::move(g.boundary),
                        SimplicialMesh::Orientation::normalize, /*unit_cube_domain=*/true);
}

SimplicialMesh generate_graded(int dim, int n, double grading_exponent) {
  check_dim(dim);
  if (n < 1) throw ConfigError("subdivision count must be >= 1");
  if (grading_exponent < 1.0) throw ConfigError("grading exponent must be >= 1");
  Eigen::VectorXd xs = uniform_nodes(n);
  for (int i = 0; i <= n; ++i) xs[i] = std::pow(xs[i], grading_exponent);
  GridBuild g = build_grid(dim, n, xs);
  return SimplicialMesh(dim, std::move(g.vertices), std::move(g.elements), std::move(g.boundary),
                        SimplicialMesh::Orientation::normalize, /*unit_cube_domain=*/true);
}

SimplicialMesh generate_perturbed(int dim, int n, double magnitude, std::uint64_t seed) {
  check_dim(dim);
  if (n < 1) throw ConfigError("subdivision count must be >= 1");
  if (magnitude < 0.0 || magnitude > 0.49)
    throw ConfigError("perturbation magnitude must lie in [0, 0.49]");
  GridBuild g = build_grid(dim, n, uniform_nodes(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const double h = 1.0 / n;
  for (Eigen::Index v = 0; v < g.vertices.rows(); ++v) {
    if (g.boundary[static_cast<std::size_t>(v)]) continue;
    for (int c = 0; c < dim; ++c) g.vertices(v, c) += magnitude * h * jitter(rng);
  }
  return SimplicialMesh(dim, std::move(g.vertices), std::move(g.elements), std::move(g.boundary),
                        SimplicialMesh::Orientation::require_positive, /*unit_cube_domain=*/true);
}

namespace {

using CoordinateMap = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

const std::map<std::string, CoordinateMap>& map_registry() {
  static const std::map<std::string, CoordinateMap> registry = [] {
    std::map<std::string, CoordinateMap> r;
    r["identity"] = [](const Eigen::Vector2d& p) { return p; };
    r["shear"] = [](const Eigen::Vector2d& p) { return Eigen::Vector2d(p.x() + p.y(), p.y()); };
    // Thin exponentially graded layer: every element ends up flat (aspect > 5).
    r["boundary_layer"] = [](const Eigen::Vector2d& p) {
      const double scale = 0.1;
      return Eigen::Vector2d(p.x(), scale * std::expm1(p.y()) / std::expm1(1.0));
    };
    // Non-monotone vertical map; folds the grid for any practical n.
    r["fold_demo"] = [](const Eigen::Vector2d& p) {
      return Eigen::Vector2d(p.x(), p.y() - 0.25 * std::sin(2.0 * M_PI * p.y()));
    };
    return r;
  }();
  return registry;
}

}  // namespace

std::vector<std::string> anisotropic_map_ids() {
  std::vector<std::string> ids;
  for (const auto& [name, fn] : map_registry()) ids.push_back(name);
  return ids;
}

SimplicialMesh generate_mapped_anisotropic(int n, const std::string& map_id) {
  if (n < 1) throw ConfigError("subdivision count must be >= 1");
  auto it = map_registry().find(map_id);
  if (it == map_registry().end()) throw ConfigError("unknown anisotropic map '" + map_id + "'");
  GridBuild g = build_grid(2, n, uniform_nodes(n));
  for (Eigen::Index v = 0; v < g.vertices.rows(); ++v)
    g.vertices.row(v) = it->second(g.vertices.row(v).transpose()).transpose();
  return SimplicialMesh(2, std::move(g.vertices), std::move(g.elements), std::move(g.boundary),
                        SimplicialMesh::Orientation::require_positive,
                        /*unit_cube_domain=*/map_id == "identity");
}

}  // namespace rkcond
