#pragma once

#include "thinfilm/types.hpp"

#include <array>
#include <cstddef>
#include <functional>

namespace thinfilm {

/// Film geometry: nu atomic layers with spacing epsilon over the commensurate
/// rectangle S = (0, n1*eps) x (0, n2*eps). Thickness h = (nu - 1) * eps.
struct FilmConfig {
  double epsilon = 1.0;
  int nu = 2;
  int n1 = 1;
  int n2 = 1;

  double h() const { return (nu - 1) * epsilon; }
  double length1() const { return n1 * epsilon; }
  double length2() const { return n2 * epsilon; }
  void validate() const;
};

struct NodeIndex {
  int i = 0, j = 0, k = 0;
};

struct CellIndex {
  int i = 0, j = 0, k = 0;
};

/// Integer corner offsets a^l = z^l + (1/2, 1/2, 1/2) in the canonical order.
inline constexpr std::array<std::array<int, 3>, 8> kCornerOffsets{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}};

// Reference matrices of the unit cell. All are exact in binary floating point.
const CellMatrix& reference_cell();      // Z = (z^1, ..., z^8), Z Z^T = 2 Id
const CellMatrix& reference_cell_minus(); // Z_- = (-z^1..-z^4, z^5..z^8)
const CellMatrix& bilinear_mode();       // M = 1/2 e3 (x) (+1,-1,+1,-1,+1,-1,+1,-1)
const CellMatrix& corner_matrix();       // A = Z + 1/2 (1,1,1)^T (x) (1,...,1)
FaceMatrix bottom_face(const CellMatrix& g);  // columns 1..4
FaceMatrix top_face(const CellMatrix& g);     // columns 5..8

/// Node and cell enumeration for a film. Nodes (i, j, k), 0 <= i <= n1,
/// 0 <= j <= n2, 0 <= k < nu; cells (i, j, k), 0 <= i < n1, 0 <= j < n2,
/// 0 <= k < nu - 1. Every cell has all eight corners in the node set.
class LatticeIndex {
 public:
  explicit LatticeIndex(const FilmConfig& cfg);

  const FilmConfig& config() const { return cfg_; }
  std::size_t node_count() const { return static_cast<std::size_t>(cfg_.n1 + 1) * (cfg_.n2 + 1) * cfg_.nu; }
  std::size_t cell_count() const { return static_cast<std::size_t>(cfg_.n1) * cfg_.n2 * (cfg_.nu - 1); }
  std::size_t column_count() const { return static_cast<std::size_t>(cfg_.n1 + 1) * (cfg_.n2 + 1); }

  std::size_t node_id(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cfg_.n1 + 1) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(cfg_.n2 + 1) * k);
  }
  std::size_t node_id(const NodeIndex& n) const { return node_id(n.i, n.j, n.k); }
  NodeIndex node(std::size_t id) const;
  std::size_t column_id(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(cfg_.n1 + 1) * j; }

  std::size_t cell_id(const CellIndex& c) const {
    return static_cast<std::size_t>(c.i) + static_cast<std::size_t>(cfg_.n1) * (static_cast<std::size_t>(c.j) + static_cast<std::size_t>(cfg_.n2) * c.k);
  }
  CellIndex cell(std::size_t id) const;

  Vec3 node_position(const NodeIndex& n) const;
  Vec3 cell_midpoint(const CellIndex& c) const;
  NodeIndex corner(const CellIndex& c, int l) const {
    const auto& a = kCornerOffsets[l];
    return {c.i + a[0], c.j + a[1], c.k + a[2]};
  }

  bool is_bottom_layer(const CellIndex& c) const { return c.k == 0; }
  bool is_top_layer(const CellIndex& c) const { return c.k == cfg_.nu - 2; }
  bool is_interior_layer(const CellIndex& c) const { return !is_bottom_layer(c) && !is_top_layer(c); }
  // Columns on the lateral boundary (i in {0, n1} or j in {0, n2}).
  bool is_boundary_column(int i, int j) const { return i == 0 || j == 0 || i == cfg_.n1 || j == cfg_.n2; }

 private:
  FilmConfig cfg_;
};

inline LatticeIndex build_lattice(const FilmConfig& cfg) { return LatticeIndex(cfg); }

/// Deformed node positions in node order.
class Deformation {
 public:
  Deformation() = default;
  explicit Deformation(const LatticeIndex& lat) : cfg_(lat.config()), positions_(3, static_cast<Eigen::Index>(lat.node_count())) {
    positions_.setZero();
  }

  static Deformation identity(const LatticeIndex& lat);
  static Deformation from_function(const LatticeIndex& lat, const std::function<Vec3(const Vec3&)>& w);

  const FilmConfig& config() const { return cfg_; }
  std::size_t size() const { return static_cast<std::size_t>(positions_.cols()); }
  auto operator[](std::size_t id) { return positions_.col(static_cast<Eigen::Index>(id)); }
  auto operator[](std::size_t id) const { return positions_.col(static_cast<Eigen::Index>(id)); }
  Eigen::Matrix3Xd& positions() { return positions_; }
  const Eigen::Matrix3Xd& positions() const { return positions_; }
  bool all_finite() const { return positions_.allFinite(); }

 private:
  FilmConfig cfg_;
  Eigen::Matrix3Xd positions_;
};

/// (1/eps)(w(x + eps z^l) - <w>)_l; the columns sum to zero.
CellMatrix discrete_gradient(const Deformation& w, const LatticeIndex& lat, const CellIndex& cell);

/// Mean-free, 1/eps scaled version of arbitrary corner values.
CellMatrix discrete_gradient_from_corners(const CellMatrix& corner_values, double epsilon);

/// G Z^T / 2. Recovers F exactly from G = F Z.
Mat3 affine_part(const CellMatrix& g);

/// Rotation R minimizing |G - R Z| (orthogonal Procrustes with determinant correction).
Mat3 nearest_rotation(const CellMatrix& g);
double dist_SO3Z(const CellMatrix& g);

/// Nearest rotation and distance of a 3x3 matrix to SO(3).
Mat3 nearest_rotation(const Mat3& f);
double dist_SO3(const Mat3& f);

/// Discrete gradient of a deformation y given on the rescaled film
/// (x3 in [0, 1]); evaluated directly from the rescaled stencil.
CellMatrix rescaled_gradient(const std::function<Vec3(const Vec3&)>& y, const CellIndex& cell, const LatticeIndex& lat);

/// w(xi) = y(H^{-1} xi) sampled on the nodes, H = diag(1, 1, h).
Deformation descale(const std::function<Vec3(const Vec3&)>& y, const LatticeIndex& lat);

}  // namespace thinfilm
