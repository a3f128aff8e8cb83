#include "thinfilm/lattice.hpp"

#include <Eigen/SVD>

#include <string>

namespace thinfilm {

void FilmConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("lattice spacing must be positive, got " + std::to_string(epsilon));
  }
  if (nu < 2) {
    throw ConfigError("film needs at least two atomic layers, got nu = " + std::to_string(nu));
  }
  if (n1 < 1 || n2 < 1) {
    throw ConfigError("in-plane cell counts must be at least 1");
  }
}

namespace {

CellMatrix make_z() {
  CellMatrix z;
  for (int l = 0; l < 8; ++l) {
    for (int r = 0; r < 3; ++r) {
      z(r, l) = kCornerOffsets[l][r] - 0.5;
    }
  }
  return z;
}

CellMatrix make_z_minus() {
  CellMatrix z = make_z();
  z.leftCols<4>() *= -1.0;
  return z;
}

CellMatrix make_m() {
  CellMatrix m = CellMatrix::Zero();
  for (int l = 0; l < 8; ++l) {
    m(2, l) = (l % 2 == 0) ? 0.5 : -0.5;
  }
  return m;
}

CellMatrix make_a() {
  CellMatrix a;
  for (int l = 0; l < 8; ++l) {
    for (int r = 0; r < 3; ++r) {
      a(r, l) = kCornerOffsets[l][r];
    }
  }
  return a;
}

}  // namespace

const CellMatrix& reference_cell() {
  static const CellMatrix z = make_z();
  return z;
}

const CellMatrix& reference_cell_minus() {
  static const CellMatrix z = make_z_minus();
  return z;
}

const CellMatrix& bilinear_mode() {
  static const CellMatrix m = make_m();
  return m;
}

const CellMatrix& corner_matrix() {
  static const CellMatrix a = make_a();
  return a;
}

FaceMatrix bottom_face(const CellMatrix& g) { return g.leftCols<4>(); }
FaceMatrix top_face(const CellMatrix& g) { return g.rightCols<4>(); }

LatticeIndex::LatticeIndex(const FilmConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

NodeIndex LatticeIndex::node(std::size_t id) const {
  const std::size_t nx = static_cast<std::size_t>(cfg_.n1) + 1;
  const std::size_t ny = static_cast<std::size_t>(cfg_.n2) + 1;
  NodeIndex n;
  n.i = static_cast<int>(id % nx);
  n.j = static_cast<int>((id / nx) % ny);
  n.k = static_cast<int>(id / (nx * ny));
  return n;
}

CellIndex LatticeIndex::cell(std::size_t id) const {
  const std::size_t nx = static_cast<std::size_t>(cfg_.n1);
  const std::size_t ny = static_cast<std::size_t>(cfg_.n2);
  CellIndex c;
  c.i = static_cast<int>(id % nx);
  c.j = static_cast<int>((id / nx) % ny);
  c.k = static_cast<int>(id / (nx * ny));
  return c;
}

Vec3 LatticeIndex::node_position(const NodeIndex& n) const {
  return {n.i * cfg_.epsilon, n.j * cfg_.epsilon, n.k * cfg_.epsilon};
}

Vec3 LatticeIndex::cell_midpoint(const CellIndex& c) const {
  return {(c.i + 0.5) * cfg_.epsilon, (c.j + 0.5) * cfg_.epsilon, (c.k + 0.5) * cfg_.epsilon};
}

Deformation Deformation::identity(const LatticeIndex& lat) {
  Deformation w(lat);
  for (std::size_t id = 0; id < lat.node_count(); ++id) {
    w[id] = lat.node_position(lat.node(id));
  }
  return w;
}

Deformation Deformation::from_function(const LatticeIndex& lat, const std::function<Vec3(const Vec3&)>& f) {
  Deformation w(lat);
  for (std::size_t id = 0; id < lat.node_count(); ++id) {
    w[id] = f(lat.node_position(lat.node(id)));
  }
  return w;
}

CellMatrix discrete_gradient_from_corners(const CellMatrix& corner_values, double epsilon) {
  const Vec3 mean = corner_values.rowwise().mean();
  CellMatrix g = corner_values.colwise() - mean;
  return g / epsilon;
}

CellMatrix discrete_gradient(const Deformation& w, const LatticeIndex& lat, const CellIndex& cell) {
  CellMatrix corners;
  for (int l = 0; l < 8; ++l) {
    corners.col(l) = w[lat.node_id(lat.corner(cell, l))];
  }
  return discrete_gradient_from_corners(corners, lat.config().epsilon);
}

Mat3 affine_part(const CellMatrix& g) { return 0.5 * g * reference_cell().transpose(); }

Mat3 nearest_rotation(const Mat3& f) {
  Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

double dist_SO3(const Mat3& f) { return (f - nearest_rotation(f)).norm(); }

Mat3 nearest_rotation(const CellMatrix& g) {
  // argmax_R tr(R^T G Z^T) is the polar factor of G Z^T.
  return nearest_rotation(Mat3(g * reference_cell().transpose()));
}

double dist_SO3Z(const CellMatrix& g) { return (g - nearest_rotation(g) * reference_cell()).norm(); }

namespace {

Vec3 rescaled_point(const LatticeIndex& lat, const NodeIndex& n) {
  Vec3 xi = lat.node_position(n);
  xi(2) /= lat.config().h();
  return xi;
}

}  // namespace

CellMatrix rescaled_gradient(const std::function<Vec3(const Vec3&)>& y, const CellIndex& cell, const LatticeIndex& lat) {
  CellMatrix corners;
  for (int l = 0; l < 8; ++l) {
    corners.col(l) = y(rescaled_point(lat, lat.corner(cell, l)));
  }
  return discrete_gradient_from_corners(corners, lat.config().epsilon);
}

Deformation descale(const std::function<Vec3(const Vec3&)>& y, const LatticeIndex& lat) {
  Deformation w(lat);
  for (std::size_t id = 0; id < lat.node_count(); ++id) {
    w[id] = y(rescaled_point(lat, lat.node(id)));
  }
  return w;
}

}  // namespace thinfilm
