#include "thinfilm/interpolation.hpp"

#include "thinfilm/parallel.hpp"
#include "thinfilm/recovery.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace thinfilm {

double dist2_SO3(const Mat3& f) {
  // Singular values through the eigenvalues of F^T F - Id.
  const Mat3 c = f.transpose() * f - Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat3> eig;
  eig.computeDirect(c, Eigen::EigenvaluesOnly);
  Vec3 dev;
  for (int i = 0; i < 3; ++i) {
    const double mu = std::max(eig.eigenvalues()(i), -1.0);
    dev(i) = mu / (1.0 + std::sqrt(1.0 + mu));  // sigma_i - 1
  }
  if (f.determinant() < 0.0) {
    // Eigenvalues ascend, so index 0 is the smallest singular value.
    dev(0) += 2.0;
  }
  return dev.squaredNorm();
}

const std::array<std::array<int, 4>, 6>& cell_faces() {
  static const std::array<std::array<int, 4>, 6> faces{{
      {0, 1, 2, 3}, {4, 5, 6, 7}, {0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4}, {3, 2, 6, 7}}};
  return faces;
}

const std::array<CellSimplex, 24>& cell_simplices() {
  static const std::array<CellSimplex, 24> simplices = [] {
    std::array<CellSimplex, 24> out{};
    int s = 0;
    for (int f = 0; f < 6; ++f) {
      const auto& c = cell_faces()[f];
      for (int e = 0; e < 4; ++e) {
        out[s++] = {f, c[e], c[(e + 1) % 4]};
      }
    }
    return out;
  }();
  return simplices;
}

namespace {

Vec3 face_mean(const CellMatrix& corners, int face) {
  Vec3 m = Vec3::Zero();
  for (int l : cell_faces()[face]) m += corners.col(l);
  return 0.25 * m;
}

Mat3 edge_matrix(const CellMatrix& corners, const Vec3& center, const CellSimplex& s) {
  Mat3 e;
  e.col(0) = face_mean(corners, s.face) - center;
  e.col(1) = corners.col(s.edge_from) - center;
  e.col(2) = corners.col(s.edge_to) - center;
  return e;
}

const std::array<Mat3, 24>& reference_inverses() {
  static const std::array<Mat3, 24> inv = [] {
    std::array<Mat3, 24> out;
    const CellMatrix& a = corner_matrix();
    const Vec3 center = a.rowwise().mean();
    for (int s = 0; s < 24; ++s) {
      out[s] = edge_matrix(a, center, cell_simplices()[s]).inverse();
    }
    return out;
  }();
  return inv;
}

}  // namespace

Vec3 interpolant_center(const CellMatrix& corners) { return corners.rowwise().mean(); }

Vec3 interpolant_face_center(const CellMatrix& corners, int face) { return face_mean(corners, face); }

std::array<Mat3, 24> simplex_gradients(const CellMatrix& g) {
  std::array<Mat3, 24> out;
  const Vec3 center = g.rowwise().mean();
  const auto& inv = reference_inverses();
  for (int s = 0; s < 24; ++s) {
    out[s] = edge_matrix(g, center, cell_simplices()[s]) * inv[s];
  }
  return out;
}

CellSandwich cell_sandwich(const CellMatrix& g) {
  CellSandwich c;
  const double d = dist_SO3Z(g);
  c.cell_dist2 = d * d;
  double s = 0.0;
  for (const Mat3& f : simplex_gradients(g)) s += dist2_SO3(f);
  c.simplex_mean2 = s / 24.0;
  return c;
}

namespace {

double simplex_mean2(const CellMatrix& g) {
  double s = 0.0;
  for (const Mat3& f : simplex_gradients(g)) s += dist2_SO3(f);
  return s / 24.0;
}

}  // namespace

RigidityReport interpolate_and_rigidity(const Deformation& w, const LatticeIndex& lat, bool keep_cells) {
  const FilmConfig& cfg = lat.config();
  RigidityReport rep;
  if (keep_cells) rep.cells.resize(lat.cell_count());
  CompensatedSum sum;
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    const CellMatrix g = discrete_gradient(w, lat, lat.cell(id));
    if (keep_cells) {
      rep.cells[id] = cell_sandwich(g);
      sum += rep.cells[id].simplex_mean2;
    } else {
      sum += simplex_mean2(g);
    }
  }
  rep.integral = cfg.epsilon * cfg.epsilon * cfg.epsilon / cfg.h() * sum.value();
  return rep;
}

double rigidity_integral(const RecoveryMap& map) {
  const LatticeIndex& lat = map.lattice();
  const FilmConfig& cfg = lat.config();
  const std::size_t rows = static_cast<std::size_t>(cfg.n2) * (cfg.nu - 1);
  const double sum = ordered_block_sum(rows, [&](std::size_t row) {
    CompensatedSum s;
    CellIndex c{0, static_cast<int>(row % cfg.n2), static_cast<int>(row / cfg.n2)};
    for (c.i = 0; c.i < cfg.n1; ++c.i) s += simplex_mean2(map.gradient(c));
    return s.value();
  });
  return cfg.epsilon * cfg.epsilon * cfg.epsilon / cfg.h() * sum;
}

}  // namespace thinfilm
