#include "thinfilm/potentials.hpp"

#include "thinfilm/lattice.hpp"

#include <cmath>
#include <limits>

namespace thinfilm {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

template <std::size_t N>
std::array<std::pair<int, int>, N> collect_pairs(int n_corners, int differing_coords) {
  std::array<std::pair<int, int>, N> out{};
  std::size_t count = 0;
  for (int i = 0; i < n_corners; ++i) {
    for (int j = i + 1; j < n_corners; ++j) {
      int diff = 0;
      for (int r = 0; r < 3; ++r) {
        diff += kCornerOffsets[i][r] != kCornerOffsets[j][r];
      }
      if (diff == differing_coords) {
        out[count++] = {i, j};
      }
    }
  }
  return out;
}

// Sum over unordered pairs of weight * phi(|w_i - w_j| - rest).
template <int C, std::size_t N, class Phi>
double spring_sum(const Eigen::Matrix<double, 3, C>& g, const std::array<std::pair<int, int>, N>& pairs, double weight,
                  double rest, Phi phi) {
  double s = 0.0;
  for (const auto& [i, j] : pairs) {
    s += phi((g.col(i) - g.col(j)).norm() - rest);
  }
  return weight * s;
}

template <int C, std::size_t N, class DPhi>
void spring_gradient(const Eigen::Matrix<double, 3, C>& g, const std::array<std::pair<int, int>, N>& pairs,
                     double weight, double rest, DPhi dphi, Eigen::Matrix<double, 3, C>& out) {
  for (const auto& [i, j] : pairs) {
    const Vec3 d = g.col(i) - g.col(j);
    const double len = d.norm();
    if (len == 0.0) {
      continue;
    }
    const Vec3 f = (weight * dphi(len - rest) / len) * d;
    out.col(i) += f;
    out.col(j) -= f;
  }
}

template <int C, std::size_t N>
void spring_hessian(const Eigen::Matrix<double, 3, C>& g, const std::array<std::pair<int, int>, N>& pairs,
                    double weight, double rest, PairShape shape, Eigen::MatrixXd& out) {
  for (const auto& [i, j] : pairs) {
    const Vec3 d = g.col(i) - g.col(j);
    const double len = d.norm();
    const Vec3 n = d / len;
    const PairValue pv = pair_value(shape, len - rest);
    const Mat3 nn = n * n.transpose();
    const Mat3 block = weight * (pv.d2v * nn + (pv.dv / len) * (Mat3::Identity() - nn));
    out.block<3, 3>(3 * i, 3 * i) += block;
    out.block<3, 3>(3 * j, 3 * j) += block;
    out.block<3, 3>(3 * i, 3 * j) -= block;
    out.block<3, 3>(3 * j, 3 * i) -= block;
  }
}

double smoothstep_down(double s, const PenaltyParams& p) {
  if (s >= p.r1) return 0.0;
  if (s <= p.r0) return 1.0;
  const double t = (p.r1 - s) / (p.r1 - p.r0);
  return t * t * (3.0 - 2.0 * t);
}

double smoothstep_down_slope(double s, const PenaltyParams& p) {
  if (s >= p.r1 || s <= p.r0) return 0.0;
  const double t = (p.r1 - s) / (p.r1 - p.r0);
  return -6.0 * t * (1.0 - t) / (p.r1 - p.r0);
}

Mat3 cofactor(const Mat3& f) {
  Mat3 c;
  c.col(0) = f.col(1).cross(f.col(2));
  c.col(1) = f.col(2).cross(f.col(0));
  c.col(2) = f.col(0).cross(f.col(1));
  return c;
}

}  // namespace

const std::array<std::pair<int, int>, 12>& cell_edges() {
  static const auto pairs = collect_pairs<12>(8, 1);
  return pairs;
}

const std::array<std::pair<int, int>, 12>& cell_diagonals() {
  static const auto pairs = collect_pairs<12>(8, 2);
  return pairs;
}

const std::array<std::pair<int, int>, 4>& face_edges() {
  static const auto pairs = collect_pairs<4>(4, 1);
  return pairs;
}

const std::array<std::pair<int, int>, 2>& face_diagonals() {
  static const auto pairs = collect_pairs<2>(4, 2);
  return pairs;
}

PairValue pair_value(PairShape shape, double r) {
  switch (shape) {
    case PairShape::quadratic:
      return {r * r, 2.0 * r, 2.0};
    case PairShape::lennard_jones: {
      const double x = 1.0 + r;
      if (x <= 0.0) {
        return {std::numeric_limits<double>::infinity(), 0.0, 0.0};
      }
      // (1+r)^-12 - 2 (1+r)^-6 + 1 = ((1+r)^-6 - 1)^2
      const double m = std::expm1(-6.0 * std::log1p(r));
      const double i6 = 1.0 + m;
      const double i12 = i6 * i6;
      return {m * m, -12.0 * m * i6 / x, (156.0 * i12 - 84.0 * i6) / (x * x)};
    }
  }
  return {0.0, 0.0, 0.0};
}

// Ordered-pair double sums equal twice the unordered sums, so the weights
// below are 2 * (alpha/16, beta/8) for cells and 2 * (alpha/8, beta/8) for faces.

double wcell_mass_spring(const CellMatrix& g, const MassSpringParams& p) {
  const auto sq = [](double r) { return r * r; };
  return spring_sum(g, cell_edges(), p.alpha / 8.0, 1.0, sq) + spring_sum(g, cell_diagonals(), p.beta / 4.0, kSqrt2, sq);
}

double wsurf_mass_spring(const FaceMatrix& g, const MassSpringParams& p) {
  const auto sq = [](double r) { return r * r; };
  return spring_sum(g, face_edges(), p.alpha / 4.0, 1.0, sq) + spring_sum(g, face_diagonals(), p.beta / 4.0, kSqrt2, sq);
}

double wcell_pair(const CellMatrix& g, const PairPotentialParams& p) {
  const auto v1 = [&](double r) { return pair_value(p.v1, r).v; };
  const auto v2 = [&](double r) { return pair_value(p.v2, r).v; };
  return spring_sum(g, cell_edges(), p.alpha / 8.0, 1.0, v1) + spring_sum(g, cell_diagonals(), p.beta / 4.0, kSqrt2, v2);
}

double wsurf_pair(const FaceMatrix& g, const PairPotentialParams& p) {
  const auto v1 = [&](double r) { return pair_value(p.v1, r).v; };
  const auto v2 = [&](double r) { return pair_value(p.v2, r).v; };
  return spring_sum(g, face_edges(), p.alpha / 4.0, 1.0, v1) + spring_sum(g, face_diagonals(), p.beta / 4.0, kSqrt2, v2);
}

double chi_penalty(const CellMatrix& g, const PenaltyParams& p) {
  return p.c * smoothstep_down(affine_part(g).determinant(), p);
}

CellMatrix chi_penalty_gradient(const CellMatrix& g, const PenaltyParams& p) {
  const Mat3 f = affine_part(g);
  const double slope = smoothstep_down_slope(f.determinant(), p);
  if (slope == 0.0) {
    return CellMatrix::Zero();
  }
  return (0.5 * p.c * slope) * cofactor(f) * reference_cell();
}

double v_nonpen_distance(double r, const NonPenParams& p) {
  return p.gamma * std::min(1.0, std::max(0.0, (2.0 * p.delta - r) / p.delta));
}

double v_nonpen_slope(double r, const NonPenParams& p) {
  return (r > p.delta && r < 2.0 * p.delta) ? -p.gamma / p.delta : 0.0;
}

double v_nonpen(const Vec3& v, const Vec3& w, const NonPenParams& p) { return v_nonpen_distance((v - w).norm(), p); }

CellMatrix wcell_mass_spring_gradient(const CellMatrix& g, const MassSpringParams& p) {
  CellMatrix out = CellMatrix::Zero();
  const auto dsq = [](double r) { return 2.0 * r; };
  spring_gradient(g, cell_edges(), p.alpha / 8.0, 1.0, dsq, out);
  spring_gradient(g, cell_diagonals(), p.beta / 4.0, kSqrt2, dsq, out);
  return out;
}

FaceMatrix wsurf_mass_spring_gradient(const FaceMatrix& g, const MassSpringParams& p) {
  FaceMatrix out = FaceMatrix::Zero();
  const auto dsq = [](double r) { return 2.0 * r; };
  spring_gradient(g, face_edges(), p.alpha / 4.0, 1.0, dsq, out);
  spring_gradient(g, face_diagonals(), p.beta / 4.0, kSqrt2, dsq, out);
  return out;
}

CellMatrix wcell_pair_gradient(const CellMatrix& g, const PairPotentialParams& p) {
  CellMatrix out = CellMatrix::Zero();
  spring_gradient(g, cell_edges(), p.alpha / 8.0, 1.0, [&](double r) { return pair_value(p.v1, r).dv; }, out);
  spring_gradient(g, cell_diagonals(), p.beta / 4.0, kSqrt2, [&](double r) { return pair_value(p.v2, r).dv; }, out);
  return out;
}

FaceMatrix wsurf_pair_gradient(const FaceMatrix& g, const PairPotentialParams& p) {
  FaceMatrix out = FaceMatrix::Zero();
  spring_gradient(g, face_edges(), p.alpha / 4.0, 1.0, [&](double r) { return pair_value(p.v1, r).dv; }, out);
  spring_gradient(g, face_diagonals(), p.beta / 4.0, kSqrt2, [&](double r) { return pair_value(p.v2, r).dv; }, out);
  return out;
}

Eigen::MatrixXd wcell_pair_hessian(const CellMatrix& g, const PairPotentialParams& p) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(24, 24);
  spring_hessian(g, cell_edges(), p.alpha / 8.0, 1.0, p.v1, h);
  spring_hessian(g, cell_diagonals(), p.beta / 4.0, kSqrt2, p.v2, h);
  return h;
}

Eigen::MatrixXd wsurf_pair_hessian(const FaceMatrix& g, const PairPotentialParams& p) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(12, 12);
  spring_hessian(g, face_edges(), p.alpha / 4.0, 1.0, p.v1, h);
  spring_hessian(g, face_diagonals(), p.beta / 4.0, kSqrt2, p.v2, h);
  return h;
}

Eigen::MatrixXd wcell_mass_spring_hessian(const CellMatrix& g, const MassSpringParams& p) {
  return wcell_pair_hessian(g, {PairShape::quadratic, PairShape::quadratic, p.alpha, p.beta});
}

Eigen::MatrixXd wsurf_mass_spring_hessian(const FaceMatrix& g, const MassSpringParams& p) {
  return wsurf_pair_hessian(g, {PairShape::quadratic, PairShape::quadratic, p.alpha, p.beta});
}

double CellLaw::energy(const CellMatrix& g) const {
  double w = kind == BulkKind::mass_spring ? wcell_mass_spring(g, spring) : wcell_pair(g, pair);
  if (penalty) {
    w += chi_penalty(g, *penalty);
  }
  return w;
}

CellMatrix CellLaw::gradient(const CellMatrix& g) const {
  CellMatrix d = kind == BulkKind::mass_spring ? wcell_mass_spring_gradient(g, spring) : wcell_pair_gradient(g, pair);
  if (penalty) {
    d += chi_penalty_gradient(g, *penalty);
  }
  return d;
}

double SurfaceLaw::energy(const FaceMatrix& g) const {
  switch (kind) {
    case SurfaceKind::none:
      return 0.0;
    case SurfaceKind::mass_spring:
      return wsurf_mass_spring(g, spring);
    case SurfaceKind::pair:
      return wsurf_pair(g, pair);
  }
  return 0.0;
}

FaceMatrix SurfaceLaw::gradient(const FaceMatrix& g) const {
  switch (kind) {
    case SurfaceKind::none:
      return FaceMatrix::Zero();
    case SurfaceKind::mass_spring:
      return wsurf_mass_spring_gradient(g, spring);
    case SurfaceKind::pair:
      return wsurf_pair_gradient(g, pair);
  }
  return FaceMatrix::Zero();
}

}  // namespace thinfilm
