#pragma once

#include "thinfilm/types.hpp"

#include <array>
#include <optional>
#include <utility>

namespace thinfilm {

struct MassSpringParams {
  double alpha = 1.0;  // nearest neighbours
  double beta = 1.0;   // face diagonals
};

/// Orientation penalty c * psi(det F), F = G Z^T / 2, with psi the cubic
/// smoothstep equal to 1 below r0 and 0 above r1.
struct PenaltyParams {
  double c = 1.0;
  double r0 = 0.0;
  double r1 = 0.5;
};

enum class PairShape { quadratic, lennard_jones };

/// Pair potential V(r) of the bond extension r (V(0) = 0), with derivatives.
struct PairValue {
  double v, dv, d2v;
};
PairValue pair_value(PairShape shape, double r);

struct PairPotentialParams {
  PairShape v1 = PairShape::lennard_jones;  // nearest neighbours, V1(|d| - 1)
  PairShape v2 = PairShape::lennard_jones;  // face diagonals, V2(|d| - sqrt 2)
  double alpha = 1.0;
  double beta = 1.0;
};

struct NonPenParams {
  double delta = 0.1;
  double gamma = 1.0;
};

// Unordered corner pairs of the unit cell and of one face.
const std::array<std::pair<int, int>, 12>& cell_edges();
const std::array<std::pair<int, int>, 12>& cell_diagonals();
const std::array<std::pair<int, int>, 4>& face_edges();
const std::array<std::pair<int, int>, 2>& face_diagonals();

double wcell_mass_spring(const CellMatrix& g, const MassSpringParams& p);
double wsurf_mass_spring(const FaceMatrix& g, const MassSpringParams& p);
double wcell_pair(const CellMatrix& g, const PairPotentialParams& p);
double wsurf_pair(const FaceMatrix& g, const PairPotentialParams& p);
double chi_penalty(const CellMatrix& g, const PenaltyParams& p);
double v_nonpen(const Vec3& v, const Vec3& w, const NonPenParams& p);
double v_nonpen_distance(double r, const NonPenParams& p);
// dV/dr of the ramp (zero outside the open ramp interval).
double v_nonpen_slope(double r, const NonPenParams& p);

CellMatrix wcell_mass_spring_gradient(const CellMatrix& g, const MassSpringParams& p);
FaceMatrix wsurf_mass_spring_gradient(const FaceMatrix& g, const MassSpringParams& p);
CellMatrix wcell_pair_gradient(const CellMatrix& g, const PairPotentialParams& p);
FaceMatrix wsurf_pair_gradient(const FaceMatrix& g, const PairPotentialParams& p);
CellMatrix chi_penalty_gradient(const CellMatrix& g, const PenaltyParams& p);

// Exact second derivatives of the spring sums, 24x24 (cell) and 12x12 (face)
// in column-major vectorization (entry (r, l) at index r + 3 l).
Eigen::MatrixXd wcell_pair_hessian(const CellMatrix& g, const PairPotentialParams& p);
Eigen::MatrixXd wsurf_pair_hessian(const FaceMatrix& g, const PairPotentialParams& p);
Eigen::MatrixXd wcell_mass_spring_hessian(const CellMatrix& g, const MassSpringParams& p);
Eigen::MatrixXd wsurf_mass_spring_hessian(const FaceMatrix& g, const MassSpringParams& p);

enum class BulkKind { mass_spring, pair };
enum class SurfaceKind { none, mass_spring, pair };

/// Cell law: spring or pair bulk energy, optionally with the orientation penalty.
struct CellLaw {
  BulkKind kind = BulkKind::mass_spring;
  MassSpringParams spring;
  PairPotentialParams pair;
  std::optional<PenaltyParams> penalty;

  double energy(const CellMatrix& g) const;
  CellMatrix gradient(const CellMatrix& g) const;
};

struct SurfaceLaw {
  SurfaceKind kind = SurfaceKind::mass_spring;
  MassSpringParams spring;
  PairPotentialParams pair;

  double energy(const FaceMatrix& g) const;
  FaceMatrix gradient(const FaceMatrix& g) const;
};

}  // namespace thinfilm
