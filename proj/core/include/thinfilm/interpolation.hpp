#pragma once

#include "thinfilm/lattice.hpp"

#include <array>
#include <functional>
#include <vector>

namespace thinfilm {

class RecoveryMap;

/// Squared distance of F to SO(3) from the singular values of F.
double dist2_SO3(const Mat3& f);

/// The 24 simplices of a unit cell: vertices are the cell centre, a face
/// centre and the two ends of one edge of that face. Reference coordinates
/// are in units of the lattice spacing relative to corner a^1.
struct CellSimplex {
  int face = 0;
  int edge_from = 0, edge_to = 0;  // corner indices
};
const std::array<CellSimplex, 24>& cell_simplices();
const std::array<std::array<int, 4>, 6>& cell_faces();

/// Values of the piecewise affine interpolant at the cell centre and the six
/// face centres, from the 8 corner values.
Vec3 interpolant_center(const CellMatrix& corners);
Vec3 interpolant_face_center(const CellMatrix& corners, int face);

/// Gradients of the interpolant on the 24 simplices of a cell with discrete gradient g.
std::array<Mat3, 24> simplex_gradients(const CellMatrix& g);

struct CellSandwich {
  double cell_dist2 = 0.0;      // dist^2(grad, SO(3) Z)
  double simplex_mean2 = 0.0;   // eps^-3 int_Q dist^2(grad interpolant, SO(3))
};

struct RigidityReport {
  double integral = 0.0;  // I = int over the rescaled film of dist^2(grad_n interpolant, SO(3))
  std::vector<CellSandwich> cells;
};

CellSandwich cell_sandwich(const CellMatrix& g);

RigidityReport interpolate_and_rigidity(const Deformation& w, const LatticeIndex& lat, bool keep_cells = true);
double rigidity_integral(const RecoveryMap& map);

}  // namespace thinfilm
