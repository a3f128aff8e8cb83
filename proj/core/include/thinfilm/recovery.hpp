#pragma once

#include "thinfilm/energy.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/limits.hpp"
#include "thinfilm/quadforms.hpp"

#include <utility>
#include <vector>

namespace thinfilm {

/// Minimizers (d0, d1) of the corrector problems at one point.
/// thin: d0 = argmin_b Q_cell([[G1, 0], [0, |grad v|^2 / 2]] Z + (b (x) e3) Z),
/// ultrathin: the same objective plus G3 / (2(nu - 1)) and with sym(b (x) e3) Z;
/// d1 = argmin_b Q_cell([[G2, 0], [0, 0]] Z + (b (x) e3) Z) in both cases.
std::pair<Vec3, Vec3> solve_correctors(const DisplacementField& field, const LimitForms& forms, const Vec2& x,
                                       Regime regime, int nu);

/// Vertical corrector profile d(x', x3) on [0, 1].
class CorrectorField {
 public:
  CorrectorField(const DisplacementField& field, const LimitForms& forms, Regime regime, int nu);

  Regime regime() const { return regime_; }
  int nu() const { return nu_; }
  std::pair<Vec3, Vec3> at(const Vec2& x) const { return solve_correctors(field_, forms_, x, regime_, nu_); }

  // thin: x3 d0 + (x3^2 - x3)/2 d1. ultrathin: d(., 0) = 0 and slope
  // d0 + (2j - nu)/(2(nu - 1)) d1 on the j-th layer [(j-1)/(nu-1), j/(nu-1)].
  Vec3 profile(const Vec2& x, double x3) const;
  Vec3 slope(const Vec2& x, double x3) const;

  // Profile at atomic layer k, x3 = k/(nu - 1). Both regimes agree there up to d0.
  static Vec3 node_profile(const Vec3& d0, const Vec3& d1, int k, int nu);

 private:
  const DisplacementField& field_;
  const LimitForms& forms_;
  Regime regime_;
  int nu_;
};

/// Recovery deformation evaluated on demand from per-column data, so the
/// energy of large films can be computed without storing every node.
/// Rescaled ansatz y = (x', h x3) + (h^2 u, h v) - h^2 (x3 - 1/2)(grad v, 0) + h^3 d.
class RecoveryMap {
 public:
  RecoveryMap(const DisplacementField& field, const LimitForms& forms, const LatticeIndex& lat, Regime regime);

  const LatticeIndex& lattice() const { return lat_; }
  Regime regime() const { return regime_; }

  Vec3 displacement(int i, int j, int k) const;
  Vec3 position(int i, int j, int k) const {
    return lat_.node_position({i, j, k}) + displacement(i, j, k);
  }
  // Z + discrete gradient of the displacement; avoids cancellation against the reference positions.
  CellMatrix gradient(const CellIndex& c) const;

  Deformation materialize() const;

 private:
  struct Column {
    Vec2 u;
    double v;
    Vec2 dv;
    Vec3 d0, d1;
  };

  LatticeIndex lat_;
  Regime regime_;
  std::vector<Column> cols_;
};

Deformation build_recovery(const DisplacementField& field, const LimitForms& forms, const FilmConfig& cfg,
                           Regime regime);

/// h^-4 (eps^3 / h) E_atom along the recovery deformation.
double recovery_scaled_energy(const RecoveryMap& map, const AtomisticModel& model);
/// h^-4 (eps^3 / h) E_body along the recovery deformation.
double recovery_scaled_body(const RecoveryMap& map, const ForceField& f);

/// Per-cell strain (R_c^T grad - Z) / h^2 with R_c the nearest rotation of the cell.
std::vector<CellMatrix> extract_strain(const Deformation& y, const LatticeIndex& lat);
std::vector<CellMatrix> extract_strain(const RecoveryMap& map);

/// In-plane limit strain: thin regime [[G1 + (x3 - 1/2) G2, 0], [0, 0]] Z;
/// ultrathin regime uses the layer average of x3 - 1/2 and adds G3 / (2(nu - 1)).
CellMatrix limit_strain(const DisplacementField& field, Regime regime, int nu, const Vec2& x, double x3);

/// Full limit strain of the recovery sequence: the in-plane strain completed by
/// |grad v|^2 / 2 in the (3, 3) entry and sym(d3 d (x) e3), d3 d the corrector slope.
CellMatrix limit_strain(const CorrectorField& correctors, const DisplacementField& field, const Vec2& x, double x3);

/// Largest dist(grad, SO(3) Z) over all cells.
double max_cell_distance(const RecoveryMap& map);
double max_cell_distance(const Deformation& w, const LatticeIndex& lat);

struct DisplacementGrid {
  int n1 = 0, n2 = 0;
  std::vector<Vec2> u;    // per column, h^-2 int_0^1 (y' - x') dx3
  std::vector<double> v;  // per column, h^-1 int_0^1 y3 dx3
};
DisplacementGrid extract_displacements(const Deformation& y, const LatticeIndex& lat);

}  // namespace thinfilm
