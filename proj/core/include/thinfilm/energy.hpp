#pragma once

#include "thinfilm/lattice.hpp"
#include "thinfilm/parallel.hpp"
#include "thinfilm/potentials.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace thinfilm {

struct AtomisticModel {
  CellLaw cell;
  SurfaceLaw surface;
  std::optional<NonPenParams> nonpen;
  std::optional<double> delta_adm;  // radius of the admissible set S_delta

  // Throws ConfigError unless W_cell(Z) = 0 and W_surf(Z^(1)) = 0.
  void validate() const;
};

/// Cell energy including the surface terms of the bottom and top cell layers.
inline double cell_energy(const AtomisticModel& model, const LatticeIndex& lat, const CellIndex& c, const CellMatrix& g) {
  double e = model.cell.energy(g);
  if (lat.is_bottom_layer(c)) {
    e += model.surface.energy(bottom_face(g));
  }
  if (lat.is_top_layer(c)) {
    e += model.surface.energy(top_face(g));
  }
  return e;
}

/// dW/dG for cell_energy.
CellMatrix cell_energy_gradient(const AtomisticModel& model, const LatticeIndex& lat, const CellIndex& c,
                                const CellMatrix& g);

/// Sum of cell energies where grad(cell) supplies the discrete gradient of each
/// cell. Rows of cells are summed independently and combined in row order.
template <class CellGradient>
double e_atom_with(const LatticeIndex& lat, const AtomisticModel& model, CellGradient&& grad) {
  const FilmConfig& cfg = lat.config();
  const std::size_t rows = static_cast<std::size_t>(cfg.n2) * (cfg.nu - 1);
  return ordered_block_sum(rows, [&](std::size_t row) {
    CompensatedSum s;
    CellIndex c{0, static_cast<int>(row % cfg.n2), static_cast<int>(row / cfg.n2)};
    for (c.i = 0; c.i < cfg.n1; ++c.i) {
      s += cell_energy(model, lat, c, grad(c));
    }
    return s.value();
  });
}

double e_atom(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model);

/// dE_atom/dw per node (3 x node_count).
Eigen::Matrix3Xd e_atom_gradient(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model);

/// Body forces f_n, constant along vertical node lines; stored per column.
class ForceField {
 public:
  ForceField() = default;
  ForceField(const FilmConfig& cfg, std::vector<Vec3> column_forces);

  const FilmConfig& config() const { return cfg_; }
  const Vec3& column(int i, int j) const { return f_[static_cast<std::size_t>(i) + static_cast<std::size_t>(cfg_.n1 + 1) * j]; }
  const std::vector<Vec3>& columns() const { return f_; }
  bool empty() const { return f_.empty(); }

  // Net force and first moments summed over all nodes (force, force x x1, force x x2).
  Vec3 net_force() const;
  Eigen::Matrix<double, 3, 2> first_moment() const;
  // Tolerance scale for the moment checks.
  double moment_scale() const;

 private:
  FilmConfig cfg_;
  std::vector<Vec3> f_;
};

/// Removes the least-squares affine part of the raw profile on interior columns
/// (0 < i < n1, 0 < j < n2), zeroes the boundary ring and scales by the given factor.
ForceField make_admissible_force(const LatticeIndex& lat, const std::function<Vec3(const Vec2&)>& raw, double scale = 1.0);

double e_body(const Deformation& w, const LatticeIndex& lat, const ForceField& f);

double e_nonpen(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p);
// O(N^2) reference path summing the same nonzero terms in the same order.
double e_nonpen_naive(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p);
Eigen::Matrix3Xd e_nonpen_gradient(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p);

struct AdmissibilityReport {
  bool inside = true;
  double max_dist = 0.0;
};
AdmissibilityReport in_s_delta(const Deformation& w, const LatticeIndex& lat, double delta);

enum class EnergyVariant { plain, with_nonpen, restricted };

inline constexpr double kOutsideAdmissible = std::numeric_limits<double>::infinity();

/// (eps^3 / h) (E_atom + E_body [+ E_nonpen]). The restricted variant returns
/// kOutsideAdmissible when w is not in S_delta.
double e_total(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model, const ForceField* f,
               EnergyVariant variant);

}  // namespace thinfilm
