#pragma once

#include "thinfilm/energy.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/limits.hpp"
#include "thinfilm/quadforms.hpp"
#include "thinfilm/recovery.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace thinfilm {

struct SweepLevel {
  double epsilon = 0.0;
  int nu = 2;
};

/// Lattice for one level on (0, l1) x (0, l2); throws ConfigError unless the
/// rectangle is a whole number of cells.
FilmConfig level_config(const SweepLevel& level, double l1, double l2);

struct SweepOptions {
  Regime regime = Regime::ultrathin;
  double length1 = 1.0;
  double length2 = 1.0;
  int quad_m = 256;
  // Levels with more cells skip max_dist and i_over_h4 (reported as NaN).
  std::size_t diagnostics_max_cells = std::size_t{1} << 22;
  bool timing = true;
};

struct ReportRow {
  double eps = 0.0;
  int nu = 0;
  double h = 0.0;
  double e_scaled = 0.0;
  double e_limit = 0.0;
  double gap_abs = 0.0;
  double gap_rel = 0.0;
  double max_dist = std::numeric_limits<double>::quiet_NaN();
  double i_over_h4 = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
};

double limit_energy(const DisplacementField& field, const LimitForms& forms, Regime regime, int nu,
                    const Quadrature& quad);

ReportRow evaluate_level(const DisplacementField& field, const AtomisticModel& model, const LimitForms& forms,
                         const SweepLevel& level, const SweepOptions& opt, double e_limit);

/// Recovery energies against the limit functional along a sequence of levels.
std::vector<ReportRow> scaled_energy_gap(const DisplacementField& field, const AtomisticModel& model,
                                         const LimitForms& forms, const std::vector<SweepLevel>& levels,
                                         const SweepOptions& opt);

struct StrainMomentRow {
  double eps = 0.0;
  int nu = 0;
  double h = 0.0;
  double moment_gap = 0.0;   // l2 distance of all moments to the limit moments
  double moment_norm = 0.0;  // l2 norm of the limit moments
  double max_strain = 0.0;   // largest per-cell strain norm
};

/// Moments of the per-cell strain against 1, x1, x2 on every cell layer,
/// compared with the moments of the full limit strain.
StrainMomentRow strain_moments(const DisplacementField& field, const LimitForms& forms, const FilmConfig& cfg,
                               Regime regime, int quad_m);

struct BarrierReport {
  std::vector<double> h;
  std::vector<double> max_dist;
  int first_inside = -1;  // first level from which every level lies in S_{delta/2}; -1 if none
  double slope = 0.0;     // log-log slope of max_dist against h
};

BarrierReport energy_barrier_check(const std::vector<ReportRow>& rows, double delta);
BarrierReport energy_barrier_check(const DisplacementField& field, const AtomisticModel& model,
                                   const LimitForms& forms, const std::vector<SweepLevel>& levels,
                                   const SweepOptions& opt, double delta);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace thinfilm
