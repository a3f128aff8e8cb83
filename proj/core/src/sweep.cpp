#include "thinfilm/sweep.hpp"

#include "thinfilm/interpolation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

namespace thinfilm {

FilmConfig level_config(const SweepLevel& level, double l1, double l2) {
  FilmConfig cfg;
  cfg.epsilon = level.epsilon;
  cfg.nu = level.nu;
  if (!(level.epsilon > 0.0)) {
    throw ConfigError("sweep level needs a positive lattice spacing");
  }
  const double c1 = l1 / level.epsilon;
  const double c2 = l2 / level.epsilon;
  cfg.n1 = static_cast<int>(std::lround(c1));
  cfg.n2 = static_cast<int>(std::lround(c2));
  if (std::abs(c1 - cfg.n1) > 1e-9 * c1 || std::abs(c2 - cfg.n2) > 1e-9 * c2) {
    throw ConfigError("domain is not a whole number of cells at eps = " + std::to_string(level.epsilon));
  }
  cfg.validate();
  return cfg;
}

double limit_energy(const DisplacementField& field, const LimitForms& forms, Regime regime, int nu,
                    const Quadrature& quad) {
  return regime == Regime::thin ? e_vk(field, forms, quad) : e_vk_nu(field, nu, forms, quad);
}

ReportRow evaluate_level(const DisplacementField& field, const AtomisticModel& model, const LimitForms& forms,
                         const SweepLevel& level, const SweepOptions& opt, double e_limit) {
  const auto start = std::chrono::steady_clock::now();
  const FilmConfig cfg = level_config(level, opt.length1, opt.length2);
  const LatticeIndex lat(cfg);
  const RecoveryMap map(field, forms, lat, opt.regime);
  ReportRow row;
  row.eps = cfg.epsilon;
  row.nu = cfg.nu;
  row.h = cfg.h();
  row.e_scaled = recovery_scaled_energy(map, model);
  row.e_limit = e_limit;
  row.gap_abs = std::abs(row.e_scaled - row.e_limit);
  row.gap_rel = row.e_limit != 0.0 ? row.gap_abs / std::abs(row.e_limit) : row.gap_abs;
  if (lat.cell_count() <= opt.diagnostics_max_cells) {
    row.max_dist = max_cell_distance(map);
    const double h2 = row.h * row.h;
    row.i_over_h4 = rigidity_integral(map) / (h2 * h2);
  }
  if (opt.timing) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

std::vector<ReportRow> scaled_energy_gap(const DisplacementField& field, const AtomisticModel& model,
                                         const LimitForms& forms, const std::vector<SweepLevel>& levels,
                                         const SweepOptions& opt) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i].epsilon < levels[i - 1].epsilon)) {
      throw ConfigError("sweep lattice spacings must be strictly decreasing");
    }
  }
  const Quadrature quad(opt.length1, opt.length2, opt.quad_m, opt.quad_m);
  std::vector<ReportRow> rows;
  double cached_limit = 0.0;
  int cached_nu = -1;
  for (const auto& level : levels) {
    if (opt.regime == Regime::thin ? cached_nu < 0 : cached_nu != level.nu) {
      cached_limit = limit_energy(field, forms, opt.regime, level.nu, quad);
      cached_nu = level.nu;
    }
    rows.push_back(evaluate_level(field, model, forms, level, opt, cached_limit));
  }
  return rows;
}

StrainMomentRow strain_moments(const DisplacementField& field, const LimitForms& forms, const FilmConfig& cfg,
                               Regime regime, int quad_m) {
  const LatticeIndex lat(cfg);
  const RecoveryMap map(field, forms, lat, regime);
  const std::vector<CellMatrix> strain = extract_strain(map);
  const int layers = cfg.nu - 1;
  const double cell_weight = cfg.epsilon * cfg.epsilon / layers;

  std::vector<std::array<CellMatrix, 3>> discrete(layers);
  for (auto& m : discrete) m.fill(CellMatrix::Zero());
  StrainMomentRow row;
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    const CellIndex c = lat.cell(id);
    const Vec3 x = lat.cell_midpoint(c);
    const CellMatrix& g = strain[id];
    discrete[c.k][0] += cell_weight * g;
    discrete[c.k][1] += (cell_weight * x(0)) * g;
    discrete[c.k][2] += (cell_weight * x(1)) * g;
    row.max_strain = std::max(row.max_strain, g.norm());
  }

  const CorrectorField correctors(field, forms, regime, cfg.nu);
  const Quadrature quad(cfg.length1(), cfg.length2(), quad_m, quad_m);
  double gap2 = 0.0;
  double norm2 = 0.0;
  for (int k = 0; k < layers; ++k) {
    const double x3 = (k + 0.5) / layers;
    std::array<CellMatrix, 3> limit;
    limit.fill(CellMatrix::Zero());
    for (const Vec2& x : quad.nodes()) {
      const CellMatrix g = limit_strain(correctors, field, x, x3);
      const double w = quad.weight() / layers;
      limit[0] += w * g;
      limit[1] += (w * x(0)) * g;
      limit[2] += (w * x(1)) * g;
    }
    for (int t = 0; t < 3; ++t) {
      gap2 += (discrete[k][t] - limit[t]).squaredNorm();
      norm2 += limit[t].squaredNorm();
    }
  }
  row.eps = cfg.epsilon;
  row.nu = cfg.nu;
  row.h = cfg.h();
  row.moment_gap = std::sqrt(gap2);
  row.moment_norm = std::sqrt(norm2);
  return row;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw NumericError("slope fit needs at least two matching points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BarrierReport energy_barrier_check(const std::vector<ReportRow>& rows, double delta) {
  BarrierReport rep;
  for (const auto& r : rows) {
    rep.h.push_back(r.h);
    rep.max_dist.push_back(r.max_dist);
  }
  for (int i = static_cast<int>(rows.size()) - 1; i >= 0; --i) {
    if (!(rows[i].max_dist < 0.5 * delta)) break;
    rep.first_inside = i;
  }
  std::vector<double> hs, ds;
  for (const auto& r : rows) {
    if (r.max_dist > 0.0) {
      hs.push_back(r.h);
      ds.push_back(r.max_dist);
    }
  }
  rep.slope = hs.size() >= 2 ? loglog_slope(hs, ds) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

BarrierReport energy_barrier_check(const DisplacementField& field, const AtomisticModel& model,
                                   const LimitForms& forms, const std::vector<SweepLevel>& levels,
                                   const SweepOptions& opt, double delta) {
  return energy_barrier_check(scaled_energy_gap(field, model, forms, levels, opt), delta);
}

}  // namespace thinfilm
