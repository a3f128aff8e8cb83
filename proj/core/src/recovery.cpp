#include "thinfilm/recovery.hpp"

#include "thinfilm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thinfilm {

namespace {

CellMatrix membrane_target(const LimitStrains& s, const Vec2& dv) {
  Mat3 a = embed_in_plane(s.g1);
  a(2, 2) = 0.5 * dv.squaredNorm();
  return a * reference_cell();
}

int layer_of(double x3, int nu) {
  const int j = static_cast<int>(std::floor(x3 * (nu - 1))) + 1;
  return std::clamp(j, 1, nu - 1);
}

double layer_offset(int j, int nu) { return (2.0 * j - nu) / (2.0 * (nu - 1)); }

}  // namespace

std::pair<Vec3, Vec3> solve_correctors(const DisplacementField& field, const LimitForms& forms, const Vec2& x,
                                       Regime regime, int nu) {
  const LimitStrains s = strains_at(field, x);
  const CellMatrix bend = embed_in_plane(s.g2) * reference_cell();
  CellMatrix target = membrane_target(s, field.grad_v(x));
  if (regime == Regime::thin) {
    return {forms.rel.relax_b(target), forms.rel.relax_b(bend)};
  }
  target += s.g3 / (2.0 * (nu - 1));
  return {forms.rel.relax_b_sym(target), forms.rel.relax_b_sym(bend)};
}

CorrectorField::CorrectorField(const DisplacementField& field, const LimitForms& forms, Regime regime, int nu)
    : field_(field), forms_(forms), regime_(regime), nu_(nu) {
  if (nu < 2) {
    throw ConfigError("corrector profile needs nu >= 2");
  }
}

Vec3 CorrectorField::node_profile(const Vec3& d0, const Vec3& d1, int k, int nu) {
  const double n1 = nu - 1.0;
  return (k / n1) * d0 + (k * (k + 1.0 - nu) / (2.0 * n1 * n1)) * d1;
}

Vec3 CorrectorField::profile(const Vec2& x, double x3) const {
  const auto [d0, d1] = at(x);
  if (regime_ == Regime::thin) {
    return x3 * d0 + 0.5 * (x3 * x3 - x3) * d1;
  }
  const int j = layer_of(x3, nu_);
  const double base = (j - 1.0) / (nu_ - 1.0);
  return node_profile(d0, d1, j - 1, nu_) + (x3 - base) * (d0 + layer_offset(j, nu_) * d1);
}

Vec3 CorrectorField::slope(const Vec2& x, double x3) const {
  const auto [d0, d1] = at(x);
  if (regime_ == Regime::thin) {
    return d0 + (x3 - 0.5) * d1;
  }
  return d0 + layer_offset(layer_of(x3, nu_), nu_) * d1;
}

RecoveryMap::RecoveryMap(const DisplacementField& field, const LimitForms& forms, const LatticeIndex& lat, Regime regime)
    : lat_(lat), regime_(regime), cols_(lat.column_count()) {
  const FilmConfig& cfg = lat.config();
  parallel_blocks(static_cast<std::size_t>(cfg.n2) + 1, [&](std::size_t jb) {
    const int j = static_cast<int>(jb);
    for (int i = 0; i <= cfg.n1; ++i) {
      const Vec2 x(i * cfg.epsilon, j * cfg.epsilon);
      Column& c = cols_[lat_.column_id(i, j)];
      c.u = field.u(x);
      c.v = field.v(x);
      c.dv = field.grad_v(x);
      std::tie(c.d0, c.d1) = solve_correctors(field, forms, x, regime, cfg.nu);
    }
  });
}

Vec3 RecoveryMap::displacement(int i, int j, int k) const {
  const FilmConfig& cfg = lat_.config();
  const Column& c = cols_[lat_.column_id(i, j)];
  const double h = cfg.h();
  const double h2 = h * h;
  const double x3 = static_cast<double>(k) / (cfg.nu - 1);
  const Vec3 d = CorrectorField::node_profile(c.d0, c.d1, k, cfg.nu);
  Vec3 out;
  out.head<2>() = h2 * (c.u - (x3 - 0.5) * c.dv) + (h2 * h) * d.head<2>();
  out(2) = h * c.v + (h2 * h) * d(2);
  return out;
}

CellMatrix RecoveryMap::gradient(const CellIndex& cell) const {
  CellMatrix disp;
  for (int l = 0; l < 8; ++l) {
    const NodeIndex n = lat_.corner(cell, l);
    disp.col(l) = displacement(n.i, n.j, n.k);
  }
  return reference_cell() + discrete_gradient_from_corners(disp, lat_.config().epsilon);
}

Deformation RecoveryMap::materialize() const {
  Deformation w(lat_);
  for (std::size_t id = 0; id < lat_.node_count(); ++id) {
    const NodeIndex n = lat_.node(id);
    w[id] = position(n.i, n.j, n.k);
  }
  return w;
}

Deformation build_recovery(const DisplacementField& field, const LimitForms& forms, const FilmConfig& cfg,
                           Regime regime) {
  return RecoveryMap(field, forms, LatticeIndex(cfg), regime).materialize();
}

double recovery_scaled_energy(const RecoveryMap& map, const AtomisticModel& model) {
  const FilmConfig& cfg = map.lattice().config();
  const double h = cfg.h();
  const double e = e_atom_with(map.lattice(), model, [&](const CellIndex& c) { return map.gradient(c); });
  return cfg.epsilon * cfg.epsilon * cfg.epsilon / h * e / (h * h * h * h);
}

double recovery_scaled_body(const RecoveryMap& map, const ForceField& f) {
  const FilmConfig& cfg = map.lattice().config();
  const double h = cfg.h();
  const double tol = 1e-10 * std::max(f.moment_scale(), 1e-300);
  if (f.net_force().norm() > tol || f.first_moment().norm() > tol) {
    throw ConfigError("body force has nonzero net force or first moment");
  }
  CompensatedSum s;
  for (int k = 0; k < cfg.nu; ++k) {
    for (int j = 0; j <= cfg.n2; ++j) {
      for (int i = 0; i <= cfg.n1; ++i) {
        s += map.displacement(i, j, k).dot(f.column(i, j));
      }
    }
  }
  return cfg.epsilon * cfg.epsilon * cfg.epsilon / h * s.value() / (h * h * h * h);
}

namespace {

CellMatrix strain_of(const CellMatrix& g, double h) {
  const Mat3 r = nearest_rotation(g);
  return (r.transpose() * g - reference_cell()) / (h * h);
}

}  // namespace

std::vector<CellMatrix> extract_strain(const Deformation& y, const LatticeIndex& lat) {
  std::vector<CellMatrix> out(lat.cell_count());
  const double h = lat.config().h();
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    out[id] = strain_of(discrete_gradient(y, lat, lat.cell(id)), h);
  }
  return out;
}

std::vector<CellMatrix> extract_strain(const RecoveryMap& map) {
  const LatticeIndex& lat = map.lattice();
  std::vector<CellMatrix> out(lat.cell_count());
  const double h = lat.config().h();
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    out[id] = strain_of(map.gradient(lat.cell(id)), h);
  }
  return out;
}

CellMatrix limit_strain(const DisplacementField& field, Regime regime, int nu, const Vec2& x, double x3) {
  const LimitStrains s = strains_at(field, x);
  if (regime == Regime::thin) {
    return embed_in_plane(s.g1 + (x3 - 0.5) * s.g2) * reference_cell();
  }
  const double offset = layer_offset(layer_of(x3, nu), nu);
  return embed_in_plane(s.g1 + offset * s.g2) * reference_cell() + s.g3 / (2.0 * (nu - 1));
}

CellMatrix limit_strain(const CorrectorField& correctors, const DisplacementField& field, const Vec2& x, double x3) {
  const Vec2 dv = field.grad_v(x);
  const Vec3 e3 = Vec3::UnitZ();
  const Vec3 b = correctors.slope(x, x3);
  Mat3 completion = 0.5 * (b * e3.transpose() + e3 * b.transpose());
  completion(2, 2) += 0.5 * dv.squaredNorm();
  return limit_strain(field, correctors.regime(), correctors.nu(), x, x3) + completion * reference_cell();
}

double max_cell_distance(const RecoveryMap& map) {
  const LatticeIndex& lat = map.lattice();
  const FilmConfig& cfg = lat.config();
  const std::size_t rows = static_cast<std::size_t>(cfg.n2) * (cfg.nu - 1);
  std::vector<double> row_max(rows, 0.0);
  parallel_blocks(rows, [&](std::size_t row) {
    CellIndex c{0, static_cast<int>(row % cfg.n2), static_cast<int>(row / cfg.n2)};
    double m = 0.0;
    for (c.i = 0; c.i < cfg.n1; ++c.i) m = std::max(m, dist_SO3Z(map.gradient(c)));
    row_max[row] = m;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

double max_cell_distance(const Deformation& w, const LatticeIndex& lat) {
  return in_s_delta(w, lat, std::numeric_limits<double>::infinity()).max_dist;
}

DisplacementGrid extract_displacements(const Deformation& y, const LatticeIndex& lat) {
  const FilmConfig& cfg = lat.config();
  const double h = cfg.h();
  const double dz = 1.0 / (cfg.nu - 1);
  DisplacementGrid g;
  g.n1 = cfg.n1;
  g.n2 = cfg.n2;
  g.u.assign(lat.column_count(), Vec2::Zero());
  g.v.assign(lat.column_count(), 0.0);
  for (int j = 0; j <= cfg.n2; ++j) {
    for (int i = 0; i <= cfg.n1; ++i) {
      const Vec2 x(i * cfg.epsilon, j * cfg.epsilon);
      Vec2 su = Vec2::Zero();
      double sv = 0.0;
      for (int k = 0; k < cfg.nu; ++k) {
        const double wk = (k == 0 || k == cfg.nu - 1) ? 0.5 * dz : dz;
        const auto p = y[lat.node_id(i, j, k)];
        su += wk * (p.head<2>() - x);
        sv += wk * p(2);
      }
      g.u[lat.column_id(i, j)] = su / (h * h);
      g.v[lat.column_id(i, j)] = sv / h;
    }
  }
  return g;
}

}  // namespace thinfilm
