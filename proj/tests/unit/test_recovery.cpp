#include "oracles.hpp"

#include "thinfilm/recovery.hpp"
#include "thinfilm/sweep.hpp"

#include <doctest.h>

#include <random>

using namespace thinfilm;

namespace {

AtomisticModel spring_model() {
  AtomisticModel m;
  m.cell.kind = BulkKind::mass_spring;
  m.cell.spring = {1.0, 1.0};
  m.surface.kind = SurfaceKind::mass_spring;
  m.surface.spring = {1.0, 1.0};
  return m;
}

const LimitForms& forms() {
  static const LimitForms f = LimitForms::assemble(spring_model(), HessianMethod::analytic);
  return f;
}

TrigField generic_field() {
  return TrigField({{0.3, 1, 2, false, true}}, {{-0.2, 2, 1, true, false}},
                   {{1.0, 1, 1, false, false}, {0.4, 2, 3, true, false}});
}

CellMatrix in_plane(const Mat2& a) {
  Mat3 e = Mat3::Zero();
  e.topLeftCorner<2, 2>() = a;
  return e * oracle::z_matrix();
}

}  // namespace

TEST_CASE("corrector problems") {
  const ZeroField zero;
  for (Regime r : {Regime::thin, Regime::ultrathin}) {
    const auto [d0, d1] = solve_correctors(zero, forms(), Vec2(0.4, 0.3), r, 3);
    CHECK(d0.norm() == 0.0);
    CHECK(d1.norm() == 0.0);
  }
  const PolynomialField flat({{0.5, 2, 0}}, {{0.2, 1, 1}}, {{0.3, 1, 0}, {-0.2, 0, 1}});
  for (Regime r : {Regime::thin, Regime::ultrathin}) {
    CHECK(solve_correctors(flat, forms(), Vec2(0.4, 0.3), r, 3).second.norm() <= 1e-14);
  }

  // d0 minimizes Q_cell([[G1, 0], [0, |grad v|^2 / 2]] Z + (b (x) e3) Z) in the thin regime.
  const TrigField f = generic_field();
  const Vec2 x(0.35, 0.6);
  const Vec2 gv = f.grad_v(x);
  const Mat2 g1 = 0.5 * (f.grad_u(x) + f.grad_u(x).transpose()) + 0.5 * gv * gv.transpose();
  Mat3 t = Mat3::Zero();
  t.topLeftCorner<2, 2>() = g1;
  t(2, 2) = 0.5 * gv.squaredNorm();
  const CellMatrix target = t * oracle::z_matrix();
  const auto objective = [&](const Vec3& b) {
    CellMatrix shift = CellMatrix::Zero();
    for (int i = 0; i < 3; ++i) shift.row(i) = b(i) * oracle::z_matrix().row(2);
    return forms().cell.eval(target + shift);
  };
  const Vec3 d0 = solve_correctors(f, forms(), x, Regime::thin, 3).first;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  const double best = objective(d0);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 other = d0 + std::pow(10.0, -(k % 5)) * Vec3(n(rng), n(rng), n(rng));
    CHECK(best <= objective(other) + 1e-13);
  }
}

TEST_CASE("node profile") {
  const Vec3 d0(1.0, 2.0, 3.0), d1(-1.0, 0.5, 2.0);
  for (int nu : {2, 3, 7}) {
    CHECK(CorrectorField::node_profile(d0, d1, 0, nu).norm() == 0.0);
    CHECK((CorrectorField::node_profile(d0, d1, nu - 1, nu) - d0).norm() <= 1e-14);
    // Layer slopes are d0 + (2j - nu)/(2(nu - 1)) d1 on layer j.
    for (int j = 1; j < nu; ++j) {
      const Vec3 slope = (nu - 1.0) * (CorrectorField::node_profile(d0, d1, j, nu) - CorrectorField::node_profile(d0, d1, j - 1, nu));
      CHECK((slope - (d0 + (2.0 * j - nu) / (2.0 * (nu - 1)) * d1)).norm() <= 1e-13);
    }
  }
}

TEST_CASE("recovery of trivial fields") {
  const FilmConfig cfg{0.125, 3, 8, 8};
  const LatticeIndex lat(cfg);
  const ZeroField zero;
  for (Regime r : {Regime::thin, Regime::ultrathin}) {
    const Deformation w = build_recovery(zero, forms(), cfg, r);
    for (std::size_t n = 0; n < w.size(); ++n) {
      const Vec3 p = lat.node_position(lat.node(n));
      CHECK((w[n] - p).norm() == 0.0);
    }
    CHECK(e_atom(w, lat, spring_model()) == 0.0);
    const DisplacementGrid g = extract_displacements(w, lat);
    for (std::size_t c = 0; c < g.v.size(); ++c) {
      CHECK(g.u[c].norm() <= 1e-12);
      CHECK(g.v[c] == doctest::Approx(0.5));
    }
  }
  const PolynomialField lift({}, {}, {{0.8, 0, 0}});
  const Deformation w = build_recovery(lift, forms(), cfg, Regime::ultrathin);
  for (std::size_t n = 0; n < w.size(); ++n) {
    CHECK((w[n] - lat.node_position(lat.node(n)) - Vec3(0, 0, 0.8 * cfg.h())).norm() <= 1e-15);
  }
  CHECK(e_atom(w, lat, spring_model()) <= 1e-28);
}

TEST_CASE("recovery map matches the materialized deformation") {
  const FilmConfig cfg{0.0625, 4, 16, 16};
  const LatticeIndex lat(cfg);
  const TrigField f = generic_field();
  const RecoveryMap map(f, forms(), lat, Regime::ultrathin);
  const Deformation w = map.materialize();
  double err = 0.0;
  for (std::size_t n = 0; n < lat.cell_count(); ++n) {
    const CellIndex c = lat.cell(n);
    err = std::max(err, (map.gradient(c) - discrete_gradient(w, lat, c)).norm());
  }
  CHECK(err <= 1e-12);
  const double h = cfg.h();
  const double direct = e_total(w, lat, spring_model(), nullptr, EnergyVariant::plain) / (h * h * h * h);
  CHECK(recovery_scaled_energy(map, spring_model()) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(max_cell_distance(map) == doctest::Approx(max_cell_distance(w, lat)).epsilon(1e-10));
}

TEST_CASE("recovery energy approaches the layered limit") {
  const TrigField f = generic_field();
  const double limit = e_vk_nu(f, 3, forms(), Quadrature::unit_square(256));
  std::vector<double> gaps;
  for (int n : {16, 32}) {
    const LatticeIndex lat(FilmConfig{1.0 / n, 3, n, n});
    const RecoveryMap map(f, forms(), lat, Regime::ultrathin);
    gaps.push_back(std::abs(recovery_scaled_energy(map, spring_model()) - limit));
  }
  CHECK(gaps[1] <= 0.05 * limit);
  CHECK(gaps[1] <= gaps[0] / 3.0);
}

TEST_CASE("strain extraction") {
  const FilmConfig cfg{0.25, 3, 4, 4};
  const LatticeIndex lat(cfg);
  const double h = cfg.h();
  const Deformation id = descale([&](const Vec3& x) -> Vec3 { return Vec3(x(0), x(1), h * x(2)); }, lat);
  for (const CellMatrix& s : extract_strain(id, lat)) CHECK(s.norm() <= 1e-12);
  std::mt19937_64 rng(6);
  const Mat3 r = oracle::random_rotation(rng);
  Deformation rigid = id;
  for (std::size_t n = 0; n < id.size(); ++n) rigid[n] = r * id[n] + Vec3(1, 1, 1);
  for (const CellMatrix& s : extract_strain(rigid, lat)) CHECK(s.norm() <= 1e-11 / (h * h));

  std::vector<double> maxima;
  const TrigField f = generic_field();
  for (int n : {8, 16, 32}) {
    const LatticeIndex l(FilmConfig{1.0 / n, 3, n, n});
    const RecoveryMap map(f, forms(), l, Regime::ultrathin);
    double m = 0.0;
    for (const CellMatrix& s : extract_strain(map)) m = std::max(m, s.norm());
    maxima.push_back(m);
  }
  CHECK(maxima[2] <= 1.5 * maxima[0]);
}

TEST_CASE("limit strain") {
  const ZeroField zero;
  CHECK(limit_strain(zero, Regime::thin, 3, Vec2(0.3, 0.3), 0.2).norm() == 0.0);
  CHECK(limit_strain(zero, Regime::ultrathin, 3, Vec2(0.3, 0.3), 0.2).norm() == 0.0);

  // v = x1 x2, u = 0, nu = 2: [[G1, 0], [0, 0]] Z + G3 / 2.
  const PolynomialField saddle({}, {}, {{1.0, 1, 1}});
  const Vec2 x(0.2, 0.7);
  const Vec2 gv(x(1), x(0));
  const Mat2 g1 = 0.5 * gv * gv.transpose();
  Mat2 g2;
  g2 << 0.0, -1.0, -1.0, 0.0;
  CellMatrix zm = oracle::z_matrix();
  zm.leftCols<4>() *= -1.0;
  CellMatrix m = CellMatrix::Zero();
  for (int l = 0; l < 8; ++l) m(2, l) = (l % 2 == 0) ? 0.5 : -0.5;
  Mat3 e2 = Mat3::Zero();
  e2.topLeftCorner<2, 2>() = g2;
  const CellMatrix g3 = e2 * zm + m;
  const CellMatrix expect = in_plane(g1) + 0.5 * g3;
  CHECK((limit_strain(saddle, Regime::ultrathin, 2, x, 0.5) - expect).norm() <= 1e-14);
  // Thin regime: bending strain varies linearly through the thickness.
  CHECK((limit_strain(saddle, Regime::thin, 3, x, 0.9) - in_plane(g1 + 0.4 * g2)).norm() <= 1e-14);
}

TEST_CASE("displacement extraction") {
  const FilmConfig cfg{0.125, 4, 8, 8};
  const LatticeIndex lat(cfg);
  const double h = cfg.h();
  const Vec2 c(0.3, -0.7);
  const Deformation shifted = Deformation::from_function(
      lat, [&](const Vec3& x) -> Vec3 { return x + Vec3(h * h * c(0), h * h * c(1), 0.0); });
  const Deformation id = Deformation::identity(lat);
  const DisplacementGrid a = extract_displacements(id, lat);
  const DisplacementGrid b = extract_displacements(shifted, lat);
  for (std::size_t n = 0; n < a.u.size(); ++n) {
    CHECK((b.u[n] - a.u[n] - c).norm() <= 1e-12);
    CHECK(a.v[n] == doctest::Approx(0.5));
  }

  const TrigField f = generic_field();
  std::vector<double> hs, errs;
  for (int n : {8, 16, 32}) {
    const FilmConfig fc{1.0 / n, 3, n, n};
    const LatticeIndex l(fc);
    const Deformation w = build_recovery(f, forms(), fc, Regime::ultrathin);
    const DisplacementGrid g = extract_displacements(w, l);
    double err = 0.0;
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        const Vec2 x(i * fc.epsilon, j * fc.epsilon);
        const std::size_t id = l.column_id(i, j);
        err = std::max(err, (g.u[id] - f.u(x)).norm());
        err = std::max(err, std::abs(g.v[id] - 0.5 - f.v(x)));
      }
    }
    hs.push_back(fc.h());
    errs.push_back(err);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(oracle::loglog_slope(hs, errs) >= 0.9);
}

TEST_CASE("sweeps of the zero field") {
  const ZeroField zero;
  SweepOptions opt;
  opt.quad_m = 16;
  const std::vector<SweepLevel> levels{{0.25, 3}, {0.125, 3}};
  const auto rows = scaled_energy_gap(zero, spring_model(), forms(), levels, opt);
  for (const ReportRow& r : rows) {
    CHECK(r.gap_abs == 0.0);
    CHECK(r.e_scaled == 0.0);
    CHECK(r.max_dist == 0.0);
  }
  const BarrierReport b = energy_barrier_check(rows, 0.1);
  CHECK(b.first_inside == 0);
  CHECK_THROWS_AS(scaled_energy_gap(zero, spring_model(), forms(), {{0.125, 3}, {0.25, 3}}, opt), ConfigError);
  CHECK_THROWS_AS(level_config({0.3, 3}, 1.0, 1.0), ConfigError);
}

TEST_CASE("energy barrier along a generic sweep") {
  const TrigField f = generic_field();
  SweepOptions opt;
  opt.quad_m = 64;
  const std::vector<SweepLevel> levels{{1.0 / 8, 3}, {1.0 / 16, 3}, {1.0 / 32, 3}};
  const BarrierReport b = energy_barrier_check(f, spring_model(), forms(), levels, opt, 0.1);
  CHECK(b.max_dist[1] < b.max_dist[0]);
  CHECK(b.max_dist[2] < b.max_dist[1]);
  CHECK(b.slope == doctest::Approx(2.0).epsilon(0.15));
  const BarrierReport tight = energy_barrier_check(f, spring_model(), forms(), levels, opt, 2.02 * b.max_dist[1]);
  CHECK(tight.first_inside == 1);
}
