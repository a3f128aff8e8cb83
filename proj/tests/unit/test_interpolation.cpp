#include "oracles.hpp"

#include "thinfilm/interpolation.hpp"
#include "thinfilm/recovery.hpp"

#include <doctest.h>

#include <algorithm>

#include <random>

using namespace thinfilm;

namespace {

Vec3 ref_corner(int l) { return oracle::corner(l) + Vec3::Constant(0.5); }

Vec3 ref_face_center(int face) {
  Vec3 c = Vec3::Zero();
  for (int l : cell_faces()[face]) c += ref_corner(l) / 4.0;
  return c;
}

}  // namespace

TEST_CASE("cell decomposition") {
  CHECK(cell_simplices().size() == 24);
  int per_face[6] = {0, 0, 0, 0, 0, 0};
  for (const CellSimplex& s : cell_simplices()) {
    ++per_face[s.face];
    const auto& f = cell_faces()[s.face];
    CHECK(std::find(f.begin(), f.end(), s.edge_from) != f.end());
    CHECK(std::find(f.begin(), f.end(), s.edge_to) != f.end());
    CHECK((ref_corner(s.edge_from) - ref_corner(s.edge_to)).norm() == doctest::Approx(1.0));
  }
  for (int n : per_face) CHECK(n == 4);
  // Faces are planar squares of the unit cube.
  for (int face = 0; face < 6; ++face) {
    const Vec3 c = ref_face_center(face);
    int on_boundary = 0;
    for (int r = 0; r < 3; ++r) on_boundary += (c(r) == 0.0 || c(r) == 1.0);
    CHECK(on_boundary == 1);
  }
}

TEST_CASE("interpolant values at corners, face centres and the centre") {
  std::mt19937_64 rng(1);
  for (int s = 0; s < 20; ++s) {
    const CellMatrix corners = oracle::random_cell(rng, 2.0);
    const Vec3 mean = corners.rowwise().mean();
    CHECK((interpolant_center(corners) - mean).norm() <= 1e-15 * 8);
    const CellMatrix g = corners.colwise() - mean;
    const auto grads = simplex_gradients(g);
    for (int k = 0; k < 24; ++k) {
      const CellSimplex& sx = cell_simplices()[k];
      const Vec3 centre = Vec3::Constant(0.5);
      // Affine on the simplex, equal to the mean at the cell centre.
      CHECK((grads[k] * (ref_corner(sx.edge_from) - centre) - g.col(sx.edge_from)).norm() <= 1e-13);
      CHECK((grads[k] * (ref_corner(sx.edge_to) - centre) - g.col(sx.edge_to)).norm() <= 1e-13);
      Vec3 face_mean = Vec3::Zero();
      for (int l : cell_faces()[sx.face]) face_mean += corners.col(l) / 4.0;
      CHECK((grads[k] * (ref_face_center(sx.face) - centre) + mean - face_mean).norm() <= 1e-13);
      CHECK((interpolant_face_center(corners, sx.face) - face_mean).norm() <= 1e-14);
    }
  }
}

TEST_CASE("affine maps are reproduced") {
  std::mt19937_64 rng(2);
  const Mat3 f = oracle::random_matrix(rng);
  for (const Mat3& grad : simplex_gradients(f * oracle::z_matrix())) CHECK((grad - f).norm() <= 1e-13);
  const Mat3 r = oracle::random_rotation(rng);
  const CellSandwich s = cell_sandwich(r * oracle::z_matrix());
  CHECK(s.cell_dist2 <= 1e-26);
  CHECK(s.simplex_mean2 <= 1e-26);
}

TEST_CASE("squared distance to SO(3)") {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 100; ++s) {
    const Mat3 f = oracle::random_matrix(rng, 1.5);
    const double d = dist_SO3(f);
    CHECK(dist2_SO3(f) == doctest::Approx(d * d).epsilon(1e-9).scale(1e-12));
  }
  CHECK(dist2_SO3(-Mat3::Identity()) == doctest::Approx(4.0));
}

TEST_CASE("sandwich entries scale quadratically") {
  std::mt19937_64 rng(4);
  const CellMatrix p = oracle::centred(oracle::random_cell(rng));
  std::vector<double> ts, cell, simplex;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const CellSandwich s = cell_sandwich(oracle::z_matrix() + t * p);
    ts.push_back(t);
    cell.push_back(s.cell_dist2);
    simplex.push_back(s.simplex_mean2);
    CHECK(s.simplex_mean2 >= s.cell_dist2 * 0.1);
    CHECK(s.simplex_mean2 <= s.cell_dist2 * 100.0);
  }
  CHECK(oracle::loglog_slope(ts, cell) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(oracle::loglog_slope(ts, simplex) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(simplex[0] / cell[0] == doctest::Approx(simplex[2] / cell[2]).epsilon(0.5));
}

TEST_CASE("rigidity integral") {
  const FilmConfig cfg{0.125, 3, 8, 8};
  const LatticeIndex lat(cfg);
  const RigidityReport id = interpolate_and_rigidity(Deformation::identity(lat), lat);
  CHECK(id.integral == 0.0);
  CHECK(id.cells.size() == lat.cell_count());
  for (const CellSandwich& s : id.cells) {
    CHECK(s.cell_dist2 == 0.0);
    CHECK(s.simplex_mean2 == 0.0);
  }

  AtomisticModel m;
  m.cell.kind = BulkKind::mass_spring;
  m.surface.kind = SurfaceKind::mass_spring;
  const LimitForms forms = LimitForms::assemble(m, HessianMethod::analytic);
  const TrigField f({}, {}, {{1.0, 1, 1, false, false}});
  const RecoveryMap map(f, forms, lat, Regime::ultrathin);
  const RigidityReport rep = interpolate_and_rigidity(map.materialize(), lat, false);
  CHECK(rep.cells.empty());
  CHECK(rep.integral > 0.0);
  CHECK(rigidity_integral(map) == doctest::Approx(rep.integral).epsilon(1e-8));
}
