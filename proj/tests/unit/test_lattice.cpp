#include "oracles.hpp"

#include "thinfilm/lattice.hpp"

#include <doctest.h>

#include <random>

using namespace thinfilm;

TEST_CASE("lattice counts") {
  const LatticeIndex one(FilmConfig{1.0, 2, 1, 1});
  CHECK(one.node_count() == 8);
  CHECK(one.cell_count() == 1);

  const LatticeIndex lat(FilmConfig{0.5, 3, 4, 4});
  CHECK(lat.node_count() == 75);
  CHECK(lat.cell_count() == 32);
  CHECK(lat.config().h() == doctest::Approx(1.0));

  CHECK_THROWS_AS(build_lattice(FilmConfig{1.0, 1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(build_lattice(FilmConfig{0.0, 2, 1, 1}), ConfigError);
  CHECK_THROWS_AS(build_lattice(FilmConfig{1.0, 2, 0, 1}), ConfigError);
}

TEST_CASE("node and cell ids round trip") {
  const LatticeIndex lat(FilmConfig{0.25, 4, 3, 5});
  for (std::size_t id = 0; id < lat.node_count(); ++id) {
    CHECK(lat.node_id(lat.node(id)) == id);
  }
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    CHECK(lat.cell_id(lat.cell(id)) == id);
  }
  const CellIndex c{1, 2, 1};
  CHECK(lat.is_interior_layer(c));
  CHECK(lat.is_bottom_layer(CellIndex{0, 0, 0}));
  CHECK(lat.is_top_layer(CellIndex{0, 0, 2}));
}

TEST_CASE("reference matrices") {
  const CellMatrix z = oracle::z_matrix();
  CHECK(reference_cell() == z);
  CHECK(z * z.transpose() == 2.0 * Mat3::Identity());
  CHECK(reference_cell().rowwise().sum().isZero(0.0));

  CellMatrix zm = z;
  zm.leftCols<4>() *= -1.0;
  CHECK(reference_cell_minus() == zm);

  CellMatrix m = CellMatrix::Zero();
  for (int l = 0; l < 8; ++l) m(2, l) = (l % 2 == 0) ? 0.5 : -0.5;
  CHECK(bilinear_mode() == m);
  CHECK(affine_part(m).isZero(0.0));
  CHECK(affine_part(z) == Mat3::Identity());

  std::mt19937_64 rng(3);
  for (int s = 0; s < 20; ++s) {
    const Mat3 f = oracle::random_matrix(rng);
    CHECK((affine_part(f * z) - f).norm() <= 1e-14 * (1.0 + f.norm()));
  }
}

TEST_CASE("discrete gradient of affine maps") {
  const LatticeIndex lat(FilmConfig{0.25, 3, 2, 2});
  std::mt19937_64 rng(11);
  const Mat3 r = oracle::random_rotation(rng);
  const Vec3 c(0.3, -1.2, 2.0);
  Mat3 stretch = Mat3::Identity();
  stretch(0, 0) = 1.1;

  const Deformation id = Deformation::identity(lat);
  const Deformation rigid = Deformation::from_function(lat, [&](const Vec3& x) -> Vec3 { return r * x + c; });
  const Deformation stretched = Deformation::from_function(lat, [&](const Vec3& x) -> Vec3 { return stretch * x; });

  for (std::size_t n = 0; n < lat.cell_count(); ++n) {
    const CellIndex cell = lat.cell(n);
    CHECK((discrete_gradient(id, lat, cell) - oracle::z_matrix()).norm() <= 1e-14);
    CHECK((discrete_gradient(rigid, lat, cell) - r * oracle::z_matrix()).norm() <= 1e-13);
    CHECK((discrete_gradient(stretched, lat, cell) - stretch * oracle::z_matrix()).norm() <= 1e-14);
  }
}

TEST_CASE("discrete gradient invariants") {
  const LatticeIndex lat(FilmConfig{0.5, 3, 2, 2});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Deformation w(lat);
  for (std::size_t n = 0; n < w.size(); ++n) w[n] = Vec3(u(rng), u(rng), u(rng));
  const Mat3 r = oracle::random_rotation(rng);
  const Vec3 c(1.0, 2.0, -3.0);
  Deformation shifted = w, rotated = w;
  for (std::size_t n = 0; n < w.size(); ++n) {
    shifted[n] += c;
    rotated[n] = r * w[n];
  }
  for (std::size_t n = 0; n < lat.cell_count(); ++n) {
    const CellIndex cell = lat.cell(n);
    const CellMatrix g = discrete_gradient(w, lat, cell);
    CHECK(g.rowwise().sum().norm() <= 1e-14 * g.norm());
    CHECK((discrete_gradient(shifted, lat, cell) - g).norm() <= 1e-14 * (1.0 + g.norm()) * 10);
    CHECK((discrete_gradient(rotated, lat, cell) - r * g).norm() <= 1e-13 * g.norm());
  }
}

TEST_CASE("distance to the rotation well") {
  const CellMatrix z = oracle::z_matrix();
  std::mt19937_64 rng(17);
  CHECK(dist_SO3Z(z) <= 1e-14);
  for (int s = 0; s < 50; ++s) {
    const Mat3 r = oracle::random_rotation(rng);
    CHECK(dist_SO3Z(r * z) <= 1e-13);
  }
  // Positive diagonal stretch: the nearest rotation is the identity.
  const Mat3 d = Vec3(1.2, 0.9, 1.05).asDiagonal();
  CHECK(dist_SO3Z(d * z) == doctest::Approx(std::sqrt(2.0 * (0.04 + 0.01 + 0.0025))).epsilon(1e-13));

  // Brute force over sampled rotations never beats the computed distance, and
  // the computed value is the known 2 sqrt 2.
  const double computed = dist_SO3Z(-z);
  double best = 1e300;
  for (int s = 0; s < 20000; ++s) {
    best = std::min(best, (-z - oracle::random_rotation(rng) * z).norm());
  }
  for (int a = 0; a < 3; ++a) {
    const Mat3 half_turn = Eigen::AngleAxisd(M_PI, Vec3::Unit(a)).toRotationMatrix();
    best = std::min(best, (-z - half_turn * z).norm());
  }
  CHECK(computed <= best + 1e-12);
  CHECK(best - computed <= 1e-12);
  CHECK(computed == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("zero distance iff affine rotation") {
  std::mt19937_64 rng(23);
  const CellMatrix z = oracle::z_matrix();
  for (int s = 0; s < 50; ++s) {
    const Mat3 r = oracle::random_rotation(rng);
    const CellMatrix g = r * z;
    CHECK(dist_SO3Z(g) <= 1e-13);
    CHECK((affine_part(g) - r).norm() <= 1e-14);
    const CellMatrix off = g + 1e-3 * oracle::centred(oracle::random_cell(rng));
    CHECK(dist_SO3Z(off) > 0.0);
    CHECK((off - affine_part(off) * z).norm() + dist_SO3(affine_part(off)) > 1e-6);
  }
}

TEST_CASE("rescaled gradient") {
  const LatticeIndex lat(FilmConfig{0.25, 3, 2, 2});
  const double h = lat.config().h();
  const auto rescaled_identity = [&](const Vec3& x) -> Vec3 { return Vec3(x(0), x(1), h * x(2)); };
  std::mt19937_64 rng(2);
  const Mat3 a = oracle::random_matrix(rng);
  const auto y = [&](const Vec3& x) -> Vec3 { return Vec3(std::sin(x(0)) + x(2), x(1) * x(2), x(0) * x(1)) + a * x; };

  const Deformation w_id = descale(rescaled_identity, lat);
  const Deformation w_y = descale(y, lat);
  for (std::size_t n = 0; n < lat.cell_count(); ++n) {
    const CellIndex c = lat.cell(n);
    CHECK((rescaled_gradient(rescaled_identity, c, lat) - oracle::z_matrix()).norm() <= 1e-14);
    CHECK(rescaled_gradient(y, c, lat) == discrete_gradient(w_y, lat, c));
    CHECK((discrete_gradient(w_id, lat, c) - oracle::z_matrix()).norm() <= 1e-14);

    // Direct evaluation of (1/eps)(y(x_l) - mean) on rescaled corner points.
    CellMatrix expect;
    Vec3 mean = Vec3::Zero();
    for (int l = 0; l < 8; ++l) {
      const Vec3 p = lat.cell_midpoint(c) + lat.config().epsilon * oracle::corner(l);
      expect.col(l) = y(Vec3(p(0), p(1), p(2) / h));
      mean += expect.col(l) / 8.0;
    }
    expect = (expect.colwise() - mean) / lat.config().epsilon;
    CHECK((rescaled_gradient(y, c, lat) - expect).norm() <= 1e-12 * expect.norm());
  }
}
