#include "oracles.hpp"

#include "thinfilm/limits.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace thinfilm;

namespace {

LimitForms spring_forms() {
  AtomisticModel m;
  m.cell.kind = BulkKind::mass_spring;
  m.cell.spring = {1.0, 1.0};
  m.surface.kind = SurfaceKind::mass_spring;
  m.surface.spring = {1.0, 1.0};
  return LimitForms::assemble(m, HessianMethod::analytic);
}

TrigField generic_field() {
  return TrigField({{0.3, 1, 2, false, true}}, {{-0.2, 2, 1, true, false}},
                   {{1.0, 1, 1, false, false}, {0.4, 2, 3, true, false}});
}

// Reduced fraction p/q.
std::pair<long long, long long> reduce(long long p, long long q) {
  const long long g = std::gcd(p, q);
  return {p / g, q / g};
}

}  // namespace

TEST_CASE("limit strains") {
  const ZeroField zero;
  const LimitStrains s0 = strains_at(zero, Vec2(0.3, 0.4));
  CHECK(s0.g1.isZero(0.0));
  CHECK(s0.g2.isZero(0.0));
  CHECK(s0.g3.isZero(0.0));

  const PolynomialField saddle({}, {}, {{1.0, 1, 1}});
  const LimitStrains s = strains_at(saddle, Vec2(0.2, 0.7));
  Mat2 g2;
  g2 << 0.0, -1.0, -1.0, 0.0;
  CHECK((s.g2 - g2).norm() <= 1e-14);
  CHECK(s.d12v == doctest::Approx(1.0));
  CellMatrix zm = oracle::z_matrix();
  zm.leftCols<4>() *= -1.0;
  CellMatrix m = CellMatrix::Zero();
  for (int l = 0; l < 8; ++l) m(2, l) = (l % 2 == 0) ? 0.5 : -0.5;
  Mat3 e = Mat3::Zero();
  e.topLeftCorner<2, 2>() = g2;
  CHECK((s.g3 - (e * zm + m)).norm() <= 1e-14);
  // G1 = sym grad u + 1/2 grad v (x) grad v with grad v = (x2, x1).
  Mat2 g1;
  g1 << 0.49, 0.14, 0.14, 0.04;
  g1 *= 0.5;
  CHECK((s.g1 - g1).norm() <= 1e-14);

  const PolynomialField stretch({{1.0, 1, 0}}, {}, {});
  Mat2 expect;
  expect << 1.0, 0.0, 0.0, 0.0;
  CHECK((strains_at(stretch, Vec2(0.5, 0.5)).g1 - expect).norm() <= 1e-14);
}

TEST_CASE("plate energy of simple fields") {
  const LimitForms forms = spring_forms();
  const Quadrature quad = Quadrature::unit_square(32);
  const ZeroField zero;
  CHECK(e_vk(zero, forms, quad) == 0.0);
  CHECK(e_vk_nu(zero, 3, forms, quad) == 0.0);
  CHECK(e_vk_nu_decoupled(zero, 3, forms, quad) == 0.0);

  // u(x) = A x with constant sym A: density 1/2 Q2(A) on a unit square.
  const PolynomialField lin({{0.2, 1, 0}, {0.5, 0, 1}}, {{-0.1, 1, 0}, {0.3, 0, 1}}, {});
  Mat2 a;
  a << 0.2, 0.2, 0.2, 0.3;
  CHECK(e_vk(lin, forms, quad) == doctest::Approx(0.5 * q2(forms.rel, a)).epsilon(1e-12));
  CHECK(quad.total_weight() == doctest::Approx(1.0));
}

TEST_CASE("quadrature refinement") {
  const LimitForms forms = spring_forms();
  const TrigField f = generic_field();
  const double coarse = e_vk(f, forms, Quadrature::unit_square(256));
  const double fine = e_vk(f, forms, Quadrature::unit_square(512));
  CHECK(std::abs(fine - coarse) <= 1e-6 * std::abs(fine));

  // Non-periodic density: Cauchy differences shrink at second order.
  const PolynomialField p({{0.5, 2, 1}}, {{0.3, 0, 3}}, {{1.0, 3, 1}, {-0.5, 1, 2}});
  std::vector<double> values;
  for (int m : {8, 16, 32, 64}) values.push_back(e_vk_nu(p, 3, forms, Quadrature::unit_square(m)));
  const double r1 = std::abs(values[1] - values[0]) / std::abs(values[2] - values[1]);
  const double r2 = std::abs(values[2] - values[1]) / std::abs(values[3] - values[2]);
  CHECK(r1 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("layered functional structure") {
  const LimitForms forms = spring_forms();
  const TrigField f = generic_field();
  const LimitStrains s = strains_at(f, Vec2(0.3, 0.6));
  CHECK(e_vk_nu_density(s, 2, forms).bending == 0.0);
  for (int nu : {2, 3, 5, 17}) {
    const LayeredDensity d = e_vk_nu_density(s, nu, forms);
    CHECK(d.membrane >= 0.0);
    CHECK(d.bending >= 0.0);
    CHECK(d.surface1 >= 0.0);
    CHECK(d.surface2 >= 0.0);
  }
  CHECK_THROWS(e_vk_nu(f, 1, forms, Quadrature::unit_square(8)));
}

TEST_CASE("only the symmetric part of grad u enters") {
  const LimitForms forms = spring_forms();
  const Quadrature quad = Quadrature::unit_square(48);
  const TrigField f = generic_field();
  const PolynomialField rotation({{0.7, 0, 1}}, {{-0.7, 1, 0}}, {});
  struct Sum final : DisplacementField {
    const DisplacementField& a;
    const DisplacementField& b;
    Sum(const DisplacementField& x, const DisplacementField& y) : a(x), b(y) {}
    Vec2 u(const Vec2& x) const override { return a.u(x) + b.u(x); }
    Mat2 grad_u(const Vec2& x) const override { return a.grad_u(x) + b.grad_u(x); }
    double v(const Vec2& x) const override { return a.v(x) + b.v(x); }
    Vec2 grad_v(const Vec2& x) const override { return a.grad_v(x) + b.grad_v(x); }
    Mat2 hess_v(const Vec2& x) const override { return a.hess_v(x) + b.hess_v(x); }
    std::string describe() const override { return "sum"; }
  } sum(f, rotation);
  CHECK(std::abs(e_vk(sum, forms, quad) - e_vk(f, forms, quad)) <= 1e-10 * e_vk(f, forms, quad));
  CHECK(std::abs(e_vk_nu(sum, 4, forms, quad) - e_vk_nu(f, 4, forms, quad)) <= 1e-10 * e_vk_nu(f, 4, forms, quad));
}

TEST_CASE("decoupled form") {
  const LimitForms forms = spring_forms();
  const Quadrature quad = Quadrature::unit_square(32);
  const TrigField f = generic_field();
  for (int nu : {2, 3, 5, 9}) {
    const double general = e_vk_nu(f, nu, forms, quad);
    CHECK(std::abs(e_vk_nu_decoupled(f, nu, forms, quad) - general) <= 1e-8 * general);
  }
  const double plate = e_vk(f, forms, quad);
  const double far = e_vk_nu_decoupled(f, 1000000, forms, quad);
  CHECK(std::abs(far - plate) <= 10.0 * plate / 1e6);

  std::vector<double> nus, gaps;
  for (int nu = 4; nu <= 256; nu *= 2) {
    nus.push_back(nu);
    gaps.push_back(std::abs(e_vk_nu(f, nu, forms, quad) - plate));
  }
  CHECK(oracle::loglog_slope(nus, gaps) <= -0.9);
}

TEST_CASE("coefficient identities in exact arithmetic") {
  for (int nu = 2; nu <= 50; ++nu) {
    const IdentityReport r = coefficient_identities(nu);
    CHECK(r.ok());
    long long num = 0;
    const long long den = 8LL * (nu - 1) * (nu - 1) * (nu - 1);
    for (int k = 1; k < nu; ++k) num += (2LL * k - nu) * (2LL * k - nu);
    const auto lhs = reduce(num, den);
    const auto rhs = reduce(static_cast<long long>(nu) * (nu - 2), 24LL * (nu - 1) * (nu - 1));
    CHECK(lhs == rhs);
    CHECK(std::pair{r.lhs_num, r.lhs_den} == lhs);
    CHECK(std::pair{r.rhs_num, r.rhs_den} == rhs);
  }
  const IdentityReport two = coefficient_identities(2);
  CHECK(two.lhs_num == 0);
  CHECK(two.rhs_num == 0);
  const IdentityReport three = coefficient_identities(3);
  CHECK(three.lhs_num == 1);
  CHECK(three.lhs_den == 32);
  CHECK_THROWS_AS(coefficient_identities(1), ConfigError);
}

TEST_CASE("limiting force term") {
  const Quadrature quad = Quadrature::unit_square(64);
  const PolynomialField f({}, {}, {{1.0, 1, 1}});
  const ForceDensity lateral = [](const Vec2& x) { return Vec3(x(0), 1.0, 0.0); };
  CHECK(force_limit(f, lateral, Regime::thin, 2, quad) == 0.0);
  const ForceDensity vertical = [](const Vec2& x) { return Vec3(0.0, 0.0, x(0) - x(1) * x(1)); };
  const double thin = force_limit(f, vertical, Regime::thin, 2, quad);
  CHECK(thin != 0.0);
  CHECK(force_limit(f, vertical, Regime::ultrathin, 2, quad) == doctest::Approx(2.0 * thin).epsilon(1e-14));
  CHECK(force_limit(f, vertical, Regime::ultrathin, 10, quad) == doctest::Approx(10.0 / 9.0 * thin).epsilon(1e-14));
  // int x1 x2 (x1 - x2^2) over the unit square = 1/6 - 1/8.
  CHECK(thin == doctest::Approx(1.0 / 6.0 - 1.0 / 8.0).epsilon(1e-3));
}
