#include "thinfilm/fields.hpp"

#include <cmath>
#include <numbers>

namespace thinfilm {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double poly_eval(const std::vector<Monomial>& p, const Vec2& x, int d1, int d2) {
  double s = 0.0;
  for (const auto& m : p) {
    if (m.a < d1 || m.b < d2) continue;
    double c = m.c;
    for (int k = 0; k < d1; ++k) c *= m.a - k;
    for (int k = 0; k < d2; ++k) c *= m.b - k;
    s += c * ipow(x(0), m.a - d1) * ipow(x(1), m.b - d2);
  }
  return s;
}

// d-th derivative of sin(w t) or cos(w t) in t.
double trig_factor(bool is_cos, double w, double t, int d) {
  const double phase = w * t + (is_cos ? 0.5 * std::numbers::pi : 0.0) + 0.5 * std::numbers::pi * d;
  return ipow(w, d) * std::sin(phase);
}

double trig_eval(const std::vector<TrigTerm>& terms, const Vec2& x, int d1, int d2) {
  double s = 0.0;
  for (const auto& t : terms) {
    const double w1 = std::numbers::pi * t.k1;
    const double w2 = std::numbers::pi * t.k2;
    s += t.c * trig_factor(t.cos1, w1, x(0), d1) * trig_factor(t.cos2, w2, x(1), d2);
  }
  return s;
}

double reflect(double x, double l) {
  if (x < 0.0) return std::min(-x, l);
  if (x > l) return std::max(2.0 * l - x, 0.0);
  return x;
}

}  // namespace

PolynomialField::PolynomialField(std::vector<Monomial> u1, std::vector<Monomial> u2, std::vector<Monomial> v)
    : u1_(std::move(u1)), u2_(std::move(u2)), v_(std::move(v)) {}

Vec2 PolynomialField::u(const Vec2& x) const { return {poly_eval(u1_, x, 0, 0), poly_eval(u2_, x, 0, 0)}; }

Mat2 PolynomialField::grad_u(const Vec2& x) const {
  Mat2 g;
  g << poly_eval(u1_, x, 1, 0), poly_eval(u1_, x, 0, 1), poly_eval(u2_, x, 1, 0), poly_eval(u2_, x, 0, 1);
  return g;
}

double PolynomialField::v(const Vec2& x) const { return poly_eval(v_, x, 0, 0); }

Vec2 PolynomialField::grad_v(const Vec2& x) const { return {poly_eval(v_, x, 1, 0), poly_eval(v_, x, 0, 1)}; }

Mat2 PolynomialField::hess_v(const Vec2& x) const {
  const double mixed = poly_eval(v_, x, 1, 1);
  Mat2 h;
  h << poly_eval(v_, x, 2, 0), mixed, mixed, poly_eval(v_, x, 0, 2);
  return h;
}

TrigField::TrigField(std::vector<TrigTerm> u1, std::vector<TrigTerm> u2, std::vector<TrigTerm> v)
    : u1_(std::move(u1)), u2_(std::move(u2)), v_(std::move(v)) {}

Vec2 TrigField::u(const Vec2& x) const { return {trig_eval(u1_, x, 0, 0), trig_eval(u2_, x, 0, 0)}; }

Mat2 TrigField::grad_u(const Vec2& x) const {
  Mat2 g;
  g << trig_eval(u1_, x, 1, 0), trig_eval(u1_, x, 0, 1), trig_eval(u2_, x, 1, 0), trig_eval(u2_, x, 0, 1);
  return g;
}

double TrigField::v(const Vec2& x) const { return trig_eval(v_, x, 0, 0); }

Vec2 TrigField::grad_v(const Vec2& x) const { return {trig_eval(v_, x, 1, 0), trig_eval(v_, x, 0, 1)}; }

Mat2 TrigField::hess_v(const Vec2& x) const {
  const double mixed = trig_eval(v_, x, 1, 1);
  Mat2 h;
  h << trig_eval(v_, x, 2, 0), mixed, mixed, trig_eval(v_, x, 0, 2);
  return h;
}

SampledField::SampledField(int n1, int n2, double l1, double l2, std::vector<Vec2> u, std::vector<double> v)
    : n1_(n1), n2_(n2), l1_(l1), l2_(l2) {
  const std::size_t count = static_cast<std::size_t>(n1 + 1) * (n2 + 1);
  if (n1 < 2 || n2 < 2 || u.size() != count || v.size() != count) {
    throw ConfigError("sampled field needs at least a 3 x 3 grid with matching value arrays");
  }
  const double dx = l1 / n1;
  const double dy = l2 / n2;
  auto id = [&](int i, int j) { return static_cast<std::size_t>(i) + static_cast<std::size_t>(n1 + 1) * j; };
  // First differences of an arbitrary nodal quantity along each axis.
  auto diff = [&](auto get, int i, int j, int axis) {
    if (axis == 0) {
      if (i == 0) return (get(id(1, j)) - get(id(0, j))) / dx;
      if (i == n1) return (get(id(n1, j)) - get(id(n1 - 1, j))) / dx;
      return (get(id(i + 1, j)) - get(id(i - 1, j))) / (2.0 * dx);
    }
    if (j == 0) return (get(id(i, 1)) - get(id(i, 0))) / dy;
    if (j == n2) return (get(id(i, n2)) - get(id(i, n2 - 1))) / dy;
    return (get(id(i, j + 1)) - get(id(i, j - 1))) / (2.0 * dy);
  };
  nodes_.resize(count);
  std::vector<Vec2> dv(count);
  for (int j = 0; j <= n2; ++j) {
    for (int i = 0; i <= n1; ++i) {
      Node& nd = nodes_[id(i, j)];
      nd.u = u[id(i, j)];
      nd.v = v[id(i, j)];
      for (int a = 0; a < 2; ++a) {
        nd.du(a, 0) = diff([&](std::size_t k) { return u[k](a); }, i, j, 0);
        nd.du(a, 1) = diff([&](std::size_t k) { return u[k](a); }, i, j, 1);
      }
      nd.dv = {diff([&](std::size_t k) { return v[k]; }, i, j, 0), diff([&](std::size_t k) { return v[k]; }, i, j, 1)};
      dv[id(i, j)] = nd.dv;
    }
  }
  for (int j = 0; j <= n2; ++j) {
    for (int i = 0; i <= n1; ++i) {
      Node& nd = nodes_[id(i, j)];
      for (int a = 0; a < 2; ++a) {
        nd.d2v(a, 0) = diff([&](std::size_t k) { return dv[k](a); }, i, j, 0);
        nd.d2v(a, 1) = diff([&](std::size_t k) { return dv[k](a); }, i, j, 1);
      }
      const double mixed = 0.5 * (nd.d2v(0, 1) + nd.d2v(1, 0));
      nd.d2v(0, 1) = mixed;
      nd.d2v(1, 0) = mixed;
    }
  }
}

template <class Get>
auto SampledField::interpolate(const Vec2& x, Get get) const {
  const double sx = reflect(x(0), l1_) / l1_ * n1_;
  const double sy = reflect(x(1), l2_) / l2_ * n2_;
  const int i = std::min(static_cast<int>(std::floor(sx)), n1_ - 1);
  const int j = std::min(static_cast<int>(std::floor(sy)), n2_ - 1);
  const double tx = sx - i;
  const double ty = sy - j;
  auto at = [&](int a, int b) { return get(nodes_[static_cast<std::size_t>(a) + static_cast<std::size_t>(n1_ + 1) * b]); };
  using T = decltype(at(0, 0));
  const T lo = (1.0 - tx) * at(i, j) + tx * at(i + 1, j);
  const T hi = (1.0 - tx) * at(i, j + 1) + tx * at(i + 1, j + 1);
  return T((1.0 - ty) * lo + ty * hi);
}

Vec2 SampledField::u(const Vec2& x) const { return interpolate(x, [](const Node& n) { return n.u; }); }
Mat2 SampledField::grad_u(const Vec2& x) const { return interpolate(x, [](const Node& n) { return n.du; }); }
double SampledField::v(const Vec2& x) const { return interpolate(x, [](const Node& n) { return n.v; }); }
Vec2 SampledField::grad_v(const Vec2& x) const { return interpolate(x, [](const Node& n) { return n.dv; }); }
Mat2 SampledField::hess_v(const Vec2& x) const { return interpolate(x, [](const Node& n) { return n.d2v; }); }

std::shared_ptr<DisplacementField> canonical_field() {
  return std::make_shared<TrigField>(std::vector<TrigTerm>{}, std::vector<TrigTerm>{},
                                     std::vector<TrigTerm>{{1.0, 1.0, 1.0, false, false}});
}

std::shared_ptr<DisplacementField> random_trig_field(std::mt19937_64& rng, double amplitude, int terms) {
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_int_distribution<int> mode(1, 3);
  std::bernoulli_distribution coin(0.5);
  auto make = [&]() {
    std::vector<TrigTerm> out;
    for (int t = 0; t < terms; ++t) {
      out.push_back({amp(rng), static_cast<double>(mode(rng)), static_cast<double>(mode(rng)), coin(rng), coin(rng)});
    }
    return out;
  };
  auto u1 = make();
  auto u2 = make();
  auto v = make();
  return std::make_shared<TrigField>(std::move(u1), std::move(u2), std::move(v));
}

std::shared_ptr<SampledField> sample_field(const DisplacementField& f, int n1, int n2, double l1, double l2) {
  std::vector<Vec2> u;
  std::vector<double> v;
  for (int j = 0; j <= n2; ++j) {
    for (int i = 0; i <= n1; ++i) {
      const Vec2 x(i * l1 / n1, j * l2 / n2);
      u.push_back(f.u(x));
      v.push_back(f.v(x));
    }
  }
  return std::make_shared<SampledField>(n1, n2, l1, l2, std::move(u), std::move(v));
}

}  // namespace thinfilm
