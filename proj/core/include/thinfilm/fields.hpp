#pragma once

#include "thinfilm/types.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace thinfilm {

/// In-plane displacement u: S -> R^2 and out-of-plane displacement v: S -> R.
class DisplacementField {
 public:
  virtual ~DisplacementField() = default;

  virtual Vec2 u(const Vec2& x) const = 0;
  virtual Mat2 grad_u(const Vec2& x) const = 0;  // (grad u)_{ab} = d u_a / d x_b
  virtual double v(const Vec2& x) const = 0;
  virtual Vec2 grad_v(const Vec2& x) const = 0;
  virtual Mat2 hess_v(const Vec2& x) const = 0;
  virtual std::string describe() const = 0;
};

class ZeroField final : public DisplacementField {
 public:
  Vec2 u(const Vec2&) const override { return Vec2::Zero(); }
  Mat2 grad_u(const Vec2&) const override { return Mat2::Zero(); }
  double v(const Vec2&) const override { return 0.0; }
  Vec2 grad_v(const Vec2&) const override { return Vec2::Zero(); }
  Mat2 hess_v(const Vec2&) const override { return Mat2::Zero(); }
  std::string describe() const override { return "zero"; }
};

/// Sum of monomials c x1^a x2^b.
struct Monomial {
  double c = 0.0;
  int a = 0;
  int b = 0;
};

class PolynomialField final : public DisplacementField {
 public:
  PolynomialField(std::vector<Monomial> u1, std::vector<Monomial> u2, std::vector<Monomial> v);

  Vec2 u(const Vec2& x) const override;
  Mat2 grad_u(const Vec2& x) const override;
  double v(const Vec2& x) const override;
  Vec2 grad_v(const Vec2& x) const override;
  Mat2 hess_v(const Vec2& x) const override;
  std::string describe() const override { return "polynomial"; }

 private:
  std::vector<Monomial> u1_, u2_, v_;
};

/// Sum of separable terms c f1(pi k1 x1) f2(pi k2 x2) with f in {sin, cos}.
struct TrigTerm {
  double c = 0.0;
  double k1 = 1.0;
  double k2 = 1.0;
  bool cos1 = false;
  bool cos2 = false;
};

class TrigField final : public DisplacementField {
 public:
  TrigField(std::vector<TrigTerm> u1, std::vector<TrigTerm> u2, std::vector<TrigTerm> v);

  Vec2 u(const Vec2& x) const override;
  Mat2 grad_u(const Vec2& x) const override;
  double v(const Vec2& x) const override;
  Vec2 grad_v(const Vec2& x) const override;
  Mat2 hess_v(const Vec2& x) const override;
  std::string describe() const override { return "trig"; }

 private:
  std::vector<TrigTerm> u1_, u2_, v_;
};

/// Values on a uniform (n1+1) x (n2+1) grid over (0, l1) x (0, l2).
/// Derivatives by central differences (one-sided on the boundary ring),
/// second derivatives by repeated first differences; bilinear in between.
/// Points outside the rectangle are reflected back across its edges.
class SampledField final : public DisplacementField {
 public:
  SampledField(int n1, int n2, double l1, double l2, std::vector<Vec2> u, std::vector<double> v);

  Vec2 u(const Vec2& x) const override;
  Mat2 grad_u(const Vec2& x) const override;
  double v(const Vec2& x) const override;
  Vec2 grad_v(const Vec2& x) const override;
  Mat2 hess_v(const Vec2& x) const override;
  std::string describe() const override { return "sampled"; }

 private:
  struct Node {
    Vec2 u;
    Mat2 du;
    double v;
    Vec2 dv;
    Mat2 d2v;
  };
  template <class Get>
  auto interpolate(const Vec2& x, Get get) const;

  int n1_, n2_;
  double l1_, l2_;
  std::vector<Node> nodes_;
};

/// u = 0, v = sin(pi x1) sin(pi x2).
std::shared_ptr<DisplacementField> canonical_field();

/// Random trig field with a few low modes in u and v, amplitudes in [-amp, amp].
std::shared_ptr<DisplacementField> random_trig_field(std::mt19937_64& rng, double amplitude = 1.0, int terms = 3);

/// Samples a field on the grid used by SampledField.
std::shared_ptr<SampledField> sample_field(const DisplacementField& f, int n1, int n2, double l1, double l2);

}  // namespace thinfilm
