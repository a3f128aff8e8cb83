#pragma once

#include "thinfilm/fields.hpp"
#include "thinfilm/quadforms.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace thinfilm {

/// thin: nu -> infinity along the sequence; ultrathin: fixed layer count nu.
enum class Regime { thin, ultrathin };

struct LimitStrains {
  Mat2 g1 = Mat2::Zero();          // sym grad u + 1/2 grad v (x) grad v
  Mat2 g2 = Mat2::Zero();          // -hess v
  CellMatrix g3 = CellMatrix::Zero();  // [[G2, 0], [0, 0]] Z_- + d12 v M
  double d12v = 0.0;
};

LimitStrains strains_at(const DisplacementField& field, const Vec2& x);

/// Tensor midpoint rule on an m1 x m2 subdivision of (0, l1) x (0, l2).
class Quadrature {
 public:
  Quadrature(double l1, double l2, int m1, int m2);
  static Quadrature unit_square(int m) { return Quadrature(1.0, 1.0, m, m); }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  double weight() const { return weight_; }
  double total_weight() const;
  double l1() const { return l1_; }
  double l2() const { return l2_; }
  int m1() const { return m1_; }
  int m2() const { return m2_; }

  // Integral of a scalar density; rows of nodes are summed separately and
  // combined in order.
  double integrate(const std::function<double(const Vec2&)>& density) const;

 private:
  double l1_, l2_;
  int m1_, m2_;
  double weight_;
  std::vector<Vec2> nodes_;
};

using ForceDensity = std::function<Vec3(const Vec2&)>;

double e_vk(const DisplacementField& field, const LimitForms& forms, const Quadrature& quad,
            const ForceDensity* force = nullptr, const Mat3& rotation = Mat3::Identity());

double e_vk_nu(const DisplacementField& field, int nu, const LimitForms& forms, const Quadrature& quad,
               const ForceDensity* force = nullptr, const Mat3& rotation = Mat3::Identity());

/// Decoupled form valid under antiplane symmetry (no force term).
/// Throws NumericError when the model behind the forms is not antiplane symmetric.
double e_vk_nu_decoupled(const DisplacementField& field, int nu, const LimitForms& forms, const Quadrature& quad);

/// Density terms of the five-term finite-layer functional at one point.
struct LayeredDensity {
  double membrane = 0.0;   // 1/2 Q_rel([[G1,0],[0,0]]Z + G3 / (2(nu-1)))
  double bending = 0.0;    // nu(nu-2)/(24(nu-1)^2) Q_rel([[G2,0],[0,0]]Z)
  double surface1 = 0.0;   // 1/(nu-1) Q_surf([[G1,0],[0,0]]Z1 + d12v/(4(nu-1)) M1)
  double surface2 = 0.0;   // 1/(4(nu-1)) Q_surf([[G2,0],[0,0]]Z1)
  double total() const { return membrane + bending + surface1 + surface2; }
};
LayeredDensity e_vk_nu_density(const LimitStrains& s, int nu, const LimitForms& forms);

struct PlateDensity {
  double membrane = 0.0;  // 1/2 Q2(G1)
  double bending = 0.0;   // 1/24 Q2(G2)
  double total() const { return membrane + bending; }
};
PlateDensity e_vk_density(const LimitStrains& s, const LimitForms& forms);

/// int_S f . v R* e3, times nu/(nu-1) in the ultrathin regime.
double force_limit(const DisplacementField& field, const ForceDensity& force, Regime regime, int nu,
                   const Quadrature& quad, const Mat3& rotation = Mat3::Identity());

struct IdentityReport {
  int nu = 0;
  long long lhs_num = 0, lhs_den = 1;  // sum_k (2k - nu)^2 / (2nu - 2)^3
  long long rhs_num = 0, rhs_den = 1;  // nu (nu - 2) / (24 (nu - 1)^2)
  bool sum_identity = false;
  bool mean_zero = false;              // sum_k (2k - nu) / (nu - 1) = 0
  bool gram_identity = false;          // Z Z^T = 2 Id
  bool ok() const { return sum_identity && mean_zero && gram_identity; }
};

IdentityReport coefficient_identities(int nu);

}  // namespace thinfilm
