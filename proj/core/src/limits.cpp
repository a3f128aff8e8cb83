#include "thinfilm/limits.hpp"

#include "thinfilm/lattice.hpp"
#include "thinfilm/parallel.hpp"

#include <boost/rational.hpp>

namespace thinfilm {

LimitStrains strains_at(const DisplacementField& field, const Vec2& x) {
  LimitStrains s;
  const Mat2 du = field.grad_u(x);
  const Vec2 dv = field.grad_v(x);
  const Mat2 d2v = field.hess_v(x);
  s.g1 = 0.5 * (du + du.transpose()) + 0.5 * dv * dv.transpose();
  s.g2 = -d2v;
  s.d12v = d2v(0, 1);
  s.g3 = embed_in_plane(s.g2) * reference_cell_minus() + s.d12v * bilinear_mode();
  return s;
}

Quadrature::Quadrature(double l1, double l2, int m1, int m2) : l1_(l1), l2_(l2), m1_(m1), m2_(m2) {
  if (m1 < 1 || m2 < 1 || !(l1 > 0.0) || !(l2 > 0.0)) {
    throw ConfigError("quadrature needs a positive refinement and domain");
  }
  const double dx = l1 / m1;
  const double dy = l2 / m2;
  weight_ = dx * dy;
  nodes_.reserve(static_cast<std::size_t>(m1) * m2);
  for (int j = 0; j < m2; ++j) {
    for (int i = 0; i < m1; ++i) {
      nodes_.emplace_back((i + 0.5) * dx, (j + 0.5) * dy);
    }
  }
}

double Quadrature::total_weight() const {
  CompensatedSum s;
  for (std::size_t k = 0; k < nodes_.size(); ++k) s += weight_;
  return s.value();
}

double Quadrature::integrate(const std::function<double(const Vec2&)>& density) const {
  const std::size_t rows = static_cast<std::size_t>(m2_);
  const double sum = ordered_block_sum(rows, [&](std::size_t j) {
    CompensatedSum s;
    for (int i = 0; i < m1_; ++i) {
      s += density(nodes_[j * static_cast<std::size_t>(m1_) + static_cast<std::size_t>(i)]);
    }
    return s.value();
  });
  return weight_ * sum;
}

PlateDensity e_vk_density(const LimitStrains& s, const LimitForms& forms) {
  return {0.5 * q2(forms.rel, s.g1), q2(forms.rel, s.g2) / 24.0};
}

LayeredDensity e_vk_nu_density(const LimitStrains& s, int nu, const LimitForms& forms) {
  const double n1 = nu - 1.0;
  const CellMatrix& z = reference_cell();
  const FaceMatrix z1 = bottom_face(z);
  const FaceMatrix m1 = bottom_face(bilinear_mode());
  const Mat2 sym_g1 = 0.5 * (s.g1 + s.g1.transpose());
  LayeredDensity d;
  d.membrane = 0.5 * forms.rel.q_rel(embed_in_plane(sym_g1) * z + s.g3 / (2.0 * n1));
  d.bending = nu * (nu - 2.0) / (24.0 * n1 * n1) * forms.rel.q_rel(embed_in_plane(s.g2) * z);
  d.surface1 = forms.surf.eval(embed_in_plane(sym_g1) * z1 + (s.d12v / (4.0 * n1)) * m1) / n1;
  d.surface2 = forms.surf.eval(embed_in_plane(s.g2) * z1) / (4.0 * n1);
  return d;
}

namespace {

double force_density(const DisplacementField& field, const ForceDensity& force, const Mat3& rotation, const Vec2& x) {
  return force(x).dot(field.v(x) * rotation.col(2));
}

}  // namespace

double e_vk(const DisplacementField& field, const LimitForms& forms, const Quadrature& quad, const ForceDensity* force,
            const Mat3& rotation) {
  return quad.integrate([&](const Vec2& x) {
    double d = e_vk_density(strains_at(field, x), forms).total();
    if (force != nullptr) d += force_density(field, *force, rotation, x);
    return d;
  });
}

double e_vk_nu(const DisplacementField& field, int nu, const LimitForms& forms, const Quadrature& quad,
               const ForceDensity* force, const Mat3& rotation) {
  if (nu < 2) {
    throw ConfigError("finite-layer functional needs nu >= 2");
  }
  const double factor = nu / (nu - 1.0);
  return quad.integrate([&](const Vec2& x) {
    double d = e_vk_nu_density(strains_at(field, x), nu, forms).total();
    if (force != nullptr) d += factor * force_density(field, *force, rotation, x);
    return d;
  });
}

double e_vk_nu_decoupled(const DisplacementField& field, int nu, const LimitForms& forms, const Quadrature& quad) {
  if (nu < 2) {
    throw ConfigError("finite-layer functional needs nu >= 2");
  }
  if (!forms.antiplane_symmetric) {
    throw NumericError("decoupled functional requires an antiplane symmetric model");
  }
  const double n1 = nu - 1.0;
  const double q_m1 = forms.surf.eval(bottom_face(bilinear_mode()));
  return quad.integrate([&](const Vec2& x) {
    const LimitStrains s = strains_at(field, x);
    const double q2_g2 = q2(forms.rel, s.g2);
    return 0.5 * q2(forms.rel, s.g1) + q2_g2 / 24.0 +
           (q2_surf(forms.surf, s.g1) + 0.25 * q2_surf(forms.surf, s.g2)) / n1 +
           (forms.rel.q_rel(s.g3) - q2_g2 / 3.0) / (8.0 * n1 * n1) + s.d12v * s.d12v * q_m1 / (16.0 * n1 * n1 * n1);
  });
}

double force_limit(const DisplacementField& field, const ForceDensity& force, Regime regime, int nu,
                   const Quadrature& quad, const Mat3& rotation) {
  const double factor = regime == Regime::thin ? 1.0 : nu / (nu - 1.0);
  return factor * quad.integrate([&](const Vec2& x) { return force_density(field, force, rotation, x); });
}

IdentityReport coefficient_identities(int nu) {
  if (nu < 2) {
    throw ConfigError("identities need nu >= 2");
  }
  using Q = boost::rational<long long>;
  IdentityReport rep;
  rep.nu = nu;
  const long long n = nu;
  const long long cube = (2 * n - 2) * (2 * n - 2) * (2 * n - 2);
  Q lhs(0);
  Q mean(0);
  for (long long k = 1; k <= n - 1; ++k) {
    lhs += Q((2 * k - n) * (2 * k - n), cube);
    mean += Q(2 * k - n, n - 1);
  }
  const Q rhs(n * (n - 2), 24 * (n - 1) * (n - 1));
  rep.lhs_num = lhs.numerator();
  rep.lhs_den = lhs.denominator();
  rep.rhs_num = rhs.numerator();
  rep.rhs_den = rhs.denominator();
  rep.sum_identity = lhs == rhs;
  rep.mean_zero = mean == Q(0);
  rep.gram_identity = true;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Q s(0);
      for (const auto& off : kCornerOffsets) {
        s += (Q(off[a]) - Q(1, 2)) * (Q(off[b]) - Q(1, 2));
      }
      rep.gram_identity = rep.gram_identity && s == Q(a == b ? 2 : 0);
    }
  }
  return rep;
}

}  // namespace thinfilm
