#include "thinfilm/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace thinfilm {

void AtomisticModel::validate() const {
  const double wc = cell.energy(reference_cell());
  const double ws = surface.energy(bottom_face(reference_cell()));
  if (std::abs(wc) > 1e-12) {
    throw ConfigError("cell law does not vanish at the reference cell: W_cell(Z) = " + std::to_string(wc));
  }
  if (std::abs(ws) > 1e-12) {
    throw ConfigError("surface law does not vanish at the reference face: W_surf = " + std::to_string(ws));
  }
  if (nonpen && (!(nonpen->delta > 0.0) || !(nonpen->gamma > 0.0))) {
    throw ConfigError("non-penetration radius and height must be positive");
  }
  if (delta_adm && !(*delta_adm > 0.0)) {
    throw ConfigError("admissibility radius must be positive");
  }
}

CellMatrix cell_energy_gradient(const AtomisticModel& model, const LatticeIndex& lat, const CellIndex& c,
                                const CellMatrix& g) {
  CellMatrix d = model.cell.gradient(g);
  if (lat.is_bottom_layer(c)) {
    d.leftCols<4>() += model.surface.gradient(bottom_face(g));
  }
  if (lat.is_top_layer(c)) {
    d.rightCols<4>() += model.surface.gradient(top_face(g));
  }
  return d;
}

double e_atom(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model) {
  return e_atom_with(lat, model, [&](const CellIndex& c) { return discrete_gradient(w, lat, c); });
}

Eigen::Matrix3Xd e_atom_gradient(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model) {
  Eigen::Matrix3Xd out = Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(lat.node_count()));
  const double inv_eps = 1.0 / lat.config().epsilon;
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    const CellIndex c = lat.cell(id);
    const CellMatrix d = cell_energy_gradient(model, lat, c, discrete_gradient(w, lat, c));
    const Vec3 mean = d.rowwise().mean();
    for (int l = 0; l < 8; ++l) {
      out.col(static_cast<Eigen::Index>(lat.node_id(lat.corner(c, l)))) += inv_eps * (d.col(l) - mean);
    }
  }
  return out;
}

ForceField::ForceField(const FilmConfig& cfg, std::vector<Vec3> column_forces) : cfg_(cfg), f_(std::move(column_forces)) {
  if (f_.size() != static_cast<std::size_t>(cfg.n1 + 1) * (cfg.n2 + 1)) {
    throw ConfigError("force field size does not match the lattice columns");
  }
}

Vec3 ForceField::net_force() const {
  Vec3 s = Vec3::Zero();
  for (const auto& f : f_) s += f;
  return cfg_.nu * s;
}

Eigen::Matrix<double, 3, 2> ForceField::first_moment() const {
  Eigen::Matrix<double, 3, 2> m = Eigen::Matrix<double, 3, 2>::Zero();
  for (int j = 0; j <= cfg_.n2; ++j) {
    for (int i = 0; i <= cfg_.n1; ++i) {
      const Vec3& f = column(i, j);
      m.col(0) += f * (i * cfg_.epsilon);
      m.col(1) += f * (j * cfg_.epsilon);
    }
  }
  return cfg_.nu * m;
}

double ForceField::moment_scale() const {
  double s = 0.0;
  for (const auto& f : f_) s += f.norm();
  return cfg_.nu * s * (1.0 + std::max(cfg_.length1(), cfg_.length2()));
}

ForceField make_admissible_force(const LatticeIndex& lat, const std::function<Vec3(const Vec2&)>& raw, double scale) {
  const FilmConfig& cfg = lat.config();
  std::vector<Vec3> cols(lat.column_count(), Vec3::Zero());
  Mat3 gram = Mat3::Zero();
  Eigen::Matrix3d rhs = Eigen::Matrix3d::Zero();  // rows: basis 1, x1, x2; cols: force components
  for (int j = 1; j < cfg.n2; ++j) {
    for (int i = 1; i < cfg.n1; ++i) {
      const Vec2 x(i * cfg.epsilon, j * cfg.epsilon);
      const Vec3 phi(1.0, x(0), x(1));
      const Vec3 g = raw(x);
      cols[lat.column_id(i, j)] = g;
      gram += phi * phi.transpose();
      rhs += phi * g.transpose();
    }
  }
  Eigen::FullPivLU<Mat3> lu(gram);
  if (lu.rank() < 3) {
    throw ConfigError("force support degenerate: interior columns do not span the plane");
  }
  const Mat3 coeff = lu.solve(rhs);
  for (int j = 1; j < cfg.n2; ++j) {
    for (int i = 1; i < cfg.n1; ++i) {
      const Vec3 phi(1.0, i * cfg.epsilon, j * cfg.epsilon);
      Vec3& f = cols[lat.column_id(i, j)];
      f = scale * (f - coeff.transpose() * phi);
    }
  }
  return ForceField(cfg, std::move(cols));
}

double e_body(const Deformation& w, const LatticeIndex& lat, const ForceField& f) {
  const double tol = 1e-10 * std::max(f.moment_scale(), 1e-300);
  if (f.net_force().norm() > tol || f.first_moment().norm() > tol) {
    throw ConfigError("body force has nonzero net force or first moment");
  }
  const FilmConfig& cfg = lat.config();
  CompensatedSum s;
  for (int k = 0; k < cfg.nu; ++k) {
    for (int j = 0; j <= cfg.n2; ++j) {
      for (int i = 0; i <= cfg.n1; ++i) {
        s += w[lat.node_id(i, j, k)].dot(f.column(i, j));
      }
    }
  }
  return s.value();
}

double e_nonpen_naive(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p) {
  const double inv_eps = 1.0 / lat.config().epsilon;
  const std::size_t n = w.size();
  CompensatedSum s;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double r = ((w[a] - w[b]) * inv_eps).norm();
      if (r < 2.0 * p.delta) {
        s += v_nonpen_distance(r, p);
      }
    }
  }
  return 2.0 * s.value();
}

namespace {

struct BucketKey {
  long long x, y, z;
  bool operator==(const BucketKey&) const = default;
};

struct BucketHash {
  std::size_t operator()(const BucketKey& k) const noexcept {
    const auto h = static_cast<std::size_t>(k.x * 73856093LL) ^ static_cast<std::size_t>(k.y * 19349663LL) ^
                   static_cast<std::size_t>(k.z * 83492791LL);
    return h;
  }
};

// For each node a, the ascending list of nodes b > a within scaled distance 2 delta.
template <class Visit>
void for_each_close_pair(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p, Visit visit) {
  const double inv_eps = 1.0 / lat.config().epsilon;
  const double cell = 2.0 * p.delta;
  const std::size_t n = w.size();
  std::vector<BucketKey> keys(n);
  std::unordered_map<BucketKey, std::vector<std::size_t>, BucketHash> buckets;
  for (std::size_t a = 0; a < n; ++a) {
    const Vec3 x = w[a] * inv_eps;
    keys[a] = {static_cast<long long>(std::floor(x(0) / cell)), static_cast<long long>(std::floor(x(1) / cell)),
               static_cast<long long>(std::floor(x(2) / cell))};
    buckets[keys[a]].push_back(a);
  }
  std::vector<std::size_t> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    candidates.clear();
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = buckets.find({keys[a].x + dx, keys[a].y + dy, keys[a].z + dz});
          if (it == buckets.end()) continue;
          for (std::size_t b : it->second) {
            if (b > a) candidates.push_back(b);
          }
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (std::size_t b : candidates) {
      const double r = ((w[a] - w[b]) * inv_eps).norm();
      if (r < 2.0 * p.delta) {
        visit(a, b, r);
      }
    }
  }
}

}  // namespace

double e_nonpen(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p) {
  CompensatedSum s;
  for_each_close_pair(w, lat, p, [&](std::size_t, std::size_t, double r) { s += v_nonpen_distance(r, p); });
  return 2.0 * s.value();
}

Eigen::Matrix3Xd e_nonpen_gradient(const Deformation& w, const LatticeIndex& lat, const NonPenParams& p) {
  const double inv_eps = 1.0 / lat.config().epsilon;
  Eigen::Matrix3Xd out = Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(w.size()));
  for_each_close_pair(w, lat, p, [&](std::size_t a, std::size_t b, double r) {
    const double slope = v_nonpen_slope(r, p);
    if (slope == 0.0 || r == 0.0) return;
    const Vec3 d = (w[a] - w[b]) * inv_eps;
    const Vec3 g = (2.0 * slope * inv_eps / r) * d;
    out.col(static_cast<Eigen::Index>(a)) += g;
    out.col(static_cast<Eigen::Index>(b)) -= g;
  });
  return out;
}

AdmissibilityReport in_s_delta(const Deformation& w, const LatticeIndex& lat, double delta) {
  AdmissibilityReport rep;
  for (std::size_t id = 0; id < lat.cell_count(); ++id) {
    rep.max_dist = std::max(rep.max_dist, dist_SO3Z(discrete_gradient(w, lat, lat.cell(id))));
  }
  rep.inside = rep.max_dist < delta;
  return rep;
}

double e_total(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model, const ForceField* f,
               EnergyVariant variant) {
  const FilmConfig& cfg = lat.config();
  if (variant == EnergyVariant::restricted) {
    if (!model.delta_adm) {
      throw ConfigError("restricted energy requires an admissibility radius");
    }
    if (!in_s_delta(w, lat, *model.delta_adm).inside) {
      return kOutsideAdmissible;
    }
  }
  double e = e_atom(w, lat, model);
  if (f != nullptr && !f->empty()) {
    e += e_body(w, lat, *f);
  }
  if (variant == EnergyVariant::with_nonpen) {
    if (!model.nonpen) {
      throw ConfigError("non-penetration variant requires non-penetration parameters");
    }
    e += e_nonpen(w, lat, *model.nonpen);
  }
  return cfg.epsilon * cfg.epsilon * cfg.epsilon / cfg.h() * e;
}

}  // namespace thinfilm
