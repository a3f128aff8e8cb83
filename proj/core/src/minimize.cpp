#include "thinfilm/minimize.hpp"

#include <cmath>
#include <deque>
#include <random>

namespace thinfilm {

namespace {

double dot(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b) {
  CompensatedSum s;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    s += a.col(c).dot(b.col(c));
  }
  return s.value();
}

struct Pair {
  Eigen::Matrix3Xd s, y;
  double rho;
};

Eigen::Matrix3Xd lbfgs_direction(const Eigen::Matrix3Xd& g, const std::deque<Pair>& mem) {
  Eigen::Matrix3Xd q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * dot(mem[i].s, q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    q *= dot(last.s, last.y) / dot(last.y, last.y);
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * dot(mem[i].y, q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

std::string status_name(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::converged:
      return "converged";
    case MinimizeStatus::iteration_budget:
      return "iteration_budget";
    case MinimizeStatus::line_search_failure:
      return "line_search_failure";
    case MinimizeStatus::energy_floor:
      return "energy_floor";
  }
  return "unknown";
}

Eigen::Matrix3Xd e_total_gradient(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model,
                                  const ForceField* f, EnergyVariant variant) {
  const FilmConfig& cfg = lat.config();
  Eigen::Matrix3Xd g = e_atom_gradient(w, lat, model);
  if (f != nullptr && !f->empty()) {
    for (int k = 0; k < cfg.nu; ++k) {
      for (int j = 0; j <= cfg.n2; ++j) {
        for (int i = 0; i <= cfg.n1; ++i) {
          g.col(static_cast<Eigen::Index>(lat.node_id(i, j, k))) += f->column(i, j);
        }
      }
    }
  }
  if (variant == EnergyVariant::with_nonpen) {
    if (!model.nonpen) {
      throw ConfigError("non-penetration variant requires non-penetration parameters");
    }
    g += e_nonpen_gradient(w, lat, *model.nonpen);
  }
  return cfg.epsilon * cfg.epsilon * cfg.epsilon / cfg.h() * g;
}

MinimizeResult minimize_atomistic(const Deformation& w0, const LatticeIndex& lat, const AtomisticModel& model,
                                  const ForceField* f, const MinimizeOptions& opt) {
  MinimizeResult res;
  res.w = w0;
  double e = e_total(res.w, lat, model, f, opt.variant);
  if (!std::isfinite(e)) {
    throw NumericError("initial deformation has infinite energy");
  }
  res.trace.push_back(e);
  Eigen::Matrix3Xd g = e_total_gradient(res.w, lat, model, f, opt.variant);
  std::deque<Pair> mem;

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    const double gnorm = std::sqrt(dot(g, g));
    res.grad_norms.push_back(gnorm);
    if (gnorm <= opt.grad_tol) {
      res.status = MinimizeStatus::converged;
      return res;
    }
    if (opt.energy_floor >= 0.0 && e <= opt.energy_floor) {
      res.status = MinimizeStatus::energy_floor;
      return res;
    }
    Eigen::Matrix3Xd d = opt.rule == StepRule::lbfgs ? lbfgs_direction(g, mem) : Eigen::Matrix3Xd(-g);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      mem.clear();
      d = -g;
      slope = -gnorm * gnorm;
    }
    double t = 1.0;
    if (opt.rule == StepRule::steepest || mem.empty()) {
      t = std::min(1.0, lat.config().epsilon / std::sqrt(dot(d, d) / static_cast<double>(d.cols())));
    }
    constexpr double kArmijo = 1e-4;
    bool accepted = false;
    Deformation trial = res.w;
    double e_trial = e;
    for (int back = 0; back < 60; ++back) {
      trial.positions() = res.w.positions() + t * d;
      e_trial = e_total(trial, lat, model, f, opt.variant);
      if (std::isfinite(e_trial) && e_trial <= e + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.status = MinimizeStatus::line_search_failure;
      return res;
    }
    Eigen::Matrix3Xd g_new = e_total_gradient(trial, lat, model, f, opt.variant);
    if (opt.rule == StepRule::lbfgs) {
      Pair p{trial.positions() - res.w.positions(), g_new - g, 0.0};
      const double sy = dot(p.s, p.y);
      if (sy > 1e-300) {
        p.rho = 1.0 / sy;
        mem.push_back(std::move(p));
        if (static_cast<int>(mem.size()) > opt.history) mem.pop_front();
      }
    }
    res.w = std::move(trial);
    g = std::move(g_new);
    e = e_trial;
    res.trace.push_back(e);
  }
  res.grad_norms.push_back(std::sqrt(dot(g, g)));
  res.status = MinimizeStatus::iteration_budget;
  return res;
}

Deformation perturbed_identity(const LatticeIndex& lat, double amplitude, std::uint64_t seed) {
  Deformation w = Deformation::identity(lat);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = amplitude * lat.config().epsilon;
  for (std::size_t n = 0; n < w.size(); ++n) {
    for (int r = 0; r < 3; ++r) {
      w[n](r) += a * u(rng);
    }
  }
  return w;
}

}  // namespace thinfilm
