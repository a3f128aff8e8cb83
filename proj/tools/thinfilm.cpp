#include "thinfilm/config.hpp"
#include "thinfilm/interpolation.hpp"
#include "thinfilm/limits.hpp"
#include "thinfilm/minimize.hpp"
#include "thinfilm/quadforms.hpp"
#include "thinfilm/recovery.hpp"
#include "thinfilm/report.hpp"
#include "thinfilm/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace thinfilm;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string format = "csv";
  bool no_timing = false;
};

std::ofstream open_output(const Common& c, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());
  const fs::path path = fs::path(c.out) / (stem + "." + c.format);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return out;
}

void check_written(std::ofstream& out) {
  out.flush();
  if (!out) throw IoError("write failed");
}

RunConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  return load_config(c.config, c.seed);
}

ForceField lattice_force(const RunConfig& cfg, const LatticeIndex& lat) {
  if (!cfg.has_force) return {};
  const double h = lat.config().h();
  return make_admissible_force(lat, cfg.force_density(), h * h * h);
}

const SweepLevel& require_level(const RunConfig& cfg, int index) {
  if (cfg.levels.empty()) throw ConfigError("the config has no sweep levels");
  if (index < 0 || index >= static_cast<int>(cfg.levels.size())) {
    throw ConfigError("level index out of range");
  }
  return cfg.levels[static_cast<std::size_t>(index)];
}

int run_forms(const Common& c) {
  const RunConfig cfg = load(c);
  const LimitForms forms = LimitForms::assemble(cfg.model, HessianMethod::analytic);
  const fs::path path = fs::path(c.out) / "forms.json";
  std::error_code ec;
  fs::create_directories(c.out, ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << export_forms_json(forms) << '\n';
  check_written(out);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int run_energy(const Common& c, const std::string& deformation_path) {
  const RunConfig cfg = load(c);
  std::ifstream in(deformation_path);
  if (!in) throw IoError("cannot read deformation " + deformation_path);
  const Deformation w = read_deformation(in);
  const LatticeIndex lat(w.config());
  const ForceField f = lattice_force(cfg, lat);
  const EnergyVariant variant = cfg.model.nonpen ? EnergyVariant::with_nonpen : EnergyVariant::plain;
  const double e = e_total(w, lat, cfg.model, &f, variant);
  const double h = lat.config().h();
  const AdmissibilityReport adm = in_s_delta(w, lat, cfg.model.delta_adm.value_or(0.0));
  nlohmann::json doc{{"eps", lat.config().epsilon}, {"nu", lat.config().nu}, {"h", h},
                     {"energy", e},                {"energy_over_h4", e / (h * h * h * h)},
                     {"max_dist", adm.max_dist}};
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int run_limit(const Common& c) {
  const RunConfig cfg = load(c);
  const LimitForms forms = LimitForms::assemble(cfg.model, HessianMethod::analytic);
  const Quadrature quad(cfg.length1, cfg.length2, cfg.quad_m, cfg.quad_m);
  const ForceDensity force = cfg.force_density();
  const ForceDensity* fp = cfg.has_force ? &force : nullptr;
  std::vector<int> nus;
  for (const auto& l : cfg.levels) {
    if (std::find(nus.begin(), nus.end(), l.nu) == nus.end()) nus.push_back(l.nu);
  }
  const double evk = e_vk(*cfg.field, forms, quad, fp);
  auto out = open_output(c, "limit");
  if (c.format == "json") {
    nlohmann::json doc{{"schema", "thinfilm.limit.v1"}, {"e_vk", evk}, {"layers", nlohmann::json::array()}};
    for (int nu : nus) doc["layers"].push_back({{"nu", nu}, {"e_vk_nu", e_vk_nu(*cfg.field, nu, forms, quad, fp)}});
    out << doc.dump(2) << '\n';
  } else {
    out << "schema,nu,e_vk_nu,e_vk\n";
    for (int nu : nus) {
      out << "thinfilm.limit.v1," << nu << ',' << format_number(e_vk_nu(*cfg.field, nu, forms, quad, fp)) << ','
          << format_number(evk) << '\n';
    }
  }
  check_written(out);
  return 0;
}

int run_recover(const Common& c, int level) {
  const RunConfig cfg = load(c);
  const LimitForms forms = LimitForms::assemble(cfg.model, HessianMethod::analytic);
  const FilmConfig fc = level_config(require_level(cfg, level), cfg.length1, cfg.length2);
  const Deformation w = build_recovery(*cfg.field, forms, fc, cfg.regime);
  std::error_code ec;
  fs::create_directories(c.out, ec);
  const fs::path path = fs::path(c.out) / "recovery.txt";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_deformation(out, w);
  check_written(out);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int run_converge(const Common& c) {
  const RunConfig cfg = load(c);
  if (cfg.levels.empty()) throw ConfigError("the config has no sweep levels");
  const LimitForms forms = LimitForms::assemble(cfg.model, HessianMethod::analytic);
  SweepOptions opt = cfg.sweep_options();
  opt.timing = !c.no_timing;
  const auto rows = scaled_energy_gap(*cfg.field, cfg.model, forms, cfg.levels, opt);
  auto out = open_output(c, "converge");
  if (c.format == "json") {
    write_converge_json(out, rows);
  } else {
    write_converge_csv(out, rows);
  }
  check_written(out);
  return 0;
}

int run_strain(const Common& c) {
  const RunConfig cfg = load(c);
  if (cfg.levels.empty()) throw ConfigError("the config has no sweep levels");
  const LimitForms forms = LimitForms::assemble(cfg.model, HessianMethod::analytic);
  std::vector<StrainMomentRow> rows;
  for (const auto& l : cfg.levels) {
    rows.push_back(strain_moments(*cfg.field, forms, level_config(l, cfg.length1, cfg.length2), cfg.regime, cfg.quad_m));
  }
  auto out = open_output(c, "strain");
  if (c.format == "json") {
    write_strain_json(out, rows);
  } else {
    write_strain_csv(out, rows);
  }
  check_written(out);
  return 0;
}

int run_minimize(const Common& c) {
  const RunConfig cfg = load(c);
  const MinimizeSettings& s = cfg.minimize;
  FilmConfig fc;
  fc.epsilon = s.epsilon;
  fc.nu = s.nu;
  fc.n1 = s.n1;
  fc.n2 = s.n2;
  fc.validate();
  const LatticeIndex lat(fc);
  const ForceField f = lattice_force(cfg, lat);
  MinimizeOptions opt;
  opt.max_iterations = s.max_iterations;
  opt.grad_tol = s.grad_tol;
  opt.history = s.history;
  opt.rule = s.step_rule == "steepest" ? StepRule::steepest : StepRule::lbfgs;
  opt.variant = s.restricted ? EnergyVariant::restricted
                             : (cfg.model.nonpen ? EnergyVariant::with_nonpen : EnergyVariant::plain);
  const Deformation w0 = perturbed_identity(lat, s.perturbation, cfg.seed);
  const MinimizeResult res = minimize_atomistic(w0, lat, cfg.model, &f, opt);
  auto out = open_output(c, "trace");
  if (c.format == "json") {
    write_trace_json(out, res);
  } else {
    write_trace_csv(out, res);
  }
  check_written(out);
  std::cout << "status " << status_name(res.status) << ", iterations " << res.iterations << ", energy "
            << format_number(res.trace.front()) << " -> " << format_number(res.trace.back()) << '\n';
  return res.status == MinimizeStatus::line_search_failure ? 3 : 0;
}

int run_identities(int nu_max) {
  if (nu_max < 2) throw ConfigError("--nu-max must be at least 2");
  bool all = true;
  std::cout << "nu,sum,closed_form,sum_identity,mean_zero,gram_identity\n";
  for (int nu = 2; nu <= nu_max; ++nu) {
    const IdentityReport r = coefficient_identities(nu);
    all = all && r.ok();
    std::cout << nu << ',' << r.lhs_num << '/' << r.lhs_den << ',' << r.rhs_num << '/' << r.rhs_den << ','
              << r.sum_identity << ',' << r.mean_zero << ',' << r.gram_identity << '\n';
  }
  std::cout << (all ? "all identities hold" : "identity check failed") << '\n';
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-to-continuum checks for atomistic thin films"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config, "JSON run description");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--seed", c.seed, "random seed (overrides the config)");
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--no-timing", c.no_timing, "write wall_ms as 0 for byte-stable output");

  std::string deformation;
  int level = 0;
  int nu_max = 50;
  auto* forms = app.add_subcommand("forms", "assemble and export the quadratic forms");
  auto* energy = app.add_subcommand("energy", "evaluate the atomistic energy of a stored deformation");
  energy->add_option("--deformation", deformation, "deformation file written by 'recover'")->required();
  auto* limit = app.add_subcommand("limit", "evaluate the limit functionals");
  auto* recover = app.add_subcommand("recover", "build and store a recovery deformation");
  recover->add_option("--level", level, "index into the sweep levels");
  auto* converge = app.add_subcommand("converge", "sweep the levels and report energy gaps");
  auto* strain = app.add_subcommand("strain", "strain moment report");
  auto* minimize = app.add_subcommand("minimize", "descent run from a perturbed identity");
  auto* identities = app.add_subcommand("identities", "exact coefficient checks");
  identities->add_option("--nu-max", nu_max, "largest layer count");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    set_num_threads(c.threads);
    if (forms->parsed()) return run_forms(c);
    if (energy->parsed()) return run_energy(c, deformation);
    if (limit->parsed()) return run_limit(c);
    if (recover->parsed()) return run_recover(c, level);
    if (converge->parsed()) return run_converge(c);
    if (strain->parsed()) return run_strain(c);
    if (minimize->parsed()) return run_minimize(c);
    if (identities->parsed()) return run_identities(nu_max);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
