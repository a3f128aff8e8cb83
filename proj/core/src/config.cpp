#include "thinfilm/config.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace thinfilm {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError("missing key '" + key + "' in " + where);
  }
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

PairShape parse_shape(const std::string& s) {
  if (s == "quadratic") return PairShape::quadratic;
  if (s == "lennard_jones") return PairShape::lennard_jones;
  throw ConfigError("unknown pair potential '" + s + "'");
}

void parse_weights(const json& j, const std::string& where, MassSpringParams& spring, PairPotentialParams& pair) {
  spring.alpha = get<double>(j, "alpha", where);
  spring.beta = get<double>(j, "beta", where);
  if (!(spring.alpha > 0.0) || !(spring.beta > 0.0)) {
    throw ConfigError("spring constants must be positive in " + where);
  }
  pair.alpha = spring.alpha;
  pair.beta = spring.beta;
}

CellLaw parse_bulk(const json& j) {
  const std::string where = "model.bulk";
  CellLaw law;
  const auto kind = get<std::string>(j, "law", where);
  parse_weights(j, where, law.spring, law.pair);
  if (kind == "mass_spring") {
    law.kind = BulkKind::mass_spring;
  } else if (kind == "pair") {
    law.kind = BulkKind::pair;
    law.pair.v1 = parse_shape(get<std::string>(j, "v1", where));
    law.pair.v2 = parse_shape(get<std::string>(j, "v2", where));
  } else {
    throw ConfigError("unknown bulk law '" + kind + "'");
  }
  return law;
}

SurfaceLaw parse_surface(const json& j) {
  const std::string where = "model.surface";
  SurfaceLaw law;
  const auto kind = get<std::string>(j, "law", where);
  if (kind == "none") {
    law.kind = SurfaceKind::none;
    return law;
  }
  parse_weights(j, where, law.spring, law.pair);
  if (kind == "mass_spring") {
    law.kind = SurfaceKind::mass_spring;
  } else if (kind == "pair") {
    law.kind = SurfaceKind::pair;
    law.pair.v1 = parse_shape(get<std::string>(j, "v1", where));
    law.pair.v2 = parse_shape(get<std::string>(j, "v2", where));
  } else {
    throw ConfigError("unknown surface law '" + kind + "'");
  }
  return law;
}

std::vector<TrigTerm> parse_trig(const json& j, const std::string& key, const std::string& where) {
  std::vector<TrigTerm> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ConfigError(where + "." + key + " must be a list of terms");
  for (const json& t : arr) {
    TrigTerm term;
    term.c = get<double>(t, "c", where + "." + key);
    term.k1 = get<double>(t, "k1", where + "." + key);
    term.k2 = get<double>(t, "k2", where + "." + key);
    const auto f1 = get<std::string>(t, "f1", where + "." + key);
    const auto f2 = get<std::string>(t, "f2", where + "." + key);
    if ((f1 != "sin" && f1 != "cos") || (f2 != "sin" && f2 != "cos")) {
      throw ConfigError("trig factors must be 'sin' or 'cos' in " + where + "." + key);
    }
    term.cos1 = f1 == "cos";
    term.cos2 = f2 == "cos";
    out.push_back(term);
  }
  return out;
}

std::vector<Monomial> parse_poly(const json& j, const std::string& key, const std::string& where) {
  std::vector<Monomial> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ConfigError(where + "." + key + " must be a list of terms");
  for (const json& t : arr) {
    Monomial m;
    m.c = get<double>(t, "c", where + "." + key);
    m.a = get<int>(t, "a", where + "." + key);
    m.b = get<int>(t, "b", where + "." + key);
    if (m.a < 0 || m.b < 0) throw ConfigError("monomial exponents must be nonnegative");
    out.push_back(m);
  }
  return out;
}

std::shared_ptr<DisplacementField> parse_field(const json& j, std::uint64_t seed, std::string& family) {
  const std::string where = "field";
  family = get<std::string>(j, "family", where);
  if (family == "zero") return std::make_shared<ZeroField>();
  if (family == "canonical") return canonical_field();
  if (family == "trig") {
    return std::make_shared<TrigField>(parse_trig(j, "u1", where), parse_trig(j, "u2", where), parse_trig(j, "v", where));
  }
  if (family == "polynomial") {
    return std::make_shared<PolynomialField>(parse_poly(j, "u1", where), parse_poly(j, "u2", where),
                                             parse_poly(j, "v", where));
  }
  if (family == "random_trig") {
    std::mt19937_64 rng(seed);
    return random_trig_field(rng, get<double>(j, "amplitude", where), get<int>(j, "terms", where));
  }
  throw ConfigError("unknown field family '" + family + "'");
}

}  // namespace

Regime parse_regime(const std::string& tag) {
  if (tag == "thin") return Regime::thin;
  if (tag == "ultrathin") return Regime::ultrathin;
  throw ConfigError("regime must be 'thin' or 'ultrathin', got '" + tag + "'");
}

std::string regime_name(Regime r) { return r == Regime::thin ? "thin" : "ultrathin"; }

SweepOptions RunConfig::sweep_options() const {
  SweepOptions opt;
  opt.regime = regime;
  opt.length1 = length1;
  opt.length2 = length2;
  opt.quad_m = quad_m;
  opt.diagnostics_max_cells = diagnostics_max_cells;
  return opt;
}

ForceDensity RunConfig::force_density() const {
  const TrigField f1({}, {}, force_f1);
  const TrigField f2({}, {}, force_f2);
  const TrigField f3({}, {}, force_f3);
  return [f1, f2, f3](const Vec2& x) { return Vec3(f1.v(x), f2.v(x), f3.v(x)); };
}

RunConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig cfg;
  cfg.seed = seed_override ? *seed_override : get_or<std::uint64_t>(doc, "seed", 1, "config");

  const json& model = require(doc, "model", "config");
  cfg.model.cell = parse_bulk(require(model, "bulk", "model"));
  cfg.model.surface = parse_surface(require(model, "surface", "model"));
  if (model.contains("penalty")) {
    const json& p = model.at("penalty");
    PenaltyParams pen;
    pen.c = get<double>(p, "c", "model.penalty");
    pen.r0 = get<double>(p, "r0", "model.penalty");
    pen.r1 = get<double>(p, "r1", "model.penalty");
    if (!(pen.r0 < pen.r1) || !(pen.c > 0.0)) {
      throw ConfigError("penalty needs c > 0 and r0 < r1");
    }
    cfg.model.cell.penalty = pen;
  }
  if (model.contains("nonpen")) {
    const json& p = model.at("nonpen");
    cfg.model.nonpen = NonPenParams{get<double>(p, "delta", "model.nonpen"), get<double>(p, "gamma", "model.nonpen")};
  }
  if (model.contains("admissible_radius")) {
    cfg.model.delta_adm = get<double>(model, "admissible_radius", "model");
  }
  cfg.model.validate();

  cfg.field = parse_field(require(doc, "field", "config"), cfg.seed, cfg.field_family);

  if (doc.contains("force")) {
    const json& f = doc.at("force");
    cfg.force_f1 = parse_trig(f, "f1", "force");
    cfg.force_f2 = parse_trig(f, "f2", "force");
    cfg.force_f3 = parse_trig(f, "f3", "force");
    cfg.has_force = true;
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    cfg.regime = parse_regime(get<std::string>(s, "regime", "sweep"));
    const auto domain = get<std::vector<double>>(s, "domain", "sweep");
    if (domain.size() != 2 || !(domain[0] > 0.0) || !(domain[1] > 0.0)) {
      throw ConfigError("sweep.domain must hold two positive side lengths");
    }
    cfg.length1 = domain[0];
    cfg.length2 = domain[1];
    cfg.quad_m = get<int>(s, "quadrature", "sweep");
    cfg.diagnostics_max_cells = get_or<std::size_t>(s, "diagnostics_max_cells", cfg.diagnostics_max_cells, "sweep");
    const json& levels = require(s, "levels", "sweep");
    if (!levels.is_array() || levels.empty()) throw ConfigError("sweep.levels must be a nonempty list");
    for (const json& l : levels) {
      cfg.levels.push_back({get<double>(l, "eps", "sweep.levels"), get<int>(l, "nu", "sweep.levels")});
    }
    for (std::size_t i = 1; i < cfg.levels.size(); ++i) {
      if (!(cfg.levels[i].epsilon < cfg.levels[i - 1].epsilon)) {
        throw ConfigError("sweep lattice spacings must be strictly decreasing");
      }
    }
    if (cfg.regime == Regime::ultrathin) {
      for (const auto& l : cfg.levels) {
        if (l.nu != cfg.levels.front().nu) throw ConfigError("ultrathin sweeps keep nu fixed");
      }
    } else {
      for (std::size_t i = 1; i < cfg.levels.size(); ++i) {
        if (!(cfg.levels[i].nu > cfg.levels[i - 1].nu)) throw ConfigError("thin sweeps need increasing nu");
      }
    }
  }

  if (doc.contains("minimize")) {
    const json& m = doc.at("minimize");
    const std::string where = "minimize";
    cfg.minimize.max_iterations = get<int>(m, "max_iterations", where);
    cfg.minimize.grad_tol = get<double>(m, "grad_tol", where);
    cfg.minimize.step_rule = get<std::string>(m, "step_rule", where);
    cfg.minimize.history = get_or<int>(m, "history", 10, where);
    cfg.minimize.perturbation = get<double>(m, "perturbation", where);
    cfg.minimize.n1 = get<int>(m, "n1", where);
    cfg.minimize.n2 = get<int>(m, "n2", where);
    cfg.minimize.nu = get<int>(m, "nu", where);
    cfg.minimize.epsilon = get<double>(m, "eps", where);
    cfg.minimize.restricted = get_or<bool>(m, "restricted", false, where);
    if (cfg.minimize.step_rule != "lbfgs" && cfg.minimize.step_rule != "steepest") {
      throw ConfigError("minimize.step_rule must be 'lbfgs' or 'steepest'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), seed_override);
}

}  // namespace thinfilm
