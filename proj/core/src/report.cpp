#include "thinfilm/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

namespace thinfilm {

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
}

nlohmann::json number_json(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("not a number in CSV: '" + s + "'");
  }
  return x;
}

}  // namespace

const std::vector<std::string>& converge_columns() {
  static const std::vector<std::string> cols{"schema", "eps",     "nu",       "h",         "e_scaled", "e_limit",
                                             "gap_abs", "gap_rel", "max_dist", "i_over_h4", "wall_ms"};
  return cols;
}

const std::vector<std::string>& strain_columns() {
  static const std::vector<std::string> cols{"schema", "eps", "nu", "h", "moment_gap", "moment_norm", "max_strain"};
  return cols;
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols{"schema", "iteration", "energy", "grad_norm"};
  return cols;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_converge_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  write_header(out, converge_columns());
  for (const auto& r : rows) {
    out << kConvergeSchema << ',' << format_number(r.eps) << ',' << r.nu << ',' << format_number(r.h) << ','
        << format_number(r.e_scaled) << ',' << format_number(r.e_limit) << ',' << format_number(r.gap_abs) << ','
        << format_number(r.gap_rel) << ',' << format_number(r.max_dist) << ',' << format_number(r.i_over_h4) << ','
        << format_number(r.wall_ms) << '\n';
  }
}

void write_converge_json(std::ostream& out, const std::vector<ReportRow>& rows) {
  nlohmann::json doc;
  doc["schema"] = kConvergeSchema;
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"eps", r.eps},
                           {"nu", r.nu},
                           {"h", r.h},
                           {"e_scaled", number_json(r.e_scaled)},
                           {"e_limit", number_json(r.e_limit)},
                           {"gap_abs", number_json(r.gap_abs)},
                           {"gap_rel", number_json(r.gap_rel)},
                           {"max_dist", number_json(r.max_dist)},
                           {"i_over_h4", number_json(r.i_over_h4)},
                           {"wall_ms", r.wall_ms}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<ReportRow> read_converge_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split(line) != converge_columns()) {
    throw IoError("converge CSV header does not match the schema");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != converge_columns().size()) throw IoError("converge CSV row has the wrong column count");
    if (cells[0] != kConvergeSchema) throw IoError("unknown schema tag '" + cells[0] + "'");
    ReportRow r;
    r.eps = parse_number(cells[1]);
    r.nu = static_cast<int>(parse_number(cells[2]));
    r.h = parse_number(cells[3]);
    r.e_scaled = parse_number(cells[4]);
    r.e_limit = parse_number(cells[5]);
    r.gap_abs = parse_number(cells[6]);
    r.gap_rel = parse_number(cells[7]);
    r.max_dist = parse_number(cells[8]);
    r.i_over_h4 = parse_number(cells[9]);
    r.wall_ms = parse_number(cells[10]);
    rows.push_back(r);
  }
  return rows;
}

void write_strain_csv(std::ostream& out, const std::vector<StrainMomentRow>& rows) {
  write_header(out, strain_columns());
  for (const auto& r : rows) {
    out << kStrainSchema << ',' << format_number(r.eps) << ',' << r.nu << ',' << format_number(r.h) << ','
        << format_number(r.moment_gap) << ',' << format_number(r.moment_norm) << ',' << format_number(r.max_strain)
        << '\n';
  }
}

void write_strain_json(std::ostream& out, const std::vector<StrainMomentRow>& rows) {
  nlohmann::json doc;
  doc["schema"] = kStrainSchema;
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"eps", r.eps},
                           {"nu", r.nu},
                           {"h", r.h},
                           {"moment_gap", number_json(r.moment_gap)},
                           {"moment_norm", number_json(r.moment_norm)},
                           {"max_strain", number_json(r.max_strain)}});
  }
  out << doc.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const MinimizeResult& result) {
  write_header(out, trace_columns());
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const double gn = i < result.grad_norms.size() ? result.grad_norms[i] : std::numeric_limits<double>::quiet_NaN();
    out << kTraceSchema << ',' << i << ',' << format_number(result.trace[i]) << ',' << format_number(gn) << '\n';
  }
}

void write_trace_json(std::ostream& out, const MinimizeResult& result) {
  nlohmann::json doc;
  doc["schema"] = kTraceSchema;
  doc["status"] = status_name(result.status);
  doc["iterations"] = result.iterations;
  doc["energy"] = nlohmann::json::array();
  for (double e : result.trace) doc["energy"].push_back(number_json(e));
  doc["grad_norm"] = nlohmann::json::array();
  for (double g : result.grad_norms) doc["grad_norm"].push_back(number_json(g));
  out << doc.dump(2) << '\n';
}

void write_deformation(std::ostream& out, const Deformation& w) {
  const FilmConfig& cfg = w.config();
  out << kDeformationSchema << ' ' << format_number(cfg.epsilon) << ' ' << cfg.nu << ' ' << cfg.n1 << ' ' << cfg.n2
      << '\n';
  for (std::size_t n = 0; n < w.size(); ++n) {
    out << format_number(w[n](0)) << ' ' << format_number(w[n](1)) << ' ' << format_number(w[n](2)) << '\n';
  }
}

Deformation read_deformation(std::istream& in) {
  std::string tag;
  FilmConfig cfg;
  if (!(in >> tag) || tag != kDeformationSchema) {
    throw IoError("deformation file does not start with " + std::string(kDeformationSchema));
  }
  std::string eps;
  if (!(in >> eps >> cfg.nu >> cfg.n1 >> cfg.n2)) {
    throw IoError("truncated deformation header");
  }
  cfg.epsilon = parse_number(eps);
  cfg.validate();
  const LatticeIndex lat(cfg);
  Deformation w(lat);
  for (std::size_t n = 0; n < w.size(); ++n) {
    std::string x, y, z;
    if (!(in >> x >> y >> z)) {
      throw IoError("deformation file ends after " + std::to_string(n) + " nodes");
    }
    w[n] = Vec3(parse_number(x), parse_number(y), parse_number(z));
  }
  return w;
}

}  // namespace thinfilm
