#pragma once

#include "thinfilm/minimize.hpp"
#include "thinfilm/sweep.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace thinfilm {

inline constexpr const char* kConvergeSchema = "thinfilm.converge.v1";
inline constexpr const char* kStrainSchema = "thinfilm.strain.v1";
inline constexpr const char* kTraceSchema = "thinfilm.trace.v1";
inline constexpr const char* kDeformationSchema = "thinfilm.deformation.v1";

const std::vector<std::string>& converge_columns();
const std::vector<std::string>& strain_columns();
const std::vector<std::string>& trace_columns();

/// Shortest round-trip decimal form; NaN prints as "nan".
std::string format_number(double x);

void write_converge_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_converge_json(std::ostream& out, const std::vector<ReportRow>& rows);
/// Parses a converge CSV; throws IoError on a header or schema mismatch.
std::vector<ReportRow> read_converge_csv(std::istream& in);

void write_strain_csv(std::ostream& out, const std::vector<StrainMomentRow>& rows);
void write_strain_json(std::ostream& out, const std::vector<StrainMomentRow>& rows);

void write_trace_csv(std::ostream& out, const MinimizeResult& result);
void write_trace_json(std::ostream& out, const MinimizeResult& result);

/// Plain text: a header line "thinfilm.deformation.v1 eps nu n1 n2", then one
/// "x y z" line per node in node order.
void write_deformation(std::ostream& out, const Deformation& w);
Deformation read_deformation(std::istream& in);

}  // namespace thinfilm
