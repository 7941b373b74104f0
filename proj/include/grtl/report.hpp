#ifndef GRTL_REPORT_HPP
#define GRTL_REPORT_HPP

#include <string>
#include <vector>

#include "grtl/constructions.hpp"

// Certification report files: a report is a JSON array of rows, each with the
// keys {construction, n, params, pass, max_abs_error, millis}. Reports merge
// by concatenation; the CSV and SVG renderings are deterministic so repeated
// runs produce identical bytes.

namespace grtl {

void write_report_json(const std::vector<ConstructionReport>& rows, const std::string& path);
std::vector<ConstructionReport> read_report_json(const std::string& path);

std::string report_csv(const std::vector<ConstructionReport>& rows);
void write_report_csv(const std::vector<ConstructionReport>& rows, const std::string& path);

// One horizontal bar per construction showing its pass fraction, annotated
// with counts and the worst error. Plain shapes and text, no external assets.
std::string report_svg(const std::vector<ConstructionReport>& rows);
void write_report_svg(const std::vector<ConstructionReport>& rows, const std::string& path);

// Writes to a temporary sibling file first and renames into place, so readers
// never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace grtl

#endif
