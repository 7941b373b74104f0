#include "grtl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace grtl {
namespace {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

struct GroupStats {
  int total = 0;
  int passed = 0;
  double worst_error = 0.0;
};

std::map<std::string, GroupStats> group_rows(const std::vector<ConstructionReport>& rows) {
  std::map<std::string, GroupStats> groups;
  for (const auto& row : rows) {
    GroupStats& g = groups[row.construction];
    ++g.total;
    if (row.pass) ++g.passed;
    g.worst_error = std::max(g.worst_error, row.max_abs_error);
  }
  return groups;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

void write_report_json(const std::vector<ConstructionReport>& rows, const std::string& path) {
  json arr = json::array();
  for (const auto& row : rows) arr.push_back(report_row_to_json(row));
  write_file_atomic(path, arr.dump(2) + "\n");
}

std::vector<ConstructionReport> read_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  json arr = json::parse(in);
  if (!arr.is_array()) throw std::invalid_argument("report must be a JSON array: " + path);
  std::vector<ConstructionReport> rows;
  rows.reserve(arr.size());
  for (const auto& item : arr) rows.push_back(report_row_from_json(item));
  return rows;
}

std::string report_csv(const std::vector<ConstructionReport>& rows) {
  std::ostringstream out;
  out << "construction,n,params,pass,max_abs_error,millis\n";
  for (const auto& row : rows) {
    out << row.construction << ',' << row.n << ',' << csv_quote(row.params.dump()) << ','
        << (row.pass ? 1 : 0) << ',' << format_double(row.max_abs_error) << ','
        << format_double(row.millis) << '\n';
  }
  return out.str();
}

void write_report_csv(const std::vector<ConstructionReport>& rows, const std::string& path) {
  write_file_atomic(path, report_csv(rows));
}

std::string report_svg(const std::vector<ConstructionReport>& rows) {
  const auto groups = group_rows(rows);
  const int bar_h = 28;
  const int gap = 12;
  const int left = 170;
  const int bar_w = 360;
  const int top = 48;
  const int height = top + static_cast<int>(groups.size()) * (bar_h + gap) + 16;
  const int width = left + bar_w + 250;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  svg << "  <text x=\"16\" y=\"28\" font-family=\"monospace\" font-size=\"16\">"
      << "certification pass rate by construction</text>\n";
  int y = top;
  for (const auto& [name, g] : groups) {
    const int pass_w =
        g.total == 0 ? 0 : static_cast<int>(static_cast<double>(bar_w) * g.passed / g.total);
    svg << "  <text x=\"16\" y=\"" << y + 19 << "\" font-family=\"monospace\" font-size=\"13\">"
        << name << "</text>\n";
    svg << "  <rect x=\"" << left << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\""
        << bar_h << "\" fill=\"#e8e8e8\" stroke=\"#333333\"/>\n";
    if (pass_w > 0)
      svg << "  <rect x=\"" << left << "\" y=\"" << y << "\" width=\"" << pass_w << "\" height=\""
          << bar_h << "\" fill=\"#2e8b57\"/>\n";
    svg << "  <text x=\"" << left + bar_w + 12 << "\" y=\"" << y + 19
        << "\" font-family=\"monospace\" font-size=\"13\">" << g.passed << "/" << g.total
        << " pass, worst err " << format_double(g.worst_error) << "</text>\n";
    y += bar_h + gap;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_report_svg(const std::vector<ConstructionReport>& rows, const std::string& path) {
  write_file_atomic(path, report_svg(rows));
}

}  // namespace grtl
