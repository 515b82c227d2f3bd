#pragma once

#include <string>
#include <vector>

namespace submax {

// Minimal CSV table for plotting: header names plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);

struct PlotSpec {
  std::string x;
  std::string y;
  std::string group;
};

// Standalone SVG 1.1 line chart: one polyline per group value, linear axes
// with tick labels and a legend. Byte output is a pure function of the
// input. Rows whose y cell is empty are skipped; an empty selection is an
// argument error.
std::string render_line_svg(const CsvTable& table, const PlotSpec& spec);

void write_file(const std::string& path, const std::string& content);

}  // namespace submax
