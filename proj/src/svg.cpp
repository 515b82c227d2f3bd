#include "submax/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace submax {

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      cells.resize(table.header.size());
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

namespace {

constexpr double kWidth = 880.0, kHeight = 540.0;
constexpr double kLeft = 70.0, kRight = 700.0, kTop = 24.0, kBottom = 496.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == name) return i;
  throw std::invalid_argument("render_line_svg: no column named '" + name + "'");
}

}  // namespace

std::string render_line_svg(const CsvTable& table, const PlotSpec& spec) {
  const std::size_t xi = column_index(table, spec.x);
  const std::size_t yi = column_index(table, spec.y);
  const std::size_t gi = column_index(table, spec.group);

  // groups in sorted order for a stable legend; points keep row order
  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  for (const auto& row : table.rows) {
    if (row[xi].empty() || row[yi].empty()) continue;
    groups[row[gi]].emplace_back(std::stod(row[xi]), std::stod(row[yi]));
  }
  if (groups.empty()) throw std::invalid_argument("render_line_svg: empty selection");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : groups) {
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes and ticks
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) +
         "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    svg += "<line x1=\"" + num(sx(xv)) + "\" y1=\"" + num(kBottom) + "\" x2=\"" +
           num(sx(xv)) + "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kBottom + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(sy(yv)) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(sy(yv)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(yv) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 8) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + spec.x + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num((kTop + kBottom) / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num((kTop + kBottom) / 2) + ")\">" + spec.y + "</text>\n";

  // polylines and legend
  int idx = 0;
  for (const auto& [name, pts] : groups) {
    const char* color = kPalette[idx % 10];
    std::string points;
    for (const auto& [x, y] : pts) points += num(sx(x)) + "," + num(sy(y)) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 16.0 * idx;
    svg += "<line x1=\"" + num(kRight + 14) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(kRight + 42) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kRight + 48) + "\" y=\"" + num(ly + 4) +
           "\" font-size=\"11\">" + name + "</text>\n";
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

}  // namespace submax
