#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pdc::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<double> tau) {
  names_.push_back("tau");
  columns_.push_back(std::move(tau));
}

CsvTable& CsvTable::add(std::string name, std::vector<double> values) {
  if (values.size() != rows()) throw std::invalid_argument("CsvTable: column '" + name + "' has the wrong length");
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t c = 0; c < names_.size(); ++c) out += (c ? "," : "") + names_[c];
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += format_number(columns_[c][r]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv p;
  std::istringstream in(text);
  std::string line, cell;
  if (!std::getline(in, line)) throw std::invalid_argument("parse_csv: empty input");
  std::istringstream head(line);
  while (std::getline(head, cell, ',')) p.header.push_back(cell);
  p.columns.resize(p.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    for (std::size_t c = 0; c < p.header.size(); ++c) {
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("parse_csv: short row");
      p.columns[c].push_back(std::strtod(cell.c_str(), nullptr));
    }
  }
  return p;
}

std::string render_svg(const std::string& csv_text, const PlotOptions& opt) {
  const ParsedCsv csv = parse_csv(csv_text);
  constexpr double width = 720, height = 440, left = 70, right = 170, top = 40, bottom = 50;
  auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) {
    if (opt.absolute) y = std::abs(y);
    return opt.log_y ? std::log10(y) : y;
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (std::size_t c = 1; c < csv.columns.size(); ++c)
    for (std::size_t i = 0; i < csv.columns[c].size(); ++i) {
      const double x = tx(csv.columns[0][i]), y = ty(csv.columns[c][i]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << xml_escape(opt.title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
    << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [](double v, bool lg) { return format_number(lg ? std::pow(10.0, v) : v).substr(0, 9); };
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    s << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
      << label(xv, opt.log_x) << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << label(yv, opt.log_y)
      << "</text>\n";
  }
  s << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
    << xml_escape(csv.header[0]) << "</text>\n";
  for (std::size_t c = 1; c < csv.columns.size(); ++c) {
    const char* color = colors[(c - 1) % 8];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < csv.columns[c].size(); ++i) {
      const double x = tx(csv.columns[0][i]), y = ty(csv.columns[c][i]);
      if (std::isfinite(x) && std::isfinite(y)) s << px(x) << ',' << py(y) << ' ';
    }
    s << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(c);
    s << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << xml_escape(csv.header[c]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace pdc::cli
