#ifndef PDC_TOOLS_OUTPUT_HPP
#define PDC_TOOLS_OUTPUT_HPP

#include <string>
#include <vector>

namespace pdc::cli {

/// %.17g, with nan / inf / -inf spelled out.
std::string format_number(double v);

/// Column table whose first column is `tau`.
class CsvTable {
 public:
  explicit CsvTable(std::vector<double> tau);
  CsvTable& add(std::string name, std::vector<double> values);
  std::size_t rows() const { return columns_.front().size(); }
  std::string str() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};
ParsedCsv parse_csv(const std::string& text);

struct PlotOptions {
  std::string title;
  bool log_x = false;
  bool log_y = false;
  bool absolute = false;  // plot |y| (for residuals on log axes)
};

/// Line plot of every non-tau column against the first column.
std::string render_svg(const std::string& csv_text, const PlotOptions& opt);

}  // namespace pdc::cli

#endif  // PDC_TOOLS_OUTPUT_HPP
