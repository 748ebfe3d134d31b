#pragma once

#include <string>
#include <vector>

namespace sdlab {

// Comma-separated table with a header row; numbers printed with %.17g.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  // Cells are written verbatim.
  void add_text_row(const std::vector<std::string>& cells);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double x);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = true;
};

// Minimal SVG line plot; nonpositive values are skipped on log axes.
struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  std::vector<PlotSeries> series;

  std::string render(int width = 720, int height = 480) const;
  void write(const std::string& path) const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sdlab
