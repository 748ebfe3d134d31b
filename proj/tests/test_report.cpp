#include <doctest.h>

#include <cmath>

#include "sdlab/report.hpp"

using namespace sdlab;

TEST_CASE("csv tables") {
  CsvTable t({"a", "b"});
  t.add_row({0.1, 1.0 / 3.0});
  t.add_text_row({"x", "y"});
  CHECK(t.str() == "a,b\n0.10000000000000001,0.33333333333333331\nx,y\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(HUGE_VAL) == "inf");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("svg plots") {
  SvgPlot p;
  p.title = "t & <x>";
  p.series = {{"s", {1, 10, 100}, {1, 0.1, 0.0}}};
  const std::string svg = p.render();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("t &amp; &lt;x&gt;") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == p.render());
}
