#pragma once

#include <stdexcept>
#include <vector>

#include "sdlab/grid.hpp"

namespace sdlab {

// Paired (u, v) snapshots at strictly increasing times.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexField> u;
  std::vector<RealField> v;

  std::size_t size() const { return times.size(); }
  void check() const {
    if (u.size() != times.size() || v.size() != times.size())
      throw std::invalid_argument("trajectory: snapshot counts differ from mesh size");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1])) throw std::invalid_argument("trajectory: times must increase");
  }
};

}  // namespace sdlab
