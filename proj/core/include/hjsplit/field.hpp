#pragma once

#include <vector>

#include "hjsplit/types.hpp"

namespace hjsplit {

/// Values of phi(., t) on a rectangular 2-D node set. values(i, j) sits at
/// (a_nodes[i], b_nodes[j]).
struct Field2D {
  double t = 0.0;
  std::vector<double> a_nodes;
  std::vector<double> b_nodes;
  Mat values;
};

/// lo, lo + mesh, ..., with floor((hi - lo) / mesh + 1e-9) + 1 entries.
std::vector<double> uniform_nodes(double lo, double hi, double mesh);

/// Line segment in slice coordinates.
struct Segment {
  double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0;
};

}  // namespace hjsplit
