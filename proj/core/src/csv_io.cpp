#include "hjsplit/csv_io.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace hjsplit {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

namespace {

constexpr const char* kFieldHeader = "t,a,b,value,iterations,converged,stop_reason";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("field CSV: '{}' is not a number", s));
  }
}

}  // namespace

void write_field_csv(std::ostream& out, const SliceResult& result) {
  out << kFieldHeader << '\n';
  for (std::size_t k = 0; k < result.fields.size(); ++k) {
    const Field2D& f = result.fields[k];
    const std::size_t nb = f.b_nodes.size();
    for (std::size_t i = 0; i < f.a_nodes.size(); ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        const PointOutcome& o = result.outcomes[k][i * nb + j];
        out << format_double(f.t) << ',' << format_double(f.a_nodes[i]) << ','
            << format_double(f.b_nodes[j]) << ','
            << format_double(f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << ','
            << o.iterations << ',' << (o.converged ? 1 : 0) << ','
            << (o.error.empty() ? to_string(o.stop_reason) : "diverged") << '\n';
      }
  }
}

void write_reference_field_csv(std::ostream& out, const std::vector<Field2D>& fields) {
  out << kFieldHeader << '\n';
  for (const Field2D& f : fields)
    for (std::size_t i = 0; i < f.a_nodes.size(); ++i)
      for (std::size_t j = 0; j < f.b_nodes.size(); ++j)
        out << format_double(f.t) << ',' << format_double(f.a_nodes[i]) << ','
            << format_double(f.b_nodes[j]) << ','
            << format_double(f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
            << ",0,1,reference\n";
}

std::vector<Field2D> read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("field CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFieldHeader) throw ConfigError(fmt::format("unexpected field CSV header '{}'", line));

  std::map<double, std::map<std::pair<double, double>, double>> by_time;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) throw ConfigError(fmt::format("field CSV row {} has {} columns", row, cells.size()));
    by_time[to_double(cells[0])][{to_double(cells[1]), to_double(cells[2])}] = to_double(cells[3]);
  }

  std::vector<Field2D> out;
  for (const auto& [t, values] : by_time) {
    std::vector<double> a, b;
    for (const auto& [ab, v] : values) {
      a.push_back(ab.first);
      b.push_back(ab.second);
    }
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (a.size() * b.size() != values.size())
      throw ConfigError(fmt::format("field CSV nodes at t = {} do not form a rectangular grid", t));
    Field2D f;
    f.t = t;
    f.a_nodes = a;
    f.b_nodes = b;
    f.values.resize(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values.at({a[i], b[j]});
    out.push_back(std::move(f));
  }
  return out;
}

void write_contour_csv(std::ostream& out, const std::vector<double>& times,
                       const std::vector<std::vector<Segment>>& contours) {
  if (times.size() != contours.size()) throw DimensionError("one contour per time expected");
  out << "t,segment,ax,ay,bx,by\n";
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t s = 0; s < contours[k].size(); ++s) {
      const Segment& g = contours[k][s];
      out << format_double(times[k]) << ',' << s << ',' << format_double(g.ax) << ','
          << format_double(g.ay) << ',' << format_double(g.bx) << ',' << format_double(g.by) << '\n';
    }
}

void write_scaling_csv(std::ostream& out, const ScalingResult& result) {
  out << "dim,median_seconds,mean_seconds,fit_linear_a,fit_linear_b,fit_quad_a,fit_quad_b,r2_linear\n";
  const ScalingFit& f = result.fit;
  for (const ScalingRow& r : result.rows)
    out << r.dim << ',' << format_double(r.median_seconds) << ',' << format_double(r.mean_seconds)
        << ',' << format_double(f.linear_a) << ',' << format_double(f.linear_b) << ','
        << format_double(f.quad_a) << ',' << format_double(f.quad_b) << ','
        << format_double(f.r2_linear) << '\n';
}

void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& b, const TimeGrid& grid) {
  if (b.scheme != Scheme::lax || b.slots() != grid.n_steps + 1)
    throw DimensionError("trajectory CSV needs a Lax-shaped bundle matching the grid");
  const auto d = b.x.rows();
  out << 't';
  for (Eigen::Index i = 1; i <= d; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= d; ++i) out << ",p" << i;
  out << '\n';
  for (int j = 0; j <= grid.n_steps; ++j) {
    out << format_double(grid.node(j));
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double(b.x(i, j));
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double(b.p(i, j));
    out << '\n';
  }
}

}  // namespace hjsplit
