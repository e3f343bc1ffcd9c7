#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hjsplit/bundle.hpp"
#include "hjsplit/field.hpp"
#include "hjsplit/grid_eval.hpp"

namespace hjsplit {

/// All floats are written with 17 significant digits.
std::string format_double(double value);

/// `t,a,b,value,iterations,converged,stop_reason`
void write_field_csv(std::ostream& out, const SliceResult& result);

/// Rows from a field CSV regrouped into one Field2D per time. Throws
/// ConfigError on a malformed header or a non-rectangular node set.
std::vector<Field2D> read_field_csv(std::istream& in);

/// Field CSV without per-point solver columns (iterations 0, converged 1,
/// stop_reason "reference"); used for reference fields.
void write_reference_field_csv(std::ostream& out, const std::vector<Field2D>& fields);

/// `t,segment,ax,ay,bx,by`
void write_contour_csv(std::ostream& out, const std::vector<double>& times,
                       const std::vector<std::vector<Segment>>& contours);

/// `dim,median_seconds,mean_seconds,fit_linear_a,fit_linear_b,fit_quad_a,fit_quad_b,r2_linear`
void write_scaling_csv(std::ostream& out, const ScalingResult& result);

/// `t,x1..xd,p1..pd`, one row per time index 0..N. Hopf bundles must be
/// converted to Lax shape first.
void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& lax_bundle,
                          const TimeGrid& grid);

}  // namespace hjsplit
