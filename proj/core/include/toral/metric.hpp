#pragma once

#include <cstddef>
#include <optional>

#include "toral/integer.hpp"
#include "toral/subtorus.hpp"

namespace toral {

/// Hausdorff distance estimate under the flat metric of R^n / Z^n.
/// The true distance lies in [value, value + error_bound].
struct MetricEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  double resolution = 0.0;
};

/// Distance from a point of R^n (read modulo Z^n) to a subtorus.
double distance_to_subtorus(const std::vector<double>& x, const Subtorus& h);

/// Samples each subtorus on a parameter grid fine enough that the
/// 1-Lipschitz sampling error stays below `resolution`. Directions where one
/// subtorus contains the other are exact.
MetricEstimate hausdorff_distance(const Subtorus& a, const Subtorus& b, double resolution);

struct IsolationReport {
  Subtorus subtorus;
  Integer dual_norm_bound;  // B: characters of Euclidean norm <= B
  double resolution = 0.0;
  /// min over compared H' of (value - error_bound).
  double lower_bound = 0.0;
  double max_error = 0.0;
  std::size_t compared = 0;
  std::optional<Subtorus> nearest;
};

/// Positive lower bound on the distance from h to every other subtorus of
/// dimension >= dim(h) whose annihilator is spanned by characters of norm
/// <= dual_norm_bound. Valid only relative to that enumeration cap.
IsolationReport isolation_radius_lower_bound(const Subtorus& h, const Integer& dual_norm_bound, double resolution);

}  // namespace toral
