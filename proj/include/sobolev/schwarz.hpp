#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobolev/conformal_map.hpp"
#include "sobolev/solver.hpp"

namespace sobolev {

struct SweepRow {
  double r = 0.0;
  double log_r = 0.0;
  bool valid = false;
  std::string skip_reason;  // empty for valid rows
  double disk_h = 0.0;      // unit-disk resolution the row was meshed at
  double cp_unit_disk = 0.0;
  double cp_scaled_disk = 0.0;  // r^(-4/p) cp_unit_disk
  double cp_image = 0.0;
  double phi_ratio = 0.0;   // cp_image / cp_scaled_disk
  double reciprocal = 0.0;  // 1 / phi_ratio
};

/// Sampled r -> C_p(f(rD)) / C_p(rD) with the discrete monotonicity and
/// log-convexity verdicts. Verdicts only look at valid rows.
struct SchwarzSweep {
  double p = 0.0;
  ConformalMap map;
  std::vector<SweepRow> rows{};
  bool is_monotone_decreasing = false;
  bool is_constant = false;
  std::optional<bool> reciprocal_logconvex{};  // only for p <= 2
  double extrapolated_limit = 0.0;           // Richardson in r^2 from the two smallest r
  double expected_limit = 0.0;               // |f'(0)|^(-4/p)

  std::size_t valid_rows() const;
  /// Linear maps must be constant; others strictly decreasing, log-convex (p <= 2) and
  /// with the r -> 0 limit within 2 %.
  bool verdicts_pass() const;
};

struct SweepOptions {
  double r_ceiling = 0.95;
  bool allow_large_r = false;
  unsigned threads = 1;
  SolverConfig solver{};  // p is overwritten by the sweep
};

inline constexpr double kMonotoneSlack = 1e-3;
inline constexpr double kConstantTolerance = 1e-3;
inline constexpr double kConvexitySlack = 1e-2;
inline constexpr double kLimitTolerance = 0.02;

SchwarzSweep schwarz_sweep(const ConformalMap& map, double p, std::span<const double> r_grid,
                           double h, const SweepOptions& options = {});

/// Discrete verdict helpers, exposed for testing on synthetic data.
bool monotone_decreasing(std::span<const double> values, double slack = kMonotoneSlack);
bool nearly_constant(std::span<const double> values, double tolerance = kConstantTolerance);
bool convex_in(std::span<const double> x, std::span<const double> y, double slack = kConvexitySlack);
double richardson_r2_limit(double r1, double v1, double r2, double v2);

}  // namespace sobolev
