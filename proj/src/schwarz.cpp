#include "sobolev/schwarz.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "sobolev/error.hpp"

namespace sobolev {

namespace {

// Runs task(i) for i in [0, n) on up to `threads` workers; each index writes only its
// own output slot, so the result does not depend on scheduling.
template <class Task>
void parallel_for(std::size_t n, unsigned threads, Task&& task) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> failures(n);
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace

bool monotone_decreasing(std::span<const double> values, double slack) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] < values[i] * (1.0 + slack))) return false;
  }
  return true;
}

bool nearly_constant(std::span<const double> values, double tolerance) {
  if (values.empty()) return false;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double spread = 0.0;
  for (double v : values) spread = std::max(spread, std::abs(v - mean));
  return spread / std::abs(mean) < tolerance;
}

bool convex_in(std::span<const double> x, std::span<const double> y, double slack) {
  if (x.size() != y.size() || x.size() < 3) return false;
  std::vector<double> second;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    second.push_back(2.0 * (right - left) / (x[i + 1] - x[i - 1]));
  }
  std::vector<double> magnitude(second.size());
  std::transform(second.begin(), second.end(), magnitude.begin(), [](double d) { return std::abs(d); });
  std::nth_element(magnitude.begin(), magnitude.begin() + magnitude.size() / 2, magnitude.end());
  double mean_y = 0.0;
  for (double v : y) mean_y += std::abs(v);
  mean_y /= static_cast<double>(y.size());
  // Floor keeps an exactly constant sequence (all second differences at rounding
  // level) from being judged against a zero scale.
  const double scale = std::max(magnitude[magnitude.size() / 2], 1e-9 * mean_y);
  return std::all_of(second.begin(), second.end(), [&](double d) { return d >= -slack * scale; });
}

double richardson_r2_limit(double r1, double v1, double r2, double v2) {
  return (r2 * r2 * v1 - r1 * r1 * v2) / (r2 * r2 - r1 * r1);
}

std::size_t SchwarzSweep::valid_rows() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.valid; }));
}

bool SchwarzSweep::verdicts_pass() const {
  if (map.is_linear()) return is_constant;
  const bool shape = is_monotone_decreasing && !is_constant && reciprocal_logconvex.value_or(true);
  return shape && std::abs(extrapolated_limit / expected_limit - 1.0) <= kLimitTolerance;
}

SchwarzSweep schwarz_sweep(const ConformalMap& map, double p, std::span<const double> r_grid,
                           double h, const SweepOptions& options) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "p must be >= 1");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidInput, "sweep radii must lie in (0,1)");
    if (r > options.r_ceiling && !options.allow_large_r) {
      throw Error(ErrorCode::InvalidInput, "sweep radius above the 0.95 ceiling needs an explicit override");
    }
    if (i > 0 && !(r > r_grid[i - 1])) throw Error(ErrorCode::InvalidInput, "sweep radii must increase");
  }

  SolverConfig solver = options.solver;
  solver.p = p;

  SchwarzSweep sweep{.p = p, .map = map};
  sweep.rows.resize(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    auto& row = sweep.rows[i];
    row.r = r_grid[i];
    row.log_r = std::log(row.r);
    row.disk_h = map_image_resolution(map, row.r, h);
  }

  // The reference disk is meshed at each row's resolution, so for linear maps the
  // image mesh is an exact similarity copy and the ratio is resolution independent.
  std::map<double, double> unit_disk_cp;
  for (const auto& row : sweep.rows) unit_disk_cp.emplace(row.disk_h, 0.0);
  std::vector<std::pair<double, double>> disks(unit_disk_cp.begin(), unit_disk_cp.end());
  parallel_for(disks.size(), options.threads, [&](std::size_t i) {
    auto mesh = std::make_shared<const TriMesh>(mesh_disk(1.0, Point::Zero(), disks[i].first));
    disks[i].second = minimize_quotient(mesh, solver).cp;
  });
  for (const auto& [dh, cp] : disks) unit_disk_cp[dh] = cp;

  parallel_for(sweep.rows.size(), options.threads, [&](std::size_t i) {
    auto& row = sweep.rows[i];
    row.cp_unit_disk = unit_disk_cp.at(row.disk_h);
    row.cp_scaled_disk = std::pow(row.r, -4.0 / p) * row.cp_unit_disk;
    try {
      auto mesh = std::make_shared<const TriMesh>(mesh_map_image(map, row.r, h));
      const SolveResult image = minimize_quotient(mesh, solver);
      row.cp_image = image.cp;
      row.phi_ratio = image.cp / row.cp_scaled_disk;
      row.reciprocal = 1.0 / row.phi_ratio;
      row.valid = image.converged;
      if (!image.converged) row.skip_reason = "NotConverged";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FoldedMesh && e.code() != ErrorCode::PoleHit &&
          e.code() != ErrorCode::CgStalled) {
        throw;
      }
      row.skip_reason = std::string(to_string(e.code()));
    }
  });

  std::vector<double> log_r, ratio, reciprocal;
  for (const auto& row : sweep.rows) {
    if (!row.valid) continue;
    log_r.push_back(row.log_r);
    ratio.push_back(row.phi_ratio);
    reciprocal.push_back(row.reciprocal);
  }
  if (ratio.size() < 4) throw Error(ErrorCode::SweepTooSparse, "fewer than 4 valid sweep rows");

  sweep.is_monotone_decreasing = monotone_decreasing(ratio);
  sweep.is_constant = nearly_constant(ratio);
  if (p <= 2.0) sweep.reciprocal_logconvex = convex_in(log_r, reciprocal);

  const auto first = std::find_if(sweep.rows.begin(), sweep.rows.end(), [](const SweepRow& r) { return r.valid; });
  const auto second = std::find_if(first + 1, sweep.rows.end(), [](const SweepRow& r) { return r.valid; });
  sweep.extrapolated_limit = richardson_r2_limit(first->r, first->phi_ratio, second->r, second->phi_ratio);
  sweep.expected_limit = std::pow(std::abs(eval_derivative(map, Complex{})), -4.0 / p);
  return sweep;
}

}  // namespace sobolev
