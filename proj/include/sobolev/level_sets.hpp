#pragma once

#include <optional>
#include <vector>

#include "sobolev/solver.hpp"

namespace sobolev {

/// One sample t of the superlevel family Sigma(t) = {phi >= t}.
struct LevelSetRow {
  double t = 0.0;
  double area = 0.0;    // A(t)
  double length = 0.0;  // l(t), length of {phi = t}
  double h0 = 0.0;      // int_{Sigma(t)} phi^(p-1)
  double h1 = 0.0;      // -(p/2) int_{Sigma(t)} phi^(p-1) <grad phi, x - x0>
  bool regular = true;  // false at the endpoints and where a vertex sits on the level
};

struct LevelSetTable {
  double p = 0.0;
  double lambda = 0.0;
  double phi_max = 0.0;
  Point base_point = Point::Zero();
  std::vector<LevelSetRow> rows;  // uniform t grid on [0, phi_max]
};

inline constexpr int kDefaultLevelSamples = 64;

/// Superlevel quantities by exact clipping of each P1 triangle against phi = t.
/// base_point defaults to the mesh centroid.
LevelSetTable level_set_table(const SolveResult& result, std::optional<Point> base_point = std::nullopt,
                              int samples = kDefaultLevelSamples);

struct LevelSetVerdicts {
  bool coarea_bound = false;     // (H0^2)' <= -8 pi A t^(p-1) / Lambda
  bool h1_identity = false;      // H1' = -p t^(p-1) A within 5 %
  bool combined_monotone = false;  // d/dt [H0^2 - 8 pi / (p Lambda) H1] <= 0
  int usable_rows = 0;
  double worst_coarea_margin = 0.0;    // max of ((H0^2)' - bound) / scale
  double worst_h1_error = 0.0;         // max relative error of the H1 identity
  double worst_combined_margin = 0.0;  // max of derivative / scale

  bool all_pass() const { return coarea_bound && h1_identity && combined_monotone; }
};

inline constexpr double kLevelSetSlack = 0.03;
inline constexpr double kH1IdentityTolerance = 0.05;
inline constexpr int kMinUsableLevelRows = 8;

/// Central differences over the regular interior rows. Throws InsufficientRegularRows
/// when fewer than 8 rows qualify.
LevelSetVerdicts verify_levelset_inequalities(const LevelSetTable& table, double p);

}  // namespace sobolev
