#pragma once

#include "sislab/env/point_env.hpp"
#include "sislab/index/safety_index.hpp"
#include "sislab/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sislab {

// Discretization of the hazard-relative state (distance, heading relative
// to the hazard bearing, speed) and of the normalized action box. State
// cells are evaluated at their centers; the action grid includes the box
// endpoints so saturated inputs are always tried.
struct GridSpec {
  Scalar d_lo = 0.05, d_hi = 3.0;
  int d_cells = 60;
  int heading_cells = 36; // over (-pi, pi]
  Scalar speed_lo = 0.0, speed_hi = 2.0;
  int speed_cells = 20;
  int action_cells = 21; // per action axis, endpoints included
};

void validate(const GridSpec& grid);

enum class CellStatus : std::uint8_t { Feasible, Infeasible, Degenerate };

struct FeasibilityCell {
  Scalar d = 0.0;
  Scalar rel_heading = 0.0;
  Scalar speed = 0.0;
  Scalar min_delta_phi = 0.0;
  int argmin_rot = 0; // action-grid indices of the minimizing action
  int argmin_acc = 0;
  CellStatus status = CellStatus::Feasible;
};

struct FeasibilityMap {
  GridSpec grid;
  std::vector<FeasibilityCell> cells; // d-major, then heading, then speed
  std::size_t infeasible_count = 0;

  std::size_t cell_index(int di, int hi, int si) const;
  const FeasibilityCell& at(int di, int hi, int si) const;
};

Scalar grid_cell_center(Scalar lo, Scalar hi, int cells, int i);
Scalar action_grid_value(int cells, int i); // linspace over [-1, 1]

// Canonical absolute state for a relative cell: hazard at the origin,
// agent at (0, -d); rel_heading 0 then points straight at the hazard.
EnvState canonical_state(Scalar d, Scalar rel_heading, Scalar speed);

// One-step exhaustive sweep: for every cell, try every action-grid point
// through the environment dynamics and record the minimum constraint
// residual. A cell is infeasible iff no action makes it negative.
// Thread count: 0 = read SIS_LAB_THREADS (which itself treats 0 as auto).
FeasibilityMap feasibility_grid(const SafetyIndexParams& zeta, const EnvConfig& config,
                                const GridSpec& grid, int threads = 0);

// Pointwise oracle for an arbitrary absolute state.
std::pair<bool, Scalar> is_state_feasible(const SafetyIndexParams& zeta,
                                          const EnvState& state, const EnvConfig& config,
                                          const GridSpec& grid);

// Residual of a single (cell, action) pair; the grid sweep is the minimum
// of this over the action grid (exposed for the soundness check).
Scalar cell_action_delta_phi(const SafetyIndexParams& zeta, const EnvConfig& config,
                             const FeasibilityCell& cell, int rot_index, int acc_index,
                             int action_cells);

// (d, d_dot) projection of the infeasible cells. Bin (i, j) is marked when
// at least one infeasible full-state cell lands in it.
struct ProjectedMap {
  Scalar d_lo = 0.0, d_hi = 0.0;
  int d_bins = 0;
  Scalar dd_lo = 0.0, dd_hi = 0.0;
  int dd_bins = 0;
  std::vector<std::uint8_t> infeasible; // d-major
};

ProjectedMap project_infeasible(const FeasibilityMap& map, int dd_bins = 40);

// Fraction of sample points lying in marked bins; points outside the grid
// count as non-overlapping.
Scalar overlap_fraction(const std::vector<KinematicPair>& points, const ProjectedMap& map);

void write_map_csv(const FeasibilityMap& map, const std::string& path,
                   const std::string& header_comment);
void write_projection_csv(const ProjectedMap& map, const std::string& path,
                          const std::string& header_comment);

// Number of worker threads: explicit request, else SIS_LAB_THREADS, else
// hardware concurrency.
int resolve_thread_count(int requested);

} // namespace sislab
