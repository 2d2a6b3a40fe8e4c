#pragma once

#include "sislab/env/point_env.hpp"
#include "sislab/verify/feasibility.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sislab {

using PolicyFn = std::function<Action(const Vec&)>;

// Aggregate over N evaluation trajectories. A trajectory succeeds iff it
// never violates phi0 and never visits a state the one-step oracle marks
// infeasible; the three rates therefore satisfy
// success_rate = 1 - rate(any phi0 violation or infeasible state).
struct EvalReport {
  int trajectories = 0;
  Scalar success_rate = 0.0;
  Scalar phi0_violation_rate = 0.0;
  Scalar infeasible_rate = 0.0;
  Scalar avg_tracking_error = 0.0;
};

// Per-episode count of steps whose transition violates the safe action
// constraint (delta_phi >= 0).
struct ViolationTrace {
  int violations = 0;
};

// Visited-state record used for envelopes and distribution projections.
struct VisitedState {
  Scalar d = 0.0;
  Scalar d_dot = 0.0;
  Scalar rel_heading = 0.0; // heading relative to the hazard bearing
  Scalar speed = 0.0;
};

struct EvalTrajectoriesResult {
  EvalReport report;
  std::vector<ViolationTrace> traces;
  std::vector<VisitedState> visited; // every post-reset state of every episode
};

// Runs N episodes under the given (typically greedy-mean) policy; per step
// records phi0 violations, constraint violations under zeta, and pointwise
// feasibility via the action-grid oracle.
EvalTrajectoriesResult eval_trajectories(const PolicyFn& policy,
                                         const SafetyIndexParams& zeta,
                                         const EnvConfig& config, int n_trajectories,
                                         std::uint64_t seed, const GridSpec& grid);

// Heading of the state relative to the hazard bearing, in (-pi, pi].
Scalar relative_heading(const EnvState& state);

// Exact (d, d_dot) projection of visited states or buffer kinematics.
std::vector<KinematicPair> project_samples(const std::vector<VisitedState>& visited);

// Grid-cell envelope: flags of cells containing at least one visited state.
std::vector<std::uint8_t> visited_cell_mask(const std::vector<VisitedState>& visited,
                                            const GridSpec& grid);

// Infeasible-cell count restricted to an envelope mask.
std::size_t infeasible_in_envelope(const FeasibilityMap& map,
                                   const std::vector<std::uint8_t>& mask);

void write_report_csv(const EvalReport& report, const std::string& path,
                      const std::string& header_comment);
void write_visited_csv(const std::vector<VisitedState>& visited, const std::string& path,
                       const std::string& header_comment);
std::vector<VisitedState> read_visited_csv(const std::string& path);

} // namespace sislab
