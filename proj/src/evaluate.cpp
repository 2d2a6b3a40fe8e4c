#include "sislab/verify/evaluate.hpp"

#include "sislab/errors.hpp"
#include "sislab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sislab {

namespace {
constexpr Scalar kPi = 3.141592653589793238462643383279;
}

Scalar relative_heading(const EnvState& state) {
  const Scalar bearing =
      std::atan2(state.hazard_x - state.x, state.hazard_y - state.y);
  return wrap_angle(state.heading - bearing);
}

EvalTrajectoriesResult eval_trajectories(const PolicyFn& policy,
                                         const SafetyIndexParams& zeta,
                                         const EnvConfig& config, int n_trajectories,
                                         std::uint64_t seed, const GridSpec& grid) {
  if (n_trajectories < 1) throw UsageError("eval_trajectories: N must be >= 1");
  validate(grid);

  EvalTrajectoriesResult out;
  int success = 0, phi0_violated = 0, infeasible = 0;
  Scalar tracking_acc = 0.0;
  std::size_t tracking_count = 0;

  for (int traj = 0; traj < n_trajectories; ++traj) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(traj)));
    EnvState s = reset(config, rng);
    bool any_phi0 = false, any_infeasible = false;
    ViolationTrace trace;

    auto record_state = [&](const EnvState& st) {
      const KinematicPair kp = distance_features(st);
      out.visited.push_back(
          VisitedState{kp.d, kp.d_dot, relative_heading(st), st.speed});
      if (kp.d < config.hazard_radius) any_phi0 = true;
      if (kp.d > 0.0 && !is_state_feasible(zeta, st, config, grid).first)
        any_infeasible = true;
    };

    record_state(s);
    while (s.step < config.max_steps) {
      const KinematicPair kin = distance_features(s);
      const Action a = policy(observe(s, config));
      auto [next, result] = step(s, a, config);
      if (constraint_violated(delta_phi(zeta, kin, result.kinematics)))
        ++trace.violations;
      tracking_acc += tracking_error(next, config);
      ++tracking_count;
      record_state(next);
      s = next;
    }

    if (any_phi0) ++phi0_violated;
    if (any_infeasible) ++infeasible;
    if (!any_phi0 && !any_infeasible) ++success;
    out.traces.push_back(trace);
  }

  out.report.trajectories = n_trajectories;
  const Scalar n = static_cast<Scalar>(n_trajectories);
  out.report.success_rate = static_cast<Scalar>(success) / n;
  out.report.phi0_violation_rate = static_cast<Scalar>(phi0_violated) / n;
  out.report.infeasible_rate = static_cast<Scalar>(infeasible) / n;
  out.report.avg_tracking_error =
      tracking_count > 0 ? tracking_acc / static_cast<Scalar>(tracking_count) : 0.0;
  return out;
}

std::vector<KinematicPair> project_samples(const std::vector<VisitedState>& visited) {
  if (visited.empty()) throw UsageError("project_samples: empty input");
  std::vector<KinematicPair> points;
  points.reserve(visited.size());
  for (const VisitedState& v : visited) points.push_back(KinematicPair{v.d, v.d_dot});
  return points;
}

std::vector<std::uint8_t> visited_cell_mask(const std::vector<VisitedState>& visited,
                                            const GridSpec& grid) {
  validate(grid);
  std::vector<std::uint8_t> mask(
      static_cast<std::size_t>(grid.d_cells) * grid.heading_cells * grid.speed_cells, 0);
  for (const VisitedState& v : visited) {
    if (v.d < grid.d_lo || v.d >= grid.d_hi) continue;
    if (v.speed < grid.speed_lo || v.speed >= grid.speed_hi) continue;
    const int di = std::clamp(
        static_cast<int>((v.d - grid.d_lo) / (grid.d_hi - grid.d_lo) * grid.d_cells), 0,
        grid.d_cells - 1);
    const Scalar h = wrap_angle(v.rel_heading);
    const int hi = std::clamp(
        static_cast<int>((h + kPi) / (2.0 * kPi) * grid.heading_cells), 0,
        grid.heading_cells - 1);
    const int si = std::clamp(
        static_cast<int>((v.speed - grid.speed_lo) / (grid.speed_hi - grid.speed_lo) *
                         grid.speed_cells),
        0, grid.speed_cells - 1);
    mask[(static_cast<std::size_t>(di) * grid.heading_cells + hi) * grid.speed_cells + si] = 1;
  }
  return mask;
}

std::size_t infeasible_in_envelope(const FeasibilityMap& map,
                                   const std::vector<std::uint8_t>& mask) {
  if (mask.size() != map.cells.size())
    throw UsageError("infeasible_in_envelope: mask does not match grid");
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] && map.cells[i].status == CellStatus::Infeasible) ++count;
  return count;
}

void write_report_csv(const EvalReport& report, const std::string& path,
                      const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "trajectories,success_rate,phi0_violation_rate,infeasible_rate,avg_tracking_error\n";
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f\n", report.trajectories,
                report.success_rate, report.phi0_violation_rate, report.infeasible_rate,
                report.avg_tracking_error);
  out << buf;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_visited_csv(const std::vector<VisitedState>& visited, const std::string& path,
                       const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "d,d_dot,rel_heading,speed\n";
  char buf[160];
  for (const VisitedState& v : visited) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", v.d, v.d_dot,
                  v.rel_heading, v.speed);
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<VisitedState> read_visited_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<VisitedState> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("d,", 0) == 0) continue;
    std::istringstream ss(line);
    VisitedState v;
    char comma;
    if (!(ss >> v.d >> comma >> v.d_dot >> comma >> v.rel_heading >> comma >> v.speed))
      throw IoError("malformed visited-state row in '" + path + "': " + line);
    out.push_back(v);
  }
  return out;
}

} // namespace sislab
