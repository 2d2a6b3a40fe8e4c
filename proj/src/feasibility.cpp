#include "sislab/verify/feasibility.hpp"

#include "sislab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

namespace sislab {

namespace {
constexpr Scalar kPi = 3.141592653589793238462643383279;
}

void validate(const GridSpec& grid) {
  if (grid.d_cells < 2 || grid.heading_cells < 2 || grid.speed_cells < 2 ||
      grid.action_cells < 2)
    throw ConfigError("grid: all resolutions must be >= 2");
  if (!(grid.d_lo < grid.d_hi) || !(grid.speed_lo < grid.speed_hi))
    throw ConfigError("grid: ranges must be ordered");
}

std::size_t FeasibilityMap::cell_index(int di, int hi, int si) const {
  return (static_cast<std::size_t>(di) * grid.heading_cells + hi) * grid.speed_cells + si;
}

const FeasibilityCell& FeasibilityMap::at(int di, int hi, int si) const {
  return cells[cell_index(di, hi, si)];
}

Scalar grid_cell_center(Scalar lo, Scalar hi, int cells, int i) {
  return lo + (static_cast<Scalar>(i) + 0.5) * (hi - lo) / static_cast<Scalar>(cells);
}

Scalar action_grid_value(int cells, int i) {
  return -1.0 + 2.0 * static_cast<Scalar>(i) / static_cast<Scalar>(cells - 1);
}

EnvState canonical_state(Scalar d, Scalar rel_heading, Scalar speed) {
  EnvState s;
  s.x = 0.0;
  s.y = -d;
  s.heading = wrap_angle(rel_heading);
  s.speed = speed;
  s.hazard_x = 0.0;
  s.hazard_y = 0.0;
  s.step = 0;
  return s;
}

int resolve_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("SIS_LAB_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(n, 1);
}

namespace {

// Minimum residual over the action grid from an absolute state.
void sweep_actions(const SafetyIndexParams& zeta, const EnvConfig& config,
                   const EnvState& state, int action_cells, Scalar& min_dphi,
                   int& argmin_rot, int& argmin_acc) {
  const KinematicPair kp = distance_features(state);
  const Scalar threshold = std::max(phi(zeta, kp) - zeta.eta_d, 0.0);
  min_dphi = std::numeric_limits<Scalar>::infinity();
  argmin_rot = argmin_acc = 0;
  for (int ri = 0; ri < action_cells; ++ri) {
    for (int ai = 0; ai < action_cells; ++ai) {
      const Action a{action_grid_value(action_cells, ri),
                     action_grid_value(action_cells, ai)};
      const EnvState next = advance_kinematics(state, a, config);
      const KinematicPair kp_next = distance_features(next);
      if (!(kp_next.d > 0.0)) continue; // exact overlap, skip sample
      const Scalar dphi = phi(zeta, kp_next) - threshold;
      if (dphi < min_dphi) {
        min_dphi = dphi;
        argmin_rot = ri;
        argmin_acc = ai;
      }
    }
  }
}

} // namespace

FeasibilityMap feasibility_grid(const SafetyIndexParams& zeta, const EnvConfig& config,
                                const GridSpec& grid, int threads) {
  validate(grid);
  validate(config);

  FeasibilityMap map;
  map.grid = grid;
  const std::size_t total = static_cast<std::size_t>(grid.d_cells) * grid.heading_cells *
                            static_cast<std::size_t>(grid.speed_cells);
  map.cells.resize(total);

  const int n_threads = resolve_thread_count(threads);
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int si = static_cast<int>(idx % grid.speed_cells);
      const int hi = static_cast<int>((idx / grid.speed_cells) % grid.heading_cells);
      const int di = static_cast<int>(idx / grid.speed_cells / grid.heading_cells);

      FeasibilityCell& cell = map.cells[idx];
      cell.d = grid_cell_center(grid.d_lo, grid.d_hi, grid.d_cells, di);
      cell.rel_heading = grid_cell_center(-kPi, kPi, grid.heading_cells, hi);
      cell.speed = grid_cell_center(grid.speed_lo, grid.speed_hi, grid.speed_cells, si);
      if (!(cell.d > 0.0)) {
        cell.status = CellStatus::Degenerate;
        cell.min_delta_phi = std::numeric_limits<Scalar>::quiet_NaN();
        continue;
      }
      const EnvState state = canonical_state(cell.d, cell.rel_heading, cell.speed);
      sweep_actions(zeta, config, state, grid.action_cells, cell.min_delta_phi,
                    cell.argmin_rot, cell.argmin_acc);
      cell.status =
          cell.min_delta_phi < 0.0 ? CellStatus::Feasible : CellStatus::Infeasible;
    }
  };

  if (n_threads <= 1 || total < 2) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      if (begin >= total) break;
      pool.emplace_back(worker, begin, std::min(begin + chunk, total));
    }
    for (auto& th : pool) th.join();
  }

  for (const FeasibilityCell& c : map.cells)
    if (c.status == CellStatus::Infeasible) ++map.infeasible_count;
  return map;
}

std::pair<bool, Scalar> is_state_feasible(const SafetyIndexParams& zeta,
                                          const EnvState& state, const EnvConfig& config,
                                          const GridSpec& grid) {
  validate(grid);
  const KinematicPair kp = distance_features(state);
  if (!(kp.d > 0.0)) throw UsageError("is_state_feasible: degenerate distance");
  Scalar min_dphi;
  int r, a;
  sweep_actions(zeta, config, state, grid.action_cells, min_dphi, r, a);
  return {min_dphi < 0.0, min_dphi};
}

Scalar cell_action_delta_phi(const SafetyIndexParams& zeta, const EnvConfig& config,
                             const FeasibilityCell& cell, int rot_index, int acc_index,
                             int action_cells) {
  const EnvState state = canonical_state(cell.d, cell.rel_heading, cell.speed);
  const KinematicPair kp = distance_features(state);
  const Action a{action_grid_value(action_cells, rot_index),
                 action_grid_value(action_cells, acc_index)};
  const EnvState next = advance_kinematics(state, a, config);
  return phi(zeta, distance_features(next)) - std::max(phi(zeta, kp) - zeta.eta_d, 0.0);
}

ProjectedMap project_infeasible(const FeasibilityMap& map, int dd_bins) {
  if (dd_bins < 2) throw ConfigError("project_infeasible: dd_bins must be >= 2");
  ProjectedMap proj;
  proj.d_lo = map.grid.d_lo;
  proj.d_hi = map.grid.d_hi;
  proj.d_bins = map.grid.d_cells;
  proj.dd_lo = -map.grid.speed_hi;
  proj.dd_hi = map.grid.speed_hi;
  proj.dd_bins = dd_bins;
  proj.infeasible.assign(static_cast<std::size_t>(proj.d_bins) * dd_bins, 0);

  for (int di = 0; di < map.grid.d_cells; ++di) {
    for (int hi = 0; hi < map.grid.heading_cells; ++hi) {
      for (int si = 0; si < map.grid.speed_cells; ++si) {
        const FeasibilityCell& c = map.at(di, hi, si);
        if (c.status != CellStatus::Infeasible) continue;
        const Scalar dd = -c.speed * std::cos(c.rel_heading);
        int j = static_cast<int>((dd - proj.dd_lo) / (proj.dd_hi - proj.dd_lo) * dd_bins);
        j = std::clamp(j, 0, dd_bins - 1);
        proj.infeasible[static_cast<std::size_t>(di) * dd_bins + j] = 1;
      }
    }
  }
  return proj;
}

Scalar overlap_fraction(const std::vector<KinematicPair>& points, const ProjectedMap& map) {
  if (points.empty()) throw UsageError("overlap_fraction: empty point set");
  std::size_t inside = 0;
  for (const KinematicPair& p : points) {
    if (p.d < map.d_lo || p.d >= map.d_hi) continue;
    if (p.d_dot < map.dd_lo || p.d_dot >= map.dd_hi) continue;
    const int di = std::clamp(
        static_cast<int>((p.d - map.d_lo) / (map.d_hi - map.d_lo) * map.d_bins), 0,
        map.d_bins - 1);
    const int j = std::clamp(
        static_cast<int>((p.d_dot - map.dd_lo) / (map.dd_hi - map.dd_lo) * map.dd_bins),
        0, map.dd_bins - 1);
    if (map.infeasible[static_cast<std::size_t>(di) * map.dd_bins + j]) ++inside;
  }
  return static_cast<Scalar>(inside) / static_cast<Scalar>(points.size());
}

void write_map_csv(const FeasibilityMap& map, const std::string& path,
                   const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "d_index,heading_index,speed_index,d,rel_heading,speed,min_delta_phi,status,"
         "argmin_rot,argmin_acc\n";
  char buf[256];
  for (int di = 0; di < map.grid.d_cells; ++di)
    for (int hi = 0; hi < map.grid.heading_cells; ++hi)
      for (int si = 0; si < map.grid.speed_cells; ++si) {
        const FeasibilityCell& c = map.at(di, hi, si);
        const char* status = c.status == CellStatus::Feasible     ? "feasible"
                             : c.status == CellStatus::Infeasible ? "infeasible"
                                                                  : "degenerate";
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%s,%d,%d\n", di, hi, si, c.d,
                      c.rel_heading, c.speed, c.min_delta_phi, status, c.argmin_rot,
                      c.argmin_acc);
        out << buf;
      }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_projection_csv(const ProjectedMap& map, const std::string& path,
                          const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "d_index,dd_index,d_center,dd_center,infeasible\n";
  char buf[160];
  for (int di = 0; di < map.d_bins; ++di)
    for (int j = 0; j < map.dd_bins; ++j) {
      const Scalar d = grid_cell_center(map.d_lo, map.d_hi, map.d_bins, di);
      const Scalar dd = grid_cell_center(map.dd_lo, map.dd_hi, map.dd_bins, j);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%d\n", di, j, d, dd,
                    static_cast<int>(map.infeasible[static_cast<std::size_t>(di) * map.dd_bins + j]));
      out << buf;
    }
  if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace sislab
