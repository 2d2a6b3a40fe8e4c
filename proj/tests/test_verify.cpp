#include <doctest.h>

#include "sislab/errors.hpp"
#include "sislab/verify/evaluate.hpp"
#include "sislab/verify/feasibility.hpp"

#include <algorithm>
#include <cmath>

using namespace sislab;

namespace {

GridSpec coarse_grid() {
  GridSpec g;
  g.d_cells = 16;
  g.heading_cells = 12;
  g.speed_cells = 8;
  g.action_cells = 9;
  return g;
}

} // namespace

TEST_CASE("grid validation") {
  GridSpec g = coarse_grid();
  g.d_cells = 1;
  CHECK_THROWS_AS(validate(g), ConfigError);
  g = coarse_grid();
  g.d_lo = 3.0;
  g.d_hi = 0.05;
  CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("action grid covers the box endpoints") {
  CHECK(action_grid_value(21, 0) == -1.0);
  CHECK(action_grid_value(21, 20) == 1.0);
  CHECK(action_grid_value(21, 10) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("canonical state geometry") {
  const EnvState s = canonical_state(1.5, 0.0, 1.0);
  const KinematicPair kp = distance_features(s);
  CHECK(kp.d == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(kp.d_dot == doctest::Approx(-1.0).epsilon(1e-12)); // inbound at rel 0

  const EnvState away = canonical_state(1.5, 3.141592653589793, 1.0);
  CHECK(distance_features(away).d_dot == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phi0 infeasibility near the hazard at speed") {
  const EnvConfig cfg;
  const SafetyIndexParams z = preset_phi0(0.5);
  const GridSpec g = coarse_grid();

  // Inbound at v_max just outside the disc: one step cannot keep d > d_min.
  EnvState state = canonical_state(0.51, 0.0, cfg.v_max);
  const auto [feasible, min_dphi] = is_state_feasible(z, state, cfg, g);
  CHECK_FALSE(feasible);
  CHECK(min_dphi >= 0.0);

  // Far away at rest: trivially feasible.
  const auto [ok, dphi_far] = is_state_feasible(z, canonical_state(2.0, 0.0, 0.0), cfg, g);
  CHECK(ok);
  CHECK(dphi_far < 0.0);
}

TEST_CASE("phi_f: far slow states are feasible") {
  const EnvConfig cfg;
  const SafetyIndexParams z = preset_phi_f(0.5);
  const GridSpec g = coarse_grid();
  const auto [ok, dphi] = is_state_feasible(z, canonical_state(2.0, 0.0, 0.0), cfg, g);
  CHECK(ok);
  CHECK(dphi < 0.0);
}

TEST_CASE("feasibility grid: counts, argmin soundness, refinement monotonicity") {
  const EnvConfig cfg;
  const SafetyIndexParams z = preset_phi0(0.5);
  GridSpec g = coarse_grid();

  const FeasibilityMap map = feasibility_grid(z, cfg, g, 2);
  CHECK(map.cells.size() ==
        static_cast<std::size_t>(g.d_cells) * g.heading_cells * g.speed_cells);
  CHECK(map.infeasible_count > 0); // the raw specification is invalid here

  std::size_t recount = 0;
  for (const FeasibilityCell& c : map.cells) {
    if (c.status == CellStatus::Infeasible) ++recount;
    if (c.status == CellStatus::Degenerate) continue;
    // Oracle soundness: replaying the recorded argmin action reproduces the
    // stored minimum exactly.
    const Scalar replay =
        cell_action_delta_phi(z, cfg, c, c.argmin_rot, c.argmin_acc, g.action_cells);
    CHECK(replay == c.min_delta_phi);
    CHECK((c.status == CellStatus::Feasible) == (c.min_delta_phi < 0.0));
  }
  CHECK(recount == map.infeasible_count);

  // Finer action grid never turns a feasible cell infeasible.
  GridSpec finer = g;
  finer.action_cells = 17; // superset of the 9-point grid
  const FeasibilityMap fine_map = feasibility_grid(z, cfg, finer, 2);
  CHECK(fine_map.infeasible_count <= map.infeasible_count);
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.cells[i].status == CellStatus::Feasible)
      CHECK(fine_map.cells[i].status == CellStatus::Feasible);
}

TEST_CASE("feasibility grid is identical across thread counts") {
  const EnvConfig cfg;
  const SafetyIndexParams z = preset_phi_h(0.5);
  GridSpec g = coarse_grid();
  g.d_cells = 10;
  const FeasibilityMap m1 = feasibility_grid(z, cfg, g, 1);
  const FeasibilityMap m2 = feasibility_grid(z, cfg, g, 2);
  REQUIRE(m1.cells.size() == m2.cells.size());
  for (std::size_t i = 0; i < m1.cells.size(); ++i) {
    CHECK(m1.cells[i].min_delta_phi == m2.cells[i].min_delta_phi);
    CHECK(m1.cells[i].status == m2.cells[i].status);
  }
}

TEST_CASE("projection and overlap fractions") {
  const EnvConfig cfg;
  const GridSpec g = coarse_grid();

  // phi0 map has infeasible cells; a point well inside one of the marked
  // bins must overlap, a far point must not.
  const FeasibilityMap map = feasibility_grid(preset_phi0(0.5), cfg, g, 2);
  const ProjectedMap proj = project_infeasible(map, 20);

  std::vector<KinematicPair> far_points = {{2.9, 0.5}, {2.5, -0.1}};
  CHECK(overlap_fraction(far_points, proj) == 0.0);

  // An all-feasible map yields zero overlap for any points.
  SafetyIndexParams generous = preset_phi_f(0.5);
  generous.sigma = 0.0;
  GridSpec far_grid = g;
  far_grid.d_lo = 2.0; // far from the hazard everything dissipates
  const FeasibilityMap free_map = feasibility_grid(generous, cfg, far_grid, 2);
  CHECK(free_map.infeasible_count == 0);
  const ProjectedMap free_proj = project_infeasible(free_map, 20);
  std::vector<KinematicPair> pts = {{2.5, 0.0}, {2.2, -1.0}, {9.0, 0.0}};
  CHECK(overlap_fraction(pts, free_proj) == 0.0);

  // All samples inside an all-infeasible region overlap fully.
  std::size_t marked = 0;
  for (auto f : proj.infeasible) marked += f;
  REQUIRE(marked > 0);
  // find one marked bin and place points at its center
  for (int di = 0; di < proj.d_bins; ++di)
    for (int j = 0; j < proj.dd_bins; ++j)
      if (proj.infeasible[static_cast<std::size_t>(di) * proj.dd_bins + j]) {
        const Scalar d = grid_cell_center(proj.d_lo, proj.d_hi, proj.d_bins, di);
        const Scalar dd = grid_cell_center(proj.dd_lo, proj.dd_hi, proj.dd_bins, j);
        std::vector<KinematicPair> inside = {{d, dd}, {d, dd}};
        CHECK(overlap_fraction(inside, proj) == 1.0);
        goto done;
      }
done:;

  std::vector<KinematicPair> empty;
  CHECK_THROWS_AS((void)overlap_fraction(empty, proj), UsageError);
}

TEST_CASE("eval_trajectories: constructed crash policy fails, rates partition") {
  EnvConfig cfg;
  cfg.init_distribution = 1;
  const GridSpec g = coarse_grid();

  // Full throttle while steering the heading to 0: in distribution 1 both
  // agent and hazard sit on the x = 0 line, so this policy drives into it.
  const PolicyFn crash = [](const Vec& obs) {
    return Action{std::clamp(-8.0 * obs(3), -1.0, 1.0), 1.0}; // obs(3) = sin(heading)
  };
  const auto res = eval_trajectories(crash, preset_phi0(0.5), cfg, 20, 5, g);
  CHECK(res.report.phi0_violation_rate == doctest::Approx(1.0));
  CHECK(res.report.success_rate == doctest::Approx(0.0));
  CHECK(res.report.success_rate + res.report.phi0_violation_rate >= 1.0);
  CHECK(res.traces.size() == 20);
  CHECK(res.visited.size() == static_cast<std::size_t>(20 * (cfg.max_steps + 1)));

  // A policy that freezes in place never reaches the hazard.
  const PolicyFn stay = [](const Vec&) { return Action{0.0, -1.0}; };
  const auto res2 = eval_trajectories(stay, preset_phi_f(0.5), cfg, 10, 5, g);
  CHECK(res2.report.phi0_violation_rate == 0.0);
  CHECK(res2.report.success_rate == doctest::Approx(1.0));
  for (const auto& trace : res2.traces) CHECK(trace.violations <= cfg.max_steps);
}

TEST_CASE("visited cell mask and envelope restriction") {
  const GridSpec g = coarse_grid();
  std::vector<VisitedState> visited = {{1.0, -0.5, 0.0, 0.5}, {2.0, 0.0, 1.0, 1.0}};
  const auto mask = visited_cell_mask(visited, g);
  std::size_t marked = 0;
  for (auto f : mask) marked += f;
  CHECK(marked == 2);

  const EnvConfig cfg;
  const FeasibilityMap map = feasibility_grid(preset_phi0(0.5), cfg, g, 2);
  const std::size_t restricted = infeasible_in_envelope(map, mask);
  CHECK(restricted <= map.infeasible_count);
  CHECK(restricted <= marked);
}

TEST_CASE("projection of visited states is exact") {
  std::vector<VisitedState> visited = {{1.25, -0.75, 0.3, 1.0}};
  const auto pts = project_samples(visited);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].d == 1.25);
  CHECK(pts[0].d_dot == -0.75);
  std::vector<VisitedState> empty;
  CHECK_THROWS_AS((void)project_samples(empty), UsageError);
}
