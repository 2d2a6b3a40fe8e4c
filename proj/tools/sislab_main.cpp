// Command-line entry points: train / eval / verify.
//
// Exit codes: 0 success, 2 configuration error, 3 artifact or IO error,
// 4 numerical abort.

#include "sislab/errors.hpp"
#include "sislab/io/checkpoint.hpp"
#include "sislab/io/log_writer.hpp"
#include "sislab/io/run_config.hpp"
#include "sislab/verify/evaluate.hpp"
#include "sislab/verify/feasibility.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace sislab;

namespace {

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return default_run_config();
  return load_run_config(path);
}

void apply_index_flags(RunConfig& cfg, const std::string& index, bool no_sis) {
  if (!index.empty()) {
    if (index != "phi0" && index != "phi_h" && index != "phi_f" && index != "learned")
      throw ConfigError("--index must be phi0, phi_h, phi_f or learned (got '" + index +
                        "')");
    cfg.index_preset = index;
    // Fixed presets are baselines; only the learned index trains zeta.
    if (index != "learned") cfg.trainer.sis_enabled = false;
  }
  if (no_sis) cfg.trainer.sis_enabled = false;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string run_stamp(std::uint64_t seed, const std::string& hash_hex) {
  return "seed=" + std::to_string(seed) + " config_hash=" + hash_hex;
}

int cmd_train(const std::string& config_path, std::uint64_t seed, std::uint64_t steps,
              const std::string& out_dir, const std::string& index, bool no_sis) {
  RunConfig cfg = load_config_or_default(config_path);
  apply_index_flags(cfg, index, no_sis);

  fs::create_directories(out_dir);
  const std::string cfg_text = serialize(cfg);
  const std::string hash_hex = config_hash_hex(cfg);
  write_text_file(fs::path(out_dir) / "config.snapshot.cfg", cfg_text);

  JsonlLogger log((fs::path(out_dir) / "train_log.jsonl").string(), seed, hash_hex);
  MetricsCsv csv((fs::path(out_dir) / "metrics.csv").string(), seed, hash_hex);

  Trainer trainer(cfg.trainer, cfg.env, make_zeta(cfg), seed);
  std::uint64_t next_checkpoint =
      cfg.checkpoint_every > 0 ? cfg.checkpoint_every : UINT64_MAX;
  trainer.train(steps, [&](const EvalRecord& rec) {
    log.log_eval(rec);
    csv.log_eval(rec);
    std::printf("step %llu return %.3f cost_sum %.1f violations %.2f zeta (%.4f, %.4f, %.4f)\n",
                static_cast<unsigned long long>(rec.env_step), rec.return_mean,
                rec.cost_sum, rec.violations_mean, rec.sigma, rec.n, rec.k);
    std::fflush(stdout);
    if (rec.env_step >= next_checkpoint) {
      const auto path = fs::path(out_dir) /
                        ("checkpoint_" + std::to_string(rec.env_step) + ".ckpt");
      save_checkpoint(path.string(),
                      snapshot_trainer(trainer, cfg_text, config_hash(cfg), seed));
      next_checkpoint += cfg.checkpoint_every;
    }
  });

  save_checkpoint((fs::path(out_dir) / "checkpoint_final.ckpt").string(),
                  snapshot_trainer(trainer, cfg_text, config_hash(cfg), seed));
  std::printf("done: %llu env steps, artifacts in %s\n",
              static_cast<unsigned long long>(trainer.env_steps()), out_dir.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, int n, std::uint64_t seed,
             const std::string& out_dir) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const RunConfig cfg = parse_run_config(ck.config_text, checkpoint_path + ":config");
  Trainer trainer(cfg.trainer, cfg.env, ck.zeta, ck.seed);
  restore_trainer(trainer, ck);

  const auto result = eval_trajectories(trainer.greedy_policy(), trainer.zeta(), cfg.env,
                                        n, seed, cfg.grid);
  const EvalReport& r = result.report;
  std::printf("trajectories            %d\n", r.trajectories);
  std::printf("success_rate            %.4f\n", r.success_rate);
  std::printf("phi0_violation_rate     %.4f\n", r.phi0_violation_rate);
  std::printf("infeasible_rate         %.4f\n", r.infeasible_rate);
  std::printf("avg_tracking_error      %.4f\n", r.avg_tracking_error);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string stamp = run_stamp(seed, config_hash_hex(cfg));
    write_report_csv(r, (fs::path(out_dir) / "eval_report.csv").string(), stamp);
    write_visited_csv(result.visited, (fs::path(out_dir) / "visited_states.csv").string(),
                      stamp);
    std::ofstream viol((fs::path(out_dir) / "violations.csv").string());
    if (!viol) throw IoError("cannot open violations.csv for writing");
    viol << "# " << stamp << "\nepisode,violations\n";
    for (std::size_t i = 0; i < result.traces.size(); ++i)
      viol << i << "," << result.traces[i].violations << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& checkpoint_path, const std::string& index,
               const std::string& config_path, const std::string& envelope_path,
               const std::string& out_dir, std::optional<int> d_cells,
               std::optional<int> heading_cells, std::optional<int> speed_cells,
               std::optional<int> action_cells, int threads) {
  RunConfig cfg;
  SafetyIndexParams zeta;
  if (!checkpoint_path.empty()) {
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    cfg = parse_run_config(ck.config_text, checkpoint_path + ":config");
    zeta = ck.zeta;
  } else {
    cfg = load_config_or_default(config_path);
    if (index.empty())
      throw ConfigError("verify needs either --checkpoint or --index");
    cfg.index_preset = index;
    zeta = make_zeta(cfg);
  }

  GridSpec grid = cfg.grid;
  if (d_cells) grid.d_cells = *d_cells;
  if (heading_cells) grid.heading_cells = *heading_cells;
  if (speed_cells) grid.speed_cells = *speed_cells;
  if (action_cells) grid.action_cells = *action_cells;
  validate(grid);

  const FeasibilityMap map = feasibility_grid(zeta, cfg.env, grid, threads);

  std::size_t reported = map.infeasible_count;
  std::size_t envelope_cells = map.cells.size();
  if (!envelope_path.empty()) {
    const auto visited = read_visited_csv(envelope_path);
    const auto mask = visited_cell_mask(visited, grid);
    reported = infeasible_in_envelope(map, mask);
    envelope_cells = 0;
    for (auto f : mask) envelope_cells += f;
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string stamp = "zeta sigma=" + std::to_string(zeta.sigma) +
                              " n=" + std::to_string(zeta.n) +
                              " k=" + std::to_string(zeta.k) +
                              " config_hash=" + config_hash_hex(cfg);
    write_map_csv(map, (fs::path(out_dir) / "feasibility_map.csv").string(), stamp);
    write_projection_csv(project_infeasible(map),
                         (fs::path(out_dir) / "feasibility_projection.csv").string(),
                         stamp);
  }

  std::printf("cells %zu evaluated, %zu in envelope, infeasible %zu\n", map.cells.size(),
              envelope_cells, reported);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety-index synthesis laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, index, checkpoint_path, envelope_path;
  std::uint64_t seed = 1, steps = 200000;
  int n_traj = 100;
  bool no_sis = false;

  auto* train = app.add_subcommand("train", "Train FAC-SIS (or a fixed-index baseline)");
  train->add_option("--config", config_path, "Config file (defaults apply when omitted)");
  train->add_option("--seed", seed, "Run seed");
  train->add_option("--steps", steps, "Total environment steps");
  train->add_option("--out", out_dir, "Output directory")->required();
  train->add_option("--index", index, "Safety index preset: phi0|phi_h|phi_f|learned");
  train->add_flag("--no-sis", no_sis, "Disable certificate updates (plain FAC)");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint over N trajectories");
  eval->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
  eval->add_option("--n", n_traj, "Number of trajectories");
  eval->add_option("--seed", seed, "Evaluation seed");
  eval->add_option("--out", out_dir, "Optional output directory for CSV reports");

  std::optional<int> d_cells, heading_cells, speed_cells, action_cells;
  int threads = 0;
  auto* verify = app.add_subcommand("verify", "Exhaustive one-step feasibility sweep");
  verify->add_option("--checkpoint", checkpoint_path, "Checkpoint (synthesized index)");
  verify->add_option("--index", index, "Preset to verify: phi0|phi_h|phi_f|learned");
  verify->add_option("--config", config_path, "Config file for env/grid settings");
  verify->add_option("--envelope", envelope_path,
                     "visited_states.csv restricting the verified cells");
  verify->add_option("--out", out_dir, "Output directory for map CSVs");
  verify->add_option("--d-cells", d_cells, "Distance resolution override");
  verify->add_option("--heading-cells", heading_cells, "Heading resolution override");
  verify->add_option("--speed-cells", speed_cells, "Speed resolution override");
  verify->add_option("--action-cells", action_cells, "Action-grid resolution override");
  verify->add_option("--threads", threads, "Worker threads (0 = SIS_LAB_THREADS or auto)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, seed, steps, out_dir, index, no_sis);
    if (eval->parsed()) return cmd_eval(checkpoint_path, n_traj, seed, out_dir);
    if (verify->parsed())
      return cmd_verify(checkpoint_path, index, config_path, envelope_path, out_dir,
                        d_cells, heading_cells, speed_cells, action_cells, threads);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 4;
  }
  return 0;
}
