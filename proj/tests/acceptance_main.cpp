// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Training artifacts are cached in the
// work directory so reruns skip finished runs.

#include "sislab/io/checkpoint.hpp"
#include "sislab/io/log_writer.hpp"
#include "sislab/io/run_config.hpp"
#include "sislab/verify/evaluate.hpp"
#include "sislab/verify/feasibility.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sislab;
using nlohmann::json;

namespace {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<CriterionResult> g_results;

void report(const std::string& id, bool pass, const std::string& detail) {
  g_results.push_back({id, pass, detail});
  std::printf("%s %s — %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------------------
// A1 — gradient exactness of the certificate residual

void run_a1() {
  const double t0 = now_s();
  Rng rng(20240901);
  int tested = 0, failures = 0;
  Scalar worst = 0.0;
  while (tested < 1000) {
    SafetyIndexParams z;
    z.sigma = rng.uniform(0.0, 1.5);
    z.n = rng.uniform(0.6, 3.5);
    z.k = rng.uniform(0.0, 4.0);
    z.eta_d = rng.uniform(0.0, 0.2);
    z.d_min = 0.5;
    const KinematicPair kp{rng.uniform(0.05, 3.0), rng.uniform(-2.0, 2.0)};
    const KinematicPair kp_next{rng.uniform(0.05, 3.0), rng.uniform(-2.0, 2.0)};
    if (std::abs(phi(z, kp) - z.eta_d) <= 1e-3) continue;
    ++tested;

    const Vec3 analytic = grad_delta_phi(z, kp, kp_next);
    Vec3 numeric;
    const Scalar h = 1e-6;
    auto eval = [&](Scalar sigma, Scalar n, Scalar k) {
      SafetyIndexParams zz = z;
      zz.sigma = sigma;
      zz.n = n;
      zz.k = k;
      return delta_phi(zz, kp, kp_next);
    };
    numeric(0) = (eval(z.sigma + h, z.n, z.k) - eval(z.sigma - h, z.n, z.k)) / (2 * h);
    numeric(1) = (eval(z.sigma, z.n + h, z.k) - eval(z.sigma, z.n - h, z.k)) / (2 * h);
    numeric(2) = (eval(z.sigma, z.n, z.k + h) - eval(z.sigma, z.n, z.k - h)) / (2 * h);
    const Scalar rel = (analytic - numeric).norm() / std::max(numeric.norm(), Scalar(1e-10));
    worst = std::max(worst, rel);
    if (rel > 1e-5) ++failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "grad delta_phi vs central differences: %d/1000 within 1e-5, worst rel %.2e, %.1fs",
                1000 - failures, worst, now_s() - t0);
  report("A1", failures == 0 && now_s() - t0 < 60.0, buf);
}

// ---------------------------------------------------------------------------
// A2 — gradient exactness of the network substrate

void run_a2() {
  const double t0 = now_s();
  Rng rng(77001);
  int failures = 0;
  Scalar worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    MlpSpec spec;
    spec.input_dim = 1 + static_cast<Index>(rng.below(4));
    spec.hidden_dims = {1 + static_cast<Index>(rng.below(6)),
                        1 + static_cast<Index>(rng.below(6))};
    spec.output_dim = 1 + static_cast<Index>(rng.below(3));
    const Vec params = init_params(spec, rng);
    Vec x(spec.input_dim), upstream(spec.output_dim);
    rng.fill_normal(x);
    rng.fill_normal(upstream);

    Vec analytic;
    mlp_backward(spec, params, x, upstream, analytic);

    Vec numeric(params.size());
    const Scalar h = 1e-6;
    for (Index i = 0; i < params.size(); ++i) {
      Vec pp = params, pm = params;
      pp(i) += h;
      pm(i) -= h;
      numeric(i) = (upstream.dot(mlp_forward(spec, pp, x)) -
                    upstream.dot(mlp_forward(spec, pm, x))) /
                   (2 * h);
    }
    const Scalar rel = (analytic - numeric).norm() / std::max(numeric.norm(), Scalar(1e-12));
    worst = std::max(worst, rel);
    if (rel > 1e-4) ++failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mlp_backward vs finite differences on 100 nets, worst rel %.2e, %.1fs",
                worst, now_s() - t0);
  report("A2", failures == 0 && now_s() - t0 < 60.0, buf);
}

// ---------------------------------------------------------------------------
// A3 — clipped-step contract over a 5k-step smoke run

void run_a3() {
  RunConfig cfg = default_run_config();
  Trainer trainer(cfg.trainer, cfg.env, make_zeta(cfg), 5);
  trainer.train(5000);
  const StepTracker& t = trainer.step_tracker();
  const Scalar excess = t.max_excess();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "max displacement excess %.3e over %llu critic / %llu policy / %llu "
                "multiplier / %llu sis updates",
                excess, static_cast<unsigned long long>(t.q1.updates),
                static_cast<unsigned long long>(t.policy.updates),
                static_cast<unsigned long long>(t.multiplier.updates),
                static_cast<unsigned long long>(t.zeta.updates));
  report("A3", excess <= 1e-12 && t.policy.updates > 0 && t.zeta.updates > 0, buf);
}

// ---------------------------------------------------------------------------
// A4 — SAC reduction of the policy gradient

void run_a4() {
  RunConfig cfg = default_run_config();
  cfg.trainer.lambda_max = 0.0;
  cfg.trainer.sis_enabled = false;
  Trainer trainer(cfg.trainer, cfg.env, make_zeta(cfg), 9);
  for (int i = 0; i < 2000; ++i) trainer.collect_step();
  const TransitionBatch batch = trainer.buffer().sample(cfg.trainer.batch_size, trainer.rng());
  Mat noise(kActionDim, batch.size());
  trainer.rng().fill_normal(noise);
  const Vec g_fac = trainer.compute_policy_gradient(batch, noise, 0.0);
  const Vec g_sac = sac_policy_gradient(trainer.networks(), batch, noise);
  const Scalar diff = (g_fac - g_sac).lpNorm<Eigen::Infinity>();
  char buf[120];
  std::snprintf(buf, sizeof(buf), "lambda_max=0 policy gradient vs plain SAC: max abs diff %.3e", diff);
  report("A4", diff <= 1e-12, buf);
}

// ---------------------------------------------------------------------------
// A5 — clipped-multiplier fixture identity

void run_a5() {
  bool pass = true;
  Scalar worst = 0.0;
  Rng rng(5150);
  for (const Scalar lambda_max : {10.0, 100.0}) {
    for (int trial = 0; trial < 200; ++trial) {
      const SafetyIndexParams z = preset_phi0(0.5);
      Lemma2Fixture fx;
      for (int i = 0; i < 32; ++i) {
        // Low-branch transitions: residual = 0.5 - d'.
        const Scalar d_next = rng.uniform(0.1, 0.9);
        fx.transitions.push_back({{1.0, 0.0}, {d_next, 0.0}});
        const Scalar dphi = delta_phi(z, fx.transitions.back().first,
                                      fx.transitions.back().second);
        fx.lambdas.push_back(dphi > 0.0 ? lambda_max : 0.0);
      }
      const auto [lhs, rhs] = lemma2_fixture_check(fx, z, lambda_max);
      worst = std::max(worst, std::abs(lhs - rhs));
      if (std::abs(lhs - rhs) > 1e-12) pass = false;
    }
  }
  char buf[130];
  std::snprintf(buf, sizeof(buf),
                "sum lambda*dphi vs lambda_max * sum [dphi]+ over 400 fixtures: worst gap %.3e",
                worst);
  report("A5", pass, buf);
}

// ---------------------------------------------------------------------------
// Shared training runs for A6–A10

struct TrainedRun {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<EvalRecord> evals;
  Checkpoint ck;
  std::vector<KinematicPair> replay_dd; // final replay buffer projected to (d, d_dot)
};

constexpr std::uint64_t kTrainSteps = 200000;

RunConfig sis_run_config() {
  RunConfig cfg = default_run_config();
  cfg.index_preset = "learned";
  return cfg;
}

RunConfig baseline_run_config(const std::string& preset) {
  RunConfig cfg = default_run_config();
  cfg.index_preset = preset;
  cfg.trainer.sis_enabled = false;
  return cfg;
}

std::vector<EvalRecord> parse_eval_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<EvalRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.value("type", "") != "eval") continue;
    EvalRecord r;
    r.env_step = j.at("step").get<std::uint64_t>();
    r.grad_step = j.at("grad_step").get<std::uint64_t>();
    r.return_mean = j.at("return_mean").get<Scalar>();
    r.return_std = j.at("return_std").get<Scalar>();
    r.cost_sum = j.at("cost_sum").get<Scalar>();
    r.violations_mean = j.at("violations_mean").get<Scalar>();
    r.sigma = j.at("sigma").get<Scalar>();
    r.n = j.at("n").get<Scalar>();
    r.k = j.at("k").get<Scalar>();
    r.lambda_mean = j.at("lambda_mean").get<Scalar>();
    r.alpha = j.at("alpha").get<Scalar>();
    r.episode_costs = j.at("episode_costs").get<std::vector<Scalar>>();
    r.episode_violations = j.at("episode_violations").get<std::vector<int>>();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<KinematicPair> load_dd_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<KinematicPair> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
    std::istringstream ss(line);
    KinematicPair p;
    char comma;
    if (ss >> p.d >> comma >> p.d_dot) out.push_back(p);
  }
  return out;
}

TrainedRun train_or_load(const fs::path& workdir, const std::string& name,
                         const RunConfig& cfg, std::uint64_t seed) {
  const fs::path dir = workdir / name;
  const fs::path meta_path = dir / "meta.json";
  const std::string hash_hex = config_hash_hex(cfg);

  TrainedRun run;
  run.name = name;
  run.seed = seed;

  if (fs::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    const json meta = json::parse(meta_in);
    if (meta.value("config_hash", "") == hash_hex &&
        meta.value("steps", std::uint64_t(0)) == kTrainSteps &&
        meta.value("seed", std::uint64_t(0)) == seed) {
      run.ck = load_checkpoint((dir / "checkpoint_final.ckpt").string());
      run.evals = parse_eval_log(dir / "train_log.jsonl");
      run.replay_dd = load_dd_csv(dir / "replay_dd.csv");
      std::printf("[train] reusing cached run %s\n", name.c_str());
      std::fflush(stdout);
      return run;
    }
  }

  fs::create_directories(dir);
  const std::string cfg_text = serialize(cfg);
  std::ofstream(dir / "config.snapshot.cfg") << cfg_text;

  JsonlLogger log((dir / "train_log.jsonl").string(), seed, hash_hex);
  Trainer trainer(cfg.trainer, cfg.env, make_zeta(cfg), seed);
  const double t0 = now_s();
  trainer.train(kTrainSteps, [&](const EvalRecord& rec) {
    log.log_eval(rec);
    run.evals.push_back(rec);
    if (rec.env_step % 20000 == 0) {
      std::printf("[train %s] step %llu return %.1f cost %.1f viol %.2f zeta (%.3f, %.3f, %.3f) lam %.2f\n",
                  name.c_str(), static_cast<unsigned long long>(rec.env_step),
                  rec.return_mean, rec.cost_sum, rec.violations_mean, rec.sigma, rec.n,
                  rec.k, rec.lambda_mean);
      std::fflush(stdout);
    }
  });

  run.ck = snapshot_trainer(trainer, cfg_text, config_hash(cfg), seed);
  save_checkpoint((dir / "checkpoint_final.ckpt").string(), run.ck);

  const ReplayBuffer& buffer = trainer.buffer();
  std::ofstream dd(dir / "replay_dd.csv");
  dd << "d,d_dot\n";
  char buf[80];
  run.replay_dd.reserve(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const KinematicPair& p = buffer.kin_next_at(i);
    run.replay_dd.push_back(p);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.d, p.d_dot);
    dd << buf;
  }

  json meta;
  meta["config_hash"] = hash_hex;
  meta["steps"] = kTrainSteps;
  meta["seed"] = seed;
  std::ofstream(meta_path) << meta.dump(2);
  std::printf("[train %s] finished in %.0f s\n", name.c_str(), now_s() - t0);
  std::fflush(stdout);
  return run;
}

PolicyFn policy_of(const TrainedRun& run) {
  const RunConfig cfg = parse_run_config(run.ck.config_text, run.name + ":config");
  MlpSpec spec;
  spec.input_dim = kObsDim;
  spec.hidden_dims = cfg.trainer.hidden_dims;
  spec.output_dim = 2 * kActionDim;
  const Vec params = run.ck.policy;
  return [spec, params](const Vec& obs) {
    const Vec raw = mlp_forward(spec, params, obs);
    const GaussianHeadOutput head = split_head_single(raw);
    return Action{std::tanh(head.mean(0)), std::tanh(head.mean(1))};
  };
}

// ---------------------------------------------------------------------------

void run_a6(const std::vector<TrainedRun>& sis_runs) {
  bool pass = true;
  std::string detail;
  for (const TrainedRun& run : sis_runs) {
    if (run.evals.size() < 2) {
      pass = false;
      detail += run.name + ": too few evaluations; ";
      continue;
    }
    Scalar cost = 0.0;
    Scalar violations = 0.0;
    int episodes = 0;
    for (std::size_t i = run.evals.size() - 2; i < run.evals.size(); ++i) {
      for (Scalar c : run.evals[i].episode_costs) cost += c;
      for (int v : run.evals[i].episode_violations) violations += v;
      episodes += static_cast<int>(run.evals[i].episode_costs.size());
    }
    const Scalar mean_viol = violations / std::max(episodes, 1);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%s: final-%d-episode cost %.0f, viol/ep %.2f; ",
                  run.name.c_str(), episodes, cost, mean_viol);
    detail += buf;
    if (cost != 0.0 || mean_viol > 0.5) pass = false;
  }
  report("A6", pass, detail);
}

struct SeedEval {
  EvalReport report;
  std::vector<VisitedState> visited;
};

SeedEval eval_run(const TrainedRun& run, const SafetyIndexParams& zeta,
                  const RunConfig& cfg, std::uint64_t eval_seed) {
  const auto res = eval_trajectories(policy_of(run), zeta, cfg.env, 100,
                                     eval_seed, cfg.grid);
  return SeedEval{res.report, res.visited};
}

void run_a7(const std::vector<TrainedRun>& sis_runs, const std::vector<SeedEval>& sis_evals,
            const SeedEval& phi0_eval) {
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < sis_runs.size(); ++i) {
    const EvalReport& r = sis_evals[i].report;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: success %.4f phi0-viol %.4f infeasible %.4f; ",
                  sis_runs[i].name.c_str(), r.success_rate, r.phi0_violation_rate,
                  r.infeasible_rate);
    detail += buf;
    if (!(r.phi0_violation_rate <= 0.02 && r.infeasible_rate <= 0.05 &&
          r.success_rate >= 0.90))
      pass = false;
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "fac-phi0: infeasible %.4f (need >= 0.90)",
                phi0_eval.report.infeasible_rate);
  detail += buf;
  if (!(phi0_eval.report.infeasible_rate >= 0.90)) pass = false;
  report("A7", pass, detail);
}

void run_a8(const RunConfig& cfg, const SeedEval& phi_f_eval, const SeedEval& phi0_eval) {
  const FeasibilityMap map_f = feasibility_grid(preset_phi_f(cfg.env.hazard_radius),
                                                cfg.env, cfg.grid);
  const FeasibilityMap map_0 = feasibility_grid(preset_phi0(cfg.env.hazard_radius),
                                                cfg.env, cfg.grid);
  const auto mask_f = visited_cell_mask(phi_f_eval.visited, cfg.grid);
  const auto mask_0 = visited_cell_mask(phi0_eval.visited, cfg.grid);
  const std::size_t inf_f = infeasible_in_envelope(map_f, mask_f);
  const std::size_t inf_0 = infeasible_in_envelope(map_0, mask_0);
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "phi_f infeasible cells in trained envelope %zu (need 0), phi0 %zu (need > 0); "
                "full-grid infeasible: phi_f %zu, phi0 %zu",
                inf_f, inf_0, map_f.infeasible_count, map_0.infeasible_count);
  report("A8", inf_f == 0 && inf_0 > 0, buf);
}

void run_a9(const std::vector<TrainedRun>& sis_runs) {
  const SafetyIndexParams init = preset_phi_h(0.5);
  int improved = 0;
  std::string detail;
  for (const TrainedRun& run : sis_runs) {
    const bool down = run.ck.zeta.sigma < init.sigma && run.ck.zeta.k < init.k;
    improved += down ? 1 : 0;
    char buf[150];
    std::snprintf(buf, sizeof(buf), "%s: sigma %.3f->%.4f k %.3f->%.4f n %.3f->%.4f%s; ",
                  run.name.c_str(), init.sigma, run.ck.zeta.sigma, init.k, run.ck.zeta.k,
                  2.0, run.ck.zeta.n, down ? "" : " (no)");
    detail += buf;
  }
  report("A9", improved >= 2, detail + std::to_string(improved) + "/3 seeds decreased");
}

void run_a10(const std::vector<TrainedRun>& sis_runs, const RunConfig& cfg) {
  bool pass = true;
  std::string detail;
  for (const TrainedRun& run : sis_runs) {
    const FeasibilityMap map = feasibility_grid(run.ck.zeta, cfg.env, cfg.grid);
    const ProjectedMap proj = project_infeasible(map);
    const Scalar overlap = overlap_fraction(run.replay_dd, proj);
    char buf[110];
    std::snprintf(buf, sizeof(buf), "%s: overlap %.4f (infeasible cells %zu); ",
                  run.name.c_str(), overlap, map.infeasible_count);
    detail += buf;
    if (overlap > 0.05) pass = false;
  }
  report("A10", pass, detail);
}

// ---------------------------------------------------------------------------
// A11 — determinism and persistence

void run_a11(const fs::path& workdir) {
  const fs::path dir = workdir / "determinism";
  fs::create_directories(dir);
  RunConfig cfg = default_run_config();
  cfg.trainer.eval_interval = 1000;

  auto run_once = [&](const fs::path& log_path) {
    JsonlLogger log(log_path.string(), 17, config_hash_hex(cfg));
    Trainer trainer(cfg.trainer, cfg.env, make_zeta(cfg), 17);
    trainer.train(4000, [&](const EvalRecord& rec) { log.log_eval(rec); });
    return snapshot_trainer(trainer, serialize(cfg), config_hash(cfg), 17);
  };
  const Checkpoint ck1 = run_once(dir / "log_a.jsonl");
  const Checkpoint ck2 = run_once(dir / "log_b.jsonl");

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const bool logs_equal = slurp(dir / "log_a.jsonl") == slurp(dir / "log_b.jsonl");
  const bool params_equal = (ck1.policy - ck2.policy).norm() == 0.0 &&
                            (ck1.q1 - ck2.q1).norm() == 0.0 &&
                            ck1.zeta.sigma == ck2.zeta.sigma;

  save_checkpoint((dir / "rt.ckpt").string(), ck1);
  const Checkpoint rt = load_checkpoint((dir / "rt.ckpt").string());
  bool roundtrip = (rt.policy - ck1.policy).norm() == 0.0 &&
                   (rt.q1 - ck1.q1).norm() == 0.0 &&
                   (rt.q2_target - ck1.q2_target).norm() == 0.0 &&
                   (rt.multiplier - ck1.multiplier).norm() == 0.0 &&
                   (rt.policy_opt.m - ck1.policy_opt.m).norm() == 0.0 &&
                   rt.zeta.sigma == ck1.zeta.sigma && rt.zeta.n == ck1.zeta.n &&
                   rt.zeta.k == ck1.zeta.k && rt.log_alpha == ck1.log_alpha;

  // Byte-level: saving the reloaded state reproduces the file exactly.
  save_checkpoint((dir / "rt2.ckpt").string(), rt);
  roundtrip = roundtrip && slurp(dir / "rt.ckpt") == slurp(dir / "rt2.ckpt");

  char buf[130];
  std::snprintf(buf, sizeof(buf), "logs byte-identical: %s; params identical: %s; checkpoint bit-exact: %s",
                logs_equal ? "yes" : "no", params_equal ? "yes" : "no",
                roundtrip ? "yes" : "no");
  report("A11", logs_equal && params_equal && roundtrip, buf);
}

} // namespace

int main(int argc, char** argv) {
  fs::path workdir = "acceptance_artifacts";
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--workdir") workdir = argv[i + 1];
  fs::create_directories(workdir);
  std::printf("acceptance artifacts: %s\n", fs::absolute(workdir).string().c_str());

  run_a1();
  run_a2();
  run_a3();
  run_a4();
  run_a5();

  // Shared training runs (two at a time).
  const RunConfig sis_cfg = sis_run_config();
  const RunConfig phi0_cfg = baseline_run_config("phi0");
  const RunConfig phi_f_cfg = baseline_run_config("phi_f");

  std::vector<TrainedRun> sis_runs(3);
  {
    auto f1 = std::async(std::launch::async, [&] {
      return train_or_load(workdir, "fac_sis_seed1", sis_cfg, 1);
    });
    auto f2 = std::async(std::launch::async, [&] {
      return train_or_load(workdir, "fac_sis_seed2", sis_cfg, 2);
    });
    sis_runs[0] = f1.get();
    sis_runs[1] = f2.get();
  }
  TrainedRun phi0_run, phi_f_run;
  {
    auto f3 = std::async(std::launch::async, [&] {
      return train_or_load(workdir, "fac_sis_seed3", sis_cfg, 3);
    });
    auto f4 = std::async(std::launch::async, [&] {
      return train_or_load(workdir, "fac_phi0_seed1", phi0_cfg, 1);
    });
    sis_runs[2] = f3.get();
    phi0_run = f4.get();
  }
  phi_f_run = train_or_load(workdir, "fac_phif_seed1", phi_f_cfg, 1);

  run_a6(sis_runs);

  // 100-trajectory evaluations per run (synthesized zeta for FAC-SIS, the
  // fixed preset for the baselines).
  std::vector<SeedEval> sis_evals;
  for (const TrainedRun& run : sis_runs)
    sis_evals.push_back(eval_run(run, run.ck.zeta, sis_cfg, 1000 + run.seed));
  const SeedEval phi0_eval =
      eval_run(phi0_run, preset_phi0(phi0_cfg.env.hazard_radius), phi0_cfg, 2000);
  const SeedEval phi_f_eval =
      eval_run(phi_f_run, preset_phi_f(phi_f_cfg.env.hazard_radius), phi_f_cfg, 3000);

  run_a7(sis_runs, sis_evals, phi0_eval);
  run_a8(sis_cfg, phi_f_eval, phi0_eval);
  run_a9(sis_runs);
  run_a10(sis_runs, sis_cfg);
  run_a11(workdir);

  int failed = 0;
  for (const CriterionResult& r : g_results)
    if (!r.pass) ++failed;
  std::printf("\n%zu criteria, %d failed\n", g_results.size(), failed);
  return failed == 0 ? 0 : 1;
}
