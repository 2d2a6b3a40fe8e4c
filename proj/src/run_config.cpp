#include "sislab/io/run_config.hpp"

#include "sislab/errors.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sislab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct ParseContext {
  std::string origin;
  int line = 0;
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

Scalar parse_scalar(const ParseContext& ctx, const std::string& v) {
  try {
    std::size_t pos = 0;
    const Scalar x = std::stod(v, &pos);
    if (pos != v.size()) ctx.fail("trailing characters in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    ctx.fail("expected a number, got '" + v + "'");
  }
}

std::int64_t parse_int(const ParseContext& ctx, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) ctx.fail("trailing characters in integer '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    ctx.fail("expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const ParseContext& ctx, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  ctx.fail("expected a boolean (true/false), got '" + v + "'");
}

std::vector<Index> parse_dims(const ParseContext& ctx, const std::string& v) {
  std::vector<Index> dims;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) ctx.fail("empty entry in dimension list '" + v + "'");
    dims.push_back(static_cast<Index>(parse_int(ctx, item)));
  }
  if (dims.empty()) ctx.fail("dimension list is empty");
  return dims;
}

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

RunConfig default_run_config() { return RunConfig{}; }

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  ParseContext ctx{origin, 0};
  std::string section;
  std::istringstream in(text);
  std::string raw;

  while (std::getline(in, raw)) {
    ++ctx.line;
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "env" && section != "networks" && section != "trainer" &&
          section != "safety_index" && section != "verify" && section != "logging")
        ctx.fail("unknown section '" + section + "'");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("empty key");
    if (value.empty()) ctx.fail("empty value for key '" + key + "'");
    if (section.empty()) ctx.fail("key '" + key + "' outside any section");

    if (section == "env") {
      if (key == "goal_x") cfg.env.goal_x = parse_scalar(ctx, value);
      else if (key == "goal_y") cfg.env.goal_y = parse_scalar(ctx, value);
      else if (key == "hazard_radius") cfg.env.hazard_radius = parse_scalar(ctx, value);
      else if (key == "dt") cfg.env.dt = parse_scalar(ctx, value);
      else if (key == "max_steps") cfg.env.max_steps = static_cast<int>(parse_int(ctx, value));
      else if (key == "v_max") cfg.env.v_max = parse_scalar(ctx, value);
      else if (key == "omega_max") cfg.env.omega_max = parse_scalar(ctx, value);
      else if (key == "a_max") cfg.env.a_max = parse_scalar(ctx, value);
      else if (key == "init_distribution")
        cfg.env.init_distribution = static_cast<int>(parse_int(ctx, value));
      else if (key == "w_heading") cfg.env.w_heading = parse_scalar(ctx, value);
      else if (key == "w_speed") cfg.env.w_speed = parse_scalar(ctx, value);
      else if (key == "goal_time") cfg.env.goal_time = parse_scalar(ctx, value);
      else ctx.fail("unknown key '" + key + "' in [env]");
    } else if (section == "networks") {
      if (key == "hidden") cfg.trainer.hidden_dims = parse_dims(ctx, value);
      else if (key == "alpha_init") cfg.trainer.alpha_init = parse_scalar(ctx, value);
      else ctx.fail("unknown key '" + key + "' in [networks]");
    } else if (section == "trainer") {
      if (key == "gamma") cfg.trainer.gamma = parse_scalar(ctx, value);
      else if (key == "batch_size") cfg.trainer.batch_size = static_cast<Index>(parse_int(ctx, value));
      else if (key == "m_pi") cfg.trainer.m_pi = static_cast<int>(parse_int(ctx, value));
      else if (key == "m_lambda") cfg.trainer.m_lambda = static_cast<int>(parse_int(ctx, value));
      else if (key == "m_phi") cfg.trainer.m_phi = static_cast<int>(parse_int(ctx, value));
      else if (key == "tau") cfg.trainer.tau = parse_scalar(ctx, value);
      else if (key == "lambda_max") cfg.trainer.lambda_max = parse_scalar(ctx, value);
      else if (key == "constraint_margin") cfg.trainer.constraint_margin = parse_scalar(ctx, value);
      else if (key == "target_entropy") cfg.trainer.target_entropy = parse_scalar(ctx, value);
      else if (key == "buffer_capacity")
        cfg.trainer.buffer_capacity = static_cast<std::size_t>(parse_int(ctx, value));
      else if (key == "warmup_steps")
        cfg.trainer.warmup_steps = static_cast<std::uint64_t>(parse_int(ctx, value));
      else if (key == "updates_per_env_step")
        cfg.trainer.updates_per_env_step = static_cast<int>(parse_int(ctx, value));
      else if (key == "eval_interval")
        cfg.trainer.eval_interval = static_cast<std::uint64_t>(parse_int(ctx, value));
      else if (key == "eval_episodes")
        cfg.trainer.eval_episodes = static_cast<int>(parse_int(ctx, value));
      else if (key == "actor_lr_start") cfg.trainer.actor_lr.start = parse_scalar(ctx, value);
      else if (key == "actor_lr_end") cfg.trainer.actor_lr.end = parse_scalar(ctx, value);
      else if (key == "critic_lr_start") cfg.trainer.critic_lr.start = parse_scalar(ctx, value);
      else if (key == "critic_lr_end") cfg.trainer.critic_lr.end = parse_scalar(ctx, value);
      else if (key == "multiplier_lr_start")
        cfg.trainer.multiplier_lr.start = parse_scalar(ctx, value);
      else if (key == "multiplier_lr_end")
        cfg.trainer.multiplier_lr.end = parse_scalar(ctx, value);
      else if (key == "alpha_lr_start") cfg.trainer.alpha_lr.start = parse_scalar(ctx, value);
      else if (key == "alpha_lr_end") cfg.trainer.alpha_lr.end = parse_scalar(ctx, value);
      else if (key == "sis_lr_start") cfg.trainer.sis_lr.start = parse_scalar(ctx, value);
      else if (key == "sis_lr_end") cfg.trainer.sis_lr.end = parse_scalar(ctx, value);
      else if (key == "lr_anneal_steps") {
        const auto steps = static_cast<std::uint64_t>(parse_int(ctx, value));
        for (LrSchedule* s : {&cfg.trainer.actor_lr, &cfg.trainer.critic_lr,
                              &cfg.trainer.multiplier_lr, &cfg.trainer.alpha_lr,
                              &cfg.trainer.sis_lr})
          s->total_steps = steps;
      } else ctx.fail("unknown key '" + key + "' in [trainer]");
    } else if (section == "safety_index") {
      if (key == "preset") {
        if (value != "phi0" && value != "phi_h" && value != "phi_f" && value != "learned")
          ctx.fail("unknown preset '" + value + "'");
        cfg.index_preset = value;
      } else if (key == "eta_d") cfg.eta_d = parse_scalar(ctx, value);
      else if (key == "sis_enabled") cfg.trainer.sis_enabled = parse_bool(ctx, value);
      else if (key == "sigma") cfg.sigma_override = parse_scalar(ctx, value);
      else if (key == "n") cfg.n_override = parse_scalar(ctx, value);
      else if (key == "k") cfg.k_override = parse_scalar(ctx, value);
      else ctx.fail("unknown key '" + key + "' in [safety_index]");
    } else if (section == "verify") {
      if (key == "d_lo") cfg.grid.d_lo = parse_scalar(ctx, value);
      else if (key == "d_hi") cfg.grid.d_hi = parse_scalar(ctx, value);
      else if (key == "d_cells") cfg.grid.d_cells = static_cast<int>(parse_int(ctx, value));
      else if (key == "heading_cells")
        cfg.grid.heading_cells = static_cast<int>(parse_int(ctx, value));
      else if (key == "speed_hi") {
        cfg.grid.speed_hi = parse_scalar(ctx, value);
        cfg.grid_speed_hi_explicit = true;
      } else if (key == "speed_cells")
        cfg.grid.speed_cells = static_cast<int>(parse_int(ctx, value));
      else if (key == "action_cells")
        cfg.grid.action_cells = static_cast<int>(parse_int(ctx, value));
      else if (key == "eval_trajectories")
        cfg.eval_trajectories = static_cast<int>(parse_int(ctx, value));
      else ctx.fail("unknown key '" + key + "' in [verify]");
    } else if (section == "logging") {
      if (key == "checkpoint_every")
        cfg.checkpoint_every = static_cast<std::uint64_t>(parse_int(ctx, value));
      else ctx.fail("unknown key '" + key + "' in [logging]");
    }
  }

  // Cross-section resolution.
  if (!cfg.grid_speed_hi_explicit) cfg.grid.speed_hi = cfg.env.v_max;

  // Surface invalid values now, with the config origin attached.
  try {
    validate(cfg.env);
    validate(cfg.trainer);
    validate(cfg.grid);
    if (cfg.eval_trajectories < 1)
      throw ConfigError("verify: eval_trajectories must be >= 1");
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  o << "[env]\n";
  o << "goal_x = " << fmt(c.env.goal_x) << "\n";
  o << "goal_y = " << fmt(c.env.goal_y) << "\n";
  o << "hazard_radius = " << fmt(c.env.hazard_radius) << "\n";
  o << "dt = " << fmt(c.env.dt) << "\n";
  o << "max_steps = " << c.env.max_steps << "\n";
  o << "v_max = " << fmt(c.env.v_max) << "\n";
  o << "omega_max = " << fmt(c.env.omega_max) << "\n";
  o << "a_max = " << fmt(c.env.a_max) << "\n";
  o << "init_distribution = " << c.env.init_distribution << "\n";
  o << "w_heading = " << fmt(c.env.w_heading) << "\n";
  o << "w_speed = " << fmt(c.env.w_speed) << "\n";
  o << "goal_time = " << fmt(c.env.goal_time) << "\n";
  o << "\n[networks]\n";
  o << "hidden = ";
  for (std::size_t i = 0; i < c.trainer.hidden_dims.size(); ++i)
    o << (i ? "," : "") << c.trainer.hidden_dims[i];
  o << "\n";
  o << "alpha_init = " << fmt(c.trainer.alpha_init) << "\n";
  o << "\n[trainer]\n";
  o << "gamma = " << fmt(c.trainer.gamma) << "\n";
  o << "batch_size = " << c.trainer.batch_size << "\n";
  o << "m_pi = " << c.trainer.m_pi << "\n";
  o << "m_lambda = " << c.trainer.m_lambda << "\n";
  o << "m_phi = " << c.trainer.m_phi << "\n";
  o << "tau = " << fmt(c.trainer.tau) << "\n";
  o << "lambda_max = " << fmt(c.trainer.lambda_max) << "\n";
  o << "constraint_margin = " << fmt(c.trainer.constraint_margin) << "\n";
  o << "target_entropy = " << fmt(c.trainer.target_entropy) << "\n";
  o << "buffer_capacity = " << c.trainer.buffer_capacity << "\n";
  o << "warmup_steps = " << c.trainer.warmup_steps << "\n";
  o << "updates_per_env_step = " << c.trainer.updates_per_env_step << "\n";
  o << "eval_interval = " << c.trainer.eval_interval << "\n";
  o << "eval_episodes = " << c.trainer.eval_episodes << "\n";
  o << "actor_lr_start = " << fmt(c.trainer.actor_lr.start) << "\n";
  o << "actor_lr_end = " << fmt(c.trainer.actor_lr.end) << "\n";
  o << "critic_lr_start = " << fmt(c.trainer.critic_lr.start) << "\n";
  o << "critic_lr_end = " << fmt(c.trainer.critic_lr.end) << "\n";
  o << "multiplier_lr_start = " << fmt(c.trainer.multiplier_lr.start) << "\n";
  o << "multiplier_lr_end = " << fmt(c.trainer.multiplier_lr.end) << "\n";
  o << "alpha_lr_start = " << fmt(c.trainer.alpha_lr.start) << "\n";
  o << "alpha_lr_end = " << fmt(c.trainer.alpha_lr.end) << "\n";
  o << "sis_lr_start = " << fmt(c.trainer.sis_lr.start) << "\n";
  o << "sis_lr_end = " << fmt(c.trainer.sis_lr.end) << "\n";
  o << "lr_anneal_steps = " << c.trainer.actor_lr.total_steps << "\n";
  o << "\n[safety_index]\n";
  o << "preset = " << c.index_preset << "\n";
  o << "eta_d = " << fmt(c.eta_d) << "\n";
  o << "sis_enabled = " << (c.trainer.sis_enabled ? "true" : "false") << "\n";
  if (c.sigma_override) o << "sigma = " << fmt(*c.sigma_override) << "\n";
  if (c.n_override) o << "n = " << fmt(*c.n_override) << "\n";
  if (c.k_override) o << "k = " << fmt(*c.k_override) << "\n";
  o << "\n[verify]\n";
  o << "d_lo = " << fmt(c.grid.d_lo) << "\n";
  o << "d_hi = " << fmt(c.grid.d_hi) << "\n";
  o << "d_cells = " << c.grid.d_cells << "\n";
  o << "heading_cells = " << c.grid.heading_cells << "\n";
  o << "speed_hi = " << fmt(c.grid.speed_hi) << "\n";
  o << "speed_cells = " << c.grid.speed_cells << "\n";
  o << "action_cells = " << c.grid.action_cells << "\n";
  o << "eval_trajectories = " << c.eval_trajectories << "\n";
  o << "\n[logging]\n";
  o << "checkpoint_every = " << c.checkpoint_every << "\n";
  return o.str();
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string text = serialize(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& config) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return buf;
}

SafetyIndexParams make_zeta(const RunConfig& config) {
  SafetyIndexParams z =
      preset_by_name(config.index_preset, config.env.hazard_radius, config.eta_d);
  if (config.sigma_override) z.sigma = *config.sigma_override;
  if (config.n_override) z.n = *config.n_override;
  if (config.k_override) z.k = *config.k_override;
  return project_params(z);
}

} // namespace sislab
