#pragma once

#include "sislab/env/point_env.hpp"
#include "sislab/index/safety_index.hpp"
#include "sislab/train/trainer.hpp"
#include "sislab/verify/feasibility.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace sislab {

// Full run document. Sections: env / networks / trainer / safety_index /
// verify / logging. Every field has a default; unknown sections or keys are
// rejected with a line-precise message.
struct RunConfig {
  EnvConfig env;
  TrainerConfig trainer;
  std::string index_preset = "learned"; // phi0 | phi_h | phi_f | learned
  std::optional<Scalar> sigma_override, n_override, k_override;
  Scalar eta_d = 0.0;
  GridSpec grid;
  bool grid_speed_hi_explicit = false;
  int eval_trajectories = 100;
  std::uint64_t checkpoint_every = 0; // env steps; 0 = final checkpoint only
};

RunConfig default_run_config();

// Parses the document and applies cross-section resolution (grid speed
// range follows env.v_max unless set; certificate d_min mirrors the hazard
// radius). `origin` names the source in error messages.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

// Canonical text form: every field, fixed order, full precision. Parsing
// the serialization reproduces the config exactly.
std::string serialize(const RunConfig& config);

// FNV-1a over the canonical serialization; embedded in every output file.
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

// Initial certificate parameters for this run.
SafetyIndexParams make_zeta(const RunConfig& config);

} // namespace sislab
