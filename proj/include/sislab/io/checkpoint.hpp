#pragma once

#include "sislab/train/trainer.hpp"

#include <cstdint>
#include <string>

namespace sislab {

// Versioned binary container: self-describing tagged fields, little-endian
// 64-bit floats. Holds everything needed to rebuild a trainer exactly: the
// config snapshot text, certificate parameters, every parameter vector and
// optimizer state, and the step counters.
struct Checkpoint {
  std::uint32_t version = 1;
  std::uint64_t config_hash = 0;
  std::string config_text;
  std::uint64_t seed = 0;
  std::uint64_t env_steps = 0;
  std::uint64_t grad_steps = 0;
  SafetyIndexParams zeta;
  AdamState zeta_opt = AdamState::zeros(3);
  Vec policy, q1, q2, q1_target, q2_target, qc, multiplier;
  AdamState policy_opt, q1_opt, q2_opt, qc_opt, multiplier_opt;
  Scalar log_alpha = 0.0;
  AdamState alpha_opt = AdamState::zeros(1);
};

Checkpoint snapshot_trainer(const Trainer& trainer, const std::string& config_text,
                            std::uint64_t config_hash, std::uint64_t seed);

void save_checkpoint(const std::string& path, const Checkpoint& ck);

// Throws IoError naming the offending field on corrupt or mismatched input.
Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint state into a trainer built from the same config.
void restore_trainer(Trainer& trainer, const Checkpoint& ck);

} // namespace sislab
