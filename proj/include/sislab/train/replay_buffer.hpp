#pragma once

#include "sislab/env/point_env.hpp"
#include "sislab/index/safety_index.hpp"
#include "sislab/rng.hpp"
#include "sislab/types.hpp"

#include <cstdint>
#include <vector>

namespace sislab {

// One environment step. Kinematic pairs are stored raw so the constraint
// residual can be re-evaluated under whatever zeta is current when the
// transition is replayed.
struct Transition {
  Vec obs;
  Vec2 action;
  Scalar reward = 0.0;
  Vec next_obs;
  bool done = false;
  KinematicPair kin;
  KinematicPair kin_next;
};

// Batch in matrix form, one column per transition.
struct TransitionBatch {
  Mat obs;      // obs_dim x B
  Mat action;   // act_dim x B
  Vec reward;   // B
  Mat next_obs; // obs_dim x B
  Vec done;     // B, 0/1
  std::vector<KinematicPair> kin;
  std::vector<KinematicPair> kin_next;
  Index size() const { return reward.size(); }
};

// Fixed-capacity ring with FIFO overwrite and uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, Index obs_dim, Index act_dim);

  void push(const Transition& t);
  TransitionBatch sample(Index batch_size, Rng& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // Physical slot access (tests, distribution projections).
  const KinematicPair& kin_next_at(std::size_t slot) const { return kin_next_[slot]; }
  Vec obs_at(std::size_t slot) const { return obs_.col(static_cast<Index>(slot)); }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  Mat obs_, action_, next_obs_;
  Vec reward_, done_;
  std::vector<KinematicPair> kin_, kin_next_;
};

} // namespace sislab
