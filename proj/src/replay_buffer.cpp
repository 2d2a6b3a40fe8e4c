#include "sislab/train/replay_buffer.hpp"

#include "sislab/errors.hpp"

namespace sislab {

ReplayBuffer::ReplayBuffer(std::size_t capacity, Index obs_dim, Index act_dim)
    : capacity_(capacity),
      obs_(obs_dim, static_cast<Index>(capacity)),
      action_(act_dim, static_cast<Index>(capacity)),
      next_obs_(obs_dim, static_cast<Index>(capacity)),
      reward_(static_cast<Index>(capacity)),
      done_(static_cast<Index>(capacity)),
      kin_(capacity),
      kin_next_(capacity) {
  if (capacity == 0) throw ConfigError("replay buffer: capacity must be > 0");
}

void ReplayBuffer::push(const Transition& t) {
  const Index i = static_cast<Index>(head_);
  obs_.col(i) = t.obs;
  action_.col(i) = t.action;
  next_obs_.col(i) = t.next_obs;
  reward_(i) = t.reward;
  done_(i) = t.done ? 1.0 : 0.0;
  kin_[head_] = t.kin;
  kin_next_[head_] = t.kin_next;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

TransitionBatch ReplayBuffer::sample(Index batch_size, Rng& rng) const {
  if (size_ == 0) throw UsageError("replay buffer: sampling from empty buffer");
  TransitionBatch b;
  b.obs.resize(obs_.rows(), batch_size);
  b.action.resize(action_.rows(), batch_size);
  b.next_obs.resize(next_obs_.rows(), batch_size);
  b.reward.resize(batch_size);
  b.done.resize(batch_size);
  b.kin.resize(batch_size);
  b.kin_next.resize(batch_size);
  for (Index j = 0; j < batch_size; ++j) {
    const auto slot = static_cast<std::size_t>(rng.below(size_));
    const Index i = static_cast<Index>(slot);
    b.obs.col(j) = obs_.col(i);
    b.action.col(j) = action_.col(i);
    b.next_obs.col(j) = next_obs_.col(i);
    b.reward(j) = reward_(i);
    b.done(j) = done_(i);
    b.kin[j] = kin_[slot];
    b.kin_next[j] = kin_next_[slot];
  }
  return b;
}

} // namespace sislab
