#pragma once

#include "sislab/types.hpp"

namespace sislab {

inline constexpr Scalar kLogStdMin = -20.0;
inline constexpr Scalar kLogStdMax = 2.0;
inline constexpr Scalar kLogTwoPi = 1.8378770664093454835606594728112; // log(2*pi)

struct GaussianHeadOutput {
  Vec mean;
  Vec log_std; // clamped to [kLogStdMin, kLogStdMax]
};

// Batch view of the policy head. `raw` is the 2A x B network output; the
// top half is the mean, the bottom half the unclamped log-std.
struct GaussianHeadBatch {
  Mat mean;        // A x B
  Mat log_std_raw; // A x B, pre-clamp (needed for the clamp mask)
  Mat log_std;     // A x B, clamped
  Mat std;         // A x B
};

GaussianHeadBatch split_head(const Mat& raw);
GaussianHeadOutput split_head_single(const Vec& raw);

// Numerically stable log(1 - tanh(u)^2) = 2*(log 2 - u - softplus(-2u)).
Scalar log_one_minus_tanh_sq(Scalar u);

struct SquashedSample {
  Mat pre_tanh;  // U = mean + std .* noise
  Mat action;    // tanh(U), strictly inside (-1, 1)
  Vec log_prob;  // per column
};

// a = tanh(mean + std*noise); log-prob carries the tanh change-of-variables
// correction. Differentiable w.r.t. the head outputs; `noise` is injected
// so sampling stays deterministic under a seeded source.
SquashedSample sample_squashed_gaussian(const GaussianHeadBatch& head, const Mat& noise);

// Single-sample variant mirroring the batch math exactly.
void sample_squashed_gaussian(const GaussianHeadOutput& head, const Vec& noise,
                              Vec& action, Scalar& log_prob);

// Gradient of  sum_i [ alpha_i * log_prob_i + dot(g_action.col(i), action.col(i)...) ]
// w.r.t. the raw head output (2A x B), for reparameterized samples. g_action
// is dLoss/d(action) per column; alpha_coeff scales the log-prob term per
// column. The clamp on log-std zeroes gradients outside its active range.
Mat squashed_head_gradient(const GaussianHeadBatch& head, const Mat& noise,
                           const SquashedSample& sample, const Mat& g_action,
                           const Vec& alpha_coeff);

// log N(u; mean, std) + squash correction, for an externally given u.
Scalar squashed_log_prob_of(const GaussianHeadOutput& head, const Vec& pre_tanh);

} // namespace sislab
