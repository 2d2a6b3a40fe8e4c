#include "sislab/nn/gaussian_policy.hpp"

#include "sislab/errors.hpp"

#include <cmath>

namespace sislab {

namespace {

Scalar softplus(Scalar x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace

Scalar log_one_minus_tanh_sq(Scalar u) {
  const Scalar log2 = 0.69314718055994530941723212145818;
  return 2.0 * (log2 - u - softplus(-2.0 * u));
}

GaussianHeadBatch split_head(const Mat& raw) {
  if (raw.rows() % 2 != 0)
    throw ConfigError("split_head: head output rows must be even");
  const Index a = raw.rows() / 2;
  GaussianHeadBatch head;
  head.mean = raw.topRows(a);
  head.log_std_raw = raw.bottomRows(a);
  head.log_std = head.log_std_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  head.std = head.log_std.array().exp();
  return head;
}

GaussianHeadOutput split_head_single(const Vec& raw) {
  const GaussianHeadBatch b = split_head(Mat(raw));
  return GaussianHeadOutput{b.mean.col(0), b.log_std.col(0)};
}

SquashedSample sample_squashed_gaussian(const GaussianHeadBatch& head, const Mat& noise) {
  if (noise.rows() != head.mean.rows() || noise.cols() != head.mean.cols())
    throw ConfigError("sample_squashed_gaussian: noise shape mismatch");
  SquashedSample s;
  s.pre_tanh = head.mean + head.std.cwiseProduct(noise);
  s.action = s.pre_tanh.array().tanh();
  s.log_prob = Vec::Zero(noise.cols());
  for (Index j = 0; j < noise.cols(); ++j) {
    Scalar lp = 0.0;
    for (Index i = 0; i < noise.rows(); ++i) {
      lp += -head.log_std(i, j) - 0.5 * kLogTwoPi - 0.5 * noise(i, j) * noise(i, j);
      lp -= log_one_minus_tanh_sq(s.pre_tanh(i, j));
    }
    s.log_prob(j) = lp;
  }
  return s;
}

void sample_squashed_gaussian(const GaussianHeadOutput& head, const Vec& noise,
                              Vec& action, Scalar& log_prob) {
  GaussianHeadBatch b;
  b.mean = head.mean;
  b.log_std_raw = head.log_std;
  b.log_std = head.log_std;
  b.std = head.log_std.array().exp();
  const SquashedSample s = sample_squashed_gaussian(b, Mat(noise));
  action = s.action.col(0);
  log_prob = s.log_prob(0);
}

Mat squashed_head_gradient(const GaussianHeadBatch& head, const Mat& noise,
                           const SquashedSample& sample, const Mat& g_action,
                           const Vec& alpha_coeff) {
  const Index a = head.mean.rows();
  const Index b = head.mean.cols();
  Mat out(2 * a, b);
  for (Index j = 0; j < b; ++j) {
    const Scalar ac = alpha_coeff(j);
    for (Index i = 0; i < a; ++i) {
      const Scalar th = sample.action(i, j); // tanh(u)
      const Scalar one_m_th2 = 1.0 - th * th;
      const Scalar se = head.std(i, j) * noise(i, j); // du/dlogstd
      // d log_prob / du = 2*tanh(u); Gaussian part is constant in u once
      // noise is held fixed (reparameterized view).
      const Scalar dlp_du = 2.0 * th;
      const Scalar dmean = ac * dlp_du + g_action(i, j) * one_m_th2;
      Scalar dlogstd = ac * (-1.0 + dlp_du * se) + g_action(i, j) * one_m_th2 * se;
      const Scalar raw = head.log_std_raw(i, j);
      if (raw < kLogStdMin || raw > kLogStdMax) dlogstd = 0.0; // clamp cuts the path
      out(i, j) = dmean;
      out(a + i, j) = dlogstd;
    }
  }
  return out;
}

Scalar squashed_log_prob_of(const GaussianHeadOutput& head, const Vec& pre_tanh) {
  Scalar lp = 0.0;
  for (Index i = 0; i < pre_tanh.size(); ++i) {
    const Scalar std = std::exp(head.log_std(i));
    const Scalar z = (pre_tanh(i) - head.mean(i)) / std;
    lp += -head.log_std(i) - 0.5 * kLogTwoPi - 0.5 * z * z;
    lp -= log_one_minus_tanh_sq(pre_tanh(i));
  }
  return lp;
}

} // namespace sislab
