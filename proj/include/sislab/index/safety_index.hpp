#pragma once

#include "sislab/types.hpp"

#include <span>
#include <string>
#include <utility>

namespace sislab {

// Distance to the hazard and its time derivative; the certificate is a
// function of this pair only.
struct KinematicPair {
  Scalar d = 0.0;
  Scalar d_dot = 0.0;
};

// Tunable certificate parameters zeta = (sigma, n, k) of
//   phi(s) = sigma + d_min^n - d^n - k * d_dot
// plus the descent slack eta_D and the hazard clearance d_min.
struct SafetyIndexParams {
  Scalar sigma = 0.0;
  Scalar n = 1.0;
  Scalar k = 0.0;
  Scalar eta_d = 0.0;
  Scalar d_min = 0.5;
};

// Projection box for zeta; wide enough to contain every published
// parameterization, tight enough to keep the power terms well-behaved.
inline constexpr Scalar kSigmaLo = 0.0, kSigmaHi = 2.0;
inline constexpr Scalar kNLo = 0.5, kNHi = 4.0;
inline constexpr Scalar kKLo = 0.0, kKHi = 5.0;

// Named parameter sets: the raw specification phi0, the handcrafted phi_h,
// and the externally verified feasible phi_f.
SafetyIndexParams preset_phi0(Scalar d_min = 0.5, Scalar eta_d = 0.0);
SafetyIndexParams preset_phi_h(Scalar d_min = 0.5, Scalar eta_d = 0.0);
SafetyIndexParams preset_phi_f(Scalar d_min = 0.5, Scalar eta_d = 0.0);
SafetyIndexParams preset_by_name(const std::string& name, Scalar d_min = 0.5,
                                 Scalar eta_d = 0.0);

Scalar phi(const SafetyIndexParams& zeta, const KinematicPair& kp);

inline Scalar phi0(Scalar d, Scalar d_min) { return d_min - d; }

// Safe action constraint residual: delta_phi = phi(s') - max(phi(s) - eta_D, 0).
// Satisfied iff strictly negative; a violation is delta_phi >= 0.
Scalar delta_phi(const SafetyIndexParams& zeta, const KinematicPair& kp,
                 const KinematicPair& kp_next);

inline bool constraint_violated(Scalar dphi) { return dphi >= 0.0; }

// Mean positive part of delta_phi over the batch.
Scalar sis_loss(std::span<const std::pair<KinematicPair, KinematicPair>> batch,
                const SafetyIndexParams& zeta);

// d delta_phi / d (sigma, n, k). The max() threshold splits two branches:
// when phi(s) - eta_D > 0 the phi(s) terms cancel against phi(s'); at the
// kink the inactive-branch subgradient is used.
Vec3 grad_delta_phi(const SafetyIndexParams& zeta, const KinematicPair& kp,
                    const KinematicPair& kp_next);

SafetyIndexParams project_params(const SafetyIndexParams& zeta);

} // namespace sislab
