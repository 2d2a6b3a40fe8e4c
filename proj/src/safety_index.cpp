#include "sislab/index/safety_index.hpp"

#include "sislab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sislab {

SafetyIndexParams preset_phi0(Scalar d_min, Scalar eta_d) {
  return SafetyIndexParams{0.0, 1.0, 0.0, eta_d, d_min};
}

SafetyIndexParams preset_phi_h(Scalar d_min, Scalar eta_d) {
  return SafetyIndexParams{0.3, 2.0, 1.0, eta_d, d_min};
}

SafetyIndexParams preset_phi_f(Scalar d_min, Scalar eta_d) {
  return SafetyIndexParams{0.04, 2.0, 1.0, eta_d, d_min};
}

SafetyIndexParams preset_by_name(const std::string& name, Scalar d_min, Scalar eta_d) {
  if (name == "phi0") return preset_phi0(d_min, eta_d);
  if (name == "phi_h" || name == "learned") return preset_phi_h(d_min, eta_d);
  if (name == "phi_f") return preset_phi_f(d_min, eta_d);
  throw ConfigError("unknown safety index preset '" + name +
                    "' (expected phi0, phi_h, phi_f or learned)");
}

Scalar phi(const SafetyIndexParams& zeta, const KinematicPair& kp) {
  if (!(kp.d > 0.0))
    throw UsageError("phi: degenerate distance d <= 0");
  return zeta.sigma + std::pow(zeta.d_min, zeta.n) - std::pow(kp.d, zeta.n) -
         zeta.k * kp.d_dot;
}

Scalar delta_phi(const SafetyIndexParams& zeta, const KinematicPair& kp,
                 const KinematicPair& kp_next) {
  return phi(zeta, kp_next) - std::max(phi(zeta, kp) - zeta.eta_d, 0.0);
}

Scalar sis_loss(std::span<const std::pair<KinematicPair, KinematicPair>> batch,
                const SafetyIndexParams& zeta) {
  if (batch.empty()) throw UsageError("sis_loss: empty batch");
  Scalar acc = 0.0;
  for (const auto& [kp, kp_next] : batch)
    acc += std::max(delta_phi(zeta, kp, kp_next), 0.0);
  return acc / static_cast<Scalar>(batch.size());
}

namespace {

// (d/dsigma, d/dn, d/dk) of phi at one kinematic pair.
Vec3 grad_phi(const SafetyIndexParams& zeta, const KinematicPair& kp) {
  const Scalar dn_dn = std::pow(zeta.d_min, zeta.n) * std::log(zeta.d_min) -
                       std::pow(kp.d, zeta.n) * std::log(kp.d);
  return Vec3(1.0, dn_dn, -kp.d_dot);
}

} // namespace

Vec3 grad_delta_phi(const SafetyIndexParams& zeta, const KinematicPair& kp,
                    const KinematicPair& kp_next) {
  if (!(kp.d > 0.0) || !(kp_next.d > 0.0))
    throw UsageError("grad_delta_phi: degenerate distance d <= 0");
  const Vec3 g_next = grad_phi(zeta, kp_next);
  if (phi(zeta, kp) - zeta.eta_d > 0.0) return g_next - grad_phi(zeta, kp);
  return g_next;
}

SafetyIndexParams project_params(const SafetyIndexParams& zeta) {
  SafetyIndexParams out = zeta;
  out.sigma = std::clamp(zeta.sigma, kSigmaLo, kSigmaHi);
  out.n = std::clamp(zeta.n, kNLo, kNHi);
  out.k = std::clamp(zeta.k, kKLo, kKHi);
  return out;
}

} // namespace sislab
