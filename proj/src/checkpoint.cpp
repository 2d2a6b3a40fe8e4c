#include "sislab/io/checkpoint.hpp"

#include "sislab/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sislab {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'S', 'L', 'A', 'B', 'C', 'K'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, Scalar v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::istream& in, const std::string& field) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw IoError("checkpoint: truncated while reading '" + field + "'");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

Scalar get_f64(std::istream& in, const std::string& field) {
  return std::bit_cast<Scalar>(get_u64(in, field));
}

void put_tag(std::ostream& out, const std::string& tag) {
  put_u64(out, tag.size());
  out.write(tag.data(), static_cast<std::streamsize>(tag.size()));
}

void expect_tag(std::istream& in, const std::string& tag) {
  const std::uint64_t len = get_u64(in, "tag length of '" + tag + "'");
  if (len > 256) throw IoError("checkpoint: absurd tag length before '" + tag + "'");
  std::string got(len, '\0');
  if (!in.read(got.data(), static_cast<std::streamsize>(len)))
    throw IoError("checkpoint: truncated tag, expected '" + tag + "'");
  if (got != tag)
    throw IoError("checkpoint: field order mismatch, expected '" + tag + "', found '" +
                  got + "'");
}

void put_vec(std::ostream& out, const std::string& tag, const Vec& v) {
  put_tag(out, tag);
  put_u64(out, static_cast<std::uint64_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) put_f64(out, v(i));
}

Vec get_vec(std::istream& in, const std::string& tag) {
  expect_tag(in, tag);
  const std::uint64_t n = get_u64(in, tag + ".size");
  Vec v(static_cast<Index>(n));
  for (Index i = 0; i < v.size(); ++i) v(i) = get_f64(in, tag);
  return v;
}

void put_adam(std::ostream& out, const std::string& tag, const AdamState& s) {
  put_vec(out, tag + ".m", s.m);
  put_vec(out, tag + ".v", s.v);
  put_tag(out, tag + ".t");
  put_u64(out, s.t);
}

AdamState get_adam(std::istream& in, const std::string& tag) {
  AdamState s;
  s.m = get_vec(in, tag + ".m");
  s.v = get_vec(in, tag + ".v");
  expect_tag(in, tag + ".t");
  s.t = get_u64(in, tag + ".t");
  if (s.m.size() != s.v.size())
    throw IoError("checkpoint: inconsistent optimizer state in '" + tag + "'");
  return s;
}

} // namespace

Checkpoint snapshot_trainer(const Trainer& trainer, const std::string& config_text,
                            std::uint64_t config_hash, std::uint64_t seed) {
  const NetworkBundle& nets = trainer.networks();
  Checkpoint ck;
  ck.config_hash = config_hash;
  ck.config_text = config_text;
  ck.seed = seed;
  ck.env_steps = trainer.env_steps();
  ck.grad_steps = trainer.grad_steps();
  ck.zeta = trainer.zeta();
  ck.zeta_opt = trainer.zeta_opt();
  ck.policy = nets.policy;
  ck.q1 = nets.q1;
  ck.q2 = nets.q2;
  ck.q1_target = nets.q1_target;
  ck.q2_target = nets.q2_target;
  ck.qc = nets.qc;
  ck.multiplier = nets.multiplier;
  ck.policy_opt = nets.policy_opt;
  ck.q1_opt = nets.q1_opt;
  ck.q2_opt = nets.q2_opt;
  ck.qc_opt = nets.qc_opt;
  ck.multiplier_opt = nets.multiplier_opt;
  ck.log_alpha = nets.log_alpha;
  ck.alpha_opt = nets.alpha_opt;
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint '" + path + "' for writing");

  out.write(kMagic, sizeof(kMagic));
  put_u64(out, ck.version);
  put_u64(out, ck.config_hash);
  put_tag(out, "config_text");
  put_u64(out, ck.config_text.size());
  out.write(ck.config_text.data(), static_cast<std::streamsize>(ck.config_text.size()));
  put_u64(out, ck.seed);
  put_u64(out, ck.env_steps);
  put_u64(out, ck.grad_steps);

  put_tag(out, "zeta");
  put_f64(out, ck.zeta.sigma);
  put_f64(out, ck.zeta.n);
  put_f64(out, ck.zeta.k);
  put_f64(out, ck.zeta.eta_d);
  put_f64(out, ck.zeta.d_min);
  put_adam(out, "zeta_opt", ck.zeta_opt);

  put_vec(out, "policy", ck.policy);
  put_vec(out, "q1", ck.q1);
  put_vec(out, "q2", ck.q2);
  put_vec(out, "q1_target", ck.q1_target);
  put_vec(out, "q2_target", ck.q2_target);
  put_vec(out, "qc", ck.qc);
  put_vec(out, "multiplier", ck.multiplier);
  put_adam(out, "policy_opt", ck.policy_opt);
  put_adam(out, "q1_opt", ck.q1_opt);
  put_adam(out, "q2_opt", ck.q2_opt);
  put_adam(out, "qc_opt", ck.qc_opt);
  put_adam(out, "multiplier_opt", ck.multiplier_opt);

  put_tag(out, "log_alpha");
  put_f64(out, ck.log_alpha);
  put_adam(out, "alpha_opt", ck.alpha_opt);

  if (!out) throw IoError("write failed for checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");

  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("checkpoint: bad magic in '" + path + "'");

  Checkpoint ck;
  const std::uint64_t version = get_u64(in, "version");
  if (version != 1)
    throw IoError("checkpoint: unsupported version " + std::to_string(version));
  ck.version = static_cast<std::uint32_t>(version);
  ck.config_hash = get_u64(in, "config_hash");
  expect_tag(in, "config_text");
  const std::uint64_t text_len = get_u64(in, "config_text.size");
  if (text_len > (1ULL << 24)) throw IoError("checkpoint: absurd config_text length");
  ck.config_text.resize(text_len);
  if (!in.read(ck.config_text.data(), static_cast<std::streamsize>(text_len)))
    throw IoError("checkpoint: truncated while reading 'config_text'");
  ck.seed = get_u64(in, "seed");
  ck.env_steps = get_u64(in, "env_steps");
  ck.grad_steps = get_u64(in, "grad_steps");

  expect_tag(in, "zeta");
  ck.zeta.sigma = get_f64(in, "zeta.sigma");
  ck.zeta.n = get_f64(in, "zeta.n");
  ck.zeta.k = get_f64(in, "zeta.k");
  ck.zeta.eta_d = get_f64(in, "zeta.eta_d");
  ck.zeta.d_min = get_f64(in, "zeta.d_min");
  ck.zeta_opt = get_adam(in, "zeta_opt");

  ck.policy = get_vec(in, "policy");
  ck.q1 = get_vec(in, "q1");
  ck.q2 = get_vec(in, "q2");
  ck.q1_target = get_vec(in, "q1_target");
  ck.q2_target = get_vec(in, "q2_target");
  ck.qc = get_vec(in, "qc");
  ck.multiplier = get_vec(in, "multiplier");
  ck.policy_opt = get_adam(in, "policy_opt");
  ck.q1_opt = get_adam(in, "q1_opt");
  ck.q2_opt = get_adam(in, "q2_opt");
  ck.qc_opt = get_adam(in, "qc_opt");
  ck.multiplier_opt = get_adam(in, "multiplier_opt");

  expect_tag(in, "log_alpha");
  ck.log_alpha = get_f64(in, "log_alpha");
  ck.alpha_opt = get_adam(in, "alpha_opt");
  return ck;
}

void restore_trainer(Trainer& trainer, const Checkpoint& ck) {
  NetworkBundle& nets = trainer.networks();
  auto check = [](const char* field, Index expected, Index got) {
    if (expected != got)
      throw IoError(std::string("checkpoint: field '") + field + "' has " +
                    std::to_string(got) + " values, trainer expects " +
                    std::to_string(expected));
  };
  check("policy", nets.policy.size(), ck.policy.size());
  check("q1", nets.q1.size(), ck.q1.size());
  check("q2", nets.q2.size(), ck.q2.size());
  check("q1_target", nets.q1_target.size(), ck.q1_target.size());
  check("q2_target", nets.q2_target.size(), ck.q2_target.size());
  check("qc", nets.qc.size(), ck.qc.size());
  check("multiplier", nets.multiplier.size(), ck.multiplier.size());

  nets.policy = ck.policy;
  nets.q1 = ck.q1;
  nets.q2 = ck.q2;
  nets.q1_target = ck.q1_target;
  nets.q2_target = ck.q2_target;
  nets.qc = ck.qc;
  nets.multiplier = ck.multiplier;
  nets.policy_opt = ck.policy_opt;
  nets.q1_opt = ck.q1_opt;
  nets.q2_opt = ck.q2_opt;
  nets.qc_opt = ck.qc_opt;
  nets.multiplier_opt = ck.multiplier_opt;
  nets.log_alpha = ck.log_alpha;
  nets.alpha_opt = ck.alpha_opt;
  trainer.set_zeta(ck.zeta);
  trainer.zeta_opt() = ck.zeta_opt;
  trainer.set_counters(ck.env_steps, ck.grad_steps);
}

} // namespace sislab
