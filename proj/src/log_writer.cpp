#include "sislab/io/log_writer.hpp"

#include "sislab/errors.hpp"

#include <cstdio>

#include <json.hpp>

namespace sislab {

using ordered_json = nlohmann::ordered_json;

JsonlLogger::JsonlLogger(const std::string& path, std::uint64_t seed,
                         const std::string& config_hash_hex)
    : out_(path), path_(path) {
  if (!out_) throw IoError("cannot open log '" + path + "' for writing");
  ordered_json header;
  header["type"] = "header";
  header["format_version"] = 1;
  header["seed"] = seed;
  header["config_hash"] = config_hash_hex;
  out_ << header.dump() << "\n";
  out_.flush();
}

void JsonlLogger::log_eval(const EvalRecord& rec) {
  ordered_json j;
  j["type"] = "eval";
  j["step"] = rec.env_step;
  j["grad_step"] = rec.grad_step;
  j["return_mean"] = rec.return_mean;
  j["return_std"] = rec.return_std;
  j["cost_sum"] = rec.cost_sum;
  j["violations_mean"] = rec.violations_mean;
  j["sigma"] = rec.sigma;
  j["n"] = rec.n;
  j["k"] = rec.k;
  j["lambda_mean"] = rec.lambda_mean;
  j["alpha"] = rec.alpha;
  j["loss_q"] = rec.loss_q;
  j["loss_qc"] = rec.loss_qc;
  j["loss_pi"] = rec.loss_pi;
  j["obj_lambda"] = rec.obj_lambda;
  j["sis_batch_loss"] = rec.sis_batch_loss;
  j["episode_costs"] = rec.episode_costs;
  j["episode_violations"] = rec.episode_violations;
  out_ << j.dump() << "\n";
  out_.flush();
  if (!out_) throw IoError("write failed for log '" + path_ + "'");
}

MetricsCsv::MetricsCsv(const std::string& path, std::uint64_t seed,
                       const std::string& config_hash_hex)
    : out_(path), path_(path) {
  if (!out_) throw IoError("cannot open metrics csv '" + path + "' for writing");
  out_ << "# seed=" << seed << " config_hash=" << config_hash_hex << "\n";
  out_ << "step,grad_step,return_mean,return_std,cost_sum,violations_mean,"
          "sigma,n,k,lambda_mean,alpha,loss_q,loss_qc,loss_pi,obj_lambda,sis_batch_loss\n";
}

void MetricsCsv::log_eval(const EvalRecord& rec) {
  char buf[640];
  std::snprintf(buf, sizeof(buf),
                "%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                static_cast<unsigned long long>(rec.env_step),
                static_cast<unsigned long long>(rec.grad_step), rec.return_mean,
                rec.return_std, rec.cost_sum, rec.violations_mean, rec.sigma, rec.n,
                rec.k, rec.lambda_mean, rec.alpha, rec.loss_q, rec.loss_qc, rec.loss_pi,
                rec.obj_lambda, rec.sis_batch_loss);
  out_ << buf;
  out_.flush();
  if (!out_) throw IoError("write failed for metrics csv '" + path_ + "'");
}

} // namespace sislab
