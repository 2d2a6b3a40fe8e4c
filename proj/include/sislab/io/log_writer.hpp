#pragma once

#include "sislab/train/trainer.hpp"

#include <fstream>
#include <string>

namespace sislab {

// Append-only JSON-lines training log: one header object, then one object
// per evaluation. Field order and number formatting are fixed so identical
// runs produce byte-identical files.
class JsonlLogger {
 public:
  JsonlLogger(const std::string& path, std::uint64_t seed,
              const std::string& config_hash_hex);
  void log_eval(const EvalRecord& rec);

 private:
  std::ofstream out_;
  std::string path_;
};

// Plot-ready CSV mirror of the evaluation series.
class MetricsCsv {
 public:
  MetricsCsv(const std::string& path, std::uint64_t seed,
             const std::string& config_hash_hex);
  void log_eval(const EvalRecord& rec);

 private:
  std::ofstream out_;
  std::string path_;
};

} // namespace sislab
