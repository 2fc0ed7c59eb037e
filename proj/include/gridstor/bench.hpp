#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gridstor/storage.hpp"

namespace gridstor {

struct BenchSpec {
  std::vector<std::string> models = {"simple", "clc", "ecm", "pack"};
  std::vector<int> cell_counts = {16, 64, 256, 1024};
  int iterations = 1000;  // timing samples per model/count pair; >= 100
  std::uint64_t seed = 0;
  double step_seconds = 60.0;

  void validate() const;
};

struct BenchRow {
  std::string model;
  int cells = 0;
  int iterations = 0;
  int batch = 0;  // update() calls per timing sample
  double min_us = 0.0;
  double p25_us = 0.0;
  double median_us = 0.0;
  double p75_us = 0.0;
  double p95_us = 0.0;
  double max_us = 0.0;
};

// Constructs the model at the requested cell count (packs use a square
// ns x np topology) and times update() over a seeded stream of random
// power requests within +/-0.7C. Sub-microsecond models are timed in
// batches sized by a pilot measurement so clock quantization does not
// dominate; reported numbers are per update() call.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

// Model factory shared with the CLI: a mid-charge instance sized for
// benchmarking and constant-rate experiments.
std::unique_ptr<Storage> make_bench_model(const std::string& model, int cells,
                                          double initial_soc);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace gridstor
