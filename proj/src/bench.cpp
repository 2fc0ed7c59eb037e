#include "gridstor/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "gridstor/clc_battery.hpp"
#include "gridstor/ecm_battery.hpp"
#include "gridstor/pack_battery.hpp"
#include "gridstor/recordio.hpp"
#include "gridstor/simple_battery.hpp"

namespace gridstor {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kCellCapacityWh = 18.87;
constexpr double kCellRatedCurrentA = 5.0;  // 1C
constexpr double kCellNominalV = 3.63;

std::uint64_t mix_seed(std::uint64_t seed, const std::string& model, int cells) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (char c : model) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  h ^= static_cast<std::uint64_t>(cells);
  h *= 1099511628211ULL;
  return h;
}

int square_side(int cells) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
  if (side * side != cells) {
    throw std::invalid_argument("pack cell count must be a perfect square, got " +
                                std::to_string(cells));
  }
  return side;
}

double percentile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const std::size_t idx = static_cast<std::size_t>(
      std::llround(q * static_cast<double>(n - 1)));
  return sorted[std::min(idx, n - 1)];
}

}  // namespace

void BenchSpec::validate() const {
  if (iterations < 100) {
    throw std::invalid_argument("bench: iterations must be >= 100 for stable percentiles, got " +
                                std::to_string(iterations));
  }
  if (models.empty() || cell_counts.empty()) {
    throw std::invalid_argument("bench: need at least one model and one cell count");
  }
  for (const std::string& m : models) {
    if (m != "simple" && m != "clc" && m != "ecm" && m != "pack") {
      throw std::invalid_argument("bench: unknown model '" + m + "'");
    }
  }
  if (!(step_seconds > 0.0)) {
    throw std::invalid_argument("bench: step_seconds must be > 0");
  }
  for (int c : cell_counts) {
    if (c <= 0) throw std::invalid_argument("bench: cell counts must be > 0");
  }
}

std::unique_ptr<Storage> make_bench_model(const std::string& model, int cells,
                                          double initial_soc) {
  if (cells <= 0) {
    throw std::invalid_argument("cell count must be > 0, got " + std::to_string(cells));
  }
  if (model == "simple") {
    return std::make_unique<SimpleBattery>(
        SimpleParams::from_cells(kCellCapacityWh, cells, initial_soc));
  }
  if (model == "clc") {
    CLCParams p;
    p.num_cells = cells;
    p.initial_soc = initial_soc;
    return std::make_unique<CLCBattery>(p);
  }
  if (model == "ecm") {
    ECMParams p;
    p.num_cells = cells;
    p.initial_soc = initial_soc;
    return std::make_unique<EcmBattery>(std::move(p));
  }
  if (model == "pack") {
    const int side = square_side(cells);
    ECMParams cell;
    cell.initial_soc = initial_soc;
    PackTopology topo;
    topo.ns = side;
    topo.np = side;
    return std::make_unique<PackBattery>(std::move(cell), topo);
  }
  throw std::invalid_argument("unknown model '" + model + "'");
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  spec.validate();
  std::vector<BenchRow> rows;

  for (const std::string& model : spec.models) {
    for (int cells : spec.cell_counts) {
      auto storage = make_bench_model(model, cells, 0.5);
      const DurationS step(spec.step_seconds);

      // Zero-mean requests within +/-0.7C keep the walk near mid charge and
      // inside every model's feasible window most of the time.
      const double p_scale =
          0.7 * kCellRatedCurrentA * kCellNominalV * static_cast<double>(cells);
      std::mt19937_64 rng(mix_seed(spec.seed, model, cells));
      std::uniform_real_distribution<double> draw(-p_scale, p_scale);

      for (int i = 0; i < 100; ++i) {  // warmup
        storage->update(PowerW(draw(rng)), step);
      }

      // Pilot: batch sub-microsecond models so each sample spans >= ~100 us
      // of work, long enough that scheduler jitter and clock quantization do
      // not move the median; round the batch to a power of two to keep it
      // stable run-to-run.
      constexpr int kPilotCalls = 64;
      const auto pilot_start = Clock::now();
      for (int i = 0; i < kPilotCalls; ++i) {
        storage->update(PowerW(draw(rng)), step);
      }
      const double pilot_ns =
          std::chrono::duration<double, std::nano>(Clock::now() - pilot_start).count() /
          kPilotCalls;
      int batch = 1;
      while (batch < 8192 && pilot_ns * batch < 100000.0) batch *= 2;

      std::vector<double> samples_us;
      samples_us.reserve(static_cast<std::size_t>(spec.iterations));
      for (int i = 0; i < spec.iterations; ++i) {
        const auto t0 = Clock::now();
        for (int b = 0; b < batch; ++b) {
          storage->update(PowerW(draw(rng)), step);
        }
        const auto t1 = Clock::now();
        samples_us.push_back(
            std::chrono::duration<double, std::micro>(t1 - t0).count() / batch);
      }
      std::sort(samples_us.begin(), samples_us.end());

      BenchRow row;
      row.model = model;
      row.cells = cells;
      row.iterations = spec.iterations;
      row.batch = batch;
      row.min_us = samples_us.front();
      row.p25_us = percentile(samples_us, 0.25);
      row.median_us = percentile(samples_us, 0.50);
      row.p75_us = percentile(samples_us, 0.75);
      row.p95_us = percentile(samples_us, 0.95);
      row.max_us = samples_us.back();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "model,cells,iterations,batch,min_us,p25_us,median_us,p75_us,p95_us,max_us\n";
  for (const BenchRow& r : rows) {
    out << r.model << ',' << r.cells << ',' << r.iterations << ',' << r.batch << ','
        << format_double(r.min_us) << ',' << format_double(r.p25_us) << ','
        << format_double(r.median_us) << ',' << format_double(r.p75_us) << ','
        << format_double(r.p95_us) << ',' << format_double(r.max_us) << '\n';
  }
}

}  // namespace gridstor
