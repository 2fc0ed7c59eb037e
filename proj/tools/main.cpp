// gridstor command-line runner: constant-rate charge/discharge sweeps,
// declarative scenario runs, model parameter inspection, and a step-latency
// benchmark across the storage models.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridstor/bench.hpp"
#include "gridstor/clc_battery.hpp"
#include "gridstor/ecm_battery.hpp"
#include "gridstor/engine.hpp"
#include "gridstor/kernels.hpp"
#include "gridstor/pack_battery.hpp"
#include "gridstor/recordio.hpp"
#include "gridstor/scenario.hpp"
#include "gridstor/simple_battery.hpp"
#include "gridstor/timeparse.hpp"

namespace {

using nlohmann::ordered_json;

constexpr double kCellRatedCurrentA = 5.0;  // 1C for the reference cell
constexpr double kCellNominalV = 3.63;

// Writes to stdout when path is "-", otherwise to the named file.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void require_format(const std::string& format) {
  if (format != "csv" && format != "jsonl") {
    throw std::runtime_error("unknown format '" + format + "' (expected csv or jsonl)");
  }
}

struct RampOptions {
  std::string model = "clc";
  double c_rate = 1.0;
  int cells = 256;
  int ns = 0;  // pack override; both must be given together
  int np = 0;
  double step_seconds = 60.0;
};

std::unique_ptr<gridstor::Storage> make_ramp_storage(const RampOptions& opt,
                                                     double initial_soc, int& cells_out) {
  if (opt.ns > 0 || opt.np > 0) {
    if (opt.model != "pack") {
      throw std::runtime_error("--ns/--np only apply to the pack model");
    }
    if (opt.ns <= 0 || opt.np <= 0) {
      throw std::runtime_error("--ns and --np must be given together and be > 0");
    }
    gridstor::ECMParams cell;
    cell.initial_soc = initial_soc;
    gridstor::PackTopology topo;
    topo.ns = opt.ns;
    topo.np = opt.np;
    cells_out = topo.num_cells();
    return std::make_unique<gridstor::PackBattery>(std::move(cell), topo);
  }
  cells_out = opt.cells;
  return gridstor::make_bench_model(opt.model, opt.cells, initial_soc);
}

struct RampRow {
  double time_s = 0.0;
  double soc = 0.0;
  double applied_power_w = 0.0;
  double e_moved_wh = 0.0;
};

void write_ramp_row(std::ostream& out, const std::string& format, const RampRow& row) {
  if (format == "csv") {
    out << gridstor::format_double(row.time_s) << ',' << gridstor::format_double(row.soc)
        << ',' << gridstor::format_double(row.applied_power_w) << ','
        << gridstor::format_double(row.e_moved_wh) << '\n';
    return;
  }
  ordered_json j;
  j["time_s"] = row.time_s;
  j["soc"] = row.soc;
  j["applied_power_w"] = row.applied_power_w;
  j["e_moved_wh"] = row.e_moved_wh;
  out << j.dump() << '\n';
}

// Runs a constant-power request until the model stops moving charge
// (the per-step SoC delta falls below 1e-5), emitting one row per step.
int run_ramp(const RampOptions& opt, bool charging, const std::string& output,
             const std::string& format) {
  if (!(opt.c_rate > 0.0)) throw std::runtime_error("--c-rate must be > 0");
  if (!(opt.step_seconds > 0.0)) throw std::runtime_error("--step-seconds must be > 0");
  require_format(format);

  int cells = 0;
  const double initial_soc = charging ? 0.0 : 1.0;
  auto storage = make_ramp_storage(opt, initial_soc, cells);

  const double magnitude =
      opt.c_rate * kCellRatedCurrentA * kCellNominalV * static_cast<double>(cells);
  const double request_w = charging ? magnitude : -magnitude;
  const gridstor::DurationS step(opt.step_seconds);

  OutputSink sink(output);
  std::ostream& out = sink.stream();
  if (format == "csv") out << "time_s,soc,applied_power_w,e_moved_wh\n";
  write_ramp_row(out, format, RampRow{0.0, storage->soc().value, 0.0, 0.0});

  // 1e7 steps at the default minute step is ~19 years of simulated time;
  // treat anything longer as a stall.
  constexpr std::int64_t kMaxSteps = 10'000'000;
  double soc_prev = storage->soc().value;
  for (std::int64_t i = 1; i <= kMaxSteps; ++i) {
    const auto res = storage->update(gridstor::PowerW(request_w), step);
    const double soc_now = res.soc.value;
    write_ramp_row(out, format,
                   RampRow{static_cast<double>(i) * opt.step_seconds, soc_now,
                           res.applied_power.value, res.energy_moved.value});
    if (std::abs(soc_now - soc_prev) < 1e-5) return 0;
    soc_prev = soc_now;
  }
  throw std::runtime_error("run did not settle within the step limit");
}

std::string parent_dir(const std::string& path) {
  const auto pos = path.find_last_of('/');
  if (pos == std::string::npos) return ".";
  if (pos == 0) return "/";
  return path.substr(0, pos);
}

int run_scenario(const std::string& config_path, const std::string& model_override,
                 const std::string& output_override, const std::string& format_override) {
  gridstor::ScenarioConfig config = gridstor::ScenarioConfig::from_file(config_path);
  if (!model_override.empty()) config.storage.model = model_override;
  if (!output_override.empty()) config.output.path = output_override;
  if (!format_override.empty()) config.output.format = format_override;

  gridstor::Scenario scenario = gridstor::build_scenario(config, parent_dir(config_path));
  const std::vector<gridstor::StepRecord> records = gridstor::run(scenario);
  gridstor::write_records_file(config.output.path, config.output.format, records);

  const gridstor::RunSummary s = gridstor::summarize(records);
  std::cout << "scenario:        " << config.name << '\n'
            << "storage model:   " << scenario.storage->model_name() << '\n'
            << "steps:           " << scenario.steps << " x "
            << gridstor::format_double(config.step_seconds) << " s\n"
            << "grid import:     " << gridstor::format_double(s.import_wh) << " Wh\n"
            << "grid export:     " << gridstor::format_double(s.export_wh) << " Wh\n"
            << "net grid import: " << gridstor::format_double(s.net_import_wh) << " Wh\n"
            << "storage net:     " << gridstor::format_double(s.storage_net_wh) << " Wh\n"
            << "final soc:       " << gridstor::format_double(s.final_soc) << '\n'
            << "output:          " << config.output.path << " (" << config.output.format
            << ")\n";
  return 0;
}

int run_params(const std::string& model, int cells, const std::string& output) {
  ordered_json j;
  j["model"] = model;
  if (model == "simple") {
    const auto p = gridstor::SimpleParams::from_cells(18.87, cells);
    j["num_cells"] = cells;
    j["cell_capacity_wh"] = 18.87;
    j["capacity_wh"] = p.capacity_wh;
  } else if (model == "clc") {
    gridstor::CLCParams p;
    p.num_cells = cells;
    j["num_cells"] = p.num_cells;
    j["eta_c"] = p.eta_c;
    j["eta_d"] = p.eta_d;
    j["v_nominal"] = p.v_nominal;
    j["alpha_c_a"] = p.alpha_c_a;
    j["alpha_d_a"] = p.alpha_d_a;
    j["u1"] = p.u1;
    j["v1"] = p.v1;
    j["u2"] = p.u2;
    j["v2"] = p.v2;
    j["derived"]["pack_capacity_wh"] = p.pack_capacity_wh();
    j["derived"]["round_trip_efficiency"] = p.eta_c / p.eta_d;
  } else if (model == "ecm" || model == "pack") {
    gridstor::ECMParams p;
    j["capacity_ah"] = p.capacity_ah;
    j["r_internal_ohm"] = p.r_internal_ohm;
    j["i_charge_max_a"] = p.i_charge_max_a;
    j["i_discharge_max_a"] = p.i_discharge_max_a;
    j["v_max"] = p.v_max;
    j["v_min"] = p.v_min;
    j["ocv_table"]["version"] = gridstor::OcvTable::kDefaultVersion;
    j["ocv_table"]["knots"] = p.ocv_table.soc_knots().size();
    j["derived"]["mean_ocv_v"] = p.ocv_table.mean_ocv_v();
    j["derived"]["nominal_energy_wh"] = p.capacity_ah * p.ocv_table.mean_ocv_v();
    j["derived"]["fit_efficiency_at_1p5a"] =
        gridstor::fit_efficiency(1.5, p.r_internal_ohm, 3.63);
    if (model == "pack") {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
      if (side * side != cells) {
        throw std::runtime_error("pack cell count must be a perfect square, got " +
                                 std::to_string(cells));
      }
      j["ns"] = side;
      j["np"] = side;
      j["num_cells"] = cells;
      j["r_interconnect_ohm"] = gridstor::PackTopology{}.r_interconnect_ohm;
    } else {
      j["num_cells"] = cells;
    }
  } else {
    throw std::runtime_error("unknown model '" + model + "'");
  }
  OutputSink sink(output);
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int run_bench_cmd(const gridstor::BenchSpec& spec, const std::string& output) {
  const std::vector<gridstor::BenchRow> rows = gridstor::run_bench(spec);
  OutputSink sink(output);
  gridstor::write_bench_csv(sink.stream(), rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridstor: microgrid storage co-simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // subcommands inherit: global flags work after the name

  std::string kernel = "auto";
  std::uint64_t seed = 0;
  std::string output = "-";
  std::string format;
  app.add_option("--kernel", kernel, "Compute kernel variant (auto, scalar, avx2)")
      ->capture_default_str();
  app.add_option("--seed", seed, "Workload RNG seed (bench)")->capture_default_str();
  app.add_option("--output,-o", output, "Output path, or - for stdout")
      ->capture_default_str();
  app.add_option("--format", format, "Output format (csv, jsonl)");

  RampOptions ramp;
  const auto add_ramp_options = [&ramp](CLI::App* cmd) {
    cmd->add_option("--model", ramp.model, "Storage model (simple, clc, ecm, pack)")
        ->capture_default_str();
    cmd->add_option("--c-rate", ramp.c_rate, "Request magnitude as a multiple of 1C")
        ->capture_default_str();
    cmd->add_option("--cells", ramp.cells, "Cell count (perfect square for pack)")
        ->capture_default_str();
    cmd->add_option("--ns", ramp.ns, "Pack series cells (overrides --cells with --np)");
    cmd->add_option("--np", ramp.np, "Pack parallel strings (overrides --cells with --ns)");
    cmd->add_option("--step-seconds", ramp.step_seconds, "Step duration in seconds")
        ->capture_default_str();
  };
  CLI::App* discharge = app.add_subcommand(
      "discharge", "Constant-rate discharge from full until the model stops");
  add_ramp_options(discharge);
  CLI::App* charge = app.add_subcommand(
      "charge", "Constant-rate charge from empty until the model stops");
  add_ramp_options(charge);

  std::string config_path;
  std::string model_override;
  CLI::App* scenario = app.add_subcommand("scenario", "Run a JSON-described scenario");
  scenario->add_option("--config,-c", config_path, "Scenario JSON file")->required();
  scenario->add_option("--model-override", model_override,
                       "Replace the scenario's storage model");

  gridstor::BenchSpec spec;
  CLI::App* bench = app.add_subcommand("bench", "Measure per-step latency by model and size");
  bench->add_option("--models", spec.models, "Models to benchmark")->capture_default_str();
  bench->add_option("--cells", spec.cell_counts, "Cell counts to benchmark")
      ->capture_default_str();
  bench->add_option("--iterations", spec.iterations, "Timing samples per combination")
      ->capture_default_str();
  bench->add_option("--step-seconds", spec.step_seconds, "Step duration in seconds")
      ->capture_default_str();

  std::string params_model = "clc";
  int params_cells = 1;
  CLI::App* params = app.add_subcommand("params", "Print resolved model parameters as JSON");
  params->add_option("--model", params_model, "Storage model")->capture_default_str();
  params->add_option("--cells", params_cells, "Cell count")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!gridstor::kernels::select(kernel)) {
      std::cerr << "error: kernel variant '" << kernel << "' is not available here (have:";
      for (const auto& name : gridstor::kernels::available()) std::cerr << ' ' << name;
      std::cerr << ")\n";
      return 1;
    }
    if (!format.empty()) require_format(format);
    if (discharge->parsed()) {
      return run_ramp(ramp, /*charging=*/false, output, format.empty() ? "csv" : format);
    }
    if (charge->parsed()) {
      return run_ramp(ramp, /*charging=*/true, output, format.empty() ? "csv" : format);
    }
    if (scenario->parsed()) {
      // Only an explicit --output/--format overrides the scenario file's own
      // output block.
      const std::string out_override = app.count("--output") > 0 ? output : "";
      return run_scenario(config_path, model_override, out_override, format);
    }
    if (bench->parsed()) {
      spec.seed = seed;
      return run_bench_cmd(spec, output);
    }
    if (params->parsed()) return run_params(params_model, params_cells, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
