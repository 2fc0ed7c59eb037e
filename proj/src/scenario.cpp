#include "gridstor/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gridstor/clc_battery.hpp"
#include "gridstor/ecm_battery.hpp"
#include "gridstor/pack_battery.hpp"
#include "gridstor/simple_battery.hpp"
#include "gridstor/timeparse.hpp"

namespace gridstor {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
    }
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw std::invalid_argument(where + ": missing or non-numeric '" + std::string(key) + "'");
  }
  return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::invalid_argument(std::string("'") + key + "' must be a number");
  }
  return obj[key].get<double>();
}

int int_or(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw std::invalid_argument(where + ": '" + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

OcvTable parse_ocv_table(const json& spec, const std::string& base_dir) {
  if (spec.is_string()) {
    return OcvTable::from_csv(resolve_path(spec.get<std::string>(), base_dir));
  }
  if (spec.is_array()) {
    std::vector<double> soc;
    std::vector<double> ocv;
    for (const json& knot : spec) {
      if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() ||
          !knot[1].is_number()) {
        throw std::invalid_argument("storage.params.ocv_table: knots must be [soc, ocv] pairs");
      }
      soc.push_back(knot[0].get<double>());
      ocv.push_back(knot[1].get<double>());
    }
    return OcvTable(std::move(soc), std::move(ocv));
  }
  throw std::invalid_argument("storage.params.ocv_table: expected CSV path or [[soc, ocv], ...]");
}

ECMParams parse_cell_params(const json& p, const std::string& base_dir,
                            const std::string& where) {
  check_keys(p,
             {"capacity_ah", "r_internal_ohm", "i_charge_max_a", "i_discharge_max_a",
              "v_max", "v_min", "num_cells", "initial_soc", "ocv_table"},
             where);
  ECMParams cell;
  cell.capacity_ah = number_or(p, "capacity_ah", cell.capacity_ah);
  cell.r_internal_ohm = number_or(p, "r_internal_ohm", cell.r_internal_ohm);
  cell.i_charge_max_a = number_or(p, "i_charge_max_a", cell.i_charge_max_a);
  cell.i_discharge_max_a = number_or(p, "i_discharge_max_a", cell.i_discharge_max_a);
  cell.v_max = number_or(p, "v_max", cell.v_max);
  cell.v_min = number_or(p, "v_min", cell.v_min);
  cell.num_cells = int_or(p, "num_cells", cell.num_cells, where);
  cell.initial_soc = number_or(p, "initial_soc", cell.initial_soc);
  if (p.contains("ocv_table")) cell.ocv_table = parse_ocv_table(p["ocv_table"], base_dir);
  cell.validate();
  return cell;
}

// Default per-cell usable energy for the simple model when sized by count,
// matching the other models' default cell at a 0.2C discharge.
constexpr double kDefaultCellCapacityWh = 18.87;

std::unique_ptr<Storage> make_simple(const json& p) {
  check_keys(p, {"capacity_wh", "cell_capacity_wh", "num_cells", "initial_soc"},
             "storage.params (simple)");
  const double initial_soc = number_or(p, "initial_soc", 0.0);
  if (p.contains("capacity_wh")) {
    if (p.contains("cell_capacity_wh") || p.contains("num_cells")) {
      throw std::invalid_argument(
          "storage.params (simple): give capacity_wh or cell sizing, not both");
    }
    return std::make_unique<SimpleBattery>(
        SimpleParams::total(require_number(p, "capacity_wh", "storage.params"), initial_soc));
  }
  const int cells = int_or(p, "num_cells", 1, "storage.params (simple)");
  const double cell_wh = number_or(p, "cell_capacity_wh", kDefaultCellCapacityWh);
  return std::make_unique<SimpleBattery>(SimpleParams::from_cells(cell_wh, cells, initial_soc));
}

std::unique_ptr<Storage> make_clc(const json& p) {
  check_keys(p,
             {"num_cells", "initial_soc", "eta_c", "eta_d", "v_nominal", "alpha_c_a",
              "alpha_d_a", "u1", "v1", "u2", "v2"},
             "storage.params (clc)");
  CLCParams params;
  params.num_cells = int_or(p, "num_cells", params.num_cells, "storage.params (clc)");
  params.initial_soc = number_or(p, "initial_soc", params.initial_soc);
  params.eta_c = number_or(p, "eta_c", params.eta_c);
  params.eta_d = number_or(p, "eta_d", params.eta_d);
  params.v_nominal = number_or(p, "v_nominal", params.v_nominal);
  params.alpha_c_a = number_or(p, "alpha_c_a", params.alpha_c_a);
  params.alpha_d_a = number_or(p, "alpha_d_a", params.alpha_d_a);
  params.u1 = number_or(p, "u1", params.u1);
  params.v1 = number_or(p, "v1", params.v1);
  params.u2 = number_or(p, "u2", params.u2);
  params.v2 = number_or(p, "v2", params.v2);
  params.validate();
  return std::make_unique<CLCBattery>(params);
}

std::unique_ptr<Storage> make_ecm(const json& p, const std::string& base_dir) {
  return std::make_unique<EcmBattery>(parse_cell_params(p, base_dir, "storage.params (ecm)"));
}

std::unique_ptr<Storage> make_pack(const json& p, const std::string& base_dir) {
  check_keys(p,
             {"ns", "np", "num_cells", "r_interconnect_ohm", "heterogeneity", "cell",
              "initial_soc"},
             "storage.params (pack)");
  PackTopology topo;
  if (p.contains("num_cells") && !(p.contains("ns") || p.contains("np"))) {
    const int cells = int_or(p, "num_cells", 0, "storage.params (pack)");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
    if (cells <= 0 || side * side != cells) {
      throw std::invalid_argument(
          "storage.params (pack): num_cells must be a perfect square (or give ns/np), got " +
          std::to_string(cells));
    }
    topo.ns = side;
    topo.np = side;
  } else {
    topo.ns = int_or(p, "ns", topo.ns, "storage.params (pack)");
    topo.np = int_or(p, "np", topo.np, "storage.params (pack)");
    if (p.contains("num_cells") &&
        int_or(p, "num_cells", 0, "storage.params (pack)") != topo.ns * topo.np) {
      throw std::invalid_argument("storage.params (pack): num_cells contradicts ns*np");
    }
  }
  topo.r_interconnect_ohm = number_or(p, "r_interconnect_ohm", topo.r_interconnect_ohm);
  if (p.contains("heterogeneity")) {
    const json& h = p["heterogeneity"];
    check_keys(h, {"soc_jitter", "r_jitter", "seed"}, "storage.params.heterogeneity");
    HeterogeneityConfig het;
    het.soc_jitter = number_or(h, "soc_jitter", 0.0);
    het.r_jitter = number_or(h, "r_jitter", 0.0);
    het.seed = static_cast<std::uint64_t>(
        int_or(h, "seed", 0, "storage.params.heterogeneity"));
    topo.heterogeneity = het;
  }

  ECMParams cell = p.contains("cell")
                       ? parse_cell_params(p["cell"], base_dir, "storage.params.cell")
                       : ECMParams{};
  if (p.contains("initial_soc")) {
    cell.initial_soc = number_or(p, "initial_soc", cell.initial_soc);
  }
  cell.num_cells = 1;  // the topology owns the count
  cell.validate();
  topo.validate();
  return std::make_unique<PackBattery>(std::move(cell), topo);
}

ActorSpec parse_actor(const json& a) {
  if (!a.is_object()) throw std::invalid_argument("actors: each entry must be an object");
  ActorSpec spec;
  if (!a.contains("type") || !a["type"].is_string()) {
    throw std::invalid_argument("actors: missing 'type'");
  }
  spec.type = a["type"].get<std::string>();
  spec.name = a.contains("name") ? a["name"].get<std::string>() : spec.type;
  const std::string where = "actors." + spec.name;
  if (spec.type == "solar") {
    check_keys(a, {"type", "name", "trace", "area_m2", "efficiency"}, where);
    if (!a.contains("trace") || !a["trace"].is_string()) {
      throw std::invalid_argument(where + ": missing 'trace' CSV path");
    }
    spec.trace_path = a["trace"].get<std::string>();
    spec.area_m2 = require_number(a, "area_m2", where);
    spec.efficiency = require_number(a, "efficiency", where);
  } else if (spec.type == "datacenter") {
    check_keys(a, {"type", "name", "node_powers_w", "pue"}, where);
    if (!a.contains("node_powers_w") || !a["node_powers_w"].is_array()) {
      throw std::invalid_argument(where + ": missing 'node_powers_w' array");
    }
    for (const json& v : a["node_powers_w"]) {
      if (!v.is_number()) throw std::invalid_argument(where + ": node powers must be numbers");
      spec.node_powers_w.push_back(v.get<double>());
    }
    spec.pue = require_number(a, "pue", where);
  } else if (spec.type == "constant") {
    check_keys(a, {"type", "name", "power_w"}, where);
    spec.power_w = require_number(a, "power_w", where);
  } else {
    throw std::invalid_argument("actors: unknown type '" + spec.type + "'");
  }
  return spec;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("scenario: cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") + e.what());
  }
  check_keys(root,
             {"name", "start_time", "step_seconds", "horizon_seconds", "actors",
              "storage", "policy", "controllers", "output"},
             "scenario");

  ScenarioConfig cfg;
  cfg.name = root.contains("name") ? root["name"].get<std::string>() : "scenario";
  if (!root.contains("start_time") || !root["start_time"].is_string()) {
    throw std::invalid_argument("scenario: missing 'start_time' (ISO-8601)");
  }
  cfg.start_time_iso = root["start_time"].get<std::string>();
  cfg.step_seconds = number_or(root, "step_seconds", cfg.step_seconds);
  cfg.horizon_seconds = require_number(root, "horizon_seconds", "scenario");

  if (!root.contains("actors") || !root["actors"].is_array()) {
    throw std::invalid_argument("scenario: missing 'actors' array");
  }
  for (const json& a : root["actors"]) cfg.actors.push_back(parse_actor(a));

  if (!root.contains("storage") || !root["storage"].is_object()) {
    throw std::invalid_argument("scenario: missing 'storage' object");
  }
  const json& st = root["storage"];
  check_keys(st, {"model", "params"}, "storage");
  if (!st.contains("model") || !st["model"].is_string()) {
    throw std::invalid_argument("storage: missing 'model'");
  }
  cfg.storage.model = st["model"].get<std::string>();
  cfg.storage.params_json = st.contains("params") ? st["params"].dump() : "{}";

  if (root.contains("policy")) {
    const json& pol = root["policy"];
    check_keys(pol, {"min_soc", "charge_power_w", "grid_connected"}, "policy");
    cfg.policy.min_soc = number_or(pol, "min_soc", cfg.policy.min_soc);
    if (pol.contains("charge_power_w")) {
      cfg.policy.charge_power_w = require_number(pol, "charge_power_w", "policy");
    }
    if (pol.contains("grid_connected")) {
      if (!pol["grid_connected"].is_boolean()) {
        throw std::invalid_argument("policy: 'grid_connected' must be a boolean");
      }
      cfg.policy.grid_connected = pol["grid_connected"].get<bool>();
    }
  }

  if (root.contains("controllers")) {
    if (!root["controllers"].is_array()) {
      throw std::invalid_argument("scenario: 'controllers' must be an array");
    }
    for (const json& c : root["controllers"]) {
      check_keys(c, {"type", "name", "events"}, "controllers");
      if (!c.contains("type") || c["type"].get<std::string>() != "schedule") {
        throw std::invalid_argument("controllers: only type 'schedule' is supported");
      }
      if (!c.contains("events") || !c["events"].is_array()) {
        throw std::invalid_argument("controllers: missing 'events' array");
      }
      for (const json& e : c["events"]) {
        check_keys(e, {"start", "end", "key", "value"}, "controllers.events");
        ScheduleEvent ev;
        if (!e.contains("start") || !e.contains("end") || !e.contains("key") ||
            !e.contains("value")) {
          throw std::invalid_argument("controllers.events: need start, end, key, value");
        }
        ev.start = parse_iso8601_utc(e["start"].get<std::string>());
        ev.end = parse_iso8601_utc(e["end"].get<std::string>());
        ev.key = e["key"].get<std::string>();
        ev.value = require_number(e, "value", "controllers.events");
        cfg.schedule_events.push_back(ev);
      }
    }
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    check_keys(out, {"path", "format"}, "output");
    if (out.contains("path")) cfg.output.path = out["path"].get<std::string>();
    if (out.contains("format")) cfg.output.format = out["format"].get<std::string>();
  }

  cfg.validate();
  return cfg;
}

void ScenarioConfig::validate() const {
  parse_iso8601_utc(start_time_iso);  // throws if malformed
  if (!(step_seconds > 0.0) || step_seconds != std::floor(step_seconds)) {
    throw std::invalid_argument("scenario: step_seconds must be a positive whole number");
  }
  if (!(horizon_seconds > 0.0)) {
    throw std::invalid_argument("scenario: horizon_seconds must be > 0");
  }
  const double steps = horizon_seconds / step_seconds;
  if (steps != std::floor(steps)) {
    throw std::invalid_argument("scenario: horizon_seconds must be a multiple of step_seconds");
  }
  if (storage.model != "simple" && storage.model != "clc" && storage.model != "ecm" &&
      storage.model != "pack") {
    throw std::invalid_argument("scenario: unknown storage model '" + storage.model + "'");
  }
  if (output.format != "csv" && output.format != "jsonl") {
    throw std::invalid_argument("scenario: output format must be 'csv' or 'jsonl'");
  }
  policy.validate();
}

std::unique_ptr<Storage> make_storage(const StorageSpec& spec, const std::string& base_dir) {
  json params;
  try {
    params = json::parse(spec.params_json);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("storage.params: JSON parse error: ") + e.what());
  }
  if (!params.is_object()) {
    throw std::invalid_argument("storage.params must be an object");
  }
  if (spec.model == "simple") return make_simple(params);
  if (spec.model == "clc") return make_clc(params);
  if (spec.model == "ecm") return make_ecm(params, base_dir);
  if (spec.model == "pack") return make_pack(params, base_dir);
  throw std::invalid_argument("unknown storage model '" + spec.model + "'");
}

std::unique_ptr<Actor> make_actor(const ActorSpec& spec, const std::string& base_dir) {
  if (spec.type == "solar") {
    return std::make_unique<SolarActor>(spec.name,
                                        TimeSeries::load_csv(resolve_path(spec.trace_path, base_dir)),
                                        spec.area_m2, spec.efficiency);
  }
  if (spec.type == "datacenter") {
    return std::make_unique<DatacenterActor>(spec.name, spec.node_powers_w, spec.pue);
  }
  if (spec.type == "constant") {
    return std::make_unique<ConstantActor>(spec.name, spec.power_w);
  }
  throw std::invalid_argument("unknown actor type '" + spec.type + "'");
}

}  // namespace gridstor
