#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gridstor/ecm_battery.hpp"
#include "gridstor/pack_battery.hpp"

using namespace gridstor;

namespace {

// Closed-form oracle for the parallel-string network. With a = sum 1/R_s and
// b = sum E_s/R_s, the power balance sum_s (V-E_s)/R_s * V = p becomes
// a V^2 - b V - p = 0; the physical terminal voltage is the upper root.
struct NetworkOracle {
  double terminal_v = 0.0;
  std::vector<double> currents;
};

NetworkOracle kirchhoff(const std::vector<double>& emf, const std::vector<double>& res,
                        double p) {
  double a = 0.0;
  double b = 0.0;
  for (std::size_t s = 0; s < emf.size(); ++s) {
    a += 1.0 / res[s];
    b += emf[s] / res[s];
  }
  NetworkOracle out;
  out.terminal_v = (b + std::sqrt(b * b + 4.0 * a * p)) / (2.0 * a);
  for (std::size_t s = 0; s < emf.size(); ++s) {
    out.currents.push_back((out.terminal_v - emf[s]) / res[s]);
  }
  return out;
}

ECMParams cell_at(double soc) {
  ECMParams p;
  p.initial_soc = soc;
  return p;
}

}  // namespace

TEST_CASE("pack_solve matches the Kirchhoff closed form: 1s2p heterogeneous") {
  const std::vector<double> emf = {3.80, 3.72};
  const std::vector<double> res = {0.050, 0.068};
  for (const double p : {-25.0, -5.0, 0.0, 5.0, 20.0}) {
    const PackSolveResult got = pack_solve(emf, res, p);
    const NetworkOracle want = kirchhoff(emf, res, p);
    CHECK(got.terminal_v == doctest::Approx(want.terminal_v).epsilon(1e-9));
    for (std::size_t s = 0; s < emf.size(); ++s) {
      CHECK(got.string_currents_a[s] ==
            doctest::Approx(want.currents[s]).epsilon(1e-8));
    }
    CHECK(std::abs(got.residual_w) <= 1e-9 * std::max(1.0, std::abs(p)));
    CHECK(got.iterations <= 100);
  }
}

TEST_CASE("pack_solve matches the Kirchhoff closed form: 2s2p heterogeneous") {
  // Strings of two cells: EMFs and resistances are the series sums.
  const std::vector<double> emf = {3.81 + 3.79, 3.74 + 3.70};
  const std::vector<double> res = {0.050 + 0.055, 0.061 + 0.071};
  for (const double p : {-40.0, -12.5, 0.0, 7.0, 33.0}) {
    const PackSolveResult got = pack_solve(emf, res, p);
    const NetworkOracle want = kirchhoff(emf, res, p);
    CHECK(got.terminal_v == doctest::Approx(want.terminal_v).epsilon(1e-9));
    for (std::size_t s = 0; s < emf.size(); ++s) {
      CHECK(got.string_currents_a[s] ==
            doctest::Approx(want.currents[s]).epsilon(1e-8));
    }
  }
}

TEST_CASE("pack_solve: random wide networks stay within the residual contract") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> emf_d(3.0 * 16, 4.18 * 16);
  std::uniform_real_distribution<double> res_d(0.7, 1.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> emf(32);
    std::vector<double> res(32);
    for (std::size_t s = 0; s < emf.size(); ++s) {
      emf[s] = emf_d(rng);
      res[s] = res_d(rng);
    }
    const double p = std::uniform_real_distribution<double>(-3000.0, 3000.0)(rng);
    const PackSolveResult got = pack_solve(emf, res, p);
    const NetworkOracle want = kirchhoff(emf, res, p);
    CHECK(got.terminal_v == doctest::Approx(want.terminal_v).epsilon(1e-9));
    CHECK(std::abs(got.residual_w) <= 1e-9 * std::max(1.0, std::abs(p)));
  }
}

TEST_CASE("pack_solve: zero power balances circulating currents") {
  const std::vector<double> emf = {3.9, 3.6};
  const std::vector<double> res = {0.05, 0.05};
  const PackSolveResult r = pack_solve(emf, res, 0.0);
  // Total current is zero but the mismatched strings exchange charge.
  CHECK(r.string_currents_a[0] + r.string_currents_a[1] ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.string_currents_a[0] < 0.0);  // higher-EMF string discharges
  CHECK(r.string_currents_a[1] > 0.0);
  CHECK(r.terminal_v == doctest::Approx(3.75).epsilon(1e-9));
}

TEST_CASE("pack_solve rejects impossible requests and bad networks") {
  const std::vector<double> emf = {3.8};
  const std::vector<double> res = {0.05};
  // Deliverable minimum is -E^2/(4R) = -72.2 W per string.
  CHECK_THROWS_AS(pack_solve(emf, res, -100.0), std::runtime_error);
  CHECK_NOTHROW(pack_solve(emf, res, -70.0));
  CHECK_THROWS_AS(pack_solve({}, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pack_solve({3.8}, {0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pack_solve({0.0}, {0.05}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pack_solve({3.8}, {0.05, 0.05}, 1.0), std::invalid_argument);
}

TEST_CASE("uniform pack tracks a scaled single cell") {
  PackTopology topo;
  topo.ns = 16;
  topo.np = 16;
  topo.r_interconnect_ohm = 0.0;
  PackBattery pack(cell_at(0.5), topo);
  EcmBattery cell(cell_at(0.5));
  const double n = 256.0;

  // Zero-mean waveform keeps the trajectory mid-range, so neither model takes
  // its (differently-accounted) boundary-landing path.
  for (int i = 0; i < 500; ++i) {
    const double p_cell = 12.0 * std::sin(0.7 * i + 0.3);
    const StorageResponse rp = pack.update(PowerW(p_cell * n), DurationS(60.0));
    const StorageResponse rc = cell.update(PowerW(p_cell), DurationS(60.0));
    CAPTURE(i);
    CHECK(std::abs(rp.soc.value - rc.soc.value) < 1e-6);
    CHECK(rp.applied_power.value ==
          doctest::Approx(rc.applied_power.value * n).epsilon(1e-6));
  }
}

TEST_CASE("topology and heterogeneity validation") {
  CHECK_THROWS_AS(PackBattery(cell_at(0.5), PackTopology{0, 16, 0.0, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PackBattery(cell_at(0.5), PackTopology{16, -1, 0.0, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PackBattery(cell_at(0.5), PackTopology{16, 16, -0.001, {}}),
                  std::invalid_argument);

  PackTopology bad_het;
  bad_het.heterogeneity = HeterogeneityConfig{-0.1, 0.0, 1};
  CHECK_THROWS_AS(PackBattery(cell_at(0.5), bad_het), std::invalid_argument);
  bad_het.heterogeneity = HeterogeneityConfig{0.0, 1.0, 1};
  CHECK_THROWS_AS(PackBattery(cell_at(0.5), bad_het), std::invalid_argument);
}

TEST_CASE("seeded heterogeneity is reproducible and bounded") {
  PackTopology topo;
  topo.ns = 4;
  topo.np = 4;
  topo.heterogeneity = HeterogeneityConfig{0.05, 0.10, 2024};

  PackBattery a(cell_at(0.5), topo);
  PackBattery b(cell_at(0.5), topo);
  bool any_spread = false;
  for (int i = 0; i < a.num_cells(); ++i) {
    CHECK(a.cell_soc(i) == b.cell_soc(i));
    CHECK(a.cell_r(i) == b.cell_r(i));
    CHECK(a.cell_soc(i) >= 0.45 - 1e-12);
    CHECK(a.cell_soc(i) <= 0.55 + 1e-12);
    CHECK(a.cell_r(i) >= 0.05324 * 0.9 - 1e-12);
    CHECK(a.cell_r(i) <= 0.05324 * 1.1 + 1e-12);
    if (a.cell_soc(i) != 0.5) any_spread = true;
  }
  CHECK(any_spread);

  topo.heterogeneity->seed = 2025;
  PackBattery c(cell_at(0.5), topo);
  bool differs = false;
  for (int i = 0; i < a.num_cells(); ++i) {
    if (a.cell_soc(i) != c.cell_soc(i)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("a weaker string carries less of the discharge current") {
  PackTopology topo;
  topo.ns = 1;
  topo.np = 2;
  topo.r_interconnect_ohm = 0.0;
  PackBattery pack(cell_at(0.5), topo);
  pack.set_cell_r(1, 0.05324 * 3.0);

  pack.update(PowerW(-10.0), DurationS(60.0));
  const std::vector<double>& cur = pack.string_currents_a();
  CHECK(cur[0] < 0.0);
  CHECK(cur[1] < 0.0);
  CHECK(std::abs(cur[1]) < std::abs(cur[0]));
}

TEST_CASE("interconnect resistance lowers the discharge terminal voltage") {
  PackTopology plain;
  plain.ns = 16;
  plain.np = 16;
  plain.r_interconnect_ohm = 0.0;
  PackTopology lossy = plain;
  lossy.r_interconnect_ohm = 0.005;

  PackBattery a(cell_at(0.5), plain);
  PackBattery b(cell_at(0.5), lossy);
  a.update(PowerW(-2000.0), DurationS(60.0));
  b.update(PowerW(-2000.0), DurationS(60.0));
  CHECK(b.terminal_v() < a.terminal_v());
}

TEST_CASE("coulomb bounds: a full pack accepts nothing, an empty one yields nothing") {
  PackTopology topo;
  topo.ns = 2;
  topo.np = 2;
  PackBattery full(cell_at(1.0), topo);
  const StorageResponse rf = full.update(PowerW(50.0), DurationS(600.0));
  CHECK(rf.energy_moved.value == 0.0);
  CHECK(rf.soc.value == 1.0);
  for (int i = 0; i < full.num_cells(); ++i) CHECK(full.cell_soc(i) == 1.0);

  PackBattery empty(cell_at(0.0), topo);
  const StorageResponse re = empty.update(PowerW(-50.0), DurationS(600.0));
  CHECK(re.energy_moved.value == 0.0);
  CHECK(re.soc.value == 0.0);
}

TEST_CASE("cells never leave [0, capacity] under heavy cycling") {
  PackTopology topo;
  topo.ns = 4;
  topo.np = 4;
  topo.heterogeneity = HeterogeneityConfig{0.2, 0.15, 7};
  PackBattery pack(cell_at(0.85), topo);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> power(-2.0 * 5 * 3.63 * 16, 2.0 * 5 * 3.63 * 16);
  for (int i = 0; i < 400; ++i) {
    pack.update(PowerW(power(rng)), DurationS(300.0));
    for (int c = 0; c < pack.num_cells(); ++c) {
      CHECK(pack.cell_soc(c) >= 0.0);
      CHECK(pack.cell_soc(c) <= 1.0);
    }
    CHECK(std::abs(pack.last_residual_w()) <= 1e-6 * std::max(1.0, 2.0 * 5 * 3.63 * 16));
  }
}

TEST_CASE("state snapshot carries the pack telemetry keys") {
  PackTopology topo;
  topo.ns = 2;
  topo.np = 2;
  PackBattery pack(cell_at(0.5), topo);
  pack.update(PowerW(20.0), DurationS(60.0));
  const StorageState st = pack.state();
  REQUIRE(st.count("min_cell_v") == 1);
  REQUIRE(st.count("max_cell_v") == 1);
  REQUIRE(st.count("cell_soc_mean") == 1);
  REQUIRE(st.count("terminal_v") == 1);
  CHECK(st.at("min_cell_v") <= st.at("max_cell_v"));
  CHECK(st.at("cell_soc_mean") == pack.soc().value);
  CHECK(pack.model_name() == std::string("pack"));
}
