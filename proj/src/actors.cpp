#include "gridstor/actors.hpp"

#include <cmath>
#include <stdexcept>

namespace gridstor {

double solar_power_w(double irradiance_w_m2, double area_m2, double efficiency) {
  if (!(irradiance_w_m2 >= 0.0) || !std::isfinite(irradiance_w_m2)) {
    throw std::invalid_argument("solar_power_w: irradiance must be >= 0 and finite");
  }
  if (!(area_m2 >= 0.0) || !std::isfinite(area_m2)) {
    throw std::invalid_argument("solar_power_w: area must be >= 0 and finite");
  }
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("solar_power_w: efficiency must be within [0, 1]");
  }
  return irradiance_w_m2 * area_m2 * efficiency;
}

double datacenter_power_w(const std::vector<double>& node_powers_w, double pue) {
  if (!(pue >= 1.0) || !std::isfinite(pue)) {
    throw std::invalid_argument("datacenter_power_w: pue must be >= 1");
  }
  double total = 0.0;
  for (double node : node_powers_w) {
    if (!(node >= 0.0) || !std::isfinite(node)) {
      throw std::invalid_argument("datacenter_power_w: node powers must be >= 0 and finite");
    }
    total += node;
  }
  return -(total * pue);
}

SolarActor::SolarActor(std::string name, TimeSeries irradiance, double area_m2,
                       double efficiency)
    : name_(std::move(name)), trace_(std::move(irradiance)), area_m2_(area_m2),
      efficiency_(efficiency) {
  // Validate the static inputs once up front (with a legal irradiance).
  solar_power_w(0.0, area_m2_, efficiency_);
}

PowerW SolarActor::power_at(std::int64_t unix_seconds) {
  return PowerW(solar_power_w(trace_.at(unix_seconds), area_m2_, efficiency_));
}

DatacenterActor::DatacenterActor(std::string name, std::vector<double> node_powers_w,
                                 double pue)
    : name_(std::move(name)), node_powers_w_(std::move(node_powers_w)), pue_(pue) {
  datacenter_power_w(node_powers_w_, pue_);
}

PowerW DatacenterActor::power_at(std::int64_t /*unix_seconds*/) {
  return PowerW(datacenter_power_w(node_powers_w_, pue_));
}

ConstantActor::ConstantActor(std::string name, double power_w)
    : name_(std::move(name)), power_w_(detail::require_finite(power_w, "ConstantActor")) {}

PowerW ConstantActor::power_at(std::int64_t /*unix_seconds*/) { return PowerW(power_w_); }

}  // namespace gridstor
