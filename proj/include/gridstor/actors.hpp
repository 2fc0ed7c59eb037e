#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridstor/trace.hpp"
#include "gridstor/units.hpp"

namespace gridstor {

// A power participant evaluated at each step's start time. Producers return
// positive power, consumers negative.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual PowerW power_at(std::int64_t unix_seconds) = 0;
  virtual const std::string& name() const = 0;
  // Time range this actor can serve, if it is backed by finite data.
  virtual std::optional<std::pair<std::int64_t, std::int64_t>> coverage() const {
    return std::nullopt;
  }
};

// PV output from irradiance: irradiance * area * efficiency.
double solar_power_w(double irradiance_w_m2, double area_m2, double efficiency);

// IT load lifted to facility draw by the power-usage-effectiveness factor.
// Returned as consumption, i.e. <= 0.
double datacenter_power_w(const std::vector<double>& node_powers_w, double pue);

class SolarActor final : public Actor {
 public:
  SolarActor(std::string name, TimeSeries irradiance, double area_m2, double efficiency);
  PowerW power_at(std::int64_t unix_seconds) override;
  const std::string& name() const override { return name_; }
  std::optional<std::pair<std::int64_t, std::int64_t>> coverage() const override {
    return std::make_pair(trace_.first_time(), trace_.last_time());
  }

 private:
  std::string name_;
  TimeSeries trace_;
  double area_m2_;
  double efficiency_;
};

class DatacenterActor final : public Actor {
 public:
  DatacenterActor(std::string name, std::vector<double> node_powers_w, double pue);
  PowerW power_at(std::int64_t unix_seconds) override;
  const std::string& name() const override { return name_; }

 private:
  std::string name_;
  std::vector<double> node_powers_w_;
  double pue_;
};

// Fixed power at all times; sign chosen by the caller.
class ConstantActor final : public Actor {
 public:
  ConstantActor(std::string name, double power_w);
  PowerW power_at(std::int64_t unix_seconds) override;
  const std::string& name() const override { return name_; }

 private:
  std::string name_;
  double power_w_;
};

}  // namespace gridstor
