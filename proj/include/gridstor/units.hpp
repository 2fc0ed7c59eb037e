#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Strong scalar types for the quantities that cross module boundaries.
// Canonical units: watts, watt-hours, seconds. Sign convention throughout:
// positive power/energy charges storage, negative discharges it.

namespace gridstor {

constexpr double kSecondsPerHour = 3600.0;

namespace detail {

inline double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": value must be finite, got " +
                                std::to_string(v));
  }
  return v;
}

}  // namespace detail

struct PowerW {
  double value = 0.0;
  PowerW() = default;
  explicit PowerW(double watts) : value(detail::require_finite(watts, "PowerW")) {}
};

struct EnergyWh {
  double value = 0.0;
  EnergyWh() = default;
  explicit EnergyWh(double watt_hours)
      : value(detail::require_finite(watt_hours, "EnergyWh")) {}
};

struct CurrentA {
  double value = 0.0;
  CurrentA() = default;
  explicit CurrentA(double amperes) : value(detail::require_finite(amperes, "CurrentA")) {}
};

// A step duration. Strictly positive: a zero-length step has no meaning for
// any of the models, and negative time never does.
struct DurationS {
  double value;
  explicit DurationS(double seconds) : value(detail::require_finite(seconds, "DurationS")) {
    if (value <= 0.0) {
      throw std::invalid_argument("DurationS: must be > 0, got " + std::to_string(seconds));
    }
  }
};

// State of charge as a fraction. Construction enforces [0, 1]; clamped() is
// for sanitizing floating-point dust from otherwise-bounded computations.
struct Soc {
  double value = 0.0;
  Soc() = default;
  explicit Soc(double fraction) : value(detail::require_finite(fraction, "Soc")) {
    if (value < 0.0 || value > 1.0) {
      throw std::invalid_argument("Soc: must be within [0, 1], got " +
                                  std::to_string(fraction));
    }
  }
  static Soc clamped(double fraction) {
    detail::require_finite(fraction, "Soc");
    if (fraction < 0.0) fraction = 0.0;
    if (fraction > 1.0) fraction = 1.0;
    return Soc(fraction);
  }
};

inline double hours_of(DurationS d) { return d.value / kSecondsPerHour; }

// Energy moved by holding power p for duration d.
inline EnergyWh energy_of(PowerW p, DurationS d) {
  return EnergyWh(p.value * d.value / kSecondsPerHour);
}

}  // namespace gridstor
