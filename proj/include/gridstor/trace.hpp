#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridstor {

// Time series loaded from a "timestamp,value" CSV (ISO-8601 timestamps,
// strictly increasing). Lookups use zero-order hold: the value at time t is
// the most recent sample at or before t. Reads outside [first, last] throw.
class TimeSeries {
 public:
  TimeSeries(std::vector<std::int64_t> times, std::vector<double> values);

  static TimeSeries load_csv(const std::string& path);

  double at(std::int64_t unix_seconds) const;

  std::int64_t first_time() const { return times_.front(); }
  std::int64_t last_time() const { return times_.back(); }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<std::int64_t> times_;
  std::vector<double> values_;
};

}  // namespace gridstor
