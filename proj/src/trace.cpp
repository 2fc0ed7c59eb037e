#include "gridstor/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gridstor/timeparse.hpp"

namespace gridstor {

TimeSeries::TimeSeries(std::vector<std::int64_t> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size()) {
    throw std::invalid_argument("TimeSeries: need equal, non-zero sample counts");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("TimeSeries: sample " + std::to_string(i) +
                                  " is not finite");
    }
    if (i > 0 && times_[i] <= times_[i - 1]) {
      throw std::invalid_argument("TimeSeries: timestamps must strictly increase (sample " +
                                  std::to_string(i) + ")");
    }
  }
}

TimeSeries TimeSeries::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("TimeSeries: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("TimeSeries: empty file " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,value") {
    throw std::runtime_error("TimeSeries: expected header 'timestamp,value' in " + path);
  }
  std::vector<std::int64_t> times;
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("TimeSeries: missing comma at " + path + ":" +
                               std::to_string(lineno));
    }
    try {
      times.push_back(parse_iso8601_utc(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error("TimeSeries: " + path + ":" + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  try {
    return TimeSeries(std::move(times), std::move(values));
  } catch (const std::exception& e) {
    throw std::runtime_error("TimeSeries: " + path + ": " + e.what());
  }
}

double TimeSeries::at(std::int64_t unix_seconds) const {
  if (unix_seconds < times_.front() || unix_seconds > times_.back()) {
    throw std::out_of_range("TimeSeries: time " + format_iso8601_utc(unix_seconds) +
                            " outside trace coverage [" +
                            format_iso8601_utc(times_.front()) + ", " +
                            format_iso8601_utc(times_.back()) + "]");
  }
  // Most recent sample at or before the query (zero-order hold).
  const auto pos = std::upper_bound(times_.begin(), times_.end(), unix_seconds);
  const std::size_t idx = static_cast<std::size_t>(pos - times_.begin()) - 1;
  return values_[idx];
}

}  // namespace gridstor
