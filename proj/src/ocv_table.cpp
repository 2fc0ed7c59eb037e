#include "gridstor/ocv_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gridstor/units.hpp"
#include "kernels/kernels_common.hpp"

namespace gridstor {

namespace {

// Frozen default curve (version nmc21700-5ah-v1). Keep byte-identical to
// data/ocv_nmc21700_5ah_v1.csv; a test enforces the match.
constexpr double kDefaultSoc[] = {0.00, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30,
                                  0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65,
                                  0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00};
constexpr double kDefaultOcv[] = {3.0000, 3.3732, 3.5158, 3.5972, 3.6620, 3.7147,
                                  3.7598, 3.7969, 3.8308, 3.8563, 3.8781, 3.8963,
                                  3.9158, 3.9319, 3.9498, 3.9797, 4.0070, 4.0422,
                                  4.0808, 4.1232, 4.1800};
constexpr std::size_t kDefaultKnots = sizeof(kDefaultSoc) / sizeof(kDefaultSoc[0]);

}  // namespace

OcvTable::OcvTable(std::vector<double> soc_knots, std::vector<double> ocv_knots)
    : soc_(std::move(soc_knots)), ocv_(std::move(ocv_knots)) {
  if (soc_.size() != ocv_.size()) {
    throw std::invalid_argument("OcvTable: soc and ocv knot counts differ");
  }
  if (soc_.size() < 2) {
    throw std::invalid_argument("OcvTable: need at least 2 knots");
  }
  for (std::size_t i = 0; i < soc_.size(); ++i) {
    detail::require_finite(soc_[i], "OcvTable.soc");
    detail::require_finite(ocv_[i], "OcvTable.ocv");
    if (ocv_[i] <= 0.0) throw std::invalid_argument("OcvTable: ocv knots must be > 0");
    if (i > 0 && soc_[i] <= soc_[i - 1]) {
      throw std::invalid_argument("OcvTable: soc knots must strictly increase");
    }
    if (i > 0 && ocv_[i] <= ocv_[i - 1]) {
      throw std::invalid_argument("OcvTable: ocv knots must strictly increase");
    }
  }
  if (soc_.front() != 0.0 || soc_.back() != 1.0) {
    throw std::invalid_argument("OcvTable: soc knots must span exactly [0, 1]");
  }

  const std::size_t k = soc_.size();
  const double dx = (soc_.back() - soc_.front()) / static_cast<double>(k - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < k; ++i) {
    if (std::abs((soc_[i] - soc_[i - 1]) - dx) > 1e-12) {
      uniform_ = false;
      break;
    }
  }
  uniform_scale_ = static_cast<double>(k - 1) / (soc_.back() - soc_.front());
}

kernels::OcvTableView OcvTable::view() const {
  kernels::OcvTableView v;
  v.soc = soc_.data();
  v.ocv = ocv_.data();
  v.knots = soc_.size();
  v.uniform = uniform_;
  v.uniform_scale = uniform_scale_;
  return v;
}

double OcvTable::ocv_at(double soc) const {
  return kernels::ocv_interp_one(soc, view());
}

double OcvTable::soc_at(double ocv_v) const {
  detail::require_finite(ocv_v, "OcvTable::soc_at");
  const std::size_t k = ocv_.size();
  double v = ocv_v;
  if (v < ocv_.front()) v = ocv_.front();
  if (v > ocv_.back()) v = ocv_.back();
  const auto pos = std::upper_bound(ocv_.begin(), ocv_.end(), v);
  std::size_t i = static_cast<std::size_t>(pos - ocv_.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i > k - 2) i = k - 2;
  const double v0 = ocv_[i];
  const double v1 = ocv_[i + 1];
  const double s0 = soc_[i];
  const double s1 = soc_[i + 1];
  return s0 + (v - v0) * (s1 - s0) / (v1 - v0);
}

double OcvTable::mean_ocv_v() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < soc_.size(); ++i) {
    acc += 0.5 * (ocv_[i] + ocv_[i + 1]) * (soc_[i + 1] - soc_[i]);
  }
  return acc / (soc_.back() - soc_.front());
}

OcvTable OcvTable::default_nmc_21700() {
  return OcvTable(std::vector<double>(kDefaultSoc, kDefaultSoc + kDefaultKnots),
                  std::vector<double>(kDefaultOcv, kDefaultOcv + kDefaultKnots));
}

OcvTable OcvTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("OcvTable: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("OcvTable: empty file " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "soc,ocv") {
    throw std::runtime_error("OcvTable: expected header 'soc,ocv' in " + path);
  }
  std::vector<double> soc;
  std::vector<double> ocv;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("OcvTable: missing comma at " + path + ":" +
                               std::to_string(lineno));
    }
    try {
      soc.push_back(std::stod(line.substr(0, comma)));
      ocv.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("OcvTable: bad number at " + path + ":" +
                               std::to_string(lineno));
    }
  }
  return OcvTable(std::move(soc), std::move(ocv));
}

}  // namespace gridstor
