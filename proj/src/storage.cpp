#include "gridstor/storage.hpp"

namespace gridstor {

ParamResult Storage::set_parameter(const std::string& key, double /*value*/) {
  return ParamResult::failure("unknown parameter: " + key);
}

std::optional<double> Storage::get_parameter(const std::string& /*key*/) const {
  return std::nullopt;
}

}  // namespace gridstor
