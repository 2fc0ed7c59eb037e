#include "kernels_common.hpp"

namespace gridstor::kernels {

const Impl& scalar_impl() {
  static const Impl impl{
      "scalar",         &ocv_batch_scalar, &advance_charge_scalar,
      &string_sums_scalar, &sum_scalar,     &minmax_scalar,
  };
  return impl;
}

}  // namespace gridstor::kernels
