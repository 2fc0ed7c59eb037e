#include <atomic>

#include "gridstor/kernels.hpp"

namespace gridstor::kernels {

#if defined(GRIDSTOR_HAVE_AVX2)
const Impl& avx2_impl();  // defined in kernels_avx2.cpp

namespace {
bool avx2_usable() { return __builtin_cpu_supports("avx2"); }
}  // namespace
#endif

namespace {

const Impl* best_available() {
#if defined(GRIDSTOR_HAVE_AVX2)
  if (avx2_usable()) return &avx2_impl();
#endif
  return &scalar_impl();
}

std::atomic<const Impl*>& active_slot() {
  static std::atomic<const Impl*> slot{best_available()};
  return slot;
}

}  // namespace

const Impl& active() { return *active_slot().load(std::memory_order_relaxed); }

const Impl* find(const std::string& name) {
  if (name == "scalar") return &scalar_impl();
  if (name == "auto") return best_available();
#if defined(GRIDSTOR_HAVE_AVX2)
  if (name == "avx2" && avx2_usable()) return &avx2_impl();
#endif
  return nullptr;
}

bool select(const std::string& name) {
  const Impl* impl = find(name);
  if (impl == nullptr) return false;
  active_slot().store(impl, std::memory_order_relaxed);
  return true;
}

std::vector<std::string> available() {
  std::vector<std::string> names{"scalar"};
#if defined(GRIDSTOR_HAVE_AVX2)
  if (avx2_usable()) names.emplace_back("avx2");
#endif
  return names;
}

}  // namespace gridstor::kernels
