#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace gm::kernels {
namespace {

const Backend* find_by_name(std::string_view name) {
  if (name == "scalar") return &scalar_backend();
  if (name == "avx2") {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
      return avx2_backend_or_null();
#endif
    return nullptr;
  }
  if (name == "neon") return neon_backend_or_null();
  return nullptr;
}

const Backend* detect() {
  if (const char* env = std::getenv("GM_KERNEL_BACKEND")) {
    if (const Backend* b = find_by_name(env)) return b;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    if (const Backend* b = avx2_backend_or_null()) return b;
  }
#endif
  if (const Backend* b = neon_backend_or_null()) return b;
  return &scalar_backend();
}

std::atomic<const Backend*>& active_slot() {
  static std::atomic<const Backend*> slot{detect()};
  return slot;
}

}  // namespace

const Backend& active_backend() { return *active_slot().load(std::memory_order_relaxed); }

bool select_backend(std::string_view name) {
  if (const Backend* b = find_by_name(name)) {
    active_slot().store(b, std::memory_order_relaxed);
    return true;
  }
  return false;
}

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> out{&scalar_backend()};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    if (const Backend* b = avx2_backend_or_null()) out.push_back(b);
  }
#endif
  if (const Backend* b = neon_backend_or_null()) out.push_back(b);
  return out;
}

}  // namespace gm::kernels
