#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace gm::kernels {

/// Dense arithmetic primitives behind the matrix types and solvers.
///
/// Every entry has a portable scalar reference implementation. On x86-64 an
/// AVX2+FMA variant and on AArch64 a NEON variant are compiled in and selected
/// at runtime. Contract across backends:
///  - element-wise ops (axpy, mix, scale) produce bit-identical results: the
///    scalar reference uses fused multiply-add just like the wide variants;
///  - reductions (dot, sum, l1_norm, l1_diff, sumsq_diff) may reassociate, so
///    cross-backend results agree only to rounding; each backend on its own is
///    deterministic for fixed input;
///  - argmax returns the smallest index attaining the maximum, identically on
///    all backends. Inputs may contain -infinity but not NaN.
struct Backend {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*l1_norm)(const double* x, std::size_t n);
  double (*l1_diff)(const double* a, const double* b, std::size_t n);
  double (*sumsq_diff)(const double* a, const double* b, std::size_t n);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// x[i] *= alpha
  void (*scale)(double* x, double alpha, std::size_t n);
  /// d[i] = d[i] + alpha * (p[i] - d[i]); the Frank-Wolfe segment update
  void (*mix)(double* d, const double* p, double alpha, std::size_t n);

  std::size_t (*argmax)(const double* x, std::size_t n);
};

const Backend& scalar_backend();

/// Backends usable on this machine, scalar first.
std::vector<const Backend*> available_backends();

/// The backend in use; resolved once from the widest supported instruction
/// set, overridable with the GM_KERNEL_BACKEND environment variable.
const Backend& active_backend();

/// Force a backend by name ("scalar", "avx2", "neon"); false if unavailable.
bool select_backend(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active_backend().dot(a, b, n);
}
inline double sum(const double* x, std::size_t n) {
  return active_backend().sum(x, n);
}
inline double l1_norm(const double* x, std::size_t n) {
  return active_backend().l1_norm(x, n);
}
inline double l1_diff(const double* a, const double* b, std::size_t n) {
  return active_backend().l1_diff(a, b, n);
}
inline double sumsq_diff(const double* a, const double* b, std::size_t n) {
  return active_backend().sumsq_diff(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_backend().axpy(alpha, x, y, n);
}
inline void scale(double* x, double alpha, std::size_t n) {
  active_backend().scale(x, alpha, n);
}
inline void mix(double* d, const double* p, double alpha, std::size_t n) {
  active_backend().mix(d, p, alpha, n);
}
inline std::size_t argmax(const double* x, std::size_t n) {
  return active_backend().argmax(x, n);
}

}  // namespace gm::kernels
