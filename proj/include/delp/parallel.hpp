#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <vector>

namespace delp {

enum class Backend { serial, openmp };

Backend parse_backend(const std::string& name);  // "serial" | "openmp"
const char* backend_name(Backend b);

/// Number of OpenMP threads to use; 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

/// Runs f(0..n-1). With the OpenMP backend iterations run concurrently; f
/// must only write to per-index slots. If any call throws, the exception of
/// the lowest index is rethrown after the loop, so both backends fail the
/// same way.
template <class F>
void parallel_for_indexed(std::size_t n, Backend backend, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  if (backend == Backend::openmp) {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long long k = 0; k < count; ++k) {
      try {
        f(static_cast<std::size_t>(k));
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      try {
        f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace delp
