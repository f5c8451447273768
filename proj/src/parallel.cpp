#include "delp/parallel.hpp"

#include <omp.h>

#include <stdexcept>

namespace delp {

namespace {
int g_threads = 0;
}

Backend parse_backend(const std::string& name) {
  if (name == "serial") return Backend::serial;
  if (name == "openmp") return Backend::openmp;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

const char* backend_name(Backend b) { return b == Backend::openmp ? "openmp" : "serial"; }

void set_thread_count(int n) { g_threads = n < 0 ? 0 : n; }

int thread_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

}  // namespace delp
