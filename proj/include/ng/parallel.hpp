#pragma once

#include "ng/common.hpp"

#include <exception>
#include <mutex>

namespace ng {

// Runs body(i) for i in [0, count); the first exception thrown by any iteration is rethrown.
template <class Body>
void for_each_index(long count, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ng
