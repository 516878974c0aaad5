#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#if defined(DIRLAB_HAVE_OPENMP)
#include <omp.h>
#endif

namespace dirlab {

/// Execution policy for the data-parallel kernels. `serial` is the
/// reference path; `openmp` must produce bit-identical results.
enum class ExecPolicy { serial, openmp };

ExecPolicy default_policy();
void set_default_policy(ExecPolicy policy);

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so the result does not depend on the schedule.
template <class Body>
void parallel_for(std::size_t n, Body&& body, ExecPolicy policy = default_policy()) {
#if defined(DIRLAB_HAVE_OPENMP)
  if (policy == ExecPolicy::openmp && n > 1 && !omp_in_parallel()) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// Scoped override of the default policy.
class PolicyGuard {
 public:
  explicit PolicyGuard(ExecPolicy policy) : saved_(default_policy()) { set_default_policy(policy); }
  ~PolicyGuard() { set_default_policy(saved_); }
  PolicyGuard(const PolicyGuard&) = delete;
  PolicyGuard& operator=(const PolicyGuard&) = delete;

 private:
  ExecPolicy saved_;
};

}  // namespace dirlab
