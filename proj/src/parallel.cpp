#include "dirlab/parallel.hpp"

#include <atomic>

namespace dirlab {
namespace {
std::atomic<ExecPolicy> g_policy{ExecPolicy::openmp};
}

ExecPolicy default_policy() { return g_policy.load(std::memory_order_relaxed); }
void set_default_policy(ExecPolicy policy) { g_policy.store(policy, std::memory_order_relaxed); }

}  // namespace dirlab
