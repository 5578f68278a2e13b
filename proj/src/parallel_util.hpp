#pragma once

#include <exception>
#include <vector>

namespace logitmfg::detail {

// Runs fn(i) for i in [0, n) in parallel.  Work items write to disjoint
// storage, so the result is independent of scheduling; exceptions are
// captured per item and the lowest-index one is rethrown.
template <class Fn>
void parallel_over_types(int n, Fn fn) {
  std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace logitmfg::detail
