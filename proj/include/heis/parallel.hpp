// Trial-level parallel loops. Every kernel writes trial i's result into
// slot i, and all reductions run afterwards in index order, so the worker
// count never changes a reported bit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <utility>

#ifdef HEIS_HAVE_OPENMP
#include <omp.h>
#endif

namespace heis {

enum class Exec {
  serial,  // reference loop
  openmp,
};

inline int max_threads() {
#ifdef HEIS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef HEIS_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Calls fn(i) for i in [begin, end). Exceptions thrown by fn are rethrown
/// on the calling thread (the one from the smallest trial index wins).
template <class Fn>
void for_each_trial(std::size_t begin, std::size_t end, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = end;
  const auto b = static_cast<std::int64_t>(begin);
  const auto e = static_cast<std::int64_t>(end);
#ifdef HEIS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::int64_t i = b; i < e; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef HEIS_HAVE_OPENMP
#pragma omp critical(heis_trial_error)
#endif
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

template <class Fn>
void for_each_trial(std::size_t n, Exec exec, Fn&& fn) {
  for_each_trial(0, n, exec, std::forward<Fn>(fn));
}

}  // namespace heis
