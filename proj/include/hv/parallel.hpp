#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hv {

/// How independent task sweeps (replica batches, boundary profiles, N sweeps)
/// are executed. Results must be written to per-index slots, so both policies
/// produce identical output; the serial path is the reference the tests
/// compare against.
enum class Exec { serial, openmp };

struct ExecConfig {
    Exec policy = Exec::openmp;
    int threads = 0;  // 0: OpenMP default
};

template <typename Fn>
void parallel_for(std::int64_t count, const ExecConfig& exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec.policy == Exec::openmp) {
        // exceptions must not unwind out of the parallel region: keep the
        // first one and rethrow afterwards
        std::exception_ptr error;
        auto guarded = [&](std::int64_t i) {
            try {
                fn(i);
            } catch (...) {
#pragma omp critical(hv_parallel_for_error)
                if (!error) error = std::current_exception();
            }
        };
        if (exec.threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(exec.threads)
            for (std::int64_t i = 0; i < count; ++i) guarded(i);
        } else {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t i = 0; i < count; ++i) guarded(i);
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for (std::int64_t i = 0; i < count; ++i) fn(i);
}

}  // namespace hv
