#pragma once
/// Deterministic fork-join parallelism.
///
/// Work is split into a fixed number of chunks that does NOT depend on the
/// thread count; workers pull chunk indices atomically and write results into
/// per-chunk slots, and callers combine the slots in chunk order. Repeated runs
/// therefore produce bit-identical results for any FRACSHAPE_THREADS value,
/// which the determinism contract requires.

#include <functional>

namespace fracshape {

/// Maximum worker threads. Resolution order: value set by set_thread_cap(),
/// else the FRACSHAPE_THREADS environment variable, else (or when 0 = auto)
/// the hardware concurrency.
int thread_cap();

/// Override the cap at runtime (0 restores auto). Used by the determinism
/// self-check to compare thread counts within one process.
void set_thread_cap(int cap);

/// Run fn(chunk) for chunk = 0..n_chunks-1 on up to thread_cap() threads.
/// fn must only write to state owned by its chunk.
void parallel_chunks(int n_chunks, const std::function<void(int)>& fn);

}  // namespace fracshape
