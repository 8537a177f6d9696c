#include "fracshape/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fracshape {

namespace {

std::atomic<int> g_thread_cap_override{-1};  // -1 = not set

int env_thread_cap() {
  const char* env = std::getenv("FRACSHAPE_THREADS");
  if (env == nullptr) return 0;
  const long v = std::strtol(env, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 0;
}

}  // namespace

int thread_cap() {
  const int override_cap = g_thread_cap_override.load();
  int cap = override_cap >= 0 ? override_cap : env_thread_cap();
  if (cap == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    cap = hw > 0 ? static_cast<int>(hw) : 1;
  }
  return cap < 1 ? 1 : cap;
}

void set_thread_cap(int cap) { g_thread_cap_override.store(cap < 0 ? -1 : cap); }

void parallel_chunks(int n_chunks, const std::function<void(int)>& fn) {
  if (n_chunks <= 0) return;
  const int workers = std::min(thread_cap(), n_chunks);
  if (workers <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> has_error{false};
  auto worker = [&]() {
    while (true) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks || has_error.load()) break;
      try {
        fn(c);
      } catch (...) {
        if (!has_error.exchange(true)) first_error = std::current_exception();
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (has_error.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace fracshape
