#include "boltzscat/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace bz {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads.store(n < 1 ? 1 : n); }
int num_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), nchunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      try {
        body(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(nchunks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f,
                         std::size_t chunk) {
  auto v = deterministic_sum_vec(
      n, 1, [&](std::size_t i, double* acc) { acc[0] += f(i); }, chunk);
  return v[0];
}

std::vector<double> deterministic_sum_vec(std::size_t n, std::size_t width,
                                          const std::function<void(std::size_t, double*)>& add,
                                          std::size_t chunk) {
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks * width, 0.0);
  parallel_for(n, chunk, [&](std::size_t b, std::size_t e) {
    double* acc = partial.data() + (b / chunk) * width;
    for (std::size_t i = b; i < e; ++i) add(i, acc);
  });
  std::vector<double> out(width, 0.0);
  for (std::size_t c = 0; c < nchunks; ++c)
    for (std::size_t k = 0; k < width; ++k) out[k] += partial[c * width + k];
  return out;
}

double deterministic_max(std::size_t n, const std::function<double(std::size_t)>& f,
                         std::size_t chunk) {
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks, -std::numeric_limits<double>::infinity());
  parallel_for(n, chunk, [&](std::size_t b, std::size_t e) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = b; i < e; ++i) m = std::max(m, f(i));
    partial[b / chunk] = m;
  });
  double m = -std::numeric_limits<double>::infinity();
  for (double p : partial) m = std::max(m, p);
  return m;
}

}  // namespace bz
