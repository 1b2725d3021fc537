#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bz {

// Worker count used by every parallel sweep. 0 or negative resets to 1.
void set_num_threads(int n);
int num_threads();

// Calls body(begin, end) on consecutive chunks of [0, n). Chunk boundaries
// depend only on n and chunk, never on the worker count, so any per-chunk
// result is reproducible.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

// Sum of f(i) over [0, n): per-chunk partials are added left to right, then
// combined in chunk order. Bit-identical for every worker count.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f,
                         std::size_t chunk = 4096);

// Same, for a fixed-length vector of partial sums.
std::vector<double> deterministic_sum_vec(std::size_t n, std::size_t width,
                                          const std::function<void(std::size_t, double*)>& add,
                                          std::size_t chunk = 4096);

// Max of f(i); max is order independent but chunking is kept for symmetry.
double deterministic_max(std::size_t n, const std::function<double(std::size_t)>& f,
                         std::size_t chunk = 4096);

}  // namespace bz
