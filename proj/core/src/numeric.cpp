#include "finfield/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace finfield {

namespace {
constexpr std::size_t kBlock = std::size_t{1} << 14;
}

double stable_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void for_each_block(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const unsigned hw = std::thread::hardware_concurrency();
  if (blocks < 4 || hw < 2) {
    for (std::size_t b = 0; b < blocks; ++b)
      fn(b * kBlock, std::min(n, (b + 1) * kBlock));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
      fn(b * kBlock, std::min(n, (b + 1) * kBlock));
  };
  const std::size_t workers = std::min<std::size_t>(hw, blocks);
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t i = 0; i + 1 < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

double deterministic_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= kBlock) return stable_sum(xs);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  for_each_block(n, [&](std::size_t lo, std::size_t hi) {
    partial[lo / kBlock] = stable_sum(xs.subspan(lo, hi - lo));
  });
  return stable_sum(partial);
}

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!(m > -std::numeric_limits<double>::infinity())) return m;
  const std::size_t n = xs.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  for_each_block(n, [&](std::size_t lo, std::size_t hi) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double e = std::exp(xs[i] - m);
      const double t = sum + e;
      comp += (std::abs(sum) >= e) ? (sum - t) + e : (e - t) + sum;
      sum = t;
    }
    partial[lo / kBlock] = sum + comp;
  });
  return m + std::log(stable_sum(partial));
}

}  // namespace finfield
