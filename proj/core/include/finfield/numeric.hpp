#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace finfield {

// Compensated (Neumaier) summation.
double stable_sum(std::span<const double> xs);

// Sum over a fixed block grid: block partials may be computed concurrently,
// and are combined in block order, so the result is identical for any thread
// count.
double deterministic_sum(std::span<const double> xs);

// log(sum exp(x_i)) with max shift. -inf entries contribute nothing; an
// empty or all -inf input yields -inf.
double log_sum_exp(std::span<const double> xs);

// Runs fn(lo, hi) once per block of a fixed grid covering [0, n). Blocks may
// be dispatched to several threads; callers must write disjoint outputs.
void for_each_block(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace finfield
