#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finfield/field.hpp"
#include "finfield/onepoint.hpp"

namespace finfield {

// Unnormalized log weight of the telescoping product that defines the
// reconstruction: boundary conditions take x at sites already visited in
// `order` and `base` at the sites still ahead. Exposed because the proof's
// adjacent-transposition argument is a tested invariant of this quantity.
double log_weight(const OnePointSystem& q, std::span<const std::size_t> order,
                  std::span<const int> base, std::span<const int> x);

// Builds the unique compatible field of a consistent, strictly positive
// system. `order` defaults to the site order, `base` to the all-zeros
// configuration; by the uniqueness theorem neither choice matters, which
// verify_invariance exercises. With verify=false an inconsistent system still
// yields a normalized table, but an enumeration-dependent one.
RandomField reconstruct_positive(const OnePointSystem& q,
                                 const std::vector<std::size_t>& order = {},
                                 const std::vector<int>& base = {}, bool verify = true,
                                 double tol = 1e-9);

// Base-configuration-free form: P(x) is the reciprocal of a sum over the full
// configuration space. Quadratic in the table size; used as a cross-check.
RandomField reconstruct_alternate(const OnePointSystem& q,
                                  const std::vector<std::size_t>& order = {}, bool verify = true,
                                  double tol = 1e-9);

// Weak-positivity variant anchored at positivity points theta; zeros in the
// numerator factors produce exact zeros in the result.
RandomField reconstruct_weak(const OnePointSystem& q, const std::vector<int>& theta,
                             const std::vector<std::size_t>& order = {}, bool verify = true,
                             double tol = 1e-9);

struct InvarianceReport {
  double max_deviation = 0.0;
  std::size_t reconstructions = 0;
};

// Reconstructs under every site enumeration (all of them when the site count
// is at most four, otherwise `trials` random ones) crossed with the all-zeros
// base and `trials` random bases, and requires pairwise agreement within
// 1e-10. Throws InvarianceError carrying the deviation when they disagree,
// which is the designed failure mode for inconsistent inputs.
InvarianceReport verify_invariance(const OnePointSystem& q, std::size_t trials,
                                   std::uint64_t seed);

}  // namespace finfield
