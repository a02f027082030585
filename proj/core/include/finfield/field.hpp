#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finfield/onepoint.hpp"
#include "finfield/positivity.hpp"
#include "finfield/space.hpp"

namespace finfield {

// Dense joint distribution over the full configuration space. Entries are
// non-negative and sum to one within 1e-12 after construction; inputs whose
// sum is off by more than 1e-6 are rejected as malformed.
//
// Immutable after construction, including the positivity report, so values
// may be shared across threads freely.
class RandomField {
 public:
  RandomField(ConfigSpace space, std::vector<double> probs);

  const ConfigSpace& space() const { return space_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(std::uint64_t index) const { return probs_[index]; }
  double prob(const Configuration& x) const;  // x must cover the full site set

  const PositivityReport& positivity() const { return positivity_; }

 private:
  ConfigSpace space_;
  std::vector<double> probs_;
  PositivityReport positivity_;
};

// Marginal table on X^V in canonical enumeration order. The empty marginal is
// the scalar table {1}.
std::vector<double> marginal(const RandomField& p, SiteMask v);

// Marginal repackaged as a field on the sub-space of V's sites.
RandomField marginal_field(const RandomField& p, SiteMask v);

// Conditional table on X^V given the boundary configuration. Throws
// NullConditionError when the condition has probability zero.
std::vector<double> conditional(const RandomField& p, SiteMask v, const Configuration& given);

// The family of one-point conditional distributions of p. Throws
// UndefinedConditionalError naming (t, z) when a denominator vanishes.
OnePointSystem one_point_system(const RandomField& p);

PositivityReport classify_positivity(const RandomField& p);

double max_abs_difference(const RandomField& a, const RandomField& b);
bool field_equal(const RandomField& a, const RandomField& b, double tol);

}  // namespace finfield
