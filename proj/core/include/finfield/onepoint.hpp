#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "finfield/positivity.hpp"
#include "finfield/space.hpp"

namespace finfield {

// Family {q_t^z} of one-point distributions on X^t, one table per site t and
// boundary condition z over the complement of t. Boundary conditions are
// indexed by the canonical enumeration of the complement.
//
// Immutable after construction; all scans are read-only and may run
// concurrently.
class OnePointSystem {
 public:
  // tables[t] is a row-major [z][x] array of size boundary_count(t) * |X^t|.
  // Rows must be distributions; rows whose sum is within 1e-6 of one are
  // renormalized, anything further off is rejected.
  OnePointSystem(ConfigSpace space, std::vector<std::vector<double>> tables);

  const ConfigSpace& space() const { return space_; }
  std::size_t site_count() const { return space_.site_count(); }
  SiteMask boundary_mask(std::size_t t) const { return space_.complement(site_bit(t)); }
  std::uint64_t boundary_count(std::size_t t) const {
    return space_.total_configs() / static_cast<std::uint64_t>(space_.cardinality(t));
  }

  double q(std::size_t t, std::uint64_t z, int x) const {
    return tables_[t][z * static_cast<std::uint64_t>(space_.cardinality(t)) +
                      static_cast<std::uint64_t>(x)];
  }
  std::span<const double> row(std::size_t t, std::uint64_t z) const {
    const auto c = static_cast<std::uint64_t>(space_.cardinality(t));
    return std::span<const double>(tables_[t]).subspan(z * c, c);
  }
  const std::vector<std::vector<double>>& tables() const { return tables_; }

  Positivity positivity() const { return positivity_; }
  const PositivityPointSet& positivity_points() const { return points_; }

 private:
  ConfigSpace space_;
  std::vector<std::vector<double>> tables_;
  Positivity positivity_ = Positivity::neither;
  PositivityPointSet points_;
};

// Worst witness of the pair consistency identity, with z indexing the
// canonical enumeration of the complement of {t, s}.
struct ConsistencyWitness {
  std::size_t t = 0, s = 0;
  int x = 0, u = 0, y = 0, v = 0;
  std::uint64_t z = 0;
};

struct ConsistencyReport {
  bool consistent = true;
  double max_violation = 0.0;
  double tol = 0.0;
  std::optional<ConsistencyWitness> witness;
};

// Exhaustive check of the eight-factor pair identity for strictly positive
// systems, evaluated in log space. Throws PositivityError when the system has
// zero entries (use the weak variant instead).
ConsistencyReport check_consistency_positive(const OnePointSystem& q, double tol = 1e-9);

// Weak-positivity variant: the identity is anchored at the positivity points
// theta and compared in linear space, since factors may legitimately vanish.
// theta[t] must be a positivity point of the system at every site.
ConsistencyReport check_consistency_weak(const OnePointSystem& q, const std::vector<int>& theta,
                                         double tol = 1e-9);

// Per-site sets of states that stay positive under every boundary condition.
PositivityPointSet find_positivity_points(const OnePointSystem& q);

// A state shared by every site's positivity point set (smallest index if
// several); requires homogeneous cardinalities.
std::optional<int> vacuum_state(const OnePointSystem& q);

// Smallest positivity point per site; throws PositivityError when some site
// has none.
std::vector<int> default_positivity_points(const OnePointSystem& q);

// The (site, boundary-index, state) coordinates of the eight factors of the
// pair identity at a witness: the four left factors then the four right ones.
struct FactorRef {
  std::size_t site;
  std::uint64_t z;
  int state;
};
std::array<FactorRef, 8> witness_factors(const OnePointSystem& q, const ConsistencyWitness& w);

}  // namespace finfield
