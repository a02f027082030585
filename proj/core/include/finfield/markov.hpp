#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "finfield/energy.hpp"
#include "finfield/field.hpp"
#include "finfield/potential.hpp"

namespace finfield {

// Symmetric, irreflexive neighborhoods, one mask per site.
class NeighborhoodSystem {
 public:
  NeighborhoodSystem(const ConfigSpace& space, std::vector<SiteMask> neighbors);

  std::size_t site_count() const { return neighbors_.size(); }
  SiteMask neighbors(std::size_t t) const { return neighbors_[t]; }
  const std::vector<SiteMask>& masks() const { return neighbors_; }

  // Pointwise containment.
  bool subset_of(const NeighborhoodSystem& other) const;

  friend bool operator==(const NeighborhoodSystem&, const NeighborhoodSystem&) = default;

 private:
  std::vector<SiteMask> neighbors_;
};

struct MarkovWitness {
  std::size_t t = 0;
  // Boundary indices over the complement of t: the conditional under
  // `boundary` differs from the one under `reference`, which agrees with it
  // on the neighborhood of t.
  std::uint64_t boundary = 0, reference = 0;
  int x = 0, u = -1;
};

struct MarkovReport {
  bool markov = true;
  double max_violation = 0.0;
  double tol = 0.0;
  std::optional<MarkovWitness> witness;
};

// Does every one-point conditional of p depend on its neighborhood only?
// Each conditional is compared in log space against the one whose exterior is
// pinned to all zeros; by transitivity that decides the full quantified
// definition at the same tolerance. Needs a positive field.
MarkovReport is_markov(const RandomField& p, const NeighborhoodSystem& nbhd, double tol = 1e-9);

// The same locality property read off the transition energies.
MarkovReport is_delta_markov(const TransitionEnergyField& d, const NeighborhoodSystem& nbhd,
                             double tol = 1e-9);

// Smallest symmetric neighborhood system that p is Markov for at `tol`:
// per-site dependence scan, then symmetrization by union.
NeighborhoodSystem minimal_neighborhoods(const RandomField& p, double tol = 1e-9);

// Field of a potential supported on singletons and neighborhood cliques,
// built through its transition energies. Rejects terms reaching outside the
// neighborhoods; the result is Markov for nbhd.
RandomField hc_field_from_pair_potential(const Potential& phi, const NeighborhoodSystem& nbhd);

}  // namespace finfield
