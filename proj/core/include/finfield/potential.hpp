#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "finfield/energy.hpp"
#include "finfield/field.hpp"

namespace finfield {

// Interaction potential: a sparse family of tables Phi_V on X^V keyed by
// nonempty site subsets; absent subsets mean an identically zero term. Tables
// follow the canonical enumeration of their subset.
class Potential {
 public:
  explicit Potential(ConfigSpace space) : space_(std::move(space)) {}

  const ConfigSpace& space() const { return space_; }
  const std::map<SiteMask, std::vector<double>>& terms() const { return terms_; }

  // Replaces the term on v. v must be a nonempty subset of the sites and the
  // table must match the enumeration of X^v.
  void set_term(SiteMask v, std::vector<double> table);
  void erase_term(SiteMask v) { terms_.erase(v); }

  double term_value(SiteMask v, std::uint64_t index) const {
    const auto it = terms_.find(v);
    return it == terms_.end() ? 0.0 : it->second[index];
  }

  // A vacuum potential vanishes on every configuration that matches theta
  // somewhere on its subset. The flag is validated against the tables with
  // exact zero comparisons.
  void mark_vacuum(std::vector<int> theta);
  const std::optional<std::vector<int>>& vacuum() const { return vacuum_; }

 private:
  ConfigSpace space_;
  std::map<SiteMask, std::vector<double>> terms_;
  std::optional<std::vector<int>> vacuum_;
};

// H(x) = sum of Phi_V(x_V) over the stored subsets.
double hamiltonian_global(const Potential& phi, std::span<const int> x);
double hamiltonian_global(const Potential& phi, const Configuration& x);

// Energy of the sites in `domain` only: sum of Phi_V over V inside `domain`.
double hamiltonian_partial(const Potential& phi, SiteMask domain, std::span<const int> x);

// One-point Hamiltonian H_t^z(x) = sum over terms containing t, evaluated at
// x concatenated with z. Satisfies H_t^z(x) = H(xz) - H_{without t}(z).
OnePointHamiltonian hamiltonian_onepoint(const Potential& phi);

// Gibbs system of the potential: exp(-H_t^z) normalized per (t, z).
OnePointSystem gibbs_system(const Potential& phi);

// P(x) ∝ exp(-H(x)); strictly positive by construction.
RandomField field_from_global(const Potential& phi);

// Inclusion-exclusion inversion of -ln P against the reference configuration
// theta. The result is a vacuum potential with exact zeros on theta-touching
// entries, reproduces p through field_from_global, and drops terms whose
// largest magnitude falls below 1e-12.
Potential extract_potential_mobius(const RandomField& p, const std::vector<int>& theta);

}  // namespace finfield
