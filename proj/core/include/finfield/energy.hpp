#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "finfield/field.hpp"
#include "finfield/onepoint.hpp"

namespace finfield {

// Family {Delta_t^z(x, u)} of single-site transition energies. The full
// (x, u) matrix is stored despite its cocycle redundancy so that consistency
// violations stay observable; diagonal entries must be exactly zero.
class TransitionEnergyField {
 public:
  // deltas[t] is indexed [(z * c + x) * c + u].
  TransitionEnergyField(ConfigSpace space, std::vector<std::vector<double>> deltas);

  const ConfigSpace& space() const { return space_; }
  std::uint64_t boundary_count(std::size_t t) const {
    return space_.total_configs() / static_cast<std::uint64_t>(space_.cardinality(t));
  }
  double delta(std::size_t t, std::uint64_t z, int x, int u) const {
    const auto c = static_cast<std::uint64_t>(space_.cardinality(t));
    return deltas_[t][(z * c + static_cast<std::uint64_t>(x)) * c + static_cast<std::uint64_t>(u)];
  }
  const std::vector<std::vector<double>>& tables() const { return deltas_; }

 private:
  ConfigSpace space_;
  std::vector<std::vector<double>> deltas_;
};

// Family {H_t^z(x)} subject to the four-term pair consistency condition.
// Determined by a consistent system only up to an additive function of the
// boundary condition (the gauge freedom).
class OnePointHamiltonian {
 public:
  // values[t] is indexed [z * c + x].
  OnePointHamiltonian(ConfigSpace space, std::vector<std::vector<double>> values);

  const ConfigSpace& space() const { return space_; }
  std::uint64_t boundary_count(std::size_t t) const {
    return space_.total_configs() / static_cast<std::uint64_t>(space_.cardinality(t));
  }
  double value(std::size_t t, std::uint64_t z, int x) const {
    return values_[t][z * static_cast<std::uint64_t>(space_.cardinality(t)) +
                      static_cast<std::uint64_t>(x)];
  }
  const std::vector<std::vector<double>>& tables() const { return values_; }

 private:
  ConfigSpace space_;
  std::vector<std::vector<double>> values_;
};

// Which exponent pairs a Hamiltonian with conditional probabilities. The
// library convention is q ∝ exp(-H); Hamiltonians built as log-probability
// ratios of a field pair with exp(+H) instead, and callers say so explicitly.
enum class GibbsSign { exp_minus_h, exp_plus_h };

struct EnergyWitness {
  enum class Identity { diagonal, cocycle, commutation, hamiltonian_pair };
  Identity identity = Identity::cocycle;
  std::size_t t = 0, s = 0;
  // For diagonal/cocycle, z indexes the complement of {t}; for the pair
  // identities it indexes the complement of {t, s}.
  std::uint64_t z = 0;
  int x = -1, u = -1, y = -1, v = -1, alpha = -1;
};

struct EnergyReport {
  bool consistent = true;
  double max_violation = 0.0;
  double tol = 0.0;
  std::optional<EnergyWitness> witness;
};

// Delta_t^z(x, u) = ln q_t^z(x) - ln q_t^z(u). Needs a strictly positive
// system; the result of a consistent input satisfies both condition sets.
TransitionEnergyField delta_from_system(const OnePointSystem& q);

// Gibbs form q_t^z(x) ∝ exp(Delta_t^z(x, u)), independent of the reference u;
// that independence is asserted to 1e-12 across every u. verify runs the full
// defect scan first and throws ConsistencyError with a witness on failure.
OnePointSystem system_from_delta(const TransitionEnergyField& d, bool verify = true,
                                 double tol = 1e-9);

// ln(P(xz) / P(uz)) for a positive field; equals the system route exactly up
// to rounding.
TransitionEnergyField delta_from_field(const RandomField& p);

// H_t^z(x) = ln(P(xz) / P(theta_t z)). This is the log-ratio construction, so
// it pairs with GibbsSign::exp_plus_h and satisfies
// delta_from_hamiltonian(H) = -delta_from_field(P).
OnePointHamiltonian hamiltonian_from_field(const RandomField& p, const std::vector<int>& theta);

// Delta_t^z(x, u) = H_t^z(u) - H_t^z(x).
TransitionEnergyField delta_from_hamiltonian(const OnePointHamiltonian& h, bool verify = true,
                                             double tol = 1e-9);

// Gauge-fixed inverse: H_t^z(x) = Delta_t^z(r, x) with reference state r per
// (t, z), so H_t^z(r) = 0 and delta_from_hamiltonian returns d again.
OnePointHamiltonian hamiltonian_from_delta(const TransitionEnergyField& d, bool verify = true,
                                           double tol = 1e-9);
OnePointHamiltonian hamiltonian_from_delta(const TransitionEnergyField& d,
                                           const std::vector<std::vector<int>>& gauge,
                                           bool verify = true, double tol = 1e-9);

// q_t^z(x) ∝ exp(∓H_t^z(x)); invariant under gauge shifts by construction.
OnePointSystem system_from_hamiltonian(const OnePointHamiltonian& h,
                                       GibbsSign sign = GibbsSign::exp_minus_h,
                                       bool verify = true, double tol = 1e-9);

// Exhaustive defect scans reporting the single worst witness.
EnergyReport check_delta(const TransitionEnergyField& d, double tol = 1e-9);
EnergyReport check_hamiltonian(const OnePointHamiltonian& h, double tol = 1e-9);

}  // namespace finfield
