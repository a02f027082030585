#pragma once

#include <cstdint>
#include <vector>

#include "finfield/field.hpp"
#include "finfield/markov.hpp"
#include "finfield/onepoint.hpp"
#include "finfield/potential.hpp"

namespace finfield {

struct IsingModel {
  Potential potential;
  NeighborhoodSystem adjacency;
};

// Nearest-neighbor Ising grid on binary sites named "r<i>c<j>" (row-major).
// States map to spins via 0 -> -1, 1 -> +1; pair terms are -beta * s * s' on
// grid edges and singletons are -h * s. Identically zero terms are omitted.
IsingModel ising_potential(std::size_t rows, std::size_t cols, double beta, double h);

inline int spin_of(int state) { return state == 0 ? -1 : 1; }

// Product field from per-site marginals (each must sum to one within 1e-6).
RandomField product_field(const ConfigSpace& space, const std::vector<std::vector<double>>& marginals);

// Strictly positive field with entries drawn from a seeded stream; identical
// seeds give identical fields on every platform.
RandomField random_positive_field(const ConfigSpace& space, std::uint64_t seed);

// Weakly positive field: a random field zeroed on every configuration with no
// component equal to theta, then renormalized.
RandomField vacuum_field(const ConfigSpace& space, std::uint64_t seed,
                         const std::vector<int>& theta);

// Multiplies one entry q_site^z(state) by `factor` and renormalizes that
// table, which breaks the pair consistency identity for generic systems.
// factor must be positive and different from one.
OnePointSystem perturb_system(const OnePointSystem& q, std::size_t site, std::uint64_t z,
                              double factor, int state = 0);

// Sparse random potential: singleton, pair and (on three or more sites)
// triple terms included with fixed seeded coin flips, entries uniform in
// (-1, 1).
Potential random_potential(const ConfigSpace& space, std::uint64_t seed);

struct SampleResult {
  std::vector<double> joint;                   // visit frequencies over the full space
  std::vector<std::vector<double>> marginals;  // per-site frequencies
  std::uint64_t sweeps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;
  const char* rng = "";
};

// Single-site heat-bath chain: raster scans drawing each site from its
// one-point conditional under the current complement. Starts from all zeros;
// records one sample per sweep after burn-in. Needs a strictly positive
// system (callers are responsible for consistency; an inconsistent system
// samples from no well-defined joint).
SampleResult gibbs_sample(const OnePointSystem& q, std::uint64_t sweeps, std::uint64_t burn_in,
                          std::uint64_t seed);

}  // namespace finfield
