#include "finfield/markov.hpp"

#include <cmath>

#include "finfield/reconstruct.hpp"

namespace finfield {

NeighborhoodSystem::NeighborhoodSystem(const ConfigSpace& space, std::vector<SiteMask> neighbors)
    : neighbors_(std::move(neighbors)) {
  const std::size_t n = space.site_count();
  if (neighbors_.size() != n) throw DomainError("one neighbor set per site is required");
  for (std::size_t t = 0; t < n; ++t) {
    space.require_subset(neighbors_[t]);
    if (mask_contains(neighbors_[t], t))
      throw DomainError("a site cannot neighbor itself: " + space.site_name(t));
    for (std::size_t s : mask_sites(neighbors_[t]))
      if (!mask_contains(neighbors_[s], t))
        throw DomainError("neighborhoods must be symmetric: " + space.site_name(t) + " vs " +
                          space.site_name(s));
  }
}

bool NeighborhoodSystem::subset_of(const NeighborhoodSystem& other) const {
  if (neighbors_.size() != other.neighbors_.size()) return false;
  for (std::size_t t = 0; t < neighbors_.size(); ++t)
    if ((neighbors_[t] & ~other.neighbors_[t]) != 0) return false;
  return true;
}

namespace {

// Sweeps, for one site t, every split of its boundary into a neighborhood
// part and an exterior part, comparing against the all-zeros exterior.
// emit(boundary, reference) is called for every exterior choice.
template <typename Emit>
void sweep_exteriors(const ConfigSpace& sp, std::size_t t, SiteMask nbhd_mask, Emit&& emit) {
  const SiteMask bmask = sp.complement(site_bit(t));
  const SiteMask exterior = bmask & ~nbhd_mask;
  std::vector<int> full(sp.site_count(), 0);
  for_each_config_inplace(sp, nbhd_mask, std::span<int>(full), [&](std::uint64_t) {
    for (std::size_t i : mask_sites(exterior)) full[i] = 0;
    const std::uint64_t reference = sp.project_index(bmask, full);
    for_each_config_inplace(sp, exterior, std::span<int>(full), [&](std::uint64_t) {
      emit(sp.project_index(bmask, full), reference);
    });
  });
}

}  // namespace

MarkovReport is_markov(const RandomField& p, const NeighborhoodSystem& nbhd, double tol) {
  if (p.positivity().klass != Positivity::positive)
    throw PositivityError("the Markov scan conditions on every boundary; "
                          "only positive fields are supported");
  const ConfigSpace& sp = p.space();
  if (nbhd.site_count() != sp.site_count())
    throw DomainError("neighborhood system does not match the field's sites");
  const OnePointSystem q = one_point_system(p);

  MarkovReport report;
  report.tol = tol;
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    sweep_exteriors(sp, t, nbhd.neighbors(t), [&](std::uint64_t b, std::uint64_t ref) {
      for (int x = 0; x < sp.cardinality(t); ++x) {
        const double d = std::abs(std::log(q.q(t, b, x)) - std::log(q.q(t, ref, x)));
        if (d > report.max_violation) {
          report.max_violation = d;
          report.witness = MarkovWitness{t, b, ref, x, -1};
        }
      }
    });
  }
  report.markov = report.max_violation <= tol;
  return report;
}

MarkovReport is_delta_markov(const TransitionEnergyField& d, const NeighborhoodSystem& nbhd,
                             double tol) {
  const ConfigSpace& sp = d.space();
  if (nbhd.site_count() != sp.site_count())
    throw DomainError("neighborhood system does not match the field's sites");

  MarkovReport report;
  report.tol = tol;
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    sweep_exteriors(sp, t, nbhd.neighbors(t), [&](std::uint64_t b, std::uint64_t ref) {
      for (int x = 0; x < c; ++x)
        for (int u = 0; u < c; ++u) {
          const double defect = std::abs(d.delta(t, b, x, u) - d.delta(t, ref, x, u));
          if (defect > report.max_violation) {
            report.max_violation = defect;
            report.witness = MarkovWitness{t, b, ref, x, u};
          }
        }
    });
  }
  report.markov = report.max_violation <= tol;
  return report;
}

NeighborhoodSystem minimal_neighborhoods(const RandomField& p, double tol) {
  if (p.positivity().klass != Positivity::positive)
    throw PositivityError("the dependence scan needs a positive field");
  const ConfigSpace& sp = p.space();
  const std::size_t n = sp.site_count();
  const OnePointSystem q = one_point_system(p);

  std::vector<SiteMask> depends(n, 0);
  std::vector<int> full(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const SiteMask bmask = sp.complement(site_bit(t));
    for (std::size_t s = 0; s < n; ++s) {
      if (s == t) continue;
      // does q_t^z move when only the s component of z moves?
      const SiteMask rest = bmask & ~site_bit(s);
      bool dependent = false;
      for_each_config_inplace(sp, rest, std::span<int>(full), [&](std::uint64_t) {
        if (dependent) return;
        full[s] = 0;
        const std::uint64_t ref = sp.project_index(bmask, full);
        for (int y = 1; y < sp.cardinality(s) && !dependent; ++y) {
          full[s] = y;
          const std::uint64_t b = sp.project_index(bmask, full);
          for (int x = 0; x < sp.cardinality(t); ++x) {
            if (std::abs(std::log(q.q(t, b, x)) - std::log(q.q(t, ref, x))) > tol) {
              dependent = true;
              break;
            }
          }
        }
      });
      if (dependent) depends[t] |= site_bit(s);
    }
  }
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s : mask_sites(depends[t])) depends[s] |= site_bit(t);
  return NeighborhoodSystem(sp, std::move(depends));
}

RandomField hc_field_from_pair_potential(const Potential& phi, const NeighborhoodSystem& nbhd) {
  const ConfigSpace& sp = phi.space();
  if (nbhd.site_count() != sp.site_count())
    throw DomainError("neighborhood system does not match the potential's sites");
  for (const auto& [v, table] : phi.terms()) {
    if (mask_size(v) <= 1) continue;
    for (std::size_t t : mask_sites(v)) {
      const SiteMask others = v & ~site_bit(t);
      if ((others & ~nbhd.neighbors(t)) != 0) {
        std::string names;
        for (std::size_t i : mask_sites(v)) {
          if (!names.empty()) names += ",";
          names += sp.site_name(i);
        }
        throw DomainError("potential term {" + names + "} reaches outside the neighborhood of " +
                          sp.site_name(t));
      }
    }
  }
  // route prescribed by the construction: energies, then the Gibbs system,
  // then the unique compatible field
  const TransitionEnergyField d =
      delta_from_hamiltonian(hamiltonian_onepoint(phi), /*verify=*/false);
  const OnePointSystem q = system_from_delta(d, /*verify=*/false);
  return reconstruct_positive(q, {}, {}, /*verify=*/false);
}

}  // namespace finfield
