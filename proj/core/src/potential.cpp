#include "finfield/potential.hpp"

#include <cmath>

#include "finfield/numeric.hpp"

namespace finfield {

void Potential::set_term(SiteMask v, std::vector<double> table) {
  space_.require_subset(v);
  if (v == 0) throw DomainError("potential terms live on nonempty subsets");
  if (table.size() != space_.config_count(v))
    throw DomainError("potential table size does not match its subset");
  for (double e : table)
    if (!std::isfinite(e)) throw DomainError("potential entries must be finite");
  vacuum_.reset();
  terms_[v] = std::move(table);
}

void Potential::mark_vacuum(std::vector<int> theta) {
  if (theta.size() != space_.site_count())
    throw DomainError("the vacuum configuration must cover every site");
  for (std::size_t t = 0; t < theta.size(); ++t)
    if (theta[t] < 0 || theta[t] >= space_.cardinality(t))
      throw DomainError("vacuum state out of range at site " + space_.site_name(t));
  for (const auto& [v, table] : terms_) {
    const auto sites = mask_sites(v);
    for_each_config(space_, v, [&](std::uint64_t idx, std::span<const int> values) {
      for (std::size_t pos = 0; pos < sites.size(); ++pos) {
        if (values[pos] == theta[sites[pos]]) {
          if (table[idx] != 0.0)
            throw DomainError("potential is not in vacuum form on subset containing site " +
                              space_.site_name(sites[pos]));
          break;
        }
      }
    });
  }
  vacuum_ = std::move(theta);
}

double hamiltonian_global(const Potential& phi, std::span<const int> x) {
  const ConfigSpace& sp = phi.space();
  if (x.size() != sp.site_count())
    throw DomainError("global energy needs a configuration on the full site set");
  double h = 0.0;
  for (const auto& [v, table] : phi.terms()) h += table[sp.project_index(v, x)];
  return h;
}

double hamiltonian_global(const Potential& phi, const Configuration& x) {
  if (x.domain() != phi.space().full_mask())
    throw DomainError("global energy needs a configuration on the full site set");
  return hamiltonian_global(phi, std::span<const int>(x.values()));
}

double hamiltonian_partial(const Potential& phi, SiteMask domain, std::span<const int> x) {
  const ConfigSpace& sp = phi.space();
  double h = 0.0;
  for (const auto& [v, table] : phi.terms()) {
    if ((v & ~domain) != 0) continue;
    h += table[sp.project_index(v, x)];
  }
  return h;
}

OnePointHamiltonian hamiltonian_onepoint(const Potential& phi) {
  const ConfigSpace& sp = phi.space();
  const std::size_t n = sp.site_count();
  std::vector<std::vector<double>> values(n);
  std::vector<int> full(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = sp.total_configs() / static_cast<std::uint64_t>(c);
    values[t].assign(zc * static_cast<std::uint64_t>(c), 0.0);
    const SiteMask zdomain = sp.complement(site_bit(t));
    for (const auto& [v, table] : phi.terms()) {
      if (!mask_contains(v, t)) continue;
      for_each_config_inplace(sp, zdomain, std::span<int>(full), [&](std::uint64_t z) {
        for (int x = 0; x < c; ++x) {
          full[t] = x;
          values[t][z * c + x] += table[sp.project_index(v, full)];
        }
      });
    }
  }
  return OnePointHamiltonian(sp, std::move(values));
}

OnePointSystem gibbs_system(const Potential& phi) {
  // built from a potential, the pair condition holds by construction
  return system_from_hamiltonian(hamiltonian_onepoint(phi), GibbsSign::exp_minus_h,
                                 /*verify=*/false);
}

RandomField field_from_global(const Potential& phi) {
  const ConfigSpace& sp = phi.space();
  std::vector<double> logw(sp.total_configs());
  for_each_config(sp, sp.full_mask(), [&](std::uint64_t idx, std::span<const int> values) {
    logw[idx] = -hamiltonian_global(phi, values);
  });
  const double lse = log_sum_exp(logw);
  std::vector<double> probs(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) probs[i] = std::exp(logw[i] - lse);
  return RandomField(sp, std::move(probs));
}

Potential extract_potential_mobius(const RandomField& p, const std::vector<int>& theta) {
  if (p.positivity().klass != Positivity::positive)
    throw PositivityError("potential extraction needs a strictly positive field");
  const ConfigSpace& sp = p.space();
  const std::size_t n = sp.site_count();
  if (n > 24)
    throw CapacityError("potential extraction sweeps every site subset; 24 sites is the limit");
  if (theta.size() != n) throw DomainError("the vacuum configuration must cover every site");
  for (std::size_t t = 0; t < n; ++t)
    if (theta[t] < 0 || theta[t] >= sp.cardinality(t))
      throw DomainError("vacuum state out of range at site " + sp.site_name(t));

  constexpr double kDropBelow = 1e-12;
  Potential phi(sp);
  std::vector<int> full(n, 0);
  for (SiteMask v = 1; v <= sp.full_mask(); ++v) {
    if ((v & ~sp.full_mask()) != 0) continue;
    const auto sites = mask_sites(v);
    std::vector<double> table(sp.config_count(v), 0.0);
    double largest = 0.0;
    for_each_config(sp, v, [&](std::uint64_t idx, std::span<const int> values) {
      // entries touching the vacuum are exactly zero: the J and J\{t} terms
      // of the inversion cancel pairwise
      for (std::size_t pos = 0; pos < sites.size(); ++pos)
        if (values[pos] == theta[sites[pos]]) return;
      double acc = 0.0;
      const std::size_t k = sites.size();
      for (SiteMask j = v;; j = (j - 1) & v) {
        std::copy(theta.begin(), theta.end(), full.begin());
        std::size_t pos = 0;
        for (SiteMask m = v; m; m &= m - 1, ++pos) {
          const auto i = static_cast<std::size_t>(std::countr_zero(m));
          if (mask_contains(j, i)) full[i] = values[pos];
        }
        const double lp = std::log(p.prob(sp.project_index(sp.full_mask(), full)));
        const bool even = ((k - mask_size(j)) % 2) == 0;
        acc += even ? lp : -lp;
        if (j == 0) break;
      }
      table[idx] = -acc;
      largest = std::max(largest, std::abs(table[idx]));
    });
    if (largest >= kDropBelow) phi.set_term(v, std::move(table));
  }
  phi.mark_vacuum(theta);
  return phi;
}

}  // namespace finfield
