#include "finfield/energy.hpp"

#include <cmath>

#include "finfield/numeric.hpp"

namespace finfield {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " entries must be finite");
}

[[noreturn]] void throw_energy_inconsistent(const EnergyReport& rep, const char* what) {
  throw ConsistencyError(std::string(what) + " fails its consistency conditions (defect " +
                             std::to_string(rep.max_violation) + ")",
                         rep.max_violation);
}

}  // namespace

TransitionEnergyField::TransitionEnergyField(ConfigSpace space,
                                             std::vector<std::vector<double>> deltas)
    : space_(std::move(space)), deltas_(std::move(deltas)) {
  const std::size_t n = space_.site_count();
  if (deltas_.size() != n) throw DomainError("one transition table per site is required");
  for (std::size_t t = 0; t < n; ++t) {
    const auto c = static_cast<std::uint64_t>(space_.cardinality(t));
    if (deltas_[t].size() != boundary_count(t) * c * c)
      throw DomainError("transition table size mismatch at site " + space_.site_name(t));
    for (double v : deltas_[t]) require_finite(v, "transition energy");
    for (std::uint64_t z = 0; z < boundary_count(t); ++z)
      for (std::uint64_t x = 0; x < c; ++x)
        if (deltas_[t][(z * c + x) * c + x] != 0.0)
          throw DomainError("transition energy diagonal must be exactly zero (site " +
                            space_.site_name(t) + ")");
  }
}

OnePointHamiltonian::OnePointHamiltonian(ConfigSpace space,
                                         std::vector<std::vector<double>> values)
    : space_(std::move(space)), values_(std::move(values)) {
  const std::size_t n = space_.site_count();
  if (values_.size() != n) throw DomainError("one energy table per site is required");
  for (std::size_t t = 0; t < n; ++t) {
    const auto c = static_cast<std::uint64_t>(space_.cardinality(t));
    if (values_[t].size() != boundary_count(t) * c)
      throw DomainError("energy table size mismatch at site " + space_.site_name(t));
    for (double v : values_[t]) require_finite(v, "hamiltonian");
  }
}

TransitionEnergyField delta_from_system(const OnePointSystem& q) {
  if (q.positivity() != Positivity::positive)
    throw PositivityError("transition energies are log ratios; the system must be positive");
  const ConfigSpace& sp = q.space();
  std::vector<std::vector<double>> deltas(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = q.boundary_count(t);
    deltas[t].assign(zc * static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c), 0.0);
    for (std::uint64_t z = 0; z < zc; ++z)
      for (int x = 0; x < c; ++x)
        for (int u = 0; u < c; ++u) {
          if (x == u) continue;
          deltas[t][(z * c + x) * c + u] = std::log(q.q(t, z, x) / q.q(t, z, u));
        }
  }
  return TransitionEnergyField(sp, std::move(deltas));
}

OnePointSystem system_from_delta(const TransitionEnergyField& d, bool verify, double tol) {
  if (verify) {
    const EnergyReport rep = check_delta(d, tol);
    if (!rep.consistent) throw_energy_inconsistent(rep, "transition energy field");
  }
  const ConfigSpace& sp = d.space();
  std::vector<std::vector<double>> tables(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = d.boundary_count(t);
    tables[t].assign(zc * static_cast<std::uint64_t>(c), 0.0);
    std::vector<double> w(c);
    std::vector<double> ref(c);
    for (std::uint64_t z = 0; z < zc; ++z) {
      for (int x = 0; x < c; ++x) w[x] = d.delta(t, z, x, 0);
      const double lse = log_sum_exp(w);
      for (int x = 0; x < c; ++x)
        tables[t][z * c + x] = std::exp(w[x] - lse);
      // the cocycle makes the reference state immaterial; keep that observable
      for (int u = 1; u < c; ++u) {
        for (int x = 0; x < c; ++x) ref[x] = d.delta(t, z, x, u);
        const double l2 = log_sum_exp(ref);
        for (int x = 0; x < c; ++x)
          if (std::abs(std::exp(ref[x] - l2) - tables[t][z * c + x]) > 1e-12)
            throw ConsistencyError("Gibbs form depends on the reference state at site " +
                                       sp.site_name(t) + ", boundary " +
                                       render_config(sp, sp.complement(site_bit(t)), z),
                                   std::abs(std::exp(ref[x] - l2) - tables[t][z * c + x]));
      }
    }
  }
  return OnePointSystem(sp, std::move(tables));
}

TransitionEnergyField delta_from_field(const RandomField& p) {
  if (p.positivity().klass != Positivity::positive)
    throw PositivityError("transition energies need a strictly positive field");
  const ConfigSpace& sp = p.space();
  std::vector<std::vector<double>> deltas(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = sp.total_configs() / static_cast<std::uint64_t>(c);
    deltas[t].assign(zc * static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c), 0.0);
    for (std::uint64_t z = 0; z < zc; ++z)
      for (int x = 0; x < c; ++x)
        for (int u = 0; u < c; ++u) {
          if (x == u) continue;
          deltas[t][(z * c + x) * c + u] =
              std::log(p.prob(sp.join_site(t, x, z)) / p.prob(sp.join_site(t, u, z)));
        }
  }
  return TransitionEnergyField(sp, std::move(deltas));
}

OnePointHamiltonian hamiltonian_from_field(const RandomField& p, const std::vector<int>& theta) {
  if (p.positivity().klass != Positivity::positive)
    throw PositivityError("the log-ratio hamiltonian needs a strictly positive field");
  const ConfigSpace& sp = p.space();
  if (theta.size() != sp.site_count())
    throw DomainError("the reference configuration must cover every site");
  for (std::size_t t = 0; t < sp.site_count(); ++t)
    if (theta[t] < 0 || theta[t] >= sp.cardinality(t))
      throw DomainError("reference state out of range at site " + sp.site_name(t));
  std::vector<std::vector<double>> values(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = sp.total_configs() / static_cast<std::uint64_t>(c);
    values[t].assign(zc * static_cast<std::uint64_t>(c), 0.0);
    for (std::uint64_t z = 0; z < zc; ++z) {
      const double ref = p.prob(sp.join_site(t, theta[t], z));
      for (int x = 0; x < c; ++x)
        values[t][z * c + x] =
            x == theta[t] ? 0.0 : std::log(p.prob(sp.join_site(t, x, z)) / ref);
    }
  }
  return OnePointHamiltonian(sp, std::move(values));
}

TransitionEnergyField delta_from_hamiltonian(const OnePointHamiltonian& h, bool verify,
                                             double tol) {
  if (verify) {
    const EnergyReport rep = check_hamiltonian(h, tol);
    if (!rep.consistent) throw_energy_inconsistent(rep, "hamiltonian");
  }
  const ConfigSpace& sp = h.space();
  std::vector<std::vector<double>> deltas(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = h.boundary_count(t);
    deltas[t].assign(zc * static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c), 0.0);
    for (std::uint64_t z = 0; z < zc; ++z)
      for (int x = 0; x < c; ++x)
        for (int u = 0; u < c; ++u) {
          if (x == u) continue;
          deltas[t][(z * c + x) * c + u] = h.value(t, z, u) - h.value(t, z, x);
        }
  }
  return TransitionEnergyField(sp, std::move(deltas));
}

OnePointHamiltonian hamiltonian_from_delta(const TransitionEnergyField& d, bool verify,
                                           double tol) {
  std::vector<std::vector<int>> gauge(d.space().site_count());
  for (std::size_t t = 0; t < gauge.size(); ++t)
    gauge[t].assign(d.boundary_count(t), 0);
  return hamiltonian_from_delta(d, gauge, verify, tol);
}

OnePointHamiltonian hamiltonian_from_delta(const TransitionEnergyField& d,
                                           const std::vector<std::vector<int>>& gauge,
                                           bool verify, double tol) {
  if (verify) {
    const EnergyReport rep = check_delta(d, tol);
    if (!rep.consistent) throw_energy_inconsistent(rep, "transition energy field");
  }
  const ConfigSpace& sp = d.space();
  if (gauge.size() != sp.site_count())
    throw DomainError("one gauge reference row per site is required");
  std::vector<std::vector<double>> values(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = d.boundary_count(t);
    if (gauge[t].size() != zc)
      throw DomainError("gauge reference count mismatch at site " + sp.site_name(t));
    values[t].assign(zc * static_cast<std::uint64_t>(c), 0.0);
    for (std::uint64_t z = 0; z < zc; ++z) {
      const int r = gauge[t][z];
      if (r < 0 || r >= c)
        throw DomainError("gauge reference state out of range at site " + sp.site_name(t));
      for (int x = 0; x < c; ++x) values[t][z * c + x] = d.delta(t, z, r, x);
    }
  }
  return OnePointHamiltonian(sp, std::move(values));
}

OnePointSystem system_from_hamiltonian(const OnePointHamiltonian& h, GibbsSign sign, bool verify,
                                       double tol) {
  if (verify) {
    const EnergyReport rep = check_hamiltonian(h, tol);
    if (!rep.consistent) throw_energy_inconsistent(rep, "hamiltonian");
  }
  const ConfigSpace& sp = h.space();
  const double flip = sign == GibbsSign::exp_minus_h ? -1.0 : 1.0;
  std::vector<std::vector<double>> tables(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const int c = sp.cardinality(t);
    const std::uint64_t zc = h.boundary_count(t);
    tables[t].assign(zc * static_cast<std::uint64_t>(c), 0.0);
    std::vector<double> w(c);
    for (std::uint64_t z = 0; z < zc; ++z) {
      for (int x = 0; x < c; ++x) w[x] = flip * h.value(t, z, x);
      const double lse = log_sum_exp(w);
      for (int x = 0; x < c; ++x) tables[t][z * c + x] = std::exp(w[x] - lse);
    }
  }
  return OnePointSystem(sp, std::move(tables));
}

EnergyReport check_delta(const TransitionEnergyField& d, double tol) {
  const ConfigSpace& sp = d.space();
  const std::size_t n = sp.site_count();
  EnergyReport report;
  report.tol = tol;
  auto consider = [&](double defect, EnergyWitness w) {
    if (defect > report.max_violation) {
      report.max_violation = defect;
      report.witness = w;
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    const int c = sp.cardinality(t);
    for (std::uint64_t z = 0; z < d.boundary_count(t); ++z) {
      for (int x = 0; x < c; ++x) {
        consider(std::abs(d.delta(t, z, x, x)),
                 EnergyWitness{EnergyWitness::Identity::diagonal, t, t, z, x, x, -1, -1, -1});
        for (int u = 0; u < c; ++u)
          for (int a = 0; a < c; ++a)
            consider(std::abs(d.delta(t, z, x, u) - d.delta(t, z, x, a) - d.delta(t, z, a, u)),
                     EnergyWitness{EnergyWitness::Identity::cocycle, t, t, z, x, u, -1, -1, a});
      }
    }
  }

  std::vector<int> full(n, 0);
  std::vector<std::uint64_t> zt, zs;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t s = t + 1; s < n; ++s) {
      const SiteMask zdomain = sp.complement(site_bit(t) | site_bit(s));
      const SiteMask bt = sp.complement(site_bit(t));
      const SiteMask bs = sp.complement(site_bit(s));
      for_each_config_inplace(sp, zdomain, std::span<int>(full), [&](std::uint64_t zi) {
        zt.resize(sp.cardinality(s));
        for (int w = 0; w < sp.cardinality(s); ++w) {
          full[s] = w;
          zt[w] = sp.project_index(bt, full);
        }
        zs.resize(sp.cardinality(t));
        for (int w = 0; w < sp.cardinality(t); ++w) {
          full[t] = w;
          zs[w] = sp.project_index(bs, full);
        }
        for (int x = 0; x < sp.cardinality(t); ++x)
          for (int u = 0; u < sp.cardinality(t); ++u)
            for (int y = 0; y < sp.cardinality(s); ++y)
              for (int v = 0; v < sp.cardinality(s); ++v) {
                const double lhs = d.delta(t, zt[y], x, u) + d.delta(s, zs[u], y, v);
                const double rhs = d.delta(s, zs[x], y, v) + d.delta(t, zt[v], x, u);
                consider(std::abs(lhs - rhs),
                         EnergyWitness{EnergyWitness::Identity::commutation, t, s, zi, x, u, y, v,
                                       -1});
              }
      });
    }
  }
  report.consistent = report.max_violation <= tol;
  return report;
}

EnergyReport check_hamiltonian(const OnePointHamiltonian& h, double tol) {
  const ConfigSpace& sp = h.space();
  const std::size_t n = sp.site_count();
  EnergyReport report;
  report.tol = tol;
  std::vector<int> full(n, 0);
  std::vector<std::uint64_t> zt, zs;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t s = t + 1; s < n; ++s) {
      const SiteMask zdomain = sp.complement(site_bit(t) | site_bit(s));
      const SiteMask bt = sp.complement(site_bit(t));
      const SiteMask bs = sp.complement(site_bit(s));
      for_each_config_inplace(sp, zdomain, std::span<int>(full), [&](std::uint64_t zi) {
        zt.resize(sp.cardinality(s));
        for (int w = 0; w < sp.cardinality(s); ++w) {
          full[s] = w;
          zt[w] = sp.project_index(bt, full);
        }
        zs.resize(sp.cardinality(t));
        for (int w = 0; w < sp.cardinality(t); ++w) {
          full[t] = w;
          zs[w] = sp.project_index(bs, full);
        }
        for (int x = 0; x < sp.cardinality(t); ++x)
          for (int u = 0; u < sp.cardinality(t); ++u)
            for (int y = 0; y < sp.cardinality(s); ++y)
              for (int v = 0; v < sp.cardinality(s); ++v) {
                const double lhs = h.value(t, zt[y], x) + h.value(s, zs[x], v) +
                                   h.value(t, zt[v], u) + h.value(s, zs[u], y);
                const double rhs = h.value(t, zt[y], u) + h.value(s, zs[u], v) +
                                   h.value(t, zt[v], x) + h.value(s, zs[x], y);
                if (const double defect = std::abs(lhs - rhs);
                    defect > report.max_violation) {
                  report.max_violation = defect;
                  report.witness = EnergyWitness{EnergyWitness::Identity::hamiltonian_pair, t, s,
                                                 zi, x, u, y, v, -1};
                }
              }
      });
    }
  }
  report.consistent = report.max_violation <= tol;
  return report;
}

}  // namespace finfield
