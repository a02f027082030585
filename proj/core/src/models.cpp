#include "finfield/models.hpp"

#include <cmath>

#include "finfield/numeric.hpp"
#include "finfield/rng.hpp"

namespace finfield {

IsingModel ising_potential(std::size_t rows, std::size_t cols, double beta, double h) {
  if (rows == 0 || cols == 0) throw DomainError("the grid needs at least one site");
  const std::size_t n = rows * cols;
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      names.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
  ConfigSpace space(std::move(names), std::vector<int>(n, 2));

  const auto at = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  Potential phi(space);
  if (h != 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      phi.set_term(site_bit(i), {-h * spin_of(0), -h * spin_of(1)});
  }
  std::vector<SiteMask> adjacency(n, 0);
  const auto edge = [&](std::size_t a, std::size_t b) {
    adjacency[a] |= site_bit(b);
    adjacency[b] |= site_bit(a);
    if (beta != 0.0) {
      std::vector<double> table(4);
      for (int xa = 0; xa < 2; ++xa)
        for (int xb = 0; xb < 2; ++xb)
          table[xa * 2 + xb] = -beta * spin_of(xa) * spin_of(xb);
      phi.set_term(site_bit(a) | site_bit(b), std::move(table));
    }
  };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edge(at(r, c), at(r, c + 1));
      if (r + 1 < rows) edge(at(r, c), at(r + 1, c));
    }
  return IsingModel{std::move(phi), NeighborhoodSystem(space, std::move(adjacency))};
}

RandomField product_field(const ConfigSpace& space,
                          const std::vector<std::vector<double>>& marginals) {
  const std::size_t n = space.site_count();
  if (marginals.size() != n) throw DomainError("one marginal per site is required");
  std::vector<std::vector<double>> m = marginals;
  for (std::size_t t = 0; t < n; ++t) {
    if (m[t].size() != static_cast<std::size_t>(space.cardinality(t)))
      throw DomainError("marginal size mismatch at site " + space.site_name(t));
    double sum = 0.0;
    for (double v : m[t]) {
      if (!std::isfinite(v) || v < 0.0)
        throw DomainError("marginal entries must be finite and non-negative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw DomainError("marginal at site " + space.site_name(t) + " sums to " +
                        std::to_string(sum));
    for (double& v : m[t]) v /= sum;
  }
  std::vector<double> probs(space.total_configs());
  for_each_config(space, space.full_mask(), [&](std::uint64_t idx, std::span<const int> values) {
    double p = 1.0;
    for (std::size_t t = 0; t < n; ++t) p *= m[t][values[t]];
    probs[idx] = p;
  });
  return RandomField(space, std::move(probs));
}

namespace {

RandomField normalized_field(const ConfigSpace& space, std::vector<double> weights) {
  const double sum = deterministic_sum(weights);
  if (sum <= 0.0) throw DomainError("field weights sum to zero");
  for (double& w : weights) w /= sum;
  return RandomField(space, std::move(weights));
}

}  // namespace

RandomField random_positive_field(const ConfigSpace& space, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> w(space.total_configs());
  for (double& v : w) v = rng.next_double(0.05, 1.0);
  return normalized_field(space, std::move(w));
}

RandomField vacuum_field(const ConfigSpace& space, std::uint64_t seed,
                         const std::vector<int>& theta) {
  if (theta.size() != space.site_count())
    throw DomainError("the vacuum configuration must cover every site");
  for (std::size_t t = 0; t < theta.size(); ++t)
    if (theta[t] < 0 || theta[t] >= space.cardinality(t))
      throw DomainError("vacuum state out of range at site " + space.site_name(t));
  SplitMix64 rng(seed);
  std::vector<double> w(space.total_configs());
  for_each_config(space, space.full_mask(), [&](std::uint64_t idx, std::span<const int> values) {
    bool touches = false;
    for (std::size_t t = 0; t < values.size(); ++t)
      if (values[t] == theta[t]) {
        touches = true;
        break;
      }
    // the stream advances for every configuration so that the support choice
    // does not reshuffle the remaining draws
    const double draw = rng.next_double(0.05, 1.0);
    w[idx] = touches ? draw : 0.0;
  });
  return normalized_field(space, std::move(w));
}

OnePointSystem perturb_system(const OnePointSystem& q, std::size_t site, std::uint64_t z,
                              double factor, int state) {
  const ConfigSpace& sp = q.space();
  if (site >= sp.site_count()) throw DomainError("perturbation site out of range");
  if (z >= q.boundary_count(site)) throw DomainError("perturbation boundary out of range");
  if (state < 0 || state >= sp.cardinality(site))
    throw DomainError("perturbation state out of range");
  if (!(factor > 0.0) || factor == 1.0)
    throw DomainError("perturbation factor must be positive and different from one");
  std::vector<std::vector<double>> tables = q.tables();
  const auto c = static_cast<std::uint64_t>(sp.cardinality(site));
  const auto row = std::span<double>(tables[site]).subspan(z * c, c);
  row[static_cast<std::size_t>(state)] *= factor;
  const double sum = stable_sum(std::span<const double>(row.data(), row.size()));
  for (double& v : row) v /= sum;
  return OnePointSystem(sp, std::move(tables));
}

Potential random_potential(const ConfigSpace& space, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t n = space.site_count();
  Potential phi(space);
  const auto random_table = [&](SiteMask v) {
    std::vector<double> table(space.config_count(v));
    for (double& e : table) e = rng.next_double(-1.0, 1.0);
    phi.set_term(v, std::move(table));
  };
  for (std::size_t t = 0; t < n; ++t)
    if (rng.next_double() < 0.8) random_table(site_bit(t));
  for (std::size_t t = 0; t + 1 < n; ++t)
    for (std::size_t s = t + 1; s < n; ++s)
      if (rng.next_double() < 0.5) random_table(site_bit(t) | site_bit(s));
  if (n >= 3)
    for (std::size_t t = 0; t + 2 < n; ++t)
      for (std::size_t s = t + 1; s + 1 < n; ++s)
        for (std::size_t r = s + 1; r < n; ++r)
          if (rng.next_double() < 0.15)
            random_table(site_bit(t) | site_bit(s) | site_bit(r));
  if (phi.terms().empty()) random_table(site_bit(0));
  return phi;
}

SampleResult gibbs_sample(const OnePointSystem& q, std::uint64_t sweeps, std::uint64_t burn_in,
                          std::uint64_t seed) {
  if (q.positivity() != Positivity::positive)
    throw PositivityError("the heat-bath chain needs a strictly positive system");
  if (sweeps == 0) throw DomainError("at least one recorded sweep is required");
  const ConfigSpace& sp = q.space();
  const std::size_t n = sp.site_count();
  SplitMix64 rng(seed);

  std::vector<int> cur(n, 0);
  std::vector<std::uint64_t> counts(sp.total_configs(), 0);
  const auto sweep_once = [&] {
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint64_t z = sp.project_index(sp.complement(site_bit(t)), cur);
      const auto row = q.row(t, z);
      const double r = rng.next_double();
      double cum = 0.0;
      int drawn = static_cast<int>(row.size()) - 1;
      for (std::size_t x = 0; x < row.size(); ++x) {
        cum += row[x];
        if (r < cum) {
          drawn = static_cast<int>(x);
          break;
        }
      }
      cur[t] = drawn;
    }
  };
  for (std::uint64_t i = 0; i < burn_in; ++i) sweep_once();
  for (std::uint64_t i = 0; i < sweeps; ++i) {
    sweep_once();
    counts[sp.project_index(sp.full_mask(), cur)] += 1;
  }

  SampleResult out;
  out.sweeps = sweeps;
  out.burn_in = burn_in;
  out.seed = seed;
  out.rng = SplitMix64::algorithm;
  out.joint.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.joint[i] = static_cast<double>(counts[i]) / static_cast<double>(sweeps);
  out.marginals.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    out.marginals[t].assign(static_cast<std::size_t>(sp.cardinality(t)), 0.0);
  for_each_config(sp, sp.full_mask(), [&](std::uint64_t idx, std::span<const int> values) {
    for (std::size_t t = 0; t < n; ++t) out.marginals[t][values[t]] += out.joint[idx];
  });
  return out;
}

}  // namespace finfield
