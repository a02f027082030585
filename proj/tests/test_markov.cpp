#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finfield/markov.hpp"
#include "finfield/models.hpp"
#include "finfield/rng.hpp"

using namespace finfield;

namespace {

NeighborhoodSystem full_neighborhoods(const ConfigSpace& sp) {
  std::vector<SiteMask> masks(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) masks[t] = sp.complement(site_bit(t));
  return NeighborhoodSystem(sp, std::move(masks));
}

NeighborhoodSystem empty_neighborhoods(const ConfigSpace& sp) {
  return NeighborhoodSystem(sp, std::vector<SiteMask>(sp.site_count(), 0));
}

// random symmetric irreflexive masks
NeighborhoodSystem random_neighborhoods(const ConfigSpace& sp, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<SiteMask> masks(sp.site_count(), 0);
  for (std::size_t t = 0; t + 1 < sp.site_count(); ++t)
    for (std::size_t s = t + 1; s < sp.site_count(); ++s)
      if (rng.next_double() < 0.5) {
        masks[t] |= site_bit(s);
        masks[s] |= site_bit(t);
      }
  return NeighborhoodSystem(sp, std::move(masks));
}

// potential supported on the singletons and edges of nbhd
Potential clique_potential(const ConfigSpace& sp, const NeighborhoodSystem& nbhd,
                           std::uint64_t seed) {
  SplitMix64 rng(seed);
  Potential phi(sp);
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    std::vector<double> table(sp.cardinality(t));
    for (double& e : table) e = rng.next_double(-1.0, 1.0);
    phi.set_term(site_bit(t), std::move(table));
  }
  for (std::size_t t = 0; t + 1 < sp.site_count(); ++t)
    for (std::size_t s : mask_sites(nbhd.neighbors(t))) {
      if (s <= t) continue;
      const SiteMask v = site_bit(t) | site_bit(s);
      std::vector<double> table(sp.config_count(v));
      for (double& e : table) e = rng.next_double(-1.0, 1.0);
      phi.set_term(v, std::move(table));
    }
  return phi;
}

}  // namespace

TEST_CASE("neighborhood systems validate symmetry and irreflexivity") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  CHECK_THROWS_AS(NeighborhoodSystem(sp, {site_bit(0), 0, 0}), DomainError);
  CHECK_THROWS_AS(NeighborhoodSystem(sp, {site_bit(1), 0, 0}), DomainError);
  CHECK_NOTHROW(NeighborhoodSystem(sp, {site_bit(1), site_bit(0), 0}));
}

TEST_CASE("full neighborhoods make every positive field Markov") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 3, 2});
  const RandomField p = random_positive_field(sp, 81);
  const MarkovReport rep = is_markov(p, full_neighborhoods(sp), 1e-9);
  CHECK(rep.markov);
  CHECK(rep.max_violation == 0.0);
}

TEST_CASE("product fields are Markov with empty neighborhoods") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  const RandomField p =
      product_field(sp, {{0.3, 0.7}, {0.5, 0.5}, {0.2, 0.8}});
  CHECK(is_markov(p, empty_neighborhoods(sp), 1e-9).markov);
}

TEST_CASE("ising grids are Markov for grid adjacency, not for a pruned one") {
  const IsingModel model = ising_potential(2, 2, 0.5, 0.0);
  const RandomField p = field_from_global(model.potential);
  CHECK(is_markov(p, model.adjacency, 1e-10).markov);

  // delete the top edge r0c0 -- r0c1
  auto masks = model.adjacency.masks();
  masks[0] &= ~site_bit(1);
  masks[1] &= ~site_bit(0);
  const NeighborhoodSystem pruned(p.space(), std::move(masks));
  const MarkovReport rep = is_markov(p, pruned, 1e-9);
  CHECK_FALSE(rep.markov);
  REQUIRE(rep.witness.has_value());
  CHECK((rep.witness->t == 0 || rep.witness->t == 1));
}

TEST_CASE("zero energies are Markov for any neighborhoods") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  const RandomField uniform(sp, std::vector<double>(8, 0.125));
  const TransitionEnergyField d = delta_from_field(uniform);
  CHECK(is_delta_markov(d, empty_neighborhoods(sp), 1e-12).markov);
  CHECK(is_delta_markov(d, random_neighborhoods(sp, 5), 1e-12).markov);
}

TEST_CASE("the energy route sees the same grid locality") {
  const IsingModel model = ising_potential(2, 2, 0.5, 0.0);
  const RandomField p = field_from_global(model.potential);
  CHECK(is_delta_markov(delta_from_field(p), model.adjacency, 1e-10).markov);
}

TEST_CASE("field and energy verdicts agree on seeded pairs") {
  std::uint64_t seed = 900;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    const ConfigSpace sp(names, std::vector<int>(n, 2));
    for (int rep = 0; rep < 4; ++rep) {
      const NeighborhoodSystem nbhd = random_neighborhoods(sp, ++seed);
      // a generic field (almost surely non-Markov unless nbhd is full) and a
      // clique-supported Gibbs field (Markov by construction)
      const RandomField generic = random_positive_field(sp, ++seed);
      const RandomField local = field_from_global(clique_potential(sp, nbhd, ++seed));
      for (const RandomField* p : {&generic, &local}) {
        const bool via_field = is_markov(*p, nbhd, 1e-9).markov;
        const bool via_delta = is_delta_markov(delta_from_field(*p), nbhd, 1e-9).markov;
        CHECK(via_field == via_delta);
      }
      CHECK(is_markov(local, nbhd, 1e-9).markov);
    }
  }
}

TEST_CASE("markov verdicts are monotone in the neighborhood system") {
  const IsingModel model = ising_potential(1, 3, 0.7, 0.1);
  const RandomField p = field_from_global(model.potential);
  CHECK(is_markov(p, model.adjacency, 1e-9).markov);
  // add the chord between the path's endpoints
  auto masks = model.adjacency.masks();
  masks[0] |= site_bit(2);
  masks[2] |= site_bit(0);
  CHECK(is_markov(p, NeighborhoodSystem(p.space(), std::move(masks)), 1e-9).markov);
}

TEST_CASE("the reference-pinned scan agrees with the full quadratic definition") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  const RandomField p = field_from_global(clique_potential(sp, random_neighborhoods(sp, 7), 8));
  const OnePointSystem q = one_point_system(p);
  for (std::uint64_t probe = 0; probe < 4; ++probe) {
    const NeighborhoodSystem nbhd = random_neighborhoods(sp, 100 + probe);
    // quadratic sweep: all pairs of boundaries agreeing on the neighborhood
    double worst = 0.0;
    for (std::size_t t = 0; t < 3; ++t) {
      const SiteMask bmask = sp.complement(site_bit(t));
      std::vector<int> a(3), b(3);
      for (std::uint64_t za = 0; za < q.boundary_count(t); ++za)
        for (std::uint64_t zb = 0; zb < q.boundary_count(t); ++zb) {
          sp.scatter_index(bmask, za, std::span<int>(a));
          sp.scatter_index(bmask, zb, std::span<int>(b));
          bool same_nbhd = true;
          for (std::size_t s : mask_sites(nbhd.neighbors(t)))
            if (a[s] != b[s]) same_nbhd = false;
          if (!same_nbhd) continue;
          for (int x = 0; x < 2; ++x)
            worst = std::max(worst,
                             std::abs(std::log(q.q(t, za, x)) - std::log(q.q(t, zb, x))));
        }
    }
    const MarkovReport rep = is_markov(p, nbhd, 1e-9);
    CHECK((worst <= 1e-9) == rep.markov);
    // the pinned scan sees defects within a factor of two of the full sweep
    CHECK(rep.max_violation <= worst + 1e-15);
    CHECK(worst <= 2.0 * rep.max_violation + 1e-15);
  }
}

TEST_CASE("minimal neighborhoods: product fields have none, paths recover the path") {
  const ConfigSpace sp2({"a", "b"}, {2, 2});
  const RandomField prod = product_field(sp2, {{0.3, 0.7}, {0.6, 0.4}});
  CHECK(minimal_neighborhoods(prod, 1e-9) == empty_neighborhoods(sp2));

  const IsingModel path = ising_potential(1, 3, 0.5, 0.0);
  const RandomField p = field_from_global(path.potential);
  const NeighborhoodSystem found = minimal_neighborhoods(p, 1e-9);
  CHECK(found == path.adjacency);
  CHECK(found.neighbors(0) == site_bit(1));
  CHECK(found.neighbors(1) == (site_bit(0) | site_bit(2)));
  CHECK(found.neighbors(2) == site_bit(1));
  CHECK(is_markov(p, found, 1e-9).markov);
}

TEST_CASE("minimal neighborhoods: a single distant pair term is found and is minimal") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  Potential phi(sp);
  phi.set_term(site_bit(0) | site_bit(2), {0.5, -0.5, -0.5, 0.5});
  const RandomField p = field_from_global(phi);
  const NeighborhoodSystem found = minimal_neighborhoods(p, 1e-9);
  CHECK(found.neighbors(0) == site_bit(2));
  CHECK(found.neighbors(1) == 0);
  CHECK(found.neighbors(2) == site_bit(0));
  // removing the flagged pair breaks the property
  const NeighborhoodSystem none(sp, std::vector<SiteMask>(3, 0));
  CHECK_FALSE(is_markov(p, none, 1e-9).markov);
}

TEST_CASE("clique fields from potentials: empty, ising, support rejection") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const RandomField uniform = hc_field_from_pair_potential(Potential(sp), empty_neighborhoods(sp));
  for (double v : uniform.probs()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(is_markov(uniform, empty_neighborhoods(sp), 1e-9).markov);

  const IsingModel model = ising_potential(2, 2, 0.5, 0.3);
  const RandomField p = hc_field_from_pair_potential(model.potential, model.adjacency);
  CHECK(is_markov(p, model.adjacency, 1e-10).markov);
  CHECK(max_abs_difference(p, field_from_global(model.potential)) <= 1e-12);

  // a pair term between non-neighbors is rejected by name
  Potential bad(model.potential.space());
  bad.set_term(site_bit(0) | site_bit(3), {0.1, -0.1, -0.1, 0.1});
  try {
    hc_field_from_pair_potential(bad, model.adjacency);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("r0c0") != std::string::npos);
    CHECK(std::string(e.what()).find("r1c1") != std::string::npos);
  }
}

TEST_CASE("weakly positive fields are not analyzed") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const RandomField weak = vacuum_field(sp, 9, {0, 0});
  CHECK_THROWS_AS(is_markov(weak, empty_neighborhoods(sp), 1e-9), PositivityError);
  CHECK_THROWS_AS(minimal_neighborhoods(weak, 1e-9), PositivityError);
}
