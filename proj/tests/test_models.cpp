#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finfield/models.hpp"
#include "finfield/reconstruct.hpp"
#include "support/oracles.hpp"

using namespace finfield;

TEST_CASE("zero couplings give the uniform field") {
  const IsingModel model = ising_potential(2, 2, 0.0, 0.0);
  CHECK(model.potential.terms().empty());
  const RandomField p = field_from_global(model.potential);
  for (double v : p.probs()) CHECK(v == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("1x2 grid probabilities by the four-term formula") {
  const IsingModel model = ising_potential(1, 2, 0.5, 0.0);
  const RandomField p = field_from_global(model.potential);
  const double z = 2 * std::exp(0.5) + 2 * std::exp(-0.5);
  // equal spins at indices 0 (00) and 3 (11)
  CHECK(p.prob(0) == doctest::Approx(std::exp(0.5) / z).epsilon(1e-13));
  CHECK(p.prob(3) == doctest::Approx(std::exp(0.5) / z).epsilon(1e-13));
  CHECK(p.prob(1) == doctest::Approx(std::exp(-0.5) / z).epsilon(1e-13));
}

TEST_CASE("2x2 grid has four edges and the oracle's distribution") {
  const IsingModel model = ising_potential(2, 2, 0.5, 0.0);
  std::size_t pairs = 0;
  for (const auto& [v, t] : model.potential.terms())
    if (mask_size(v) == 2) ++pairs;
  CHECK(pairs == 4);
  const RandomField p = field_from_global(model.potential);
  const auto expected = oracle::ising_probs(2, 2, 0.5, 0.0);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(p.prob(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("grid adjacency is the expected one") {
  const IsingModel model = ising_potential(2, 2, 1.0, 0.0);
  CHECK(model.adjacency.neighbors(0) == (site_bit(1) | site_bit(2)));
  CHECK(model.adjacency.neighbors(3) == (site_bit(1) | site_bit(2)));
}

TEST_CASE("product field edge cases") {
  const ConfigSpace one({"a"}, {3});
  const RandomField p = product_field(one, {{0.2, 0.3, 0.5}});
  CHECK(p.probs() == std::vector<double>{0.2, 0.3, 0.5});
  CHECK_THROWS_AS(product_field(one, {{0.2, 0.3}}), DomainError);
  CHECK_THROWS_AS(product_field(one, {{0.5, 0.3, 0.5}}), DomainError);
}

TEST_CASE("generators are deterministic in the seed") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 3, 2});
  CHECK(random_positive_field(sp, 42).probs() == random_positive_field(sp, 42).probs());
  CHECK(random_positive_field(sp, 42).probs() != random_positive_field(sp, 43).probs());
  CHECK(vacuum_field(sp, 7, {0, 0, 0}).probs() == vacuum_field(sp, 7, {0, 0, 0}).probs());
}

TEST_CASE("vacuum fields are weakly positive with the requested points") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 3});
  const std::vector<int> theta = {1, 0, 2};
  const RandomField p = vacuum_field(sp, 11, theta);
  const auto report = classify_positivity(p);
  CHECK(report.klass == Positivity::weakly_positive);
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& pts = report.points.theta[t];
    CHECK(std::find(pts.begin(), pts.end(), theta[t]) != pts.end());
  }
}

TEST_CASE("perturbation breaks consistency and validates its arguments") {
  const ConfigSpace sp({"a", "b", "c"}, {2, 2, 2});
  const OnePointSystem q = one_point_system(random_positive_field(sp, 3));
  CHECK(check_consistency_positive(q, 1e-9).consistent);
  const OnePointSystem broken = perturb_system(q, 2, 1, 1.01);
  CHECK_FALSE(check_consistency_positive(broken, 1e-6).consistent);
  CHECK_THROWS_AS(perturb_system(q, 2, 1, 1.0), DomainError);
  CHECK_THROWS_AS(perturb_system(q, 2, 1, -0.5), DomainError);
  CHECK_THROWS_AS(perturb_system(q, 9, 1, 1.01), DomainError);
  CHECK_THROWS_AS(perturb_system(q, 2, 99, 1.01), DomainError);
}

TEST_CASE("random potentials land on valid consistent instances") {
  const ConfigSpace sp({"a", "b", "c", "d"}, {2, 2, 2, 2});
  const Potential phi = random_potential(sp, 5);
  CHECK_FALSE(phi.terms().empty());
  CHECK(check_consistency_positive(gibbs_system(phi), 1e-9).consistent);
}

TEST_CASE("sampler: uniform system visits everything evenly") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const RandomField uniform(sp, {0.25, 0.25, 0.25, 0.25});
  const SampleResult r = gibbs_sample(one_point_system(uniform), 100000, 100, 2024);
  CHECK(std::string(r.rng) == "splitmix64");
  for (double f : r.joint) CHECK(std::abs(f - 0.25) <= 0.02);
}

TEST_CASE("sampler: product marginals are recovered") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const RandomField p = product_field(sp, {{0.25, 0.75}, {0.5, 0.5}});
  const SampleResult r = gibbs_sample(one_point_system(p), 100000, 100, 99);
  CHECK(std::abs(r.marginals[0][1] - 0.75) <= 0.01);
  CHECK(std::abs(r.marginals[1][1] - 0.5) <= 0.01);
}

TEST_CASE("sampler: identical seeds give identical runs, different seeds differ") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const OnePointSystem q = one_point_system(random_positive_field(sp, 1));
  const SampleResult a = gibbs_sample(q, 2000, 50, 7);
  const SampleResult b = gibbs_sample(q, 2000, 50, 7);
  CHECK(a.joint == b.joint);
  const SampleResult c = gibbs_sample(q, 2000, 50, 8);
  CHECK(a.joint != c.joint);
}

TEST_CASE("sampler rejects non-positive systems and empty runs") {
  const ConfigSpace sp({"a", "b"}, {2, 2});
  const OnePointSystem weak = one_point_system(vacuum_field(sp, 2, {0, 0}));
  CHECK_THROWS_AS(gibbs_sample(weak, 100, 10, 1), PositivityError);
  const OnePointSystem q = one_point_system(random_positive_field(sp, 1));
  CHECK_THROWS_AS(gibbs_sample(q, 0, 10, 1), DomainError);
}

TEST_CASE("single-site heat-bath moves satisfy detailed balance") {
  const ConfigSpace sp({"a", "b"}, {2, 3});
  const OnePointSystem q = one_point_system(random_positive_field(sp, 17));
  const RandomField p = reconstruct_positive(q);
  // for configurations differing at exactly one site, the update kernel is
  // the one-point conditional under the shared complement
  std::vector<int> x(2), y(2);
  for (std::uint64_t ix = 0; ix < sp.total_configs(); ++ix) {
    sp.scatter_index(sp.full_mask(), ix, std::span<int>(x));
    for (std::size_t t = 0; t < 2; ++t) {
      const auto [xs, z] = sp.split_site(t, ix);
      for (int other = 0; other < sp.cardinality(t); ++other) {
        const std::uint64_t iy = sp.join_site(t, other, z);
        const double flow = p.prob(ix) * q.q(t, z, other);
        const double back = p.prob(iy) * q.q(t, z, xs);
        CHECK(std::abs(flow - back) <= 1e-12);
      }
    }
  }
}
