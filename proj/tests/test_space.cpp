#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "finfield/space.hpp"

using namespace finfield;

namespace {
ConfigSpace two_binary() { return ConfigSpace({"a", "b"}, {2, 2}); }
}  // namespace

TEST_CASE("construction validates its inputs") {
  CHECK_THROWS_AS(ConfigSpace({}, {}), DomainError);
  CHECK_THROWS_AS(ConfigSpace({"a", "a"}, {2, 2}), DomainError);
  CHECK_THROWS_AS(ConfigSpace({"a"}, {0}), DomainError);
  CHECK_THROWS_AS(ConfigSpace({"a", "b"}, {2}), DomainError);
  // 2^25 binary sites blow the default cap
  std::vector<std::string> names;
  std::vector<int> cards;
  for (int i = 0; i < 25; ++i) {
    names.push_back("s" + std::to_string(i));
    cards.push_back(2);
  }
  CHECK_THROWS_AS(ConfigSpace(names, cards), CapacityError);
  // cardinality-one sites are allowed
  CHECK_NOTHROW(ConfigSpace({"a", "b"}, {1, 3}));
}

TEST_CASE("enumerate: empty subset yields the single empty configuration") {
  const auto sp = two_binary();
  const auto configs = enumerate_configs(sp, 0);
  REQUIRE(configs.size() == 1);
  CHECK(configs[0].empty());
  CHECK(configs[0] == Configuration());
}

TEST_CASE("enumerate: two binary sites in canonical order, b fastest") {
  const auto sp = two_binary();
  const auto configs = enumerate_configs(sp, sp.full_mask());
  REQUIRE(configs.size() == 4);
  CHECK(configs[0].values() == std::vector<int>{0, 0});
  CHECK(configs[1].values() == std::vector<int>{0, 1});
  CHECK(configs[2].values() == std::vector<int>{1, 0});
  CHECK(configs[3].values() == std::vector<int>{1, 1});
}

TEST_CASE("enumerate: mixed cardinalities multiply") {
  ConfigSpace sp({"a", "b"}, {2, 3});
  CHECK(enumerate_configs(sp, sp.full_mask()).size() == 6);
  CHECK(sp.total_configs() == 6);
  CHECK_THROWS_AS(enumerate_configs(sp, site_bit(5)), DomainError);
}

TEST_CASE("restrict: identity, empty, componentwise") {
  ConfigSpace sp({"a", "b", "c"}, {2, 2, 3});
  const Configuration x(sp, sp.full_mask(), {1, 0, 2});
  CHECK(restrict_to(x, sp.full_mask()) == x);
  CHECK(restrict_to(x, 0) == Configuration());
  const auto r = restrict_to(x, site_bit(0) | site_bit(2));
  CHECK(r.values() == std::vector<int>{1, 2});
  CHECK(r.at(0) == 1);
  CHECK(r.at(2) == 2);
  CHECK_THROWS_AS(r.at(1), DomainError);
  const Configuration partial(sp, site_bit(1), {1});
  CHECK_THROWS_AS(restrict_to(partial, site_bit(0)), DomainError);
}

TEST_CASE("concat: empty neutral element, disjoint union, overlap rejected") {
  ConfigSpace sp({"a", "b"}, {2, 2});
  const Configuration xa(sp, site_bit(0), {1});
  const Configuration xb(sp, site_bit(1), {0});
  CHECK(concat(xa, Configuration()) == xa);
  CHECK(concat(Configuration(), xa) == xa);
  const auto joined = concat(xa, xb);
  CHECK(joined.values() == std::vector<int>{1, 0});
  CHECK(concat(xb, xa) == joined);  // order of operands does not matter
  CHECK_THROWS_AS(concat(xa, xa), DomainError);
}

TEST_CASE("restriction inverts concatenation on both parts") {
  ConfigSpace sp({"a", "b", "c", "d"}, {2, 3, 2, 2});
  const SiteMask v = site_bit(0) | site_bit(2);
  const SiteMask i = site_bit(1) | site_bit(3);
  for (const auto& x : enumerate_configs(sp, v))
    for (const auto& y : enumerate_configs(sp, i)) {
      const auto joined = concat(x, y);
      CHECK(restrict_to(joined, v) == x);
      CHECK(restrict_to(joined, i) == y);
    }
}

TEST_CASE("enumeration has no duplicates, the declared length, and is stable") {
  ConfigSpace sp({"a", "b", "c", "d"}, {2, 3, 2, 2});
  for (SiteMask domain = 0; domain <= sp.full_mask(); ++domain) {
    const auto configs = enumerate_configs(sp, domain);
    CHECK(configs.size() == sp.config_count(domain));
    std::set<std::vector<int>> seen;
    for (const auto& c : configs) seen.insert(c.values());
    CHECK(seen.size() == configs.size());
    CHECK(enumerate_configs(sp, domain) == configs);
  }
}

TEST_CASE("index arithmetic agrees with the enumeration") {
  ConfigSpace sp({"a", "b", "c"}, {2, 3, 2});
  for (SiteMask domain = 0; domain <= sp.full_mask(); ++domain) {
    for_each_config(sp, domain, [&](std::uint64_t idx, std::span<const int> values) {
      CHECK(sp.index_of(domain, values) == idx);
      CHECK(sp.values_at(domain, idx) == std::vector<int>(values.begin(), values.end()));
    });
  }
  // split/join against the canonical complement enumeration
  std::vector<int> full(3);
  for (std::uint64_t idx = 0; idx < sp.total_configs(); ++idx) {
    sp.scatter_index(sp.full_mask(), idx, std::span<int>(full));
    for (std::size_t t = 0; t < 3; ++t) {
      const auto [state, rest] = sp.split_site(t, idx);
      CHECK(state == full[t]);
      CHECK(rest == sp.project_index(sp.complement(site_bit(t)), full));
      CHECK(sp.join_site(t, state, rest) == idx);
    }
  }
}
