#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finfield/errors.hpp"

namespace finfield {

// Subsets of the site set, encoded as bitmasks over the site order.
using SiteMask = std::uint64_t;

constexpr SiteMask site_bit(std::size_t i) { return SiteMask{1} << i; }
constexpr bool mask_contains(SiteMask m, std::size_t i) { return (m >> i) & 1u; }
inline std::size_t mask_size(SiteMask m) { return static_cast<std::size_t>(std::popcount(m)); }
std::vector<std::size_t> mask_sites(SiteMask m);  // ascending site indices

// Finite site set with a per-site state count. States are integer indices
// 0..cardinality-1; any labeling (spins, letters) is a presentation concern.
//
// Configurations on a subset V are enumerated in a fixed lexicographic order:
// sites in ascending site order, the value of the last site varying fastest.
// That order is part of the interchange format and must not change.
class ConfigSpace {
 public:
  ConfigSpace(std::vector<std::string> sites, std::vector<int> cardinalities);

  std::size_t site_count() const { return cards_.size(); }
  const std::vector<std::string>& site_names() const { return sites_; }
  const std::string& site_name(std::size_t i) const { return sites_[i]; }
  int cardinality(std::size_t i) const { return cards_[i]; }
  const std::vector<int>& cardinalities() const { return cards_; }

  std::size_t site_index(std::string_view name) const;  // DomainError if unknown
  std::optional<std::size_t> find_site(std::string_view name) const;

  SiteMask full_mask() const {
    return site_count() == 64 ? ~SiteMask{0} : (SiteMask{1} << site_count()) - 1;
  }
  SiteMask complement(SiteMask m) const { return full_mask() & ~m; }
  void require_subset(SiteMask m) const;  // DomainError on bits outside the site set

  std::uint64_t config_count(SiteMask domain) const;
  std::uint64_t total_configs() const { return total_; }

  // Mixed-radix index over `domain` of values listed in ascending site order.
  std::uint64_t index_of(SiteMask domain, std::span<const int> values) const;
  std::vector<int> values_at(SiteMask domain, std::uint64_t index) const;

  // Writes the decoded values into the domain positions of a full-length
  // array; other positions are untouched.
  void scatter_index(SiteMask domain, std::uint64_t index, std::span<int> full) const;
  // Index over `domain` read off a full-length value array.
  std::uint64_t project_index(SiteMask domain, std::span<const int> full) const;

  // Stride of site t in the full enumeration: prod of cardinalities after t.
  std::uint64_t site_stride(std::size_t t) const { return strides_[t]; }
  // Splits a full-space index into (state at t, index over the complement).
  std::pair<int, std::uint64_t> split_site(std::size_t t, std::uint64_t full_index) const;
  std::uint64_t join_site(std::size_t t, int state, std::uint64_t rest_index) const;

  // Dense-enumeration cap; FINFIELD_MAX_CONFIGS overrides the default 2^24.
  static std::uint64_t max_configs();

  friend bool operator==(const ConfigSpace&, const ConfigSpace&) = default;

 private:
  std::vector<std::string> sites_;
  std::vector<int> cards_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t total_ = 1;
};

// A configuration on a subset of sites; values in ascending site order.
// The empty configuration (no sites) is a valid value.
class Configuration {
 public:
  Configuration() = default;
  Configuration(const ConfigSpace& space, SiteMask domain, std::vector<int> values);

  SiteMask domain() const { return domain_; }
  const std::vector<int>& values() const { return values_; }
  bool empty() const { return domain_ == 0; }
  int at(std::size_t site) const;  // DomainError if site is not in the domain

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  struct Unchecked {};
  Configuration(Unchecked, SiteMask domain, std::vector<int> values)
      : domain_(domain), values_(std::move(values)) {}
  friend Configuration restrict_to(const Configuration&, SiteMask);
  friend Configuration concat(const Configuration&, const Configuration&);

  SiteMask domain_ = 0;
  std::vector<int> values_;
};

// Restriction of x to w; requires w to be a subset of x's domain.
Configuration restrict_to(const Configuration& x, SiteMask w);

// Concatenation of configurations with disjoint domains. Concatenating with
// the empty configuration returns the other operand unchanged.
Configuration concat(const Configuration& x, const Configuration& y);

// All configurations on `domain` in canonical order.
std::vector<Configuration> enumerate_configs(const ConfigSpace& space, SiteMask domain);

// "a=1 c=0" style rendering of the configuration at `index` over `domain`.
std::string render_config(const ConfigSpace& space, SiteMask domain, std::uint64_t index);

// Iterates the canonical enumeration of `domain` without materializing it.
// fn(index, values) with values in ascending site order.
template <typename Fn>
void for_each_config(const ConfigSpace& space, SiteMask domain, Fn&& fn) {
  space.require_subset(domain);
  const auto sites = mask_sites(domain);
  std::vector<int> values(sites.size(), 0);
  const std::uint64_t count = space.config_count(domain);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    fn(idx, std::span<const int>(values));
    for (std::size_t pos = sites.size(); pos-- > 0;) {
      if (++values[pos] < space.cardinality(sites[pos])) break;
      values[pos] = 0;
    }
  }
}

// Same sweep, but stepping the domain positions of a caller-owned full-length
// value array in place (other positions are preserved). fn(index_over_domain).
template <typename Fn>
void for_each_config_inplace(const ConfigSpace& space, SiteMask domain, std::span<int> full,
                             Fn&& fn) {
  space.require_subset(domain);
  const auto sites = mask_sites(domain);
  for (std::size_t s : sites) full[s] = 0;
  const std::uint64_t count = space.config_count(domain);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    fn(idx);
    for (std::size_t pos = sites.size(); pos-- > 0;) {
      if (++full[sites[pos]] < space.cardinality(sites[pos])) break;
      full[sites[pos]] = 0;
    }
  }
}

}  // namespace finfield
