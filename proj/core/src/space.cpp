#include "finfield/space.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

namespace finfield {

std::vector<std::size_t> mask_sites(SiteMask m) {
  std::vector<std::size_t> out;
  out.reserve(mask_size(m));
  while (m) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

std::uint64_t ConfigSpace::max_configs() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("FINFIELD_MAX_CONFIGS")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 24;
  }();
  return cap;
}

ConfigSpace::ConfigSpace(std::vector<std::string> sites, std::vector<int> cardinalities)
    : sites_(std::move(sites)), cards_(std::move(cardinalities)) {
  if (sites_.empty()) throw DomainError("configuration space needs at least one site");
  if (sites_.size() != cards_.size())
    throw DomainError("site and cardinality counts differ");
  if (sites_.size() > 64) throw DomainError("at most 64 sites are supported");
  std::unordered_set<std::string_view> seen;
  for (const auto& s : sites_) {
    if (s.empty()) throw DomainError("empty site name");
    if (!seen.insert(s).second) throw DomainError("duplicate site name: " + s);
  }
  const std::uint64_t cap = max_configs();
  for (const int c : cards_) {
    if (c < 1) throw DomainError("site cardinality must be at least 1");
    if (total_ > cap / static_cast<std::uint64_t>(c))
      throw CapacityError("configuration count exceeds the cap of " + std::to_string(cap) +
                          " (override with FINFIELD_MAX_CONFIGS)");
    total_ *= static_cast<std::uint64_t>(c);
  }
  strides_.assign(cards_.size(), 1);
  for (std::size_t i = cards_.size() - 1; i-- > 0;)
    strides_[i] = strides_[i + 1] * static_cast<std::uint64_t>(cards_[i + 1]);
}

std::optional<std::size_t> ConfigSpace::find_site(std::string_view name) const {
  for (std::size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i] == name) return i;
  return std::nullopt;
}

std::size_t ConfigSpace::site_index(std::string_view name) const {
  if (auto i = find_site(name)) return *i;
  throw DomainError("unknown site: " + std::string(name));
}

void ConfigSpace::require_subset(SiteMask m) const {
  if ((m & ~full_mask()) != 0) throw DomainError("site subset refers to unknown sites");
}

std::uint64_t ConfigSpace::config_count(SiteMask domain) const {
  require_subset(domain);
  std::uint64_t count = 1;
  for (SiteMask m = domain; m; m &= m - 1)
    count *= static_cast<std::uint64_t>(cards_[std::countr_zero(m)]);
  return count;
}

std::uint64_t ConfigSpace::index_of(SiteMask domain, std::span<const int> values) const {
  require_subset(domain);
  if (values.size() != mask_size(domain))
    throw DomainError("value count does not match the domain size");
  std::uint64_t idx = 0;
  std::size_t pos = 0;
  for (SiteMask m = domain; m; m &= m - 1, ++pos) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    const int v = values[pos];
    if (v < 0 || v >= cards_[i])
      throw DomainError("state " + std::to_string(v) + " out of range at site " + sites_[i]);
    idx = idx * static_cast<std::uint64_t>(cards_[i]) + static_cast<std::uint64_t>(v);
  }
  return idx;
}

std::vector<int> ConfigSpace::values_at(SiteMask domain, std::uint64_t index) const {
  require_subset(domain);
  std::vector<int> out(mask_size(domain), 0);
  const auto sites = mask_sites(domain);
  for (std::size_t pos = sites.size(); pos-- > 0;) {
    const int c = cards_[sites[pos]];
    out[pos] = static_cast<int>(index % static_cast<std::uint64_t>(c));
    index /= static_cast<std::uint64_t>(c);
  }
  if (index != 0) throw DomainError("configuration index out of range");
  return out;
}

void ConfigSpace::scatter_index(SiteMask domain, std::uint64_t index, std::span<int> full) const {
  require_subset(domain);
  if (full.size() != site_count()) throw DomainError("full value array has wrong length");
  for (std::size_t i = site_count(); i-- > 0;) {
    if (!mask_contains(domain, i)) continue;
    const int c = cards_[i];
    full[i] = static_cast<int>(index % static_cast<std::uint64_t>(c));
    index /= static_cast<std::uint64_t>(c);
  }
  if (index != 0) throw DomainError("configuration index out of range");
}

std::uint64_t ConfigSpace::project_index(SiteMask domain, std::span<const int> full) const {
  std::uint64_t idx = 0;
  for (SiteMask m = domain; m; m &= m - 1) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    idx = idx * static_cast<std::uint64_t>(cards_[i]) + static_cast<std::uint64_t>(full[i]);
  }
  return idx;
}

std::pair<int, std::uint64_t> ConfigSpace::split_site(std::size_t t, std::uint64_t full_index) const {
  const std::uint64_t s = strides_[t];
  const std::uint64_t c = static_cast<std::uint64_t>(cards_[t]);
  const int state = static_cast<int>((full_index / s) % c);
  const std::uint64_t rest = (full_index / (s * c)) * s + full_index % s;
  return {state, rest};
}

std::uint64_t ConfigSpace::join_site(std::size_t t, int state, std::uint64_t rest_index) const {
  const std::uint64_t s = strides_[t];
  const std::uint64_t c = static_cast<std::uint64_t>(cards_[t]);
  return (rest_index / s) * (s * c) + static_cast<std::uint64_t>(state) * s + rest_index % s;
}

Configuration::Configuration(const ConfigSpace& space, SiteMask domain, std::vector<int> values)
    : domain_(domain), values_(std::move(values)) {
  space.require_subset(domain_);
  if (values_.size() != mask_size(domain_))
    throw DomainError("value count does not match the domain size");
  std::size_t pos = 0;
  for (SiteMask m = domain_; m; m &= m - 1, ++pos) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    if (values_[pos] < 0 || values_[pos] >= space.cardinality(i))
      throw DomainError("state out of range at site " + space.site_name(i));
  }
}

int Configuration::at(std::size_t site) const {
  if (!mask_contains(domain_, site))
    throw DomainError("site index " + std::to_string(site) + " not in the configuration domain");
  const SiteMask below = domain_ & (site_bit(site) - 1);
  return values_[mask_size(below)];
}

Configuration restrict_to(const Configuration& x, SiteMask w) {
  if ((w & ~x.domain()) != 0)
    throw DomainError("restriction target is not a subset of the configuration domain");
  if (w == x.domain()) return x;
  std::vector<int> values;
  values.reserve(mask_size(w));
  std::size_t pos = 0;
  for (SiteMask m = x.domain(); m; m &= m - 1, ++pos) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    if (mask_contains(w, i)) values.push_back(x.values()[pos]);
  }
  return Configuration(Configuration::Unchecked{}, w, std::move(values));
}

Configuration concat(const Configuration& x, const Configuration& y) {
  if ((x.domain() & y.domain()) != 0)
    throw DomainError("concatenation requires disjoint domains");
  if (x.empty()) return y;
  if (y.empty()) return x;
  const SiteMask merged = x.domain() | y.domain();
  std::vector<int> values;
  values.reserve(x.values().size() + y.values().size());
  std::size_t px = 0, py = 0;
  for (SiteMask m = merged; m; m &= m - 1) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
    if (mask_contains(x.domain(), i))
      values.push_back(x.values()[px++]);
    else
      values.push_back(y.values()[py++]);
  }
  return Configuration(Configuration::Unchecked{}, merged, std::move(values));
}

std::string render_config(const ConfigSpace& space, SiteMask domain, std::uint64_t index) {
  if (domain == 0) return "(empty)";
  const auto sites = mask_sites(domain);
  const auto values = space.values_at(domain, index);
  std::string out;
  for (std::size_t pos = 0; pos < sites.size(); ++pos) {
    if (pos) out += ' ';
    out += space.site_name(sites[pos]);
    out += '=';
    out += std::to_string(values[pos]);
  }
  return out;
}

std::vector<Configuration> enumerate_configs(const ConfigSpace& space, SiteMask domain) {
  std::vector<Configuration> out;
  out.reserve(space.config_count(domain));
  for_each_config(space, domain, [&](std::uint64_t, std::span<const int> values) {
    out.emplace_back(space, domain, std::vector<int>(values.begin(), values.end()));
  });
  return out;
}

}  // namespace finfield
