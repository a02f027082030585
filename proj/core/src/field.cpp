#include "finfield/field.hpp"

#include <cmath>

#include "finfield/numeric.hpp"

namespace finfield {

namespace {
constexpr double kSumSlack = 1e-6;
constexpr double kSumExact = 1e-12;
}  // namespace

RandomField::RandomField(ConfigSpace space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (probs_.size() != space_.total_configs())
    throw DomainError("probability table size does not match the configuration count");
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw DomainError("probabilities must be finite and non-negative");
  }
  const double sum = deterministic_sum(probs_);
  if (std::abs(sum - 1.0) > kSumSlack)
    throw DomainError("probability table sums to " + std::to_string(sum) +
                      ", too far from one to renormalize");
  if (std::abs(sum - 1.0) > kSumExact)
    for (double& p : probs_) p /= sum;

  const std::size_t n = space_.site_count();
  bool positive = true;
  positivity_.points.theta.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (int x = 0; x < space_.cardinality(t); ++x) {
      bool always = true;
      const std::uint64_t zcount =
          space_.total_configs() / static_cast<std::uint64_t>(space_.cardinality(t));
      for (std::uint64_t z = 0; z < zcount; ++z) {
        if (!(probs_[space_.join_site(t, x, z)] > 0.0)) {
          always = false;
          positive = false;
          break;
        }
      }
      if (always) positivity_.points.theta[t].push_back(x);
    }
  }
  positivity_.klass = positive                                   ? Positivity::positive
                      : positivity_.points.all_nonempty()        ? Positivity::weakly_positive
                                                                 : Positivity::neither;
}

double RandomField::prob(const Configuration& x) const {
  if (x.domain() != space_.full_mask())
    throw DomainError("probability lookup needs a configuration on the full site set");
  return probs_[space_.index_of(x.domain(), x.values())];
}

std::vector<double> marginal(const RandomField& p, SiteMask v) {
  const ConfigSpace& sp = p.space();
  sp.require_subset(v);
  if (v == 0) return {1.0};
  std::vector<double> out(sp.config_count(v), 0.0);
  for_each_config(sp, sp.full_mask(), [&](std::uint64_t idx, std::span<const int> values) {
    out[sp.project_index(v, values)] += p.prob(idx);
  });
  return out;
}

RandomField marginal_field(const RandomField& p, SiteMask v) {
  const ConfigSpace& sp = p.space();
  sp.require_subset(v);
  if (v == 0) throw DomainError("a field needs at least one site");
  std::vector<std::string> names;
  std::vector<int> cards;
  for (std::size_t i : mask_sites(v)) {
    names.push_back(sp.site_name(i));
    cards.push_back(sp.cardinality(i));
  }
  return RandomField(ConfigSpace(std::move(names), std::move(cards)), marginal(p, v));
}

std::vector<double> conditional(const RandomField& p, SiteMask v, const Configuration& given) {
  const ConfigSpace& sp = p.space();
  sp.require_subset(v);
  if ((v & given.domain()) != 0)
    throw DomainError("conditioning sites overlap the target sites");
  if (v == 0) return {1.0};

  std::vector<int> full(sp.site_count(), 0);
  std::size_t pos = 0;
  for (std::size_t i : mask_sites(given.domain())) full[i] = given.values()[pos++];

  const SiteMask rest = sp.complement(given.domain());
  std::vector<double> out(sp.config_count(v), 0.0);
  double denom = 0.0;
  for_each_config_inplace(sp, rest, std::span<int>(full), [&](std::uint64_t) {
    const double pr = p.prob(sp.project_index(sp.full_mask(), full));
    denom += pr;
    out[sp.project_index(v, full)] += pr;
  });
  if (denom == 0.0)
    throw NullConditionError("conditioning on a null event: " +
                             render_config(sp, given.domain(),
                                           sp.index_of(given.domain(), given.values())));
  for (double& q : out) q /= denom;
  return out;
}

OnePointSystem one_point_system(const RandomField& p) {
  const ConfigSpace& sp = p.space();
  const std::size_t n = sp.site_count();
  std::vector<std::vector<double>> tables(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto c = static_cast<std::uint64_t>(sp.cardinality(t));
    const std::uint64_t zcount = sp.total_configs() / c;
    tables[t].assign(zcount * c, 0.0);
    for (std::uint64_t idx = 0; idx < sp.total_configs(); ++idx) {
      const auto [x, z] = sp.split_site(t, idx);
      tables[t][z * c + static_cast<std::uint64_t>(x)] = p.prob(idx);
    }
    for (std::uint64_t z = 0; z < zcount; ++z) {
      const auto row = std::span<double>(tables[t]).subspan(z * c, c);
      const double denom = stable_sum(std::span<const double>(row.data(), row.size()));
      if (denom == 0.0)
        throw UndefinedConditionalError("conditional undefined at site " + sp.site_name(t) +
                                        " under boundary " +
                                        render_config(sp, sp.complement(site_bit(t)), z));
      for (double& q : row) q /= denom;
    }
  }
  return OnePointSystem(sp, std::move(tables));
}

PositivityReport classify_positivity(const RandomField& p) { return p.positivity(); }

double max_abs_difference(const RandomField& a, const RandomField& b) {
  if (a.space() != b.space()) throw DomainError("fields live on different configuration spaces");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.probs().size(); ++i)
    worst = std::max(worst, std::abs(a.probs()[i] - b.probs()[i]));
  return worst;
}

bool field_equal(const RandomField& a, const RandomField& b, double tol) {
  return max_abs_difference(a, b) <= tol;
}

}  // namespace finfield
