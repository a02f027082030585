#include "finfield/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "finfield/numeric.hpp"
#include "finfield/rng.hpp"

namespace finfield {

namespace {

constexpr double kInvarianceTol = 1e-10;
constexpr double kWeakClamp = 1e-300;

std::vector<std::size_t> resolve_order(const ConfigSpace& sp,
                                       const std::vector<std::size_t>& order) {
  const std::size_t n = sp.site_count();
  if (order.empty()) {
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (order.size() != n) throw DomainError("enumeration must list every site exactly once");
  std::vector<bool> seen(n, false);
  for (std::size_t t : order) {
    if (t >= n || seen[t]) throw DomainError("enumeration must be a permutation of the sites");
    seen[t] = true;
  }
  return order;
}

std::vector<int> resolve_base(const ConfigSpace& sp, const std::vector<int>& base) {
  const std::size_t n = sp.site_count();
  if (base.empty()) return std::vector<int>(n, 0);
  if (base.size() != n) throw DomainError("base configuration must cover every site");
  for (std::size_t t = 0; t < n; ++t)
    if (base[t] < 0 || base[t] >= sp.cardinality(t))
      throw DomainError("base state out of range at site " + sp.site_name(t));
  return base;
}

void require_positive(const OnePointSystem& q) {
  if (q.positivity() != Positivity::positive)
    throw PositivityError("reconstruction formula needs a strictly positive system");
}

void verify_consistent(const OnePointSystem& q, double tol) {
  const ConsistencyReport rep = check_consistency_positive(q, tol);
  if (!rep.consistent) {
    const auto& w = *rep.witness;
    throw ConsistencyError("system is inconsistent (defect " +
                               std::to_string(rep.max_violation) + " at sites " +
                               q.space().site_name(w.t) + "," + q.space().site_name(w.s) + ")",
                           rep.max_violation);
  }
}

RandomField normalized_from_logs(const ConfigSpace& sp, std::vector<double>& logw,
                                 bool clamp_zeros) {
  const double lse = log_sum_exp(logw);
  std::vector<double> probs(logw.size());
  for_each_block(logw.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double p = std::exp(logw[i] - lse);
      if (clamp_zeros && p < kWeakClamp) p = 0.0;
      probs[i] = p;
    }
  });
  return RandomField(sp, std::move(probs));
}

}  // namespace

double log_weight(const OnePointSystem& q, std::span<const std::size_t> order,
                  std::span<const int> base, std::span<const int> x) {
  const ConfigSpace& sp = q.space();
  std::vector<int> vals(base.begin(), base.end());
  double lw = 0.0;
  for (const std::size_t t : order) {
    const std::uint64_t z = sp.project_index(sp.complement(site_bit(t)), vals);
    lw += std::log(q.q(t, z, x[t])) - std::log(q.q(t, z, base[t]));
    vals[t] = x[t];
  }
  return lw;
}

RandomField reconstruct_positive(const OnePointSystem& q, const std::vector<std::size_t>& order,
                                 const std::vector<int>& base, bool verify, double tol) {
  require_positive(q);
  const ConfigSpace& sp = q.space();
  const auto ord = resolve_order(sp, order);
  const auto u = resolve_base(sp, base);
  if (verify) verify_consistent(q, tol);

  const std::uint64_t total = sp.total_configs();
  std::vector<double> logw(total);
  for_each_block(total, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> x(sp.site_count());
    for (std::size_t i = lo; i < hi; ++i) {
      sp.scatter_index(sp.full_mask(), i, std::span<int>(x));
      logw[i] = log_weight(q, ord, u, x);
    }
  });
  return normalized_from_logs(sp, logw, false);
}

RandomField reconstruct_alternate(const OnePointSystem& q, const std::vector<std::size_t>& order,
                                  bool verify, double tol) {
  require_positive(q);
  const ConfigSpace& sp = q.space();
  const auto ord = resolve_order(sp, order);
  if (verify) verify_consistent(q, tol);

  const std::uint64_t total = sp.total_configs();
  std::vector<double> logp(total);
  for_each_block(total, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> x(sp.site_count());
    std::vector<int> alpha(sp.site_count());
    std::vector<double> inner(total);
    for (std::size_t i = lo; i < hi; ++i) {
      sp.scatter_index(sp.full_mask(), i, std::span<int>(x));
      for (std::uint64_t a = 0; a < total; ++a) {
        sp.scatter_index(sp.full_mask(), a, std::span<int>(alpha));
        inner[a] = log_weight(q, ord, x, alpha);
      }
      logp[i] = -log_sum_exp(inner);
    }
  });
  // the reciprocal form is already normalized up to rounding
  std::vector<double> probs(total);
  for (std::uint64_t i = 0; i < total; ++i) probs[i] = std::exp(logp[i]);
  return RandomField(sp, std::move(probs));
}

RandomField reconstruct_weak(const OnePointSystem& q, const std::vector<int>& theta,
                             const std::vector<std::size_t>& order, bool verify, double tol) {
  if (q.positivity() == Positivity::neither)
    throw PositivityError("weak reconstruction needs a weakly positive system");
  const ConfigSpace& sp = q.space();
  const std::size_t n = sp.site_count();
  const auto ord = resolve_order(sp, order);
  if (theta.size() != n) throw DomainError("one positivity point per site is required");
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pts = q.positivity_points().theta[t];
    if (std::find(pts.begin(), pts.end(), theta[t]) == pts.end())
      throw InvalidPositivityPointError("state " + std::to_string(theta[t]) +
                                        " is not a positivity point at site " +
                                        sp.site_name(t));
  }
  if (verify) {
    const ConsistencyReport rep = check_consistency_weak(q, theta, tol);
    if (!rep.consistent)
      throw ConsistencyError("system fails the weak consistency conditions (defect " +
                                 std::to_string(rep.max_violation) + ")",
                             rep.max_violation);
  }

  const std::uint64_t total = sp.total_configs();
  std::vector<double> logw(total);
  for_each_block(total, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> x(sp.site_count());
    std::vector<int> vals(sp.site_count());
    for (std::size_t i = lo; i < hi; ++i) {
      sp.scatter_index(sp.full_mask(), i, std::span<int>(x));
      std::copy(theta.begin(), theta.end(), vals.begin());
      double lw = 0.0;
      for (const std::size_t t : ord) {
        const std::uint64_t z = sp.project_index(sp.complement(site_bit(t)), vals);
        const double num = q.q(t, z, x[t]);
        const double den = q.q(t, z, theta[t]);
        if (!(den > 0.0))
          throw Error("internal: positivity point denominator vanished during reconstruction");
        if (num == 0.0) {
          lw = -std::numeric_limits<double>::infinity();
          break;
        }
        lw += std::log(num) - std::log(den);
        vals[t] = x[t];
      }
      logw[i] = lw;
    }
  });
  return normalized_from_logs(sp, logw, true);
}

InvarianceReport verify_invariance(const OnePointSystem& q, std::size_t trials,
                                   std::uint64_t seed) {
  require_positive(q);
  const ConfigSpace& sp = q.space();
  const std::size_t n = sp.site_count();
  SplitMix64 rng(seed);

  std::vector<std::vector<std::size_t>> orders;
  if (n <= 4) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    orders.push_back(perm);
    for (std::size_t k = 0; k < trials; ++k) {
      for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_below(i)]);
      orders.push_back(perm);
    }
  }

  std::vector<std::vector<int>> bases;
  bases.emplace_back(n, 0);
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<int> b(n);
    for (std::size_t t = 0; t < n; ++t)
      b[t] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sp.cardinality(t))));
    bases.push_back(std::move(b));
  }

  std::vector<std::vector<double>> results;
  results.reserve(orders.size() * bases.size());
  for (const auto& ord : orders)
    for (const auto& base : bases)
      results.push_back(reconstruct_positive(q, ord, base, /*verify=*/false).probs());

  double worst = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j)
      for (std::size_t k = 0; k < results[i].size(); ++k)
        worst = std::max(worst, std::abs(results[i][k] - results[j][k]));

  if (worst > kInvarianceTol)
    throw InvarianceError("reconstruction depends on the enumeration or base configuration "
                          "(max deviation " + std::to_string(worst) +
                          "); the system is inconsistent",
                          worst);
  return InvarianceReport{worst, results.size()};
}

}  // namespace finfield
