#include "finfield/onepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finfield/numeric.hpp"

namespace finfield {

std::string_view to_string(Positivity p) {
  switch (p) {
    case Positivity::positive: return "positive";
    case Positivity::weakly_positive: return "weakly-positive";
    case Positivity::neither: return "neither";
  }
  return "?";
}

namespace {

constexpr double kRowSumSlack = 1e-6;
constexpr double kRowSumExact = 1e-12;

void normalize_row(std::span<double> row, std::size_t t, std::uint64_t z) {
  for (double v : row) {
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError("one-point table entry must be finite and non-negative (site index " +
                        std::to_string(t) + ", boundary " + std::to_string(z) + ")");
  }
  const double sum = stable_sum(std::span<const double>(row.data(), row.size()));
  if (std::abs(sum - 1.0) > kRowSumSlack)
    throw DomainError("one-point distribution does not sum to one (site index " +
                      std::to_string(t) + ", boundary " + std::to_string(z) + ", sum " +
                      std::to_string(sum) + ")");
  if (std::abs(sum - 1.0) > kRowSumExact)
    for (double& v : row) v /= sum;
}

}  // namespace

OnePointSystem::OnePointSystem(ConfigSpace space, std::vector<std::vector<double>> tables)
    : space_(std::move(space)), tables_(std::move(tables)) {
  const std::size_t n = space_.site_count();
  if (tables_.size() != n) throw DomainError("one table per site is required");
  bool positive = true;
  points_.theta.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto c = static_cast<std::uint64_t>(space_.cardinality(t));
    const std::uint64_t zc = boundary_count(t);
    if (tables_[t].size() != zc * c)
      throw DomainError("table size mismatch at site " + space_.site_name(t));
    for (std::uint64_t z = 0; z < zc; ++z)
      normalize_row(std::span<double>(tables_[t]).subspan(z * c, c), t, z);
    for (int x = 0; x < space_.cardinality(t); ++x) {
      bool always = true;
      for (std::uint64_t z = 0; z < zc; ++z) {
        if (!(q(t, z, x) > 0.0)) {
          always = false;
          positive = false;
        }
      }
      if (always) points_.theta[t].push_back(x);
    }
  }
  positivity_ = positive                 ? Positivity::positive
                : points_.all_nonempty() ? Positivity::weakly_positive
                                         : Positivity::neither;
}

namespace {

// Boundary indices over the complement of t for every state w at s, with the
// pair-complement configuration already scattered into `full`.
void boundary_row(const ConfigSpace& sp, std::size_t t, std::size_t s, std::span<int> full,
                  std::vector<std::uint64_t>& out) {
  const SiteMask bmask = sp.complement(site_bit(t));
  out.resize(static_cast<std::size_t>(sp.cardinality(s)));
  for (int w = 0; w < sp.cardinality(s); ++w) {
    full[s] = w;
    out[static_cast<std::size_t>(w)] = sp.project_index(bmask, full);
  }
}

struct PairSweep {
  const OnePointSystem& q;
  const ConfigSpace& sp;
  std::vector<int> full;
  std::vector<std::uint64_t> zt;  // boundary of t, indexed by the state at s
  std::vector<std::uint64_t> zs;  // boundary of s, indexed by the state at t

  explicit PairSweep(const OnePointSystem& sys)
      : q(sys), sp(sys.space()), full(sys.space().site_count(), 0) {}

  void load(std::size_t t, std::size_t s) {
    boundary_row(sp, t, s, full, zt);
    boundary_row(sp, s, t, full, zs);
  }
};

double log_defect(const PairSweep& w, std::size_t t, std::size_t s, int x, int u, int y, int v) {
  const auto lq = [&](std::size_t site, std::uint64_t z, int state) {
    return std::log(w.q.q(site, z, state));
  };
  const double lhs = lq(t, w.zt[y], x) + lq(s, w.zs[x], v) + lq(t, w.zt[v], u) + lq(s, w.zs[u], y);
  const double rhs = lq(t, w.zt[y], u) + lq(s, w.zs[u], v) + lq(t, w.zt[v], x) + lq(s, w.zs[x], y);
  return lhs - rhs;
}

}  // namespace

ConsistencyReport check_consistency_positive(const OnePointSystem& q, double tol) {
  if (q.positivity() != Positivity::positive)
    throw PositivityError(
        "pair consistency in log space needs a strictly positive system; "
        "use the weak-positivity check instead");
  const ConfigSpace& sp = q.space();
  const std::size_t n = sp.site_count();
  ConsistencyReport report;
  report.tol = tol;

  PairSweep sweep(q);
  bool degenerate_checked = false;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t s = t + 1; s < n; ++s) {
      const SiteMask pair_mask = site_bit(t) | site_bit(s);
      const SiteMask zdomain = sp.complement(pair_mask);
      const int ct = sp.cardinality(t);
      const int cs = sp.cardinality(s);
      for_each_config_inplace(sp, zdomain, std::span<int>(sweep.full), [&](std::uint64_t zi) {
        sweep.load(t, s);
        if (!degenerate_checked) {
          // the x=u and y=v slices hold identically; checked once, then skipped
          const double diag_x = log_defect(sweep, t, s, 0, 0, 0, cs - 1);
          const double diag_y = log_defect(sweep, t, s, 0, ct - 1, 0, 0);
          const double swapped =
              log_defect(sweep, t, s, 0, ct - 1, 0, cs - 1);
          PairSweep mirror(q);
          sp.scatter_index(zdomain, zi, std::span<int>(mirror.full));
          mirror.load(s, t);
          const double mirrored = log_defect(mirror, s, t, 0, cs - 1, 0, ct - 1);
          if (diag_x != 0.0 || std::abs(diag_y) > 1e-12 || std::abs(swapped + mirrored) > 1e-12)
            throw Error("internal: degenerate or mirrored pair identity violated");
          degenerate_checked = true;
        }
        for (int x = 0; x < ct; ++x)
          for (int u = 0; u < ct; ++u) {
            if (x == u) continue;
            for (int y = 0; y < cs; ++y)
              for (int v = 0; v < cs; ++v) {
                if (y == v) continue;
                const double d = std::abs(log_defect(sweep, t, s, x, u, y, v));
                if (d > report.max_violation) {
                  report.max_violation = d;
                  report.witness = ConsistencyWitness{t, s, x, u, y, v, zi};
                }
              }
          }
      });
    }
  }
  report.consistent = report.max_violation <= tol;
  return report;
}

ConsistencyReport check_consistency_weak(const OnePointSystem& q, const std::vector<int>& theta,
                                         double tol) {
  if (q.positivity() == Positivity::neither)
    throw PositivityError("weak consistency check needs a weakly positive system");
  const ConfigSpace& sp = q.space();
  const std::size_t n = sp.site_count();
  if (theta.size() != n) throw DomainError("one positivity point per site is required");
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pts = q.positivity_points().theta[t];
    if (std::find(pts.begin(), pts.end(), theta[t]) == pts.end())
      throw InvalidPositivityPointError("state " + std::to_string(theta[t]) +
                                        " is not a positivity point at site " + sp.site_name(t));
  }

  ConsistencyReport report;
  report.tol = tol;
  PairSweep sweep(q);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t s = t + 1; s < n; ++s) {
      const SiteMask zdomain = sp.complement(site_bit(t) | site_bit(s));
      const int tht = theta[t];
      const int ths = theta[s];
      for_each_config_inplace(sp, zdomain, std::span<int>(sweep.full), [&](std::uint64_t zi) {
        sweep.load(t, s);
        for (int x = 0; x < sp.cardinality(t); ++x)
          for (int y = 0; y < sp.cardinality(s); ++y) {
            const double lhs = sweep.q.q(t, sweep.zt[y], x) * sweep.q.q(s, sweep.zs[x], ths) *
                               sweep.q.q(t, sweep.zt[ths], tht) * sweep.q.q(s, sweep.zs[tht], y);
            const double rhs = sweep.q.q(s, sweep.zs[x], y) * sweep.q.q(t, sweep.zt[y], tht) *
                               sweep.q.q(s, sweep.zs[tht], ths) * sweep.q.q(t, sweep.zt[ths], x);
            const double scale = std::max({lhs, rhs, 1e-300});
            const double d = std::abs(lhs - rhs) / scale;
            if (d > report.max_violation) {
              report.max_violation = d;
              report.witness = ConsistencyWitness{t, s, x, tht, y, ths, zi};
            }
          }
      });
    }
  }
  report.consistent = report.max_violation <= tol;
  return report;
}

PositivityPointSet find_positivity_points(const OnePointSystem& q) {
  return q.positivity_points();
}

std::optional<int> vacuum_state(const OnePointSystem& q) {
  const ConfigSpace& sp = q.space();
  for (std::size_t t = 1; t < sp.site_count(); ++t)
    if (sp.cardinality(t) != sp.cardinality(0))
      throw DomainError("vacuum detection needs a shared state space across sites");
  for (int state = 0; state < sp.cardinality(0); ++state) {
    bool shared = true;
    for (const auto& pts : q.positivity_points().theta) {
      if (std::find(pts.begin(), pts.end(), state) == pts.end()) {
        shared = false;
        break;
      }
    }
    if (shared) return state;
  }
  return std::nullopt;
}

std::vector<int> default_positivity_points(const OnePointSystem& q) {
  std::vector<int> theta;
  theta.reserve(q.site_count());
  for (std::size_t t = 0; t < q.site_count(); ++t) {
    const auto& pts = q.positivity_points().theta[t];
    if (pts.empty())
      throw PositivityError("no positivity point at site " + q.space().site_name(t));
    theta.push_back(pts.front());
  }
  return theta;
}

std::array<FactorRef, 8> witness_factors(const OnePointSystem& q, const ConsistencyWitness& w) {
  const ConfigSpace& sp = q.space();
  std::vector<int> full(sp.site_count(), 0);
  const SiteMask zdomain = sp.complement(site_bit(w.t) | site_bit(w.s));
  sp.scatter_index(zdomain, w.z, std::span<int>(full));
  std::vector<std::uint64_t> zt, zs;
  boundary_row(sp, w.t, w.s, std::span<int>(full), zt);
  boundary_row(sp, w.s, w.t, std::span<int>(full), zs);
  return {FactorRef{w.t, zt[w.y], w.x}, FactorRef{w.s, zs[w.x], w.v},
          FactorRef{w.t, zt[w.v], w.u}, FactorRef{w.s, zs[w.u], w.y},
          FactorRef{w.t, zt[w.y], w.u}, FactorRef{w.s, zs[w.u], w.v},
          FactorRef{w.t, zt[w.v], w.x}, FactorRef{w.s, zs[w.x], w.y}};
}

}  // namespace finfield
