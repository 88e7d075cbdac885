#include "infladiff/paircorr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <unordered_set>

#include "infladiff/error.hpp"
#include "infladiff/parallel.hpp"

namespace infladiff {

const char* to_string(Provenance p) noexcept {
  return p == Provenance::Empirical ? "Empirical" : "RenormSolved";
}

double PairCorrTable::get(int i, int j, const QuadInt& z) const {
  const auto it = entries_.find(PairKey{i, j, z});
  return it == entries_.end() ? 0.0 : it->second;
}

bool PairCorrTable::contains(int i, int j, const QuadInt& z) const {
  return entries_.contains(PairKey{i, j, z});
}

void PairCorrTable::set(int i, int j, const QuadInt& z, double value) {
  entries_[PairKey{i, j, ring_.normalize(z)}] = value;
}

std::vector<PairEntry> PairCorrTable::sorted_entries() const {
  std::vector<PairEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, v] : entries_)
    out.push_back({key.i, key.j, key.z, ring_.value(key.z), v});
  std::sort(out.begin(), out.end(), [this](const PairEntry& x, const PairEntry& y) {
    if (x.i != y.i) return x.i < y.i;
    if (x.j != y.j) return x.j < y.j;
    return ring_.cmp(x.z, y.z) < 0;
  });
  return out;
}

PairCorrTable empirical_pair_corr(const TilingPatch& patch, double r, double zmax) {
  if (!(r > 0.0) || !(zmax >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "window radius must be positive and zmax non-negative");
  if (patch.radius < r + zmax)
    throw Error(ErrorCode::WindowTooSmall, "patch radius must be at least r + zmax");
  const auto [lo, hi] = patch.window(r);
  if (hi == lo) throw Error(ErrorCode::EmptyPatch, "no points in window");

  using Counts = std::array<std::unordered_map<QuadInt, std::uint64_t, QuadIntHash>, 4>;
  const std::size_t n = hi - lo;
  const std::size_t chunks = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 4096));
  std::vector<Counts> partial(chunks);
  const long double reach = static_cast<long double>(zmax);

  parallel_chunks(n, chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
    Counts& counts = partial[c];
    for (std::size_t p = lo + b; p < lo + e; ++p) {
      const TilePoint& x = patch.points[p];
      for (std::size_t q = p; q < hi && patch.values[q] - patch.values[p] <= reach; ++q) {
        const TilePoint& y = patch.points[q];
        const QuadInt z = y.position - x.position;
        ++counts[static_cast<std::size_t>(2 * x.type + y.type)][z];
        if (q != p) ++counts[static_cast<std::size_t>(2 * y.type + x.type)][-z];
      }
    }
  });

  // integer counts: the merged totals do not depend on the chunking
  Counts total = std::move(partial.front());
  for (std::size_t c = 1; c < partial.size(); ++c)
    for (std::size_t s = 0; s < 4; ++s)
      for (const auto& [z, cnt] : partial[c][s]) total[s][z] += cnt;

  PairCorrTable table(patch.ring, Provenance::Empirical, r, zmax);
  table.window_count = n;
  const double denom = static_cast<double>(n);
  for (std::size_t s = 0; s < 4; ++s)
    for (const auto& [z, cnt] : total[s])
      table.set(static_cast<int>(s / 2), static_cast<int>(s % 2), z, static_cast<double>(cnt) / denom);
  return table;
}

std::int64_t RenormSystem::total_multiplicity() const {
  std::int64_t total = 0;
  for (const auto& row : terms)
    for (const auto& eq : row)
      for (const auto& t : eq) total += t.multiplicity;
  return total;
}

RenormSystem derive_renorm_system(std::int64_t m) {
  const Ring ring(m);
  const DisplacementSets t = displacement_sets(ring);
  RenormSystem sys{ring, {}, ring.make(m - 1, 1)};

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // a type-i point at lambda*p + x (p of type k) and a type-j point at
      // lambda*q + y (q of type l) are at distance z iff q - p = (z + x - y)/lambda
      std::vector<RenormTerm> collected;
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          for (const QuadInt& x : t[i][k]) {
            for (const QuadInt& y : t[j][l]) {
              const QuadInt shift = ring.normalize(x - y);
              auto it = std::find_if(collected.begin(), collected.end(), [&](const RenormTerm& term) {
                return term.k == k && term.l == l && term.shift == shift;
              });
              if (it == collected.end()) {
                collected.push_back({k, l, shift, 1});
              } else {
                ++it->multiplicity;
              }
            }
          }
        }
      }
      std::sort(collected.begin(), collected.end(), [&](const RenormTerm& a, const RenormTerm& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.l != b.l) return a.l < b.l;
        return ring.cmp(a.shift, b.shift) < 0;
      });
      sys.terms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(collected);
    }
  }
  return sys;
}

double renorm_rhs(const PairCorrTable& table, const RenormSystem& system, int i, int j, const QuadInt& z) {
  const Ring& ring = system.ring;
  double sum = 0.0;
  for (const RenormTerm& t : system.terms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
    const auto arg = ring.div_lambda(z + t.shift);
    if (!arg) continue;
    sum += static_cast<double>(t.multiplicity) * table.get(t.k, t.l, *arg);
  }
  return sum / ring.lambda_plus();
}

ResidualStats check_renorm_residuals(const PairCorrTable& table, const RenormSystem& system,
                                     double zcheck) {
  if (table.m() != system.m())
    throw Error(ErrorCode::InvalidArgument, "table and system belong to different m");
  const Ring& ring = system.ring;
  const double lam = ring.lambda_plus();
  const double reach = ring.value(system.max_shift);
  const double admissible = lam * table.zmax() - reach;
  if (admissible <= 0.0)
    throw Error(ErrorCode::InsufficientWindow, "table zmax too small for any renormalisation check");
  if (zcheck <= 0.0) zcheck = admissible;
  if (zcheck > admissible * (1.0 + 1e-12))
    throw Error(ErrorCode::InsufficientWindow, "zcheck exceeds lambda*zmax - (lambda+m-1)");

  std::unordered_set<QuadInt, QuadIntHash> zs;
  for (const auto& [key, v] : table.entries())
    if (std::abs(ring.value(key.z)) <= zcheck) zs.insert(key.z);
  std::vector<QuadInt> ordered(zs.begin(), zs.end());
  std::sort(ordered.begin(), ordered.end(), [&](const QuadInt& a, const QuadInt& b) { return ring.cmp(a, b) < 0; });

  ResidualStats stats;
  stats.zcheck = zcheck;
  double sum = 0.0;
  for (const QuadInt& z : ordered) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double res = std::abs(table.get(i, j, z) - renorm_rhs(table, system, i, j, z));
        stats.max = std::max(stats.max, res);
        sum += res;
        ++stats.tested;
      }
    }
  }
  stats.mean = stats.tested ? sum / static_cast<double>(stats.tested) : 0.0;
  return stats;
}

namespace {

using KeySet = std::unordered_set<PairKey, PairKeyHash>;

KeySet support_of(const PairCorrTable& table) {
  KeySet keys;
  for (const auto& [key, v] : table.entries()) keys.insert(key);
  return keys;
}

// Difference sets from successively larger patches until one rho^2 step adds
// nothing within |z| <= rmax.
KeySet enumerate_supports(std::int64_t m, double rmax, double min_radius, SolveInfo& info) {
  TilingPatch patch = generate_patch_with_radius(m, min_radius + rmax);
  KeySet current = support_of(empirical_pair_corr(patch, patch.radius - rmax, rmax));
  for (int extra = 0; extra < 6; ++extra) {
    TilingPatch bigger = generate_patch(m, patch.iterations + 1);
    KeySet next = support_of(empirical_pair_corr(bigger, bigger.radius - rmax, rmax));
    const bool stable = next.size() == current.size();
    patch = std::move(bigger);
    current = std::move(next);
    if (stable) break;
  }
  info.support_patch_iterations = patch.iterations;
  info.support_patch_radius = patch.radius;
  info.support_size = current.size();
  return current;
}

}  // namespace

PairCorrTable solve_renorm(std::int64_t m, double rmax, const SolveOptions& options) {
  const Ring ring(m);
  const double lam = ring.lambda_plus();
  const QuadInt core_radius = ring.make(1, 1);
  if (!(rmax >= ring.value(core_radius)))
    throw Error(ErrorCode::InvalidArgument, "rmax must be at least lambda + 1");
  const RenormSystem sys = derive_renorm_system(m);

  SolveInfo info;
  const double min_radius = options.support_radius > 0.0 ? options.support_radius
                                                         : std::max(4.0 * lam * rmax, 64.0);
  const KeySet support = enumerate_supports(m, rmax, min_radius, info);

  // Variables on the core |z| <= lambda + 1. For z in the core every argument
  // (z + shift)/lambda is again in the core, because
  // (lambda + 1 + lambda + m - 1)/lambda = lambda + 1.
  std::vector<PairKey> core;
  for (const PairKey& k : support)
    if (ring.cmp(ring.abs(k.z), core_radius) <= 0) core.push_back(k);
  std::sort(core.begin(), core.end(), [&](const PairKey& a, const PairKey& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return ring.cmp(a.z, b.z) < 0;
  });
  std::unordered_map<PairKey, Eigen::Index, PairKeyHash> index;
  for (std::size_t v = 0; v < core.size(); ++v) index[core[v]] = static_cast<Eigen::Index>(v);
  const auto n = static_cast<Eigen::Index>(core.size());
  info.core_size = core.size();

  const PairKey zero00{0, 0, QuadInt{}};
  const PairKey zero11{1, 1, QuadInt{}};
  if (!index.contains(zero00) || !index.contains(zero11))
    throw Error(ErrorCode::DegenerateKernel, "support does not contain nu_00(0) and nu_11(0)");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const PairKey& key = core[static_cast<std::size_t>(v)];
    for (const RenormTerm& t : sys.terms[static_cast<std::size_t>(key.i)][static_cast<std::size_t>(key.j)]) {
      const auto arg = ring.div_lambda(key.z + t.shift);
      if (!arg) continue;
      const auto it = index.find(PairKey{t.k, t.l, *arg});
      // arguments off the support are pinned to zero
      if (it == index.end()) continue;
      a(v, it->second) += static_cast<double>(t.multiplicity) / lam;
    }
  }

  const Eigen::MatrixXd shifted = a - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
  lu.setThreshold(1e-9);
  info.kernel_dimension = static_cast<std::size_t>(n - lu.rank());
  if (info.kernel_dimension != 1)
    throw Error(ErrorCode::DegenerateKernel,
                "kernel of (A - I) has dimension " + std::to_string(info.kernel_dimension));

  // (A - I) with the normalisation row nu_00(0) + nu_11(0) = 1 appended
  Eigen::MatrixXd augmented(n + 1, n);
  augmented.topRows(n) = shifted;
  augmented.row(n).setZero();
  augmented(n, index[zero00]) = 1.0;
  augmented(n, index[zero11]) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  const Eigen::VectorXd sol = augmented.colPivHouseholderQr().solve(rhs);
  info.elimination_residual = (augmented * sol - rhs).cwiseAbs().maxCoeff();

  // cross-check: lazy power iteration v <- (v + A v)/2 with the same normalisation
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (std::size_t it = 0; it < 200000; ++it) {
    Eigen::VectorXd next = 0.5 * (v + a * v);
    next /= next(index[zero00]) + next(index[zero11]);
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    info.power_iterations = it + 1;
    if (change < 1e-15) break;
  }
  info.power_iteration_deviation = (v - sol).cwiseAbs().maxCoeff();

  // Extend by recursion; outside the core |(z + shift)/lambda| < |z|. All
  // values are evaluated at a canonical representative so that
  // nu_ij(z) = nu_ji(-z) holds bitwise.
  auto canonical = [&](PairKey k) {
    if (k.i > k.j || (k.i == k.j && ring.sign(k.z) < 0)) return PairKey{k.j, k.i, -k.z};
    return k;
  };
  std::unordered_map<PairKey, double, PairKeyHash> memo;
  std::function<double(const PairKey&)> nu = [&](const PairKey& raw) -> double {
    if (!support.contains(raw)) return 0.0;
    const PairKey key = canonical(raw);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double value = 0.0;
    if (auto it = index.find(key); it != index.end()) {
      value = sol(it->second);
    } else {
      for (const RenormTerm& t : sys.terms[static_cast<std::size_t>(key.i)][static_cast<std::size_t>(key.j)]) {
        const auto arg = ring.div_lambda(key.z + t.shift);
        if (!arg) continue;
        value += static_cast<double>(t.multiplicity) * nu(PairKey{t.k, t.l, *arg});
      }
      value /= lam;
    }
    memo.emplace(key, value);
    return value;
  };

  PairCorrTable table(ring, Provenance::RenormSolved, rmax, rmax);
  info.min_support_value = std::numeric_limits<double>::infinity();
  for (const PairKey& key : support) {
    const double value = nu(key);
    info.min_support_value = std::min(info.min_support_value, value);
    table.set(key.i, key.j, key.z, value);
  }
  table.solve_info = info;
  return table;
}

double max_abs_deviation(const PairCorrTable& a, const PairCorrTable& b, double zlim) {
  if (a.m() != b.m()) throw Error(ErrorCode::InvalidArgument, "tables belong to different m");
  const Ring& ring = a.ring();
  double dev = 0.0;
  for (const auto* t : {&a, &b})
    for (const auto& [key, v] : t->entries())
      if (std::abs(ring.value(key.z)) <= zlim)
        dev = std::max(dev, std::abs(a.get(key.i, key.j, key.z) - b.get(key.i, key.j, key.z)));
  return dev;
}

}  // namespace infladiff
