#pragma once

// Pair correlations nu_ij(z): the frequency of a type-j point at displacement
// z from a type-i point, normalised by the total point count.

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "infladiff/inflation.hpp"
#include "infladiff/quadint.hpp"

namespace infladiff {

enum class Provenance { Empirical, RenormSolved };

const char* to_string(Provenance p) noexcept;

struct PairKey {
  int i;
  int j;
  QuadInt z;

  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return QuadIntHash{}(k.z) * 4 + static_cast<std::size_t>(2 * k.i + k.j);
  }
};

struct PairEntry {
  int i;
  int j;
  QuadInt z;
  double z_value;
  double value;
};

/// Diagnostics of a renormalisation solve.
struct SolveInfo {
  std::size_t core_size = 0;
  std::size_t kernel_dimension = 0;
  double elimination_residual = 0.0;
  double power_iteration_deviation = 0.0;
  std::size_t power_iterations = 0;
  std::size_t support_size = 0;
  int support_patch_iterations = 0;
  double support_patch_radius = 0.0;
  double min_support_value = 0.0;
};

class PairCorrTable {
 public:
  PairCorrTable(const Ring& ring, Provenance provenance, double window_radius, double zmax)
      : ring_(ring), provenance_(provenance), window_radius_(window_radius), zmax_(zmax) {}

  const Ring& ring() const noexcept { return ring_; }
  std::int64_t m() const noexcept { return ring_.m(); }
  Provenance provenance() const noexcept { return provenance_; }
  double window_radius() const noexcept { return window_radius_; }
  double zmax() const noexcept { return zmax_; }

  /// card(Lambda_r) of the counting window (empirical tables only).
  std::size_t window_count = 0;
  std::optional<SolveInfo> solve_info;

  /// nu_ij(z); zero off the stored support.
  double get(int i, int j, const QuadInt& z) const;
  bool contains(int i, int j, const QuadInt& z) const;
  void set(int i, int j, const QuadInt& z, double value);
  std::size_t size() const noexcept { return entries_.size(); }

  const std::unordered_map<PairKey, double, PairKeyHash>& entries() const noexcept { return entries_; }
  /// Sorted by (i, j, z) with z ordered exactly.
  std::vector<PairEntry> sorted_entries() const;

 private:
  Ring ring_;
  Provenance provenance_;
  double window_radius_;
  double zmax_;
  std::unordered_map<PairKey, double, PairKeyHash> entries_;
};

/// card(Lambda^(i)_r intersect (Lambda^(j)_r - z)) / card(Lambda_r) for every
/// difference |z| <= zmax inside the window [-r, r). Requires
/// patch.radius >= r + zmax (WindowTooSmall otherwise).
PairCorrTable empirical_pair_corr(const TilingPatch& patch, double r, double zmax);

struct RenormTerm {
  int k;
  int l;
  QuadInt shift;  // the term reads nu_kl((z + shift) / lambda)
  std::int64_t multiplicity;

  friend bool operator==(const RenormTerm&, const RenormTerm&) = default;
};

/// nu_ij(z) = (1/lambda) sum over terms[i][j] of multiplicity * nu_kl((z+shift)/lambda)
struct RenormSystem {
  Ring ring;
  std::array<std::array<std::vector<RenormTerm>, 2>, 2> terms;
  QuadInt max_shift;  // largest |shift|, lambda + m - 1

  std::int64_t m() const noexcept { return ring.m(); }
  std::int64_t total_multiplicity() const;
};

RenormSystem derive_renorm_system(std::int64_t m);

/// Right-hand side of the (i, j) equation at z, evaluated on the table.
double renorm_rhs(const PairCorrTable& table, const RenormSystem& system, int i, int j, const QuadInt& z);

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
  std::size_t tested = 0;
  double zcheck = 0.0;
};

/// Residuals |lhs - rhs| of all four equations at every displacement of the
/// table with |z| <= zcheck. zcheck <= 0 selects the largest admissible
/// radius lambda*zmax - (lambda+m-1); larger values raise InsufficientWindow.
ResidualStats check_renorm_residuals(const PairCorrTable& table, const RenormSystem& system,
                                     double zcheck = 0.0);

struct SolveOptions {
  /// Radius of the smallest patch used to enumerate supports; 0 selects
  /// max(4*lambda*rmax, 64). The patch is enlarged until the support is stable.
  double support_radius = 0.0;
};

/// Solves the renormalisation system on the self-consistent core |z| <= lambda+1,
/// normalises by nu_00(0) + nu_11(0) = 1 and extends recursively to |z| <= rmax.
PairCorrTable solve_renorm(std::int64_t m, double rmax, const SolveOptions& options = {});

/// max |a(i,j,z) - b(i,j,z)| over the union of stored displacements with |z| <= zlim.
double max_abs_deviation(const PairCorrTable& a, const PairCorrTable& b, double zlim);

}  // namespace infladiff
