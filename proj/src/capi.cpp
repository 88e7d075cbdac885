#include "infladiff/infladiff.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "infladiff/classify.hpp"
#include "infladiff/diffract.hpp"
#include "infladiff/error.hpp"
#include "infladiff/inflation.hpp"
#include "infladiff/io.hpp"
#include "infladiff/paircorr.hpp"

using namespace infladiff;

struct idf_patch {
  TilingPatch patch;
};

struct idf_pair_table {
  PairCorrTable table;
  std::vector<PairEntry> sorted;
};

struct idf_grid {
  DiffractionGrid grid;
};

struct idf_distribution {
  DistributionFunction df;
};

namespace {

thread_local std::string g_last_error;

idf_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return IDF_ERR_INVALID_ARGUMENT;
    case ErrorCode::Overflow: return IDF_ERR_OVERFLOW;
    case ErrorCode::LegalityFailure: return IDF_ERR_LEGALITY;
    case ErrorCode::RecodingMismatch: return IDF_ERR_RECODING;
    case ErrorCode::EmptyPatch: return IDF_ERR_EMPTY_PATCH;
    case ErrorCode::WindowTooSmall: return IDF_ERR_WINDOW_TOO_SMALL;
    case ErrorCode::InsufficientWindow: return IDF_ERR_INSUFFICIENT_WINDOW;
    case ErrorCode::DegenerateKernel: return IDF_ERR_DEGENERATE_KERNEL;
    case ErrorCode::MissingEntry: return IDF_ERR_MISSING_ENTRY;
    case ErrorCode::Io: return IDF_ERR_IO;
  }
  return IDF_ERR_INTERNAL;
}

template <class F>
idf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return IDF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IDF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IDF_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

QuadInt from_c(const Ring& ring, idf_quadint z) { return ring.make(z.a, z.b); }

idf_quadint to_c(const QuadInt& z) {
  if (z.a > std::numeric_limits<int64_t>::max() || z.a < std::numeric_limits<int64_t>::min() ||
      z.b > std::numeric_limits<int64_t>::max() || z.b < std::numeric_limits<int64_t>::min())
    throw Error(ErrorCode::Overflow, "result does not fit in 64-bit components");
  return {static_cast<int64_t>(z.a), static_cast<int64_t>(z.b)};
}

Complex from_c(idf_complex c) { return {c.re, c.im}; }
idf_complex to_c(Complex c) { return {c.real(), c.imag()}; }
WeightScheme weights_of(idf_complex u0, idf_complex u1) { return {from_c(u0), from_c(u1)}; }

}  // namespace

extern "C" {

const char* idf_version(void) { return INFLADIFF_VERSION_STRING; }

const char* idf_last_error(void) { return g_last_error.c_str(); }

const char* idf_status_name(idf_status status) {
  switch (status) {
    case IDF_OK: return "OK";
    case IDF_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case IDF_ERR_OVERFLOW: return "Overflow";
    case IDF_ERR_NOT_DIVISIBLE: return "NotDivisible";
    case IDF_ERR_LEGALITY: return "LegalityFailure";
    case IDF_ERR_RECODING: return "RecodingMismatch";
    case IDF_ERR_EMPTY_PATCH: return "EmptyPatch";
    case IDF_ERR_WINDOW_TOO_SMALL: return "WindowTooSmall";
    case IDF_ERR_INSUFFICIENT_WINDOW: return "InsufficientWindow";
    case IDF_ERR_DEGENERATE_KERNEL: return "DegenerateKernel";
    case IDF_ERR_MISSING_ENTRY: return "MissingEntry";
    case IDF_ERR_IO: return "Io";
    case IDF_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

idf_status idf_quadint_add(int64_t m, idf_quadint x, idf_quadint y, idf_quadint* out) {
  return guarded([&] {
    require(out, "null output");
    const Ring ring(m);
    *out = to_c(ring.add(from_c(ring, x), from_c(ring, y)));
  });
}

idf_status idf_quadint_mul(int64_t m, idf_quadint x, idf_quadint y, idf_quadint* out) {
  return guarded([&] {
    require(out, "null output");
    const Ring ring(m);
    *out = to_c(ring.mul(from_c(ring, x), from_c(ring, y)));
  });
}

idf_status idf_quadint_div_lambda(int64_t m, idf_quadint z, idf_quadint* out) {
  bool divisible = true;
  const idf_status st = guarded([&] {
    require(out, "null output");
    const Ring ring(m);
    const auto q = ring.div_lambda(from_c(ring, z));
    divisible = q.has_value();
    if (divisible) *out = to_c(*q);
  });
  if (st == IDF_OK && !divisible) {
    g_last_error = "z / lambda is not in Z[lambda]";
    return IDF_ERR_NOT_DIVISIBLE;
  }
  return st;
}

idf_status idf_quadint_cmp(int64_t m, idf_quadint x, idf_quadint y, int* out) {
  return guarded([&] {
    require(out, "null output");
    const Ring ring(m);
    const auto c = ring.cmp(from_c(ring, x), from_c(ring, y));
    *out = c < 0 ? -1 : (c > 0 ? 1 : 0);
  });
}

idf_status idf_quadint_value(int64_t m, idf_quadint z, double* out) {
  return guarded([&] {
    require(out, "null output");
    const Ring ring(m);
    *out = ring.value(from_c(ring, z));
  });
}

idf_status idf_eigen(int64_t m, idf_eigen_data* out) {
  return guarded([&] {
    require(out, "null output");
    const EigenData e = eigen_data(m);
    *out = {e.lambda_plus, e.lambda_minus, {e.pf_right[0], e.pf_right[1]}, {e.pf_left[0], e.pf_left[1]}};
  });
}

idf_status idf_classify(int64_t m, idf_spectrum_report* out) {
  return guarded([&] {
    require(out, "null output");
    const SpectrumReport rep = spectral_type(m);
    idf_spectrum_report r{};
    r.m = rep.m;
    r.lambda_plus = rep.lambda_plus;
    r.lambda_minus = rep.lambda_minus;
    r.pv_status = static_cast<idf_pv_status>(rep.pv_status);
    r.spectral_type = static_cast<idf_spectral_type>(rep.spectral_type);
    r.has_ell = rep.ell.has_value();
    r.ell = rep.ell.value_or(0);
    r.coincidence = rep.coincidence.value_or(false);
    if (rep.coincidence_witness) {
      r.witness_length = std::min<size_t>(rep.coincidence_witness->size(), 8);
      std::copy_n(rep.coincidence_witness->begin(), r.witness_length, r.witness);
    }
    r.height = rep.height.value_or(0);
    *out = r;
  });
}

idf_status idf_fixed_point_string(int64_t m, int iterations, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    const std::string s = fixed_point_patch(m, iterations).str();
    if (needed) *needed = s.size() + 1;
    if (buf) {
      require(cap >= s.size() + 1, "buffer too small");
      std::memcpy(buf, s.c_str(), s.size() + 1);
    }
  });
}

idf_status idf_patch_generate(int64_t m, int iterations, idf_patch** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new idf_patch{generate_patch(m, iterations)};
  });
}

idf_status idf_patch_generate_radius(int64_t m, double min_radius, idf_patch** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new idf_patch{generate_patch_with_radius(m, min_radius)};
  });
}

void idf_patch_free(idf_patch* patch) { delete patch; }
size_t idf_patch_size(const idf_patch* patch) { return patch ? patch->patch.size() : 0; }
size_t idf_patch_marker(const idf_patch* patch) { return patch ? patch->patch.marker_index : 0; }
double idf_patch_radius(const idf_patch* patch) { return patch ? patch->patch.radius : 0.0; }
int idf_patch_iterations(const idf_patch* patch) { return patch ? patch->patch.iterations : 0; }
int64_t idf_patch_m(const idf_patch* patch) { return patch ? patch->patch.ring.m() : 0; }

idf_status idf_patch_point(const idf_patch* patch, size_t index, idf_quadint* position, int* type, double* value) {
  return guarded([&] {
    require(patch, "null patch");
    require(index < patch->patch.size(), "point index out of range");
    const TilePoint& p = patch->patch.points[index];
    if (position) *position = to_c(p.position);
    if (type) *type = p.type;
    if (value) *value = static_cast<double>(patch->patch.values[index]);
  });
}

idf_status idf_patch_density(const idf_patch* patch, double r, double* out) {
  return guarded([&] {
    require(patch && out, "null argument");
    *out = density(patch->patch, r);
  });
}

idf_status idf_patch_frequencies(const idf_patch* patch, double r, double* f0, double* f1) {
  return guarded([&] {
    require(patch, "null patch");
    const auto [a, b] = letter_frequencies(patch->patch, r);
    if (f0) *f0 = a;
    if (f1) *f1 = b;
  });
}

idf_status idf_patch_write_csv(const idf_patch* patch, const char* path) {
  return guarded([&] {
    require(patch && path, "null argument");
    write_patch_csv(patch->patch, path);
  });
}

idf_status idf_patch_write_json(const idf_patch* patch, const char* path) {
  return guarded([&] {
    require(patch && path, "null argument");
    write_patch_json(patch->patch, path);
  });
}

idf_status idf_pair_table_empirical(const idf_patch* patch, double r, double zmax, idf_pair_table** out) {
  return guarded([&] {
    require(patch && out, "null argument");
    PairCorrTable t = empirical_pair_corr(patch->patch, r, zmax);
    auto sorted = t.sorted_entries();
    *out = new idf_pair_table{std::move(t), std::move(sorted)};
  });
}

idf_status idf_pair_table_solve(int64_t m, double rmax, idf_pair_table** out) {
  return guarded([&] {
    require(out, "null output");
    PairCorrTable t = solve_renorm(m, rmax);
    auto sorted = t.sorted_entries();
    *out = new idf_pair_table{std::move(t), std::move(sorted)};
  });
}

void idf_pair_table_free(idf_pair_table* table) { delete table; }
size_t idf_pair_table_size(const idf_pair_table* table) { return table ? table->sorted.size() : 0; }

int idf_pair_table_is_solved(const idf_pair_table* table) {
  return table && table->table.provenance() == Provenance::RenormSolved;
}

size_t idf_pair_table_window_count(const idf_pair_table* table) {
  return table ? table->table.window_count : 0;
}

idf_status idf_pair_table_solve_info(const idf_pair_table* table, idf_solve_info* out) {
  return guarded([&] {
    require(table && out, "null argument");
    require(table->table.solve_info.has_value(), "table was not produced by the renormalisation solver");
    const SolveInfo& s = *table->table.solve_info;
    *out = {s.core_size,           s.kernel_dimension,     s.elimination_residual,
            s.power_iteration_deviation, s.power_iterations, s.support_size,
            s.support_patch_iterations,  s.support_patch_radius, s.min_support_value};
  });
}

idf_status idf_pair_table_entry(const idf_pair_table* table, size_t index, int* i, int* j, idf_quadint* z,
                                double* z_value, double* value) {
  return guarded([&] {
    require(table, "null table");
    require(index < table->sorted.size(), "entry index out of range");
    const PairEntry& e = table->sorted[index];
    if (i) *i = e.i;
    if (j) *j = e.j;
    if (z) *z = to_c(e.z);
    if (z_value) *z_value = e.z_value;
    if (value) *value = e.value;
  });
}

idf_status idf_pair_table_get(const idf_pair_table* table, int i, int j, idf_quadint z, double* out) {
  return guarded([&] {
    require(table && out, "null argument");
    require(i >= 0 && i <= 1 && j >= 0 && j <= 1, "types must be 0 or 1");
    *out = table->table.get(i, j, from_c(table->table.ring(), z));
  });
}

idf_status idf_pair_table_check_renorm(const idf_pair_table* table, double zcheck, idf_residuals* out) {
  return guarded([&] {
    require(table && out, "null argument");
    const ResidualStats s = check_renorm_residuals(table->table, derive_renorm_system(table->table.m()), zcheck);
    *out = {s.max, s.mean, s.tested, s.zcheck};
  });
}

idf_status idf_pair_table_max_deviation(const idf_pair_table* a, const idf_pair_table* b, double zlim, double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = max_abs_deviation(a->table, b->table, zlim);
  });
}

idf_status idf_pair_table_eta(const idf_pair_table* table, idf_complex u0, idf_complex u1, idf_quadint z,
                              idf_complex* out) {
  return guarded([&] {
    require(table && out, "null argument");
    *out = to_c(eta_general(table->table, weights_of(u0, u1), from_c(table->table.ring(), z)));
  });
}

idf_status idf_pair_tables_write_csv(const idf_pair_table* const* tables, size_t count, const char* path) {
  return guarded([&] {
    require(path && (tables || count == 0), "null argument");
    std::vector<const PairCorrTable*> ptrs;
    for (size_t n = 0; n < count; ++n) {
      require(tables[n], "null table");
      ptrs.push_back(&tables[n]->table);
    }
    write_pair_csv(ptrs, path);
  });
}

idf_status idf_weights_parse(int64_t m, const char* text, idf_complex* u0, idf_complex* u1) {
  return guarded([&] {
    require(text && u0 && u1, "null argument");
    const WeightScheme w = parse_weights(text, Ring(m));
    *u0 = to_c(w.u0);
    *u1 = to_c(w.u1);
  });
}

idf_status idf_density_closed_form(int64_t m, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = density_closed_form(m);
  });
}

idf_status idf_bragg_intensity(int64_t m, idf_complex u0, idf_complex u1, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = bragg_intensity(m, weights_of(u0, u1));
  });
}

idf_status idf_eta_zero(int64_t m, idf_complex u0, idf_complex u1, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = eta_zero(m, weights_of(u0, u1));
  });
}

idf_status idf_exponential_sum(const idf_patch* patch, idf_complex u0, idf_complex u1, double k, double R,
                               idf_complex* out) {
  return guarded([&] {
    require(patch && out, "null argument");
    *out = to_c(exponential_sum(patch->patch, weights_of(u0, u1), k, R));
  });
}

idf_status idf_grid_compute(const idf_patch* patch, idf_complex u0, idf_complex u1, double kmax, double dk,
                            double R, idf_grid** out) {
  return guarded([&] {
    require(patch && out, "null argument");
    *out = new idf_grid{diffraction_grid(patch->patch, weights_of(u0, u1), kmax, dk, R)};
  });
}

void idf_grid_free(idf_grid* grid) { delete grid; }
size_t idf_grid_size(const idf_grid* grid) { return grid ? grid->grid.k_values.size() : 0; }
size_t idf_grid_point_count(const idf_grid* grid) { return grid ? grid->grid.point_count : 0; }

idf_status idf_grid_sample(const idf_grid* grid, size_t index, double* k, double* intensity) {
  return guarded([&] {
    require(grid, "null grid");
    require(index < grid->grid.k_values.size(), "grid index out of range");
    if (k) *k = grid->grid.k_values[index];
    if (intensity) *intensity = grid->grid.intensities[index];
  });
}

idf_status idf_grid_write_csv(const idf_grid* grid, const char* path) {
  return guarded([&] {
    require(grid && path, "null argument");
    write_grid_csv(grid->grid, path);
  });
}

idf_status idf_distribution_compute(const idf_grid* grid, double eta0, idf_distribution** out) {
  return guarded([&] {
    require(grid && out, "null argument");
    *out = new idf_distribution{distribution_function(grid->grid, eta0)};
  });
}

void idf_distribution_free(idf_distribution* df) { delete df; }
size_t idf_distribution_size(const idf_distribution* df) { return df ? df->df.x_values.size() : 0; }
double idf_distribution_min_step(const idf_distribution* df) { return df ? df->df.min_step : 0.0; }

idf_status idf_distribution_sample(const idf_distribution* df, size_t index, double* x, double* F) {
  return guarded([&] {
    require(df, "null distribution");
    require(index < df->df.x_values.size(), "index out of range");
    if (x) *x = df->df.x_values[index];
    if (F) *F = df->df.F_values[index];
  });
}

idf_status idf_distribution_at(const idf_distribution* df, double x, double* F) {
  return guarded([&] {
    require(df && F, "null argument");
    *F = df->df.at(x);
  });
}

idf_status idf_distribution_write_csv(const idf_distribution* df, const char* path) {
  return guarded([&] {
    require(df && path, "null argument");
    write_distribution_csv(df->df, path);
  });
}

idf_status idf_distribution_write_svg(const idf_distribution* df, const char* path, const char* title) {
  return guarded([&] {
    require(df && path, "null argument");
    write_distribution_svg(df->df, path, title ? title : "");
  });
}

idf_status idf_scaling_probe(const idf_patch* patch, idf_complex u0, idf_complex u1, double k_star,
                             const double* R_list, size_t count, int refine, double* peak_k, double* amplitudes,
                             idf_probe_summary* out) {
  return guarded([&] {
    require(patch && R_list && out, "null argument");
    const WeightedComb comb = make_comb(patch->patch, weights_of(u0, u1));
    const ScalingProbe p = scaling_probe(comb, k_star, std::vector<double>(R_list, R_list + count), refine != 0);
    for (size_t n = 0; n < count; ++n) {
      if (peak_k) peak_k[n] = p.k_values[n];
      if (amplitudes) amplitudes[n] = p.amplitudes[n];
    }
    out->beta = p.beta;
    out->classification = p.classification == "Bragg-like" ? 0 : (p.classification == "SC-like" ? 1 : 2);
  });
}

}  // extern "C"
