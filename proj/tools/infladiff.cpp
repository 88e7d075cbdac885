// infladiff command-line front end. Talks to the library only through the C
// interface in infladiff/infladiff.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "infladiff/infladiff.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitInvalid = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(idf_status st) {
  switch (st) {
    case IDF_ERR_INVALID_ARGUMENT:
    case IDF_ERR_WINDOW_TOO_SMALL:
    case IDF_ERR_INSUFFICIENT_WINDOW:
    case IDF_ERR_MISSING_ENTRY:
      return kExitInvalid;
    case IDF_ERR_IO:
      return kExitIo;
    default:
      return kExitNumeric;
  }
}

void check(idf_status st) {
  if (st != IDF_OK)
    throw Failure{exit_code_for(st), std::string(idf_status_name(st)) + ": " + idf_last_error()};
}

[[noreturn]] void invalid(const std::string& why) { throw Failure{kExitInvalid, why}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PatchPtr = std::unique_ptr<idf_patch, Deleter<idf_patch, idf_patch_free>>;
using TablePtr = std::unique_ptr<idf_pair_table, Deleter<idf_pair_table, idf_pair_table_free>>;
using GridPtr = std::unique_ptr<idf_grid, Deleter<idf_grid, idf_grid_free>>;
using DistPtr = std::unique_ptr<idf_distribution, Deleter<idf_distribution, idf_distribution_free>>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json complex_json(idf_complex c) { return Json::array({c.re, c.im}); }

void write_manifest(const std::string& path, const std::string& command, const Json& params, const Json& summary,
                    const Json& artifacts) {
  Json doc;
  doc["tool"] = "infladiff";
  doc["version"] = idf_version();
  doc["command"] = command;
  doc["parameters"] = params;
  doc["summary"] = summary;
  doc["artifacts"] = artifacts;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitIo, "cannot open '" + path + "' for writing"};
  out << doc.dump(2) << '\n';
  if (!out.flush()) throw Failure{kExitIo, "write to '" + path + "' failed"};
}

// ---------------------------------------------------------------- options

struct Options {
  std::string manifest = "manifest.json";

  std::int64_t m = 3;
  int iterations = 3;
  double min_radius = 0.0;
  std::string out;
  std::string json_out;

  std::string range;

  double radius = 2000.0;
  double zmax = 30.0;
  bool check_renorm = false;
  bool solve = false;
  double rmax = 30.0;

  std::string weights = "1-lambda,1";
  double R = 4000.0;
  double kmax = 20.0;
  double dk = 0.0;
  std::string fout;
  std::string svg;
  std::vector<double> probe_k;
  std::vector<double> probe_R = {1000, 2000, 4000, 8000, 16000};
  bool refine = false;
};

// ---------------------------------------------------------------- commands

PatchPtr make_patch(std::int64_t m, double min_radius) {
  idf_patch* p = nullptr;
  check(idf_patch_generate_radius(m, min_radius, &p));
  return PatchPtr(p);
}

int run_generate(const Options& o) {
  idf_patch* raw = nullptr;
  if (o.min_radius > 0)
    check(idf_patch_generate_radius(o.m, o.min_radius, &raw));
  else
    check(idf_patch_generate(o.m, o.iterations, &raw));
  const PatchPtr patch(raw);

  double dens = 0, f0 = 0, f1 = 0, dens_cf = 0;
  check(idf_patch_density(patch.get(), 0.0, &dens));
  check(idf_patch_frequencies(patch.get(), 0.0, &f0, &f1));
  check(idf_density_closed_form(o.m, &dens_cf));

  Json artifacts = Json::object();
  if (!o.out.empty()) {
    check(idf_patch_write_csv(patch.get(), o.out.c_str()));
    artifacts["points_csv"] = o.out;
  }
  if (!o.json_out.empty()) {
    check(idf_patch_write_json(patch.get(), o.json_out.c_str()));
    artifacts["points_json"] = o.json_out;
  }

  const Json params = {{"m", o.m}, {"iterations", idf_patch_iterations(patch.get())}, {"min_radius", o.min_radius}};
  const Json summary = {{"points", idf_patch_size(patch.get())},
                        {"radius", idf_patch_radius(patch.get())},
                        {"density", dens},
                        {"density_closed_form", dens_cf},
                        {"frequency_0", f0},
                        {"frequency_1", f1}};
  if (idf_patch_size(patch.get()) <= 64) {
    std::vector<char> buf(1 << 12);
    size_t needed = 0;
    if (idf_fixed_point_string(o.m, idf_patch_iterations(patch.get()), buf.data(), buf.size(), &needed) == IDF_OK)
      std::cout << "word      " << buf.data() << '\n';
  }
  std::cout << "points    " << idf_patch_size(patch.get()) << '\n'
            << "radius    " << fmt(idf_patch_radius(patch.get())) << '\n'
            << "density   " << fmt(dens) << "  (closed form " << fmt(dens_cf) << ")\n"
            << "freq      " << fmt(f0) << ' ' << fmt(f1) << '\n';
  write_manifest(o.manifest, "generate", params, summary, artifacts);
  return 0;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) invalid("range must look like a..b");
  try {
    size_t used = 0;
    const std::int64_t a = std::stoll(text.substr(0, dots), &used);
    if (used != dots) invalid("bad range start");
    const std::string rest = text.substr(dots + 2);
    const std::int64_t b = std::stoll(rest, &used);
    if (used != rest.size()) invalid("bad range end");
    if (a < 1 || b < a) invalid("range must satisfy 1 <= a <= b");
    return {a, b};
  } catch (const std::logic_error&) {
    invalid("range must look like a..b");
  }
}

const char* pv_name(idf_pv_status s) {
  switch (s) {
    case IDF_PISOT_UNIT: return "PisotUnit";
    case IDF_INTEGER: return "Integer";
    default: return "NonPisot";
  }
}

const char* spectral_name(idf_spectral_type t) {
  return t == IDF_PURE_POINT ? "PurePoint" : "TrivialBraggPlusContinuous";
}

int run_classify(const Options& o, bool m_given) {
  std::int64_t first = o.m, last = o.m;
  if (!o.range.empty()) {
    if (m_given) invalid("--m and --range are exclusive");
    std::tie(first, last) = parse_range(o.range);
  }
  Json rows = Json::array();
  std::vector<std::int64_t> pure;
  std::cout << "m\tlambda+\tlambda-\tpv\tspectrum\tell\tcoincidence\theight\n";
  for (std::int64_t m = first; m <= last; ++m) {
    idf_spectrum_report r{};
    check(idf_classify(m, &r));
    Json row = {{"m", m},
                {"lambda_plus", r.lambda_plus},
                {"lambda_minus", r.lambda_minus},
                {"pv_status", pv_name(r.pv_status)},
                {"spectral_type", spectral_name(r.spectral_type)}};
    std::string ell = "-", coin = "-", height = "-";
    if (r.has_ell) {
      row["ell"] = r.ell;
      row["coincidence"] = r.coincidence != 0;
      row["coincidence_witness"] = std::vector<size_t>(r.witness, r.witness + r.witness_length);
      row["height"] = r.height;
      ell = std::to_string(r.ell);
      coin = r.coincidence ? "yes" : "no";
      height = std::to_string(r.height);
    }
    if (r.spectral_type == IDF_PURE_POINT) pure.push_back(m);
    std::cout << m << '\t' << fmt(r.lambda_plus) << '\t' << fmt(r.lambda_minus) << '\t' << pv_name(r.pv_status)
              << '\t' << spectral_name(r.spectral_type) << '\t' << ell << '\t' << coin << '\t' << height << '\n';
    rows.push_back(std::move(row));
  }
  std::cout << "pure point:";
  for (auto m : pure) std::cout << ' ' << m;
  std::cout << '\n';

  Json artifacts = Json::object();
  if (!o.json_out.empty()) {
    std::ofstream out(o.json_out, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitIo, "cannot open '" + o.json_out + "' for writing"};
    out << rows.dump(2) << '\n';
    if (!out.flush()) throw Failure{kExitIo, "write failed"};
    artifacts["classification_json"] = o.json_out;
  }
  const Json params = {{"m_first", first}, {"m_last", last}};
  const Json summary = {{"pure_point", pure}, {"rows", rows}};
  write_manifest(o.manifest, "classify", params, summary, artifacts);
  return 0;
}

Json residual_json(const idf_residuals& r) {
  return {{"max", r.max}, {"mean", r.mean}, {"tested", r.tested}, {"zcheck", r.zcheck}};
}

int run_paircorr(const Options& o, bool solve_only) {
  if (o.zmax <= 0 || o.radius <= 0 || o.rmax <= 0) invalid("radius, zmax and rmax must be positive");
  Json params = {{"m", o.m}};
  Json summary = Json::object();
  Json artifacts = Json::object();
  std::vector<const idf_pair_table*> tables;

  TablePtr empirical;
  PatchPtr patch;
  if (!solve_only) {
    params["radius"] = o.radius;
    params["zmax"] = o.zmax;
    params["check_renorm"] = o.check_renorm;
    patch = make_patch(o.m, o.radius + o.zmax);
    idf_pair_table* t = nullptr;
    check(idf_pair_table_empirical(patch.get(), o.radius, o.zmax, &t));
    empirical.reset(t);
    tables.push_back(empirical.get());
    double v00 = 0, v11 = 0;
    check(idf_pair_table_get(t, 0, 0, {0, 0}, &v00));
    check(idf_pair_table_get(t, 1, 1, {0, 0}, &v11));
    summary["empirical"] = {{"patch_points", idf_patch_size(patch.get())},
                            {"window_count", idf_pair_table_window_count(t)},
                            {"entries", idf_pair_table_size(t)},
                            {"nu00_0", v00},
                            {"nu11_0", v11}};
    std::cout << "empirical  window points " << idf_pair_table_window_count(t) << ", entries "
              << idf_pair_table_size(t) << ", nu00(0) " << fmt(v00) << ", nu11(0) " << fmt(v11) << '\n';

    if (o.check_renorm) {
      // residuals at r/100, r/10 and r on the same patch
      Json decay = Json::array();
      for (double scale : {0.01, 0.1, 1.0}) {
        const double r = o.radius * scale;
        idf_pair_table* sub = nullptr;
        const idf_status st = idf_pair_table_empirical(patch.get(), r, o.zmax, &sub);
        if (st != IDF_OK) continue;
        const TablePtr hold(sub);
        idf_residuals res{};
        check(idf_pair_table_check_renorm(sub, 0.0, &res));
        Json entry = residual_json(res);
        entry["radius"] = r;
        entry["window_count"] = idf_pair_table_window_count(sub);
        decay.push_back(entry);
        std::cout << "residual   r " << fmt(r) << "  points " << idf_pair_table_window_count(sub) << "  max "
                  << fmt(res.max) << "  mean " << fmt(res.mean) << "  (|z| <= " << fmt(res.zcheck) << ")\n";
      }
      summary["renorm_residuals"] = decay;
    }
  }

  TablePtr solved;
  if (o.solve || solve_only) {
    params["rmax"] = o.rmax;
    idf_pair_table* t = nullptr;
    check(idf_pair_table_solve(o.m, o.rmax, &t));
    solved.reset(t);
    tables.push_back(t);
    idf_solve_info info{};
    check(idf_pair_table_solve_info(t, &info));
    idf_residuals res{};
    check(idf_pair_table_check_renorm(t, 0.0, &res));
    double v00 = 0, v11 = 0;
    check(idf_pair_table_get(t, 0, 0, {0, 0}, &v00));
    check(idf_pair_table_get(t, 1, 1, {0, 0}, &v11));
    Json s = {{"entries", idf_pair_table_size(t)},
              {"core_size", info.core_size},
              {"kernel_dimension", info.kernel_dimension},
              {"elimination_residual", info.elimination_residual},
              {"power_iteration_deviation", info.power_iteration_deviation},
              {"power_iterations", info.power_iterations},
              {"support_size", info.support_size},
              {"support_patch_radius", info.support_patch_radius},
              {"min_support_value", info.min_support_value},
              {"nu00_0", v00},
              {"nu11_0", v11},
              {"residual", residual_json(res)}};
    std::cout << "solved     core " << info.core_size << ", kernel dim " << info.kernel_dimension << ", entries "
              << idf_pair_table_size(t) << ", nu00(0) " << fmt(v00) << ", nu11(0) " << fmt(v11)
              << ", residual max " << fmt(res.max) << '\n';
    if (empirical) {
      double dev = 0;
      check(idf_pair_table_max_deviation(t, empirical.get(), std::min(o.rmax, o.zmax), &dev));
      s["max_deviation_from_empirical"] = dev;
      std::cout << "deviation  max |solved - empirical| " << fmt(dev) << '\n';
    }
    summary["solved"] = s;
  }

  if (!o.out.empty()) {
    check(idf_pair_tables_write_csv(tables.data(), tables.size(), o.out.c_str()));
    artifacts["pair_csv"] = o.out;
  }
  write_manifest(o.manifest, solve_only ? "renorm-solve" : "paircorr", params, summary, artifacts);
  return 0;
}

void parse_weights(const Options& o, idf_complex& u0, idf_complex& u1) {
  check(idf_weights_parse(o.m, o.weights.c_str(), &u0, &u1));
}

int run_bragg(const Options& o) {
  idf_complex u0{}, u1{};
  parse_weights(o, u0, u1);
  double i0 = 0, eta0 = 0, dens = 0;
  check(idf_bragg_intensity(o.m, u0, u1, &i0));
  check(idf_eta_zero(o.m, u0, u1, &eta0));
  check(idf_density_closed_form(o.m, &dens));
  std::cout << "density   " << fmt(dens) << '\n' << "I0        " << fmt(i0) << '\n' << "eta0      " << fmt(eta0) << '\n';
  const Json params = {{"m", o.m}, {"weights", o.weights}, {"u0", complex_json(u0)}, {"u1", complex_json(u1)}};
  const Json summary = {{"density", dens}, {"bragg_intensity", i0}, {"eta0", eta0}, {"extinct", i0 < 1e-24}};
  write_manifest(o.manifest, "bragg", params, summary, Json::object());
  return 0;
}

int run_diffract(const Options& o) {
  idf_spectrum_report rep{};
  check(idf_classify(o.m, &rep));
  if (rep.spectral_type == IDF_PURE_POINT)
    invalid("m = " + std::to_string(o.m) + " has pure point spectrum; diffract handles the continuous cases only");
  if (o.R <= 0 || o.kmax <= 0 || o.dk < 0) invalid("R and kmax must be positive");
  const double dk = o.dk > 0 ? o.dk : 1.0 / (4.0 * o.R);

  idf_complex u0{}, u1{};
  parse_weights(o, u0, u1);
  double i0 = 0, eta0 = 0, dens = 0;
  check(idf_bragg_intensity(o.m, u0, u1, &i0));
  check(idf_eta_zero(o.m, u0, u1, &eta0));
  check(idf_density_closed_form(o.m, &dens));

  double rmax_needed = o.R;
  for (double r : o.probe_R) rmax_needed = std::max(rmax_needed, r);
  const PatchPtr patch = make_patch(o.m, rmax_needed + 1.0);

  idf_grid* g = nullptr;
  check(idf_grid_compute(patch.get(), u0, u1, o.kmax, dk, o.R, &g));
  const GridPtr grid(g);
  idf_distribution* d = nullptr;
  check(idf_distribution_compute(g, eta0, &d));
  const DistPtr df(d);
  const size_t n = idf_distribution_size(d);
  double xlast = 0, Flast = 0;
  check(idf_distribution_sample(d, n - 1, &xlast, &Flast));
  idf_complex s0{};
  check(idf_exponential_sum(patch.get(), u0, u1, 0.0, o.R, &s0));
  const double s0_scaled = std::hypot(s0.re, s0.im) / (2 * o.R);

  Json params = {{"m", o.m},       {"weights", o.weights}, {"u0", complex_json(u0)}, {"u1", complex_json(u1)},
                 {"R", o.R},       {"kmax", o.kmax},       {"dk", dk}};
  Json summary = {{"density", dens},
                  {"bragg_intensity", i0},
                  {"eta0", eta0},
                  {"grid_points", idf_grid_size(g)},
                  {"comb_points", idf_grid_point_count(g)},
                  {"S_R0_over_2R", s0_scaled},
                  {"F_at_xmax", Flast},
                  {"x_max", xlast},
                  {"average_slope", Flast / xlast},
                  {"min_step", idf_distribution_min_step(d)}};
  std::cout << "comb      " << idf_grid_point_count(g) << " points in [-R, R), R = " << fmt(o.R) << '\n'
            << "grid      " << idf_grid_size(g) << " k values, dk = " << fmt(dk) << '\n'
            << "I0        " << fmt(i0) << "   |S_R(0)|/2R = " << fmt(s0_scaled) << '\n'
            << "eta0      " << fmt(eta0) << '\n'
            << "F(xmax)/xmax " << fmt(Flast / xlast) << " at xmax = " << fmt(xlast) << '\n'
            << "min step  " << fmt(idf_distribution_min_step(d)) << '\n';

  if (!o.probe_k.empty()) {
    Json probes = Json::array();
    std::vector<double> peaks(o.probe_R.size()), amps(o.probe_R.size());
    for (double k : o.probe_k) {
      idf_probe_summary ps{};
      check(idf_scaling_probe(patch.get(), u0, u1, k, o.probe_R.data(), o.probe_R.size(), o.refine, peaks.data(),
                              amps.data(), &ps));
      static const char* kLabels[] = {"Bragg-like", "SC-like", "AC-like"};
      probes.push_back({{"k_star", k},
                        {"beta", ps.beta},
                        {"classification", kLabels[ps.classification]},
                        {"R", o.probe_R},
                        {"peak_k", peaks},
                        {"amplitude", amps}});
      std::cout << "probe     k* " << fmt(k) << "  beta " << fmt(ps.beta) << "  " << kLabels[ps.classification]
                << '\n';
    }
    params["probe_R"] = o.probe_R;
    params["refine"] = o.refine;
    summary["scaling_probe"] = probes;
  }

  Json artifacts = Json::object();
  if (!o.out.empty()) {
    check(idf_grid_write_csv(g, o.out.c_str()));
    artifacts["spectrum_csv"] = o.out;
  }
  if (!o.fout.empty()) {
    check(idf_distribution_write_csv(d, o.fout.c_str()));
    artifacts["distribution_csv"] = o.fout;
  }
  if (!o.svg.empty()) {
    const std::string title = "F(x), m = " + std::to_string(o.m) + ", u = (" + o.weights + "), R = " + fmt(o.R);
    check(idf_distribution_write_svg(d, o.svg.c_str(), title.c_str()));
    artifacts["distribution_svg"] = o.svg;
  }
  write_manifest(o.manifest, "diffract", params, summary, artifacts);
  return 0;
}

// ---------------------------------------------------------------- config

// Rewrites argv so that keys of a JSON config file become flags placed before
// the command-line ones; options given explicitly are skipped, so flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (size_t n = 0; n < args.size(); ++n) {
    if (args[n] == "--config") {
      if (n + 1 >= args.size()) invalid("--config needs a file");
      path = args[++n];
    } else if (args[n].rfind("--config=", 0) == 0) {
      path = args[n].substr(9);
    } else {
      rest.push_back(args[n]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw Failure{kExitIo, "cannot read config '" + path + "'"};
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) invalid("config must be a JSON object");

  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));

  std::vector<std::string> out;
  size_t first = 0;
  if (cfg.contains("command")) {
    if (!cfg["command"].is_string()) invalid("config 'command' must be a string");
    out.push_back(cfg["command"].get<std::string>());
  } else {
    if (rest.empty()) invalid("no command given");
    out.push_back(rest[0]);
    first = 1;
  }
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (given.contains(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      out.push_back(flag + "=" + joined);
    } else if (value.is_string()) {
      out.push_back(flag + "=" + value.get<std::string>());
    } else if (value.is_number()) {
      out.push_back(flag + "=" + value.dump());
    } else {
      invalid("unsupported value for config key '" + key + "'");
    }
  }
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(first), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Inflation tilings 0 -> 0 1^m, 1 -> 0: arithmetic, pair correlations and diffraction", "infladiff"};
  app.set_version_flag("--version", std::string(idf_version()));
  app.require_subcommand(1);

  auto add_m = [&](CLI::App* sub) { return sub->add_option("--m", o.m, "inflation parameter m >= 1"); };
  auto add_manifest = [&](CLI::App* sub) { sub->add_option("--manifest", o.manifest, "manifest path"); };

  auto* gen = app.add_subcommand("generate", "build a fixed-point patch");
  add_m(gen);
  gen->add_option("--iterations", o.iterations, "patch is rho^(2n)(0)|rho^(2n)(0)");
  gen->add_option("--radius", o.min_radius, "grow the patch until it covers [-radius, radius]");
  gen->add_option("--out", o.out, "points CSV");
  gen->add_option("--json", o.json_out, "points JSON");
  add_manifest(gen);

  auto* cls = app.add_subcommand("classify", "spectral type for one m or a range");
  CLI::Option* cls_m = add_m(cls);
  cls->add_option("--range", o.range, "a..b");
  cls->add_option("--json", o.json_out, "table as JSON");
  add_manifest(cls);

  auto add_pair_options = [&](CLI::App* sub, bool empirical) {
    add_m(sub);
    if (empirical) {
      sub->add_option("--radius", o.radius, "counting window [-r, r)");
      sub->add_option("--zmax", o.zmax, "largest |z|");
      sub->add_flag("--check-renorm", o.check_renorm, "report renormalisation residuals at r/100, r/10, r");
      sub->add_flag("--solve", o.solve, "also solve the renormalisation system");
    }
    sub->add_option("--rmax", o.rmax, "extent of the solved table");
    sub->add_option("--out", o.out, "pair-correlation CSV");
    add_manifest(sub);
  };
  auto* pc = app.add_subcommand("paircorr", "empirical pair correlations");
  add_pair_options(pc, true);
  auto* rs = app.add_subcommand("renorm-solve", "solve the renormalisation equations");
  add_pair_options(rs, false);

  auto* df = app.add_subcommand("diffract", "diffraction grid and distribution function");
  add_m(df);
  df->add_option("--weights", o.weights, "u0,u1 expressions; may use lambda and i");
  df->add_option("--R", o.R, "window half-length");
  df->add_option("--kmax", o.kmax, "grid end");
  df->add_option("--dk", o.dk, "grid step, default 1/(4R)");
  df->add_option("--out", o.out, "k,intensity CSV");
  df->add_option("--fout", o.fout, "x,F CSV");
  df->add_option("--svg", o.svg, "plot of F");
  df->add_option("--probe-k", o.probe_k, "k* values for the scaling probe")->delimiter(',');
  df->add_option("--probe-R", o.probe_R, "radii for the scaling probe")->delimiter(',');
  df->add_flag("--refine", o.refine, "move k* to the local maximum within 1/(2R)");
  add_manifest(df);

  auto* br = app.add_subcommand("bragg", "Bragg intensity at the origin and eta(0)");
  add_m(br);
  br->add_option("--weights", o.weights, "u0,u1 expressions; may use lambda and i");
  add_manifest(br);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kExitInvalid;
    }
    if (o.m < 1) invalid("m must be at least 1");

    if (*gen) return run_generate(o);
    if (*cls) return run_classify(o, cls_m->count() > 0);
    if (*pc) return run_paircorr(o, false);
    if (*rs) return run_paircorr(o, true);
    if (*df) return run_diffract(o);
    if (*br) return run_bragg(o);
  } catch (const Failure& f) {
    std::cerr << "infladiff: " << f.message << '\n';
    return f.exit_code;
  }
  return kExitInvalid;
}
