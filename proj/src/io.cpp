#include "infladiff/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "infladiff/error.hpp"

namespace infladiff {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

std::int64_t narrow(int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorCode::Overflow, "coordinate does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_patch_csv(const TilingPatch& patch, const std::string& path) {
  auto out = open_out(path);
  out << "index,a,b,type,position_float\n";
  const auto marker = static_cast<std::int64_t>(patch.marker_index);
  for (std::size_t p = 0; p < patch.size(); ++p) {
    const TilePoint& t = patch.points[p];
    out << static_cast<std::int64_t>(p) - marker << ',' << to_string(t.position.a) << ','
        << to_string(t.position.b) << ',' << t.type << ','
        << format_double(static_cast<double>(patch.values[p])) << '\n';
  }
  finish(out, path);
}

void write_patch_json(const TilingPatch& patch, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["m"] = patch.ring.m();
  doc["iterations"] = patch.iterations;
  doc["marker_index"] = patch.marker_index;
  doc["radius"] = patch.radius;
  auto& pts = doc["points"] = nlohmann::ordered_json::array();
  const auto marker = static_cast<std::int64_t>(patch.marker_index);
  for (std::size_t p = 0; p < patch.size(); ++p) {
    const TilePoint& t = patch.points[p];
    pts.push_back({{"index", static_cast<std::int64_t>(p) - marker},
                   {"a", narrow(t.position.a)},
                   {"b", narrow(t.position.b)},
                   {"type", t.type},
                   {"position_float", static_cast<double>(patch.values[p])}});
  }
  auto out = open_out(path);
  out << doc.dump(1) << '\n';
  finish(out, path);
}

void write_pair_csv(const std::vector<const PairCorrTable*>& tables, const std::string& path) {
  auto out = open_out(path);
  out << "i,j,a,b,z_float,value,provenance\n";
  for (const PairCorrTable* table : tables) {
    const char* prov = to_string(table->provenance());
    for (const PairEntry& e : table->sorted_entries())
      out << e.i << ',' << e.j << ',' << to_string(e.z.a) << ',' << to_string(e.z.b) << ','
          << format_double(e.z_value) << ',' << format_double(e.value) << ',' << prov << '\n';
  }
  finish(out, path);
}

void write_grid_csv(const DiffractionGrid& grid, const std::string& path) {
  auto out = open_out(path);
  out << "k,intensity\n";
  for (std::size_t n = 0; n < grid.k_values.size(); ++n)
    out << format_double(grid.k_values[n]) << ',' << format_double(grid.intensities[n]) << '\n';
  finish(out, path);
}

void write_distribution_csv(const DistributionFunction& df, const std::string& path) {
  auto out = open_out(path);
  out << "x,F\n";
  for (std::size_t n = 0; n < df.x_values.size(); ++n)
    out << format_double(df.x_values[n]) << ',' << format_double(df.F_values[n]) << '\n';
  finish(out, path);
}

void write_distribution_svg(const DistributionFunction& df, const std::string& path,
                            const std::string& title) {
  constexpr double W = 800, H = 520, left = 70, right = 20, top = 40, bottom = 50;
  const double xmax = df.x_values.back();
  const double ymax = std::max({df.F_values.back(), df.eta0 * xmax, 1e-300}) * 1.05;
  auto sx = [&](double x) { return left + (W - left - right) * x / xmax; };
  auto sy = [&](double y) { return H - bottom - (H - top - bottom) * y / ymax; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  svg << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << left << "\" y2=\"" << top
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xmax * t / 5.0;
    const double yv = ymax / 1.05 * t / 5.0;
    svg << "<text x=\"" << fixed(sx(xv), 2) << "\" y=\"" << H - bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fixed(xv, 2) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(sy(yv) + 4, 2)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fixed(yv, 2) << "</text>\n";
  }
  svg << "<text x=\"" << W - right << "\" y=\"" << H - 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">x</text>\n";
  svg << "<text x=\"16\" y=\"" << top << "\" font-family=\"sans-serif\" font-size=\"13\">F(x)</text>\n";

  // reference line of slope eta0
  svg << "<line x1=\"" << fixed(sx(0), 3) << "\" y1=\"" << fixed(sy(0), 3) << "\" x2=\"" << fixed(sx(xmax), 3)
      << "\" y2=\"" << fixed(sy(df.eta0 * xmax), 3)
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";

  const std::size_t n = df.x_values.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 4000);
  svg << "<polyline fill=\"none\" stroke=\"navy\" stroke-width=\"1.2\" points=\"";
  for (std::size_t p = 0; p < n; p += stride)
    svg << fixed(sx(df.x_values[p]), 3) << ',' << fixed(sy(df.F_values[p]), 3) << ' ';
  svg << fixed(sx(df.x_values[n - 1]), 3) << ',' << fixed(sy(df.F_values[n - 1]), 3);
  svg << "\"/>\n</svg>\n";

  auto out = open_out(path);
  out << svg.str();
  finish(out, path);
}

}  // namespace infladiff
