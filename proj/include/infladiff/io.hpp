#pragma once

#include <string>
#include <vector>

#include "infladiff/diffract.hpp"
#include "infladiff/inflation.hpp"
#include "infladiff/paircorr.hpp"

namespace infladiff {

/// %.17g, so every double round-trips.
std::string format_double(double v);

/// CSV columns index,a,b,type,position_float; index counts from the marker.
void write_patch_csv(const TilingPatch& patch, const std::string& path);
/// {"m":..,"marker_index":..,"radius":..,"points":[{"index","a","b","type","position_float"}]}
void write_patch_json(const TilingPatch& patch, const std::string& path);

/// CSV columns i,j,a,b,z_float,value,provenance; tables written in order.
void write_pair_csv(const std::vector<const PairCorrTable*>& tables, const std::string& path);

void write_grid_csv(const DiffractionGrid& grid, const std::string& path);
void write_distribution_csv(const DistributionFunction& df, const std::string& path);
/// Single polyline of F with the reference line eta0 * x.
void write_distribution_svg(const DistributionFunction& df, const std::string& path,
                            const std::string& title);

}  // namespace infladiff
