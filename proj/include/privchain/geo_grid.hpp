/* Copyright 2026 The PrivChain Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// WGS84 → UTM → 10 m grid indices, plus named rectangular regions over the
// grid. Only numeric (zone, hemisphere, e10, n10) indices are emitted — the
// lettered MGRS notation is never needed because the proofs consume numeric
// ranges directly.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "privchain/errors.hpp"

namespace privchain {

/// WGS84 position in degrees. UTM covers latitudes in [-80, 84].
struct GeoCoord {
  double lat_deg = 0;
  double lon_deg = 0;
};

struct UtmCoord {
  int zone = 0;      // 1..60
  bool north = true; // hemisphere
  double easting = 0;
  double northing = 0;
};

/// A 10 m x 10 m grid cell: e10 = floor(easting/10), n10 = floor(northing/10).
struct GridIndex {
  int zone = 0;
  bool north = true;
  int64_t e10 = 0;
  int64_t n10 = 0;

  bool operator==(const GridIndex&) const = default;
};

/// Inclusive axis-aligned rectangle of grid cells within one zone band.
struct GridRect {
  int zone = 0;
  bool north = true;
  int64_t e10_lo = 0, e10_hi = 0;
  int64_t n10_lo = 0, n10_hi = 0;

  bool operator==(const GridRect&) const = default;
  bool contains(const GridIndex& idx) const;
};

struct Region {
  std::string name;
  int zone = 0;
  bool north = true;
  int64_t e10_lo = 0, e10_hi = 0;
  int64_t n10_lo = 0, n10_hi = 0;

  GridRect rect() const { return {zone, north, e10_lo, e10_hi, n10_lo, n10_hi}; }
};

/// Immutable, name-unique collection of regions. Lookup by name (prover
/// side: which bounds to prove) and by exact bounds (verifier side: which
/// name a proven rectangle corresponds to).
class RegionRegistry {
 public:
  RegionRegistry() = default;
  explicit RegionRegistry(std::vector<Region> regions);

  /// Parses the registry text format; `origin` names the source in errors.
  /// One record per non-comment line:
  ///   region <name> <zone> <N|S> <e10_lo> <e10_hi> <n10_lo> <n10_hi>
  static RegionRegistry parse(std::string_view text, std::string_view origin);
  static RegionRegistry load_file(const std::string& path);

  const Region* find_by_name(std::string_view name) const;
  const Region* find_by_rect(const GridRect& rect) const;
  const std::vector<Region>& all() const { return regions_; }

 private:
  std::vector<Region> regions_;
};

/// Zone arithmetic: 6 degree longitude bands, zone 1 starting at -180.
int utm_zone_for(double lon_deg);
double utm_central_meridian_deg(int zone);

/// Transverse Mercator projection (Krueger n-series), scale 0.9996, false
/// easting 500 km, false northing 10000 km in the south. Accurate to well
/// under a meter over the UTM domain.
/// Throws OutOfUtmBounds for latitudes outside [-80, 84] and
/// InvalidParameter for non-finite or out-of-range longitudes.
UtmCoord wgs84_to_utm(const GeoCoord& coord);

GridIndex utm_to_grid(const UtmCoord& utm);

bool region_contains(const Region& region, const GridIndex& idx);

}  // namespace privchain
