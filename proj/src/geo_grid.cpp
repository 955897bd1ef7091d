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
#include "privchain/geo_grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace privchain {

namespace {

// WGS84 ellipsoid and the UTM projection constants.
constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kScale = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;
constexpr double kPi = 3.141592653589793238462643383279502884;

// Krueger series in the third flattening n = f/(2-f), truncated at n^6,
// which keeps the truncation error in the nanometer range — far below the
// double-precision floor. Coefficients after Krueger (1912) as tabulated in
// modern geodesy references.
struct KruegerConstants {
  double rectifying_radius;  // k0 * A
  double alpha[6];
  double n_third;

  KruegerConstants() {
    const double n = kFlattening / (2.0 - kFlattening);
    n_third = n;
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    const double big_a =
        kSemiMajor / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    rectifying_radius = kScale * big_a;
    alpha[0] = n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 -
               127.0 * n5 / 288.0 + 7891.0 * n6 / 37800.0;
    alpha[1] = 13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 +
               281.0 * n5 / 630.0 - 1983433.0 * n6 / 1935360.0;
    alpha[2] = 61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 +
               167603.0 * n6 / 181440.0;
    alpha[3] = 49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 +
               6601661.0 * n6 / 7257600.0;
    alpha[4] = 34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0;
    alpha[5] = 212378941.0 * n6 / 319334400.0;
  }
};

const KruegerConstants& krueger() {
  static const KruegerConstants k;
  return k;
}

[[noreturn]] void parse_fail(std::string_view origin, size_t line, const std::string& why) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << why;
  throw ProtocolError(ErrorCode::kMalformed, os.str());
}

}  // namespace

bool GridRect::contains(const GridIndex& idx) const {
  return idx.zone == zone && idx.north == north && idx.e10 >= e10_lo &&
         idx.e10 <= e10_hi && idx.n10 >= n10_lo && idx.n10 <= n10_hi;
}

int utm_zone_for(double lon_deg) {
  // The 180th meridian belongs to zone 1, matching the [-180, 180) domain.
  const int zone = static_cast<int>(std::floor((lon_deg + 180.0) / 6.0)) + 1;
  return zone == 61 ? 1 : zone;
}

double utm_central_meridian_deg(int zone) { return -183.0 + 6.0 * zone; }

UtmCoord wgs84_to_utm(const GeoCoord& coord) {
  if (!std::isfinite(coord.lat_deg) || !std::isfinite(coord.lon_deg) ||
      coord.lon_deg < -180.0 || coord.lon_deg >= 180.0) {
    throw ProtocolError(ErrorCode::kInvalidParameter,
                        "longitude must be finite and in [-180, 180)");
  }
  if (coord.lat_deg < -80.0 || coord.lat_deg > 84.0) {
    throw ProtocolError(ErrorCode::kOutOfUtmBounds,
                        "latitude outside the [-80, 84] projection domain");
  }

  const int zone = utm_zone_for(coord.lon_deg);
  const double phi = coord.lat_deg * kPi / 180.0;
  const double dlam = (coord.lon_deg - utm_central_meridian_deg(zone)) * kPi / 180.0;

  const KruegerConstants& k = krueger();
  const double n = k.n_third;

  // Conformal latitude via the Gauss-Schreiber intermediate sphere.
  const double e_sqrt = 2.0 * std::sqrt(n) / (1.0 + n);
  const double t = std::sinh(std::atanh(std::sin(phi)) -
                             e_sqrt * std::atanh(e_sqrt * std::sin(phi)));
  const double xi_prime = std::atan2(t, std::cos(dlam));
  const double eta_prime = std::asinh(std::sin(dlam) /
                                      std::sqrt(t * t + std::cos(dlam) * std::cos(dlam)));

  double xi = xi_prime;
  double eta = eta_prime;
  for (int j = 1; j <= 6; ++j) {
    xi += k.alpha[j - 1] * std::sin(2.0 * j * xi_prime) * std::cosh(2.0 * j * eta_prime);
    eta += k.alpha[j - 1] * std::cos(2.0 * j * xi_prime) * std::sinh(2.0 * j * eta_prime);
  }

  UtmCoord out;
  out.zone = zone;
  out.north = coord.lat_deg >= 0.0;
  out.easting = kFalseEasting + k.rectifying_radius * eta;
  out.northing = k.rectifying_radius * xi + (out.north ? 0.0 : kFalseNorthingSouth);
  return out;
}

GridIndex utm_to_grid(const UtmCoord& utm) {
  GridIndex idx;
  idx.zone = utm.zone;
  idx.north = utm.north;
  idx.e10 = static_cast<int64_t>(std::floor(utm.easting / 10.0));
  idx.n10 = static_cast<int64_t>(std::floor(utm.northing / 10.0));
  return idx;
}

bool region_contains(const Region& region, const GridIndex& idx) {
  return region.rect().contains(idx);
}

RegionRegistry::RegionRegistry(std::vector<Region> regions) : regions_(std::move(regions)) {
  for (size_t i = 0; i < regions_.size(); ++i) {
    const Region& r = regions_[i];
    if (r.name.empty()) {
      throw ProtocolError(ErrorCode::kInvalidParameter, "region with empty name");
    }
    if (r.zone < 1 || r.zone > 60) {
      throw ProtocolError(ErrorCode::kInvalidParameter, "region zone outside 1..60: " + r.name);
    }
    if (r.e10_lo < 0 || r.n10_lo < 0 || r.e10_lo > r.e10_hi || r.n10_lo > r.n10_hi) {
      throw ProtocolError(ErrorCode::kInvalidParameter, "region bounds malformed: " + r.name);
    }
    if (r.e10_hi >= 90000 || r.n10_hi >= 1000000) {
      throw ProtocolError(ErrorCode::kInvalidParameter,
                          "region bounds exceed one zone band: " + r.name);
    }
    for (size_t j = 0; j < i; ++j) {
      if (regions_[j].name == r.name) {
        throw ProtocolError(ErrorCode::kInvalidParameter, "duplicate region name: " + r.name);
      }
    }
  }
}

RegionRegistry RegionRegistry::parse(std::string_view text, std::string_view origin) {
  std::vector<Region> regions;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword) || keyword[0] == '#') continue;
    if (keyword != "region") parse_fail(origin, lineno, "expected 'region', got '" + keyword + "'");

    Region r;
    std::string hemi;
    if (!(fields >> r.name >> r.zone >> hemi >> r.e10_lo >> r.e10_hi >> r.n10_lo >> r.n10_hi)) {
      parse_fail(origin, lineno, "expected: region <name> <zone> <N|S> <e10_lo> <e10_hi> <n10_lo> <n10_hi>");
    }
    std::string extra;
    if (fields >> extra) parse_fail(origin, lineno, "trailing fields after region record");
    if (hemi == "N") {
      r.north = true;
    } else if (hemi == "S") {
      r.north = false;
    } else {
      parse_fail(origin, lineno, "hemisphere must be N or S, got '" + hemi + "'");
    }
    regions.push_back(std::move(r));
  }
  try {
    return RegionRegistry(std::move(regions));
  } catch (const ProtocolError& e) {
    throw ProtocolError(ErrorCode::kMalformed, std::string(origin) + ": " + e.what());
  }
}

RegionRegistry RegionRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError(ErrorCode::kIo, "cannot open region registry: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const Region* RegionRegistry::find_by_name(std::string_view name) const {
  for (const Region& r : regions_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Region* RegionRegistry::find_by_rect(const GridRect& rect) const {
  for (const Region& r : regions_) {
    if (r.rect() == rect) return &r;
  }
  return nullptr;
}

}  // namespace privchain
