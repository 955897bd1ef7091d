#!/usr/bin/env python3
# Copyright 2026 The PrivChain Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates tests/data/utm_corpus.txt.

Reference UTM conversion from Snyder, "Map Projections — A Working Manual"
(USGS Professional Paper 1395), forward Transverse Mercator series, evaluated
with mpmath at 50 decimal digits.  The production code uses the Krueger
n-series instead, so corpus agreement cross-checks two independently derived
formula families.  Both are accurate to well under a centimeter inside UTM
zone widths; the test tolerance is 1 m.
"""

from mpmath import mp, mpf, sin, cos, tan, sqrt, radians

mp.dps = 50

A_AXIS = mpf(6378137)               # WGS84 semi-major axis
F = 1 / mpf("298.257223563")        # WGS84 flattening
K0 = mpf("0.9996")
E2 = F * (2 - F)                    # first eccentricity squared
EP2 = E2 / (1 - E2)                 # second eccentricity squared

# (latitude, longitude) in degrees: hemisphere mix, equator, zone edges,
# the UTM latitude limits, and two near-zone-boundary stress points.
POINTS = [
    (0, 3),                     # central meridian x equator: exact identity
    (0.5, -176.2),              # zone 1
    (52.205, 0.119),            # Cambridge
    (-33.92, 18.42),            # Cape Town (south)
    (40.71, -74.006),           # New York
    (35.69, 139.69),            # Tokyo
    (-36.85, 174.76),           # Auckland (zone 60, south)
    (64.15, -21.94),            # Reykjavik
    (84, 10),                   # northern latitude limit
    (-80, 166.67),              # southern latitude limit
    (0.01, -5.99),              # western zone edge near the equator
    (45.07, 7.69),              # Turin
    (-12.046, -77.043),         # Lima (south)
    (19.43, -99.13),            # Mexico City
    (55.755, 37.617),           # Moscow
    (37.775, -122.419),         # San Francisco
    (71.17, 25.78),             # North Cape
    (1.29, 103.85),             # Singapore (near-equator north)
    (-0.95, 100.35),            # Padang (just south of the equator)
    (0.0005, 5.9995),           # eastern zone edge near the equator
]


def meridian_arc(phi):
    """Snyder eq. 3-21: meridian distance from the equator."""
    return A_AXIS * (
        (1 - E2 / 4 - 3 * E2**2 / 64 - 5 * E2**3 / 256) * phi
        - (3 * E2 / 8 + 3 * E2**2 / 32 + 45 * E2**3 / 1024) * sin(2 * phi)
        + (15 * E2**2 / 256 + 45 * E2**3 / 1024) * sin(4 * phi)
        - (35 * E2**3 / 3072) * sin(6 * phi)
    )


def forward(lat_deg, lon_deg):
    """Snyder eq. 8-9..8-15: forward Transverse Mercator for one UTM zone."""
    zone = int((mpf(lon_deg) + 180) / 6) + 1
    lon0 = radians(mpf(-183 + 6 * zone))
    phi = radians(mpf(lat_deg))
    lam = radians(mpf(lon_deg))

    n_rad = A_AXIS / sqrt(1 - E2 * sin(phi) ** 2)
    t_val = tan(phi) ** 2
    c_val = EP2 * cos(phi) ** 2
    a_val = (lam - lon0) * cos(phi)
    m_val = meridian_arc(phi)

    x = K0 * n_rad * (
        a_val
        + (1 - t_val + c_val) * a_val**3 / 6
        + (5 - 18 * t_val + t_val**2 + 72 * c_val - 58 * EP2) * a_val**5 / 120
    )
    y = K0 * (
        m_val
        + n_rad * tan(phi) * (
            a_val**2 / 2
            + (5 - t_val + 9 * c_val + 4 * c_val**2) * a_val**4 / 24
            + (61 - 58 * t_val + t_val**2 + 600 * c_val - 330 * EP2) * a_val**6 / 720
        )
    )

    north = lat_deg >= 0
    easting = x + 500000
    northing = y if north else y + 10000000
    return zone, north, easting, northing


def main():
    lines = [
        "# UTM reference corpus (WGS84).  Generated by tools/gen_utm_corpus.py;",
        "# do not edit by hand.  Columns:",
        "# lat_deg lon_deg zone hemisphere easting_m northing_m",
    ]
    for lat, lon in POINTS:
        zone, north, e, n = forward(lat, lon)
        lines.append(
            f"{lat} {lon} {zone} {'N' if north else 'S'} "
            f"{mp.nstr(e, 12, strip_zeros=False)} {mp.nstr(n, 12, strip_zeros=False)}"
        )
    print("\n".join(lines))


if __name__ == "__main__":
    main()
