#!/usr/bin/env python3
"""Generate the fixed UTM reference corpus used by the geodesy tests.

The reference conversion implemented here is the classic USGS (Snyder,
"Map Projections: A Working Manual", PP 1395) transverse Mercator series,
evaluated with 50-digit arithmetic via mpmath.  The generator script
cross-checks every point against an independently derived Krueger
n-series evaluation and refuses to emit a corpus if the two series
families disagree by more than 2 cm, so the frozen values are vetted by
two unrelated formulations before any consumer sees them.

Output: tests/data/utm_corpus.txt  (one record per line)
    lat_deg lon_deg zone hemisphere easting_m northing_m

Run from the repository root:  python3 scripts/make_geo_corpus.py
"""

import mpmath as mp

mp.mp.dps = 50

# WGS84
A = mp.mpf(6378137)
F = 1 / mp.mpf("298.257223563")
K0 = mp.mpf("0.9996")
FALSE_E = mp.mpf(500000)
FALSE_N_SOUTH = mp.mpf(10000000)

E2 = F * (2 - F)
EP2 = E2 / (1 - E2)


def utm_zone(lon):
    z = int(mp.floor((lon + 180) / 6)) + 1
    return min(max(z, 1), 60)


def central_meridian(zone):
    return mp.mpf(zone * 6 - 183)


def snyder_forward(lat_deg, lon_deg):
    """USGS PP1395 eq. 8-9..8-15 forward transverse Mercator."""
    zone = utm_zone(lon_deg)
    phi = mp.radians(mp.mpf(lat_deg))
    lam = mp.radians(mp.mpf(lon_deg))
    lam0 = mp.radians(central_meridian(zone))

    sphi = mp.sin(phi)
    cphi = mp.cos(phi)
    n = A / mp.sqrt(1 - E2 * sphi * sphi)
    t = mp.tan(phi) ** 2
    c = EP2 * cphi * cphi
    a = (lam - lam0) * cphi

    m = A * (
        (1 - E2 / 4 - 3 * E2**2 / 64 - 5 * E2**3 / 256) * phi
        - (3 * E2 / 8 + 3 * E2**2 / 32 + 45 * E2**3 / 1024) * mp.sin(2 * phi)
        + (15 * E2**2 / 256 + 45 * E2**3 / 1024) * mp.sin(4 * phi)
        - (35 * E2**3 / 3072) * mp.sin(6 * phi)
    )

    x = K0 * n * (
        a
        + (1 - t + c) * a**3 / 6
        + (5 - 18 * t + t * t + 72 * c - 58 * EP2) * a**5 / 120
    )
    y = K0 * (
        m
        + n * mp.tan(phi) * (
            a * a / 2
            + (5 - t + 9 * c + 4 * c * c) * a**4 / 24
            + (61 - 58 * t + t * t + 600 * c - 330 * EP2) * a**6 / 720
        )
    )

    easting = x + FALSE_E
    northing = y if lat_deg >= 0 else y + FALSE_N_SOUTH
    return zone, easting, northing


def krueger_forward(lat_deg, lon_deg):
    """Krueger n-series (alpha coefficients through n^6), independent check."""
    zone = utm_zone(lon_deg)
    phi = mp.radians(mp.mpf(lat_deg))
    lam = mp.radians(mp.mpf(lon_deg)) - mp.radians(central_meridian(zone))

    n = F / (2 - F)
    a_cap = A / (1 + n) * (1 + n**2 / 4 + n**4 / 64 + n**6 / 256)
    alpha = [
        n / 2 - 2 * n**2 / 3 + 5 * n**3 / 16 + 41 * n**4 / 180
        - 127 * n**5 / 288 + 7891 * n**6 / 37800,
        13 * n**2 / 48 - 3 * n**3 / 5 + 557 * n**4 / 1440 + 281 * n**5 / 630
        - 1983433 * n**6 / 1935360,
        61 * n**3 / 240 - 103 * n**4 / 140 + 15061 * n**5 / 26880
        + 167603 * n**6 / 181440,
        49561 * n**4 / 161280 - 179 * n**5 / 168 + 6601661 * n**6 / 7257600,
        34729 * n**5 / 80640 - 3418889 * n**6 / 1995840,
        212378941 * n**6 / 319334400,
    ]

    e = mp.sqrt(E2)
    tau = mp.tan(phi)
    sigma = mp.sinh(e * mp.atanh(e * tau / mp.sqrt(1 + tau * tau)))
    taup = tau * mp.sqrt(1 + sigma * sigma) - sigma * mp.sqrt(1 + tau * tau)

    xip = mp.atan2(taup, mp.cos(lam))
    etap = mp.asinh(mp.sin(lam) / mp.sqrt(taup * taup + mp.cos(lam) ** 2))

    xi = xip
    eta = etap
    for j, aj in enumerate(alpha, start=1):
        xi += aj * mp.sin(2 * j * xip) * mp.cosh(2 * j * etap)
        eta += aj * mp.cos(2 * j * xip) * mp.sinh(2 * j * etap)

    easting = K0 * a_cap * eta + FALSE_E
    northing = K0 * a_cap * xi
    if lat_deg < 0:
        northing += FALSE_N_SOUTH
    return zone, easting, northing


POINTS = [
    (0.0, 3.0),            # central meridian / equator identity
    (0.0, -177.0),         # zone 1
    (40.5, -73.5),         # US east coast
    (-33.8568, 151.2153),  # Sydney
    (-34.55, 138.65),      # SA wine region
    (46.25, 4.75),         # Burgundy
    (44.8, -0.58),         # Bordeaux
    (-45.03, 168.66),      # Central Otago
    (38.3, -122.3),        # Napa
    (-33.05, 18.85),       # Western Cape
    (51.5074, -0.1278),    # London
    (35.6762, 139.6503),   # Tokyo
    (-22.9068, -43.1729),  # Rio
    (64.15, -21.95),       # Reykjavik
    (-54.8, -68.3),        # Ushuaia
    (27.7, 85.3),          # Kathmandu
    (78.2, 15.6),          # Svalbard (high north, within band limit)
    (-77.8, 166.7),        # Antarctic coast (within south band limit)
    (1.29, 103.85),        # Singapore
    (49.49, 8.46),         # Rhine valley
]


def main():
    lines = []
    worst = mp.mpf(0)
    for lat, lon in POINTS:
        z1, e1, n1 = snyder_forward(lat, lon)
        z2, e2, n2 = krueger_forward(lat, lon)
        assert z1 == z2
        de = abs(e1 - e2)
        dn = abs(n1 - n2)
        worst = max(worst, de, dn)
        if de > mp.mpf("0.02") or dn > mp.mpf("0.02"):
            raise SystemExit(
                f"series disagree at ({lat},{lon}): dE={de} dN={dn}"
            )
        hemi = "N" if lat >= 0 else "S"
        lines.append(
            f"{lat:.6f} {lon:.6f} {z1} {hemi} "
            f"{mp.nstr(e1, 14)} {mp.nstr(n1, 14)}"
        )
    with open("tests/data/utm_corpus.txt", "w") as fh:
        fh.write("# lat lon zone hemisphere easting northing\n")
        fh.write("# WGS84 -> UTM reference corpus, PP1395 series at 50 digits\n")
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} points, worst cross-series delta = {mp.nstr(worst, 3)} m")


if __name__ == "__main__":
    main()
