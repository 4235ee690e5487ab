"""Regenerate golden.json from mpmath at 50 digits.

Only geometry helpers are taken from the package (distance draws); every
number below is evaluated independently of its numerical code.
"""

import json
from pathlib import Path

import mpmath as mp
import numpy as np

from swiptevt.frozen import baseline_config
from swiptevt.scenario import build_links, sample_max

mp.mp.dps = 50


def rates(d1, d2, zeta, snr_db, eta, alpha, lam):
    ps = mp.mpf(10) ** (mp.mpf(snr_db) / 10)
    theta = mp.mpf(d1) ** zeta / ((1 - lam) * ps)
    nu = (1 - lam) * (1 - alpha) * mp.mpf(d2) ** zeta / (eta * (2 * alpha + lam * (1 - alpha)))
    return theta, nu


def link_cdf(theta, nu, g):
    theta, nu, g = mp.mpf(theta), mp.mpf(nu), mp.mpf(g)
    tail = mp.quad(lambda x: mp.exp(-theta * x - nu * g / x), [g, g + 1 / theta, mp.inf])
    return 1 - theta * tail


def u_sum(theta, nu, g):
    return mp.fsum(mp.exp(-mp.mpf(t) * g - mp.mpf(n)) for t, n in zip(theta, nu))


def capacity(theta, nu):
    theta = [mp.mpf(t) for t in theta]
    nu = [mp.mpf(n) for n in nu]

    def tail(g):
        return -mp.expm1(-u_sum(theta, nu, g)) / (1 + g)

    scale = 1 / min(theta)
    pts = [0, scale, 5 * scale, 20 * scale, 60 * scale, mp.inf]
    return mp.quad(tail, pts) / (2 * mp.log(2))


def main():
    out = {}
    out["E1_1"] = str(mp.expint(1, 1))
    out["expint"] = [[n, x, str(mp.expint(n, x))] for n, x in
                     [(0, 0.5), (1, 1e-3), (2, 1.0), (5, 0.3), (10, 2.5), (30, 5.0), (3, 40.0), (60, 100.0)]]
    th, nu = rates(0.65, 0.6, mp.mpf("2.7"), 25, mp.mpf("0.9"), mp.mpf("0.3"), mp.mpf("0.4"))
    out["baseline_link"] = {"theta": str(th), "nu": str(nu)}
    out["link_cdf"] = [[t, n, g, str(link_cdf(t, n, g))] for t, n, g in
                       [(1.0, 0.2, 1.0), (1.0, 0.2, 0.1), (2.0, 1.5, 0.7), (0.5, 3.0, 4.0), (5.0, 0.05, 0.02)]]
    nus = [mp.mpf(k) / 10 for k in range(1, 6)]
    out["b_fully_inid"] = {"beta": 1.5, "nu": [0.1, 0.2, 0.3, 0.4, 0.5],
                           "b": str(mp.log(mp.fsum(mp.exp(-v) for v in nus)) / mp.mpf("1.5"))}

    cfg = baseline_config(20)
    links = build_links(cfg)
    theta = [mp.mpf(float(t)) for t in links.theta]
    nus20 = [mp.mpf(float(v)) for v in links.nu]
    median = float(np.median(sample_max(links, 100_000, 5)))
    out["baseline20"] = {
        "median_gamma": median,
        "u_at_median": str(u_sum(theta, nus20, mp.mpf(median))),
        "outage_1dB": str(mp.exp(-u_sum(theta, nus20, mp.mpf(10) ** mp.mpf("0.1")))),
        "capacity": str(capacity(theta, nus20)),
    }
    path = Path(__file__).with_name("golden.json")
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
