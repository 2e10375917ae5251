"""Curve data for the rate, BEP and coverage figure setups.

Writes one whitespace-separated file per panel into the output directory:
first column is the swept quantity, then one column per curve, with a
``#`` header naming them.  Run ``python scripts/figure_curves.py --help``.
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

import numpy as np

from cellmgf.fading import eta_mu, kappa_mu, rayleigh, shadowed_kappa_mu
from cellmgf.interference import NetworkConfig
from cellmgf.metrics import bep, bep_high_sir, coverage, ergodic_rate, modulation_constants
from cellmgf.sinrmgf import LinkSpec

NET = NetworkConfig(1e-4, 3.0)
QPSK = modulation_constants("QPSK")


def rate_vs_kappa_shadowed(kappas):
    # m = m_I = 3, mu_I = 1, kappa_I = kappa
    cols = {}
    for mu in (1, 2, 4):
        cols[f"mu={mu}"] = [ergodic_rate(LinkSpec(shadowed_kappa_mu(1, k, mu, 3),
                                                  shadowed_kappa_mu(1, k, 1, 3), NET)).value
                            for k in kappas]
    return "kappa", kappas, cols


def rate_vs_snr_shadowed(snrs):
    # mu = mu_I = 2, kappa = kappa_I, m = m_I
    cols = {}
    for lam in (1e-4, 1e-2):
        for k in (1.0, 20.0):
            for m in (0.5, 10.0):
                model = shadowed_kappa_mu(1, k, 2, m)
                cols[f"lambda={lam:g},kappa={k:g},m={m:g}"] = [
                    ergodic_rate(LinkSpec(model, model, NetworkConfig(lam, 3.0, 1.0, 10 ** (-s / 10)))).value
                    for s in snrs]
    return "snr_dB", snrs, cols


def bep_vs_kappa_shadowed(kappas):
    cols = {}
    for mu in (1, 2, 4):
        cols[f"mu={mu}"] = [bep(LinkSpec(shadowed_kappa_mu(1, k, mu, 3),
                                         shadowed_kappa_mu(1, k, 1, 3), NET), QPSK).value for k in kappas]
    return "kappa", kappas, cols


def bep_vs_sir(sirs_db):
    # Rayleigh interference, exact and high-SIR curves
    cols = {}
    for M in (4, 16):
        mod = modulation_constants("MPSK" if M == 4 else "MQAM", M)
        for k, mu, m in ((1.0, 1.0, 1.0), (2.0, 2.0, 1.0), (5.0, 1.0, 2.0)):
            base = shadowed_kappa_mu(1, k, mu, m)
            tag = f"M={M},kappa={k:g},mu={mu:g},m={m:g}"
            sirs = 10 ** (np.asarray(sirs_db) / 10)
            cols[tag] = [bep(LinkSpec(shadowed_kappa_mu(s, k, mu, m), rayleigh(),
                                      NetworkConfig(1e-4, 4.0)), mod).value for s in sirs]
            cols[tag + ",high_sir"] = [bep_high_sir(base, 1.0, 4.0, s, mod).value for s in sirs]
    return "sir_dB", sirs_db, cols


def rate_vs_kappa_kappa_mu(kappas):
    cols = {}
    for mu in (1, 2, 4):
        cols[f"mu={mu}"] = [ergodic_rate(LinkSpec(kappa_mu(1, max(k, 1e-9), mu),
                                                  kappa_mu(1, max(k, 1e-9), 1), NET)).value for k in kappas]
    return "kappa", kappas, cols


def rate_vs_density(lams):
    cols = {}
    for snr in (60.0, 90.0):
        for mu in (1, 2, 4):
            model = kappa_mu(1, 1.5, mu)
            cols[f"snr={snr:g}dB,mu={mu}"] = [
                ergodic_rate(LinkSpec(model, model, NetworkConfig(lam, 3.0, 1.0, 10 ** (-snr / 10))))
                .value for lam in lams]
    return "lambda", lams, cols


def coverage_vs_threshold(ts_db):
    cols = {}
    for k in (0.5, 5.0):
        for mu in (1, 2, 4):
            link = LinkSpec(kappa_mu(1, k, mu), kappa_mu(1, k, 1), NET)
            cols[f"kappa={k:g},mu={mu}"] = [coverage(link, 10 ** (t / 10)).value for t in ts_db]
    return "T_dB", ts_db, cols


def bep_vs_eta(etas):
    cols = {}
    for mu in (0.5, 1.0, 2.0):
        cols[f"mu={mu:g}"] = [bep(LinkSpec(eta_mu(1, e, mu), eta_mu(1, e, 1.0), NET), QPSK).value
                              for e in etas]
    return "eta", etas, cols


PANELS = {
    "rate_vs_kappa_shadowed": (rate_vs_kappa_shadowed, np.linspace(0, 20, 21)),
    "rate_vs_snr_shadowed": (rate_vs_snr_shadowed, np.linspace(-10, 30, 9)),
    "bep_vs_kappa_shadowed": (bep_vs_kappa_shadowed, np.linspace(0, 20, 21)),
    "bep_vs_sir": (bep_vs_sir, np.linspace(0, 40, 17)),
    "rate_vs_kappa_kappa_mu": (rate_vs_kappa_kappa_mu, np.linspace(0, 20, 21)),
    "rate_vs_density": (rate_vs_density, np.geomspace(1e-6, 1e-1, 11)),
    "coverage_vs_threshold": (coverage_vs_threshold, np.linspace(-10, 20, 31)),
    "bep_vs_eta": (bep_vs_eta, np.geomspace(1e-2, 1e2, 21)),
}


def write_panel(path: Path, xname, xs, cols):
    names = list(cols)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {xname} " + " ".join(n.replace(' ', '_') for n in names) + "\n")
        for i, x in enumerate(xs):
            fh.write(" ".join(repr(float(v)) for v in [x] + [cols[n][i] for n in names]) + "\n")


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--out", default="figure_data", help="output directory")
    p.add_argument("panels", nargs="*", help="panels to compute (default all): " + ", ".join(PANELS))
    args = p.parse_args()
    unknown = set(args.panels) - set(PANELS)
    if unknown:
        p.error(f"unknown panels: {', '.join(sorted(unknown))}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.panels or PANELS:
        fn, xs = PANELS[name]
        t0 = time.perf_counter()
        xname, xs, cols = fn(xs)
        write_panel(out / f"{name}.dat", xname, xs, cols)
        print(f"{name}: {len(xs)} points x {len(cols)} curves in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
