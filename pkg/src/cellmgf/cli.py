"""Command-line front end: single metrics, parameter sweeps and the
analytic-versus-simulation validation matrix.

Configuration files are flat ``key = value`` lines with dotted keys (``#``
starts a comment).  Unknown keys are errors.  ``--set key=value`` overrides
single keys and ``--sweep key=spec`` (at most twice) sweeps them, where spec
is ``a,b,c`` or ``start:stop:count`` optionally followed by ``(log)``.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import fading, metrics, simulator
from .interference import NetworkConfig
from .metrics import AbateWhittParams, MetricResult, XiQuadrature
from .simulator import WORKERS_ENV, SimConfig
from .sinrmgf import LinkSpec, MgfQuadrature, mgf_sinr_generic, mgf_sinr_result

__all__ = [
    "ConfigError",
    "RunConfig",
    "SweepSpec",
    "SCHEMA",
    "parse_config",
    "dump_config",
    "parse_sweep",
    "build_run",
    "run",
    "emit_plotdata",
    "VALIDATION_MATRIX",
    "validate",
    "main",
]


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending key."""


_MODEL_KEYS = ("model", "omega", "kappa", "mu", "m", "eta", "K")


def _str(v):
    return str(v)


def _bool(v):
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _int(v):
    f = float(v)
    if f != int(f):
        raise ValueError(f"not an integer: {v!r}")
    return int(f)


# key -> (parser, default); None defaults mean "unset"
SCHEMA = {
    "network.lambda": (float, 1e-4),
    "network.alpha": (float, 3.0),
    "network.power": (float, 1.0),
    "network.noise": (float, 0.0),
    "network.snr_dB": (float, None),
    "link.sir_dB": (float, None),
    "interferer.same_as_desired": (_bool, False),
    "metric.T": (float, None),
    "metric.T_dB": (float, None),
    "metric.s": (float, 1.0),
    "metric.s_imag": (float, 0.0),
    "metric.method": (_str, None),
    "metric.name": (_str, "coverage"),
    "modulation.name": (_str, "QPSK"),
    "modulation.M": (_int, None),
    "numerics.outer_nodes": (_int, 4097),
    "numerics.outer_cutoff": (float, 40.0),
    "numerics.adaptive_tol": (float, 1e-10),
    "numerics.xi_step": (float, 1.0 / 16),
    "numerics.aw_A": (float, 18.4),
    "numerics.aw_m": (_int, 11),
    "numerics.aw_n": (_int, 15),
    "sim.snapshots": (_int, 100_000),
    "sim.seed": (_int, 0),
    "sim.window_radius": (float, None),
    "sim.tail_epsilon": (float, 0.1),
}
for _side in ("desired", "interferer"):
    SCHEMA[f"{_side}.model"] = (_str, "rayleigh")
    for _k in _MODEL_KEYS[1:]:
        SCHEMA[f"{_side}.{_k}"] = (float, 1.0 if _k == "omega" else None)

ALIASES = {
    "T": "metric.T",
    "T_dB": "metric.T_dB",
    "s": "metric.s",
    "lambda": "network.lambda",
    "alpha": "network.alpha",
    "noise": "network.noise",
    "snr_dB": "network.snr_dB",
    "sir_dB": "link.sir_dB",
    "kappa": "desired.kappa",
    "mu": "desired.mu",
    "m": "desired.m",
    "eta": "desired.eta",
    "K": "desired.K",
    "omega": "desired.omega",
    "M": "modulation.M",
    "seed": "sim.seed",
    "snapshots": "sim.snapshots",
}

# which shape keys each model accepts, and its constructor
_MODELS = {
    "shadowed_kappa_mu": (("kappa", "mu", "m"), fading.shadowed_kappa_mu),
    "kappa_mu": (("kappa", "mu"), fading.kappa_mu),
    "eta_mu": (("eta", "mu"), fading.eta_mu),
    "nakagami": (("m",), fading.nakagami),
    "rayleigh": ((), fading.rayleigh),
    "rice": (("K",), fading.rice),
}

_METHODS = {
    "coverage": ("inversion", "direct"),
    "rate": ("exact", "nonoise", "mgf_oracle"),
    "bep": ("exact", "high_sir"),
    "mgf": ("rotation", "front_factor", "generic"),
    "simulate": ("monte_carlo",),
}


def canonical_key(key: str) -> str:
    key = key.strip()
    key = ALIASES.get(key, key)
    if key not in SCHEMA:
        raise ConfigError(f"unknown configuration key {key!r}")
    return key


def _coerce(key: str, value):
    parser = SCHEMA[key][0]
    try:
        return parser(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines into a {canonical key: typed value} dict."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        key = canonical_key(key)
        out[key] = _coerce(key, value)
    return out


def dump_config(values: dict) -> str:
    """Serialise the effective (explicitly set) configuration; parse_config
    reads it back unchanged."""
    lines = []
    for key in sorted(values):
        v = values[key]
        lines.append(f"{key} = {v!r}" if isinstance(v, float) else f"{key} = {v}")
    return "\n".join(lines) + "\n"


def _get(values: dict, key: str):
    return values.get(key, SCHEMA[key][1])


def _build_model(values: dict, side: str, source: str | None = None):
    src = source or side
    name = _get(values, f"{src}.model").strip().lower()
    if name not in _MODELS:
        raise ConfigError(f"{src}.model: unknown model {name!r}")
    allowed, ctor = _MODELS[name]
    kwargs = {}
    for k in _MODEL_KEYS[2:]:
        v = _get(values, f"{src}.{k}")
        if v is None:
            continue
        if k not in allowed:
            raise ConfigError(f"{src}.{k} is not a parameter of model {name}")
        kwargs[k] = v
    omega = _get(values, f"{side}.omega")
    try:
        return ctor(omega=omega, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{src}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    link: LinkSpec
    modulation: metrics.ModulationScheme
    quadrature: MgfQuadrature
    xi: XiQuadrature
    aw: AbateWhittParams
    sim: SimConfig
    T: float | None
    s: complex
    method: str | None
    metric_name: str


def build_run(values: dict) -> RunConfig:
    """Validate a parsed configuration and assemble the typed run objects."""
    for key in values:
        if key not in SCHEMA:
            raise ConfigError(f"unknown configuration key {key!r}")
    if _get(values, "interferer.same_as_desired"):
        for k in _MODEL_KEYS[2:] + ("model",):
            if f"interferer.{k}" in values:
                raise ConfigError(f"interferer.{k} conflicts with interferer.same_as_desired")
        interferer = _build_model(values, "interferer", source="desired")
    else:
        interferer = _build_model(values, "interferer")
    desired = _build_model(values, "desired")
    sir_db = _get(values, "link.sir_dB")
    if sir_db is not None:
        if "desired.omega" in values:
            raise ConfigError("link.sir_dB conflicts with desired.omega")
        desired = _rescale(desired, interferer.omega * 10 ** (sir_db / 10))
    power = _get(values, "network.power")
    noise = _get(values, "network.noise")
    snr_db = _get(values, "network.snr_dB")
    if snr_db is not None:
        if "network.noise" in values:
            raise ConfigError("network.snr_dB conflicts with network.noise")
        noise = power / 10 ** (snr_db / 10)
    try:
        net = NetworkConfig(_get(values, "network.lambda"), _get(values, "network.alpha"),
                            power, noise)
    except ValueError as exc:
        raise ConfigError(f"network: {exc}") from None
    T = _get(values, "metric.T")
    T_db = _get(values, "metric.T_dB")
    if T_db is not None:
        if T is not None:
            raise ConfigError("metric.T_dB conflicts with metric.T")
        T = 10 ** (T_db / 10)
    if T is not None and not T > 0:
        raise ConfigError("metric.T must be positive")
    try:
        mod = metrics.modulation_constants(_get(values, "modulation.name"),
                                           _get(values, "modulation.M"))
    except ValueError as exc:
        raise ConfigError(f"modulation: {exc}") from None
    try:
        q = MgfQuadrature(_get(values, "numerics.outer_nodes"),
                          _get(values, "numerics.outer_cutoff"),
                          _get(values, "numerics.adaptive_tol"))
        xq = XiQuadrature(_get(values, "numerics.xi_step"))
        aw = AbateWhittParams(_get(values, "numerics.aw_A"), _get(values, "numerics.aw_m"),
                              _get(values, "numerics.aw_n"))
    except ValueError as exc:
        raise ConfigError(f"numerics: {exc}") from None
    try:
        sim = SimConfig(_get(values, "sim.snapshots"), _get(values, "sim.seed"),
                        _get(values, "sim.window_radius"), _get(values, "sim.tail_epsilon"))
    except ValueError as exc:
        raise ConfigError(f"sim: {exc}") from None
    s = complex(_get(values, "metric.s"), _get(values, "metric.s_imag"))
    name = _get(values, "metric.name")
    if name not in ("coverage", "rate", "bep"):
        raise ConfigError(f"metric.name must be coverage, rate or bep, got {name!r}")
    return RunConfig(LinkSpec(desired, interferer, net), mod, q, xq, aw, sim, T, s,
                     _get(values, "metric.method"), name)


def _rescale(model, omega: float):
    return replace(model, omega=omega)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    key: str
    values: tuple


def parse_sweep(text: str) -> SweepSpec:
    """``key=a,b,c`` or ``key=start:stop:count`` with an optional ``(log)``."""
    if "=" not in text:
        raise ConfigError(f"sweep {text!r}: expected key=spec")
    key, spec = (p.strip() for p in text.split("=", 1))
    key = canonical_key(key)
    spec = spec.replace(" ", "")
    log = spec.endswith("(log)")
    if log:
        spec = spec[:-5]
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError("range must be start:stop:count")
            a, b, n = float(parts[0]), float(parts[1]), _int(parts[2])
            if n < 1:
                raise ValueError("count must be >= 1")
            if log:
                if not (a > 0 and b > 0):
                    raise ValueError("log sweeps need positive endpoints")
                vals = np.geomspace(a, b, n) if n > 1 else np.array([a])
            else:
                vals = np.linspace(a, b, n) if n > 1 else np.array([a])
            vals = [float(v) for v in vals]
        else:
            if log:
                raise ValueError("(log) applies to start:stop:count ranges")
            vals = [v for v in spec.split(",") if v]
            if not vals:
                raise ValueError("empty value list")
    except ValueError as exc:
        raise ConfigError(f"sweep {key}: {exc}") from None
    return SweepSpec(key, tuple(_coerce(key, v) for v in vals))


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

def _compute(cmd: str, rc: RunConfig) -> MetricResult:
    link = rc.link
    method = rc.method or _METHODS[cmd][0]
    if method not in _METHODS[cmd]:
        raise ConfigError(f"metric.method {method!r} is not valid for {cmd}")
    if cmd == "coverage":
        if rc.T is None:
            raise ConfigError("coverage needs metric.T or metric.T_dB")
        if method == "direct":
            return metrics.coverage_direct(link, rc.T, q=rc.quadrature)
        return metrics.coverage(link, rc.T, rc.aw, rc.quadrature)
    if cmd == "rate":
        if method == "nonoise":
            return metrics.ergodic_rate_nonoise(link, xq=rc.xi)
        if method == "mgf_oracle":
            return metrics.ergodic_rate_mgf_oracle(link, q=rc.quadrature)
        return metrics.ergodic_rate(link, rc.xi)
    if cmd == "bep":
        if method == "high_sir":
            itf = link.interferer
            if not isinstance(itf, fading.NakagamiParams):
                raise ConfigError("bep high_sir needs a nakagami or rayleigh interferer")
            return metrics.bep_high_sir(link.desired, itf.m, link.network.alpha,
                                        link.desired.omega / itf.omega, rc.modulation)
        return metrics.bep(link, rc.modulation, rc.xi)
    if cmd == "mgf":
        if method == "generic":
            if rc.s.imag != 0:
                raise ConfigError("the generic MGF route needs a real s")
            r = mgf_sinr_generic(link, rc.s.real, rc.quadrature)
        else:
            r = mgf_sinr_result(link, rc.s if rc.s.imag else rc.s.real, rc.quadrature, method)
        return MetricResult(r.value, r.error_estimate, "quadrature")
    if cmd == "simulate":
        if rc.metric_name == "coverage":
            if rc.T is None:
                raise ConfigError("simulated coverage needs metric.T or metric.T_dB")
            return simulator.estimate_coverage(link, rc.T, rc.sim)
        if rc.metric_name == "rate":
            return simulator.estimate_rate(link, rc.sim)
        return simulator.estimate_bep(link, rc.modulation, rc.sim)
    raise ConfigError(f"unknown subcommand {cmd!r}")


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _fmt(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return f"{float(v.real)!r}{float(v.imag):+.17g}j"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def run(cmd: str, values: dict, sweeps: list[SweepSpec] | tuple = ()) -> list[dict]:
    """One row per grid point, in grid order.  Configuration errors raise
    ConfigError; numerical failures give a row with status "failed"."""
    if len(sweeps) > 2:
        raise ConfigError("at most two sweep axes are supported")
    keys = [s.key for s in sweeps]
    if len(set(keys)) != len(keys):
        raise ConfigError("sweep keys must be distinct")
    grid = list(itertools.product(*(s.values for s in sweeps)))
    # validate every grid point before any work so config errors fail fast
    configs = []
    for point in grid:
        v = dict(values)
        v.update(zip(keys, point))
        rc = build_run(v)
        method = rc.method or _METHODS[cmd][0]
        if method not in _METHODS[cmd]:
            raise ConfigError(f"metric.method {method!r} is not valid for {cmd}")
        configs.append(rc)

    def one(i):
        row = dict(zip(keys, grid[i]))
        t0 = time.perf_counter()
        try:
            res = _compute(cmd, configs[i])
            row.update(value=res.value, error_estimate=res.error_estimate, method=res.method,
                       status="ok")
        except ConfigError:
            raise
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            row.update(value=math.nan, error_estimate=math.nan, method="", status="failed")
            print(f"cellmgf: grid point {i} failed: {exc}", file=sys.stderr)
        row["wall_time_ms"] = 1e3 * (time.perf_counter() - t0)
        return row

    workers = _workers()
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, range(len(grid))))
    return [one(i) for i in range(len(grid))]


COLUMNS = ("value", "error_estimate", "method", "wall_time_ms", "status")


def to_csv(rows: list[dict], sweep_keys: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(sweep_keys) + list(COLUMNS))
    for row in rows:
        w.writerow([_fmt(row[k]) for k in sweep_keys]
                   + [_fmt(row[c]) if c != "wall_time_ms" else f"{row[c]:.3f}" for c in COLUMNS])
    return buf.getvalue()


def emit_plotdata(csv_text: str, setup: str = "") -> str:
    """Whitespace-separated columns (sweep values, value, error_estimate) with
    a ``#`` header naming the axes and the setup; failed rows become NaN."""
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV") from None
    if "value" not in header or "error_estimate" not in header:
        raise ValueError("CSV lacks value/error_estimate columns")
    iv = header.index("value")
    cols = header[:iv] + ["value", "error_estimate"]
    idx = list(range(iv)) + [iv, header.index("error_estimate")]
    lines = [f"# {' '.join(cols)}"]
    if setup:
        lines.append(f"# setup: {setup}")
    for rec in reader:
        if len(rec) != len(header):
            raise ValueError(f"malformed CSV row {rec!r}")
        out = []
        for i in idx:
            try:
                out.append(repr(float(complex(rec[i]).real)) if "j" in rec[i]
                           else repr(float(rec[i])))
            except ValueError:
                out.append(rec[i] or "nan")
        lines.append(" ".join(out))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation matrix
# ---------------------------------------------------------------------------

def _cfg(desired: dict, interferer: dict | None = None, **net) -> dict:
    v = {f"desired.{k}": val for k, val in desired.items()}
    if interferer is None:
        v["interferer.same_as_desired"] = True
    else:
        v.update({f"interferer.{k}": val for k, val in interferer.items()})
    v.update({f"network.{k}": val for k, val in net.items()})
    return v


# twelve configurations covering every fading family, with and without noise
VALIDATION_MATRIX = {
    "rayleigh_a4": _cfg({"model": "rayleigh"}, alpha=4.0),
    "rayleigh_a3_noise": _cfg({"model": "rayleigh"}, alpha=3.0, snr_dB=50.0),
    "nakagami2": _cfg({"model": "nakagami", "m": 2.0}, alpha=3.0),
    "nakagami0.7_vs_rayleigh": _cfg({"model": "nakagami", "m": 0.7}, {"model": "rayleigh"},
                                    alpha=3.5),
    "skm_k5_mu2_m2": _cfg({"model": "shadowed_kappa_mu", "kappa": 5.0, "mu": 2.0, "m": 2.0},
                          alpha=3.0),
    "skm_k1_mu2_m1_noise": _cfg({"model": "shadowed_kappa_mu", "kappa": 1.0, "mu": 2.0,
                                 "m": 1.0}, alpha=3.0, snr_dB=50.0),
    "kappa_mu_k1.5_mu2": _cfg({"model": "kappa_mu", "kappa": 1.5, "mu": 2.0}, alpha=3.0),
    "rice_K3": _cfg({"model": "rice", "K": 3.0}, alpha=4.0),
    "eta_mu_e0.3_mu1": _cfg({"model": "eta_mu", "eta": 0.3, "mu": 1.0}, alpha=3.0),
    "eta_mu_e0.5_mu1.5_vs_rayleigh": _cfg({"model": "eta_mu", "eta": 0.5, "mu": 1.5},
                                          {"model": "rayleigh"}, alpha=3.0),
    "skm_k10_vs_nakagami3": _cfg({"model": "shadowed_kappa_mu", "kappa": 10.0, "mu": 1.0,
                                  "m": 5.0}, {"model": "nakagami", "m": 3.0}, alpha=3.0),
    "kappa_mu_k20_vs_skm": _cfg({"model": "kappa_mu", "kappa": 20.0, "mu": 2.0},
                                {"model": "shadowed_kappa_mu", "kappa": 1.0, "mu": 1.0,
                                 "m": 3.0}, alpha=3.0),
}

VALIDATION_T_DB = (-5.0, 0.0, 5.0, 10.0)
VALIDATION_COLUMNS = ("config", "quantity", "analytic", "analytic_error", "monte_carlo",
                      "standard_error", "z", "pass")


def validate(snapshots: int = 1_000_000, seed: int = 1, configs: dict | None = None,
             n_sigma: float = 3.0) -> list[dict]:
    """Analytic coverage (four thresholds), rate and QPSK BEP against Monte
    Carlo for every configuration; a row passes when the gap is within
    ``n_sigma`` standard errors."""
    rows = []
    qpsk = metrics.modulation_constants("QPSK")
    for name, values in (configs or VALIDATION_MATRIX).items():
        rc = build_run(values)
        link = rc.link
        sim = SimConfig(snapshots, seed)
        checks = [(f"coverage@{t:g}dB", lambda t=t: metrics.coverage(link, 10 ** (t / 10)),
                   lambda t=t: simulator.estimate_coverage(link, 10 ** (t / 10), sim))
                  for t in VALIDATION_T_DB]
        checks.append(("rate", lambda: metrics.ergodic_rate(link),
                       lambda: simulator.estimate_rate(link, sim)))
        checks.append(("bep_qpsk", lambda: metrics.bep(link, qpsk),
                       lambda: simulator.estimate_bep(link, qpsk, sim)))
        for quantity, analytic, mc in checks:
            a = analytic()
            m = mc()
            z = (a.value - m.value) / m.error_estimate if m.error_estimate > 0 else (
                0.0 if a.value == m.value else math.inf)
            rows.append(dict(config=name, quantity=quantity, analytic=a.value,
                             analytic_error=a.error_estimate, monte_carlo=m.value,
                             standard_error=m.error_estimate, z=z,
                             **{"pass": abs(z) <= n_sigma}))
    return rows


def _validation_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VALIDATION_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in VALIDATION_COLUMNS])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cellmgf", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=("coverage", "rate", "bep", "mgf", "simulate", "validate"))
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one configuration key (repeatable)")
    p.add_argument("--sweep", action="append", default=[], metavar="KEY=SPEC",
                   help="sweep a key over a,b,c or start:stop:count[(log)] (at most twice)")
    p.add_argument("--output", help="write to this file instead of standard output")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--snapshots", type=int, help="Monte Carlo snapshot count")
    p.add_argument("--format", choices=("csv", "plotdata"), default="csv")
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective configuration and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        values = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config(fh.read()))
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set {item!r}: expected KEY=VALUE")
            k, v = item.split("=", 1)
            k = canonical_key(k)
            values[k] = _coerce(k, v.strip())
        if args.seed is not None:
            values["sim.seed"] = _coerce("sim.seed", args.seed)
        if args.snapshots is not None:
            values["sim.snapshots"] = _coerce("sim.snapshots", args.snapshots)
        if args.dump_config:
            sys.stdout.write(dump_config(values))
            return 0
        if args.command == "validate":
            if args.sweep:
                raise ConfigError("validate does not take sweeps")
            rows = validate(snapshots=_get(values, "sim.snapshots") if "sim.snapshots" in values
                            else 1_000_000, seed=_get(values, "sim.seed"))
            text = _validation_csv(rows)
            status = 0 if all(r["pass"] for r in rows) else 1
        else:
            sweeps = [parse_sweep(s) for s in args.sweep]
            rows = run(args.command, values, sweeps)
            text = to_csv(rows, [s.key for s in sweeps])
            if args.format == "plotdata":
                setup = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(values.items()))
                text = emit_plotdata(text, f"{args.command} {setup}".strip())
            status = 0
    except ConfigError as exc:
        print(f"cellmgf: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cellmgf: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
