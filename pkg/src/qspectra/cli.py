"""Command-line front end: spectra, eigenvectors, measures, identity suites.

Every command emits a JSON report envelope (or CSV for grid data) carrying
the tool version, the echoed configuration, the results with the tolerances
they were validated against, a residual summary, and the wall time.  Exit
status is 0 only if every residual is within tolerance; numerical failures
exit 1 naming the failing identity, usage errors exit 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .errors import QSpectraError
from .qkernel import QBase, jackson_qbessel3, theta, xi
from .operator_a import (
    ExtensionParam,
    SpectrumWindow,
    og_ramanujan,
    og_varphi,
    point_spectrum_a,
    psi_pm,
    secular,
    secular_scale,
)
from .operator_b import (
    BParams,
    ac_density,
    build_spectral_measure,
    f_n,
    point_spectrum_b,
    spectral_measure,
    wronskian_fg,
)
from .oracle import DEFAULT_SEED, eigen_tridiag, truncate_a, truncate_b

SUITES = ("triple-product", "xi", "og-ramanujan", "og-qbessel",
          "wronskians", "measure-completeness")


@dataclass
class RunConfig:
    """Parsed command-line request."""

    command: str
    q: float
    alpha: float | None = None
    t: float | None = None          # math.inf encodes the extension at infinity
    window: tuple[int, int] | None = None
    m_max: int | None = None
    m: int | None = None
    k: int = 0
    l: int = 0
    grid: int = 200
    suite: str = "all"
    operator: str = "b"
    set_spec: list[tuple[float, float]] | None = None
    seed: int = DEFAULT_SEED
    output: str | None = None
    format: str = "json"
    threads: int | None = None


@dataclass
class ReportEnvelope:
    tool_version: str
    command: str
    config: dict
    results: dict
    residuals: dict = field(default_factory=dict)
    wall_time_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(entry["passed"] for entry in self.residuals.values())


def _summarize(name: str, values: Sequence[float], tolerance: float,
               residuals: dict) -> None:
    vals = [float(v) for v in values]
    residuals[name] = {
        "max": max(vals),
        "mean": sum(vals) / len(vals),
        "tolerance": tolerance,
        "passed": max(vals) <= tolerance,
    }


# --------------------------------------------------------------------------
# Command implementations
# --------------------------------------------------------------------------

def _run_spec_a(cfg: RunConfig, residuals: dict) -> dict:
    t = ExtensionParam.infinity() if math.isinf(cfg.t) else ExtensionParam(cfg.t)
    window = SpectrumWindow(*cfg.window)
    sp = point_spectrum_a(t, cfg.q, window)
    out = {"s": sp.s, "t": "inf" if t.is_infinite else t.value,
           "positive_branch": [], "negative_branch": []}
    res = []
    for branch, key in ((sp.positive_branch, "positive_branch"),
                        (sp.negative_branch, "negative_branch")):
        for n, x in branch:
            r = abs(secular(x, t, cfg.q)) / secular_scale(x, t, cfg.q)
            res.append(r)
            out[key].append({"n": n, "x": x, "secular_residual": r,
                             "tolerance": 1e-9})
    _summarize("secular", res, 1e-9, residuals)
    return out


def _run_spec_b(cfg: RunConfig, residuals: dict) -> dict:
    p = BParams(cfg.alpha, cfg.q)
    points = point_spectrum_b(p, cfg.m_max)
    return {"delta": p.delta, "beta": p.beta,
            "eigenvalues": [{"m": m, "value": v} for m, v in points]}


def _run_eigvec_b(cfg: RunConfig, residuals: dict) -> dict:
    from .operator_b import eigenvector_b, eigenvector_norm

    p = BParams(cfg.alpha, cfg.q)
    window = SpectrumWindow(*cfg.window)
    entries = eigenvector_b(cfg.m, p, window)
    nc = eigenvector_norm(cfg.m, p, "closed_form")
    nd = eigenvector_norm(cfg.m, p, "direct_sum")
    r = abs(nc - nd) / nc
    _summarize("eigenvector-norm", [r], 1e-10, residuals)
    return {
        "m": cfg.m,
        "eigenvalue": cfg.q ** cfg.m / cfg.alpha + cfg.alpha * cfg.q ** (-cfg.m),
        "entries": [{"j": j, "v": v} for j, v in zip(window.indices(), entries)],
        "norm_closed_form": nc,
        "norm_direct_sum": nd,
        "norm_residual": r,
        "tolerance": 1e-10,
    }


def _run_measure_b(cfg: RunConfig, residuals: dict) -> dict:
    p = BParams(cfg.alpha, cfg.q)
    measure = build_spectral_measure(cfg.k, cfg.l, p)
    total = spectral_measure(cfg.k, cfg.l, cfg.set_spec, p)
    out = {
        "k": cfg.k, "l": cfg.l,
        "set": "R" if cfg.set_spec is None else cfg.set_spec,
        "atoms": [{"m": m, "location": loc, "weight": w}
                  for m, loc, w in measure.atoms],
        "total_mass": total,
    }
    if cfg.set_spec is None:
        expect = 1.0 if cfg.k == cfg.l else 0.0
        r = abs(total - expect)
        out["completeness_residual"] = r
        out["tolerance"] = 1e-6
        _summarize("measure-completeness", [r], 1e-6, residuals)
    return out


def _run_density_grid(cfg: RunConfig, residuals: dict) -> dict:
    p = BParams(cfg.alpha, cfg.q)
    rows = []
    for i in range(1, cfg.grid + 1):
        phi = math.pi * i / (cfg.grid + 1)
        fk = f_n(cfg.k, complex(math.cos(phi), math.sin(phi)), p)
        fl = f_n(cfg.l, complex(math.cos(phi), math.sin(phi)), p)
        rows.append({
            "phi": phi,
            "density_kl": ac_density(phi, cfg.k, cfg.l, p),
            "re_f_k": fk.real, "im_f_k": fk.imag,
            "re_f_l": fl.real, "im_f_l": fl.imag,
        })
    return {"k": cfg.k, "l": cfg.l, "grid": cfg.grid, "rows": rows}


def _run_oracle(cfg: RunConfig, residuals: dict) -> dict:
    window = SpectrumWindow(*cfg.window)
    if cfg.operator == "a":
        m = truncate_a(cfg.q, window)
    else:
        m = truncate_b(BParams(cfg.alpha, cfg.q), window)
    dec = eigen_tridiag(m, seed=cfg.seed)
    out = {"operator": cfg.operator, "window": list(cfg.window),
           "seed": dec.seed, "eigenvalues": [float(v) for v in dec.values]}
    if cfg.operator == "b":
        p = BParams(cfg.alpha, cfg.q)
        res = []
        matches = []
        for mm, val in point_spectrum_b(p, p.delta + 6):
            err = float(np.min(np.abs(dec.values - val)))
            matches.append({"m": mm, "value": val, "oracle_gap": err,
                            "tolerance": 1e-8})
            res.append(err)
        out["explicit_vs_oracle"] = matches
        _summarize("oracle-spec-b", res, 1e-8, residuals)
    return out


# --------------------------------------------------------------------------
# Verification suites
# --------------------------------------------------------------------------

def _suite_triple_product(q: float) -> list[float]:
    rng = np.random.default_rng(421)
    out = []
    for qv in (0.3, q, 0.8):
        for _ in range(15):
            r = rng.uniform(0.1, 3.0)
            ang = rng.uniform(-math.pi, math.pi)
            x = r * complex(math.cos(ang), math.sin(ang))
            a = theta(x, qv, "product")
            b = theta(x, qv, "bilateral_sum")
            out.append(abs(a - b) / (1.0 + abs(a)))
    return out


def _suite_xi(q: float) -> list[float]:
    rng = np.random.default_rng(422)
    out = []
    for _ in range(12):
        r = rng.uniform(math.sqrt(q) * 1.05, 0.95 / math.sqrt(q))
        ang = rng.uniform(-2.6, 2.6)
        z = r * complex(math.cos(ang), math.sin(ang))
        ml = xi(z, q, "mittag_leffler")
        la = xi(z, q, "laurent")
        cf = xi(z, q, "closed_form")
        out.append(abs(ml - la) / (1.0 + abs(ml)))
        out.append(abs(ml - cf) / (1.0 + abs(ml)))
    for _ in range(10):
        r = rng.choice([rng.uniform(0.05, math.sqrt(q) * 0.9),
                        rng.uniform(1.1 / math.sqrt(q), 4.0)])
        ang = rng.uniform(-2.6, 2.6)
        z = r * complex(math.cos(ang), math.sin(ang))
        ml = xi(z, q, "mittag_leffler")
        cf = xi(z, q, "closed_form")
        out.append(abs(ml - cf) / (1.0 + abs(ml)))
    return out


def _suite_og_ramanujan(q: float) -> list[float]:
    return [
        og_ramanujan("first", 0.8, q, ell=0),
        og_ramanujan("first", 0.8, q, ell=2),
        og_ramanujan("second", 0.8, q, ell=1),
        og_ramanujan("third", 0.6, q, k=1, ell=1),
        og_ramanujan("third", 0.6, q, k=1, ell=0),
        og_varphi("first", 1.1, q, m=0, n=0),
        og_varphi("second", 1.1, q, m=0, n=1),
        og_varphi("dual", 0.9, q, k=2, ell=2),
    ]


def _suite_og_qbessel(q: float, alpha: float) -> list[float]:
    from .operator_b import qbessel_orthogonality

    p = BParams(alpha, q)
    out = []
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            out.append(qbessel_orthogonality(m, n, p))
    for x in (0.2, 0.5, 0.8):
        s = sum(abs(jackson_qbessel3(j, x, q)) ** 2 for j in range(-60, 61))
        target = 1.0 / (1.0 - x * x)
        out.append(abs(s - target) / target)
    return out


def _suite_wronskians(q: float, alpha: float) -> list[float]:
    out = []
    x = 1.3
    target = 2j * math.sqrt(q)
    for n in range(-2, 13):
        w = q ** (-n) * (psi_pm(n + 1, x, q, "+") * psi_pm(n, x, q, "-")
                         - psi_pm(n, x, q, "+") * psi_pm(n + 1, x, q, "-"))
        out.append(abs(w - target) / abs(target))
    p = BParams(alpha, q)
    for z in (0.3, 0.45 + 0.2j):
        wd = wronskian_fg(z, p, "direct")
        wc = wronskian_fg(z, p, "closed_form")
        out.append(abs(wd - wc) / abs(wc))
    return out


def _suite_measure_completeness(q: float, alpha: float) -> list[float]:
    p = BParams(alpha, q)
    out = []
    for k in (-2, 0, 3):
        out.append(abs(spectral_measure(k, k, None, p) - 1.0))
    out.append(abs(spectral_measure(0, 2, None, p)))
    return out


_SUITE_TOLS = {
    "triple-product": 1e-12,
    "xi": 1e-11,
    "og-ramanujan": 1e-9,
    "og-qbessel": 1e-10,
    "wronskians": 1e-11,
    "measure-completeness": 1e-6,
}


def _run_verify(cfg: RunConfig, residuals: dict) -> dict:
    alpha = cfg.alpha if cfg.alpha is not None else 0.8
    chosen = SUITES if cfg.suite == "all" else (cfg.suite,)
    details = {}
    for name in chosen:
        if name == "triple-product":
            vals = _suite_triple_product(cfg.q)
        elif name == "xi":
            vals = _suite_xi(cfg.q)
        elif name == "og-ramanujan":
            vals = _suite_og_ramanujan(cfg.q)
        elif name == "og-qbessel":
            vals = _suite_og_qbessel(cfg.q, alpha)
        elif name == "wronskians":
            vals = _suite_wronskians(cfg.q, alpha)
        elif name == "measure-completeness":
            vals = _suite_measure_completeness(cfg.q, alpha)
        else:
            raise QSpectraError(f"unknown suite {name!r}")
        _summarize(name, vals, _SUITE_TOLS[name], residuals)
        details[name] = {"residuals": [float(v) for v in vals],
                         "tolerance": _SUITE_TOLS[name]}
    return {"suites": details}


# --------------------------------------------------------------------------
# Dispatch, serialization, entry point
# --------------------------------------------------------------------------

_COMMANDS = {
    "spec-a": _run_spec_a,
    "spec-b": _run_spec_b,
    "eigvec-b": _run_eigvec_b,
    "measure-b": _run_measure_b,
    "density-grid": _run_density_grid,
    "verify": _run_verify,
    "oracle": _run_oracle,
}


def run(cfg: RunConfig) -> ReportEnvelope:
    """Execute one command and assemble its report envelope."""
    start = time.perf_counter()
    residuals: dict = {}
    results = _COMMANDS[cfg.command](cfg, residuals)
    wall = int(round(1000.0 * (time.perf_counter() - start)))
    config_echo = {k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
                   for k, v in asdict(cfg).items() if v is not None}
    return ReportEnvelope(
        tool_version=__version__,
        command=cfg.command,
        config=config_echo,
        results=results,
        residuals=residuals,
        wall_time_ms=wall,
    )


def _write_csv(env: ReportEnvelope, stream: io.TextIOBase) -> None:
    rows = env.results.get("rows")
    if rows is None:
        raise QSpectraError("CSV output is only available for density-grid")
    writer = csv.writer(stream)
    header = ["phi", "density_kl", "re_f_k", "im_f_k", "re_f_l", "im_f_l"]
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(row[h]) for h in header])


def _emit(env: ReportEnvelope, cfg: RunConfig) -> None:
    if cfg.format == "csv":
        if cfg.output:
            with open(cfg.output, "w", newline="") as fh:
                _write_csv(env, fh)
        else:
            _write_csv(env, sys.stdout)
        return
    payload = json.dumps(asdict(env), indent=2)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def _parse_window(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _parse_t(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "-inf", "infinity"):
        return math.inf
    return float(text)


def _parse_set(text: str) -> list[tuple[float, float]] | None:
    if text.strip().lower() in ("all", "r"):
        return None
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        out.append((float(lo), float(hi)))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qspectra",
        description="Spectral analysis of two doubly infinite Jacobi matrices",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, alpha=False):
        p.add_argument("--q", type=float, required=True)
        if alpha:
            p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--output", type=str, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    pa = sub.add_parser("spec-a", help="explicit point spectrum of an extension A_t")
    common(pa)
    pa.add_argument("--t", type=_parse_t, required=True,
                    help="extension parameter; 'inf' for the extension at infinity")
    pa.add_argument("--window", type=_parse_window, required=True, metavar="LO:HI")

    pb = sub.add_parser("spec-b", help="explicit point spectrum of B")
    common(pb, alpha=True)
    pb.add_argument("--m-max", dest="m_max", type=int, required=True)

    pe = sub.add_parser("eigvec-b", help="eigenvector entries and norm for B")
    common(pe, alpha=True)
    pe.add_argument("--m", type=int, required=True)
    pe.add_argument("--window", type=_parse_window, required=True, metavar="LO:HI")

    pm = sub.add_parser("measure-b", help="spectral measure element E_{k,l}")
    common(pm, alpha=True)
    pm.add_argument("--k", type=int, default=0)
    pm.add_argument("--l", type=int, default=0)
    pm.add_argument("--set", dest="set_spec", type=_parse_set, default=None,
                    metavar="A:B[,C:D...]|all")

    pd = sub.add_parser("density-grid", help="AC density sampled on a phi grid")
    common(pd, alpha=True)
    pd.add_argument("--k", type=int, default=0)
    pd.add_argument("--l", type=int, default=0)
    pd.add_argument("--grid", type=int, default=200)

    pv = sub.add_parser("verify", help="run a named identity suite")
    common(pv)
    pv.add_argument("--alpha", type=float, default=None)
    pv.add_argument("--suite", choices=SUITES + ("all",), default="all")

    po = sub.add_parser("oracle", help="truncated-matrix eigenvalues")
    common(po)
    po.add_argument("--alpha", type=float, default=None)
    po.add_argument("--operator", choices=("a", "b"), default="b")
    po.add_argument("--window", type=_parse_window, required=True, metavar="LO:HI")
    po.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    threads = os.environ.get("QSPECTRA_THREADS")
    kwargs = {k: v for k, v in vars(args).items() if v is not None}
    if threads is not None:
        kwargs["threads"] = max(1, int(threads))
    cfg = RunConfig(**kwargs)
    if cfg.command == "oracle" and cfg.operator == "b" and cfg.alpha is None:
        print("qspectra: oracle --operator b requires --alpha", file=sys.stderr)
        return 2
    try:
        env = run(cfg)
    except QSpectraError as exc:
        print(f"qspectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(env, cfg)
    if not env.passed:
        failing = [name for name, entry in env.residuals.items()
                   if not entry["passed"]]
        print(f"qspectra: tolerance exceeded in: {', '.join(failing)}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
