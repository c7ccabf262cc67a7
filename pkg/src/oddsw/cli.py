"""Command-line front end: classify, indices, chart, verify, trace, chern.

Exit codes: 0 success, 2 parse error, 3 boundary condition not self-adjoint,
4 verification failures.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import boundary, indices
from .boundary import (BoundaryData, DDParams, DegenerateParams, DNParams, NDParams, NNParams, build,
                       classify, no_flux_bc, is_phs, is_self_adjoint, rank_failures, EverywhereSingular)
from .bulk import BandLabel, PhysParams, chern_numeric
from .indices import index_vector, nd_from_reduced, nn_from_reduced
from .oracles import count_mergers, default_omega_grid, kx_grid, trace_branches
from .suites import SUITES, run_suite

EXIT_OK, EXIT_PARSE, EXIT_NOT_SA, EXIT_VERIFY = 0, 2, 3, 4


class ParseError(ValueError):
    pass


class NotSelfAdjoint(ValueError):
    pass


FLOAT_KEYS = ("phys.f", "phys.nu", "nd.alpha_re", "nd.alpha_im", "nd.lambda", "nd.lambda_p",
              "nd.m", "nd.q", "nn.mu_re", "nn.mu_im", "nn.mup_re", "nn.mup_im", "nn.l1", "nn.l2",
              "nn.l1p", "nn.l2p", "noflux.a")
VEC_KEYS = tuple(f"dd.{k}" for k in ("a1p", "a2p", "b1", "b2")) + tuple(
    f"raw.{k}" for k in ("a1", "a1p", "a2p", "a2", "b1", "b2"))
# tolerance overrides: config key -> (module, attribute)
TOL_KEYS = {"tol.classify": (boundary, "CLASSIFY_TOL"), "tol.selfadjoint": (boundary, "SA_TOL"),
            "tol.surface": (indices, "SURFACE_TOL")}
FAMILIES = ("DD", "ND", "DN", "NN", "NOFLUX", "RAW")
KEYS = ("family",) + FLOAT_KEYS + VEC_KEYS + tuple(TOL_KEYS)


# ---------------------------------------------------------------- config

def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key == "family":
            fam = raw.upper()
            if fam not in FAMILIES:
                raise ValueError(f"family must be one of {', '.join(FAMILIES)}")
            return fam
        if key in VEC_KEYS:
            xs = [float(x) for x in raw.split(",")]
            if len(xs) != 4:
                raise ValueError("expected four comma-separated reals (re,im,re,im)")
            return (complex(xs[0], xs[1]), complex(xs[2], xs[3]))
        return float(raw)
    except ValueError as e:
        raise ParseError(f"bad value for key {key!r}: {e}") from None


def parse_config(text: str) -> dict:
    """Flat 'key = value' lines; '#' starts a comment."""
    cfg = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {n}: expected 'key = value', got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"line {n}: unknown key {key!r}")
        cfg[key] = _parse_value(key, val)
    return cfg


def load_config(path: str | None, overrides: dict | None = None) -> dict:
    cfg = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        except OSError as e:
            raise ParseError(f"cannot read config {path!r}: {e.strerror}") from None
    for k, v in (overrides or {}).items():
        cfg[k] = _parse_value(k, v)
    return cfg


def phys_of(cfg: dict) -> PhysParams:
    try:
        return PhysParams(cfg.get("phys.f", 1.0), cfg.get("phys.nu", 0.2))
    except ValueError as e:
        raise ParseError(str(e)) from None


def _nd_params(cfg, p, cls=NDParams):
    if "nd.m" in cfg or "nd.q" in cfg:
        if "nd.m" not in cfg or "nd.q" not in cfg:
            raise ParseError("nd.m and nd.q must be given together")
        fp = nd_from_reduced(cfg["nd.m"], cfg["nd.q"], p, cfg.get("nd.lambda_p", 0.0))
        return cls(fp.alpha, fp.lam, fp.lamp)
    alpha = complex(cfg.get("nd.alpha_re", 0.0), cfg.get("nd.alpha_im", 0.0))
    return cls(alpha, cfg.get("nd.lambda", 0.0), cfg.get("nd.lambda_p", 0.0))


def family_params_of(cfg: dict, p: PhysParams):
    fam = cfg.get("family")
    if fam is None:
        raise ParseError("missing key 'family'")
    if fam == "DD":
        d = DDParams()
        return DDParams(*(cfg.get(f"dd.{k}", getattr(d, k)) for k in ("a1p", "a2p", "b1", "b2")))
    if fam == "ND":
        return _nd_params(cfg, p)
    if fam == "DN":
        return _nd_params(cfg, p, DNParams)
    if fam == "NN":
        return NNParams(complex(cfg.get("nn.mu_re", 0.0), cfg.get("nn.mu_im", 0.0)),
                        complex(cfg.get("nn.mup_re", 0.0), cfg.get("nn.mup_im", 0.0)),
                        cfg.get("nn.l1", 0.0), cfg.get("nn.l2", 0.0),
                        cfg.get("nn.l1p", 0.0), cfg.get("nn.l2p", 0.0))
    return None


def boundary_of(cfg: dict, p: PhysParams) -> BoundaryData:
    fam = cfg.get("family")
    try:
        if fam == "NOFLUX":
            return no_flux_bc(cfg.get("noflux.a", 4.0), p)
        if fam == "RAW":
            missing = [k for k in VEC_KEYS if k.startswith("raw.") and k not in cfg]
            if missing:
                raise ParseError(f"missing keys {', '.join(missing)}")
            bd = BoundaryData(*(cfg[f"raw.{k}"] for k in ("a1", "a1p", "a2p", "a2", "b1", "b2")))
        else:
            bd = build(family_params_of(cfg, p))
    except (DegenerateParams, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from None
    if not is_self_adjoint(bd):
        raise NotSelfAdjoint("boundary condition is not self-adjoint")
    return bd


@contextlib.contextmanager
def tolerances(cfg: dict):
    """Temporarily apply tol.* overrides to the module-level tolerances."""
    saved = []
    try:
        for key, (mod, attr) in TOL_KEYS.items():
            if key in cfg:
                saved.append((mod, attr, getattr(mod, attr)))
                setattr(mod, attr, cfg[key])
        yield
    finally:
        for mod, attr, val in saved:
            setattr(mod, attr, val)


# ---------------------------------------------------------------- output helpers

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path: str | None, header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    text = buf.getvalue()
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


# ---------------------------------------------------------------- commands

def cmd_classify(cfg: dict) -> str:
    p = phys_of(cfg)
    with tolerances(cfg):
        bd = boundary_of(cfg, p)
        fam = classify(bd)
        try:
            fails = rank_failures(bd)
        except EverywhereSingular:
            fails = "everywhere"
        line = f"{fam.value}, PHS={'yes' if is_phs(bd) else 'no'}, failures={fails}"
    print(line)
    return line


def cmd_indices(cfg: dict) -> str:
    p = phys_of(cfg)
    with tolerances(cfg):
        iv = index_vector(boundary_of(cfg, p), p)
    line = iv.line()
    print(line)
    return line


ND_AXES = ("m", "q", "alpha", "lambda")
NN_AXES = ("sigma", "delta2", "mu_re", "mu_im")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "Axis":
        try:
            name, lo, hi, count = text.split(":")
            ax = cls(name, float(lo), float(hi), int(count))
        except ValueError:
            raise ParseError(f"axis must be name:min:max:count, got {text!r}") from None
        if ax.count < 1:
            raise ParseError(f"axis {ax.name}: count must be positive")
        return ax

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count) if self.count > 1 else np.array([self.lo])


@dataclass(frozen=True)
class ChartRequest:
    family: str
    x: Axis
    y: Axis
    cfg: dict
    p: PhysParams

    def validate(self):
        valid = {"ND": ND_AXES, "NN": NN_AXES}.get(self.family)
        if valid is None:
            raise ParseError("charts exist for families ND and NN")
        for ax in (self.x, self.y):
            if ax.name not in valid:
                raise ParseError(f"axis {ax.name!r} invalid for {self.family}; valid: {', '.join(valid)}")
        if self.x.name == self.y.name:
            raise ParseError("the two axes must differ")
        if self.family == "ND" and {"m", "q"} & {self.x.name, self.y.name} and \
                {"alpha", "lambda"} & {self.x.name, self.y.name}:
            raise ParseError("sweep either (m, q) or (alpha, lambda)")
        if self.family == "ND" and "m" in (self.x.name, self.y.name):
            ax = self.x if self.x.name == "m" else self.y
            if ax.hi > 0:
                raise ParseError("m must be <= 0")
        if "delta2" in (self.x.name, self.y.name):
            ax = self.x if self.x.name == "delta2" else self.y
            if ax.lo < 0:
                raise ParseError("delta2 must be >= 0")


def _chart_point(args):
    family, cfg, p, names, vals = args
    point = dict(zip(names, vals))
    if family == "ND":
        lamp = cfg.get("nd.lambda_p", 0.0)
        if "m" in point or "q" in point:
            r = indices.reduce_nd(_nd_params(cfg, p), p)
            fp = nd_from_reduced(point.get("m", r.m), point.get("q", r.q), p, lamp)
        else:
            base = _nd_params(cfg, p)
            fp = NDParams(complex(point.get("alpha", base.alpha)), point.get("lambda", base.lam), lamp)
    else:
        base = family_params_of({**cfg, "family": "NN"}, p)
        sigma = point.get("sigma", (base.l1 + base.l2) / 2)
        delta = np.sqrt(point["delta2"]) if "delta2" in point else (base.l1 - base.l2) / 2
        mu = complex(point.get("mu_re", complex(base.mu).real), point.get("mu_im", complex(base.mu).imag))
        fp = nn_from_reduced(sigma, delta, mu, base.mup, base.l1p, base.l2p)
    with tolerances(cfg):
        try:
            iv = index_vector(build(fp), p)
        except indices.EmptyRegion:
            return (*vals, None, None, None, None, None, "empty", 1)
    return (*vals, iv.P, iv.I, iv.E, iv.B, iv.M, iv.verdict.value,
            int(iv.verdict is indices.Verdict.on_boundary))


def cmd_chart(req: ChartRequest, out: str | None = None, jobs: int = 1) -> str:
    req.validate()
    names = (req.x.name, req.y.name)
    tasks = [(req.family, req.cfg, req.p, names, (float(x), float(y)))
             for x in req.x.values() for y in req.y.values()]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_chart_point, tasks, chunksize=64))
    else:
        rows = [_chart_point(t) for t in tasks]
    header = [*names, "P", "I", "E", "B", "M", "verdict", "on_boundary"]
    return write_csv(out, header, rows)


def cmd_verify(suite: str, seed: int, samples: int, p: PhysParams, out: str | None = None):
    rep = run_suite(suite, seed, samples, p)
    d = rep.as_dict()
    report = {k: d[k] for k in ("suite", "seed", "cases", "failures", "max_dev", "records")}
    report["skipped"] = rep.skipped
    text = json.dumps(report, indent=1, default=str)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(f"{suite}: {rep.cases} cases, {rep.failures} failures, {rep.skipped} skipped, "
          f"max_dev={rep.max_dev:.3g}", file=sys.stderr if not out or out == "-" else sys.stdout)
    if not out or out == "-":
        print(text)
    return rep


def cmd_trace(cfg: dict, kx_min: float, kx_max: float, nkx: int, nomega: int, sign: int = 1,
              out: str | None = None):
    p = phys_of(cfg)
    with tolerances(cfg):
        bd = boundary_of(cfg, p)
        ebs = trace_branches(bd, p, kx_grid(kx_min, kx_max, nkx), default_omega_grid(nomega), sign)
    write_csv(out, ["branch_id", "kx", "omega", "annotation"], ebs.rows())
    return ebs


# ---------------------------------------------------------------- argparse

def _add_overrides(ap, skip=()):
    g = ap.add_argument_group("parameter overrides (same keys as the config file)")
    for k in KEYS:
        if k in skip:
            continue
        g.add_argument(f"--{k}", dest=f"set_{k}", metavar="V")


def _overrides(ns) -> dict:
    return {k: getattr(ns, f"set_{k}") for k in KEYS if getattr(ns, f"set_{k}", None) is not None}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oddsw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name in ("classify", "indices"):
        s = sub.add_parser(name)
        s.add_argument("--config")
        _add_overrides(s)

    s = sub.add_parser("chart")
    s.add_argument("--config")
    s.add_argument("--family", required=True, type=str.upper)
    s.add_argument("--x", required=True, help="name:min:max:count")
    s.add_argument("--y", required=True, help="name:min:max:count")
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)
    _add_overrides(s, skip=("family",))

    s = sub.add_parser("verify")
    s.add_argument("--suite", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--out")
    s.add_argument("--config")
    _add_overrides(s)

    s = sub.add_parser("trace")
    s.add_argument("--config")
    s.add_argument("--kx-min", type=float, default=-1000.0)
    s.add_argument("--kx-max", type=float, default=1000.0)
    s.add_argument("--nkx", type=int, default=1201)
    s.add_argument("--grid", type=int, default=1500, help="ω samples per side of the gap")
    s.add_argument("--sign", type=int, choices=(1, -1), default=1)
    s.add_argument("--out")
    _add_overrides(s)

    s = sub.add_parser("chern")
    s.add_argument("--grid", type=int, default=256)
    s.add_argument("--band", choices=[b.name for b in BandLabel], default="plus")
    s.add_argument("--config")
    _add_overrides(s)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = load_config(getattr(ns, "config", None), _overrides(ns))
        if ns.cmd == "classify":
            cmd_classify(cfg)
        elif ns.cmd == "indices":
            cmd_indices(cfg)
        elif ns.cmd == "chart":
            req = ChartRequest(ns.family, Axis.parse(ns.x), Axis.parse(ns.y), cfg, phys_of(cfg))
            cmd_chart(req, ns.out, ns.jobs)
        elif ns.cmd == "verify":
            if ns.suite not in SUITES:
                raise ParseError(f"unknown suite {ns.suite!r}; valid: {', '.join(sorted(SUITES))}")
            rep = cmd_verify(ns.suite, ns.seed, ns.samples, phys_of(cfg), ns.out)
            return EXIT_VERIFY if rep.failures else EXIT_OK
        elif ns.cmd == "trace":
            ebs = cmd_trace(cfg, ns.kx_min, ns.kx_max, ns.nkx, ns.grid, ns.sign, ns.out)
            if ns.sign == 1 and ns.out and ns.out != "-":
                P, I, E = count_mergers(ebs)
                print(f"P={P} I={I} E={E}")
        elif ns.cmd == "chern":
            print(f"{chern_numeric(phys_of(cfg), ns.grid, BandLabel[ns.band]):.12f}")
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except NotSelfAdjoint as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_SA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
