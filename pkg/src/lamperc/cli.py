"""Command-line front end: reproducible verify / spectrum / algebra runs.

All emitted CSV and JSON files are deterministic functions of the resolved
configuration: reruns with the same config digest are byte-identical.
Floats print with 17 significant digits, rationals as "num/den".  Schemas
are documented in docs/formats.md.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._accel import USE_NUMBA, backend_name
from .algebra import run_algebra_suite
from .animals import (Animal, animal_weight, bond_animal_weight,
                      enumerate_bond_animals, enumerate_site_animals)
from .annealed import annealed_spectral_measure, verify_identity
from .groups import GroupError, ResourceCapError, cyclic_lamp_group, make_group
from .spectra import point_spectrum
from .wreath import format_scalar

THREADS_ENV = "LAMPERC_THREADS"

CONFIG_KEYS = ("group", "lamp", "p", "mode", "N", "max-animal",
               "mc-samples", "seed", "arith", "out")


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; keys match the CLI flags."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value.strip("\"'")
    return out


class RunConfig:
    """Resolved run parameters with a canonical digest."""

    def __init__(self, args):
        file_vals = _read_config_file(args.config) if args.config else {}

        def pick(flag, attr, default=None):
            cli = getattr(args, attr)
            if cli is not None:
                return cli
            if flag in file_vals:
                return file_vals[flag]
            return default

        self.group = pick("group", "group")
        if self.group is None:
            raise ValueError("missing required option --group")
        lamp = pick("lamp", "lamp")
        self.lamp = int(lamp) if lamp is not None else None
        p = pick("p", "p")
        self.p = _parse_fraction(str(p)) if p is not None else None
        if self.lamp is None and self.p is None:
            raise ValueError("need --lamp or --p")
        if self.lamp is not None:
            if self.lamp < 1:
                raise ValueError("lamp order must be >= 1")
            implied = Fraction(1, self.lamp)
            if self.p is not None and self.p != implied:
                raise ValueError(
                    f"--p {self.p} contradicts --lamp {self.lamp} (p = 1/|H|)")
            self.p = implied
        if not (0 < self.p < 1):
            raise ValueError("p must lie strictly between 0 and 1")
        self.mode = pick("mode", "mode", "site")
        if self.mode not in ("site", "bond"):
            raise ValueError(f"mode must be site or bond, got {self.mode!r}")
        self.N = int(pick("N", "N", 6))
        if self.N < 0:
            raise ValueError("N must be >= 0")
        self.max_animal = int(pick("max-animal", "max_animal", 8))
        self.mc_samples = int(pick("mc-samples", "mc_samples", 20_000))
        self.seed = int(pick("seed", "seed", 1)) & ((1 << 64) - 1)
        self.arith = pick("arith", "arith", "rational")
        if self.arith not in ("rational", "double"):
            raise ValueError(f"arith must be rational or double, got {self.arith!r}")
        self.out = Path(pick("out", "out", "."))

    def canonical_items(self):
        return (
            ("group", self.group),
            ("lamp", "" if self.lamp is None else str(self.lamp)),
            ("p", f"{self.p.numerator}/{self.p.denominator}"),
            ("mode", self.mode),
            ("N", str(self.N)),
            ("max-animal", str(self.max_animal)),
            ("mc-samples", str(self.mc_samples)),
            ("seed", str(self.seed)),
            ("arith", self.arith),
        )

    @property
    def digest(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def meta(self) -> dict:
        out = dict(self.canonical_items())
        out["configDigest"] = self.digest
        out["version"] = __version__
        return out


def _add_common(sub):
    sub.add_argument("--group", help="group descriptor (Z, Z2-square, Z2-tri, Zn:m, free:k, tree:d)")
    sub.add_argument("--lamp", type=int, help="lamp group order |H|; sets p = 1/|H|")
    sub.add_argument("--p", help="percolation probability, e.g. 1/3 (percolation-only runs)")
    sub.add_argument("--mode", choices=("site", "bond"))
    sub.add_argument("--N", type=int, help="maximum moment order")
    sub.add_argument("--max-animal", type=int, dest="max_animal",
                     help="animal enumeration size cap")
    sub.add_argument("--mc-samples", type=int, dest="mc_samples")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--arith", choices=("rational", "double"))
    sub.add_argument("--out", help="output directory (default .)")
    sub.add_argument("--config", help="key=value config file; flags take precedence")


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _configure_threads():
    n = os.environ.get(THREADS_ENV)
    if n and USE_NUMBA:
        import numba

        numba.set_num_threads(max(1, int(n)))


# ---------------------------------------------------------------------------
# verify

def _moments_csv(report) -> str:
    lines = ["n,oracle,value,error"]
    for row in report.rows:
        lines.append(f"{row.n},wreath,{format_scalar(row.wreath)},0")
        if row.path_sum is not None:
            lines.append(f"{row.n},path_sum,{format_scalar(row.path_sum)},0")
        lines.append(f"{row.n},animal,{format_scalar(row.animal_value)},"
                     f"{format_scalar(row.animal_tail)}")
        lines.append(f"{row.n},mc,{format_scalar(row.mc_mean)},"
                     f"{format_scalar(row.mc_stderr)}")
    return "\n".join(lines) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.lamp is None:
        raise ValueError("verify needs --lamp: the identity holds at p = 1/|H|")
    g = make_group(cfg.group)
    h = cyclic_lamp_group(cfg.lamp)
    report = verify_identity(g, h, cfg.N, cfg.mode, cfg.max_animal,
                             cfg.mc_samples, cfg.seed, cfg.arith)
    _write_text(cfg.out / "moments.csv", _moments_csv(report))
    rows = []
    for r in report.rows:
        rows.append({
            "n": r.n,
            "wreath": format_scalar(r.wreath),
            "pathSum": None if r.path_sum is None else format_scalar(r.path_sum),
            "animalValue": format_scalar(r.animal_value),
            "animalTail": format_scalar(r.animal_tail),
            "mcMean": format_scalar(r.mc_mean),
            "mcStderr": format_scalar(r.mc_stderr),
            "okPath": bool(r.ok_path),
            "okAnimal": bool(r.ok_animal),
            "okMc": bool(r.ok_mc),
        })
    body = {"meta": cfg.meta(), "backend": backend_name(),
            "passed": bool(report.passed), "rows": rows}
    _write_text(cfg.out / "report.json", _json_dumps(body))
    for r in report.rows:
        status = "ok" if r.ok else "FAIL"
        print(f"n={r.n:2d} wreath={format_scalar(r.wreath)} {status}")
    if not report.passed:
        failing = [r.n for r in report.rows if not r.ok]
        print(f"identity failure at n = {failing}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# spectrum

def _animal_json(a, g, p):
    if isinstance(a, Animal):
        return {
            "vertices": [g.key_str(v) for v in a.vertices],
            "boundary": [g.key_str(v) for v in a.boundary],
            "weight": format_scalar(animal_weight(a, p)),
        }
    return {
        "vertices": [g.key_str(v) for v in a.vertices],
        "edges": [g.edge_str(e) for e in a.edges],
        "boundaryEdges": [g.edge_str(e) for e in a.boundary_edges],
        "weight": format_scalar(bond_animal_weight(a, p)),
    }


def cmd_spectrum(cfg: RunConfig) -> int:
    g = make_group(cfg.group)
    values = point_spectrum(g, cfg.max_animal, cfg.mode)
    lines = ["index,value"]
    lines += [f"{i},{format_scalar(v)}" for i, v in enumerate(values)]
    _write_text(cfg.out / "lambda.csv", "\n".join(lines) + "\n")
    if cfg.lamp is not None:
        h = cyclic_lamp_group(cfg.lamp)
        ids = annealed_spectral_measure(g, h, cfg.max_animal, cfg.mode)
        body = ids.to_json()
        body["meta"].update(cfg.meta())
        _write_text(cfg.out / "ids.json", _json_dumps(body))
    if cfg.mode == "site":
        animals = enumerate_site_animals(g, cfg.max_animal)
    else:
        animals = enumerate_bond_animals(g, cfg.max_animal)
    body = {"meta": cfg.meta(),
            "animals": [_animal_json(a, g, cfg.p) for a in animals]}
    _write_text(cfg.out / "animals.json", _json_dumps(body))
    print(f"{len(values)} spectrum points, {len(animals)} animals")
    return 0


# ---------------------------------------------------------------------------
# algebra checks

def cmd_algebra_checks(cfg: RunConfig) -> int:
    if cfg.lamp is None:
        raise ValueError("algebra-checks needs --lamp")
    g = make_group(cfg.group)
    h = cyclic_lamp_group(cfg.lamp)
    results = run_algebra_suite(g, h, cfg.max_animal)
    for r in results:
        status = "ok" if r.passed else "FAIL"
        note = f"  ({r.note})" if r.note else ""
        print(f"{status:4s} {r.name}: residual {r.residual:.3e} "
              f"tol {r.tolerance:.0e}{note}")
    body = {"meta": cfg.meta(), "backend": backend_name(),
            "passed": bool(all(r.passed for r in results)),
            "checks": [{"name": r.name, "residual": format_scalar(r.residual),
                        "tolerance": format_scalar(r.tolerance),
                        "passed": bool(r.passed), "note": r.note}
                       for r in results]}
    _write_text(cfg.out / "algebra.json", _json_dumps(body))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lamperc",
        description="Spectra of lamplighter walks and percolation clusters")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("verify", cmd_verify), ("spectrum", cmd_spectrum),
                     ("algebra-checks", cmd_algebra_checks)):
        sp = sub.add_parser(name)
        _add_common(sp)
        sp.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args)
        _configure_threads()
        return args.func(cfg)
    except (GroupError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
