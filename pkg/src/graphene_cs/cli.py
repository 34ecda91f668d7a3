"""Command-line front end: tabular data for every observable plus the regression runner.

Every subcommand writes CSV (header row, 17 significant digits) to stdout or
``--out``.  Exit codes: 0 success, 1 invalid input, 2 numerical failure,
3 regression failure.
"""
import argparse
import csv
import io
import math
import os
import re
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .coherent import Family, build_coherent
from .dynamics import density_movie, period_report
from .errors import NumericalError, ValidationError
from .ladder import LadderFunction
from .numerics import GridSpec
from .observables import default_grid, field_profile, mean_energy, moments_spectral
from .physics import PhysicalParams, System, spectrum

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_REGRESSION = 0, 1, 2, 3

DEFAULTS = {
    "system": "bilayer",
    "family": "A",
    "f": None,
    "r": "1",
    "theta": None,
    "omega_c": None,
    "omega": None,
    "k": "1",
    "vf": "1",
    "b_field": None,
    "grid_min": None,
    "grid_max": None,
    "grid_points": None,
    "times": "0,2pi,4pi",
    "tol": "1e-12",
    "nmax": "10",
    "mode": "generic",
    "out": None,
}
SUBCOMMAND_DEFAULTS = {
    "profile": {"theta": "0,pi/4,pi/2"},
    "uncertainty": {"r": "0:3:0.25", "theta": "0"},
    "energy": {"r": "0:3:0.25", "b_field": "1/4,1/6,1/8"},
}

_NUMBER = re.compile(
    r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(?P<pi>pi)?"
    r"(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_number(text: str) -> float:
    """A float, optionally a multiple or fraction of ``pi``: ``0.5``, ``pi/4``, ``3pi/8``, ``1/6``."""
    s = text.strip().lower()
    m = _NUMBER.match(s)
    if not s or m is None or (m.group("coef") is None and m.group("pi") is None):
        raise ValidationError(f"cannot parse number {text!r}")
    value = float(m.group("coef")) if m.group("coef") is not None else 1.0
    if m.group("pi"):
        value *= math.pi
    if m.group("den"):
        den = float(m.group("den"))
        if den == 0:
            raise ValidationError(f"division by zero in {text!r}")
        value /= den
    if not math.isfinite(value):
        raise ValidationError(f"non-finite number {text!r}")
    return value


def parse_values(text: str) -> List[float]:
    """Comma list of numbers, or an inclusive range ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (parse_number(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"empty or invalid range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    values = [parse_number(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValidationError("empty value list")
    return values


def read_config(path: str) -> Dict[str, str]:
    """Plain ``key=value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise ValidationError(f"cannot read config {path}: {err}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _single(values: List[float], name: str) -> float:
    if len(values) != 1:
        raise ValidationError(f"--{name.replace('_', '-')} takes a single value here")
    return values[0]


class RunConfig:
    """Resolved settings: flags over config file over per-command and global defaults."""

    def __init__(self, command: str, flags: Dict[str, Optional[str]], file_values: Dict[str, str]):
        merged = dict(DEFAULTS)
        merged.update(SUBCOMMAND_DEFAULTS.get(command, {}))
        merged.update(file_values)
        merged.update({k: v for k, v in flags.items() if v is not None})
        self.raw = merged
        self.command = command
        self.system = System.parse(merged["system"])
        self.family = Family.parse(merged["family"])
        self.ladder = LadderFunction.from_tag(merged["f"]) if merged["f"] else None
        self.tol = parse_number(merged["tol"])
        self.mode = merged["mode"]
        self.out = merged["out"]
        self.nmax = int(_single(parse_values(merged["nmax"]), "nmax"))
        if self.nmax < 0:
            raise ValidationError("--nmax must be non-negative")

    def values(self, key: str) -> List[float]:
        return parse_values(self.raw[key]) if self.raw[key] is not None else []

    def params(self, b_field: Optional[float] = None) -> PhysicalParams:
        kw = {"k": _single(self.values("k"), "k"), "v_fermi": _single(self.values("vf"), "vf")}
        omega_c = self.values("omega_c")
        omega = self.values("omega")
        if b_field is None and self.raw["b_field"] is not None and self.command != "energy":
            b_field = _single(self.values("b_field"), "b_field")
        if b_field is not None:
            if omega_c and abs(omega_c[0] - b_field) > 1e-12 * b_field:
                raise ValidationError("--b-field and --omega-c disagree")
            params = PhysicalParams.from_field(b_field, **kw)
        elif omega_c:
            params = PhysicalParams(omega_c_star=_single(omega_c, "omega_c"), **kw)
        elif omega:
            return PhysicalParams.from_omega(_single(omega, "omega"), **kw)
        else:
            params = PhysicalParams(**kw)
        if omega:
            # explicit omega is only checked for consistency
            PhysicalParams(omega_c_star=params.omega_c_star, omega=_single(omega, "omega"), **kw)
        return params

    def grid(self, exp, params: PhysicalParams):
        lo, hi, pts = self.raw["grid_min"], self.raw["grid_max"], self.raw["grid_points"]
        if lo is None and hi is None:
            points = int(parse_number(pts)) if pts is not None else None
            return default_grid(exp, params, points)
        if lo is None or hi is None:
            raise ValidationError("--grid-min and --grid-max go together")
        points = int(parse_number(pts)) if pts is not None else 801
        return GridSpec(parse_number(lo), parse_number(hi), points)

    def alpha(self):
        return _single(self.values("r"), "r"), _single(self.values("theta") or [0.0], "theta")

    def expansion(self, alpha=None):
        alpha = self.alpha() if alpha is None else alpha
        return build_coherent(self.family, self.ladder, alpha, tol=self.tol, system=self.system)


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        raise NumericalError(f"non-finite value {v} in output table")
    return format(v, ".17g")


def write_table(header: Sequence[str], rows, out: Optional[str]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise NumericalError("ragged output row")
        writer.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise ValidationError(f"cannot write {out}: {err}") from None


def cmd_spectrum(cfg: RunConfig):
    e = spectrum(cfg.nmax + 1, cfg.system, cfg.params())
    rows = [(n, e[n], e[n + 1] - e[n]) for n in range(cfg.nmax + 1)]
    return ("n", "energy", "gap"), rows


def cmd_coherent(cfg: RunConfig):
    exp = cfg.expansion()
    rows = [(n, a.real, a.imag, abs(a) ** 2) for n, a in enumerate(exp.coefficients)]
    return ("n", "re_a", "im_a", "weight"), rows


def cmd_uncertainty(cfg: RunConfig):
    rows = []
    for r in cfg.values("r"):
        for th in cfg.values("theta"):
            rep = moments_spectral(cfg.expansion((r, th)))
            rows.append((r, th) + rep.as_row())
    return ("r", "theta", "mean_q", "mean_p", "mean_q2", "mean_p2", "product"), rows


def cmd_profile(cfg: RunConfig):
    params = cfg.params()
    rows = []
    r = _single(cfg.values("r"), "r")
    for th in cfg.values("theta"):
        exp = cfg.expansion((r, th))
        prof = field_profile(exp, cfg.grid(exp, params), mode=cfg.mode, params=params)
        rows.extend(zip([th] * prof.x.size, prof.x, prof.rho, prof.jx, prof.jy))
    return ("theta", "x", "rho", "jx_reduced", "jy_reduced"), rows


def cmd_evolve(cfg: RunConfig):
    params = cfg.params()
    exp = cfg.expansion()
    times = cfg.values("times")
    frames = density_movie(exp, cfg.grid(exp, params), times, params, cfg.mode)
    rows = []
    for t, prof in zip(times, frames):
        rows.extend(zip([t] * prof.x.size, prof.x, prof.rho))
    return ("t", "x", "rho"), rows


def cmd_energy(cfg: RunConfig):
    rows = []
    for b in cfg.values("b_field"):
        params = cfg.params(b_field=b)
        for r in cfg.values("r"):
            e = mean_energy(cfg.family, r, params, cfg.system, method="generic", f=cfg.ladder, tol=cfg.tol)
            rows.append((b, r, e))
    return ("b_field", "r", "mean_energy"), rows


def cmd_period(cfg: RunConfig):
    params = cfg.params()
    est = period_report(cfg.family, cfg.alpha(), cfg.system, params, cfg.ladder, cfg.tol)
    row = (est.mean_energy, est.lower, est.upper, est.tau, est.tau / math.pi, est.revival)
    return ("mean_energy", "lower_level", "upper_level", "tau", "tau_over_pi", "revival_l2"), [row]


def cmd_regress(cfg: RunConfig) -> int:
    from .regress import run_all

    results = run_all()
    lines = [res.line() for res in results]
    failed = sum(not res.passed for res in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_REGRESSION if failed else EXIT_OK


COMMANDS = {
    "spectrum": (cmd_spectrum, "Landau levels and gaps: n, energy, gap."),
    "coherent": (cmd_coherent, "Coherent-state coefficients: n, re_a, im_a, weight."),
    "uncertainty": (cmd_uncertainty, "Moments and uncertainty product over an (r, theta) sweep."),
    "profile": (cmd_profile, "Density and reduced currents (m*/hbar) J per theta."),
    "evolve": (cmd_evolve, "Evolved density table: t, x, rho."),
    "energy": (cmd_energy, "Mean energy over r for each field value."),
    "period": (cmd_period, "Mean energy, bounding levels, quasi-period and revival metric."),
    "regress": (cmd_regress, "Run the golden-value and property checks."),
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the invalid-input code rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphene-cs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("state")
    g.add_argument("--system", choices=["bilayer", "monolayer"])
    g.add_argument("--family", type=str.upper, choices=["A", "B", "C"])
    g.add_argument("--f", choices=["unit", "shift1", "shift2"], help="ladder function (default: the family's)")
    g.add_argument("--r", help="|alpha|; list or start:stop:step for sweeps")
    g.add_argument("--theta", help="arg(alpha); accepts pi multiples such as pi/4")
    g.add_argument("--tol", help="coefficient tail tolerance (default 1e-12)")
    g.add_argument("--nmax", help="highest level for 'spectrum' (default 10)")
    g.add_argument("--mode", choices=["generic", "closed_form"], help="profile evaluation route")
    p = common.add_argument_group("physical parameters")
    p.add_argument("--omega-c", dest="omega_c", help="cyclotron frequency omega_c*")
    p.add_argument("--omega", help="oscillator frequency 2 m* omega_c*/hbar")
    p.add_argument("--k", help="wave number along y")
    p.add_argument("--vf", help="Fermi velocity")
    p.add_argument("--b-field", dest="b_field", help="field strength (list for 'energy')")
    s = common.add_argument_group("sampling and output")
    s.add_argument("--grid-min", dest="grid_min")
    s.add_argument("--grid-max", dest="grid_max")
    s.add_argument("--grid-points", dest="grid_points")
    s.add_argument("--times", help="evolution times, sorted (default 0,2pi,4pi)")
    s.add_argument("--out", help="output path (default stdout)")
    s.add_argument("--config", help="key=value file; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k in DEFAULTS}
    try:
        file_values = read_config(args.config) if args.config else {}
        cfg = RunConfig(args.command, flags, file_values)
        handler = COMMANDS[args.command][0]
        if args.command == "regress":
            return handler(cfg)
        header, rows = handler(cfg)
        write_table(header, rows, cfg.out)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
