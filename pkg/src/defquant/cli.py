"""Command-line frontend.

    defquant spectrum --system box --s 0.01 --n-max 10 --method both
    defquant dos --system powerlaw --nu 4 --energies 0.5 5 10
    defquant thermo --system harmonic --s 0.1 --T 0.5 1 2 --route both
    defquant sweep --system harmonic --axis s --start 0 --stop 0.2 --count 5 --observable U --T 1
    defquant selftest

Exit codes: 0 success, 2 domain/precondition error, 3 every sweep row
failed, 4 configuration or argument error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from . import __version__
from .checks import run_checks
from .config import SYSTEM_KINDS, OutputSpec, RunConfig, load_config, system_to_dict, system_from_dict
from .core import (
    DivergenceDetected,
    Family,
    FixedPointSaturated,
    Harmonic,
    PowerLaw,
    SpectrumResult,
    validate_system,
)
from .errors import (
    ConfigError,
    DefquantError,
    DomainError,
    OutOfDomain,
    PreconditionError,
    UnsupportedDeformation,
    UnsupportedDomain,
)
from .spectrum import closed_form_spectrum, solve_spectrum_ode
from .statmech import (
    DosSpec,
    Equipartition,
    ExactRoute,
    FirstOrderRoute,
    IdealGas,
    Phonon,
    PowerLawGas,
    deformed_dos,
    thermo_point,
    unperturbed_dos,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_SWEEP_FAILED = 3
EXIT_CONFIG = 4

_SYSTEM_FLAGS = {"a": "a", "m": "m", "omega0": "omega0", "k": "k", "nu": "nu", "ground_energy": "ground_energy"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p):
    g = p.add_argument_group("configuration")
    g.add_argument("--config", metavar="PATH", help="JSON run configuration; flags override it")
    g.add_argument("--system", choices=sorted(SYSTEM_KINDS))
    g.add_argument("--a", type=float, help="box width")
    g.add_argument("--m", type=float, help="particle mass")
    g.add_argument("--omega0", type=float, help="oscillator frequency")
    g.add_argument("--k", type=float, help="power-law strength")
    g.add_argument("--nu", type=float, help="power-law exponent")
    g.add_argument("--ground-energy", dest="ground_energy", type=float, help="level at n = 0")
    g.add_argument("--s", type=float, help="deformation parameter (inverse energy)")
    g.add_argument("--family", choices=["linear", "exponential"])
    g.add_argument("--hbar", type=float)
    g.add_argument("--boltzmann", type=float)
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--out", metavar="PATH", help="output file (default: standard output)")


def _law_flags(p):
    p.add_argument("--law", choices=["system", "ideal", "powerlaw", "phonon"], default="system",
                   help="unperturbed energy law for the first-order route")
    p.add_argument("--N", type=int, default=1, help="particle number for the energy laws")
    p.add_argument("--A", type=float, default=1.0, help="phonon coefficient")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="defquant", description="Deformed semiclassical spectra and thermodynamics.")
    parser.add_argument("--version", action="version", version=f"defquant {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="energy levels")
    _common(p)
    p.add_argument("--n-max", dest="n_max", type=int, default=10)
    p.add_argument("--method", choices=["ode", "closed", "both"], default="ode")
    p.add_argument("--E0", dest="E0", type=float, help="override the ground level")

    p = sub.add_parser("dos", help="density of states on an energy grid")
    _common(p)
    p.add_argument("--energies", nargs=3, type=float, metavar=("START", "STOP", "COUNT"), default=[0.5, 5.0, 10])

    p = sub.add_parser("thermo", help="Z, U, C on a temperature grid")
    _common(p)
    p.add_argument("--T", dest="T", nargs="+", type=float, required=True)
    p.add_argument("--route", choices=["exact", "first-order", "both"], default="exact")
    _law_flags(p)

    p = sub.add_parser("sweep", help="one observable along a parameter axis")
    _common(p)
    p.add_argument("--axis", choices=["s", "T", "nu"], required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--observable", choices=["Z", "U", "C", "E_n"], required=True)
    p.add_argument("--n", type=int, default=1, help="level index for E_n")
    p.add_argument("--T", dest="T", type=float, default=1.0, help="temperature for Z, U, C")
    p.add_argument("--route", choices=["exact", "first-order"], default="exact")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    _law_flags(p)

    p = sub.add_parser("selftest", help="run the oracle checks")
    p.add_argument("--only", type=int, nargs="+", help="check numbers to run")
    return parser


def resolve_config(args) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    sys_doc = system_to_dict(cfg.system)
    if args.system and args.system != sys_doc["kind"]:
        sys_doc = {"kind": args.system}
    for flag, key in _SYSTEM_FLAGS.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        allowed = {f for f in system_to_dict(SYSTEM_KINDS[sys_doc["kind"]]()) if f != "kind"}
        if key not in allowed:
            raise ConfigError(f"--{flag.replace('_', '-')} does not apply to system {sys_doc['kind']}")
        sys_doc[key] = value
    system = system_from_dict(sys_doc)

    d = cfg.deformation
    if args.s is not None:
        d = replace(d, s=args.s)
    if args.family is not None:
        d = replace(d, family=Family(args.family))
    units = cfg.units
    if args.hbar is not None or args.boltzmann is not None:
        units = type(units)(
            args.hbar if args.hbar is not None else units.hbar,
            args.boltzmann if args.boltzmann is not None else units.boltzmann,
        )
    output = OutputSpec(args.format or cfg.output.format, args.out if args.out is not None else cfg.output.path)
    return replace(cfg, system=system, deformation=d, units=units, output=output)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def render(columns, rows, meta, fmt) -> str:
    if fmt == "json":
        records = [dict(zip(columns, r)) for r in rows]
        doc = {"metadata": meta, "records": records}
        return json.dumps(_json_safe(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    footer = meta.get("footer")
    if footer:
        buf.write("# " + " ".join(f"{k}={_cell(v)}" for k, v in footer.items()) + "\n")
    return buf.getvalue()


def _emit(text, cfg: RunConfig):
    if cfg.output.path:
        with open(cfg.output.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(cfg, command, **extra):
    meta = {"tool": "defquant", "version": __version__, "command": command, "config": cfg.to_dict()}
    meta.update(extra)
    return meta


def _cutoff_dict(res: SpectrumResult):
    c = res.cutoff
    if isinstance(c, DivergenceDetected):
        return {"cutoff": "divergence", "n_star": c.n_star}
    if isinstance(c, FixedPointSaturated):
        return {"cutoff": "fixed_point", "E_f": c.E_f}
    return {"cutoff": "level_cap"}


def cmd_spectrum(cfg: RunConfig, n_max: int, method: str, E0=None):
    if n_max < 0:
        raise DomainError("n_max must be >= 0", field="n_max")
    ode = closed = None
    if method in ("closed", "both"):
        if isinstance(cfg.system, PowerLaw):
            raise UnsupportedDeformation("no closed form for the power-law potential")
        if E0 is not None and isinstance(cfg.system, Harmonic):
            cfg = replace(cfg, system=replace(cfg.system, ground_energy=E0))
        closed = closed_form_spectrum(cfg.system, cfg.deformation, n_max, cfg.units)
    if method in ("ode", "both"):
        ode = solve_spectrum_ode(cfg.system, cfg.deformation, E0, n_max, cfg.ode, cfg.units)

    if method == "ode":
        columns = ["n", "E_ode"]
        rows = [[n, E] for n, E in ode.levels]
        footer = _cutoff_dict(ode)
    elif method == "closed":
        columns = ["n", "E_closed"]
        rows = [[n, E] for n, E in closed.levels]
        footer = _cutoff_dict(closed)
    else:
        columns = ["n", "E_ode", "E_closed", "rel_diff"]
        by_n = dict(closed.levels)
        rows = []
        for n, E in ode.levels:
            c = by_n.get(n)
            rel = None if c is None else abs(E - c) / max(abs(c), cfg.ode.abs_tol)
            rows.append([n, E, c, rel])
        footer = _cutoff_dict(ode)
        footer.update({f"closed_{k}": v for k, v in _cutoff_dict(closed).items()})
    return columns, rows, _meta(cfg, "spectrum", footer=footer)


def cmd_dos(cfg: RunConfig, start: float, stop: float, count: int):
    count = int(count)
    if count < 1 or not (0 < start <= stop):
        raise DomainError("need 0 < start <= stop and count >= 1", field="energies")
    dos = DosSpec.from_system(cfg.system, cfg.units)
    rows = []
    for E in _grid(start, stop, count):
        rows.append([E, unperturbed_dos(dos, E), deformed_dos(dos, cfg.deformation, E)])
    return ["E", "rho0", "rho"], rows, _meta(cfg, "dos", dos={"prefactor": dos.prefactor, "exponent": dos.exponent})


def _energy_law(cfg: RunConfig, law: str, N: int, A: float):
    if law == "ideal":
        return IdealGas(N)
    if law == "powerlaw":
        if not isinstance(cfg.system, PowerLaw):
            raise DomainError("--law powerlaw needs --system powerlaw for nu", field="law")
        return PowerLawGas(N, cfg.system.nu)
    if law == "phonon":
        return Phonon(A)
    dos = DosSpec.from_system(cfg.system, cfg.units)
    return Equipartition(dos.energy_coefficient, N)


def _routes(cfg: RunConfig, route: str, law: str, N: int, A: float):
    out = []
    if route in ("exact", "both"):
        d = cfg.deformation
        if d.family is Family.LINEAR and d.s < 0:
            raise UnsupportedDomain("exact route undefined for s<0; use first-order")
        if law not in ("system",):
            raise DomainError("the exact route uses the system density of states; drop --law", field="law")
        out.append(ExactRoute(DosSpec.from_system(cfg.system, cfg.units), d, cfg.quad))
    if route in ("first-order", "both"):
        out.append(FirstOrderRoute(_energy_law(cfg, law, N, A), cfg.deformation.s, cfg.units))
    return out


def cmd_thermo(cfg: RunConfig, temperatures, route: str, law="system", N=1, A=1.0):
    for T in temperatures:
        if not T > 0:
            raise DomainError(f"temperatures must be positive, got {T!r}", field="T")
    routes = _routes(cfg, route, law, N, A)
    rows = []
    for T in temperatures:
        for r in routes:
            p = thermo_point(r, T)
            rows.append([p.T, p.Z, p.U, p.C, p.route.value])
    return ["T", "Z", "U", "C", "route"], rows, _meta(cfg, "thermo", law=law, N=N, A=A)


def _grid(start, stop, count):
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count - 1)] + [stop]


def _sweep_row(cfg: RunConfig, axis, x, observable, n, T, route, law, N, A):
    if axis == "s":
        cfg = replace(cfg, deformation=replace(cfg.deformation, s=x))
    elif axis == "nu":
        if not isinstance(cfg.system, PowerLaw):
            raise DomainError("axis nu needs --system powerlaw", field="axis")
        cfg = replace(cfg, system=replace(cfg.system, nu=x))
    else:
        T = x
    validate_system(cfg.system)
    if observable == "E_n":
        res = solve_spectrum_ode(cfg.system, cfg.deformation, None, n, cfg.ode, cfg.units)
        if len(res.levels) <= n:
            raise OutOfDomain(f"level {n} not reached ({_cutoff_dict(res)})", n_star=getattr(res.cutoff, "n_star", math.nan))
        return res.levels[n][1]
    (r,) = _routes(cfg, route, law, N, A)
    p = thermo_point(r, T)
    value = {"Z": p.Z, "U": p.U, "C": p.C}[observable]
    if value is None:
        raise UnsupportedDomain(f"{observable} is not available on the {route} route")
    return value


def cmd_sweep(cfg: RunConfig, axis, start, stop, count, observable, *, n=1, T=1.0, route="exact",
              law="system", N=1, A=1.0, jobs=1):
    if count < 2:
        raise DomainError("count must be >= 2", field="count")
    xs = _grid(start, stop, count)

    def one(x):
        try:
            return [x, _sweep_row(cfg, axis, x, observable, n, T, route, law, N, A), None]
        except DefquantError as exc:
            return [x, None, f"{type(exc).__name__}: {exc}"]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, xs))
    else:
        rows = [one(x) for x in xs]
    name = f"E_{n}" if observable == "E_n" else observable
    meta = _meta(cfg, "sweep", axis=axis, observable=name, route=route, T=T)
    return [axis, name, "error"], rows, meta


def _fail(code, exc):
    field = getattr(exc, "field", None)
    where = f" [{field}]" if field else ""
    print(f"defquant: {type(exc).__name__}{where}: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG

    if args.command == "selftest":
        results = run_checks(set(args.only) if args.only else None)
        for r in results:
            print(r.line())
        ok = all(r.passed for r in results)
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        return EXIT_OK if ok else 1

    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except (DomainError, PreconditionError) as exc:
        return _fail(EXIT_DOMAIN, exc)

    try:
        if args.command == "spectrum":
            columns, rows, meta = cmd_spectrum(cfg, args.n_max, args.method, args.E0)
        elif args.command == "dos":
            columns, rows, meta = cmd_dos(cfg, *args.energies)
        elif args.command == "thermo":
            columns, rows, meta = cmd_thermo(cfg, args.T, args.route, args.law, args.N, args.A)
        else:
            columns, rows, meta = cmd_sweep(
                cfg, args.axis, args.start, args.stop, args.count, args.observable,
                n=args.n, T=args.T, route=args.route, law=args.law, N=args.N, A=args.A, jobs=args.jobs,
            )
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except (DomainError, PreconditionError, UnsupportedDeformation, UnsupportedDomain) as exc:
        return _fail(EXIT_DOMAIN, exc)

    try:
        _emit(render(columns, rows, meta, cfg.output.format), cfg)
    except OSError as exc:
        print(f"defquant: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "sweep" and all(r[2] is not None for r in rows):
        return EXIT_SWEEP_FAILED
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
