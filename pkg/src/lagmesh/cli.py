"""Command-line runner for bound states, phase shifts, and benchmarks.

Subcommands
-----------
bound       spectrum of one mesh/scheme configuration
scatter     phase shifts of every pseudostate at a fixed gamma
gamma-scan  plateau search: recommended gamma per pseudostate
sweep       rerun a bound or scattering configuration over N, h, or gamma
reproduce   rebuild one of the bundled benchmark tables 1-5

Reports are written as CSV (floats to 6 significant digits; relative
errors of the bound-state benchmark tables in the compact a[-b] notation)
or JSON (``schema: 1``, floats to 15 significant digits, with a provenance
block carrying the config hash and build id).  Reports are deterministic:
rerunning the same configuration on the same build yields identical bytes.

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 failed reference comparison under ``reproduce --check``.
"""

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import sys

import numpy as np

from . import benchmarks
from .basis import Family, MeshSpec
from .matelem import HamiltonianVariant, Variant2D, hamiltonian_2d, hamiltonian_3d
from .potentials import builtin, from_json, to_json
from .scattering import gamma_scan, tan_delta
from .solver import pseudostates, relative_error, solve_bound_states

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "Report",
    "main",
    "render_csv",
    "render_json",
    "run",
    "sweep",
]

try:
    from importlib.metadata import version as _dist_version

    _BUILD = "lagmesh " + _dist_version("lagmesh")
except Exception:  # pragma: no cover - package metadata not installed
    _BUILD = "lagmesh unknown"

_MODES = ("bound", "scatter", "gamma-scan", "reproduce")
_BUILTIN_NAMES = ("harmonic", "coulomb", "eckart", "buck_alpha_alpha")

# variant alias -> (3D scheme, mesh family, default Laguerre parameter)
_VARIANTS = {
    "var": (HamiltonianVariant.Var, Family.RegSqrt, 1.0),
    "reg-sqrt": (HamiltonianVariant.RegSqrtMesh, Family.RegSqrt, 1.0),
    "reg-r": (HamiltonianVariant.RegRMesh, Family.RegR, 0.0),
    "non-reg": (HamiltonianVariant.NonReg, Family.NonReg, 2.0),
    "non-reg-vg": (HamiltonianVariant.NonRegVG, Family.NonReg, 2.0),
}
_VARIANTS_2D = {"var": Variant2D.Var2D, "reg-sqrt": Variant2D.RegSqrtMesh2D}


class ConfigError(ValueError):
    """Invalid experiment configuration; one field-prefixed message each."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = tuple(errors)
        super().__init__("; ".join(self.errors))


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """One fully-specified computation.

    ``angular`` is l in three dimensions and m in two.  ``gamma`` is the
    single rate used by scatter mode; ``gammas`` the grid scanned by
    gamma-scan mode (None for the built-in default).  ``table`` selects the
    benchmark table in reproduce mode.
    """

    mode: str
    potential: object = None
    angular: int = 0
    dimension: int = 3
    variant: str = None
    N: int = None
    alpha: float = None
    h: float = None
    gamma: float = None
    gammas: tuple = None
    table: int = None
    format: str = "csv"
    out: str = None


@dataclasses.dataclass(frozen=True)
class Report:
    """Computed rows plus the echoed configuration and provenance."""

    mode: str
    rows: tuple
    config: dict
    provenance: dict
    checks: tuple = ()


def _validate(config):
    errors = []
    if config.mode not in _MODES:
        errors.append(f"mode: must be one of {', '.join(_MODES)}")
        return errors
    if config.format not in ("csv", "json"):
        errors.append("format: must be csv or json")
    if config.mode == "reproduce":
        if config.table not in benchmarks.TABLE_IDS:
            errors.append("table: reproduce requires --table 1..5")
        return errors
    if config.table is not None:
        errors.append("table: only applies to reproduce mode")
    if config.potential is None:
        errors.append("potential: a builtin name or JSON spec is required")
    if config.N is None or config.N < 1:
        errors.append("N: a positive mesh size is required")
    if config.h is None or not config.h > 0.0:
        errors.append("h: a positive scaling factor is required")
    if config.angular < 0:
        errors.append("l/m: must be nonnegative")
    if config.dimension not in (2, 3):
        errors.append("dim: must be 2 or 3")
    elif config.dimension == 2:
        if config.variant not in _VARIANTS_2D:
            errors.append("variant: two-dimensional schemes are "
                          + " or ".join(sorted(_VARIANTS_2D)))
        if config.alpha not in (None, 0.0):
            errors.append("alpha: two-dimensional schemes fix alpha = 0")
    elif config.variant not in _VARIANTS:
        errors.append(f"variant: must be one of {', '.join(_VARIANTS)}")
    if config.alpha is not None and config.alpha < 0.0:
        errors.append("alpha: must be nonnegative")
    if config.mode == "scatter" and (config.gamma is None or not config.gamma > 0.0):
        errors.append("gamma: scatter requires a positive --gamma")
    if config.mode == "bound" and config.gamma is not None:
        errors.append("gamma: only applies to scattering modes")
    return errors


def _resolve_problem(config):
    """Mesh, Hamiltonian pair, and spectrum for a validated config."""
    V = config.potential
    if config.dimension == 2:
        mesh = MeshSpec(config.N, 0.0, Family.RegSqrt, config.h)
        H, S = hamiltonian_2d(mesh, config.angular, V, _VARIANTS_2D[config.variant])
    else:
        scheme, family, alpha = _VARIANTS[config.variant]
        if config.alpha is not None:
            alpha = config.alpha
        mesh = MeshSpec(config.N, alpha, family, config.h)
        H, S = hamiltonian_3d(mesh, config.angular, V, scheme)
    return mesh, solve_bound_states(H, S)


def _exact_level(config, n, energy):
    """Analytic level for the builtin solvable potentials, else None."""
    label = config.potential.label
    if config.potential.energy_unit != 1.0:
        return None
    if config.dimension == 3:
        if label == "harmonic":
            return benchmarks.ho_level(config.angular, n)
        if label == "coulomb" and energy < 0.0:
            return benchmarks.coulomb_level(config.angular, n)
    else:
        if label == "harmonic":
            return benchmarks.ho_level_2d(config.angular, n)
        if label == "coulomb" and energy < 0.0:
            return benchmarks.coulomb_level_2d(config.angular, n)
    return None


def _run_bound(config):
    mesh, spectrum = _resolve_problem(config)
    unit = config.potential.energy_unit
    rows = []
    for n, E in enumerate(spectrum.energies):
        row = {"state": n + 1, "energy": float(E) * unit}
        exact = _exact_level(config, n, float(E))
        if exact is not None:
            row["exact"] = exact
            row["eps_rel"] = relative_error(float(E), exact)
        rows.append(row)
    return rows


def _window(V):
    # charged-system phases are conventionally reported in [0, 180)
    return "positive" if V.tail_Z != 0.0 else "principal"


def _run_scatter(config):
    mesh, spectrum = _resolve_problem(config)
    V = config.potential
    rows = []
    for n, state in enumerate(pseudostates(spectrum)):
        res = tan_delta(state, config.angular, V, V.tail_Z, config.gamma,
                        mesh, window=_window(V))
        rows.append({
            "state": n + 1, "energy": res.energy, "k": res.k,
            "gamma": res.gamma, "tan_delta": res.tan_delta,
            "delta_deg": res.delta_deg, "branch": res.branch,
        })
    return rows


def _run_gamma_scan(config):
    mesh, spectrum = _resolve_problem(config)
    V = config.potential
    grid = None if config.gammas is None else np.asarray(config.gammas, dtype=float)
    rows = []
    for n, state in enumerate(pseudostates(spectrum)):
        rec, _ = gamma_scan(state, config.angular, V, V.tail_Z, mesh,
                            gammas=grid, window=_window(V))
        rows.append({
            "state": n + 1, "energy": rec.energy, "gamma": rec.gamma,
            "delta_deg": rec.delta_deg, "sensitivity": rec.sensitivity,
            "no_plateau": rec.no_plateau,
        })
    return rows


def _config_echo(config):
    doc = {"mode": config.mode, "format": config.format}
    if config.mode == "reproduce":
        doc["table"] = config.table
        return doc
    doc.update({
        "potential": json.loads(to_json(config.potential)),
        "l" if config.dimension == 3 else "m": config.angular,
        "dim": config.dimension,
        "variant": config.variant,
        "N": config.N,
        "alpha": config.alpha,
        "h": config.h,
    })
    if config.gamma is not None:
        doc["gamma"] = config.gamma
    if config.gammas is not None:
        doc["gammas"] = [float(g) for g in config.gammas]
    return doc


def _provenance(echo):
    canon = json.dumps(echo, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canon.encode()).hexdigest()[:16]
    return {"config_hash": digest, "build": _BUILD}


def run(config):
    """Execute one configuration and return its Report.

    Raises ConfigError when the configuration is inconsistent; numerical
    failures propagate as ArithmeticError/LinAlgError.
    """
    errors = _validate(config)
    if errors:
        raise ConfigError(errors)
    checks = ()
    if config.mode == "reproduce":
        rows = benchmarks.run_table(config.table)
        checks = tuple(benchmarks.check_table(config.table, rows))
    elif config.mode == "bound":
        rows = _run_bound(config)
    elif config.mode == "scatter":
        rows = _run_scatter(config)
    else:
        rows = _run_gamma_scan(config)
    echo = _config_echo(config)
    return Report(config.mode, tuple(rows), echo, _provenance(echo), checks)


def sweep(config, parameter, values):
    """Rerun ``config`` once per value of ``parameter`` (N, h, or gamma).

    Each report row summarizes the first state of the corresponding run.
    """
    if parameter not in ("N", "h", "gamma"):
        raise ConfigError(["parameter: must be N, h, or gamma"])
    values = tuple(values)
    if not values:
        raise ConfigError(["values: at least one value is required"])
    if config.mode not in ("bound", "scatter"):
        raise ConfigError(["mode: sweeps apply to bound or scatter runs"])
    if parameter == "gamma" and config.mode != "scatter":
        raise ConfigError(["parameter: gamma sweeps require scatter mode"])
    rows = []
    for v in values:
        if parameter == "N":
            sub = dataclasses.replace(config, N=int(v))
        elif parameter == "h":
            sub = dataclasses.replace(config, h=float(v))
        else:
            sub = dataclasses.replace(config, gamma=float(v))
        report = run(sub)
        first = report.rows[0]
        row = {"parameter": parameter, "value": v, "energy": first["energy"]}
        if config.mode == "bound":
            row["eps_rel"] = first.get("eps_rel")
        else:
            row["tan_delta"] = first["tan_delta"]
            row["delta_deg"] = first["delta_deg"]
        rows.append(row)
    echo = _config_echo(config)
    echo["sweep"] = {"parameter": parameter,
                     "values": [float(v) for v in values]}
    return Report(f"sweep:{config.mode}", tuple(rows), echo,
                  _provenance(echo), ())


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.15g}")
    return v


def render_json(report):
    doc = {
        "schema": 1,
        "mode": report.mode,
        "config": report.config,
        "provenance": report.provenance,
        "rows": [{k: _json_cell(v) for k, v in row.items()} for row in report.rows],
    }
    if report.checks:
        doc["checks"] = [
            {"description": c.description, "passed": c.passed,
             "value": _json_cell(c.value)}
            for c in report.checks
        ]
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(v, as_eps):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return benchmarks.eps_notation(float(v)) if as_eps else f"{float(v):.6g}"
    return str(v)


def render_csv(report):
    if not report.rows:
        return ""
    # the bound-state benchmark tables are tables of relative errors
    as_eps = report.mode == "reproduce" and report.config.get("table") in (1, 2, 5)
    cols = list(report.rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in report.rows:
        writer.writerow([
            _csv_cell(row.get(c), as_eps and not isinstance(row.get(c), (int, str)))
            for c in cols
        ])
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError([message])


def _parse_gamma(text, mode):
    if text is None:
        return None, None
    if mode == "gamma-scan":
        try:
            if ":" in text:
                a, b, n = text.split(":")
                return None, tuple(np.geomspace(float(a), float(b), int(n)))
            return None, tuple(float(x) for x in text.split(","))
        except ValueError:
            raise ConfigError(
                ["gamma: use start:stop:count or a comma-separated list"]
            ) from None
    try:
        return float(text), None
    except ValueError:
        raise ConfigError(["gamma: must be a number"]) from None


def _parse_potential(value):
    if value is None:
        return None
    if isinstance(value, dict):
        return from_json(json.dumps(value))
    if isinstance(value, str) and value.lstrip().startswith("{"):
        return from_json(value)
    name, _, params = str(value).partition(":")
    if name not in _BUILTIN_NAMES:
        raise ConfigError([
            f"potential: unknown name {name!r}; builtins are "
            + ", ".join(_BUILTIN_NAMES)
        ])
    kwargs = {}
    if params:
        for piece in params.split(","):
            key, _, num = piece.partition("=")
            try:
                kwargs[key.strip()] = float(num)
            except ValueError:
                raise ConfigError(
                    [f"potential: bad parameter {piece!r}"]
                ) from None
    try:
        return builtin(name, **kwargs)
    except ValueError as e:
        raise ConfigError([f"potential: {e}"]) from None


def build_parser():
    parser = _Parser(
        prog="lagmesh",
        description="Lagrange-mesh bound states, phase shifts, and benchmarks",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    common = _Parser(add_help=False)
    common.add_argument("--potential", metavar="NAME|JSON",
                        help="builtin name, name:key=value,... or JSON spec")
    common.add_argument("--l", type=int, default=None, help="orbital momentum (3D)")
    common.add_argument("--m", type=int, default=None, help="angular number (2D)")
    common.add_argument("--dim", type=int, default=None, help="2 or 3 (default 3)")
    common.add_argument("--variant", default=None,
                        help="var, reg-sqrt, reg-r, non-reg, non-reg-vg")
    common.add_argument("--N", type=int, default=None, help="mesh size")
    common.add_argument("--alpha", type=float, default=None,
                        help="Laguerre parameter (default per variant)")
    common.add_argument("--h", type=float, default=None, help="scaling factor")
    common.add_argument("--gamma", default=None,
                        help="rate (scatter) or grid start:stop:count (gamma-scan)")
    common.add_argument("--table", type=int, default=None,
                        help="benchmark table id 1..5 (reproduce)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--config", dest="config_file", default=None,
                        help="JSON file with defaults for any flag")
    for mode in ("bound", "scatter", "gamma-scan", "reproduce", "sweep"):
        p = sub.add_parser(mode, parents=[common])
        if mode == "reproduce":
            p.add_argument("--check", action="store_true",
                           help="compare against the bundled reference values")
        if mode == "sweep":
            p.add_argument("--parameter", choices=("N", "h", "gamma"))
            p.add_argument("--values", default=None,
                           help="comma-separated parameter values")
    return parser


def _assemble(args):
    """ExperimentConfig from parsed flags plus the optional config file."""
    doc = {}
    if args.config_file:
        try:
            with open(args.config_file) as f:
                doc = json.load(f)
        except OSError as e:
            raise ConfigError([f"config: {e}"]) from None
        except json.JSONDecodeError as e:
            raise ConfigError([f"config: invalid JSON ({e})"]) from None

    def pick(flag, key, default=None):
        return flag if flag is not None else doc.get(key, default)

    if args.mode != "sweep":
        mode = args.mode
    else:
        default_mode = (
            "scatter" if getattr(args, "parameter", None) == "gamma" else "bound"
        )
        mode = pick(None, "mode", default_mode)
    if args.l is not None and args.m is not None:
        raise ConfigError(["l/m: give one angular number, not both"])
    dimension = pick(args.dim, "dim", 3)
    angular = args.m if args.m is not None else args.l
    if angular is None:
        angular = doc.get("m" if dimension == 2 else "l", 0)
    default_variant = "var" if mode == "bound" else "reg-sqrt"
    gamma_text = args.gamma if args.gamma is not None else doc.get("gamma")
    gamma, gammas = _parse_gamma(
        None if gamma_text is None else str(gamma_text), mode)
    if gammas is None and "gammas" in doc:
        gammas = tuple(float(g) for g in doc["gammas"])
    return ExperimentConfig(
        mode=mode,
        potential=_parse_potential(pick(args.potential, "potential")),
        angular=int(angular),
        dimension=int(dimension),
        variant=pick(args.variant, "variant", default_variant),
        N=pick(args.N, "N"),
        alpha=pick(args.alpha, "alpha"),
        h=pick(args.h, "h"),
        gamma=gamma,
        gammas=gammas,
        table=pick(args.table, "table"),
        format=pick(args.format, "format", "csv"),
        out=pick(args.out, "out"),
    )


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        config = _assemble(args)
        if args.mode == "sweep":
            if args.parameter is None or args.values is None:
                raise ConfigError(
                    ["sweep: both --parameter and --values are required"])
            try:
                values = tuple(float(v) for v in args.values.split(","))
            except ValueError:
                raise ConfigError(
                    ["values: must be comma-separated numbers"]) from None
            report = sweep(config, args.parameter, values)
        else:
            report = run(config)
    except ConfigError as e:
        for msg in e.errors:
            print(f"lagmesh: {msg}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"lagmesh: {e}", file=sys.stderr)
        return 1
    except (ArithmeticError, np.linalg.LinAlgError) as e:
        print(f"lagmesh: numerical failure: {e}", file=sys.stderr)
        return 2

    text = render_json(report) if config.format == "json" else render_csv(report)
    if config.out:
        try:
            with open(config.out, "w") as f:
                f.write(text)
        except OSError as e:
            print(f"lagmesh: out: {e}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)

    if getattr(args, "check", False):
        failed = [c for c in report.checks if not c.passed]
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"{mark} {c.description} (got {c.value:+.6g})", file=sys.stderr)
        print(f"{len(report.checks) - len(failed)}/{len(report.checks)} "
              "reference comparisons passed", file=sys.stderr)
        if failed:
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
