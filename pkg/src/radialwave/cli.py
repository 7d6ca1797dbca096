"""Command-line front end.

    radialwave catalog      [--n N] [--q Q] [--power KIND] [--family ID]
    radialwave verify       --scope {pde,foliation,algebra,potentials,reductions,all}
    radialwave simulate     family and run options, or --init data.csv
    radialwave convergence  family options, --N 100,200,400
    radialwave blowup       family options, --N 800

Every command accepts --config FILE (JSON with "schema": 1), --seed and
--out.  Explicit flags override file values, which override defaults.
Exit codes: 0 pass, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .core import ConfigError, DomainError, ModelParams, PowerKind, RadialWaveError, UnsupportedParams

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SCHEMA_VERSION = 1
SCOPES = ("pde", "foliation", "algebra", "potentials", "reductions")

# Alias -> (family id, forced settings)
FAMILY_ALIASES = {
    "invervinvdilsol-as-printed": ("IV6", {"n": 5, "k": 1, "as_printed": True}),
    "IV6-as-printed": ("IV6", {"n": 5, "k": 1, "as_printed": True}),
}

# Constants used when a family is selected without --c/--branch.
FAMILY_DEFAULTS = {
    "U6": {"c": -1.0},
    "U8": {"c": 1.0, "branch": -1},
    "U9": {"c": 1.0},
    "U5": {"c": 1.0},
}

COMMON_DEFAULTS = {"seed": 0, "out": None}
COMMAND_DEFAULTS = {
    "catalog": {},
    "verify": {"scope": "all", "grid_size": 20, "samples": 50},
    "simulate": {"family": "U8", "t0": 1.0, "t_end": 3.0, "N": 400, "r_max": 20.0, "cfl": 0.5,
                 "boundary": "dirichlet-exact", "threshold": 1e8, "energy_stride": 1,
                 "snapshot_stride": 0, "max_drift": 1e-4, "expect": "completed"},
    "convergence": {"family": "U8", "t0": 1.0, "t_end": 3.0, "N": [100, 200, 400], "r_max": 20.0,
                    "cfl": 0.5, "order": 2.0, "order_tol": 0.2},
    "blowup": {"family": "U6", "N": 800, "r_max": 1.0, "cfl": 0.5, "threshold": 1e8,
               "time_tol": 0.05, "exponent_tol": 0.05},
}


# ---------------------------------------------------------------------------
# argument parsing and configuration
# ---------------------------------------------------------------------------

def _branch(text) -> int:
    s = str(text).strip()
    table = {"+": 1, "+1": 1, "1": 1, "plus": 1, "-": -1, "-1": -1, "minus": -1}
    if s not in table:
        raise argparse.ArgumentTypeError(f"branch/sign must be + or -, got {text!r}")
    return table[s]


def _int_list(text) -> list:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file with \"schema\": 1")
    p.add_argument("--seed", type=int, help="seed for randomized samples (default 0)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def _family_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="catalog family id or alias")
    p.add_argument("--n", type=int, help="spatial dimension")
    p.add_argument("--q", type=float, help="power (default: the family's pinned power, else 3)")
    p.add_argument("--k", type=int, choices=(1, -1), help="sign of the source term")
    p.add_argument("--c", type=float, help="family constant c")
    p.add_argument("--c-tilde", dest="c_tilde", type=float, help="family constant c~")
    p.add_argument("--branch", type=_branch, help="branch + or -")
    p.add_argument("--sign", type=_branch, help="overall sign (U5)")
    p.add_argument("--shift", type=float, help="time shift")


def _run_opts(p: argparse.ArgumentParser, tend: bool = True) -> None:
    p.add_argument("--t0", type=float, help="start time")
    if tend:
        p.add_argument("--tend", dest="t_end", type=float, help="end time")
    p.add_argument("--r-max", dest="r_max", type=float, help="outer radius")
    p.add_argument("--cfl", type=float, help="CFL number in (0, 1)")
    p.add_argument("--csv-dir", dest="csv_dir", help="directory for CSV artifacts")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radialwave", description="Exact solutions, symmetry checks and simulation "
                     "of u_tt - u_rr - (n-1)u_r/r = k u^q.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    kw = {"argument_default": argparse.SUPPRESS}

    p = sub.add_parser("catalog", help="list catalog families", **kw)
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--power", help="power kind: " + ", ".join(k.value for k in PowerKind))
    p.add_argument("--family")

    p = sub.add_parser("verify", help="run verification suites", **kw)
    _common(p)
    _family_opts(p)
    p.add_argument("--scope", choices=SCOPES + ("all",))
    p.add_argument("--grid-size", dest="grid_size", type=int, help="points per axis of foliation grids")
    p.add_argument("--samples", type=int, help="interior points per PDE instance")

    p = sub.add_parser("simulate", help="finite-difference evolution", **kw)
    _common(p)
    _family_opts(p)
    _run_opts(p)
    p.add_argument("--N", type=int, help="radial intervals")
    p.add_argument("--init", help="initial-data CSV instead of a family")
    p.add_argument("--boundary", choices=("dirichlet-exact", "sommerfeld"))
    p.add_argument("--threshold", type=float, help="blow-up threshold on |u|")
    p.add_argument("--energy-stride", dest="energy_stride", type=int)
    p.add_argument("--snapshot-stride", dest="snapshot_stride", type=int)
    p.add_argument("--max-drift", dest="max_drift", type=float, help="relative energy drift allowed")
    p.add_argument("--expect", choices=("completed", "blowup"), help="expected final status")

    p = sub.add_parser("convergence", help="convergence study against a catalog family", **kw)
    _common(p)
    _family_opts(p)
    _run_opts(p)
    p.add_argument("--N", type=_int_list, help="comma-separated resolutions")
    p.add_argument("--order", type=float, help="expected order")
    p.add_argument("--order-tol", dest="order_tol", type=float)

    p = sub.add_parser("blowup", help="blow-up time and rate", **kw)
    _common(p)
    _family_opts(p)
    _run_opts(p)
    p.add_argument("--N", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--time-tol", dest="time_tol", type=float, help="allowed |t_b - t_pred| / t*")
    p.add_argument("--exponent-tol", dest="exponent_tol", type=float)
    return parser


def _allowed_keys(parser: argparse.ArgumentParser, command: str) -> set:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return {a.dest for a in sub.choices[command]._actions if a.dest not in ("help", "config")}


def load_config(path: str, allowed: set) -> dict:
    """Read a JSON config; the schema key must be 1 and all other keys known."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: \"schema\" must be {SCHEMA_VERSION}, got {data.get('schema')!r}")
    data = {k.replace("-", "_"): v for k, v in data.items() if k != "schema"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    if "branch" in data:
        data["branch"] = _branch(data["branch"])
    if "sign" in data:
        data["sign"] = _branch(data["sign"])
    if "N" in data and isinstance(data["N"], str):
        data["N"] = _int_list(data["N"])
    return data


def resolve_settings(parser: argparse.ArgumentParser, argv) -> dict:
    ns = parser.parse_args(argv)
    given = vars(ns)
    command = given.pop("command")
    cfg_path = given.pop("config", None)
    settings = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command]}
    if cfg_path:
        settings.update(load_config(cfg_path, _allowed_keys(parser, command)))
    settings.update(given)
    settings["command"] = command
    return settings


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def build_family(s: dict, default_id: Optional[str] = None):
    """SolutionFamily from settings, applying aliases and per-family defaults."""
    from .catalog import FAMILY_IDS, SolutionFamily, family_spec
    from .core import special_power_value

    fid = s.get("family") or default_id
    if fid is None:
        raise ConfigError("a --family is required")
    forced = {}
    if fid in FAMILY_ALIASES:
        fid, forced = FAMILY_ALIASES[fid]
    if fid not in FAMILY_IDS:
        raise ConfigError(f"unknown family {fid!r}; known: {', '.join(FAMILY_IDS)}")
    merged = {**FAMILY_DEFAULTS.get(fid, {}), **{k: v for k, v in s.items() if v is not None}, **forced}
    n = int(merged.get("n", 3))
    k = int(merged.get("k", 1))
    power = family_spec(fid).power
    if "q" in merged:
        q = float(merged["q"])
    elif power == PowerKind.GENERIC:
        q = 3.0
    else:
        q = special_power_value(power, n)
    c = float(merged.get("c", 0.0))
    branch = int(merged.get("branch", 1))
    try:
        return SolutionFamily(fid, ModelParams(n, q, k), c=c, c_tilde=float(merged.get("c_tilde", 0.0)),
                              branch=branch, sign=int(merged.get("sign", 1)),
                              shift=float(merged.get("shift", 0.0)),
                              as_printed=bool(merged.get("as_printed", False)))
    except (UnsupportedParams, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2, default=_jsonable) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_path(s: dict, name: str) -> Optional[Path]:
    d = s.get("csv_dir")
    if not d:
        return None
    Path(d).mkdir(parents=True, exist_ok=True)
    return Path(d) / name


def _params_json(P: ModelParams) -> dict:
    return {"n": P.n, "q": P.q, "k": P.k}


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def cmd_catalog(s: dict) -> tuple:
    from .catalog import family_table, query_families

    power = None
    if s.get("power") is not None:
        try:
            power = PowerKind(s["power"])
        except ValueError:
            raise ConfigError(f"unknown power kind {s['power']!r}") from None
    if s.get("n") is not None and s["n"] < 2:
        raise ConfigError("n must be >= 2")
    ids = query_families(s.get("n"), s.get("q"), power)
    if s.get("family") is not None:
        ids = [i for i in ids if i == s["family"]]
    rows = [r for r in family_table() if r["id"] in ids]
    report = {"command": "catalog", "filters": {"n": s.get("n"), "q": s.get("q"),
                                                "power": power.value if power else None,
                                                "family": s.get("family")},
              "families": ids, "rows": rows}
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _summary(reports: list, notes: Optional[list] = None) -> dict:
    js = [r.to_json() for r in reports]
    for j in js:
        if "pass" not in j:
            j["pass"] = j.pop("passed")
    failures = [j.get("check") or j.get("solution") or j.get("family") for j in js if not j["pass"]]
    return {"pass": not failures, "count": len(js), "failures": failures, "notes": notes or [],
            "reports": js}


def _n_matches(s: dict, P: ModelParams) -> bool:
    return all(s.get(key) is None or getattr(P, key) == s[key] for key in ("n", "q", "k"))


def _family_selected(s: dict) -> bool:
    return s.get("family") is not None


def _explicit_family_params(s: dict) -> bool:
    return any(s.get(key) is not None for key in ("c", "c_tilde", "branch", "sign", "shift"))


def _erratum_note(fam) -> str:
    from .catalog import SolutionFamily, field_jet
    P = fam.params
    printed = float(field_jet(fam, 0.0, 1.0).v)
    fixed = float(field_jet(SolutionFamily("IV6", P), 0.0, 1.0).v)
    return (f"erratum: IV6 with the as-printed prefactor has r^((n-1)/2) u = {printed:g} at n={P.n}, "
            f"k={P.k}, but the constant solution of the reduced inversion equation is {fixed:g}; "
            f"the corrected amplitude is ((n-1)(n-3)/(4k))^((n-1)/4) and the as-printed form is "
            f"not a solution.")


def suite_pde(s: dict) -> dict:
    from .catalog import sample_interior, standard_instances, verify_residual

    rng = np.random.default_rng(s["seed"])
    notes = []
    if _family_selected(s):
        fid = s["family"]
        if fid in FAMILY_ALIASES or _explicit_family_params(s) or s.get("n") is not None:
            fams = [build_family(s)]
        else:
            fams = [f for f in standard_instances() if f.id == fid]
            if not fams:
                fams = [build_family(s)]
    else:
        fams = [f for f in standard_instances() if _n_matches(s, f.params)]
    reports = []
    for fam in fams:
        pts = sample_interior(fam, int(s["samples"]), rng)
        reports.append(verify_residual(fam, pts))
        if fam.as_printed:
            notes.append(_erratum_note(fam))
    return _summary(reports, notes)


def suite_foliation(s: dict) -> dict:
    from .core import CheckReport
    from .foliation import AnsatzCase, ansatz_coefficient_check, standard_gh_instances, verify_instance
    from .reconstruct import reconstruction_suite

    size = int(s["grid_size"])
    insts = [i for i in standard_gh_instances() if _n_matches(s, i.solution.params)]
    if s.get("family") is not None:
        insts = [i for i in insts if i.solution.id == s["family"]]
    reports = [verify_instance(i, size) for i in insts]
    n = s.get("n") or 3
    q = 3.0 if n != 2 else 5.0
    rep = ansatz_coefficient_check(AnsatzCase.Q, n, q, 1)
    reports.append(CheckReport("ansatz/a=b=q/inconsistent", float(len(rep.consistent)), 0.0,
                               not rep.solvable, rep.to_json()))
    rep = ansatz_coefficient_check(AnsatzCase.HALF_Q_PLUS_ONE, n, q, 1)
    reports.append(CheckReport("ansatz/a=b=(q+1)/2/replayed", float(len(rep.consistent)), math.inf,
                               True, rep.to_json()))
    if s.get("n") in (None, 3) and s.get("family") is None:
        reports += reconstruction_suite()
    return _summary(reports)


def suite_potentials(s: dict) -> dict:
    from .foliation import standard_potential_instances, verify_potential_instance

    size = int(s["grid_size"])
    insts = [i for i in standard_potential_instances() if _n_matches(s, i.potential.params)]
    return _summary([verify_potential_instance(i, size) for i in insts])


def suite_algebra(s: dict) -> dict:
    from .catalog import standard_instances
    from .liealg import algebra_suite, group_action_suite

    reports = algebra_suite(s.get("n") or 3)
    fams = [f for f in standard_instances() if _n_matches(s, f.params)]
    reports += group_action_suite(fams, np.random.default_rng(s["seed"]))
    return _summary(reports)


def suite_reductions(s: dict) -> dict:
    from .reduction import reduction_suite
    return _summary(reduction_suite())


SUITES = {"pde": suite_pde, "foliation": suite_foliation, "algebra": suite_algebra,
          "potentials": suite_potentials, "reductions": suite_reductions}


def cmd_verify(s: dict) -> tuple:
    from .parallel import pmap

    scopes = list(SCOPES) if s["scope"] == "all" else [s["scope"]]
    if int(s["samples"]) < 1 or int(s["grid_size"]) < 2:
        raise ConfigError("samples must be >= 1 and grid-size >= 2")
    if s.get("n") is not None and s["n"] < 2:
        raise ConfigError("n must be >= 2")
    if s.get("family") is not None:
        build_family(s)
    results = pmap(lambda name: SUITES[name](s), scopes)
    suites = dict(zip(scopes, results))
    ok = all(r["pass"] for r in suites.values())
    notes = [note for r in suites.values() for note in r["notes"]]
    report = {"command": "verify", "scope": s["scope"], "seed": s["seed"], "pass": ok,
              "notes": notes, "suites": suites}
    return report, EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# simulation commands
# ---------------------------------------------------------------------------

def _sim_config(s: dict, family, **extra):
    from .simulator import SimConfig
    return SimConfig(params=family.params, source=family, t0=s.get("t0"), t_end=float(s["t_end"]),
                     r_max=float(s["r_max"]), cfl=float(s["cfl"]), **extra)


def cmd_simulate(s: dict) -> tuple:
    from .csvio import InitialData, read_initial_data, write_energy, write_initial_data, write_snapshots
    from .simulator import SimConfig, Status, initial_state, run

    common = dict(t_end=float(s["t_end"]), r_max=float(s["r_max"]), N=int(s["N"]), cfl=float(s["cfl"]),
                  boundary=s["boundary"], threshold=float(s["threshold"]),
                  energy_stride=int(s["energy_stride"]), snapshot_stride=int(s["snapshot_stride"]))
    if s.get("init"):
        data = read_initial_data(s["init"])
        cfg = SimConfig(params=data.params, source=data, **common)
        label = f"csv:{s['init']}"
    else:
        fam = build_family(s)
        cfg = SimConfig(params=fam.params, source=fam, t0=float(s["t0"]), **common)
        label = fam.label()
    st0 = initial_state(cfg)
    res = run(cfg)
    st = res.state
    drift = res.energy_drift()
    status_ok = st.status.value == s["expect"]
    drift_ok = st.status != Status.COMPLETED or (math.isfinite(drift) and drift <= float(s["max_drift"]))
    ok = status_ok and drift_ok
    P = cfg.params
    path = _csv_path(s, "initial.csv")
    if path:
        write_initial_data(path, InitialData(cfg.start_time, P, st0.r, st0.u, st0.ut))
        write_energy(_csv_path(s, "energy.csv"), st.energy_history)
        rows = res.snapshot_rows() or [(cfg.start_time, r, u) for r, u in zip(st0.r, st0.u)] + \
            [(st.t, r, u) for r, u in zip(st.r, st.u)]
        write_snapshots(_csv_path(s, "snapshots.csv"), rows)
    report = {"command": "simulate", "source": label, "params": _params_json(P),
              "config": {"t0": cfg.start_time, "t_end": cfg.t_end, "N": cfg.N, "r_max": cfg.r_max,
                         "cfl": cfg.cfl, "boundary": cfg.boundary.value},
              "status": st.status.value, "t_final": st.t, "t_blowup": st.t_blowup, "steps": st.steps,
              "energy_initial": st.energy_history[0][1], "energy_drift": drift,
              "max_drift": float(s["max_drift"]), "expect": s["expect"], "message": res.message,
              "pass": ok}
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_convergence(s: dict) -> tuple:
    from .csvio import write_convergence
    from .simulator import run_convergence

    fam = build_family(s)
    Ns = _int_list(s["N"])
    if len(Ns) < 2:
        raise ConfigError("convergence needs at least two resolutions")
    template = _sim_config(s, fam, N=Ns[0])
    try:
        rep = run_convergence(template, Ns, fam)
    except DomainError as exc:
        report = {"command": "convergence", "family": fam.label(), "error": str(exc), "pass": False}
        return report, EXIT_FAIL
    ok = abs(rep.order - float(s["order"])) <= float(s["order_tol"])
    path = _csv_path(s, "convergence.csv")
    if path:
        write_convergence(path, rep.rows())
    report = {"command": "convergence", "family": fam.label(), "params": _params_json(fam.params),
              "constants": fam.constants(), **rep.to_json(), "expected_order": float(s["order"]),
              "order_tol": float(s["order_tol"]), "pass": ok}
    return report, EXIT_OK if ok else EXIT_FAIL


def _axis_times(fam) -> list:
    from .catalog import singular_set
    return sorted(t for comp in singular_set(fam).components for t in comp.times_at_axis())


def cmd_blowup(s: dict) -> tuple:
    from .catalog import singular_set
    from .core import InsufficientWindow
    from .csvio import write_energy, write_snapshots
    from .simulator import SimConfig, Status, fit_blowup_rate, run

    s = dict(s)
    if s.get("branch") is None and s.get("c") is not None and s.get("family", "U6") == "U6":
        s["branch"] = 1 if s["c"] > 0 else -1
    fam = build_family(s)
    axis = _axis_times(fam)
    t0 = s.get("t0")
    if t0 is None:
        hyper = [c for c in singular_set(fam).components if c.kind == "hyperbola"]
        if not hyper:
            raise ConfigError(f"{fam.label()}: --t0 is required for this family")
        t0 = -hyper[0].value
    t0 = float(t0)
    later = [t for t in axis if t > t0 + 1e-12]
    if not later:
        raise ConfigError(f"{fam.label()}: no singular time on the axis after t0={t0:g}")
    t_pred = later[0]
    t_star = t_pred - t0
    t_end = float(s["t_end"]) if s.get("t_end") is not None else t_pred + t_star
    cfg = SimConfig(params=fam.params, source=fam, t0=t0, t_end=t_end, r_max=float(s["r_max"]),
                    N=int(s["N"]), cfl=float(s["cfl"]), threshold=float(s["threshold"]))
    res = run(cfg)
    st = res.state
    n = fam.params.n
    report = {"command": "blowup", "family": fam.label(), "params": _params_json(fam.params),
              "constants": fam.constants(), "t0": t0, "t_end": t_end, "N": cfg.N, "r_max": cfg.r_max,
              "status": st.status.value, "t_predicted": t_pred, "t_star": t_star,
              "reference_exponent": (1 - n) / 2}
    path = _csv_path(s, "axis.csv")
    if path:
        write_snapshots(path, [(t, 0.0, u) for t, u in res.axis_history])
        write_energy(_csv_path(s, "energy.csv"), st.energy_history)
    if st.status != Status.BLOWUP:
        report.update({"pass": False, "message": res.message or "no blow-up detected"})
        return report, EXIT_FAIL
    try:
        fit = fit_blowup_rate(res)
    except InsufficientWindow as exc:
        report.update({"t_blowup": st.t_blowup, "pass": False, "message": str(exc)})
        return report, EXIT_FAIL
    time_err = abs(st.t_blowup - t_pred) / t_star
    exp_err = abs(fit.exponent - (1 - n) / 2)
    ok = time_err <= float(s["time_tol"]) and exp_err <= float(s["exponent_tol"])
    report.update({"t_blowup": st.t_blowup, "time_error_fraction": time_err, "fit": fit.to_json(),
                   "exponent": fit.exponent, "exponent_error": exp_err, "time_tol": float(s["time_tol"]),
                   "exponent_tol": float(s["exponent_tol"]), "pass": ok})
    print(f"fitted exponent {fit.exponent:.6f} vs reference (1-n)/2 = {(1 - n) / 2:g}", file=sys.stderr)
    return report, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"catalog": cmd_catalog, "verify": cmd_verify, "simulate": cmd_simulate,
            "convergence": cmd_convergence, "blowup": cmd_blowup}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        settings = resolve_settings(parser, argv)
        report, code = COMMANDS[settings["command"]](settings)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG
    except (ConfigError, UnsupportedParams) as exc:
        print(f"radialwave: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RadialWaveError as exc:
        print(f"radialwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        emit(report, settings.get("out"))
    except OSError as exc:
        print(f"radialwave: cannot write report: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for note in report.get("notes", []):
        print(note, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
