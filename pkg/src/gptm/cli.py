"""Command-line front end.

Every report embeds the :class:`RunConfig` that produced it and the library
version.  Feeding that config back with ``--config`` reproduces the report
byte for byte.  ``--threads`` and ``--out`` only affect execution and are
left out of the embedded config, so reports do not depend on them.

Exit codes: 0 pass, 2 fail, 1 usage / configuration / IO error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .circuits import MediatedCircuit, circuit_matrix, locc_decompose, reconstruct_channel
from .config import tolerances
from .core import (
    EffectVector,
    StateVector,
    SystemType,
    TransformationMatrix,
    validate_effect,
    validate_state,
    validate_transformation,
)
from .errors import GPTError
from .scenarios import bmv_from_phase_gap, bmv_phases, bmv_protocol, classify_model, phase_gap, verify_no_go
from .serialization import dumps, load, to_jsonable
from .signalling import ProtocolParams, ScaleWarning, assess_superluminality, read_sweep, sweep, sweep_csv

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2
CONFIG_ENV = "GPTM_CONFIG"
GLOBAL_DEFAULTS = {"seed": 0, "tol": None, "format": "json", "threads": None, "out": None}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int
    tolerances: dict
    format: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "format": self.format,
            "params": self.params,
        }


# ---------------------------------------------------------------------------
# argument parsing


def _range(text: str):
    """``"3"`` -> 3, ``"2-4"`` -> (2, 4)."""
    if isinstance(text, (int, list, tuple)):
        return tuple(text) if isinstance(text, list) else text
    if "-" in text:
        lo, hi = (int(x) for x in text.split("-", 1))
        if lo > hi:
            raise UsageError(f"empty range {text}")
        return (lo, hi)
    return int(text)


def _angle(text) -> float:
    """Accepts numbers and expressions such as ``pi``, ``pi/2``, ``3*pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    expr = str(text).strip().lower()
    allowed = set("0123456789.e+-*/() pi")
    if not set(expr) <= allowed:
        raise UsageError(f"cannot parse angle {text!r}")
    try:
        return float(eval(expr, {"__builtins__": {}}, {"pi": math.pi}))  # noqa: S307 - filtered charset
    except Exception as exc:  # pragma: no cover - message only
        raise UsageError(f"cannot parse angle {text!r}") from exc


def _common(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=default)
    g = common.add_argument_group("global")
    g.add_argument("--seed", type=int, help="64-bit unsigned seed (default 0)")
    g.add_argument("--tol", type=float, help="cone-membership tolerance (default 1e-9)")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    g.add_argument("--config", help=f"JSON run config (default ${CONFIG_ENV})")
    return common


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the subcommand
    # copy suppresses its defaults so it cannot clobber an earlier value
    common = _common(argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="gptm", description="GPT mediator no-go toolkit", parents=[_common(None)])
    p.add_argument("--version", action="version", version=f"gptm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-nogo", parents=[common], help="random classical-mediator circuits stay separable")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--dims", default=None, help="dim_A,dim_B (default 2,2)")
    v.add_argument("--kinds", default=None, help="kind_A,kind_B from quantum|classical")
    v.add_argument("--g-size", dest="g_size", default=None, help="field size or range lo-hi (default 2-4)")
    v.add_argument("--rounds", default=None, help="round count or range lo-hi (default 1-3)")

    lc = sub.add_parser("locc-decompose", parents=[common], help="product-map terms of a classical-mediator circuit")
    lc.add_argument("circuit", nargs="?", default=None)
    lc.add_argument("--prune", action="store_true", default=None)

    b = sub.add_parser("bmv", parents=[common], help="two-mass interferometer with a quantum mediator")
    b.add_argument("--phase-gap", dest="phase_gap", default=None, help="e.g. pi, pi/2, 1.3")
    for name in ("m-a", "m-b", "d", "L", "T"):
        b.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float, default=None)
    b.add_argument("--collapse", type=float, default=None, help="branch dephasing strength lambda")

    s = sub.add_parser("signalling", parents=[common], help="light-cone analysis of the no-field-state model")
    for name in ("m-a", "m-b", "d", "L", "T-A", "T-B"):
        s.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float, default=None)
    s.add_argument("--c", dest="c", default=None, help="speed of light override (number or inf)")
    s.add_argument("--threshold", type=float, default=None)
    s.add_argument("--ideal", action="store_true", default=None)
    s.add_argument("--sweep", default=None, help="CSV file with columns m_A,m_B,d,L,T_A,T_B")

    c = sub.add_parser("classify", parents=[common], help="which theorem condition a model class drops")
    c.add_argument("model", nargs="?", default=None, choices=["collapse", "nonmediated", "nonclassical-g"])

    va = sub.add_parser("validate", parents=[common], help="check a state/effect/map/circuit document")
    va.add_argument("object", nargs="?", default=None)
    return p


# parameter names per command (their CLI dest and default)
COMMAND_PARAMS = {
    "verify-nogo": {"trials": 1000, "dims": "2,2", "kinds": "quantum,quantum", "g_size": "2-4", "rounds": "1-3"},
    "locc-decompose": {"circuit": None, "prune": False},
    "bmv": {"phase_gap": None, "m_a": None, "m_b": None, "d": None, "L": None, "T": None, "collapse": 0.0},
    "signalling": {
        "m_a": None,
        "m_b": None,
        "d": None,
        "L": None,
        "T_A": None,
        "T_B": None,
        "c": None,
        "threshold": 0.25,
        "ideal": False,
        "sweep": None,
    },
    "classify": {"model": None},
    "validate": {"object": None},
}


def _load_config(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    return data.get("run_config", data)


def resolve(args: argparse.Namespace) -> tuple[RunConfig, dict]:
    """Merge builtin defaults < config file < explicit flags."""
    cfg = _load_config(args.config)
    if cfg.get("command") not in (None, args.command):
        cfg = {k: v for k, v in cfg.items() if k not in ("command", "params")}
    glob = {}
    for k, default in GLOBAL_DEFAULTS.items():
        val = getattr(args, k)
        if val is None:
            val = cfg.get(k, default)
            if k == "tol" and val is None and "tolerances" in cfg:
                val = cfg["tolerances"].get("cone")
        glob[k] = val
    params = {}
    saved = cfg.get("params", {})
    for k, default in COMMAND_PARAMS[args.command].items():
        val = getattr(args, k, None)
        params[k] = saved.get(k, default) if val is None else val
    seed = int(glob["seed"])
    if not 0 <= seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    tol = {"algebraic": 1e-12, "cone": 1e-9 if glob["tol"] is None else float(glob["tol"])}
    run = RunConfig(args.command, seed, tol, glob["format"], params)
    execution = {"threads": glob["threads"] or os.cpu_count() or 1, "out": glob["out"]}
    return run, execution


# ---------------------------------------------------------------------------
# commands


def _envelope(run: RunConfig, result) -> str:
    return dumps({"version": __version__, "run_config": run.to_dict(), "result": to_jsonable(result)})


def cmd_verify_nogo(run: RunConfig, ex: dict):
    p = run.params
    if int(p["trials"]) <= 0:
        raise UsageError("--trials must be positive")
    dims = [int(x) for x in str(p["dims"]).split(",")]
    kinds = str(p["kinds"]).split(",")
    if len(dims) != 2 or len(kinds) != 2 or not set(kinds) <= {"quantum", "classical"}:
        raise UsageError("--dims and --kinds take two comma-separated values")
    report = verify_no_go(
        int(p["trials"]),
        dims[0],
        dims[1],
        _range(p["g_size"]),
        _range(p["rounds"]),
        run.seed,
        kinds[0],
        kinds[1],
        run.tolerances["cone"],
        ex["threads"],
    )
    return report, EXIT_PASS if report.passed else EXIT_FAIL


def cmd_locc_decompose(run: RunConfig, ex: dict):
    if not run.params["circuit"]:
        raise UsageError("locc-decompose needs a circuit file")
    c = load(run.params["circuit"])
    if not isinstance(c, MediatedCircuit):
        raise UsageError("the document is not a circuit")
    terms = locc_decompose(c, prune=bool(run.params["prune"]))
    err = float(np.linalg.norm(reconstruct_channel(terms).matrix - circuit_matrix(c).matrix))
    ok = err <= 1e-10
    return {"terms": terms, "term_count": len(terms), "reconstruction_error": err}, EXIT_PASS if ok else EXIT_FAIL


def cmd_bmv(run: RunConfig, ex: dict):
    p = run.params
    lam = float(p["collapse"] or 0.0)
    phys = [p[k] for k in ("m_a", "m_b", "d", "L", "T")]
    if p["phase_gap"] is not None:
        gap = _angle(p["phase_gap"])
        res = bmv_from_phase_gap(gap, lam)
        phases = np.array([[0.0, 0.0], [0.0, gap]])
    elif all(v is not None for v in phys):
        res = bmv_protocol(*phys, collapse=lam)
        phases = bmv_phases(*phys)
    else:
        raise UsageError("bmv needs --phase-gap or all of --m-a --m-b --d --L --T")
    return {"state": res.state, "negativity": res.negativity, "phases": phases, "phase_gap": phase_gap(phases)}, EXIT_PASS


def _constants(p):
    from dataclasses import replace

    from .config import CODATA

    return CODATA if p["c"] is None else replace(CODATA, c=float(p["c"]))


def cmd_signalling(run: RunConfig, ex: dict):
    p = run.params
    consts = _constants(p)
    if p["sweep"]:
        try:
            params = read_sweep(Path(p["sweep"]).read_text())
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read sweep file: {exc}") from exc
        return sweep(params, consts, float(p["threshold"])), EXIT_PASS
    names = ("m_a", "m_b", "d", "L", "T_A", "T_B")
    if any(p[k] is None for k in names):
        raise UsageError("signalling needs --sweep or all of --m-a --m-b --d --L --T-A --T-B")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ScaleWarning)
        params = ProtocolParams(p["m_a"], p["m_b"], p["d"], p["L"], p["T_A"], p["T_B"])
    report = assess_superluminality(params, consts, float(p["threshold"]), bool(p["ideal"]))
    if run.format == "csv":
        return [report.row(params)], EXIT_PASS
    return {"report": report, "warnings": [str(w.message) for w in caught]}, EXIT_PASS


def cmd_classify(run: RunConfig, ex: dict):
    if not run.params["model"]:
        raise UsageError("classify needs a model: collapse | nonmediated | nonclassical-g")
    prof = classify_model(run.params["model"])
    return prof, EXIT_PASS if prof.matches_demo() else EXIT_FAIL


def cmd_validate(run: RunConfig, ex: dict):
    if not run.params["object"]:
        raise UsageError("validate needs an object file")
    obj = load(run.params["object"])
    tol = run.tolerances["cone"]
    if isinstance(obj, StateVector):
        reports = [validate_state(obj, tol)]
    elif isinstance(obj, EffectVector):
        reports = [validate_effect(obj, tol)]
    elif isinstance(obj, TransformationMatrix):
        reports = [validate_transformation(obj, tol)]
    elif isinstance(obj, MediatedCircuit):
        reports = obj.validate(tol)
    elif isinstance(obj, SystemType):
        raise UsageError("systems carry no invariants to validate")
    else:  # pragma: no cover
        raise UsageError("unsupported document")
    ok = all(r.passed for r in reports)
    return {"passed": ok, "reports": reports}, EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {
    "verify-nogo": cmd_verify_nogo,
    "locc-decompose": cmd_locc_decompose,
    "bmv": cmd_bmv,
    "signalling": cmd_signalling,
    "classify": cmd_classify,
    "validate": cmd_validate,
}


def _render(run: RunConfig, result) -> str:
    if run.format == "csv":
        if run.command != "signalling":
            raise UsageError("csv output is only available for signalling")
        return sweep_csv(result)
    return _envelope(run, result)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_ERROR
    try:
        run, ex = resolve(args)
        with tolerances(cone=run.tolerances["cone"]):
            result, code = COMMANDS[run.command](run, ex)
            text = _render(run, result)
        if ex["out"]:
            Path(ex["out"]).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return code
    except (UsageError, GPTError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"gptm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
