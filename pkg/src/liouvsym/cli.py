"""Command-line front end.

Every command reads one JSON config (``-`` for stdin)::

    {"schema": 1, "model": "effparams", "params": {"alpha": 1.0}, "analysis": {"tol": 1e-10}}

``--set key.path=value`` overrides config entries; values are parsed as JSON
when possible. Exit codes: 0 success, 2 config error, 3 precondition
violation, 4 failed numerical self-check.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import classical as cl
from .liouville_space import liouvillian_from_h
from .models import (
    BLOCH_LABELS,
    VANISHING_TRIPLES,
    CircuitParams,
    CorrelatorSpec,
    EffParams,
    ParameterError,
    all_correlator_specs,
    analytic_spectrum,
    bloch_liouvillian,
    block_projector,
    build_heff,
    cancellation_report,
    circuit_to_coefficients,
    correlator_analytic,
    correlator_numeric,
    harmonic_oscillator,
    pauli_liouvillian,
    stark_ladder,
    ten_block_projector,
)
from .open_system import (
    Dissipator,
    InvalidStateError,
    block_leakage,
    dfls_scan,
    evolve,
    lindblad_superop,
    projected_dissipator,
    sigma_minus,
)
from .operator_core import NotHermitianError, PauliBasis, hermitian_eig, pauli
from .serialization import dumps, series_csv
from .symmetry_analysis import block_decompose, difference_degeneracies

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_TOLERANCE = 0, 2, 3, 4

MODELS = ("effparams", "circuit", "oscillator", "stark", "custom-hamiltonian", "classical")
TOP_KEYS = {"schema", "model", "params", "analysis", "dissipator"}
ANALYSIS_KEYS = {"tol", "times", "seed", "draws", "analytic"}
PARAM_KEYS = {
    "effparams": {f.name for f in dataclasses.fields(EffParams)},
    "circuit": {f.name for f in dataclasses.fields(CircuitParams)},
    "oscillator": {"D"},
    "stark": {"D", "Delta"},
    "custom-hamiltonian": {"matrix"},
    "classical": {"gamma", "mu", "D", "start"},
}
DISSIPATOR_KEYS = {"jumps", "confine"}
JUMP_KEYS = {"op", "rate"}


class ConfigError(Exception):
    pass


class PreconditionError(Exception):
    pass


class ToleranceError(Exception):
    def __init__(self, message: str, report):
        super().__init__(message)
        self.report = report


# -- config -------------------------------------------------------------------


def _check_keys(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(cfg: dict, overrides) -> dict:
    for item in overrides or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {part} is not an object")
        node[parts[-1]] = _parse_value(raw)
    return cfg


def load_config(source: str, overrides=None) -> dict:
    try:
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    cfg = apply_overrides(cfg, overrides)
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    _check_keys(cfg, TOP_KEYS, "config")
    if cfg.get("schema") != 1:
        raise ConfigError(f"schema: expected 1, got {cfg.get('schema')!r}")
    model = cfg.get("model")
    if model not in MODELS:
        raise ConfigError(f"model: expected one of {', '.join(MODELS)}, got {model!r}")
    _check_keys(cfg.get("params", {}), PARAM_KEYS[model], "params")
    _check_keys(cfg.get("analysis", {}), ANALYSIS_KEYS, "analysis")
    if "dissipator" in cfg:
        d = cfg["dissipator"]
        _check_keys(d, DISSIPATOR_KEYS, "dissipator")
        for i, jump in enumerate(d.get("jumps", [])):
            _check_keys(jump, JUMP_KEYS, f"dissipator.jumps[{i}]")
        if d.get("confine") not in (None, "ten-block"):
            raise ConfigError("dissipator.confine: expected 'ten-block' or null")


def _analysis(cfg, key, default):
    return cfg.get("analysis", {}).get(key, default)


def time_grid(cfg, default=(0.0, 20.0, 50)) -> np.ndarray:
    t = _analysis(cfg, "times", {})
    if not isinstance(t, dict):
        raise ConfigError("analysis.times: expected an object with start, stop, num")
    _check_keys(t, {"start", "stop", "num"}, "analysis.times")
    num = t.get("num", default[2])
    if not isinstance(num, int) or num < 1:
        raise ConfigError("analysis.times.num: expected a positive integer")
    return np.linspace(float(t.get("start", default[0])), float(t.get("stop", default[1])), num)


def _build(factory, params, where):
    try:
        return factory(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def effparams_of(cfg) -> EffParams:
    model = cfg["model"]
    params = cfg.get("params", {})
    if model == "effparams":
        return _build(EffParams, params, "params")
    if model == "circuit":
        return circuit_to_coefficients(_build(CircuitParams, params, "params"))
    raise PreconditionError(f"model {model!r} has no qubit-SET coefficients")


def _custom_matrix(params) -> np.ndarray:
    raw = params.get("matrix")
    if raw is None:
        raise ConfigError("params.matrix: required for custom-hamiltonian")
    try:
        a = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"params.matrix: {exc}") from exc
    if a.ndim == 3 and a.shape[-1] == 2:
        a = a[..., 0] + 1j * a[..., 1]
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigError("params.matrix: expected a square matrix (reals or [re, im] pairs)")
    return a.astype(complex)


def hamiltonian_of(cfg) -> np.ndarray:
    model = cfg["model"]
    params = cfg.get("params", {})
    if model in ("effparams", "circuit"):
        return build_heff(effparams_of(cfg))
    if model == "oscillator":
        return harmonic_oscillator(int(params.get("D", 10))).h
    if model == "stark":
        return stark_ladder(int(params.get("D", 10)), float(params.get("Delta", 0.0))).h
    if model == "custom-hamiltonian":
        return _custom_matrix(params)
    raise PreconditionError(f"model {model!r} has no Hamiltonian matrix")


# -- commands -----------------------------------------------------------------


def _param_points(cfg, minimum: float = 0.0) -> tuple[list[EffParams], bool]:
    """Seeded random draws when ``analysis.draws > 0``, else the configured point."""
    n = int(_analysis(cfg, "draws", 0))
    if n <= 0:
        return [effparams_of(cfg)], False
    rng = np.random.default_rng(int(_analysis(cfg, "seed", 0)))
    return [EffParams.random(rng, minimum=minimum) for _ in range(n)], True


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _spectrum_report(p: EffParams, tol: float = 1e-10, force_analytic: bool = False) -> dict:
    h = build_heff(p)
    w, _ = hermitian_eig(h)
    out = {"params": dataclasses.asdict(p), "eigenvalues_numeric": w,
           "difference_degeneracies": difference_degeneracies(w).to_dict()}
    reduced = p.beta == 0.0 and p.epsilon == 0.0
    if reduced:
        wa = analytic_spectrum(p)
        err = float(np.max(np.abs(wa - w)))
        out.update(eigenvalues_analytic=wa, analytic_max_error=err, analytic_agrees=err <= tol)
    elif force_analytic:
        raise PreconditionError("analytic spectrum needs beta = epsilon = 0")
    else:
        out.update(eigenvalues_analytic=None, analytic_agrees=None)
    return out


def _spectrum_worker(args):
    return _spectrum_report(*args)


def cmd_spectrum(cfg, args) -> tuple[dict, str | None]:
    tol = float(_analysis(cfg, "tol", 1e-10))
    model = cfg["model"]
    if model in ("effparams", "circuit"):
        force = bool(_analysis(cfg, "analytic", False))
        pts, drawn = _param_points(cfg)
        reports = _map(_spectrum_worker, [(p, tol, force) for p in pts], args.jobs)
        report = {"model": model, "draws": reports} if drawn else {"model": model, **reports[0]}
        bad = [r for r in reports if r["analytic_agrees"] is False]
        if bad:
            raise ToleranceError("analytic and numeric eigenvalues disagree", report)
        return report, None
    if _analysis(cfg, "analytic", False):
        raise PreconditionError(f"no analytic spectrum for model {model!r}")
    h = hamiltonian_of(cfg)
    try:
        w, _ = hermitian_eig(h)
    except NotHermitianError as exc:
        raise PreconditionError(str(exc)) from exc
    return {"model": model, "eigenvalues_numeric": w,
            "difference_degeneracies": difference_degeneracies(w).to_dict()}, None


def vectorized_labels(n: int) -> list[str]:
    """Column-stacking order: index ``m + n N`` holds ``|m><n|``."""
    return [f"|{k % n}><{k // n}|" for k in range(n * n)]


def cmd_liouvillian(cfg, args) -> tuple[dict, str | None]:
    model = cfg["model"]
    h = hamiltonian_of(cfg)
    try:
        l = liouvillian_from_h(h)
    except NotHermitianError as exc:
        raise PreconditionError(str(exc)) from exc
    report = {"model": model, "basis": args.basis}
    if args.basis == "pauli":
        n = h.shape[0]
        nq = int(round(np.log2(n)))
        if 2**nq != n:
            raise PreconditionError("pauli basis needs a 2^n dimensional Hamiltonian")
        if model in ("effparams", "circuit"):
            m = bloch_liouvillian(effparams_of(cfg))
            labels = list(BLOCH_LABELS)
            oracle = pauli_liouvillian(h)
            perm = [PauliBasis(2).index(lbl) for lbl in labels]
            err = float(np.max(np.abs(m - oracle[np.ix_(perm, perm)])))
            report["oracle_max_error"] = err
        else:
            pb = PauliBasis(nq)
            m = np.array([pb.coefficients(1j * (b @ h - h @ b)).real for b in pb.elements]).T
            labels = list(pb.labels)
            err = 0.0
    else:
        m = l.matrix
        labels = vectorized_labels(h.shape[0])
        err = 0.0
    blocks = block_decompose(m, labels)
    report.update(labels=labels, matrix=m, blocks=blocks.to_dict(), table=blocks.table())
    if err > float(_analysis(cfg, "tol", 1e-13)):
        raise ToleranceError("Bloch Liouvillian disagrees with the commutator projection", report)
    return report, None


def _correlator_worker(args):
    p, times, tol = args
    return cancellation_report(p, times, tol).to_dict()


def cmd_correlators(cfg, args) -> tuple[dict, str | None]:
    p = effparams_of(cfg)
    times = time_grid(cfg)
    tol = float(_analysis(cfg, "tol", 1e-10))
    if args.jkl:
        try:
            specs = [CorrelatorSpec.parse(args.jkl.replace(",", ""))]
        except ValueError as exc:
            raise ConfigError(f"--jkl: {exc}") from exc
    else:
        specs = all_correlator_specs()
    summary = cancellation_report(p, times, tol)
    h = build_heff(p)
    cols = [correlator_analytic(p, s, times) if summary.method == "analytic" else correlator_numeric(h, s, times)
            for s in specs]
    csv_text = series_csv(["t"] + [s.name for s in specs], np.column_stack([times] + cols).tolist())
    report = {"model": cfg["model"], "params": dataclasses.asdict(p), **summary.to_dict(),
              "n_vanishing": len(summary.vanishing),
              "generic_pattern": set(summary.vanishing) == VANISHING_TRIPLES}
    pts, drawn = _param_points(cfg, minimum=0.05)
    if drawn:
        draws = _map(_correlator_worker, [(q, times, tol) for q in pts], args.jobs)
        report["draws"] = [{"n_vanishing": len(d["vanishing"]),
                            "generic_pattern": set(d["vanishing"]) == VANISHING_TRIPLES} for d in draws]
    return report, csv_text


def parse_rho0(spec: str, n: int) -> np.ndarray:
    """Initial state from a short spec.

    ``mixed``; ``basis:k``; for two qubits also ``yz:r,theta[;set:x,y,z]``,
    the qubit in the y-z plane times an SET state with Bloch vector ``(x, y, z)``
    (maximally mixed if omitted).
    """
    spec = spec.strip()
    if spec == "mixed":
        return np.eye(n, dtype=complex) / n
    if spec.startswith("basis:"):
        k = int(spec[6:])
        if not 0 <= k < n:
            raise InvalidStateError(f"basis index {k} out of range")
        rho = np.zeros((n, n), dtype=complex)
        rho[k, k] = 1
        return rho
    if spec.startswith("yz:"):
        if n != 4:
            raise PreconditionError("yz states need the two-qubit model")
        parts = spec[3:].split(";")
        r, theta = (float(x) for x in parts[0].split(","))
        qubit = 0.5 * (np.eye(2) + r * np.cos(theta) * pauli("y") + r * np.sin(theta) * pauli("z"))
        s = np.zeros(3)
        for extra in parts[1:]:
            if not extra.startswith("set:"):
                raise ConfigError(f"--rho0: unknown part {extra!r}")
            s = np.array([float(x) for x in extra[4:].split(",")])
        rho_s = 0.5 * (np.eye(2) + s[0] * pauli("x") + s[1] * pauli("y") + s[2] * pauli("z"))
        return np.kron(qubit, rho_s)
    raise ConfigError(f"--rho0: cannot parse {spec!r}")


def _jump_operator(op: str, n: int) -> np.ndarray:
    if op in ("0-", "-0"):
        if n != 4:
            raise PreconditionError("lowering operators need the two-qubit model")
        return sigma_minus(2, which=op.index("-"))
    try:
        m = pauli(op)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"dissipator op {op!r}: expected a Pauli string or '0-'/'-0'") from exc
    if m.shape[0] != n:
        raise ConfigError(f"dissipator op {op!r} does not match dimension {n}")
    return m


def cmd_evolve(cfg, args) -> tuple[dict, str | None]:
    model = cfg["model"]
    h = hamiltonian_of(cfg)
    n = h.shape[0]
    try:
        l_u = liouvillian_from_h(h)
    except NotHermitianError as exc:
        raise PreconditionError(str(exc)) from exc
    l_d = None
    if "dissipator" in cfg:
        jumps = cfg["dissipator"].get("jumps", [])
        if jumps:
            l_d = lindblad_superop(Dissipator([_jump_operator(j["op"], n) for j in jumps],
                                              [float(j.get("rate", 1.0)) for j in jumps]))
            if cfg["dissipator"].get("confine") == "ten-block":
                if n != 4:
                    raise PreconditionError("ten-block confinement needs the two-qubit model")
                l_d = projected_dissipator(l_d, ten_block_projector())
    l_total = l_u if l_d is None else l_u + l_d
    times = time_grid(cfg, (0.0, 10.0, 101))
    rho0 = parse_rho0(args.rho0, n)
    rhos = evolve(l_total, rho0, times)
    traces = np.array([np.trace(r).real for r in rhos])
    report = {"model": model, "dissipative": l_d is not None,
              "max_trace_error": float(np.max(np.abs(traces - 1)))}
    if n == 4:
        pb = PauliBasis(2)
        coeffs = np.array([pb.coefficients(r).real for r in rhos])
        header = ["t", "trace"] + list(pb.labels[1:])
        rows = np.column_stack([times, traces, coeffs[:, 1:]])
        leak = block_leakage(rhos, block_projector())
        report["block_leakage_max"] = float(leak.max())
        if model in ("effparams", "circuit"):
            bd = block_decompose(bloch_liouvillian(effparams_of(cfg)), BLOCH_LABELS)
            report["blocks"] = bd.to_dict()
            if l_d is not None:
                report["dfls"] = [dataclasses.asdict(b) | {"decoherence_free": b.decoherence_free}
                                  for b in dfls_scan(l_u, l_d, bd)]
    else:
        header = ["t", "trace", "purity"] + [f"p{k}" for k in range(n)]
        purity = np.array([np.trace(r @ r).real for r in rhos])
        rows = np.column_stack([times, traces, purity, np.array([np.diag(r).real for r in rhos])])
    csv_text = series_csv(header, rows.tolist())
    if report["max_trace_error"] > float(_analysis(cfg, "tol", 1e-8)):
        raise ToleranceError("trace not conserved", report)
    return report, csv_text


def _classical_params(cfg):
    if cfg["model"] != "classical":
        raise PreconditionError("the classical command needs model 'classical'")
    p = cfg.get("params", {})
    return (float(p.get("gamma", 0.0)), float(p.get("mu", 0.0)), int(p.get("D", 6)),
            tuple(float(x) for x in p.get("start", (0.0, 1.0))))


def cmd_classical(cfg, args) -> tuple[dict, str | None]:
    gamma, mu, D, start = _classical_params(cfg)
    if args.mode == "flow":
        times = time_grid(cfg, (0.0, 2 * np.pi, 201))
        traj = cl.flow_trajectory(gamma, mu, start, times)
        r = np.hypot(traj[:, 0], traj[:, 1])
        report = {"gamma": gamma, "mu": mu, "start": list(start), "final": traj[-1], "final_radius": float(r[-1])}
        if gamma == mu:
            expect = np.hypot(*start) * np.exp(-gamma * times)
            report["spiral_max_error"] = float(np.max(np.abs(r - expect)))
        csv_text = series_csv(["t", "p", "q"], np.column_stack([times, traj]).tolist())
        if report.get("spiral_max_error", 0.0) > float(_analysis(cfg, "tol", 1e-8)):
            raise ToleranceError("trajectory deviates from the analytic spiral", report)
        return report, csv_text
    g, m = Fraction(gamma), Fraction(mu)
    rng = np.random.default_rng(int(_analysis(cfg, "seed", 0)))
    f, gg, hh = (cl.PolyFunction.random(rng, 3, 2 * D) for _ in range(3))
    pb = cl.poisson_bracket
    jacobi = pb(f, pb(gg, hh)) + pb(gg, pb(hh, f)) + pb(hh, pb(f, gg))
    l_tot = cl.damped_liouvillian(g, m, D)
    H = cl.PolyFunction.oscillator_hamiltonian(D)
    fm = cl.flow_matrix(l_tot)
    ev = np.sort_complex(np.linalg.eigvals(fm))
    closed = np.sort_complex(-1j * cl.damped_eigenfrequencies(gamma, mu))
    report = {
        "gamma": gamma, "mu": mu, "D": D,
        "jacobi_exact_zero": jacobi.is_zero(),
        "l_tot_commutes_with_scaling": cl.op_commutator(l_tot, cl.scaling_generator(D)).is_zero(),
        "energy_conserved_undamped": cl.classical_liouvillian(H, D)(H).is_zero(),
        "eigenfrequencies": cl.damped_eigenfrequencies(gamma, mu),
        "eigenfrequency_max_error": float(np.max(np.abs(ev - closed))),
        "scaling_map": dataclasses.asdict(cl.scaling_map_symmetry_check(2, D, g, m)),
    }
    ok = (report["jacobi_exact_zero"] and report["l_tot_commutes_with_scaling"]
          and report["energy_conserved_undamped"] and report["eigenfrequency_max_error"] <= 1e-12
          and report["scaling_map"]["residual"] <= 1e-12)
    if not ok:
        raise ToleranceError("classical self-checks failed", report)
    return report, None


COMMANDS = {
    "spectrum": cmd_spectrum,
    "liouvillian": cmd_liouvillian,
    "correlators": cmd_correlators,
    "evolve": cmd_evolve,
    "classical": cmd_classical,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liouvsym", description="Liouville-space symmetry analyses.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("config", help="JSON config file, or - for stdin")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. params.alpha=1.5")
        sp.add_argument("--out", help="write the CSV series (or JSON report) to this file")
        sp.add_argument("--report", help="write the JSON report to this file")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for parameter draws")
        return sp

    add("spectrum", "eigenvalues and difference degeneracies")
    sp = add("liouvillian", "Liouvillian matrix and block structure")
    sp.add_argument("--basis", choices=("pauli", "vectorized"), default="pauli")
    sp = add("correlators", "qubit-SET correlators and their cancellations")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--all", action="store_true", help="all 45 nontrivial triples (default)")
    grp.add_argument("--jkl", help="one triple, e.g. y,x,0")
    sp = add("evolve", "density-matrix evolution with an optional dissipator")
    sp.add_argument("--rho0", default="mixed", help="mixed | basis:k | yz:r,theta[;set:x,y,z]")
    sp = add("classical", "damped-oscillator phase-space flow or algebra checks")
    sp.add_argument("mode", choices=("flow", "algebra"))
    return ap


def _emit(path, text):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_outputs(args, report, csv_text):
    rep = dumps(report)
    if csv_text is None:
        _emit(args.out, rep)
        if args.report:
            _emit(args.report, rep)
        return
    _emit(args.out, csv_text)
    if args.report:
        _emit(args.report, rep)
    elif args.out:
        sys.stdout.write(rep)
    else:
        sys.stderr.write(rep)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, args.set)
        report, csv_text = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, ParameterError, InvalidStateError, cl.DegreeOverflowError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ToleranceError as exc:
        _write_outputs(args, exc.report, None)
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    _write_outputs(args, report, csv_text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
