"""Command-line front end.

Subcommands: ``spectrum`` (Laplacian eigenstructure of a topology file),
``design`` (inner coupling synthesis + verification), ``dualize``
(coupling matrix <-> feedback gain), and ``reproduce`` (run a bundled
reference scenario and write its artifacts).

Exit codes: 0 on success (or a reproduce scenario meeting its contracted
verdict), 1 on a domain failure (defective dynamics, margin violations,
rank gates, unmet verdicts; the error name goes to stderr), 2 on
usage, file, or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import scenarios
from .coupling import (
    ModalCouplingSpec,
    decompose,
    design_directed,
    design_report,
    design_undirected,
    realize,
    verify,
)
from .duality import (
    controllability,
    gain_from_h,
    h_from_gain,
    pseudo_inverse,
    recovery_residual,
)
from .errors import (
    ArgumentMarginViolation,
    DefectiveMatrix,
    EigensolverFailure,
    InvalidInput,
    NetsyncError,
    PreconditionViolation,
    RankDeficient,
    RealizationResidue,
    ZeroGain,
)
from .graph import build_laplacian, is_connected, load_topology, spectrum

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

# Errors that signal a malformed request rather than a failed computation.
_USAGE_ERRORS = (InvalidInput,)


def _fail(exc: NetsyncError) -> int:
    print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE if isinstance(exc, _USAGE_ERRORS) else EXIT_DOMAIN


def _load_matrix(path) -> np.ndarray:
    """Row-major JSON array-of-arrays matrix file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read matrix file {path}: {exc}") from exc
    try:
        m = np.array(payload, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{path} is not a numeric matrix: {exc}") from exc
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInput(f"{path} must hold a 2-D array")
    return m


def _emit(payload: dict, out_dir, filename: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_dir is None:
        sys.stdout.write(text)
        return
    os.makedirs(out_dir, exist_ok=True)
    scenarios.atomic_write_text(os.path.join(out_dir, filename), text)


def _cmd_spectrum(args) -> int:
    topology = load_topology(args.topology)
    lap = build_laplacian(topology)
    lap_spec = spectrum(lap)
    payload = {
        "eigenvalues": [[v.real, v.imag] for v in lap_spec.eigenvalues],
        "lambda2": [lap_spec.lambda2.real, lap_spec.lambda2.imag],
        "theta_max_radians": lap_spec.theta_max,
        "theta_max_degrees": float(np.degrees(lap_spec.theta_max)),
        "connected": is_connected(lap_spec, lap_spec.zero_tolerance),
        "defective": lap_spec.defective,
    }
    _emit(payload, args.out, "spectrum.json")
    return EXIT_OK


def _parse_poles(text, n: int):
    if text is None:
        return None
    try:
        poles = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise InvalidInput(f"--poles must be comma-separated reals: {exc}") from exc
    if len(poles) == 1:
        poles = poles * n
    if len(poles) != n:
        raise InvalidInput(f"need 1 or {n} poles, got {len(poles)}")
    return poles


def _cmd_design(args) -> int:
    A = _load_matrix(args.A)
    topology = load_topology(args.topology)
    if args.mode == "undirected" and topology.directed:
        raise InvalidInput("undirected design requested on a directed topology")
    if args.mode == "directed" and not topology.directed:
        raise InvalidInput("directed design requested on an undirected topology")
    if args.mode == "directed" and args.argument is None:
        raise InvalidInput("directed design requires --argument (degrees)")

    lap_spec = spectrum(build_laplacian(topology))
    if not is_connected(lap_spec, lap_spec.zero_tolerance):
        raise InvalidInput("topology is not connected; no design exists")
    if lap_spec.defective:
        # transverse modes do not decouple without a full Laplacian eigenbasis
        raise DefectiveMatrix(
            "topology Laplacian has no reliable eigenbasis; "
            "per-mode design is not applicable"
        )
    decomp = decompose(A)
    poles = _parse_poles(args.poles, decomp.n)
    if args.mode == "undirected":
        spec = design_undirected(decomp, lap_spec.lambda2.real, poles=poles,
                                 margin=args.margin, sigma=args.sigma)
    else:
        spec = design_directed(decomp, lap_spec.lambda2, lap_spec.theta_max,
                               argument=float(np.radians(args.argument)),
                               poles=poles, margin=args.margin,
                               sigma=args.sigma)
    mats = realize(spec, decomp)
    analysis = verify(A, mats.H_eff, args.sigma, lap_spec)
    payload = design_report(spec, mats, analysis)
    _emit(payload, args.out, "design_report.json")
    return EXIT_OK if analysis.overall_hurwitz else EXIT_DOMAIN


def _cmd_dualize(args) -> int:
    B = _load_matrix(args.B)
    payload: dict = {"B": B.tolist(), "c": args.c}
    if args.direction == "gain-to-h":
        if args.K is None:
            raise InvalidInput("gain-to-h requires --K")
        K = _load_matrix(args.K).reshape(B.shape[1], -1)
        H_paper = h_from_gain(B, K)
        payload.update({
            "K": K.tolist(),
            "H_paper": H_paper.tolist(),
            "H_eff": (-H_paper).tolist(),
            "residual": 0.0,
        })
    else:
        if args.H is None:
            raise InvalidInput("h-to-gain requires --H (the H_paper matrix)")
        H_paper = _load_matrix(args.H)
        K = gain_from_h(B, H_paper)
        payload.update({
            "K": K.tolist(),
            "H_paper": H_paper.tolist(),
            "H_eff": (-H_paper).tolist(),
            "residual": recovery_residual(B, H_paper, K),
            "pseudo_inverse": pseudo_inverse(B).tolist(),
        })
    if args.A is not None:
        A = _load_matrix(args.A)
        rank = controllability(A, B)
        payload["controllability_rank"] = rank
        payload["controllable"] = bool(rank == A.shape[0])
    _emit(payload, args.out, "dualize_report.json")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    if args.seed < 0:
        raise InvalidInput("--seed must be a nonnegative integer")
    if args.t_end is not None and args.t_end <= 0.0:
        raise InvalidInput("--t-end must be positive")
    if args.dt is not None and args.dt <= 0.0:
        raise InvalidInput("--dt must be positive")
    runs = []
    if args.name == "all":
        runs = [("example1", {}), ("example2", {}), ("example3", {}),
                ("example4", {}), ("rossler", {}),
                ("rossler", {"baseline": True})]
    else:
        runs = [(args.name, {"baseline": True} if args.baseline else {})]

    overrides = {}
    if args.t_end is not None:
        overrides["t_end"] = args.t_end
    if args.dt is not None:
        overrides["dt"] = args.dt

    all_ok = True
    for name, kwargs in runs:
        runner = {
            "example1": scenarios.run_example1,
            "example2": scenarios.run_example2,
            "example3": scenarios.run_example3,
            "example4": scenarios.run_example4,
            "rossler": scenarios.run_rossler,
        }[name]
        result = runner(seed=args.seed, **overrides, **kwargs)
        try:
            written = scenarios.write_artifacts(result, args.out)
        except OSError as exc:
            print(f"cannot write artifacts: {exc}", file=sys.stderr)
            return EXIT_USAGE
        status = "ok" if result.verdict else "verdict-failed"
        print(f"{result.name}: {status} ({len(written)} artifacts in "
              f"{os.path.join(args.out, result.name)})")
        all_ok = all_ok and result.verdict
    return EXIT_OK if all_ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsync",
        description="Design, dualize, verify, and simulate inner coupling "
                    "matrices for diffusively coupled linear networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Laplacian spectrum of a topology file")
    p.add_argument("--topology", required=True, help="topology JSON file")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("design", help="synthesize and verify an inner coupling matrix")
    p.add_argument("--A", required=True, help="node dynamic matrix JSON file")
    p.add_argument("--topology", required=True, help="topology JSON file")
    p.add_argument("--mode", required=True, choices=("undirected", "directed"))
    p.add_argument("--poles", default=None,
                   help="comma-separated desired poles (one value is broadcast)")
    p.add_argument("--margin", type=float, default=1.0,
                   help="stability margin when no poles are given")
    p.add_argument("--argument", type=float, default=None,
                   help="modal entry argument in degrees (directed mode)")
    p.add_argument("--sigma", type=float, default=1.0, help="coupling strength")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("dualize", help="convert between gains and coupling matrices")
    p.add_argument("--direction", required=True,
                   choices=("gain-to-h", "h-to-gain"))
    p.add_argument("--B", required=True, help="input matrix JSON file")
    p.add_argument("--K", default=None, help="gain matrix JSON file")
    p.add_argument("--H", default=None, help="inner coupling matrix JSON file")
    p.add_argument("--A", default=None,
                   help="dynamics matrix JSON file (adds the controllability gate)")
    p.add_argument("--c", type=float, default=1.0, help="coupling strength")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.set_defaults(func=_cmd_dualize)

    p = sub.add_parser("reproduce", help="run a bundled reference scenario")
    p.add_argument("name", choices=scenarios.SCENARIO_NAMES + ("all",))
    p.add_argument("--baseline", action="store_true",
                   help="rossler only: constant selector coupling instead of "
                        "the state-dependent design")
    p.add_argument("--seed", type=int, default=scenarios.DEFAULT_SEED)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--out", default="runs", help="artifact directory")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInput,) as exc:
        return _fail(exc)
    except (ArgumentMarginViolation, DefectiveMatrix, EigensolverFailure,
            RankDeficient, RealizationResidue, ZeroGain,
            PreconditionViolation, NetsyncError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
