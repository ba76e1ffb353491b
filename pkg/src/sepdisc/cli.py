"""Command-line front end.

Each subcommand runs one pipeline and emits a machine-readable JSON report
(complex entries as [re, im] pairs). Reports are deterministic under fixed
seeds; the timing field is the only part that varies between runs.

Exit codes: 0 success, 2 input validation, 3 solver non-convergence,
4 refuted certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .certificates import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    block_positivity_search,
    breuer_hall_witness,
    four_bell_certificate_psd_margins,
    four_bell_resource_certificate,
    three_bell_resource_certificate,
    three_bell_slack_conjugations,
    three_bell_slack_map_residual,
    ydy_certificate,
)
from .conesolve import ConvergenceError, format_iterate_log, span_residual
from .discrimination import (
    four_bell_value,
    optimal_global,
    optimal_ppt,
    three_bell_value,
)
from .linalg import BipartiteSpace, PAULI, kron
from .states import (
    CATALOG_NAMES,
    Ensemble,
    ProductVector,
    catalog,
    extend_ensemble,
    projector,
    tiles_orthogonal_state,
    ydy_unitaries,
)
from .ups import (
    UPSet,
    is_unextendable,
    replacement_projections,
    separable_perfect_discrimination,
    tiles_overlap_constant,
    ups_plus_state_bound,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_REFUTED = 4


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Shared file format: nested arrays of [re, im] pairs, row-major
# ---------------------------------------------------------------------------


def encode_vector(v) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(v, dtype=complex)]


def decode_vector(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m, dtype=complex)]


def decode_matrix(data) -> np.ndarray:
    return np.array([decode_vector(row) for row in data], dtype=complex)


def _decode_space(data) -> BipartiteSpace:
    try:
        return BipartiteSpace(
            int(data["dim_x"]),
            int(data["dim_y"]),
            tuple(data.get("factors_x") or ()),
            tuple(data.get("factors_y") or ()),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad space header: {exc}") from exc


def load_ensemble(path: str) -> Ensemble:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "ensemble":
        raise InputError(f"{path}: expected kind 'ensemble'")
    space = _decode_space(data["space"])
    try:
        states = tuple(decode_matrix(s) for s in data["states"])
        probs = np.asarray(data["probs"], dtype=float)
        return Ensemble(space, states, probs)
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_product_set(path: str) -> UPSet:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "product_set":
        raise InputError(f"{path}: expected kind 'product_set'")
    space = _decode_space(data["space"])
    try:
        members = tuple(
            ProductVector(decode_vector(m["x"]), decode_vector(m["y"]))
            for m in data["members"]
        )
        return UPSet(space, members)
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def save_ensemble(path: str, e: Ensemble) -> None:
    data = {
        "kind": "ensemble",
        "space": {
            "dim_x": e.space.dim_x,
            "dim_y": e.space.dim_y,
            "factors_x": list(e.space.factors_x),
            "factors_y": list(e.space.factors_y),
        },
        "probs": [float(p) for p in e.probs],
        "states": [encode_matrix(s) for s in e.states],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _resolve_ensemble(args) -> Ensemble:
    name = args.family
    if name in CATALOG_NAMES:
        fam = catalog(name)
        if isinstance(fam, UPSet):
            raise InputError(f"{name!r} is a product set; use the 'ups' command")
        ens = fam
    else:
        ens = load_ensemble(name)
    if args.prior is not None:
        probs = np.asarray([float(t) for t in args.prior.split(",")], dtype=float)
        if probs.size != len(ens):
            raise InputError(f"prior needs {len(ens)} entries, got {probs.size}")
        try:
            ens = Ensemble(ens.space, ens.states, probs)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if args.epsilon is not None:
        if name not in ("bell3", "bell4"):
            raise InputError("--epsilon only applies to the bell3/bell4 families")
        try:
            ens = extend_ensemble(ens, args.epsilon)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return ens


def cmd_discriminate(args) -> tuple[dict, int]:
    ens = _resolve_ensemble(args)
    result = optimal_ppt(ens) if args.measurement_class == "ppt" else optimal_global(ens)
    if args.log_iterates:
        with open(args.log_iterates, "w") as fh:
            fh.write(format_iterate_log(result.solution.log))
    outputs = {
        "value": result.value,
        "dual_value": result.solution.dual_value,
        "gap": result.gap,
        "status": result.solution.status,
        "iterations": result.solution.iterations,
        "certificate": {
            "cone": result.certificate.cone_tag,
            "claimed_value": result.certificate.claimed_value,
            "matrix": encode_matrix(result.certificate.matrix),
        },
        "measurement": [encode_matrix(p) for p in result.measurement.operators],
    }
    return outputs, EXIT_OK


def _search_payload(report) -> dict:
    return {
        "min_overlap": report.min_overlap,
        "iterations": report.iterations_per_restart,
        "witness_x": encode_vector(report.witness.x),
        "witness_y": encode_vector(report.witness.y),
        "refuted": report.refuted,
    }


def cmd_certify(args) -> tuple[dict, int]:
    name = args.name
    if name in ("bell3", "bell4") and args.epsilon is None:
        raise InputError(f"certify {name} requires --epsilon")

    if name == "bell3":
        try:
            cert, slacks = three_bell_resource_certificate(args.epsilon)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        space = BipartiteSpace(4, 4, (2, 2), (2, 2))
        searches = [
            block_positivity_search(q, space, args.restarts, args.seed) for q in slacks
        ]
        conj2, conj3 = three_bell_slack_conjugations(args.epsilon)
        outputs = {
            "claimed_trace": cert.claimed_value,
            "trace_formula_residual": abs(cert.claimed_value - three_bell_value(args.epsilon)),
            "conjugation_residuals": [conj2, conj3],
            "map_link_residual": three_bell_slack_map_residual(args.epsilon),
            "searches": [_search_payload(r) for r in searches],
            "certificate": {"cone": cert.cone_tag, "matrix": encode_matrix(cert.matrix)},
        }
        refuted = any(r.refuted for r in searches)
        outputs["outcome"] = "refuted" if refuted else "unrefuted"
        return outputs, EXIT_REFUTED if refuted else EXIT_OK

    if name == "bell4":
        try:
            cert = four_bell_resource_certificate(args.epsilon)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        margins = four_bell_certificate_psd_margins(args.epsilon)
        outputs = {
            "claimed_trace": cert.claimed_value,
            "trace_formula_residual": abs(cert.claimed_value - four_bell_value(args.epsilon)),
            "transposed_slack_min_eigenvalues": margins,
            "certificate": {"cone": cert.cone_tag, "matrix": encode_matrix(cert.matrix)},
        }
        refuted = min(margins) < -1e-10
        outputs["outcome"] = "refuted" if refuted else "unrefuted"
        return outputs, EXIT_REFUTED if refuted else EXIT_OK

    if name == "ydy":
        cert = ydy_certificate()
        v = 1j * kron(PAULI[2], PAULI[3])
        skew_residuals = []
        identity_residuals = []
        searches = []
        ens = catalog("ydy")
        for k, u in enumerate(ydy_unitaries()):
            skew = v.T @ u
            skew_residuals.append(float(np.abs(skew.T + skew).max()))
            witness = breuer_hall_witness(u, v)
            diff = cert.matrix - ens.states[k] / 4.0 - witness / 16.0
            identity_residuals.append(float(np.abs(diff).max()))
            searches.append(
                block_positivity_search(
                    cert.matrix - ens.states[k] / 4.0, ens.space, args.restarts, args.seed
                )
            )
        outputs = {
            "claimed_trace": cert.claimed_value,
            "skew_symmetry_residuals": skew_residuals,
            "witness_identity_residuals": identity_residuals,
            "searches": [_search_payload(r) for r in searches],
            "certificate": {"cone": cert.cone_tag, "matrix": encode_matrix(cert.matrix)},
        }
        refuted = any(r.refuted for r in searches)
        outputs["outcome"] = "refuted" if refuted else "unrefuted"
        return outputs, EXIT_REFUTED if refuted else EXIT_OK

    raise InputError(f"unknown certificate name {name!r}")


def _resolve_product_set(args) -> tuple[str, UPSet]:
    name = args.family
    if name in ("tiles", "feng"):
        return name, catalog(name)
    fam = load_product_set(name)
    return name, fam


def cmd_ups(args) -> tuple[dict, int]:
    name, ups_set = _resolve_product_set(args)

    if args.action == "check":
        report = is_unextendable(ups_set)
        outputs = {"unextendable": report.unextendable}
        if report.witness is not None:
            outputs["witness_x"] = encode_vector(report.witness.x)
            outputs["witness_y"] = encode_vector(report.witness.y)
        return outputs, EXIT_OK

    if args.action == "enumerate":
        reps = replacement_projections(ups_set)
        outputs = {
            "counts": reps.counts,
            "per_index": [
                [{"x": encode_vector(pv.x), "y": encode_vector(pv.y)} for pv in lst]
                for lst in reps.per_index
            ],
        }
        return outputs, EXIT_OK

    if args.action == "separable":
        report = separable_perfect_discrimination(ups_set)
        columns = [pv.projection for pv in report.replacements.all_vectors()]
        eye = np.eye(ups_set.space.total_dim, dtype=complex)
        outputs = {
            "feasible": report.feasible,
            "phase1_value": report.lp.phase1_value,
            "identity_span_residual": span_residual(columns, eye),
        }
        if report.feasible:
            outputs["weights"] = [float(w) for w in report.lp.weights]
            outputs["measurement"] = [encode_matrix(p) for p in report.measurement.operators]
        else:
            outputs["farkas"] = encode_matrix(report.farkas)
        return outputs, EXIT_OK

    if args.action == "bound":
        if args.lam is None:
            raise InputError("the bound action requires --lambda")
        if args.lam == "analytic":
            if name != "tiles":
                raise InputError("--lambda analytic is only defined for the tiles set")
            lam = tiles_overlap_constant()
        else:
            try:
                lam = float(args.lam)
            except ValueError as exc:
                raise InputError(f"bad --lambda value {args.lam!r}") from exc
        if args.z is not None:
            with open(args.z) as fh:
                z = decode_vector(json.load(fh))
        elif name == "tiles":
            z = tiles_orthogonal_state()
        else:
            raise InputError("the bound action requires --z for this input")
        try:
            report = ups_plus_state_bound(ups_set, z, lam)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        n = len(ups_set)
        slack = report.certificate.matrix - projector(z) / (n + 1)
        search = block_positivity_search(
            slack * (n + 1), ups_set.space, args.restarts, args.seed
        )
        outputs = {
            "lambda": lam,
            "delta": report.delta,
            "bound": report.bound,
            "claimed_trace": report.certificate.claimed_value,
            "member_slack_min_eigenvalue": report.psd_margin,
            "extra_state_search": _search_payload(search),
        }
        refuted = search.refuted or report.psd_margin < -1e-10
        outputs["outcome"] = "refuted" if refuted else "unrefuted"
        return outputs, EXIT_REFUTED if refuted else EXIT_OK

    raise InputError(f"unknown action {args.action!r}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepdisc",
        description="State discrimination values, dual certificates and "
        "unextendable-product-set criteria.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("discriminate", help="solve a discrimination program")
    p.add_argument("family", help="family name or ensemble file")
    p.add_argument("--class", dest="measurement_class", choices=("global", "ppt"), default="ppt")
    p.add_argument("--epsilon", type=float, help="resource entanglement parameter")
    p.add_argument("--prior", help="comma-separated prior probabilities")
    p.add_argument("--log-iterates", help="write the solver iterate log here")
    common(p)
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("certify", help="build and score a dual certificate")
    p.add_argument("name", choices=("bell3", "bell4", "ydy"))
    p.add_argument("--epsilon", type=float)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("ups", help="unextendable-product-set pipelines")
    p.add_argument("family", help="tiles, feng, or a product-set file")
    p.add_argument("--action", choices=("check", "enumerate", "separable", "bound"),
                   default="check")
    p.add_argument("--lambda", dest="lam",
                   help="certified overlap constant (a float, or 'analytic' for tiles)")
    p.add_argument("--z", help="file holding the extra orthogonal state for 'bound'")
    common(p)
    p.set_defaults(func=cmd_ups)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        outputs, code = args.func(args)
    except (InputError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.solution is not None:
            sys.stderr.write(format_iterate_log(exc.solution.log))
        return EXIT_SOLVER

    report = {
        "tool": {"name": "sepdisc", "version": __version__},
        "command": args.command,
        "inputs": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "command", "out") and v is not None
        },
        "outputs": outputs,
        "timing_seconds": time.perf_counter() - started,
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
