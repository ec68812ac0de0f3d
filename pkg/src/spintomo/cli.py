"""Command-line front end.

Exit codes: 0 success, 2 input contract violation, 3 numerical or rank failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from . import cv_tomography as cv
from . import group_param as gp
from .errors import (
    CoverageError,
    NumericalError,
    QuadratureOrderError,
    RankDeficientError,
    SpinTomoError,
)
from .quadrature import product_rule_s2, product_rule_s3
from .spin_state import (
    density_from_stokes,
    hs_distance,
    purity_direct,
    spin_of,
    validate_density,
)
from .spin_tomography import (
    SpinTomogram,
    TomogramSample,
    hs_lower_bound,
    purity_from_tomogram,
    quaternion_evaluator,
    reconstruct_density_euler,
    reconstruct_density_quaternion,
    reconstruct_linear_inversion,
    tomogram_euler,
)
from .wigner import projections, twice

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

INPUT_UNIT_TOL = 1e-9
DIRECTION_MATCH_TOL = 1e-8


class InputError(SpinTomoError, ValueError):
    pass


def number(x) -> float:
    """Parse a JSON number or a decimal/rational string such as ``"0.2"`` or ``"1/2"``."""
    if isinstance(x, bool):
        raise InputError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse number {x!r}") from exc
    raise InputError(f"expected a number, got {x!r}")


def half_integer(x) -> float:
    return twice(x if isinstance(x, (str, int)) else number(x)) / 2


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_state(path) -> np.ndarray:
    doc = _load_json(path)
    if not isinstance(doc, dict) or "j" not in doc:
        raise InputError("state file must be an object with a 'j' field")
    j = half_integer(doc["j"])
    if "stokes" in doc:
        if j != 0.5:
            raise InputError("Stokes form requires j = 1/2")
        return density_from_stokes([number(v) for v in doc["stokes"]])
    if "matrix_re" in doc:
        re = np.array([[number(v) for v in row] for row in doc["matrix_re"]])
        im = np.array([[number(v) for v in row] for row in doc.get("matrix_im", np.zeros_like(re))])
        rho = re + 1j * im
        if rho.shape != (twice(j) + 1,) * 2:
            raise InputError(f"matrix shape {rho.shape} does not match j = {j}")
        return validate_density(rho)
    raise InputError("state file needs 'stokes' or 'matrix_re'")


def load_samples(path, j) -> SpinTomogram:
    doc = _load_json(path)
    if isinstance(doc, dict):
        doc = doc.get("samples", [])
    if not isinstance(doc, list):
        raise InputError("samples file must hold a list of samples")
    samples = []
    for rec in doc:
        try:
            q = gp.as_unit_quaternion([number(v) for v in rec["quaternion"]], tol=INPUT_UNIT_TOL)
            samples.append(TomogramSample(half_integer(rec["m"]), q / np.linalg.norm(q), number(rec["value"])))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed sample record {rec!r}") from exc
    for s in samples:
        if abs(twice(s.m)) > twice(j) or (twice(j) - twice(s.m)) % 2:
            raise InputError(f"sample outcome m = {s.m} invalid for j = {j}")
    return SpinTomogram(j, samples)


def load_gaussian(path) -> cv.GaussianState:
    if path is None:
        return cv.GaussianState.vacuum()
    doc = _load_json(path)
    fields = ("mean_q", "mean_p", "cov_qq", "cov_qp", "cov_pp")
    defaults = cv.GaussianState()
    return cv.GaussianState(**{f: number(doc.get(f, getattr(defaults, f))) for f in fields})


class SampleLookup:
    """Tomogram evaluator backed by sample data, matched by measurement axis."""

    def __init__(self, tomogram: SpinTomogram):
        self.j = tomogram.j
        self._tables = {}
        for m in projections(self.j):
            rows = [s for s in tomogram.samples if twice(s.m) == twice(m)]
            if rows:
                dirs = gp.direction_from_quaternion(np.array([s.param for s in rows]))
                self._tables[twice(m)] = (cKDTree(dirs), np.array([s.value for s in rows]))

    def _lookup(self, m, directions):
        try:
            tree, values = self._tables[twice(m)]
        except KeyError:
            raise CoverageError(f"no samples for outcome m = {m}") from None
        dist, idx = tree.query(directions)
        if np.any(dist > DIRECTION_MATCH_TOL):
            raise CoverageError(
                f"{int(np.sum(dist > DIRECTION_MATCH_TOL))} quadrature nodes have no matching sample (m = {m})"
            )
        return values[idx]

    def euler(self, m, phi, theta):
        return self._lookup(m, gp.direction_from_euler(phi, theta))

    def quaternion(self, m, a):
        return self._lookup(m, gp.direction_from_quaternion(a))


def _matrix_json(rho) -> dict:
    return {"matrix_re": np.real(rho).tolist(), "matrix_im": np.imag(rho).tolist()}


def _emit_json(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _default_order(j, given):
    return int(given) if given is not None else twice(j) * 2 + 2  # 4j + 2


# --- commands ---------------------------------------------------------------


def cmd_convert(args) -> int:
    if args.quaternion is not None:
        q = gp.as_unit_quaternion(args.quaternion, tol=INPUT_UNIT_TOL)
        q = gp.canonical_quaternion(q / np.linalg.norm(q))
    elif args.euler is not None:
        q = gp.quaternion_from_euler(tuple(args.euler), canonical=True)
    elif args.cayley_klein is not None:
        a1, a2, b1, b2 = args.cayley_klein
        q = gp.as_unit_quaternion([a1, b2, b1, a2], tol=INPUT_UNIT_TOL)
        q = gp.canonical_quaternion(q / np.linalg.norm(q))
    else:
        v = args.su2
        u = np.array([[v[0] + 1j * v[1], v[2] + 1j * v[3]], [v[4] + 1j * v[5], v[6] + 1j * v[7]]])
        gp.check_su2(u, tol=INPUT_UNIT_TOL)
        q = gp.canonical_quaternion(gp.quaternion_from_su2_raw(u))
        q = q / np.linalg.norm(q)
    e = gp.quaternion_to_euler(q)
    ck = gp.cayley_klein_from_quaternion(q)
    u = gp.su2_from_quaternion(q)
    _emit_json(
        {
            "quaternion": q.tolist(),
            "euler": {"phi": e.phi, "theta": e.theta, "psi": e.psi, "degenerate": e.degenerate},
            "cayley_klein": {
                "alpha": [float(ck.alpha.real), float(ck.alpha.imag)],
                "beta": [float(ck.beta.real), float(ck.beta.imag)],
            },
            "su2": {"re": u.real.tolist(), "im": u.imag.tolist()},
            "rotation": gp.rotation_from_quaternion(q).tolist(),
            "direction": gp.direction_from_quaternion(q).tolist(),
        }
    )
    return EXIT_OK


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        theta_steps, phi_steps = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise InputError(f"grid must be 'THETA_STEPS,PHI_STEPS', got {text!r}") from exc
    if theta_steps < 2 or phi_steps < 2:
        raise InputError("grid needs at least 2 steps in each angle")
    return theta_steps, phi_steps


def cmd_tomogram_grid(args) -> int:
    rho = load_state(args.state)
    j = spin_of(rho)
    theta_steps, phi_steps = _parse_grid(args.grid)
    outcomes = list(projections(j)) if args.m == "all" else [half_integer(args.m)]
    theta = np.linspace(0.0, np.pi, theta_steps)
    phi = np.linspace(0.0, 2 * np.pi, phi_steps)
    pp, tt = np.meshgrid(phi, theta, indexing="ij")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    long_form = len(outcomes) > 1
    writer.writerow(["m", "phi", "theta", "value"] if long_form else ["phi", "theta", "value"])
    for m in outcomes:
        values = tomogram_euler(rho, m, pp.ravel(), tt.ravel())
        label = str(Fraction(m).limit_denominator(2))
        for p, t, v in zip(pp.ravel(), tt.ravel(), values):
            row = [fmt(p), fmt(t), fmt(v)]
            writer.writerow([label] + row if long_form else row)
    return EXIT_OK


def cmd_samples(args) -> int:
    rho = load_state(args.state)
    j = spin_of(rho)
    if args.haar is not None:
        if args.seed is None:
            raise InputError("--seed is required with --haar")
        params = gp.haar_sample(np.random.default_rng(args.seed), args.haar)
    else:
        rule = product_rule_s2(_default_order(j, args.rule_order))
        params = gp.quaternion_from_euler((rule.nodes[:, 0], rule.nodes[:, 1], 0.0))
    params = gp.canonical_quaternion(params)
    evaluate = quaternion_evaluator(rho)
    records = []
    for m in projections(j):
        values = evaluate(m, params)
        label = str(Fraction(m).limit_denominator(2))
        records += [{"m": label, "quaternion": p.tolist(), "value": float(v)} for p, v in zip(params, values)]
    _emit_json(records)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    j = half_integer(args.j)
    tomo = load_samples(args.samples, j)
    if args.method == "linear-inversion":
        rho = reconstruct_linear_inversion(tomo)
    else:
        lookup = SampleLookup(tomo)
        order = _default_order(j, args.rule_order)
        if args.method == "kernel-euler":
            rho = reconstruct_density_euler(lookup.euler, j, product_rule_s2(order))
        else:
            rho = reconstruct_density_quaternion(lookup.quaternion, j, product_rule_s3(order))
    out = {"j": str(Fraction(j).limit_denominator(2)), "method": args.method}
    out.update(_matrix_json(rho))
    out["min_eigenvalue"] = float(np.linalg.eigvalsh(rho).min())
    out["trace"] = float(np.trace(rho).real)
    if args.reference:
        out["hs_distance"] = hs_distance(rho, load_state(args.reference))
    _emit_json(out)
    return EXIT_OK


def cmd_purity(args) -> int:
    report = {}
    if args.state:
        rho = load_state(args.state)
        j = spin_of(rho)
        evaluator = quaternion_evaluator(rho)
        report["purity_direct"] = purity_direct(rho)
    elif args.samples:
        if args.j is None:
            raise InputError("--j is required with --samples")
        j = half_integer(args.j)
        evaluator = SampleLookup(load_samples(args.samples, j)).quaternion
    else:
        raise InputError("give --state or --samples")
    rule = product_rule_s3(_default_order(j, args.rule_order))
    report["purity_tomogram"] = purity_from_tomogram(evaluator, j, rule)
    if "purity_direct" in report:
        report["abs_difference"] = abs(report["purity_direct"] - report["purity_tomogram"])
    _emit_json(report)
    return EXIT_OK


def cmd_distance(args) -> int:
    rho1 = load_state(args.state)
    rho2 = load_state(args.other)
    if rho1.shape != rho2.shape:
        raise InputError("states have different spin")
    if args.seed is None:
        raise InputError("--seed is required (the axis grid is Haar-random)")
    j = spin_of(rho1)
    m = half_integer(args.m) if args.m is not None else j
    grid = gp.haar_sample(np.random.default_rng(args.seed), args.grid_size)
    bound = hs_lower_bound(quaternion_evaluator(rho1), quaternion_evaluator(rho2), j, m, grid)
    _emit_json(
        {"m": str(Fraction(m).limit_denominator(2)), "seed": args.seed, "grid_size": args.grid_size,
         "hs_lower_bound": bound, "hs_distance": hs_distance(rho1, rho2)}
    )
    return EXIT_OK


def cmd_cv(args) -> int:
    state = load_gaussian(args.gaussian)
    if args.mode == "sample":
        if args.seed is None:
            raise InputError("--seed is required for sampling")
        draws = cv.homodyne_sample(state, args.theta, args.count, np.random.default_rng(args.seed))
        _emit_json({"seed": args.seed, "theta": args.theta, "count": args.count, "samples": draws.tolist()})
        return EXIT_OK
    q = np.linspace(args.q_min, args.q_max, args.q_steps)
    if args.mode == "symplectic":
        if args.mu == 0 and args.eta == 0:
            raise InputError("(mu, eta) = (0, 0) does not define a quadrature")
        values = cv.symplectic_tomogram_gaussian(state, q, args.mu, args.eta)
    else:
        values = cv.optical_tomogram_gaussian(state, q, args.theta)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["Q", "value"])
    for x, v in zip(q, values):
        writer.writerow([fmt(x), fmt(v)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spintomo", description="Quaternion spin tomography toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a group element between parameterizations")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--quaternion", nargs=4, type=number, metavar=("A0", "A1", "A2", "A3"))
    g.add_argument("--euler", nargs=3, type=number, metavar=("PHI", "THETA", "PSI"))
    g.add_argument("--cayley-klein", nargs=4, type=number, metavar=("ALPHA1", "ALPHA2", "BETA1", "BETA2"))
    g.add_argument("--su2", nargs=8, type=number, metavar="X",
                   help="U00 U01 U10 U11 as (re, im) pairs, row-major")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("tomogram-grid", help="tomogram values on a (phi, theta) grid as CSV")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", default="51,101", help="THETA_STEPS,PHI_STEPS")
    p.add_argument("--m", default=None, help="outcome (default +j) or 'all'")
    p.set_defaults(func=cmd_tomogram_grid)

    p = sub.add_parser("samples", help="exact tomogram samples of a state as JSON")
    p.add_argument("--state", required=True)
    p.add_argument("--rule-order", type=int, help="product-rule L (default 4j+2)")
    p.add_argument("--haar", type=int, help="use N Haar-random axes instead of rule nodes")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_samples)

    p = sub.add_parser("reconstruct", help="reconstruct a density matrix from samples")
    p.add_argument("--samples", required=True)
    p.add_argument("--j", required=True)
    p.add_argument("--method", choices=["kernel-euler", "kernel-quaternion", "linear-inversion"],
                   default="kernel-euler")
    p.add_argument("--rule-order", type=int, help="product-rule L (default 4j+2)")
    p.add_argument("--reference", help="state file to compare against")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("purity", help="purity directly and from the tomogram")
    p.add_argument("--state")
    p.add_argument("--samples")
    p.add_argument("--j")
    p.add_argument("--rule-order", type=int)
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("distance", help="Hilbert-Schmidt distance and its tomographic lower bound")
    p.add_argument("--state", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--m")
    p.add_argument("--grid-size", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("cv", help="Gaussian-state symplectic/optical tomograms and homodyne samples")
    p.add_argument("--mode", choices=["symplectic", "optical", "sample"], required=True)
    p.add_argument("--gaussian", help="Gaussian state JSON (default: vacuum)")
    p.add_argument("--mu", type=number, default=1.0)
    p.add_argument("--eta", type=number, default=0.0)
    p.add_argument("--theta", type=number, default=0.0)
    p.add_argument("--q-min", type=number, default=-4.0)
    p.add_argument("--q-max", type=number, default=4.0)
    p.add_argument("--q-steps", type=int, default=81)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_cv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "tomogram-grid" and args.m is None:
            args.m = str(Fraction(spin_of(load_state(args.state))).limit_denominator(2))
        return args.func(args)
    except (RankDeficientError, QuadratureOrderError, NumericalError, CoverageError) as exc:
        print(f"spintomo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpinTomoError, ValueError) as exc:
        print(f"spintomo: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
