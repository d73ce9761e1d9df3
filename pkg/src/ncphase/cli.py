"""``ncphase`` command line: certification, spectra, capacities, Darboux maps and oscillator grids.

Exit status: 0 when every verdict passes, 1 on a physicality violation,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .capacity import wigner_capacity
from .covariance import certify
from .darboux import build_map, toy_map
from .document import read_document, render_json, render_text
from .errors import (
    DegenerateDeformation,
    InputError,
    NCPhaseError,
    NoConformalScale,
    NotPositiveDefinite,
    QuadratureDiverged,
)
from .oscillator import (
    PLANES,
    FockState,
    QuadratureRule,
    energy,
    ground_sigma_standard,
    moments_quadrature,
    sigma_extended,
    wigner_grid,
    write_grid_csv,
)
from .phase_space_algebra import DEFAULT_TOL, DeformationParams
from .williamson import normal_form, omega_spectrum

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
MAX_QUANTUM_NUMBER = 16
MAX_GRID = 256
MAX_FULL_GRID = 32


def _default_tol() -> float:
    raw = os.environ.get("NCPHASE_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"NCPHASE_TOL: not a number: {raw!r}") from None
    if not tol > 0:
        raise InputError("NCPHASE_TOL: must be positive")
    return tol


def _capacity_dict(cap) -> dict:
    return {
        "c_lin": cap.c_lin,
        "c_lin_dual": cap.c_lin_dual,
        "lower_bound": cap.lower_bound,
        "upper_bound_dual": cap.upper_bound_dual,
        "lower_ok": cap.lower_ok,
        "upper_ok": cap.upper_ok,
        "conformal_scale": cap.conformal_scale,
    }


def _spectrum_dict(spec) -> dict:
    return {"nus": spec.nus, "form_scale": spec.form_scale}


def _load(args, tol):
    doc = read_document(args.file, tol)
    return doc.to_state(tol)


def cmd_check(args, tol) -> tuple:
    state = _load(args, tol)
    cert = certify(state, tol)
    report = {"certification": cert.as_dict(), "spectrum": None, "capacity": None}
    verdicts = {"psd": cert.psd_ok, "sigma_pd": cert.sigma_pd_ok, "det_nonnegative": cert.det_ok}
    if cert.sigma_pd_ok:
        report["spectrum"] = _spectrum_dict(omega_spectrum(state, tol))
        if state.form.conformal_scale is not None:
            cap = wigner_capacity(state, tol)
            report["capacity"] = _capacity_dict(cap)
            if cap.bounds_checked:
                verdicts["capacity_bounds"] = cap.bound_ok
        else:
            report["capacity_note"] = "form has no conformal scale; capacity not defined"
    report["verdicts"] = verdicts
    return report, EXIT_OK if all(verdicts.values()) else EXIT_VIOLATION


def cmd_williamson(args, tol) -> tuple:
    state = _load(args, tol)
    try:
        spec = omega_spectrum(state, tol)
    except NotPositiveDefinite as exc:
        return {"error": str(exc), "spectrum": None, "normal_form": None}, EXIT_VIOLATION
    report = {"spectrum": _spectrum_dict(spec), "normal_form": None}
    try:
        nf = normal_form(state, tol)
    except NoConformalScale as exc:
        report["normal_form_note"] = str(exc)
    else:
        report["normal_form"] = {
            "P": nf.P,
            "W": nf.W,
            "achieved_form": nf.achieved_form.value,
            "sigma_residual": nf.sigma_residual,
            "form_residual": nf.form_residual,
            "conformal_scale": nf.conformal_scale,
        }
    return report, EXIT_OK


def cmd_capacity(args, tol) -> tuple:
    state = _load(args, tol)
    try:
        cap = wigner_capacity(state, tol)
    except NoConformalScale as exc:
        raise InputError(str(exc)) from exc
    except NotPositiveDefinite as exc:
        return {"error": str(exc), "capacity": None}, EXIT_VIOLATION
    report = {"capacity": _capacity_dict(cap), "spectrum": _spectrum_dict(cap.spectrum)}
    ok = cap.bound_ok is not False
    return report, EXIT_OK if ok else EXIT_VIOLATION


def cmd_darboux(args, tol) -> tuple:
    try:
        if args.g is None and args.eta == -args.theta:
            dmap = toy_map(args.hbar, args.theta)
            family = "oscillator"
        else:
            params = DeformationParams(args.hbar, args.theta, args.eta, args.g)
            dmap = build_map(params, args.a, tol=tol)
            family = "block"
    except DegenerateDeformation as exc:
        raise InputError(f"degenerate deformation: {exc}") from exc
    except NCPhaseError as exc:
        raise InputError(str(exc)) from exc
    form = dmap.target_form
    report = {
        "family": family,
        "g": dmap.g,
        "f": form.f,
        "M": dmap.M,
        "det_M": dmap.det,
        "residual": dmap.residual,
        "relative_residual": dmap.residual / float(np.linalg.norm(form.Omega)),
        "classification": dmap.classification(tol).value,
        "special_orthogonal": dmap.special_orthogonal,
        "M_orthogonal": dmap.M_orthogonal,
        "rescale": dmap.rescale,
        "Omega": form.Omega,
        "conformal_scale": form.conformal_scale,
        "blocks": {"a": dmap.a, "b": dmap.b, "c": dmap.c, "d": dmap.d},
    }
    return report, EXIT_OK


def cmd_oscillator(args, tol) -> tuple:
    if not (0 <= args.n1 <= MAX_QUANTUM_NUMBER and 0 <= args.n2 <= MAX_QUANTUM_NUMBER):
        raise InputError(f"--n1/--n2 must lie in [0, {MAX_QUANTUM_NUMBER}]")
    if not 2 <= args.grid <= MAX_GRID:
        raise InputError(f"--grid must lie in [2, {MAX_GRID}]")
    if args.full and args.grid > MAX_FULL_GRID:
        raise InputError(f"--full needs --grid <= {MAX_FULL_GRID}")
    if not args.extent > 0:
        raise InputError("--extent must be positive")
    try:
        state = FockState(args.n1, args.n2, args.m_omega, args.hbar, args.theta)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    status = EXIT_OK
    report = {"state": {"n1": state.n1, "n2": state.n2, "m_omega": state.m_omega,
                        "hbar": state.hbar, "theta": state.theta}}
    level = energy(state)
    report["energy"] = level._asdict()
    try:
        mom = moments_quadrature(state, QuadratureRule(extent=args.extent))
        report["quadrature"] = {"norm": mom.norm, "means": mom.means, "sigma": mom.sigma}
    except QuadratureDiverged as exc:
        report["quadrature"] = {"error": str(exc)}
        status = EXIT_VIOLATION

    ground = FockState(0, 0, state.m_omega, state.hbar, state.theta)
    sj = ground_sigma_standard(ground)
    so = sigma_extended(ground)
    cap = wigner_capacity(so, tol)
    report["ground"] = {
        "sigma_standard": sj.sigma,
        "sigma_extended": so.sigma,
        "spectrum_standard": _spectrum_dict(omega_spectrum(sj, tol)),
        "spectrum_extended": _spectrum_dict(cap.spectrum),
        "capacity_standard": _capacity_dict(wigner_capacity(sj, tol)),
        "capacity_extended": _capacity_dict(cap),
        "min_hermitian_eigenvalue": certify(so, tol).min_hermitian_eigenvalue,
    }

    plane = None if args.full else args.slice
    base = None
    if args.base is not None:
        try:
            base = [float(v) for v in args.base.split(",")]
        except ValueError:
            raise InputError("--base: expected four comma-separated numbers") from None
        if len(base) != 4:
            raise InputError("--base: expected four comma-separated numbers")
    header, rows = wigner_grid(state, args.grid, args.extent, plane, base)
    report["grid"] = {
        "columns": header,
        "rows": int(rows.shape[0]),
        "min_w": float(rows[:, -1].min()),
        "max_w": float(rows[:, -1].max()),
        "csv": args.out,
    }
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                write_grid_csv(fh, header, rows)
        except OSError as exc:
            raise InputError(f"{args.out}: {exc.strerror}") from exc
    return report, status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncphase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None, help="relative tolerance (default: $NCPHASE_TOL or 1e-10)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    for name, helptext in (
        ("check", "certify a covariance document and report spectrum and capacity"),
        ("williamson", "symplectic spectrum and Williamson normal form"),
        ("capacity", "linear symplectic capacities of the Wigner ellipsoid and its dual"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        common(p)

    p = sub.add_parser("darboux", help="build a Darboux map for given deformation parameters")
    p.add_argument("--hbar", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--g", type=float, default=None,
                   help="reference scale; omitted with eta = -theta selects the oscillator map")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    common(p)

    p = sub.add_parser("oscillator", help="Fock-state Wigner grids, quadrature moments, ground-state capacities")
    p.add_argument("--n1", type=int, default=0)
    p.add_argument("--n2", type=int, default=0)
    p.add_argument("--m-omega", dest="m_omega", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=64, help="export grid points per axis")
    p.add_argument("--extent", type=float, default=6.0, help="half-width in oscillator lengths, for export and quadrature")
    p.add_argument("--slice", choices=PLANES, default="q1p1")
    p.add_argument("--base", default=None, help="base point q1,q2,p1,p2 for slices")
    p.add_argument("--full", action="store_true", help="export the full 4D grid (grid <= 32)")
    p.add_argument("--out", default=None, help="CSV output path")
    common(p)
    return parser


COMMANDS = {
    "check": cmd_check,
    "williamson": cmd_williamson,
    "capacity": cmd_capacity,
    "darboux": cmd_darboux,
    "oscillator": cmd_oscillator,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        if not tol > 0:
            raise InputError("--tol must be positive")
        report, status = COMMANDS[args.command](args, tol)
    except InputError as exc:
        print(f"ncphase {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": args.command, "tol": tol, "exit_status": status, **report}
    text = render_json(report) if args.format == "json" else render_text(report)
    out = getattr(args, "out", None) if args.command == "darboux" else None
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status
