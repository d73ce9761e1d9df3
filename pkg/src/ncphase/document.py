"""JSON state documents and deterministic report rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .covariance import CovarianceState
from .errors import InputError, NCPhaseError
from .phase_space_algebra import DEFAULT_TOL, DeformationParams, SkewPattern, build_form

REPORT_DIGITS = 12


@dataclass
class StateDocument:
    """Parsed state file.

    ``n`` counts configuration dimensions, so ``sigma`` is ``2n x 2n``.
    When ``g`` is omitted and ``eta == -theta`` the oscillator algebra is
    assumed (``g = sqrt(hbar^2 + theta^2)``, ``f = hbar``); otherwise ``g`` is
    required.
    """

    n: int
    hbar: float
    theta: float
    eta: float
    sigma: np.ndarray
    g: Optional[float] = None
    f: Optional[float] = None
    E: Optional[np.ndarray] = None
    Eprime: Optional[np.ndarray] = None
    means: Optional[np.ndarray] = None

    def params(self) -> DeformationParams:
        if self.g is None:
            if self.eta != -self.theta:
                raise InputError("params.g: required unless eta == -theta")
            p = DeformationParams.toy(self.hbar, self.theta)
            if self.f is not None:
                p = DeformationParams(p.hbar, p.theta, p.eta, p.g, f=self.f)
            return p
        return DeformationParams(self.hbar, self.theta, self.eta, self.g, f=self.f)

    def to_state(self, tol: float = DEFAULT_TOL) -> CovarianceState:
        try:
            E = None if self.E is None else SkewPattern(self.E)
            Ep = None if self.Eprime is None else SkewPattern(self.Eprime)
            form = build_form(self.params(), E, Ep, n=self.n, tol=tol)
            return CovarianceState(self.sigma, form, self.means)
        except InputError:
            raise
        except NCPhaseError as exc:
            raise InputError(f"{type(exc).__name__}: {exc}") from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "n": self.n,
            "params": {"hbar": self.hbar, "theta": self.theta, "eta": self.eta},
            "sigma": np.asarray(self.sigma, dtype=float).tolist(),
        }
        if self.g is not None:
            out["params"]["g"] = self.g
        if self.f is not None:
            out["params"]["f"] = self.f
        for key, val in (("E", self.E), ("Eprime", self.Eprime), ("means", self.means)):
            if val is not None:
                out[key] = np.asarray(val, dtype=float).tolist()
        return out


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise InputError(f"{where}: must be finite")
    return float(value)


def _matrix(value, shape, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != shape[0]:
        raise InputError(f"{where}: expected {shape[0]} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise InputError(f"{where}[{i}]: expected {shape[1]} entries")
        rows.append([_number(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows)


def parse_document(data: Any, tol: float = DEFAULT_TOL) -> StateDocument:
    """Validate decoded JSON and build a :class:`StateDocument`."""
    if not isinstance(data, dict):
        raise InputError("document: expected a JSON object")
    unknown = set(data) - {"n", "params", "sigma", "E", "Eprime", "means"}
    if unknown:
        raise InputError(f"document: unknown fields {sorted(unknown)}")
    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("n: expected a positive integer")
    params = data.get("params")
    if not isinstance(params, dict):
        raise InputError("params: expected an object")
    unknown = set(params) - {"hbar", "theta", "eta", "g", "f"}
    if unknown:
        raise InputError(f"params: unknown fields {sorted(unknown)}")
    if "hbar" not in params:
        raise InputError("params.hbar: required")
    hbar = _number(params["hbar"], "params.hbar")
    theta = _number(params.get("theta", 0.0), "params.theta")
    eta = _number(params.get("eta", 0.0), "params.eta")
    g = None if params.get("g") is None else _number(params["g"], "params.g")
    f = None if params.get("f") is None else _number(params["f"], "params.f")
    if "sigma" not in data:
        raise InputError("sigma: required")
    sigma = _matrix(data["sigma"], (2 * n, 2 * n), "sigma")
    if np.linalg.norm(sigma - sigma.T) > tol * max(1.0, np.linalg.norm(sigma, 2)):
        raise InputError("sigma: matrix is not symmetric")
    E = None if data.get("E") is None else _matrix(data["E"], (n, n), "E")
    Ep = None if data.get("Eprime") is None else _matrix(data["Eprime"], (n, n), "Eprime")
    means = None
    if data.get("means") is not None:
        m = data["means"]
        if not isinstance(m, list) or len(m) != 2 * n:
            raise InputError(f"means: expected {2 * n} numbers")
        means = np.array([_number(v, f"means[{i}]") for i, v in enumerate(m)])
    return StateDocument(n, hbar, theta, eta, sigma, g, f, E, Ep, means)


def read_document(path, tol: float = DEFAULT_TOL) -> StateDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_document(data, tol)


def write_document(doc: StateDocument, path) -> None:
    """Write with ``repr`` floats (17 significant digits), so reading back is lossless."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _round(value):
    if isinstance(value, dict):
        return {str(k): _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    if isinstance(value, np.ndarray):
        return _round(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        rounded = float(f"{value:.{REPORT_DIGITS}g}")
        return 0.0 if rounded == 0 else rounded
    return value


def render_json(report: dict) -> str:
    return json.dumps(_round(report), sort_keys=True, indent=2) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.{REPORT_DIGITS}g}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def render_text(report: dict) -> str:
    lines = []

    def walk(prefix, node):
        if isinstance(node, dict):
            for key in sorted(node):
                walk(f"{prefix}.{key}" if prefix else key, node[key])
        else:
            lines.append(f"{prefix}: {_fmt(node)}")

    walk("", _round(report))
    return "\n".join(lines) + "\n"
