"""Verdicts and grid suprema shared by the checking modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

import numpy as np


class Status(str, Enum):
    """Outcome of a grid-based check.

    Grid evidence is never a proof: ``SATISFIED`` means no violation was
    found on the grids used, ``VIOLATED`` comes with a concrete witness.
    """

    SATISFIED = "satisfied-on-grid"
    VIOLATED = "violated-with-witness"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass
class Verdict:
    """Result of a membership or inequality check.

    Attributes
    ----------
    status : Status
    witness : dict or None
        Parameters reproducing a violation (present iff violated).
    diagnostics : list of dict
        Per-case table (per epsilon, per grid point, ...).
    detail : dict
        Free-form scalar details such as ``lhs`` and ``rhs``.
    """

    status: Status
    witness: dict | None = None
    diagnostics: list[dict] = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status is Status.VIOLATED

    def __str__(self) -> str:
        parts = [str(self.status)]
        if self.detail:
            parts.append(", ".join(f"{k}={_fmt(v)}" for k, v in self.detail.items()))
        if self.witness:
            parts.append("witness: " + ", ".join(f"{k}={_fmt(v)}" for k, v in self.witness.items()))
        return "; ".join(parts)


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def inequality_verdict(lhs: float, rhs: float, slack: float = 0.0, **extra) -> Verdict:
    """Satisfied iff ``lhs <= rhs + slack``; the witness repeats both sides."""
    detail = {"lhs": float(lhs), "rhs": float(rhs), **extra}
    if lhs <= rhs + slack:
        return Verdict(Status.SATISFIED, detail=detail)
    return Verdict(Status.VIOLATED, witness=dict(detail), detail=detail)


@dataclass
class SupResult:
    """Grid maximum of a sampled function, a lower bound of the true supremum.

    Attributes
    ----------
    value : float
    argmax : float
        Smallest grid point attaining ``value``.
    points, values : ndarray
        The full sampled curve, sorted by point.
    """

    value: float
    argmax: float
    points: np.ndarray
    values: np.ndarray

    @property
    def curve(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points, self.values


def grid_sup(evaluate: Callable[[np.ndarray], np.ndarray], points, *, refine: bool = True, levels: int = 3,
             factor: float = 10.0, span: int = 10, lo: float | None = None, hi: float | None = None) -> SupResult:
    """Maximize a batch-evaluated function over a grid, then refine near the argmax.

    Parameters
    ----------
    evaluate : callable
        Maps an array of points to an array of values.
    points : array_like
        Initial grid.
    refine : bool
        Apply ``levels`` refinement passes, each shrinking the spacing by
        ``factor`` and sampling ``2 * span + 1`` points around the argmax.
    lo, hi : float, optional
        Bounds for refinement points; default to the grid extent.

    Notes
    -----
    Ties are broken toward the smallest argmax so that results do not
    depend on evaluation order.
    """
    pts = np.unique(np.asarray(points, dtype=float))
    vals = np.asarray(evaluate(pts), dtype=float)
    if np.any(np.isnan(vals)):
        raise FloatingPointError("grid evaluation produced NaN")
    all_pts, all_vals = [pts], [vals]
    i = int(np.argmax(vals))
    best, arg = float(vals[i]), float(pts[i])
    lo = float(pts[0]) if lo is None else lo
    hi = float(pts[-1]) if hi is None else hi
    if refine and pts.size > 1:
        left = pts[i] - pts[i - 1] if i > 0 else np.inf
        right = pts[i + 1] - pts[i] if i + 1 < pts.size else np.inf
        h = float(min(left, right))
        seen = set(pts.tolist())
        for _ in range(levels):
            h /= factor
            cand = np.clip(arg + h * np.arange(-span, span + 1), lo, hi)
            cand = np.array(sorted({float(c) for c in cand} - seen))
            if cand.size == 0:
                continue
            seen.update(cand.tolist())
            cv = np.asarray(evaluate(cand), dtype=float)
            all_pts.append(cand)
            all_vals.append(cv)
            j = int(np.argmax(cv))
            if cv[j] > best or (cv[j] == best and cand[j] < arg):
                best, arg = float(cv[j]), float(cand[j])
    P = np.concatenate(all_pts)
    V = np.concatenate(all_vals)
    order = np.argsort(P, kind="stable")
    return SupResult(best, arg, P[order], V[order])
