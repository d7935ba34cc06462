"""Zero location for vectorised analytic functions.

Zeros are counted with the argument principle (phase unwrapping along the
boundary of a rectangle), isolated by recursive bisection and polished by
Newton's method.  An *evaluator* is any callable mapping a complex numpy
array to a complex numpy array of the same shape, e.g. a
:class:`~dhzeros.dh.DHSpec` or ``spec.evaluator(params)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import MirrorNotFound, NonConvergent, NotFound, PhaseUnresolvable, ZeroOnBoundary

log = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

ZERO_TOL = 1e-9
MERGE_RADIUS = 1e-7
MIRROR_IM_TOL = 1e-6
BOUNDARY_TOL = 1e-10
NUDGE = 1e-3


@dataclass(frozen=True)
class SearchRect:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float
    boundary_samples: int = 400

    def __post_init__(self):
        if not (self.sigma_min < self.sigma_max and self.t_min < self.t_max):
            raise ValueError(f"degenerate rectangle {self}")
        if self.boundary_samples < 1:
            raise ValueError("boundary_samples must be positive")

    @classmethod
    def parse(cls, text: str, boundary_samples: int = 400) -> "SearchRect":
        """From ``"s0:s1:t0:t1"``."""
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 4:
            raise ValueError(f"expected sigma0:sigma1:t0:t1, got {text!r}")
        return cls(*parts, boundary_samples=boundary_samples)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.t_min + self.t_max))

    @property
    def width(self) -> float:
        return self.sigma_max - self.sigma_min

    @property
    def height(self) -> float:
        return self.t_max - self.t_min

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.sigma_min - margin <= z.real <= self.sigma_max + margin
                and self.t_min - margin <= z.imag <= self.t_max + margin)

    def grown(self, d: float) -> "SearchRect":
        return replace(self, sigma_min=self.sigma_min - d, sigma_max=self.sigma_max + d,
                       t_min=self.t_min - d, t_max=self.t_max + d)

    def split(self, frac: float = 0.5) -> tuple["SearchRect", "SearchRect"]:
        """Halve across the longer side; ``frac`` positions the cut."""
        n = max(16, self.boundary_samples // 2)
        if self.width >= self.height:
            cut = self.sigma_min + frac * self.width
            return (SearchRect(self.sigma_min, cut, self.t_min, self.t_max, n),
                    SearchRect(cut, self.sigma_max, self.t_min, self.t_max, n))
        cut = self.t_min + frac * self.height
        return (SearchRect(self.sigma_min, self.sigma_max, self.t_min, cut, n),
                SearchRect(self.sigma_min, self.sigma_max, cut, self.t_max, n))

    def contour(self) -> np.ndarray:
        """Positively oriented closed boundary polygon (first point repeated at the end)."""
        n = self.boundary_samples
        u = np.linspace(0.0, 1.0, n, endpoint=False)
        a, b, c, d = self.sigma_min, self.sigma_max, self.t_min, self.t_max
        edges = [
            a + u * (b - a) + 1j * c,
            b + 1j * (c + u * (d - c)),
            b + u * (a - b) + 1j * d,
            a + 1j * (d + u * (c - d)),
        ]
        pts = np.concatenate(edges)
        return np.append(pts, pts[0])

    def as_list(self) -> list[float]:
        return [self.sigma_min, self.sigma_max, self.t_min, self.t_max]


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    final_residual: float
    newton_iters: int
    mirror: Optional[complex] = None
    on_critical_line: bool = False

    def to_dict(self) -> dict:
        out = {
            "sigma": self.location.real,
            "t": self.location.imag,
            "residual": self.final_residual,
            "newton_iters": self.newton_iters,
            "on_critical_line": self.on_critical_line,
        }
        if self.mirror is not None:
            out["mirror"] = [self.mirror.real, self.mirror.imag]
        return out


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def winding_number(f: Evaluator, rect: SearchRect, max_rounds: int = 40,
                   boundary_tol: float = BOUNDARY_TOL) -> int:
    """Number of zeros of ``f`` inside ``rect``, counted with multiplicity.

    Phase increments between consecutive boundary samples are kept below
    ``pi/2`` by inserting midpoints wherever a larger jump is seen.
    """
    pts = rect.contour()
    vals = np.asarray(f(pts), dtype=complex)
    for _ in range(max_rounds):
        if np.min(np.abs(vals)) < boundary_tol:
            raise ZeroOnBoundary(f"|f| < {boundary_tol:g} on the boundary of {rect.as_list()}",
                                 suggestion=rect.grown(NUDGE))
        with np.errstate(invalid="ignore", divide="ignore"):
            steps = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(steps) > np.pi / 2)[0]
        if bad.size == 0:
            turns = steps.sum() / (2 * np.pi)
            n = int(round(turns))
            if abs(turns - n) > 1e-6:
                raise PhaseUnresolvable(f"non-integer winding {turns:.6f} on {rect.as_list()}")
            return n
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        mvals = np.asarray(f(mids), dtype=complex)
        pts = np.insert(pts, bad + 1, mids)
        vals = np.insert(vals, bad + 1, mvals)
    raise PhaseUnresolvable(f"phase still jumping after {max_rounds} refinements on {rect.as_list()}")


def _scalar(f: Evaluator, s: complex) -> complex:
    return complex(np.asarray(f(np.array([s])))[0])


def refine_newton(f: Evaluator, s0: complex, zero_tol: float = ZERO_TOL, max_iter: int = 60,
                  max_travel: float = 2.0, line_tol: float = 1e-6) -> ZeroRecord:
    """Newton iteration with a central-difference derivative.

    Raises :class:`NonConvergent` when the iterate wanders further than
    ``max_travel`` from ``s0`` or the residual never drops below ``zero_tol``.
    """
    s = complex(s0)
    fs = _scalar(f, s)
    best = (abs(fs), s)
    it = 0
    for it in range(1, max_iter + 1):
        h = 1e-6 * max(1.0, abs(s))
        pair = np.asarray(f(np.array([s + h, s - h])))
        df = (pair[0] - pair[1]) / (2 * h)
        if df == 0 or not np.isfinite(df):
            break
        step = fs / df
        s = s - step
        if abs(s - s0) > max_travel or not np.isfinite(s):
            raise NonConvergent(f"Newton from {s0} left the basin (at {s})")
        fs = _scalar(f, s)
        if abs(fs) < best[0]:
            best = (abs(fs), s)
        if abs(step) < 1e-11 or fs == 0:
            break
        # below tolerance and no longer improving: noise floor
        if abs(fs) < zero_tol and abs(step) < 1e-9:
            break
    res, s = best
    if not res < zero_tol:
        raise NonConvergent(f"Newton from {s0} stalled at {s} with |f| = {res:.3g}")
    s = complex(s)
    return ZeroRecord(s, float(res), it, None, bool(abs(s.real - 0.5) <= line_tol))


def find_zeros(f: Evaluator, rect: SearchRect, zero_tol: float = ZERO_TOL,
               min_size: float = 1e-6, line_tol: float = 1e-6) -> list[ZeroRecord]:
    """All zeros inside ``rect``, deduplicated and sorted by ``(t, sigma)``.

    The rectangle is bisected until each cell holds at most one zero, which
    is then polished from the cell centre.  Cells that cannot be resolved are
    reported through :class:`NonConvergent` (with ``found`` and ``cells``
    attributes) rather than dropped.
    """
    try:
        total = winding_number(f, rect)
    except ZeroOnBoundary as exc:
        log.info("zero on boundary of %s; nudging outward by %g", rect.as_list(), NUDGE)
        rect = exc.suggestion
        total = winding_number(f, rect)

    found: list[ZeroRecord] = []
    unresolved: list[SearchRect] = []
    stack = [(rect, total)]
    while stack:
        cell, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            try:
                rec = refine_newton(f, cell.center, zero_tol, max_travel=2 * (cell.width + cell.height),
                                    line_tol=line_tol)
                if cell.contains(rec.location, margin=1e-9):
                    found.append(rec)
                    continue
            except NonConvergent:
                pass
        if max(cell.width, cell.height) < min_size:
            unresolved.append(cell)
            continue
        for frac in (0.5, 0.5 + 1e-3 * math.pi, 0.5 - 1e-3 * math.e):
            halves = cell.split(frac)
            try:
                counts = [winding_number(f, h) for h in halves]
            except ZeroOnBoundary:
                continue
            if sum(counts) != n:
                log.warning("winding counts %s do not add up to %d on %s", counts, n, cell.as_list())
            stack.extend(zip(halves, counts))
            break
        else:
            unresolved.append(cell)

    found.sort(key=lambda r: (r.location.imag, r.location.real))
    merged: list[ZeroRecord] = []
    for rec in found:
        if merged and abs(rec.location - merged[-1].location) < MERGE_RADIUS:
            continue
        merged.append(rec)
    merged.sort(key=lambda r: (r.location.imag, r.location.real))
    if unresolved:
        exc = NonConvergent(f"{len(unresolved)} cell(s) could not be resolved")
        exc.found, exc.cells = merged, unresolved
        raise exc
    return merged


def mirror_check(f: Evaluator, z: ZeroRecord, zero_tol: float = ZERO_TOL,
                 im_tol: float = MIRROR_IM_TOL) -> ZeroRecord:
    """Refine from the reflected seed ``1 - sigma + i t`` and attach the mirror zero."""
    s = z.location
    try:
        m = refine_newton(f, complex(1 - s.real, s.imag), zero_tol, max_travel=0.1)
    except NonConvergent as exc:
        raise MirrorNotFound(f"no zero near {1 - s.real:.9f}+{s.imag:.9f}i: {exc}") from exc
    if abs(m.location.imag - s.imag) >= im_tol or abs(m.location.real - (1 - s.real)) >= im_tol:
        raise MirrorNotFound(f"mirror of {s} converged to {m.location}")
    return replace(z, mirror=complex(m.location))


def derivative(f: Evaluator, h: float = 1e-3) -> Evaluator:
    """Four-point central difference ``f'`` (error O(h^4) for analytic ``f``)."""

    def df(s):
        s = np.asarray(s, dtype=complex)
        flat = s.ravel()
        pts = np.concatenate([flat + h, flat - h, flat + 1j * h, flat - 1j * h])
        v = np.asarray(f(pts)).reshape(4, flat.size)
        d = ((v[0] - v[1]) - 1j * (v[2] - v[3])) / (4 * h)
        return d[0] if s.ndim == 0 else d.reshape(s.shape)

    return df


def derivative_zero_between(f: Evaluator, pair: tuple[complex, complex], half_height: float = 0.05,
                            zero_tol: float = ZERO_TOL) -> complex:
    """Zero of ``f'`` on (or just off) the horizontal segment joining a mirror pair."""
    a, b = complex(pair[0]), complex(pair[1])
    if abs(a.real - b.real) < 1e-12:
        raise ValueError("pair has equal real parts; the segment is empty")
    t = 0.5 * (a.imag + b.imag)
    lo, hi = sorted((a.real, b.real))
    rect = SearchRect(lo, hi, t - half_height, t + half_height, 200)
    df = derivative(f)
    try:
        zs = find_zeros(df, rect, zero_tol)
    except NonConvergent as exc:
        zs = exc.found
    inside = [z.location for z in zs if lo < z.location.real < hi and abs(z.location.imag - t) < half_height]
    if not inside:
        raise NotFound(f"no zero of f' between {a} and {b}")
    return complex(min(inside, key=lambda z: abs(z.real - 0.5 * (lo + hi))))
