"""Pre-images of rays ``{w : arg w = phi}`` under an analytic function.

Along a component of ``f^{-1}(ray)`` the phase of ``f`` is constant, so with
``g = log f`` the curve is a level line of ``Im g`` and ``|f|`` is a monotone
parameter on it.  The tracer is a predictor-corrector continuation:

* predictor: a step along ``conj(g') / |g'|`` (``|f|`` increasing) or its
  negative (``|f|`` decreasing, towards a zero of ``f``);
* corrector: Newton on the scalar constraint ``arg f = phi`` along the
  normal ``i conj(g') / |g'|``, where the phase moves at rate ``|g'|``.

Curves end on the bounding rectangle, at a zero of ``f`` (the last point is
the zero itself, located by Newton once ``|f|`` is small), at a branch point
(``|f'|`` tiny, flagged), or after ``max_steps``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NonConvergent, SeedOffCurve
from .zeros import Evaluator, SearchRect, _scalar, _wrap, refine_newton

RAY_TOL = 1e-8
BRANCH_TOL = 1e-6
STEP_FLOOR = 1e-6
# below this |f| the phase is too noisy to follow; jump to the zero instead
PHASE_FLOOR = 1e-5


@dataclass
class RayCurve:
    phi: float
    points: np.ndarray  # ordered by increasing |f|
    moduli: np.ndarray
    max_ray_residual: float
    ends: tuple[str, str] = ("", "")  # termination at the low-|f| and high-|f| end
    branch_points: list[int] = field(default_factory=list)
    label: str = ""

    @property
    def stalled(self) -> bool:
        return "branch_point" in self.ends

    @property
    def ends_at_zero(self) -> bool:
        return self.ends[0] == "zero"

    def ray_residuals(self, f: Evaluator) -> np.ndarray:
        """Recomputed ``|arg f - phi|`` per point (NaN at an exact zero end)."""
        vals = np.asarray(f(self.points))
        res = np.abs(_wrap(np.angle(vals) - self.phi))
        if self.ends_at_zero:
            res[0] = np.nan
        return res

    def to_rows(self, f: Optional[Evaluator] = None):
        res = self.ray_residuals(f) if f is not None else np.full(len(self.points), np.nan)
        for z, m, r in zip(self.points, self.moduli, res):
            yield z.real, z.imag, m, r


class _Tracer:
    def __init__(self, f: Evaluator, phi: float, bounds: SearchRect, step: float,
                 ray_tol: float, max_steps: int):
        self.f = f
        self.h = 1e-4
        self.phi = phi
        self.bounds = bounds
        self.step = step
        self.ray_tol = ray_tol
        self.max_steps = max_steps

    def local(self, s: complex):
        """``f(s)`` and the four-point central difference ``f'(s)`` in one call."""
        h = self.h
        v = np.asarray(self.f(np.array([s, s + h, s - h, s + 1j * h, s - 1j * h])))
        d = ((v[1] - v[2]) - 1j * (v[3] - v[4])) / (4 * h)
        return complex(v[0]), complex(d)

    def correct(self, s: complex, max_iter: int = 12) -> Optional[tuple[complex, complex, complex]]:
        for _ in range(max_iter):
            v, d = self.local(s)
            if v == 0:
                return None
            r = float(_wrap(math.atan2(v.imag, v.real) - self.phi))
            if abs(r) < 0.01 * self.ray_tol:
                return s, v, d
            gp = d / v
            agp = abs(gp)
            if agp == 0:
                return None
            delta = -r / agp
            s = s + delta * 1j * gp.conjugate() / agp
        v, d = self.local(s)
        r = float(_wrap(math.atan2(v.imag, v.real) - self.phi))
        return (s, v, d) if abs(r) < self.ray_tol else None

    def run(self, s: complex, v: complex, d: complex, direction: int):
        """March from an on-curve point; returns (points, moduli, end_kind)."""
        pts, mods = [], []
        h = self.step
        for _ in range(self.max_steps):
            if abs(d) < BRANCH_TOL:
                return pts, mods, "branch_point"
            if direction < 0 and abs(v) < PHASE_FLOOR:
                try:
                    z = refine_newton(self.f, s, zero_tol=1e-10, max_travel=10 * abs(v) / abs(d) + 1e-6)
                except NonConvergent:
                    return pts, mods, "stall"
                pts.append(z.location)
                mods.append(z.final_residual)
                return pts, mods, "zero"
            gp = d / v
            tangent = gp.conjugate() / abs(gp)
            if direction < 0:
                # never overshoot the zero: stay within half the Newton distance
                h = min(h, 0.5 * abs(v) / abs(d))
            while True:
                trial = s + direction * h * tangent
                got = self.correct(trial)
                if got is not None:
                    s2, v2, d2 = got
                    moved = abs(s2 - s)
                    monotone = (abs(v2) > abs(v)) if direction > 0 else (abs(v2) < abs(v))
                    if monotone and moved < 2 * h:
                        break
                h *= 0.5
                if h < STEP_FLOOR:
                    kind = "branch_point" if abs(d) < 1e3 * BRANCH_TOL else "stall"
                    return pts, mods, kind
            if not self.bounds.contains(s2):
                return pts, mods, "bounds"
            s, v, d = s2, v2, d2
            pts.append(s)
            mods.append(abs(v))
            h = min(self.step, 1.5 * h)
        return pts, mods, "max_steps"


def trace_preimage(f: Evaluator, seed: complex, phi: float, bounds: SearchRect, step: float = 1e-2,
                   ray_tol: float = RAY_TOL, max_steps: int = 5000, label: str = "") -> RayCurve:
    """Trace the component of ``f^{-1}({arg w = phi})`` through ``seed``, both ways."""
    seed = complex(seed)
    v0 = _scalar(f, seed)
    if v0 == 0 or abs(float(_wrap(np.angle(v0) - phi))) >= 0.1:
        raise SeedOffCurve(f"arg f({seed}) = {np.angle(v0):.4f} is not within 0.1 of phi = {phi:.4f}")
    tr = _Tracer(f, phi, bounds, step, ray_tol, max_steps)
    v, d = tr.local(seed)
    if abs(d) < BRANCH_TOL:
        r = abs(float(_wrap(np.angle(v) - phi)))
        return RayCurve(phi, np.array([seed]), np.array([abs(v)]), r, ("branch_point", "branch_point"), [0],
                        label)
    got = tr.correct(seed)
    if got is None:
        raise SeedOffCurve(f"corrector failed to reach the curve from {seed}")
    s, v, d = got
    down_pts, down_mods, down_end = tr.run(s, v, d, -1)
    up_pts, up_mods, up_end = tr.run(s, v, d, +1)
    pts = np.array(down_pts[::-1] + [s] + up_pts, dtype=complex)
    mods = np.array(down_mods[::-1] + [abs(v)] + up_mods)
    branch = []
    if down_end == "branch_point":
        branch.append(0)
    if up_end == "branch_point":
        branch.append(len(pts) - 1)
    vals = np.asarray(f(pts))
    res = np.abs(_wrap(np.angle(vals) - phi))
    if down_end == "zero":
        res = res[1:]
    return RayCurve(phi, pts, mods, float(res.max(initial=0.0)), (down_end, up_end), branch, label)


def _phase_roots_on_circle(f: Evaluator, center: complex, radius: float, phi: float, n: int) -> list[complex]:
    """Points on the circle where ``arg f = phi`` (bisection on the wrapped phase)."""
    alpha = np.linspace(0, 2 * np.pi, n, endpoint=False)
    pts = center + radius * np.exp(1j * alpha)
    mis = _wrap(np.angle(np.asarray(f(pts))) - phi)
    roots = []
    for i in range(n):
        a0, a1 = alpha[i], alpha[i] + 2 * np.pi / n
        m0, m1 = mis[i], mis[(i + 1) % n]
        if m0 == 0:
            roots.append(pts[i])
            continue
        # sign change away from the +-pi wrap seam
        if m0 * m1 >= 0 or abs(m0 - m1) > np.pi:
            continue
        for _ in range(50):
            am = 0.5 * (a0 + a1)
            mm = float(_wrap(np.angle(_scalar(f, center + radius * np.exp(1j * am))) - phi))
            if (mm < 0) == (m0 < 0):
                a0, m0 = am, mm
            else:
                a1 = am
        roots.append(center + radius * np.exp(1j * 0.5 * (a0 + a1)))
    return roots


def _same_component(a: RayCurve, b: RayCurve, tol: float = 1e-5) -> bool:
    short, long_ = (a, b) if len(a.points) <= len(b.points) else (b, a)
    sample = short.points[:: max(1, len(short.points) // 20)]
    dists = np.min(np.abs(sample[:, None] - long_.points[None, :]), axis=1)
    # polylines are sampled at different points; allow a step's worth of slack
    return bool(np.median(dists) < max(tol, 1e-2))


def curves_through_zero(f: Evaluator, zero: complex, phi: float, bounds: SearchRect, n_dir: int = 8,
                        radius: float = 1e-3, step: float = 1e-2, label: str = "") -> list[RayCurve]:
    """Components of the ``phi``-ray pre-image leaving a point (zero or branch point).

    Seeds are the points of a small circle around ``zero`` where ``arg f``
    equals ``phi`` (checked to within 0.2); traces from seeds that land on
    the same component are merged.
    """
    seeds = [z for z in _phase_roots_on_circle(f, complex(zero), radius, phi, 8 * n_dir)
             if abs(float(_wrap(np.angle(_scalar(f, z)) - phi))) < 0.2]
    curves: list[RayCurve] = []
    for i, sd in enumerate(seeds):
        try:
            c = trace_preimage(f, sd, phi, bounds, step=step, label=f"{label}{i}" if label else "")
        except SeedOffCurve:
            continue
        if any(_same_component(c, other) for other in curves):
            continue
        curves.append(c)
    return curves


def write_csv(curve: RayCurve, path_or_file, f: Optional[Evaluator] = None):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sigma", "t", "abs_f", "ray_residual"])
        for row in curve.to_rows(f):
            w.writerow([repr(float(x)) for x in row])
    finally:
        if own:
            fh.close()


def to_svg(curves: list[RayCurve], bounds: SearchRect, zeros=(), marks=(), size: int = 600) -> str:
    """Polylines in the ``(sigma, t)`` plane with the critical line dashed."""
    w = size
    h = int(size * bounds.height / bounds.width) if bounds.width else size
    h = max(200, min(h, 4 * size))

    def xy(z):
        x = (z.real - bounds.sigma_min) / bounds.width * w
        y = h - (z.imag - bounds.t_min) / bounds.height * h
        return f"{x:.2f},{y:.2f}"

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
           f'<rect width="{w}" height="{h}" fill="white" stroke="black"/>']
    if bounds.sigma_min < 0.5 < bounds.sigma_max:
        x = (0.5 - bounds.sigma_min) / bounds.width * w
        out.append(f'<line x1="{x:.2f}" y1="0" x2="{x:.2f}" y2="{h}" stroke="gray" stroke-dasharray="6,4"/>')
    for i, c in enumerate(curves):
        pts = " ".join(xy(z) for z in c.points)
        title = f"<title>{c.label or i}: phi={c.phi:.6f}</title>"
        out.append(f'<polyline fill="none" stroke="{palette[i % len(palette)]}" stroke-width="1.5" '
                   f'points="{pts}">{title}</polyline>')
    for z in zeros:
        x, y = xy(complex(z)).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="black"/>')
    for z in marks:
        x, y = xy(complex(z)).split(",")
        out.append(f'<rect x="{float(x) - 4:.2f}" y="{float(y) - 4:.2f}" width="8" height="8" fill="orange"/>')
    out.append("</svg>")
    return "\n".join(out)
