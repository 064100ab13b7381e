"""Flow-curvature function, its invariance identity, and the slow branch.

The curvature function is det(acceleration, velocity) along the flow; its
zero set is a first-order (in eps) approximation of the slow invariant
manifold.  For the Lienard field it collapses to closed polynomial forms,
and setting it to zero at fixed x gives a quadratic in u = y - F(x):

    g'(x) u**2 + f(x) g(x) u + eps g(x)**2 = 0.

The smaller-|u| root is the slow branch (it reduces to the critical
manifold as eps -> 0); the other root is a spurious companion branch at
distance ~ f*g/g'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .system import LienardSystem, State

# |f(x)| below fold_tol marks a fold: the slow/fast branch split degenerates
# there, so the branch solver excludes the point instead of extrapolating.
FOLD_TOL_SCALE = 1e-6

# |g'(x)| at or below this switches the branch quadratic to its linear limit.
DEGENERATE_GP = 1e-13


@dataclass(frozen=True)
class CurvatureSample:
    """State plus flow derivatives, curvature value and curvature rate."""

    state: State
    xdot: float
    ydot: float
    xddot: float
    yddot: float
    xdddot: float
    ydddot: float
    phi: float
    phi_dot: float


def flow_derivatives(
    sys: LienardSystem, s: State
) -> tuple[float, float, float, float, float, float]:
    """First, second and third time derivatives of (x, y) along the flow.

    Second derivatives come from the chain rule on the vector field; third
    derivatives apply the Jacobian to the acceleration and add the
    Jacobian-rate contribution, expanded entrywise.
    """
    eps = sys.eps
    x = s.x
    fx = sys.f(x)
    gx = sys.g(x)
    gpx = sys.gp(x)
    gppx = sys.gpp(x)
    fpx = sys.fp(x)

    xdot = (s.y - sys.F(x)) / eps
    ydot = -gx
    xddot = (ydot - fx * xdot) / eps
    yddot = -gpx * xdot
    # J @ Xddot + (dJ/dt) @ Xdot with J = [[-f/eps, 1/eps], [-g', 0]] and
    # dJ/dt = [[-f'*xdot/eps, 0], [-g''*xdot, 0]].
    xdddot = (-fx / eps) * xddot + (1.0 / eps) * yddot + (-fpx * xdot / eps) * xdot
    ydddot = -gpx * xddot + (-gppx * xdot) * xdot
    return xdot, ydot, xddot, yddot, xdddot, ydddot


def curvature_sample(sys: LienardSystem, s: State) -> CurvatureSample:
    """Bundle the flow derivatives with phi (determinant form) and dphi/dt."""
    xd, yd, xdd, ydd, xddd, yddd = flow_derivatives(sys, s)
    return CurvatureSample(
        state=s, xdot=xd, ydot=yd, xddot=xdd, yddot=ydd,
        xdddot=xddd, ydddot=yddd,
        phi=xdd * yd - ydd * xd,
        phi_dot=xddd * yd - yddd * xd,
    )


def phi(sys: LienardSystem, s: State) -> float:
    """Curvature function xddot*ydot + g'(x)*xdot**2 (= det(Xddot, Xdot))."""
    xd, yd, xdd, _, _, _ = flow_derivatives(sys, s)
    return xdd * yd + sys.gp(s.x) * xd * xd


def phi_dot(sys: LienardSystem, s: State) -> float:
    """Time derivative of the curvature function: xdddot*ydot - ydddot*xdot."""
    xd, yd, _, _, xddd, yddd = flow_derivatives(sys, s)
    return xddd * yd - yddd * xd


def lie_identity_residual(sys: LienardSystem, s: State) -> float:
    """Residual of dphi/dt = trace(J)*phi + det((dJ/dt) Xdot, Xdot).

    This is the invariance (cofactor) identity of the curvature zero set;
    it holds algebraically, so the residual is floating-point noise:
    |residual| <= 1e-9 * max(1, |dphi/dt|) at every finite state.
    """
    eps = sys.eps
    x = s.x
    xd, yd, xdd, ydd, xddd, yddd = flow_derivatives(sys, s)
    ph = xdd * yd + sys.gp(x) * xd * xd
    phd = xddd * yd - yddd * xd
    tr = -sys.f(x) / eps
    w0 = (-sys.fp(x) * xd / eps) * xd
    w1 = (-sys.gpp(x) * xd) * xd
    det = w0 * yd - w1 * xd
    return phd - (tr * ph + det)


@dataclass(frozen=True)
class ManifoldBranch:
    """Roots of the curvature quadratic in u = y - F(x) at one abscissa.

    When both branches exist, |u_slow| <= |u_fast|.  At a fold
    (|f(x)| < fold_tol) the split degenerates: fold_excluded is True and
    no branch is reported.  A negative discriminant also yields no
    branches but is not a fold.
    """

    x: float
    u_slow: float | None
    u_fast: float | None
    y_slow: float | None
    fold_excluded: bool


def slow_branches(
    sys: LienardSystem, x: float, fold_tol_scale: float = FOLD_TOL_SCALE
) -> ManifoldBranch:
    """Solve g'(x) u**2 + f(x)g(x) u + eps g(x)**2 = 0 for the branches.

    The quadratic is solved in the cancellation-safe form
    q = -(b + sign(b) sqrt(disc))/2, roots q/a and c/q, which keeps the
    small (slow) root accurate at small eps.
    """
    eps = sys.eps
    fx = sys.f(x)
    gx = sys.g(x)
    gpx = sys.gp(x)
    Fx = sys.F(x)

    fold_tol = fold_tol_scale * max(1.0, abs(gx))
    if abs(fx) < fold_tol:
        return ManifoldBranch(x, None, None, None, True)

    if abs(gpx) <= DEGENERATE_GP:
        u = -eps * gx / fx
        return ManifoldBranch(x, u, None, Fx + u, False)

    b = fx * gx
    c = eps * gx * gx
    disc = b * b - 4.0 * gpx * c
    if disc < 0.0:
        return ManifoldBranch(x, None, None, None, False)
    q = -(b + math.copysign(math.sqrt(disc), b)) / 2.0
    r1 = q / gpx
    r2 = c / q if q != 0.0 else 0.0
    u_slow, u_fast = (r1, r2) if abs(r1) <= abs(r2) else (r2, r1)
    return ManifoldBranch(x, u_slow, u_fast, Fx + u_slow, False)


def slow_manifold_table(
    sys: LienardSystem,
    x_lo: float,
    x_hi: float,
    n: int,
    fold_tol_scale: float = FOLD_TOL_SCALE,
) -> list[ManifoldBranch]:
    """n equally spaced slow_branches samples over [x_lo, x_hi]."""
    if not x_lo < x_hi:
        raise ValueError("slow_manifold_table requires x_lo < x_hi")
    if n < 2:
        raise ValueError("slow_manifold_table requires n >= 2")
    step = (x_hi - x_lo) / (n - 1)
    return [slow_branches(sys, x_lo + i * step, fold_tol_scale) for i in range(n)]


MANIFOLD_CSV_HEADER = "x,y_slow,u_slow,u_fast,fold_excluded"


def format_manifold_csv(rows: "list[ManifoldBranch]") -> str:
    """CSV for a branch table; floats use round-trip (repr) formatting."""
    def cell(v):
        return "" if v is None else repr(v)

    lines = [MANIFOLD_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{cell(r.x)},{cell(r.y_slow)},{cell(r.u_slow)},{cell(r.u_fast)},"
            f"{str(r.fold_excluded).lower()}"
        )
    return "\n".join(lines) + "\n"
