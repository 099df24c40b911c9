"""Independent oracles and residual meters.

A 5-point finite-difference Laplace solver cross-checks the harmonic
series layer; central-difference residual meters check that assembled
fields satisfy force balance and the plane-strain stress-strain law;
the discrepancy report runs the three per-mode solution routes against
each other and documents the closed-form corrections.

Residual meters evaluate on the interior of a uniform grid (one cell
from the boundary so the central stencils stay valid) and can exclude a
further band of physical width ``exclusion_margin``: a truncated series
with top wavenumber k_N has a boundary layer of thickness ~1/k_N that a
desk-scale grid cannot resolve, and convergence-order measurements are
meaningful only outside it.  Observed orders are computed from the l2
(root-mean-square) residual of a grid pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .core import (
    DomainError,
    FdSolveError,
    Geometry,
    Material,
    ModeIndex,
    PathDivergenceError,
)
from .harmonic_rect import DirichletData
from .strip_solution import (
    mode_fields_blocks,
    mode_fields_closed,
    mode_fields_initial,
)

__all__ = [
    "GridSpec",
    "ResidualReport",
    "fd_laplace_solve",
    "laplacian_residual",
    "equilibrium_residual",
    "constitutive_residual",
    "discrepancy_report",
    "DiscrepancyReport",
    "ModeDiscrepancy",
]

_FD_RESIDUAL_TOL = 1e-11
_PATH_AB_HARD_LIMIT = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid described by its interior point counts.

    Spacing is l/(nx+1) by h/(ny+1); the sampled grid includes the
    boundary ring, residuals are formed on the interior points.
    """

    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise DomainError(f"grid needs at least 3x3 interior points, got "
                              f"{self.nx}x{self.ny}")

    def spacing(self, geom: Geometry) -> tuple[float, float]:
        return geom.l / (self.nx + 1), geom.h / (self.ny + 1)

    def axes(self, geom: Geometry) -> tuple[np.ndarray, np.ndarray]:
        """Full sample axes including the boundary ring."""
        return (np.linspace(0.0, geom.l, self.nx + 2),
                np.linspace(0.0, geom.h, self.ny + 2))

    def refined(self) -> "GridSpec":
        """Grid with exactly halved spacing."""
        return GridSpec(nx=2 * self.nx + 1, ny=2 * self.ny + 1)


@dataclass(frozen=True)
class ResidualReport:
    """Residual statistics over the evaluated interior points.

    ``l2`` is the root-mean-square residual; ``observed_order`` (from the
    l2 of a coarse/fine grid pair) is present only when a refined grid
    was supplied.
    """

    max_abs: float
    l2: float
    location: tuple[float, float]
    observed_order: Optional[float] = None


def _stats(res: np.ndarray, XI: np.ndarray, YI: np.ndarray,
           mask: np.ndarray) -> tuple[float, float, tuple[float, float]]:
    vals = res[mask]
    if vals.size == 0:
        raise DomainError("exclusion margin leaves no interior points")
    idx = int(np.argmax(np.abs(vals)))
    max_abs = float(np.abs(vals[idx]))
    l2 = float(np.sqrt(np.mean(vals**2)))
    loc = (float(XI[mask][idx]), float(YI[mask][idx]))
    return max_abs, l2, loc


def _interior_mask(geom: Geometry, xi: np.ndarray, yi: np.ndarray,
                   margin: float) -> np.ndarray:
    XI, YI = np.meshgrid(xi, yi)
    if margin <= 0.0:
        return XI, YI, np.ones_like(XI, dtype=bool)
    mask = ((XI >= margin) & (XI <= geom.l - margin)
            & (YI >= margin) & (YI <= geom.h - margin))
    return XI, YI, mask


def _order(l2_coarse: float, l2_fine: float, dx_coarse: float, dx_fine: float) -> float:
    return math.log(l2_coarse / l2_fine) / math.log(dx_coarse / dx_fine)


# ---------------------------------------------------------------------------
# finite-difference Laplace oracle
# ---------------------------------------------------------------------------

def fd_laplace_solve(data: DirichletData, geom: Geometry, grid: GridSpec) -> np.ndarray:
    """Solve the 5-point discrete Laplace system for the given Dirichlet
    data; returns the full (ny+2, nx+2) grid including the boundary ring.

    A sparse direct solve is used; the algebraic residual is checked
    against 1e-11 relative to the data scale and a failure raises
    :class:`FdSolveError`.  Deterministic for fixed inputs.
    """
    nx, ny = grid.nx, grid.ny
    dx, dy = grid.spacing(geom)
    xs, ys = grid.axes(geom)

    def edge(f, pts):
        if f is None:
            return np.zeros(len(pts))
        vals = np.asarray(f(pts), dtype=float)
        return np.broadcast_to(vals, pts.shape).astype(float)

    g1 = edge(data.f1, ys)   # x = 0
    g2 = edge(data.f2, ys)   # x = l
    g3 = edge(data.f3, xs)   # y = 0
    g4 = edge(data.f4, xs)   # y = h

    Tx = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(nx, nx)) / dx**2
    Ty = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(ny, ny)) / dy**2
    A = (sp.kron(sp.identity(ny), Tx) + sp.kron(Ty, sp.identity(nx))).tocsr()

    b = np.zeros((ny, nx))
    b[0, :] -= g3[1:-1] / dy**2
    b[-1, :] -= g4[1:-1] / dy**2
    b[:, 0] -= g1[1:-1] / dx**2
    b[:, -1] -= g2[1:-1] / dx**2

    u = spla.spsolve(A, b.ravel())
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    residual = float(np.max(np.abs(A @ u - b.ravel()))) / scale
    if not np.isfinite(residual) or residual > _FD_RESIDUAL_TOL:
        raise FdSolveError(
            f"direct solve residual {residual:.3e} exceeds {_FD_RESIDUAL_TOL:g}")

    full = np.zeros((ny + 2, nx + 2))
    full[1:-1, 1:-1] = u.reshape(ny, nx)
    full[:, 0] = g1
    full[:, -1] = g2
    full[0, :] = g3
    full[-1, :] = g4
    return full


def laplacian_residual(
    field: Callable,
    geom: Geometry,
    grid: GridSpec,
    refined: GridSpec | None = None,
    exclusion_margin: float = 0.0,
) -> ResidualReport:
    """5-point discrete Laplacian of a callable field on interior points.

    ``field(X, Y)`` must accept broadcast numpy arrays.
    """

    def run(g: GridSpec):
        dx, dy = g.spacing(geom)
        xs, ys = g.axes(geom)
        X, Y = np.meshgrid(xs, ys)
        F = np.asarray(field(X, Y), dtype=float)
        lap = ((F[1:-1, 2:] - 2 * F[1:-1, 1:-1] + F[1:-1, :-2]) / dx**2
               + (F[2:, 1:-1] - 2 * F[1:-1, 1:-1] + F[:-2, 1:-1]) / dy**2)
        XI, YI, mask = _interior_mask(geom, xs[1:-1], ys[1:-1], exclusion_margin)
        return _stats(lap, XI, YI, mask), dx

    (max_abs, l2, loc), dx = run(grid)
    order = None
    if refined is not None:
        (_, l2_f, _), dx_f = run(refined)
        order = _order(l2, l2_f, dx, dx_f)
    return ResidualReport(max_abs=max_abs, l2=l2, location=loc, observed_order=order)


# ---------------------------------------------------------------------------
# physics residual meters
# ---------------------------------------------------------------------------

def _central_residuals(sf, geom: Geometry, grid: GridSpec,
                       material: Material | None = None):
    dx, dy = grid.spacing(geom)
    xs, ys = grid.axes(geom)
    f = sf.grid_fields(xs, ys)
    mat = material if material is not None else sf.material

    def Dx(a):
        return (a[1:-1, 2:] - a[1:-1, :-2]) / (2.0 * dx)

    def Dy(a):
        return (a[2:, 1:-1] - a[:-2, 1:-1]) / (2.0 * dy)

    eq1 = Dx(f["sigma_x"]) + Dy(f["tau_xy"])
    eq2 = Dx(f["tau_xy"]) + Dy(f["sigma_y"])

    ex = Dx(f["u"])
    ey = Dy(f["v"])
    gxy = Dy(f["u"]) + Dx(f["v"])
    lam, G = mat.lam, mat.G
    trace = lam * (ex + ey)
    c_sx = f["sigma_x"][1:-1, 1:-1] - (trace + 2.0 * G * ex)
    c_sy = f["sigma_y"][1:-1, 1:-1] - (trace + 2.0 * G * ey)
    c_txy = f["tau_xy"][1:-1, 1:-1] - G * gxy
    return (eq1, eq2, c_sx, c_sy, c_txy), xs[1:-1], ys[1:-1], dx


def _meter(sf, grid, refined, exclusion_margin, picks, material=None):
    geom = sf.geometry
    res_c, xi, yi, dx = _central_residuals(sf, geom, grid, material)
    XI, YI, mask = _interior_mask(geom, xi, yi, exclusion_margin)
    reports = []
    stats_c = [_stats(res_c[i], XI, YI, mask) for i in picks]
    if refined is not None:
        res_f, xif, yif, dxf = _central_residuals(sf, geom, refined, material)
        XIf, YIf, maskf = _interior_mask(geom, xif, yif, exclusion_margin)
        for (max_abs, l2, loc), i in zip(stats_c, picks):
            _, l2f, _ = _stats(res_f[i], XIf, YIf, maskf)
            reports.append(ResidualReport(max_abs, l2, loc,
                                          observed_order=_order(l2, l2f, dx, dxf)))
    else:
        for max_abs, l2, loc in stats_c:
            reports.append(ResidualReport(max_abs, l2, loc))
    return tuple(reports)


def equilibrium_residual(
    sf,
    grid: GridSpec,
    refined: GridSpec | None = None,
    exclusion_margin: float = 0.0,
) -> tuple[ResidualReport, ResidualReport]:
    """Central-difference residuals of the two force-balance equations
    d(sigma_x)/dx + d(tau_xy)/dy and d(tau_xy)/dx + d(sigma_y)/dy."""
    return _meter(sf, grid, refined, exclusion_margin, picks=(0, 1))


def constitutive_residual(
    sf,
    grid: GridSpec,
    refined: GridSpec | None = None,
    exclusion_margin: float = 0.0,
    material: Material | None = None,
) -> tuple[ResidualReport, ResidualReport, ResidualReport]:
    """Residuals of the three plane-strain stress-strain relations, with
    strains from central differences of u and v.

    ``material`` overrides the constants used by the check only (negative
    control: a perturbed Poisson ratio must leave a visible residual).
    """
    return _meter(sf, grid, refined, exclusion_margin, picks=(2, 3, 4),
                  material=material)


# ---------------------------------------------------------------------------
# three-path discrepancy report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeDiscrepancy:
    n: int
    beta: float
    rel_diff_ab: float
    rel_diff_cb: float
    delta_ratio: float
    uncorrected_shear_face: float   # closed-form tau_xy(h) before the factor fix
    corrected_shear_face: float


@dataclass(frozen=True)
class DiscrepancyReport:
    geometry: Geometry
    material: Material
    calibration_ratio: float
    rows: tuple
    max_rel_ab: float
    max_rel_cb: float

    def as_dict(self) -> dict:
        return {
            "calibration_ratio": self.calibration_ratio,
            "path_equiv_max_rel_diff_ab": self.max_rel_ab,
            "path_equiv_max_rel_diff_cb": self.max_rel_cb,
        }

    def as_text(self) -> str:
        lines = [
            "three-path discrepancy report",
            f"  geometry l={self.geometry.l:g} h={self.geometry.h:g}; "
            f"material E={self.material.E:g} nu={self.material.nu:g}",
            f"  closed-form amplitude calibration ratio: {self.calibration_ratio:.15g}",
            f"  max relative profile difference, boundary solve vs blocks: {self.max_rel_ab:.3e}",
            f"  max relative profile difference, closed form vs blocks:    {self.max_rel_cb:.3e}",
            "  per-mode (n, beta, |A-B|, |C-B|, delta/c, uncorrected tau(h), corrected tau(h)):",
        ]
        for r in self.rows:
            lines.append(
                f"    {r.n:4d}  {r.beta:12.6g}  {r.rel_diff_ab:9.3e}  "
                f"{r.rel_diff_cb:9.3e}  {r.delta_ratio:.12f}  "
                f"{r.uncorrected_shear_face: .6e}  {r.corrected_shear_face: .6e}")
        lines.append(
            "  note: the uncorrected closed-form shear factor eta*sh(beta*eta) "
            "leaves tau_xy(x, h) nonzero; the corrected factor eta*ch(beta*eta) "
            "cancels it exactly.")
        return "\n".join(lines)


_CMP_ETAS = np.linspace(0.0, 1.0, 11)
_SCALE_ETAS = np.linspace(0.0, 1.0, 101)


def path_profile_difference(pa, pb) -> float:
    """Max over fields/samples of |pa - pb| / max_eta |pb|.

    The scale is the profile's max over a fine eta grid: the coarse
    comparison samples can miss the boundary layer of a high mode
    entirely, which would turn roundoff into a spurious relative error.
    """
    a = pa.profile_matrix(_CMP_ETAS)
    b = pb.profile_matrix(_CMP_ETAS)
    scale = np.max(np.abs(pb.profile_matrix(_SCALE_ETAS)), axis=1, keepdims=True)
    scale = np.where(scale == 0.0, 1.0, scale)
    return float(np.max(np.abs(a - b) / scale))


def discrepancy_report(geom: Geometry, mat: Material,
                       modes: Sequence[int]) -> DiscrepancyReport:
    """Run the three per-mode routes against each other.

    Path disagreements are report content, with one exception: a
    boundary-solve vs blocks divergence beyond 1e-8 means the solver
    itself is broken (those two routes share no formulas) and raises
    :class:`PathDivergenceError`.
    """
    from .strip_solution import calibrate_delta_ratio  # local: avoid cycle at import

    rho = calibrate_delta_ratio(geom, mat)
    rows = []
    max_ab = 0.0
    max_cb = 0.0
    for n in modes:
        mode = ModeIndex.for_mode(n, geom)
        pb = mode_fields_blocks(mode, geom, mat)
        pa = mode_fields_initial(mode, geom, mat)
        pc = mode_fields_closed(mode, geom, mat, delta_ratio=rho)
        d_ab = path_profile_difference(pa, pb)
        d_cb = path_profile_difference(pc, pb)
        max_ab = max(max_ab, d_ab)
        max_cb = max(max_cb, d_cb)

        vb = pb.V(_SCALE_ETAS)
        vc = mode_fields_closed(mode, geom, mat, delta_ratio=1.0).V(_SCALE_ETAS)
        delta_n = float(np.dot(vc, vb) / np.dot(vc, vc))

        unfixed = mode_fields_closed(mode, geom, mat, delta_ratio=rho,
                                     uncorrected_shear=True)
        rows.append(ModeDiscrepancy(
            n=n, beta=mode.beta, rel_diff_ab=d_ab, rel_diff_cb=d_cb,
            delta_ratio=delta_n,
            uncorrected_shear_face=float(unfixed.X(1.0)),
            corrected_shear_face=float(pc.X(1.0)),
        ))
    if max_ab > _PATH_AB_HARD_LIMIT:
        raise PathDivergenceError(
            f"boundary-solve profiles diverge from block profiles by "
            f"{max_ab:.3e} (> {_PATH_AB_HARD_LIMIT:g})")
    return DiscrepancyReport(geometry=geom, material=mat, calibration_ratio=rho,
                             rows=tuple(rows), max_rel_ab=max_ab, max_rel_cb=max_cb)
