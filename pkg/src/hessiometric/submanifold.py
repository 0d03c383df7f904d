"""Linear slices of the state space and their intrinsic geometry.

A slice {x : Bx = c} in a thermodynamic chart carries an adapted chart
whose trailing coordinates are the constraint values; the leading
coordinates z parametrize the slice.  The pulled-back potential is again
a Hessian potential in z, which gives the induced metric, its
Levi-Civita connection and curvature (the Ruppeiner-style scalar), the
Legendre-dual potential and dual coordinates, and the flatness of the
dual connection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
import scipy.linalg

from . import expr
from .errors import (DegenerateSliceError, DomainError, RankDeficientError,
                     SingularDualChartError)
from .geometry import MetricField, hessian_metric
from .jets import Jet
from .models import PotentialModel

_EPS = 1e-300


@dataclass(frozen=True)
class SliceSpec:
    """Linear constraints Bx = c plus the adapted chart x~ = Tx whose
    last rows are exactly B."""

    constraints: np.ndarray  # B, (n-r) x n
    constants: np.ndarray    # c, (n-r,)
    chart: np.ndarray        # T, n x n, last n-r rows equal B
    chart_inv: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.constraints.shape[1]

    @property
    def slice_dim(self) -> int:
        return self.ambient_dim - self.constraints.shape[0]

    @property
    def jacobian(self) -> np.ndarray:
        """Constant Jacobian of the embedding z -> x (n x r)."""
        return self.chart_inv[:, : self.slice_dim]

    @property
    def offset(self) -> np.ndarray:
        return self.chart_inv[:, self.slice_dim:] @ self.constants

    def embed(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return self.jacobian @ z + self.offset

    def project(self, x) -> np.ndarray:
        """Slice coordinates of an ambient point (assumed on the slice)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return (self.chart @ x)[: self.slice_dim]


def make_slice(B, c, n: Optional[int] = None) -> SliceSpec:
    """Build a slice spec from constraints Bx = c.

    The adapted chart completes B with standard basis vectors chosen by
    column-pivoted QR, orthogonalized against B's row space; axis-aligned
    constraints therefore keep the remaining coordinates verbatim.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    m, nb = B.shape
    if n is None:
        n = nb
    if n != nb:
        raise ValueError(f"B has {nb} columns, expected {n}")
    if c.shape != (m,):
        raise ValueError(f"constants have shape {c.shape}, expected ({m},)")
    if m >= n:
        raise RankDeficientError("constraints leave no slice dimensions")
    r = n - m

    scale = np.linalg.norm(B)
    q_full, r_fact = scipy.linalg.qr(B.T)
    diag = np.abs(np.diag(r_fact[:m, :m]))
    if np.any(diag <= 1e-12 * scale):
        raise RankDeficientError("constraint matrix is rank-deficient")
    q_rows = q_full[:, :m]        # orthonormal basis of B's row space
    q_comp = q_full[:, m:]        # orthonormal complement

    _, _, pivots = scipy.linalg.qr(B, pivoting=True)
    free = [j for j in range(n) if j not in set(pivots[:m])][:r]
    rows = np.empty((r, n))
    for i, j in enumerate(free):
        e = np.zeros(n)
        e[j] = 1.0
        rows[i] = e - q_rows @ (q_rows.T @ e)
    # fall back to the orthonormal complement if the projected basis
    # vectors degenerate
    if np.linalg.matrix_rank(rows, tol=1e-10) < r:
        rows = q_comp.T
    T = np.vstack([rows, B])
    T_inv = np.linalg.inv(T)
    return SliceSpec(constraints=B, constants=c, chart=T, chart_inv=T_inv)


# -- pulled-back potential and metric ----------------------------------

@dataclass
class PullbackData:
    """Order-4 data of the pulled-back potential at a slice point.

    Index conventions: dgbar[k, a, b] = d_k gbar_ab and
    d2gbar[l, k, a, b] = d_l d_k gbar_ab in slice coordinates.
    """

    slice: SliceSpec
    z: np.ndarray
    x: np.ndarray
    potential: float          # pulled-back potential value
    gradient: np.ndarray      # d(potential)/dz
    gbar: np.ndarray
    dgbar: np.ndarray
    d2gbar: np.ndarray
    two_path_residual: float  # chain-rule metric vs z-Hessian of potential
    ambient: MetricField = field(repr=False, default=None)


def _pullback_jet(model: PotentialModel, sl: SliceSpec, z, order: int = 4) -> Jet:
    """Jet in z of the pulled-back potential, via affine coordinate jets."""
    x = sl.embed(z)
    a = sl.jacobian
    env = {name: Jet.affine(x[i], a[i], order)
           for i, name in enumerate(model.coordinates)}
    for name, value in model.parameters.items():
        env[name] = Jet.constant(float(value), sl.slice_dim, order)
    return -expr.eval_on(model.entropy, env)


def pullback_metric(model: PotentialModel, sl: SliceSpec, z) -> PullbackData:
    """Induced metric and its z-derivatives at a slice point.

    Computed two ways -- chain rule on the ambient metric field, and the
    z-Hessian of the pulled-back potential -- and cross-checked; the
    disagreement is reported as ``two_path_residual``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    x = sl.embed(z)
    mf = hessian_metric(model, x)  # raises DomainError off-domain
    jet = _pullback_jet(model, sl, z, order=4)
    gbar = jet.hessian()
    dgbar = jet.third_tensor()
    d2gbar = jet.fourth_tensor()
    a = sl.jacobian
    gbar_chain = a.T @ mf.g @ a
    residual = float(np.max(np.abs(gbar - gbar_chain))
                     / (np.max(np.abs(gbar)) + _EPS))
    return PullbackData(slice=sl, z=z, x=x,
                        potential=jet.value, gradient=jet.gradient(),
                        gbar=gbar, dgbar=dgbar, d2gbar=d2gbar,
                        two_path_residual=residual, ambient=mf)


# -- Levi-Civita connection and curvature ------------------------------

def levi_civita(pb: PullbackData, tol_rel: float = 1e-9) -> np.ndarray:
    """Christoffel symbols gamma[c, a, b] = Gamma^c_ab of the induced
    metric.  Raises DegenerateSliceError when the slice is not
    transversal to the kernel."""
    lam = np.linalg.eigvalsh(pb.gbar)
    if lam[0] <= tol_rel * np.max(np.abs(lam)):
        raise DegenerateSliceError(
            f"pulled-back metric is singular at z={pb.z.tolist()} "
            f"(eigenvalues {lam.tolist()})")
    ginv = np.linalg.inv(pb.gbar)
    low = 0.5 * (np.einsum("abc->cab", pb.dgbar)
                 + np.einsum("bac->cab", pb.dgbar)
                 - pb.dgbar)
    return np.einsum("cd,dab->cab", ginv, low)


def christoffel_derivatives(pb: PullbackData, tol_rel: float = 1e-9) -> np.ndarray:
    """dgamma[e, c, a, b] = d_e Gamma^c_ab, analytic from the fourth
    derivatives of the potential."""
    lam = np.linalg.eigvalsh(pb.gbar)
    if lam[0] <= tol_rel * np.max(np.abs(lam)):
        raise DegenerateSliceError("pulled-back metric is singular")
    ginv = np.linalg.inv(pb.gbar)
    low = 0.5 * (np.einsum("abc->cab", pb.dgbar)
                 + np.einsum("bac->cab", pb.dgbar)
                 - pb.dgbar)
    dlow = 0.5 * (np.einsum("eabd->edab", pb.d2gbar)
                  + np.einsum("ebad->edab", pb.d2gbar)
                  - np.einsum("edab->edab", pb.d2gbar))
    dginv = -np.einsum("ca,eab,bd->ecd", ginv, pb.dgbar, ginv)
    return (np.einsum("ecd,dab->ecab", dginv, low)
            + np.einsum("cd,edab->ecab", ginv, dlow))


def connection_curvature(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """Curvature tensor R[a, b, c, d] = R^a_bcd of a connection given
    its coefficients and their coordinate derivatives."""
    term1 = np.einsum("cadb->abcd", dgamma)
    term2 = np.einsum("dacb->abcd", dgamma)
    term3 = np.einsum("ace,edb->abcd", gamma, gamma)
    term4 = np.einsum("ade,ecb->abcd", gamma, gamma)
    return term1 - term2 + term3 - term4


@dataclass
class CurvatureReport:
    z: np.ndarray
    metric: np.ndarray
    christoffels: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    residuals: Mapping[str, float]


def curvature(pb: PullbackData, gamma: Optional[np.ndarray] = None,
              dgamma: Optional[np.ndarray] = None) -> CurvatureReport:
    """Riemann, Ricci and scalar curvature of the induced metric at a
    slice point, with structural residual diagnostics."""
    if gamma is None:
        gamma = levi_civita(pb)
    if dgamma is None:
        dgamma = christoffel_derivatives(pb)
    riemann = connection_curvature(gamma, dgamma)
    ricci = np.einsum("abad->bd", riemann)
    ginv = np.linalg.inv(pb.gbar)
    scalar = float(np.einsum("bd,bd->", ginv, ricci))

    r_scale = np.max(np.abs(riemann)) + _EPS
    antisym = float(np.max(np.abs(riemann + riemann.transpose(0, 1, 3, 2)))
                    / r_scale)
    bianchi = float(np.max(np.abs(riemann + riemann.transpose(0, 2, 3, 1)
                                  + riemann.transpose(0, 3, 1, 2))) / r_scale)
    nabla_g = (np.einsum("cab->cab", pb.dgbar)
               - np.einsum("dca,db->cab", gamma, pb.gbar)
               - np.einsum("dcb,ad->cab", gamma, pb.gbar))
    compat = float(np.max(np.abs(nabla_g)) / (np.max(np.abs(pb.dgbar)) + _EPS))
    return CurvatureReport(z=pb.z, metric=pb.gbar, christoffels=gamma,
                           riemann=riemann, ricci=ricci, scalar=scalar,
                           residuals={"antisymmetry": antisym,
                                      "bianchi": bianchi,
                                      "metric_compatibility": compat})


def flatness_residual(gamma: np.ndarray, dgamma: np.ndarray) -> float:
    """Size of the curvature of a connection, normalized by the natural
    scale of its coefficients."""
    riemann = connection_curvature(gamma, dgamma)
    scale = max(float(np.max(np.abs(gamma))) ** 2,
                float(np.max(np.abs(dgamma))), _EPS)
    return float(np.max(np.abs(riemann)) / scale)


def dual_flatness_residual(model: PotentialModel, sl: SliceSpec, z) -> float:
    """Curvature residual of the dual connection 2*Gamma (the
    pulled-back flat connection has vanishing coefficients in the
    adapted affine chart); zero in exact arithmetic."""
    pb = pullback_metric(model, sl, z)
    gamma = levi_civita(pb)
    dgamma = christoffel_derivatives(pb)
    return flatness_residual(2.0 * gamma, 2.0 * dgamma)


# -- Legendre duality --------------------------------------------------

@dataclass
class DualPotential:
    value: float            # z . grad - potential (Legendre formula)
    extensive_form: float   # minus the constrained part of the ambient
                            # Euler pairing; equal for extensive models
    mismatch: bool


def dual_potential(model: PotentialModel, sl: SliceSpec, z,
                   mismatch_tol: float = 1e-8) -> DualPotential:
    """Legendre-dual potential of the slice at z, computed both from the
    transform of the pulled-back potential and from the extensivity
    shortcut.  A mismatch between the two flags a non-extensive model."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    jet = _pullback_jet(model, sl, z, order=1)
    x = sl.embed(z)
    if not model.domain_check(x):
        raise DomainError(f"embedded point {x.tolist()} violates the domain "
                          f"of model {model.name!r}")
    value = float(z @ jet.gradient() - jet.value)

    ambient = model.potential_jet(x, order=1)
    grad_x = ambient.gradient()
    r = sl.slice_dim
    # derivative of the potential along the trailing adapted coordinates
    trailing = sl.chart_inv[:, r:].T @ grad_x
    extensive_form = float(-(sl.constants @ trailing))
    mismatch = abs(value - extensive_form) > mismatch_tol * (1.0 + abs(value))
    return DualPotential(value=value, extensive_form=extensive_form,
                         mismatch=mismatch)


def dual_coordinates(model: PotentialModel, sl: SliceSpec, z) -> np.ndarray:
    """Gradient of the pulled-back potential: the dual affine chart of
    the dual Hessian structure."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    x = sl.embed(z)
    if not model.domain_check(x):
        raise DomainError(f"embedded point {x.tolist()} violates the domain "
                          f"of model {model.name!r}")
    return _pullback_jet(model, sl, z, order=1).gradient()


def legendre_invariance_residual(model: PotentialModel, sl: SliceSpec, z) -> float:
    """Check that the induced metric is the Hessian of the dual
    potential in the dual chart.

    The Jacobian of z -> dual coordinates is taken by central
    differences (relative step 1e-4); the dual-chart Hessian of the dual
    potential and the transformed metric are compared entrywise.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    pb = pullback_metric(model, sl, z)
    r = sl.slice_dim
    jac = np.empty((r, r))
    for b in range(r):
        h = 1e-4 * (1.0 + abs(float(z[b])))
        step = np.zeros(r)
        step[b] = h
        # 5-point stencil: truncation well below the comparison tolerances
        jac[:, b] = (-dual_coordinates(model, sl, z + 2 * step)
                     + 8 * dual_coordinates(model, sl, z + step)
                     - 8 * dual_coordinates(model, sl, z - step)
                     + dual_coordinates(model, sl, z - 2 * step)) / (12 * h)
    if np.linalg.cond(jac) > 1e12:
        raise SingularDualChartError(
            f"dual-coordinate Jacobian is singular at z={z.tolist()}")
    jac_inv = np.linalg.inv(jac)
    # gradient of the dual potential in the dual chart is z itself, so
    # its Hessian is the Jacobian of z as a function of the dual chart
    hessian_dual = jac_inv
    metric_dual_chart = jac_inv.T @ pb.gbar @ jac_inv
    return float(np.max(np.abs(hessian_dual - metric_dual_chart))
                 / (np.max(np.abs(hessian_dual)) + _EPS))
