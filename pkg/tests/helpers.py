"""Shared independent oracles for the test suite.

Everything here is deliberately computed without the jet engine: plain
float math, finite differences, and hand-transcribed closed forms.
"""

import json
import math
from itertools import product

import numpy as np

from hessiometric import load_model

# -- closed-form entropies (plain float math) --------------------------

def entropy_ideal_gas(p, R=1.0, c=1.5, K=1.0, S0=0.0):
    U, V, N = p
    return N * R * math.log(K * V * U**c * N ** (-(c + 1))) + S0


def entropy_paramagnet(p, R=1.0, T0=1.0, I0=1.0):
    U, I, N = p
    return N * R * (math.log(U / (N * R * T0)) - I**2 / (N**2 * I0**2))


def entropy_kn_radiant(p):
    u, q, j = p
    return 0.25 * (u + math.sqrt(u**2 - q * u - j**2) - q / 2)


def entropy_kn_naive(p):
    M, Q, J = p
    return 0.25 * (M**2 + M**2 * math.sqrt(1 - Q**2 / M**2 - J**2 / M**4)
                   - Q**2 / 2)


ENTROPY_FNS = {
    "ideal_gas": entropy_ideal_gas,
    "paramagnet": entropy_paramagnet,
    "kerr_newman_radiant": entropy_kn_radiant,
    "kerr_newman_naive": entropy_kn_naive,
}

# safe sampling boxes, well inside each model's domain
SAMPLE_BOXES = {
    "ideal_gas": [(0.5, 2.5), (0.5, 2.5), (0.5, 2.5)],
    "paramagnet": [(0.5, 2.5), (-0.5, 0.5), (0.5, 2.5)],
    "kerr_newman_radiant": [(1.0, 2.0), (0.05, 0.3), (0.05, 0.3)],
    "kerr_newman_naive": [(1.0, 2.0), (0.2, 0.5), (0.1, 0.3)],
}


def sample_points(name, count, rng):
    box = SAMPLE_BOXES[name]
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return lo + (hi - lo) * rng.random((count, len(box)))


# -- closed-form metric matrices (hand-transcribed) --------------------

def metric_ideal_gas(p, R=1.0, c=1.5):
    U, V, N = p
    return R * np.array([
        [c * N / U**2, 0.0, -c / U],
        [0.0, N / V**2, -1.0 / V],
        [-c / U, -1.0 / V, (c + 1) / N],
    ])


def metric_paramagnet(p, R=1.0, I0=1.0):
    U, I, N = p
    return R * np.array([
        [N / U**2, 0.0, -1.0 / U],
        [0.0, 2.0 / (N * I0**2), -2.0 * I / (N**2 * I0**2)],
        [-1.0 / U, -2.0 * I / (N**2 * I0**2),
         (1.0 / N) * (1.0 + 2.0 * I**2 / (I0**2 * N**2))],
    ])


def metric_kn_radiant_jslice(z, j0):
    """Closed-form induced metric of the constant-momentum slice of the
    radiant-chart Kerr-Newman model, coordinates (u, q)."""
    u, q = z
    w = math.sqrt(u**2 - q * u - j0**2)
    return np.array([
        [(4 * j0**2 + q**2), -(q * u + 2 * j0**2)],
        [-(q * u + 2 * j0**2), u**2],
    ]) / (16 * w**3)


# -- finite-difference derivative oracle -------------------------------

def _fd_once(f, point, alpha, steps):
    """Nested central differences for the multi-index alpha."""
    alpha = list(alpha)
    for i, k in enumerate(alpha):
        if k > 0:
            alpha[i] -= 1
            h = steps[i]

            def deriv(p, i=i, h=h, alpha=tuple(alpha)):
                up = np.array(p, dtype=float)
                dn = np.array(p, dtype=float)
                up[i] += h
                dn[i] -= h
                return (_fd_once(f, up, alpha, steps)
                        - _fd_once(f, dn, alpha, steps)) / (2 * h)

            return deriv(point)
    return f(point)


def fd_partial(f, point, alpha):
    """Partial derivative of f at point for the multi-index alpha by
    Richardson-extrapolated nested central differences (base step
    max(1e-2, |x_i| * 1e-2) per axis)."""
    point = np.asarray(point, dtype=float)
    steps = np.array([max(1e-2, abs(x) * 1e-2) for x in point])
    coarse = _fd_once(f, point, alpha, steps)
    fine = _fd_once(f, point, alpha, steps / 2)
    return (4 * fine - coarse) / 3


def multi_indices(dim, max_order, min_order=1):
    for e in product(range(max_order + 1), repeat=dim):
        if min_order <= sum(e) <= max_order:
            yield e


# -- randomly generated extensive models -------------------------------

def random_homogeneous_model(rng, dim=None):
    """Degree-one homogeneous entropy: sum of a_k * x_i * ln(x_j / x_i)
    terms over distinct coordinate pairs."""
    if dim is None:
        dim = int(rng.integers(2, 5))
    names = [f"x{i+1}" for i in range(dim)]
    n_terms = int(rng.integers(1, 4))
    terms = []
    for _ in range(n_terms):
        i, j = rng.choice(dim, size=2, replace=False)
        a = float(rng.uniform(0.2, 2.0))
        terms.append(f"{a!r}*{names[i]}*ln({names[j]}/{names[i]})")
    doc = {
        "name": "random_homogeneous",
        "coordinates": names,
        "entropy": " + ".join(terms),
        "domain": names,
    }
    return load_model(json.dumps(doc))


def perturbed_model(base_doc, epsilon):
    """Same model with the entropy shifted by -epsilon * x1^2 (the
    potential gains +epsilon * x1^2)."""
    doc = dict(base_doc)
    first = doc["coordinates"][0]
    doc["entropy"] = f"({doc['entropy']}) - {epsilon!r}*{first}^2"
    return load_model(json.dumps(doc))


def model_doc(model):
    """Reconstruct a JSON document for a loaded model (uses the pretty
    printer, so expressions stay equivalent)."""
    from hessiometric.expr import pretty
    return {
        "name": model.name,
        "coordinates": list(model.coordinates),
        "parameters": dict(model.parameters),
        "entropy": pretty(model.entropy),
        "domain": [pretty(d) for d in model.domain],
    }


# -- finite-difference curvature oracle on a 2-dim slice ---------------

def _fd1(fn, z, axis, h):
    """5-point (4th-order) first derivative of a matrix-valued map."""
    step = np.zeros(len(z))
    step[axis] = h
    return (-fn(z + 2 * step) + 8 * fn(z + step)
            - 8 * fn(z - step) + fn(z - 2 * step)) / (12 * h)


def fd_scalar_curvature(gbar_fn, z, h=1e-3):
    """Scalar curvature of a metric given only pointwise, assembling
    Christoffels and the Riemann tensor from finite differences."""
    z = np.asarray(z, dtype=float)
    r = len(z)

    def christoffel(zz):
        g = gbar_fn(zz)
        ginv = np.linalg.inv(g)
        dg = np.stack([_fd1(gbar_fn, zz, k, h) for k in range(r)])
        low = 0.5 * (np.einsum("abc->cab", dg) + np.einsum("bac->cab", dg)
                     - dg)
        return np.einsum("cd,dab->cab", ginv, low)

    gamma = christoffel(z)
    dgamma = np.stack([_fd1(christoffel, z, k, h) for k in range(r)])
    riemann = (np.einsum("cadb->abcd", dgamma)
               - np.einsum("dacb->abcd", dgamma)
               + np.einsum("ace,edb->abcd", gamma, gamma)
               - np.einsum("ade,ecb->abcd", gamma, gamma))
    ricci = np.einsum("abad->bd", riemann)
    return float(np.einsum("bd,bd->", np.linalg.inv(gbar_fn(z)), ricci))
