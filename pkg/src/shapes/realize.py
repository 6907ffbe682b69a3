"""Concrete single-particle realizations and densities on grids.

The abstract formal power t^k maps to H_k(x) exp(-x^2/2) in the oscillator
realization, to cos(kx) in the open box and sin((k+1)x) in the closed box.
The mapping is applied monomial by monomial, never to factored expressions
(which ExactPolynomial enforces by always being expanded).

Densities are computed for the oscillator realization: the integrals over
the traced-out particles reduce to one-dimensional pair overlaps of Hermite
functions, each evaluated by 40-node Gauss-Hermite quadrature (exact for
these polynomial-times-Gaussian integrands up to degree 79).  Coordinates
are in units of the realization's length scale.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermval

from .errors import InternalConsistencyError

GAUSS_HERMITE_NODES = 40


class RealizationKind(Enum):
    HERMITE_OSCILLATOR = "hermite"
    BOX_OPEN = "box-open"
    BOX_CLOSED = "box-closed"


@dataclass(frozen=True)
class Realization:
    """A concrete single-particle basis behind the formal powers."""

    kind: RealizationKind
    length_scale: float = 1.0

    def __post_init__(self):
        if self.length_scale <= 0:
            raise ValueError("length scale must be positive")

    def orbital_values(self, k, u):
        """phi_k on already-scaled coordinates u = x / length_scale."""
        if self.kind is RealizationKind.HERMITE_OSCILLATOR:
            coeffs = np.zeros(k + 1)
            coeffs[k] = 1.0
            return hermval(u, coeffs) * np.exp(-(u**2) / 2.0)
        if self.kind is RealizationKind.BOX_OPEN:
            return np.cos(k * u)
        return np.sin((k + 1) * u)


def hermite_oscillator(length_scale=1.0):
    return Realization(RealizationKind.HERMITE_OSCILLATOR, length_scale)


def box_open(length_scale=1.0):
    return Realization(RealizationKind.BOX_OPEN, length_scale)


def box_closed(length_scale=1.0):
    return Realization(RealizationKind.BOX_CLOSED, length_scale)


@dataclass(frozen=True)
class Axis:
    """One grid axis: name, inclusive range, sample count."""

    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2 or self.hi <= self.lo:
            raise ValueError(f"bad axis {self.name}: need hi > lo and count >= 2")

    def points(self):
        return np.linspace(self.lo, self.hi, self.count)

    @property
    def step(self):
        return (self.hi - self.lo) / (self.count - 1)


def parse_grid(spec):
    """Parse a grid spec like "x:-4:4:81,y:-4:4:81" into a list of Axis."""
    axes = []
    for part in spec.split(","):
        fields = part.strip().split(":")
        if len(fields) != 4:
            raise ValueError(f"bad axis spec {part!r} (want name:lo:hi:count)")
        name, lo, hi, count = fields
        axes.append(Axis(name, float(lo), float(hi), int(count)))
    return axes


@dataclass
class DensityGrid:
    """Sampled non-negative density with its declared normalization."""

    axes: list
    values: np.ndarray
    normalization: float

    def riemann_integral(self):
        cell = 1.0
        for ax in self.axes:
            cell *= ax.step
        return float(self.values.sum() * cell)

    def write_csv(self, path):
        grids = np.meshgrid(*[ax.points() for ax in self.axes], indexing="ij")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([ax.name for ax in self.axes] + ["value"])
            flat = [g.ravel() for g in grids] + [self.values.ravel()]
            for row in zip(*flat):
                writer.writerow([f"{v:.12e}" for v in row])

    def metadata(self):
        return {
            "format_version": "1",
            "kind": "density_grid",
            "axes": [
                {"name": ax.name, "lo": ax.lo, "hi": ax.hi, "count": ax.count}
                for ax in self.axes
            ],
            "normalization": self.normalization,
            "riemann_integral": self.riemann_integral(),
        }

    def write_metadata(self, path):
        with open(path, "w") as fh:
            json.dump(self.metadata(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def realize_polynomial(poly, realization):
    """Evaluator R^(n*d) -> R for an expanded polynomial.

    Returns a callable taking points of shape (..., n, d); coordinates are
    divided by the realization length scale before the orbital functions are
    applied.
    """
    n, d = poly.n, poly.d
    terms = [(mono, float(coeff)) for mono, coeff in poly.terms.items()]

    def evaluate(points):
        x = np.asarray(points, dtype=float)
        if x.shape[-2:] != (n, d):
            raise ValueError(f"points must have shape (..., {n}, {d})")
        u = x / realization.length_scale
        cache = {}
        total = np.zeros(x.shape[:-2])
        for mono, coeff in terms:
            factor = np.full(x.shape[:-2], coeff)
            for i in range(n):
                for ax in range(d):
                    k = mono[i * d + ax]
                    key = (i, ax, k)
                    vals = cache.get(key)
                    if vals is None:
                        vals = realization.orbital_values(k, u[..., i, ax])
                        cache[key] = vals
                    factor = factor * vals
            total = total + factor
        return total

    return evaluate


@lru_cache(maxsize=None)
def _pair_overlaps(max_index):
    """O[a, b] = integral of phi_a phi_b, by Gauss-Hermite quadrature.

    The integrand H_a H_b exp(-x^2) is a polynomial of degree a + b times
    the quadrature weight, so 40 nodes are exact up to degree 79.
    """
    if 2 * max_index > 2 * GAUSS_HERMITE_NODES - 1:
        raise ValueError("orbital index too large for the quadrature order")
    nodes, weights = np.polynomial.hermite.hermgauss(GAUSS_HERMITE_NODES)
    table = np.empty((max_index + 1, GAUSS_HERMITE_NODES))
    for k in range(max_index + 1):
        coeffs = np.zeros(k + 1)
        coeffs[k] = 1.0
        table[k] = hermval(nodes, coeffs)
    return np.einsum("i,ai,bi->ab", weights, table, table)


def _reduced_density_weights(poly, retained):
    """Contract |Psi|^2 over all particles except the retained ones.

    Returns (weights, norm): weights maps (bra indices, ket indices) of the
    retained particles to the spectator-integrated coefficient, and norm is
    the full overlap <Psi|Psi>.  Everything via the quadrature pair overlaps.
    """
    n, d = poly.n, poly.d
    max_index = max((max(m) for m in poly.terms), default=0)
    overlaps = _pair_overlaps(max_index)
    terms = [(m, float(c)) for m, c in poly.terms.items()]
    weights = {}
    norm = 0.0
    spectators = [i for i in range(n) if i not in retained]
    for ma, ca in terms:
        for mb, cb in terms:
            full = ca * cb
            for i in range(n):
                for ax in range(d):
                    full *= overlaps[ma[i * d + ax], mb[i * d + ax]]
            norm += full
            partial = ca * cb
            for i in spectators:
                for ax in range(d):
                    partial *= overlaps[ma[i * d + ax], mb[i * d + ax]]
            if partial:
                key = (
                    tuple(ma[i * d : (i + 1) * d] for i in retained),
                    tuple(mb[i * d : (i + 1) * d] for i in retained),
                )
                weights[key] = weights.get(key, 0.0) + partial
    return weights, norm


def _require_oscillator(realization):
    if realization.kind is not RealizationKind.HERMITE_OSCILLATOR:
        raise ValueError(
            "densities are implemented for the oscillator realization only"
        )


def one_particle_density(poly, realization, axes):
    """rho(x) = N * integral of |Psi|^2 over particles 2..N, normalized.

    The grid is over one particle's d coordinates (in units of the length
    scale); the result integrates to N over the whole space.
    """
    _require_oscillator(realization)
    if poly.is_zero:
        raise ValueError("zero polynomial has no normalizable density")
    if len(axes) != poly.d:
        raise ValueError(f"need {poly.d} grid axes, got {len(axes)}")
    weights, norm = _reduced_density_weights(poly, retained=(0,))
    scale = realization.length_scale
    pts = np.meshgrid(*[ax.points() / scale for ax in axes], indexing="ij")
    cache = {}

    def orbital_product(indices):
        vals = cache.get(indices)
        if vals is None:
            vals = np.ones_like(pts[0])
            for ax in range(poly.d):
                vals = vals * realization.orbital_values(indices[ax], pts[ax])
            cache[indices] = vals
        return vals

    values = np.zeros_like(pts[0])
    for ((a,), (b,)), w in weights.items():
        values += w * orbital_product(a) * orbital_product(b)
    values *= poly.n / (norm * scale**poly.d)
    return _finalize_density(axes, values, normalization=float(poly.n))


def two_particle_density_cut(poly, realization, axes):
    """Two-particle density along the diagonal cut x_1 = (x,..,x), x_2 = (y,..,y).

    The first grid axis drives all coordinates of the first retained
    particle, the second those of the second; remaining particles are traced
    out.  The declared normalization is the Riemann sum over the cut (the
    full 2d-dimensional density would integrate to N(N-1)).
    """
    _require_oscillator(realization)
    if poly.is_zero:
        raise ValueError("zero polynomial has no normalizable density")
    if poly.n < 2:
        raise ValueError("two-particle density needs at least two particles")
    if len(axes) != 2:
        raise ValueError("the diagonal cut uses exactly two grid axes")
    weights, norm = _reduced_density_weights(poly, retained=(0, 1))
    scale = realization.length_scale
    xs, ys = np.meshgrid(*[ax.points() / scale for ax in axes], indexing="ij")
    cache = {}

    def orbital_product(indices, pts):
        key = (indices, pts is ys)
        vals = cache.get(key)
        if vals is None:
            vals = np.ones_like(pts)
            for ax in range(poly.d):
                vals = vals * realization.orbital_values(indices[ax], pts)
            cache[key] = vals
        return vals

    values = np.zeros_like(xs)
    for ((a1, a2), (b1, b2)), w in weights.items():
        values += (
            w
            * orbital_product(a1, xs)
            * orbital_product(b1, xs)
            * orbital_product(a2, ys)
            * orbital_product(b2, ys)
        )
    values *= poly.n * (poly.n - 1) / (norm * scale ** (2 * poly.d))
    grid = _finalize_density(axes, values, normalization=0.0)
    grid.normalization = grid.riemann_integral()
    return grid


def _finalize_density(axes, values, normalization):
    floor = values.min()
    if floor < -1e-10 * max(values.max(), 1.0):
        raise InternalConsistencyError(
            f"density came out negative ({floor}); quadrature inconsistency"
        )
    return DensityGrid(
        axes=list(axes), values=np.maximum(values, 0.0), normalization=normalization
    )
