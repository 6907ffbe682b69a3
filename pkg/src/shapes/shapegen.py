"""Constructive generation of all N!^(d-1) shapes, level by level.

Per grade, the trivial span is every lower shape times every Euler-boson
monomial of the complementary degree; the new shapes are the orthogonal
complement of that span, with the level's Slater/permanent states taken as
orthonormal coordinates.  The complement dimension must match the shape
polynomial coefficient at every grade (hard assertion).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .counting import (
    GradedQPolynomial,
    Statistics,
    FERMION,
    shape_polynomial,
    total_shape_count,
)
from .deflation import LevelBasis, deflate_sparse
from .errors import InternalConsistencyError
from .polycore import (
    SlaterState,
    _as_exact,
    enumerate_euler_monomials,
    format_fraction,
    parse_fraction,
)

DEFAULT_STATE_CAP = 100_000
STATE_CAP_ENV_VAR = "SHAPES_STATE_CAP"


def default_state_cap():
    """Configured level-size guard; overridable via SHAPES_STATE_CAP."""
    value = os.environ.get(STATE_CAP_ENV_VAR)
    return int(value) if value else DEFAULT_STATE_CAP


def _int_rows(vec):
    """Scale a sparse exact-rational vector to integers with content 1."""
    if not vec:
        return {}
    denom_lcm = 1
    for c in vec.values():
        den = c.denominator
        denom_lcm = denom_lcm * den // gcd(denom_lcm, den)
    ints = {i: int(c * denom_lcm) for i, c in vec.items()}
    content = 0
    for v in ints.values():
        content = gcd(content, v)
    return {i: v // content for i, v in ints.items()}


def _canonical_sign(vec):
    """Flip signs so the entry at the lowest index is positive."""
    if not vec:
        return vec
    if vec[min(vec)] < 0:
        return {i: -v for i, v in vec.items()}
    return vec


class _Echelon:
    """Incremental exact row echelon over the integers.

    Pivoting is by position only (first nonzero coordinate); rows are kept
    content-stripped with a positive pivot, so the structure is deterministic
    for a given insertion order.
    """

    def __init__(self, ambient_dim):
        self.ambient_dim = ambient_dim
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    def insert(self, vec):
        """Reduce a sparse integer vector against the rows; store if nonzero.

        Returns the new pivot position, or None if the vector was dependent.
        """
        while vec:
            p = min(vec)
            row = self.rows.get(p)
            if row is None:
                vec = _canonical_sign(_int_rows_from_int(vec))
                self.rows[p] = vec
                return p
            a, b = vec[p], row[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {c: fa * v for c, v in vec.items()}
            for c, rv in row.items():
                nv = new.get(c, 0) - fb * rv
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            vec = _int_rows_from_int(new)
        return None

    def nullspace(self):
        """Canonical basis of {w : rows . w = 0}, one vector per free column.

        Each vector has a 1 at its free column and is back-substituted
        through the pivot rows, then scaled to integer content 1 with the
        first nonzero entry positive.  Ordered by free column ascending.
        """
        pivots = sorted(self.rows)
        pivot_set = set(pivots)
        out = []
        for f in range(self.ambient_dim):
            if f in pivot_set:
                continue
            x = {f: Fraction(1)}
            for p in reversed([p for p in pivots if p < f]):
                row = self.rows[p]
                s = Fraction(0)
                for c, v in row.items():
                    if c != p:
                        xc = x.get(c)
                        if xc is not None:
                            s += v * xc
                if s:
                    x[p] = -s / row[p]
            out.append(_canonical_sign(_int_rows(x)))
        return out


def _int_rows_from_int(vec):
    content = 0
    for v in vec.values():
        content = gcd(content, v)
    if content in (0, 1):
        return vec
    return {i: v // content for i, v in vec.items()}


def orthogonal_complement(vectors, ambient_dim):
    """Exact basis of the orthogonal complement of a span of vectors.

    Works in the standard dot product on the given coordinates.  The output
    is in canonical normalized form (integer entries, content 1, first
    nonzero positive), ordered by free column, and deterministic; an empty
    input yields the standard basis.
    """
    ech = _Echelon(ambient_dim)
    for v in vectors:
        if isinstance(v, dict):
            sparse = {i: Fraction(c) for i, c in v.items() if c}
        else:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match the ambient dimension")
            sparse = {i: Fraction(c) for i, c in enumerate(v) if c}
        ech.insert(_int_rows(sparse))
    null = ech.nullspace()
    return [
        [Fraction(vec.get(i, 0)) for i in range(ambient_dim)] for vec in null
    ]


@dataclass(frozen=True)
class ShapeRecord:
    """One shape: a grade, a stable id, and its exact coefficient vector.

    Coefficients are sparse over the level basis of the shape's grade, in
    canonical normalized form (integer values, content 1, first nonzero
    positive).
    """

    grade: int
    index: int
    statistics: Statistics
    coeffs: dict

    @property
    def id(self):
        return f"{self.grade}:{self.index}"

    def materialize(self, basis):
        if basis.grade != self.grade:
            raise ValueError("basis grade does not match the shape grade")
        return basis.materialize(self.coeffs)

    def support_size(self):
        return len(self.coeffs)


@dataclass
class ShapeCatalog:
    """All shapes of (n, d, statistics) up to max_grade, grouped by grade."""

    n: int
    d: int
    statistics: Statistics
    shape_poly: GradedQPolynomial
    max_grade: int
    shapes: list
    state_cap: int = DEFAULT_STATE_CAP
    _bases: dict = field(default_factory=dict, repr=False)

    def level_basis(self, grade):
        basis = self._bases.get(grade)
        if basis is None:
            basis = LevelBasis(
                self.n, self.d, grade, self.statistics, max_states=self.state_cap
            )
            self._bases[grade] = basis
        return basis

    def shapes_at(self, grade):
        return [s for s in self.shapes if s.grade == grade]

    def find(self, shape_id):
        for s in self.shapes:
            if s.id == shape_id:
                return s
        raise KeyError(f"no shape with id {shape_id!r}")

    @property
    def total_count(self):
        return len(self.shapes)

    def is_complete(self):
        return (
            self.max_grade >= self.shape_poly.degree()
            and self.total_count == total_shape_count(self.n, self.d)
        )

    def to_json_obj(self):
        shape_objs = []
        for s in self.shapes:
            basis = self.level_basis(s.grade)
            indices = sorted(s.coeffs)
            shape_objs.append(
                {
                    "id": s.id,
                    "grade": s.grade,
                    "index": s.index,
                    "basis": [
                        [list(orb) for orb in basis.states[i].orbitals]
                        for i in indices
                    ],
                    "coeffs": [format_fraction(s.coeffs[i]) for i in indices],
                }
            )
        return {
            "format_version": "1",
            "kind": "shape_catalog",
            "n": self.n,
            "d": self.d,
            "statistics": self.statistics.value,
            "max_grade": self.max_grade,
            "shape_polynomial": self.shape_poly.to_json_obj(),
            "shapes": shape_objs,
        }

    @classmethod
    def from_json_obj(cls, obj, state_cap=None):
        stat = Statistics.parse(obj["statistics"])
        catalog = cls(
            n=obj["n"],
            d=obj["d"],
            statistics=stat,
            shape_poly=GradedQPolynomial.from_json_obj(obj["shape_polynomial"]),
            max_grade=obj["max_grade"],
            shapes=[],
            state_cap=state_cap if state_cap is not None else default_state_cap(),
        )
        for entry in obj["shapes"]:
            basis = catalog.level_basis(entry["grade"])
            coeffs = {}
            for orbitals, coeff in zip(entry["basis"], entry["coeffs"]):
                state = SlaterState.from_orbitals(orbitals, stat)
                coeffs[basis.state_index(state)] = _as_exact(parse_fraction(coeff))
            catalog.shapes.append(
                ShapeRecord(
                    grade=entry["grade"],
                    index=entry["index"],
                    statistics=stat,
                    coeffs=coeffs,
                )
            )
        return catalog


def generate_shapes(n, d, statistics=FERMION, max_grade=None, state_cap=None):
    """Build the full shape catalog grade by grade.

    Ground-grade shapes are the basis states themselves.  At every higher
    grade the trivial span is deflated lower shapes times Euler monomials,
    and the complement dimension must equal the shape polynomial coefficient
    (else an InternalConsistencyError is raised with diagnostics).  The
    result is deterministic: two runs produce identical catalogs.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if state_cap is None:
        state_cap = default_state_cap()
    poly = shape_polynomial(n, d, statistics)
    top = poly.degree()
    if max_grade is None:
        max_grade = top
    catalog = ShapeCatalog(
        n=n,
        d=d,
        statistics=statistics,
        shape_poly=poly,
        max_grade=max_grade,
        shapes=[],
        state_cap=state_cap,
    )
    ground = poly.lowest_degree()
    materialized = {}
    euler_polys = {}
    for grade in range(ground, max_grade + 1):
        expected = poly.coefficient(grade)
        basis = catalog.level_basis(grade)
        if grade == ground:
            if len(basis) != expected:
                raise InternalConsistencyError(
                    f"ground level at grade {grade} has {len(basis)} states but "
                    f"the shape polynomial predicts {expected}"
                )
            new_vectors = [{i: 1} for i in range(len(basis))]
        else:
            ech = _Echelon(len(basis))
            for rec in catalog.shapes:
                spoly = materialized.get(rec.id)
                if spoly is None:
                    spoly = rec.materialize(catalog.level_basis(rec.grade))
                    materialized[rec.id] = spoly
                for euler in enumerate_euler_monomials(n, d, grade - rec.grade):
                    epoly = euler_polys.get(euler)
                    if epoly is None:
                        epoly = euler.materialize()
                        euler_polys[euler] = epoly
                    vec = deflate_sparse(spoly * epoly, basis)
                    ech.insert(_int_rows(vec))
            new_vectors = ech.nullspace()
            if len(new_vectors) != expected:
                raise InternalConsistencyError(
                    f"complement dimension mismatch at grade {grade}: expected "
                    f"{expected} new shapes, found {len(new_vectors)} "
                    f"(trivial rank {ech.rank} in dimension {len(basis)})"
                )
        for idx, vec in enumerate(new_vectors):
            catalog.shapes.append(
                ShapeRecord(
                    grade=grade,
                    index=idx,
                    statistics=statistics,
                    coeffs=dict(vec),
                )
            )
    return catalog


@dataclass
class SpanReport:
    """Result of checking that shapes plus trivial products span a level."""

    grade: int
    dimension: int
    vector_count: int
    rank: int
    passed: bool
    overlap_nonzero: int
    overlap_pairs: int

    @property
    def overlap_sparsity(self):
        """Fraction of vanishing off-diagonal overlaps."""
        if self.overlap_pairs == 0:
            return 1.0
        return 1.0 - self.overlap_nonzero / self.overlap_pairs

    def __str__(self):
        status = "ok" if self.passed else "RANK DEFICIENT"
        return (
            f"grade {self.grade}: rank {self.rank}/{self.dimension} from "
            f"{self.vector_count} vectors ({status}); "
            f"{self.overlap_nonzero}/{self.overlap_pairs} off-diagonal "
            f"overlaps nonzero"
        )


def verify_span(catalog, grade):
    """Check that all shape x Euler products of one grade span the level.

    The vectors are every catalog shape of grade <= the target grade times
    every Euler monomial of the complementary degree (degree zero included,
    so the grade's own shapes participate).  Reports the exact rank and the
    sparsity of the overlap (Gram) matrix.
    """
    basis = catalog.level_basis(grade)
    vectors = []
    for rec in catalog.shapes:
        if rec.grade > grade:
            continue
        spoly = rec.materialize(catalog.level_basis(rec.grade))
        for euler in enumerate_euler_monomials(catalog.n, catalog.d, grade - rec.grade):
            vec = deflate_sparse(spoly * euler.materialize(), basis)
            vectors.append(_int_rows(vec))
    ech = _Echelon(len(basis))
    for v in vectors:
        ech.insert(dict(v))
    nonzero = 0
    for i in range(len(vectors)):
        vi = vectors[i]
        for j in range(i + 1, len(vectors)):
            vj = vectors[j]
            small, big = (vi, vj) if len(vi) <= len(vj) else (vj, vi)
            dot = sum(v * big.get(c, 0) for c, v in small.items())
            if dot:
                nonzero += 1
    pairs = len(vectors) * (len(vectors) - 1) // 2
    return SpanReport(
        grade=grade,
        dimension=len(basis),
        vector_count=len(vectors),
        rank=ech.rank,
        passed=ech.rank == len(basis),
        overlap_nonzero=nonzero,
        overlap_pairs=pairs,
    )
