"""Linear operators on a Lie algebra and the homogeneous-pair admissibility tests.

An operator is admissible for a pair (g, k) when it preserves k and commutes
with the adjoint action of the subgroup modulo k.  For a connected subgroup
the infinitesimal conditions suffice; for a declared non-connected subgroup
the caller must supply component representatives, otherwise the verdict is
scoped to the identity component and the report says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .algebra import LieAlgebra, Subalgebra
from .errors import (
    DimensionMismatch,
    ImageOutsideAlgebra,
    InvalidComponentRep,
    LieCheckError,
    MissingComplement,
    RuleIncomplete,
)
from .exact import ExactMatrix, GaussianRational, Subspace, rref, subspace_intersection
from .algebra import _SpanSolver


class LinearOperator:
    """A real linear operator on an algebra, as a matrix in the basis.

    The same matrix read over Q(i) coordinates is the complex-linear
    extension, so :meth:`apply` accepts both rational and Gaussian-rational
    coordinate vectors.
    """

    __slots__ = ("alg", "matrix", "ad_generator")

    def __init__(self, alg: LieAlgebra, matrix: ExactMatrix, *, ad_generator=None):
        if matrix.rows != alg.dim or matrix.cols != alg.dim:
            raise DimensionMismatch("operator matrix must be dim x dim")
        for e in matrix.entries:
            if isinstance(e, GaussianRational):
                raise LieCheckError("operator matrices are real; got a Q(i) entry")
        self.alg = alg
        self.matrix = matrix
        self.ad_generator = tuple(ad_generator) if ad_generator is not None else None

    @classmethod
    def identity(cls, alg: LieAlgebra) -> "LinearOperator":
        return cls(alg, ExactMatrix.identity(alg.dim))

    @classmethod
    def zero(cls, alg: LieAlgebra) -> "LinearOperator":
        return cls(alg, ExactMatrix.zeros(alg.dim, alg.dim))

    def apply(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.alg, self.matrix @ other.matrix)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        if other.alg is not self.alg:
            raise DimensionMismatch("operators act on different algebras")
        return LinearOperator(self.alg, self.matrix + other.matrix)

    def scaled(self, s) -> "LinearOperator":
        return LinearOperator(self.alg, self.matrix.scaled(s))

    def __eq__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.alg is other.alg and self.matrix == other.matrix

    def __hash__(self):
        return hash((id(self.alg), self.matrix))

    def __repr__(self):
        return f"LinearOperator(on {self.alg.name!r})"


class HomogeneousPair:
    """A pair (g, k) with optional split complement and component data."""

    __slots__ = ("alg", "k", "m", "connected", "component_reps")

    def __init__(
        self,
        alg: LieAlgebra,
        k: Subalgebra,
        *,
        m: Optional[Subspace] = None,
        connected: bool = True,
        component_reps: Sequence[ExactMatrix] = (),
    ):
        if k.parent is not alg:
            raise LieCheckError("subalgebra does not belong to the given algebra")
        if m is not None:
            if m.ambient_dim != alg.dim:
                raise DimensionMismatch("complement lives in the wrong ambient space")
            if k.dim + m.dim != alg.dim:
                raise LieCheckError(
                    f"complement dimension {m.dim} does not complete k "
                    f"(dim {k.dim}) to dim {alg.dim}"
                )
            if subspace_intersection(k.space, m).dim != 0:
                raise LieCheckError("complement intersects the subalgebra")
        reps = tuple(component_reps)
        for idx, rep in enumerate(reps):
            self._validate_rep(alg, k, idx, rep)
        self.alg = alg
        self.k = k
        self.m = m
        self.connected = bool(connected)
        self.component_reps = reps

    @staticmethod
    def _validate_rep(alg: LieAlgebra, k: Subalgebra, idx: int, rep: ExactMatrix):
        n = alg.dim
        if rep.rows != n or rep.cols != n:
            raise InvalidComponentRep(f"component rep #{idx} must be {n}x{n}")
        _, pivots = rref(rep)
        if len(pivots) != n:
            raise InvalidComponentRep(f"component rep #{idx} is singular")
        for row in k.space.vectors():
            if rep.apply(row) not in k.space:
                raise InvalidComponentRep(f"component rep #{idx} does not preserve k")
        for a in range(n):
            ea = alg.basis_vector(a)
            for b in range(a + 1, n):
                eb = alg.basis_vector(b)
                lhs = rep.apply(alg.bracket(ea, eb))
                rhs = alg.bracket(rep.apply(ea), rep.apply(eb))
                if lhs != rhs:
                    raise InvalidComponentRep(
                        f"component rep #{idx} is not a bracket automorphism"
                    )

    def __repr__(self):
        extra = "" if self.m is None else f", split m dim {self.m.dim}"
        return f"HomogeneousPair({self.alg.name!r}, k dim {self.k.dim}{extra})"


@dataclass(frozen=True)
class VerdictReport:
    """Outcome of a check, with an exact witness when it fails.

    ``scope`` is ``"full"`` when the verdict covers the whole subgroup and
    ``"identity_component"`` when the subgroup was declared non-connected and
    no component representatives were supplied, so only the infinitesimal
    conditions could be decided.
    """

    holds: bool
    scope: str
    clauses: tuple
    failed_clause: Optional[str] = None
    witness: Optional[dict] = field(default=None)


def _scope_of(pair: HomogeneousPair) -> str:
    if pair.connected or pair.component_reps:
        return "full"
    return "identity_component"


def check_admissible(pair: HomogeneousPair, op: LinearOperator) -> VerdictReport:
    """Decide membership in the admissible set of the pair.

    Clause (a): the operator preserves k.  Clause (b): it commutes with
    ad_z modulo k for every basis element z of k.  Clause (c), when component
    representatives are declared: it commutes with each of them modulo k.
    For a connected subgroup (a) and (b) suffice.
    """
    alg = pair.alg
    if op.matrix.rows != alg.dim:
        raise DimensionMismatch("operator dimension does not match the pair")
    scope = _scope_of(pair)
    clauses = ["preserves_k", "commutes_with_ad_k"]
    if pair.component_reps:
        clauses.append("commutes_with_component_reps")

    for x in pair.k.space.vectors():
        img = op.apply(x)
        if img not in pair.k.space:
            return VerdictReport(
                False, scope, tuple(clauses), "preserves_k",
                {"vector": x, "image": img},
            )
    basis = [alg.basis_vector(j) for j in range(alg.dim)]
    for z in pair.k.space.vectors():
        for bj in basis:
            diff_vec = _sub(op.apply(alg.bracket(z, bj)), alg.bracket(z, op.apply(bj)))
            if diff_vec not in pair.k.space:
                return VerdictReport(
                    False, scope, tuple(clauses), "commutes_with_ad_k",
                    {"z": z, "v": bj, "value": diff_vec},
                )
    for idx, rep in enumerate(pair.component_reps):
        for bj in basis:
            diff_vec = _sub(rep.apply(op.apply(bj)), op.apply(rep.apply(bj)))
            if diff_vec not in pair.k.space:
                return VerdictReport(
                    False, scope, tuple(clauses), "commutes_with_component_reps",
                    {"rep_index": idx, "v": bj, "value": diff_vec},
                )
    return VerdictReport(True, scope, tuple(clauses))


def check_split_admissible(pair: HomogeneousPair, op: LinearOperator) -> VerdictReport:
    """The stricter split test: k inside ker, complement invariant, admissible."""
    if pair.m is None:
        raise MissingComplement("split admissibility needs a declared complement")
    scope = _scope_of(pair)
    clauses = ("k_in_kernel", "m_invariant", "admissible")
    zero = tuple(Fraction(0) for _ in range(pair.alg.dim))
    for x in pair.k.space.vectors():
        img = op.apply(x)
        if img != zero:
            return VerdictReport(False, scope, clauses, "k_in_kernel",
                                 {"vector": x, "image": img})
    for x in pair.m.vectors():
        img = op.apply(x)
        if img not in pair.m:
            return VerdictReport(False, scope, clauses, "m_invariant",
                                 {"vector": x, "image": img})
    inner = check_admissible(pair, op)
    if not inner.holds:
        return VerdictReport(False, inner.scope, clauses, "admissible", inner.witness)
    return VerdictReport(True, inner.scope, clauses)


def _sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# operator constructors
# ---------------------------------------------------------------------------

def operator_from_rules(alg: LieAlgebra, rules: Mapping[str, Sequence]) -> LinearOperator:
    """Operator from a basis-label -> image table; every label must appear."""
    missing = [lab for lab in alg.basis_labels if lab not in rules]
    if missing:
        raise RuleIncomplete(missing)
    for lab in rules:
        if lab not in alg.basis_labels:
            raise LieCheckError(f"rule for unknown basis label {lab!r}")
    n = alg.dim
    images = [tuple(rules[lab]) for lab in alg.basis_labels]
    for img in images:
        if len(img) != n:
            raise DimensionMismatch("rule image has the wrong length")
    entries = [images[j][k] for k in range(n) for j in range(n)]
    return LinearOperator(alg, ExactMatrix(n, n, entries))


def operator_ad(alg: LieAlgebra, d: Sequence) -> LinearOperator:
    """The inner operator v -> [d, v]."""
    return LinearOperator(alg, alg.ad_matrix(d), ad_generator=d)


def _multiplication_operator(alg: LieAlgebra, image) -> LinearOperator:
    if alg.matrix_generators is None:
        raise LieCheckError(
            f"algebra {alg.name!r} was not built from matrix generators"
        )
    solver = _SpanSolver(alg.matrix_generators)
    n = alg.dim
    columns = []
    for j, gen in enumerate(alg.matrix_generators):
        coords = solver.coords(image(gen))
        if coords is None:
            raise ImageOutsideAlgebra(alg.basis_labels[j])
        columns.append(coords)
    entries = [columns[j][k] for k in range(n) for j in range(n)]
    return LinearOperator(alg, ExactMatrix(n, n, entries))


def operator_left_mult(alg: LieAlgebra, a: ExactMatrix) -> LinearOperator:
    """X -> A X on a matrix algebra, expressed in the algebra basis."""
    return _multiplication_operator(alg, lambda x: a @ x)


def operator_right_mult(alg: LieAlgebra, b: ExactMatrix) -> LinearOperator:
    """X -> X B on a matrix algebra, expressed in the algebra basis."""
    return _multiplication_operator(alg, lambda x: x @ b)


def operator_sandwich(alg: LieAlgebra, a: ExactMatrix, b: ExactMatrix) -> LinearOperator:
    """X -> A X B on a matrix algebra, expressed in the algebra basis."""
    return _multiplication_operator(alg, lambda x: a @ x @ b)
