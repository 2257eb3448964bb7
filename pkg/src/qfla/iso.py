"""Isomorphism testing for N(Q_n, m, r).

Two gluings with the same (n, m, r) are isomorphic exactly when their
annihilator matrices M_i = (-B_i^t | I) are monomially equivalent:
E M_1 K = M_2 for an invertible E and a monomial K.  The search reduces to a
permutation sweep plus an exact linear solve for the diagonal scales, and
every positive answer is certified by an explicit algebra isomorphism.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .automorphisms import AutCandidate, extend_endomorphism
from .builder import QuasiQnSpec, RelatedMatrix, build_quasi, related_matrix_of
from .liecore import bracket_preserving
from .linalg import (
    Matrix,
    MonomialMatrix,
    ONE,
    ZERO,
    inverse,
    nullspace,
    rank,
    rref,
)

DEFAULT_MAX_COPIES = 8


class SearchTooLarge(RuntimeError):
    """The permutation sweep over m! candidates was refused; raise the cap via
    the QFLA_MAX_M environment variable to force it."""


class NeedsIrrationalScalars(RuntimeError):
    """Defensive: no rational (alpha, beta) solves alpha^{n-2} beta^2 = k.

    Unreachable for odd n (gcd(n-2, 2) = 1 makes the exponent lattice full),
    kept so a future even-exponent variant fails loudly instead of silently.
    """


@dataclass(frozen=True)
class EquivalenceWitness:
    """Certificate for E M1 K = M2: the invertible factor and the monomial."""

    E: Matrix
    K: MonomialMatrix


@dataclass(frozen=True)
class NotEquivalent:
    reason: str


def kernel_subspace(R: RelatedMatrix) -> List[Matrix]:
    """Canonical kernel basis of the annihilator (full space when m = r)."""
    return nullspace(R.matrix)


def _max_copies() -> int:
    raw = os.environ.get("QFLA_MAX_M")
    return int(raw) if raw else DEFAULT_MAX_COPIES


def _generic_nonzero_point(basis: List[Matrix], m: int) -> Optional[tuple]:
    """A point of span(basis) with every coordinate nonzero, or None.

    Coordinate j vanishes on the whole span iff it vanishes on every basis
    vector; otherwise sum_k t^k v_k has coordinate j given by a nonzero
    polynomial in t, so scanning small integers t finds an all-nonzero point.
    """
    if not basis:
        return None
    for j in range(m):
        if all(v.entry(j, 0) == 0 for v in basis):
            return None
    t = 1
    while True:
        point = tuple(
            sum((Fraction(t) ** k) * v.entry(j, 0) for k, v in enumerate(basis))
            for j in range(m)
        )
        if all(x != 0 for x in point):
            return point
        t += 1


def monomial_equivalence(
    R1: RelatedMatrix, R2: RelatedMatrix
) -> Union[EquivalenceWitness, NotEquivalent]:
    """Find (E, K) with E R1 K = R2, or explain why none exists.

    K is monomial, so E exists for a given K exactly when K maps ker(R2) onto
    ker(R1); that is linear in the diagonal of K once its permutation is
    fixed.  Permutations are swept in lexicographic order and the first
    admissible one is returned, which makes the witness deterministic.
    """
    if (R1.m, R1.r) != (R2.m, R2.r):
        raise ValueError("annihilators must share (m, r)")
    m, r = R1.m, R1.r
    if m > _max_copies():
        raise SearchTooLarge(
            f"m = {m} exceeds the permutation sweep cap {_max_copies()}"
        )
    if m == r:
        return EquivalenceWitness(
            Matrix([[] for _ in range(0)], cols=0), MonomialMatrix.identity(m)
        )
    M1, M2 = R1.matrix, R2.matrix
    ker2 = kernel_subspace(R2)
    for perm in itertools.permutations(range(m)):
        eq_rows = []
        for v in ker2:
            for row in range(m - r):
                eq_rows.append([M1.entry(row, perm[j]) * v.entry(j, 0) for j in range(m)])
        solutions = nullspace(Matrix(eq_rows, cols=m))
        point = _generic_nonzero_point(solutions, m)
        if point is None:
            continue
        K = MonomialMatrix(m, tuple(perm), point)
        prod = M1 * K.densify()
        res = rref(prod)
        piv = list(res.pivot_cols)
        E = M2.submatrix(range(m - r), piv) * inverse(prod.submatrix(range(m - r), piv))
        if E * prod != M2:
            raise AssertionError("kernel match did not yield a row-space match")
        return EquivalenceWitness(E, K)
    return NotEquivalent(
        "no copy permutation makes the annihilator kernels match under a monomial map"
    )


# -- algebra-level certificates ----------------------------------------------------


def _prime_valuations(k: int) -> dict:
    """Prime factorization {p: exponent} of a positive integer, trial division."""
    out = {}
    p = 2
    while p * p <= k:
        while k % p == 0:
            out[p] = out.get(p, 0) + 1
            k //= p
        p += 1 if p == 2 else 2
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def split_scale(k: Fraction, n: int) -> Tuple[Fraction, Fraction]:
    """Rational (alpha, beta) with alpha^{n-2} beta^2 = k, k nonzero, n odd.

    Solved prime by prime: (n-2) a_p + 2 b_p = v_p(k) with a_p = v_p mod 2.
    The sign of k goes into alpha, which is safe because n - 2 is odd.
    """
    if k == 0:
        raise ValueError("scale must be nonzero")
    if (n - 2) % 2 == 0:
        raise NeedsIrrationalScalars(f"exponents ({n - 2}, 2) are not coprime")
    vals: dict = {}
    for p, v in _prime_valuations(abs(k.numerator)).items():
        vals[p] = vals.get(p, 0) + v
    for p, v in _prime_valuations(k.denominator).items():
        vals[p] = vals.get(p, 0) - v
    alpha = ONE if k > 0 else -ONE
    beta = ONE
    for p, v in vals.items():
        a = v % 2
        b = (v - (n - 2) * a) // 2
        alpha *= Fraction(p) ** a
        beta *= Fraction(p) ** b
    return alpha, beta


def build_algebra_witness(
    spec1: QuasiQnSpec, spec2: QuasiQnSpec, K: MonomialMatrix
) -> Matrix:
    """Turn an annihilator certificate into an explicit isomorphism matrix.

    Column j of K pairs copy pi(j)+1 of the source with copy j+1 of the
    target and prescribes the scale its top vector must pick up; generators
    are mapped by e_{s0} -> alpha_s e_{sigma(s),0}, e_{s1} -> beta_s
    e_{sigma(s),1} with alpha^{n-2} beta^2 equal to that scale, and the rest
    of the map follows from the bracket recurrences.
    """
    m, n = spec1.m, spec1.n
    sigma = [0] * (m + 1)  # sigma[s] = target copy of source copy s
    for j in range(m):
        sigma[K.perm[j] + 1] = j + 1
    target = build_quasi(spec2)
    e0 = []
    e1 = []
    for s in range(1, m + 1):
        k_s = K.scale[sigma[s] - 1]
        alpha, beta = split_scale(k_s, n)
        v0 = [ZERO] * spec2.dim
        v0[spec2.gen_index(sigma[s], 0)] = alpha
        v1 = [ZERO] * spec2.dim
        v1[spec2.gen_index(sigma[s], 1)] = beta
        e0.append(v0)
        e1.append(v1)
    return extend_endomorphism(spec1, target, AutCandidate.from_vectors(e0, e1))


@dataclass(frozen=True)
class IsoVerdict:
    """Outcome of the isomorphism decision.

    On a positive answer both certificates are present and verified: the
    matrix pair (E, K) and the algebra map sending the first basis to the
    second.
    """

    isomorphic: bool
    reason: Optional[str] = None
    equivalence: Optional[EquivalenceWitness] = None
    map: Optional[Matrix] = None


def iso_decide(spec1: QuasiQnSpec, spec2: QuasiQnSpec) -> IsoVerdict:
    """Decide whether two gluings give isomorphic algebras."""
    if (spec1.n, spec1.m, spec1.r) != (spec2.n, spec2.m, spec2.r):
        return IsoVerdict(
            False,
            reason=(
                f"parameters differ: ({spec1.n},{spec1.m},{spec1.r}) vs "
                f"({spec2.n},{spec2.m},{spec2.r})"
            ),
        )
    outcome = monomial_equivalence(related_matrix_of(spec1), related_matrix_of(spec2))
    if isinstance(outcome, NotEquivalent):
        return IsoVerdict(False, reason=outcome.reason)
    witness = build_algebra_witness(spec1, spec2, outcome.K)
    L1, L2 = build_quasi(spec1), build_quasi(spec2)
    if rank(witness) != L1.dim or not bracket_preserving(L1, L2, witness):
        raise AssertionError("certificate construction produced a non-isomorphism")
    return IsoVerdict(True, equivalence=outcome, map=witness)
