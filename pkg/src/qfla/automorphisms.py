"""Automorphisms of N(Q_n, m, r).

Like derivations, an endomorphism that is multiplicative on brackets is
pinned down by the generator images e_{s0}, e_{s1}; the rest extends via
rho(e_{st}) = [rho(e_{s0}), rho(e_{s,t-1})].  This module provides the
extension, the closed-form condition battery deciding when a candidate is an
automorphism, a brute-force check, and a few automorphism factories.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence

from .builder import QuasiQnSpec, build_quasi
from .derivations import ConditionVerdict
from .liecore import LieAlgebra, bracket_preserving
from .linalg import Matrix, ONE, ZERO, rank, scalar


class ZeroScale(ValueError):
    pass


@dataclass(frozen=True)
class AutCandidate:
    """Proposed generator images: e0[s-1], e1[s-1] are the coordinate vectors
    of rho(e_{s0}) and rho(e_{s1})."""

    e0: tuple
    e1: tuple

    @staticmethod
    def from_vectors(e0: Sequence[Sequence], e1: Sequence[Sequence]) -> "AutCandidate":
        return AutCandidate(
            tuple(tuple(scalar(x) for x in v) for v in e0),
            tuple(tuple(scalar(x) for x in v) for v in e1),
        )

    def validate(self, shape: QuasiQnSpec, target_dim: int) -> None:
        if len(self.e0) != shape.m or len(self.e1) != shape.m:
            raise ValueError(f"need one image pair per copy ({shape.m})")
        for v in self.e0 + self.e1:
            if len(v) != target_dim:
                raise ValueError(f"image vectors must have length {target_dim}")


def extend_endomorphism(
    shape: QuasiQnSpec, target: LieAlgebra, candidate: AutCandidate
) -> Matrix:
    """Extend generator images to a map defined on the whole source basis.

    ``shape`` fixes the source basis layout; the images live in ``target``
    (the same algebra for automorphism checking, a second one with equal
    (n, m, r) when testing maps between two gluings).  Columns follow
    rho(e_{st}) = [rho(e_{s0}), rho(e_{s,t-1})] for 2 <= t <= n-1 and
    rho(e_{tn}) = -[rho(e_{t1}), rho(e_{t,n-1})] for tops.
    """
    candidate.validate(shape, target.dim)
    n = shape.n
    cols: List[list] = [None] * shape.dim
    for s in range(1, shape.m + 1):
        cols[shape.gen_index(s, 0)] = list(candidate.e0[s - 1])
        cols[shape.gen_index(s, 1)] = list(candidate.e1[s - 1])
        for t in range(2, n):
            cols[shape.gen_index(s, t)] = target.bracket(
                cols[shape.gen_index(s, 0)], cols[shape.gen_index(s, t - 1)]
            )
    for t in range(1, shape.r + 1):
        w = target.bracket(cols[shape.gen_index(t, 1)], cols[shape.gen_index(t, n - 1)])
        cols[shape.top_index(t)] = [-x for x in w]
    return Matrix.from_columns(cols)


def closed_form_endomorphism(
    shape: QuasiQnSpec, target_spec: QuasiQnSpec, candidate: AutCandidate
) -> Matrix:
    """Same map as ``extend_endomorphism`` via the explicit column formulas.

    Writing b0/b1 for the per-copy level coefficients of the two generator
    images, the level part of the column for e_{st} is
    (b0_{i0})^{t-2} (b0_{i0} b1_{ij} - b0_{ij} b1_{i0}) on e_{i,j+t-1} and the
    central part collects (-1)^j b0_{ij} (...) on the top of copy i; valid for
    arbitrary candidates.
    """
    target = build_quasi(target_spec)
    candidate.validate(shape, target.dim)
    n, dim = shape.n, target.dim

    def b(vecs, s, i, j):
        return vecs[s - 1][target_spec.gen_index(i, j)]

    def add_top(v, i, coeff):
        if coeff:
            for tt, c in target_spec.top_coefficients(i).items():
                v[target_spec.top_index(tt)] += coeff * c

    cols: List[list] = [None] * shape.dim
    for s in range(1, shape.m + 1):
        cols[shape.gen_index(s, 0)] = list(candidate.e0[s - 1])
        cols[shape.gen_index(s, 1)] = list(candidate.e1[s - 1])
        for t in range(2, n):
            v = [ZERO] * dim
            for i in range(1, shape.m + 1):
                b00 = b(candidate.e0, s, i, 0)
                b10 = b(candidate.e1, s, i, 0)
                if t == 2:
                    for j in range(1, n - 1):
                        c = b00 * b(candidate.e1, s, i, j) - b(candidate.e0, s, i, j) * b10
                        v[target_spec.gen_index(i, j + 1)] += c
                    for j in range(1, n):
                        add_top(
                            v,
                            i,
                            (-ONE) ** j * b(candidate.e0, s, i, j) * b(candidate.e1, s, i, n - j),
                        )
                else:
                    head = b00 ** (t - 2)
                    for j in range(1, n - t + 1):
                        c = b00 * b(candidate.e1, s, i, j) - b(candidate.e0, s, i, j) * b10
                        v[target_spec.gen_index(i, j + t - 1)] += head * c
                    head = b00 ** (t - 3)
                    for j in range(1, n - t + 2):
                        c = (
                            b00 * b(candidate.e1, s, i, n - j - t + 2)
                            - b(candidate.e0, s, i, n - j - t + 2) * b10
                        )
                        add_top(v, i, (-ONE) ** j * b(candidate.e0, s, i, j) * head * c)
            cols[shape.gen_index(s, t)] = v
    for t in range(1, shape.r + 1):
        v = [ZERO] * dim
        for i in range(1, shape.m + 1):
            b00 = b(candidate.e0, t, i, 0)
            c = b00 * b(candidate.e1, t, i, 1) - b(candidate.e0, t, i, 1) * b(
                candidate.e1, t, i, 0
            )
            add_top(v, i, b(candidate.e1, t, i, 1) * b00 ** (n - 3) * c)
        cols[shape.top_index(t)] = v
    return Matrix.from_columns(cols)


def _target_copies(spec: QuasiQnSpec, candidate: AutCandidate) -> tuple:
    """Per copy s: the unique copy its generator images land in, or a failure
    reason string."""
    n, m = spec.n, spec.m
    targets = []
    for s in range(1, m + 1):
        v0 = candidate.e0[s - 1]
        v1 = candidate.e1[s - 1]
        hit = set()
        for p in range(1, m + 1):
            if any(v0[spec.gen_index(p, i)] != 0 for i in range(n)):
                hit.add(p)
            if any(v1[spec.gen_index(p, i)] != 0 for i in range(1, n - 1)):
                hit.add(p)
        if len(hit) != 1:
            return None, f"images of copy {s} touch copies {sorted(hit)}"
        q = hit.pop()
        if v0[spec.gen_index(q, 1)] != 0:
            return None, f"image of e_{{{s},0}} has a component on e_{{{q},1}}"
        for p in range(1, m + 1):
            if v1[spec.gen_index(p, 0)] != 0:
                return None, f"image of e_{{{s},1}} has a component on e_{{{p},0}}"
        targets.append(q)
    return tuple(targets), None


def automorphism_conditions(spec: QuasiQnSpec, candidate: AutCandidate) -> ConditionVerdict:
    """Closed-form test: does the candidate extend to an automorphism?

    Checks, in order:
      single-target-copy      each copy's generators land in exactly one copy,
                              avoiding the e_{q,1} and e_{*,0} slots
      copy-permutation        the induced copy map is a bijection
      leading-coefficients    leading products nonzero; e_{*,n-1} cross terms
                              match after expanding tops
      odd-convolution         alternating coefficient convolutions vanish at
                              odd orders
      gluing-compatibility    permutation and scales preserve the gluing
    Equivalent to the extended map being an automorphism.
    """
    candidate.validate(spec, spec.dim)
    n, m, r = spec.n, spec.m, spec.r
    beta = spec.beta()

    targets, why = _target_copies(spec, candidate)
    if targets is None:
        return ConditionVerdict(False, "single-target-copy", why)
    if sorted(targets) != list(range(1, m + 1)):
        return ConditionVerdict(
            False, "copy-permutation", f"copy map {targets} is not a bijection"
        )

    def top_vec(i: int, coeff: Fraction) -> tuple:
        v = [ZERO] * r
        for tt, c in spec.top_coefficients(i).items():
            v[tt - 1] += coeff * c
        return tuple(v)

    for s in range(1, m + 1):
        q = targets[s - 1]
        lead = candidate.e0[s - 1][spec.gen_index(q, 0)] * candidate.e1[s - 1][
            spec.gen_index(q, 1)
        ]
        if lead == 0:
            return ConditionVerdict(
                False, "leading-coefficients", f"copy {s} has a zero leading product"
            )
    for s in range(1, m + 1):
        for p in range(s + 1, m + 1):
            qs, qp = targets[s - 1], targets[p - 1]
            lhs = top_vec(
                qs,
                candidate.e1[s - 1][spec.gen_index(qs, 1)]
                * candidate.e1[p - 1][spec.gen_index(qs, n - 1)],
            )
            rhs = top_vec(
                qp,
                candidate.e1[s - 1][spec.gen_index(qp, n - 1)]
                * candidate.e1[p - 1][spec.gen_index(qp, 1)],
            )
            if lhs != rhs:
                return ConditionVerdict(
                    False,
                    "leading-coefficients",
                    f"copies ({s},{p}) have mismatched e_{{*,n-1}} cross terms",
                )
    for s in range(1, m + 1):
        q = targets[s - 1]
        for p in range(3, n - 1, 2):
            total = ZERO
            for j in range(1, p + 1):
                total += (
                    (-ONE) ** j
                    * candidate.e1[s - 1][spec.gen_index(q, j)]
                    * candidate.e1[s - 1][spec.gen_index(q, p - j + 1)]
                )
            if total != 0:
                return ConditionVerdict(
                    False,
                    "odd-convolution",
                    f"copy {s} convolution at order {p} is {total}",
                )
    T = Matrix(
        [[ONE if targets[j] == i + 1 else ZERO for j in range(m)] for i in range(m)],
        cols=m,
    )
    k = [
        candidate.e0[i - 1][spec.gen_index(targets[i - 1], 0)] ** (n - 2)
        * candidate.e1[i - 1][spec.gen_index(targets[i - 1], 1)] ** 2
        for i in range(1, m + 1)
    ]
    T1 = T.submatrix(range(m), range(r))
    T2 = T.submatrix(range(m), range(r, m))
    K1 = Matrix([[k[i] if i == j else ZERO for j in range(r)] for i in range(r)], cols=r)
    K2 = Matrix(
        [[k[r + i] if i == j else ZERO for j in range(m - r)] for i in range(m - r)],
        cols=m - r,
    )
    if beta * T2 * K2 != beta * T1 * K1 * spec.B:
        return ConditionVerdict(
            False, "gluing-compatibility", "permutation and scales do not preserve the gluing"
        )
    return ConditionVerdict(True)


def is_automorphism(L: LieAlgebra, M: Matrix) -> bool:
    """Brute force: invertible and multiplicative on all basis brackets."""
    if M.rows != L.dim or M.cols != L.dim:
        return False
    return rank(M) == L.dim and bracket_preserving(L, L, M)


def make_scaling_automorphism(
    spec: QuasiQnSpec,
    alphas: Sequence,
    betas: Sequence,
    perm: Optional[Sequence[int]] = None,
) -> AutCandidate:
    """Candidate with e_{s0} -> alpha_s e_{perm(s),0}, e_{s1} -> beta_s e_{perm(s),1}.

    ``perm`` maps copies to copies (1-based, identity by default).  The result
    is an automorphism only when the induced top scales alpha^{n-2} beta^2 are
    compatible with the gluing; run ``automorphism_conditions`` to find out.
    Raises ZeroScale on a zero scale factor.
    """
    alphas = [scalar(a) for a in alphas]
    betas = [scalar(b) for b in betas]
    if len(alphas) != spec.m or len(betas) != spec.m:
        raise ValueError(f"need {spec.m} scale pairs")
    if any(a == 0 for a in alphas) or any(b == 0 for b in betas):
        raise ZeroScale("scale factors must be nonzero")
    if perm is None:
        perm = list(range(1, spec.m + 1))
    if sorted(perm) != list(range(1, spec.m + 1)):
        raise ValueError(f"perm must be a permutation of 1..{spec.m}")
    e0 = []
    e1 = []
    for s in range(1, spec.m + 1):
        v0 = [ZERO] * spec.dim
        v0[spec.gen_index(perm[s - 1], 0)] = alphas[s - 1]
        v1 = [ZERO] * spec.dim
        v1[spec.gen_index(perm[s - 1], 1)] = betas[s - 1]
        e0.append(v0)
        e1.append(v1)
    return AutCandidate.from_vectors(e0, e1)


def exp_ad(L: LieAlgebra, x: Sequence) -> Matrix:
    """exp(ad x) for x in a nilpotent algebra: an inner automorphism."""
    dim = L.dim
    xs = [scalar(v) for v in x]
    cols = []
    for j in range(dim):
        total = list(L.basis_vector(j))
        term = total[:]
        k = 0
        while any(term):
            k += 1
            term = L.bracket(xs, term)
            inv = Fraction(1, factorial(k))
            for t in range(dim):
                total[t] += inv * term[t]
            if k > dim:
                raise ValueError("ad x is not nilpotent")
        cols.append(total)
    return Matrix.from_columns(cols)
