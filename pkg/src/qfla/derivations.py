"""Derivations of N(Q_n, m, r).

A derivation is determined by where it sends the generators e_{s0}, e_{s1} of
each copy; the remaining columns follow from the Leibniz rule.  This module
provides that extension, a closed-form test for when generator images extend
to a derivation, a brute-force kernel oracle for cross-validation, and
explicit torus / nilpotent bases of the derivation algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .builder import BlockStructure, NonBlockForm, QuasiQnSpec, block_structure, build_quasi
from .liecore import LieAlgebra
from .linalg import Matrix, ONE, ZERO, scalar, sparse_nullspace


class NotSimultaneouslyDiagonal(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorImages:
    """Proposed images of the generators: e0[s-1] and e1[s-1] are the image
    coordinate vectors of e_{s0} and e_{s1} (copies 1-based)."""

    e0: tuple
    e1: tuple

    @staticmethod
    def from_vectors(e0: Sequence[Sequence], e1: Sequence[Sequence]) -> "GeneratorImages":
        return GeneratorImages(
            tuple(tuple(scalar(x) for x in v) for v in e0),
            tuple(tuple(scalar(x) for x in v) for v in e1),
        )

    def validate(self, spec: QuasiQnSpec) -> None:
        if len(self.e0) != spec.m or len(self.e1) != spec.m:
            raise ValueError(f"need one image pair per copy ({spec.m})")
        for v in self.e0 + self.e1:
            if len(v) != spec.dim:
                raise ValueError(f"image vectors must have length {spec.dim}")


def extend_derivation_candidate(spec: QuasiQnSpec, images: GeneratorImages) -> Matrix:
    """Extend generator images to a linear map on all of N(Q_n, m, r).

    Columns for e_{st} (t >= 2) follow the Leibniz recurrence
    d(e_{st}) = [d(e_{s0}), e_{s,t-1}] + [e_{s0}, d(e_{s,t-1})], and the top
    columns from d(e_{tn}) = -[d(e_{t1}), e_{t,n-1}] - [e_{t1}, d(e_{t,n-1})].
    The result is a derivation iff ``derivation_conditions`` passes.
    """
    images.validate(spec)
    L = build_quasi(spec)
    n, dim = spec.n, spec.dim
    cols: List[list] = [None] * dim
    for s in range(1, spec.m + 1):
        cols[spec.gen_index(s, 0)] = list(images.e0[s - 1])
        cols[spec.gen_index(s, 1)] = list(images.e1[s - 1])
        for t in range(2, n):
            prev = cols[spec.gen_index(s, t - 1)]
            first = L.bracket(cols[spec.gen_index(s, 0)], L.basis_vector(spec.gen_index(s, t - 1)))
            second = L.bracket_basis_left(spec.gen_index(s, 0), prev)
            cols[spec.gen_index(s, t)] = [a + b for a, b in zip(first, second)]
    for t in range(1, spec.r + 1):
        first = L.bracket(cols[spec.gen_index(t, 1)], L.basis_vector(spec.gen_index(t, n - 1)))
        second = L.bracket_basis_left(spec.gen_index(t, 1), cols[spec.gen_index(t, n - 1)])
        cols[spec.top_index(t)] = [-(a + b) for a, b in zip(first, second)]
    return Matrix.from_columns(cols)


def closed_form_extension(spec: QuasiQnSpec, images: GeneratorImages) -> Matrix:
    """Same map as ``extend_derivation_candidate``, from the explicit formula.

    With a = coefficient of e_{s0} in d(e_{s0}), b = coefficient of e_{s1} in
    d(e_{s1}), c_i the e_{si} coefficients of d(e_{s1}) and g_i those of
    d(e_{s0}):

        d(e_{st}) = ((t-1) a + b) e_{st}
                    + sum_{j=2}^{n-t} c_j e_{s,j+t-1}
                    + (-1)^t g_{n-t+1} e_{sn}        for 2 <= t <= n-1,
        d(e_{sn}) = ((n-2) a + 2 b) e_{sn}           for s <= r,

    valid for arbitrary generator images (cross-copy and central components
    contribute nothing to the recurrence).
    """
    images.validate(spec)
    n, dim = spec.n, spec.dim
    cols: List[list] = [None] * dim
    for s in range(1, spec.m + 1):
        de0 = images.e0[s - 1]
        de1 = images.e1[s - 1]
        cols[spec.gen_index(s, 0)] = list(de0)
        cols[spec.gen_index(s, 1)] = list(de1)
        a = de0[spec.gen_index(s, 0)]
        b = de1[spec.gen_index(s, 1)]
        for t in range(2, n):
            v = [ZERO] * dim
            v[spec.gen_index(s, t)] = (t - 1) * a + b
            for j in range(2, n - t + 1):
                v[spec.gen_index(s, j + t - 1)] += de1[spec.gen_index(s, j)]
            sign = ONE if t % 2 == 0 else -ONE
            g = de0[spec.gen_index(s, n - t + 1)]
            if g:
                for tt, c in spec.top_coefficients(s).items():
                    v[spec.top_index(tt)] += sign * g * c
            cols[spec.gen_index(s, t)] = v
    for t in range(1, spec.r + 1):
        a = images.e0[t - 1][spec.gen_index(t, 0)]
        b = images.e1[t - 1][spec.gen_index(t, 1)]
        v = [ZERO] * dim
        v[spec.top_index(t)] = (n - 2) * a + 2 * b
        cols[spec.top_index(t)] = v
    return Matrix.from_columns(cols)


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of a condition battery; ``failed`` names the first failing
    condition (None when everything passes)."""

    ok: bool
    failed: Optional[str] = None
    detail: Optional[str] = None


def _lambda_top(spec: QuasiQnSpec, images: GeneratorImages, s: int) -> Fraction:
    a = images.e0[s - 1][spec.gen_index(s, 0)]
    b = images.e1[s - 1][spec.gen_index(s, 1)]
    return (spec.n - 2) * a + 2 * b


def derivation_conditions(spec: QuasiQnSpec, images: GeneratorImages) -> ConditionVerdict:
    """Closed-form test: do the generator images extend to a derivation?

    Checks, in order:
      e0-support            d(e_{s0}) lies in span{e_{s0}, e_{s2..s,n-1}, tops}
      e1-support            d(e_{s1}) lies in span{e_{s1..s,n-2}, e_{*,n-1}, tops}
      odd-level-vanishing   d(e_{s1}) has no e_{si} component for odd 3<=i<=n-2
      glued-weight-match    top eigenvalues agree across glued copies
      cross-pair-balance    e_{*,n-1} cross terms cancel against the gluing
    Equivalent to the Leibniz rule holding for the extended map.
    """
    images.validate(spec)
    n, m, r = spec.n, spec.m, spec.r
    beta = spec.beta()

    for s in range(1, m + 1):
        allowed = {spec.gen_index(s, 0)}
        allowed.update(spec.gen_index(s, i) for i in range(2, n))
        allowed.update(spec.top_index(t) for t in range(1, r + 1))
        for k, v in enumerate(images.e0[s - 1]):
            if v != 0 and k not in allowed:
                return ConditionVerdict(
                    False, "e0-support", f"d(e_{{{s},0}}) has a component on basis index {k}"
                )
    for s in range(1, m + 1):
        allowed = {spec.gen_index(s, i) for i in range(1, n - 1)}
        allowed.update(spec.gen_index(p, n - 1) for p in range(1, m + 1))
        allowed.update(spec.top_index(t) for t in range(1, r + 1))
        for k, v in enumerate(images.e1[s - 1]):
            if v != 0 and k not in allowed:
                return ConditionVerdict(
                    False, "e1-support", f"d(e_{{{s},1}}) has a component on basis index {k}"
                )
    for s in range(1, m + 1):
        for i in range(3, n - 1, 2):
            if images.e1[s - 1][spec.gen_index(s, i)] != 0:
                return ConditionVerdict(
                    False,
                    "odd-level-vanishing",
                    f"d(e_{{{s},1}}) has a component on e_{{{s},{i}}}",
                )
    lam = [_lambda_top(spec, images, s) for s in range(1, m + 1)]
    for s in range(r + 1, m + 1):
        for j in range(1, r + 1):
            if beta.entry(j - 1, s - 1) != 0 and lam[s - 1] != lam[j - 1]:
                return ConditionVerdict(
                    False,
                    "glued-weight-match",
                    f"top eigenvalue of copy {s} is {lam[s - 1]} but copy {j} has {lam[j - 1]}",
                )
    for s in range(1, m + 1):
        for p in range(s + 1, m + 1):
            csp = images.e1[s - 1][spec.gen_index(p, n - 1)]
            cps = images.e1[p - 1][spec.gen_index(s, n - 1)]
            for j in range(1, r + 1):
                residue = -csp * beta.entry(j - 1, p - 1) + cps * beta.entry(j - 1, s - 1)
                if residue != 0:
                    return ConditionVerdict(
                        False,
                        "cross-pair-balance",
                        f"copies ({s},{p}) leave residue {residue} on top {j}",
                    )
    return ConditionVerdict(True)


# -- brute force oracle ---------------------------------------------------------


def is_derivation(L: LieAlgebra, D: Matrix) -> bool:
    """Leibniz rule D[x,y] = [Dx,y] + [x,Dy] checked on all basis pairs."""
    if D.rows != L.dim or D.cols != L.dim:
        return False
    cols = [list(D.col(j)) for j in range(L.dim)]
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = [ZERO] * L.dim
            for k, c in L.structure(i, j).items():
                for t, v in enumerate(cols[k]):
                    if v:
                        lhs[t] += c * v
            rhs1 = L.bracket(cols[i], L.basis_vector(j))
            rhs2 = L.bracket_basis_left(i, cols[j])
            if any(a != b + c for a, b, c in zip(lhs, rhs1, rhs2)):
                return False
    return True


def derivation_oracle(L: LieAlgebra) -> List[Matrix]:
    """Canonical basis of the full derivation algebra, found by solving the
    Leibniz rule as a sparse linear system in the dim^2 matrix entries."""
    dim = L.dim

    def u(row: int, col: int) -> int:
        return row * dim + col

    rows: List[dict] = []
    for i in range(dim):
        for j in range(i + 1, dim):
            eq: List[dict] = [dict() for _ in range(dim)]
            for k, c in L.structure(i, j).items():
                for out in range(dim):
                    key = u(out, k)
                    eq[out][key] = eq[out].get(key, ZERO) + c
            for k in range(dim):
                for out, c in L.structure(k, j).items():
                    key = u(k, i)
                    eq[out][key] = eq[out].get(key, ZERO) - c
                for out, c in L.structure(i, k).items():
                    key = u(k, j)
                    eq[out][key] = eq[out].get(key, ZERO) - c
            rows.extend(e for e in eq if e)
    kernel = sparse_nullspace(rows, dim * dim)
    return [
        Matrix([vec[a * dim : (a + 1) * dim] for a in range(dim)], cols=dim) for vec in kernel
    ]


# -- explicit bases ---------------------------------------------------------------


@dataclass(frozen=True)
class DerBasisElement:
    """One member of an explicit derivation basis.

    ``kind`` names the family; ``indices`` identifies the member within it."""

    kind: str
    indices: tuple
    matrix: Matrix


def _zero_images(spec: QuasiQnSpec) -> Tuple[list, list]:
    e0 = [[ZERO] * spec.dim for _ in range(spec.m)]
    e1 = [[ZERO] * spec.dim for _ in range(spec.m)]
    return e0, e1


def _element(spec: QuasiQnSpec, kind: str, indices: tuple, e0, e1) -> DerBasisElement:
    images = GeneratorImages.from_vectors(e0, e1)
    verdict = derivation_conditions(spec, images)
    if not verdict.ok:
        raise AssertionError(f"basis element {kind}{indices} is not a derivation: {verdict}")
    return DerBasisElement(kind, indices, extend_derivation_candidate(spec, images))


def torus_basis(spec: QuasiQnSpec) -> List[DerBasisElement]:
    """m+1 commuting diagonalizable derivations.

    ``Grading`` scales e_{st} by t; ``CopyWeight s`` acts only on copy s with
    e_{s0} -> -2 e_{s0}, e_{s1} -> (n-2) e_{s1}, killing the top vector.
    """
    out = []
    e0, e1 = _zero_images(spec)
    for s in range(1, spec.m + 1):
        e1[s - 1][spec.gen_index(s, 1)] = ONE
    out.append(_element(spec, "Grading", (), e0, e1))
    for s in range(1, spec.m + 1):
        e0, e1 = _zero_images(spec)
        e0[s - 1][spec.gen_index(s, 0)] = scalar(-2)
        e1[s - 1][spec.gen_index(s, 1)] = scalar(spec.n - 2)
        out.append(_element(spec, "CopyWeight", (s,), e0, e1))
    return out


def h1_derivation(spec: QuasiQnSpec) -> Matrix:
    """The diagonal derivation e_{s0} -> -2s e_{s0}, e_{s1} -> s(n-2) e_{s1};
    its eigenvalues separate the copies, which ``weight_decomposition`` uses."""
    e0, e1 = _zero_images(spec)
    for s in range(1, spec.m + 1):
        e0[s - 1][spec.gen_index(s, 0)] = scalar(-2 * s)
        e1[s - 1][spec.gen_index(s, 1)] = scalar(s * (spec.n - 2))
    return _element(spec, "H1", (), e0, e1).matrix


def nilpotent_basis(spec: QuasiQnSpec) -> List[DerBasisElement]:
    """Explicit basis of the nilpotent complement, for block-form gluings.

    Per copy s: ``AdGen`` sends e_{s0} to e_{si} (2 <= i <= n-1); ``TopFromE0``
    sends e_{s0} to a top vector; ``Even`` sends e_{s1} to an even level
    e_{s,2i} (1 <= i <= d-1); ``TopFromE1`` sends e_{s1} to a top vector;
    ``DiagTop`` sends e_{s1} to e_{s,n-1}.  Per block, ``OffDiag`` pairs member
    copies i < j via e_{i1} -> k_i e_{j,n-1}, e_{j1} -> k_j e_{i,n-1}, scaled by
    the gluing coefficients k so the cross terms cancel.

    Raises NonBlockForm when some glued top mixes two independent tops.
    """
    blocks = block_structure(spec)
    if blocks is None:
        raise NonBlockForm("gluing matrix mixes independent top vectors")
    beta = spec.beta()
    out = []
    for s in range(1, spec.m + 1):
        for i in range(2, spec.n):
            e0, e1 = _zero_images(spec)
            e0[s - 1][spec.gen_index(s, i)] = ONE
            out.append(_element(spec, "AdGen", (s, i), e0, e1))
        for t in range(1, spec.r + 1):
            e0, e1 = _zero_images(spec)
            e0[s - 1][spec.top_index(t)] = ONE
            out.append(_element(spec, "TopFromE0", (s, t), e0, e1))
        for i in range(1, spec.d):
            e0, e1 = _zero_images(spec)
            e1[s - 1][spec.gen_index(s, 2 * i)] = ONE
            out.append(_element(spec, "Even", (s, i), e0, e1))
        for t in range(1, spec.r + 1):
            e0, e1 = _zero_images(spec)
            e1[s - 1][spec.top_index(t)] = ONE
            out.append(_element(spec, "TopFromE1", (s, t), e0, e1))
        e0, e1 = _zero_images(spec)
        e1[s - 1][spec.gen_index(s, spec.n - 1)] = ONE
        out.append(_element(spec, "DiagTop", (s,), e0, e1))
    for t, members in enumerate(blocks.members, start=1):
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                e0, e1 = _zero_images(spec)
                e1[i - 1][spec.gen_index(j, spec.n - 1)] = beta.entry(t - 1, i - 1)
                e1[j - 1][spec.gen_index(i, spec.n - 1)] = beta.entry(t - 1, j - 1)
                out.append(_element(spec, "OffDiag", (i, j), e0, e1))
    return out


def der_dimension(spec: QuasiQnSpec) -> int:
    """Predicted dimension of the derivation algebra for block-form gluings:
    (m+1) torus directions plus the nilpotent count
    sum_l ((2r + n + d - 2) m_l + m_l (m_l - 1) / 2)."""
    blocks = block_structure(spec)
    if blocks is None:
        raise NonBlockForm("no closed-form dimension outside block form")
    total = spec.m + 1
    for m_l in blocks.sizes:
        total += (2 * spec.r + spec.n + spec.d - 2) * m_l + m_l * (m_l - 1) // 2
    return total


# -- eigenvalue bookkeeping -------------------------------------------------------


@dataclass(frozen=True)
class DerivationAnalysis:
    """Per-copy eigenvalue data of a derivation in generator-image form.

    ``level_weights[s-1][i-1]`` is the e_{s,i} eigenvalue (i-1) a_s + b_s and
    ``top_weights[s-1]`` the e_{sn} eigenvalue (n-2) a_s + 2 b_s."""

    level_weights: tuple
    top_weights: tuple


def lambda_of(spec: QuasiQnSpec, D: Matrix) -> DerivationAnalysis:
    levels = []
    tops = []
    for s in range(1, spec.m + 1):
        a = D.entry(spec.gen_index(s, 0), spec.gen_index(s, 0))
        b = D.entry(spec.gen_index(s, 1), spec.gen_index(s, 1))
        levels.append(tuple((i - 1) * a + b for i in range(1, spec.n)))
        tops.append((spec.n - 2) * a + 2 * b)
    return DerivationAnalysis(tuple(levels), tuple(tops))


def weight_decomposition(L: LieAlgebra, torus: Sequence[Matrix]) -> Dict[tuple, Matrix]:
    """Split the underlying space into joint eigenspaces of diagonal maps.

    Returns {weight tuple: canonical column-span matrix}.  Raises
    NotSimultaneouslyDiagonal when some map is not diagonal on this basis.
    """
    for D in torus:
        for i in range(D.rows):
            for j in range(D.cols):
                if i != j and D.entry(i, j) != 0:
                    raise NotSimultaneouslyDiagonal(
                        f"map has off-diagonal entry at ({i},{j})"
                    )
    groups: Dict[tuple, list] = {}
    for k in range(L.dim):
        weight = tuple(D.entry(k, k) for D in torus)
        groups.setdefault(weight, []).append(k)
    from .linalg import column_span

    return {
        w: column_span([L.basis_vector(k) for k in idxs], L.dim)
        for w, idxs in groups.items()
    }
