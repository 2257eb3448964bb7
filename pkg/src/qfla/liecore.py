"""Generic Lie algebra machinery over structure constants.

Algebras are stored as an antisymmetric structure-constant tensor: brackets
[e_i, e_j] are recorded only for i < j, so antisymmetry holds by construction.
All coefficients are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from .linalg import Matrix, ZERO, column_span, rank, scalar


class DimensionMismatch(ValueError):
    pass


class JacobiViolation(ValueError):
    pass


class NotNilpotent(RuntimeError):
    pass


class NotDirect(RuntimeError):
    pass


class NotSpanning(RuntimeError):
    pass


@dataclass(frozen=True)
class GenLabel:
    """Generator-copy basis label e_{copy,level} (copy 1-based, 0 <= level <= n-1)."""

    copy: int
    level: int


@dataclass(frozen=True)
class TopLabel:
    """Top-of-tower basis label e_{index,n} (index 1-based, 1 <= index <= r)."""

    index: int


@dataclass(frozen=True)
class PlainLabel:
    index: int


Label = Union[GenLabel, TopLabel, PlainLabel]


class LieAlgebra:
    """Finite dimensional Lie algebra given by structure constants.

    ``sc`` maps basis pairs (i, j) with i < j to {k: c} meaning
    [e_i, e_j] = sum_k c * e_k.  Pairs absent from ``sc`` bracket to zero.
    """

    __slots__ = ("dim", "labels", "sc")

    def __init__(
        self,
        dim: int,
        sc: Dict[Tuple[int, int], Dict[int, Fraction]],
        labels: Optional[Sequence[Label]] = None,
        validate: bool = True,
    ):
        self.dim = dim
        if labels is None:
            labels = tuple(PlainLabel(i) for i in range(dim))
        else:
            labels = tuple(labels)
        if len(labels) != dim:
            raise DimensionMismatch("label count != dim")
        if len(set(labels)) != dim:
            raise ValueError("labels must be pairwise distinct")
        self.labels = labels
        clean: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), val in sc.items():
            if not (0 <= i < j < dim):
                raise ValueError(f"structure constants must be stored for i<j, got ({i},{j})")
            entry = {k: scalar(c) for k, c in val.items() if c != 0}
            for k in entry:
                if not 0 <= k < dim:
                    raise ValueError("target index out of range")
            if entry:
                clean[(i, j)] = entry
        self.sc = clean
        if validate:
            ok, triple = check_jacobi(self)
            if not ok:
                raise JacobiViolation(f"Jacobi identity fails on basis triple {triple}")

    # -- bracket evaluation ---------------------------------------------------

    def structure(self, i: int, j: int) -> Dict[int, Fraction]:
        """[e_i, e_j] as a sparse vector, for any index order."""
        if i == j:
            return {}
        if i < j:
            return self.sc.get((i, j), {})
        back = self.sc.get((j, i))
        if not back:
            return {}
        return {k: -c for k, c in back.items()}

    def bracket_sparse(self, x: Dict[int, Fraction], y: Dict[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for i, a in x.items():
            if not a:
                continue
            for j, b in y.items():
                if not b or i == j:
                    continue
                for k, c in self.structure(i, j).items():
                    v = out.get(k, ZERO) + a * b * c
                    if v:
                        out[k] = v
                    elif k in out:
                        del out[k]
        return out

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """Bilinear extension of the structure constants to coordinate vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("vectors must have length dim")
        xs = {i: scalar(v) for i, v in enumerate(x) if v != 0}
        ys = {j: scalar(v) for j, v in enumerate(y) if v != 0}
        out = [ZERO] * self.dim
        for k, v in self.bracket_sparse(xs, ys).items():
            out[k] = v
        return out

    def bracket_basis_left(self, i: int, y: Sequence) -> list:
        """[e_i, y] for a coordinate vector y."""
        out = [ZERO] * self.dim
        for j, b in enumerate(y):
            if not b:
                continue
            for k, c in self.structure(i, j).items():
                out[k] += b * c
        return out

    def basis_vector(self, i: int) -> list:
        v = [ZERO] * self.dim
        v[i] = Fraction(1)
        return v

    def label_index(self, label: Label) -> int:
        return self.labels.index(label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.labels == other.labels and self.sc == other.sc

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, brackets={len(self.sc)})"


def bracket(L: LieAlgebra, x: Sequence, y: Sequence) -> list:
    return L.bracket(x, y)


def check_jacobi(L: LieAlgebra):
    """Exhaustive Jacobi check over basis triples.

    Returns (True, None), or (False, (i, j, k)) for the first failing triple.
    """
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            cij = L.sc.get((i, j), {})
            for k in range(j + 1, L.dim):
                total: Dict[int, Fraction] = {}
                for pair, extra in (((j, k), i), ((k, i), j), ((i, j), k)):
                    inner = L.structure(*pair)
                    for t, c in inner.items():
                        for u, d in L.structure(extra, t).items():
                            v = total.get(u, ZERO) + c * d
                            if v:
                                total[u] = v
                            elif u in total:
                                del total[u]
                if total:
                    return False, (i, j, k)
    _ = cij
    return True, None


@dataclass(frozen=True)
class SubspaceChain:
    """Descending chain of subspaces, each a canonical column-span matrix."""

    spaces: tuple

    @property
    def dims(self) -> tuple:
        return tuple(s.cols for s in self.spaces)


def _bracket_span(L: LieAlgebra, left: Matrix, right: Matrix) -> Matrix:
    """span{ [u, v] : u column of left, v column of right }."""
    vectors = []
    for a in range(left.cols):
        u = left.col(a)
        for b in range(right.cols):
            w = L.bracket(u, right.col(b))
            if any(w):
                vectors.append(w)
    return column_span(vectors, L.dim)


def lower_central_series(L: LieAlgebra) -> SubspaceChain:
    """c^0 = L, c^{i+1} = [L, c^i]; raises NotNilpotent if it stabilizes nonzero."""
    full = Matrix.identity(L.dim)
    spaces = [full]
    current = full
    while current.cols > 0:
        nxt = _bracket_span(L, full, current)
        if nxt.cols == current.cols:
            raise NotNilpotent(f"series stabilizes at dimension {nxt.cols}")
        spaces.append(nxt)
        current = nxt
    return SubspaceChain(tuple(spaces))


def is_filiform(L: LieAlgebra) -> bool:
    """Maximal nilpotency class: dim c^i = dim L - i - 1 for 1 <= i <= dim L - 1."""
    dims = lower_central_series(L).dims
    for i in range(1, L.dim):
        actual = dims[i] if i < len(dims) else 0
        if actual != L.dim - i - 1:
            return False
    return True


def minimal_generator_count(L: LieAlgebra) -> int:
    """dim L - dim c^1 L: the size of any minimal system of generators."""
    dims = lower_central_series(L).dims
    return L.dim - dims[1]


def is_minimal_generating_set(L: LieAlgebra, vectors: Sequence[Sequence]) -> bool:
    """True iff the residues of the vectors mod c^1 L form a basis of L / c^1 L."""
    dims = lower_central_series(L).dims
    needed = L.dim - dims[1]
    if len(vectors) != needed:
        return False
    c1 = lower_central_series(L).spaces[1]
    stacked = [list(v) for v in vectors] + [list(c1.col(j)) for j in range(c1.cols)]
    return rank(Matrix(stacked, cols=L.dim)) == L.dim


def quasi_cyclic_split(L: LieAlgebra, U: Matrix) -> tuple:
    """Chain U, [U,U], [U,[U,U]], ... when the sum is direct and spans L.

    Raises NotDirect if the partial sums overlap and NotSpanning if the total
    falls short of L.
    """
    current = column_span([U.col(j) for j in range(U.cols)], L.dim)
    chain = [current]
    while True:
        nxt = _bracket_span(L, chain[0], current)
        if nxt.cols == 0:
            break
        chain.append(nxt)
        current = nxt
    all_cols = []
    for space in chain:
        all_cols.extend(space.col(j) for j in range(space.cols))
    total = sum(space.cols for space in chain)
    r = rank(Matrix(all_cols, cols=L.dim)) if all_cols else 0
    if r < total:
        raise NotDirect(f"sum of chain spaces has rank {r} < {total}")
    if r < L.dim:
        raise NotSpanning(f"chain spans only {r} of {L.dim} dimensions")
    return tuple(chain)


def bracket_preserving(L1: LieAlgebra, L2: LieAlgebra, M: Matrix) -> bool:
    """True iff M[x,y]_1 = [Mx, My]_2 on all basis pairs of L1."""
    if M.rows != L2.dim or M.cols != L1.dim:
        raise DimensionMismatch("map shape does not match the two algebras")
    cols = [M.col(j) for j in range(M.cols)]
    for i in range(L1.dim):
        for j in range(i + 1, L1.dim):
            lhs = [ZERO] * L2.dim
            for k, c in L1.structure(i, j).items():
                for t in range(L2.dim):
                    lhs[t] += c * cols[k][t]
            if lhs != L2.bracket(cols[i], cols[j]):
                return False
    return True
