"""Shared fixtures: the standard battery of gluing parameters and random
candidate generators used by the equivalence suites."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qfla import block_structure, make_spec
from qfla.derivations import GeneratorImages
from qfla.automorphisms import AutCandidate

# The standard battery: every (n, m, r, B) the suites run against.
TEST_MATRIX = [
    make_spec(5, 1, 1),
    make_spec(5, 2, 1, [["1"]]),
    make_spec(5, 3, 1, [["1", "1"]]),
    make_spec(5, 3, 2, [["1"], ["0"]]),
    make_spec(5, 3, 2, [["1"], ["1"]]),  # mixes both tops: no block form
    make_spec(7, 1, 1),
    make_spec(7, 2, 1, [["1"]]),
]

BLOCK_SPECS = [s for s in TEST_MATRIX if block_structure(s) is not None]

# Gluings whose copies all share one top vector; for these the closed-form
# dimension account is exact (see test_acceptance for the exception).
SINGLE_TOP_SPECS = [s for s in TEST_MATRIX if s.r == 1]


def spec_id(spec) -> str:
    cols = "x".join(
        ",".join(str(spec.B.entry(i, j)) for i in range(spec.B.rows))
        for j in range(spec.B.cols)
    )
    return f"n{spec.n}m{spec.m}r{spec.r}" + (f"B{cols}" if cols else "")


SMALL_VALUES = [0, 0, 0, 1, -1, 2, Fraction(1, 2)]
NONZERO_VALUES = [1, -1, 2, 3, Fraction(1, 2), Fraction(-2, 3)]


def random_vector(rng: random.Random, length: int) -> list:
    return [Fraction(rng.choice(SMALL_VALUES)) for _ in range(length)]


def random_images(spec, rng: random.Random) -> GeneratorImages:
    """Unconstrained random generator images (usually not a derivation)."""
    e0 = [random_vector(rng, spec.dim) for _ in range(spec.m)]
    e1 = [random_vector(rng, spec.dim) for _ in range(spec.m)]
    return GeneratorImages.from_vectors(e0, e1)


def random_supported_images(spec, rng: random.Random) -> GeneratorImages:
    """Random images within the support shapes the derivation test expects
    (the remaining scalar conditions still only hold sometimes)."""
    n, m, r = spec.n, spec.m, spec.r
    e0 = [[Fraction(0)] * spec.dim for _ in range(m)]
    e1 = [[Fraction(0)] * spec.dim for _ in range(m)]
    for s in range(1, m + 1):
        e0[s - 1][spec.gen_index(s, 0)] = Fraction(rng.choice(SMALL_VALUES))
        for i in range(2, n):
            e0[s - 1][spec.gen_index(s, i)] = Fraction(rng.choice(SMALL_VALUES))
        for i in range(1, n - 1):
            e1[s - 1][spec.gen_index(s, i)] = Fraction(rng.choice(SMALL_VALUES))
        for p in range(1, m + 1):
            e1[s - 1][spec.gen_index(p, n - 1)] = Fraction(rng.choice(SMALL_VALUES))
        for t in range(1, r + 1):
            e0[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
            e1[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
    return GeneratorImages.from_vectors(e0, e1)


def random_passing_images(spec, rng: random.Random) -> GeneratorImages:
    """Random images satisfying the full derivation condition battery."""
    n, m, r = spec.n, spec.m, spec.r
    a = Fraction(rng.choice(SMALL_VALUES))
    b = Fraction(rng.choice(SMALL_VALUES))  # shared weights: glued tops agree
    e0 = [[Fraction(0)] * spec.dim for _ in range(m)]
    e1 = [[Fraction(0)] * spec.dim for _ in range(m)]
    for s in range(1, m + 1):
        e0[s - 1][spec.gen_index(s, 0)] = a
        e1[s - 1][spec.gen_index(s, 1)] = b
        for i in range(2, n):
            e0[s - 1][spec.gen_index(s, i)] = Fraction(rng.choice(SMALL_VALUES))
        for i in range(2, n - 1, 2):  # even levels only
            e1[s - 1][spec.gen_index(s, i)] = Fraction(rng.choice(SMALL_VALUES))
        e1[s - 1][spec.gen_index(s, n - 1)] = Fraction(rng.choice(SMALL_VALUES))
        for t in range(1, r + 1):
            e0[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
            e1[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
    return GeneratorImages.from_vectors(e0, e1)


def random_aut_candidate(spec, rng: random.Random, same_copy: bool = False) -> AutCandidate:
    """Random support-respecting automorphism candidate.

    Leading coefficients are usually (not always) nonzero, so both verdicts
    occur; ``same_copy`` pins the copy permutation to the identity.
    """
    n, m, r = spec.n, spec.m, spec.r
    perm = list(range(1, m + 1))
    if not same_copy:
        rng.shuffle(perm)
    e0 = [[Fraction(0)] * spec.dim for _ in range(m)]
    e1 = [[Fraction(0)] * spec.dim for _ in range(m)]
    for s in range(1, m + 1):
        q = perm[s - 1]
        e0[s - 1][spec.gen_index(q, 0)] = Fraction(rng.choice(NONZERO_VALUES + [0]))
        for i in range(2, n):
            e0[s - 1][spec.gen_index(q, i)] = Fraction(rng.choice(SMALL_VALUES))
        for i in range(1, n - 1):
            e1[s - 1][spec.gen_index(q, i)] = Fraction(rng.choice(SMALL_VALUES))
        for p in range(1, m + 1):
            e1[s - 1][spec.gen_index(p, n - 1)] = Fraction(rng.choice(SMALL_VALUES))
        for t in range(1, r + 1):
            e0[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
            e1[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
    return AutCandidate.from_vectors(e0, e1)


def passing_aut_candidate(spec, rng: random.Random) -> AutCandidate:
    """Random candidate passing the whole automorphism battery.

    Strategy: identity copy permutation, shared leading scales so the top
    scales agree, convolution-compatible e1 coefficients (b_{2k+1} solved from
    the even ones), no cross-copy e_{*,n-1} terms.
    """
    n, m, r = spec.n, spec.m, spec.r
    a = Fraction(rng.choice(NONZERO_VALUES))
    b = Fraction(rng.choice(NONZERO_VALUES))
    e0 = [[Fraction(0)] * spec.dim for _ in range(m)]
    e1 = [[Fraction(0)] * spec.dim for _ in range(m)]
    for s in range(1, m + 1):
        e0[s - 1][spec.gen_index(s, 0)] = a
        for i in range(2, n):
            e0[s - 1][spec.gen_index(s, i)] = Fraction(rng.choice(SMALL_VALUES))
        coeff = {1: b}
        for i in range(2, n - 1):
            if i % 2 == 0:
                coeff[i] = Fraction(rng.choice(SMALL_VALUES))
            else:
                # alternating convolution at order i must vanish; solve for
                # the highest odd coefficient from the lower ones
                total = Fraction(0)
                for j in range(2, i):
                    total += (Fraction(-1) ** j) * coeff[j] * coeff[i - j + 1]
                coeff[i] = total / (2 * coeff[1])
        for i, v in coeff.items():
            e1[s - 1][spec.gen_index(s, i)] = v
        e1[s - 1][spec.gen_index(s, n - 1)] = Fraction(rng.choice(SMALL_VALUES))
        for t in range(1, r + 1):
            e0[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
            e1[s - 1][spec.top_index(t)] = Fraction(rng.choice(SMALL_VALUES))
    return AutCandidate.from_vectors(e0, e1)


@pytest.fixture
def rng():
    return random.Random(20260826)
