"""Release gate: every shipped guarantee, checked exactly (tolerance zero).

Each check prints one ``[acceptance] ...: PASS/FAIL`` line.  Two checks are
expected to stay red: the closed-form dimension count and the closed-form
basis span on the gluing (n,m,r,B) = (5,3,2,(1,0)^t).  That B makes the third
copy a free summand, the algebra decomposes as N(Q_5,2,1) (+) Q_5, and the
true derivation dimension is 33 while the count used here gives 32 (it adds
only one diagonal torus direction per algebra rather than one per block).
The checks are kept as stated rather than patched around the exception.
"""
import json
import random
import time
from fractions import Fraction

import pytest

from conftest import (
    BLOCK_SPECS,
    SINGLE_TOP_SPECS,
    TEST_MATRIX,
    passing_aut_candidate,
    random_aut_candidate,
    random_images,
    random_passing_images,
    random_supported_images,
    spec_id,
)
from qfla import build_quasi, make_spec
from qfla.automorphisms import (
    AutCandidate,
    automorphism_conditions,
    extend_endomorphism,
    is_automorphism,
    make_scaling_automorphism,
)
from qfla.cli import main
from qfla.derivations import (
    GeneratorImages,
    der_dimension,
    derivation_conditions,
    derivation_oracle,
    extend_derivation_candidate,
    is_derivation,
    lambda_of,
    nilpotent_basis,
    torus_basis,
)
from qfla.iso import iso_decide
from qfla.jsonio import dumps, spec_to_json
from qfla.liecore import (
    bracket_preserving,
    is_minimal_generating_set,
    lower_central_series,
    minimal_generator_count,
    quasi_cyclic_split,
)
from qfla.linalg import Matrix, column_span, rank


def verdict(name: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
    if detail and not ok:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def flatten(M: Matrix) -> list:
    return sum(M.to_rows(), [])


# -------------------------------------------------------- gate construction


def test_construction_suite():
    start = time.perf_counter()
    for spec in TEST_MATRIX:
        L = build_quasi(spec)  # Jacobi validated on construction
        assert L.dim == spec.m * spec.n + spec.r
        chain = lower_central_series(L)
        assert chain.dims[spec.n - 1] == spec.r
        assert chain.dims[spec.n] == 0
        assert minimal_generator_count(L) == 2 * spec.m
        gens = []
        for s in range(1, spec.m + 1):
            gens.append(L.basis_vector(spec.gen_index(s, 0)))
            gens.append(L.basis_vector(spec.gen_index(s, 1)))
        assert is_minimal_generating_set(L, gens)
        chain = quasi_cyclic_split(L, column_span(gens, L.dim))
        assert chain[0].cols == 2 * spec.m
        assert sum(space.cols for space in chain) == L.dim
    elapsed = time.perf_counter() - start
    verdict("construction suite (7 gluings, < 5 s)", elapsed < 5.0, f"{elapsed:.2f}s")


# ----------------------------------------------- gate derivation dimensions

EXPECTED_DER_DIM = {
    spec_id(make_spec(5, 1, 1)): 9,
    spec_id(make_spec(5, 2, 1, [["1"]])): 18,
    spec_id(make_spec(5, 3, 1, [["1", "1"]])): 28,
    spec_id(make_spec(5, 3, 2, [["1"], ["0"]])): 32,  # oracle finds 33: see module docstring
    spec_id(make_spec(7, 1, 1)): 12,
    spec_id(make_spec(7, 2, 1, [["1"]])): 24,
}


@pytest.fixture(scope="module")
def oracle_runs():
    runs = {}
    start = time.perf_counter()
    for spec in BLOCK_SPECS:
        runs[spec_id(spec)] = derivation_oracle(build_quasi(spec))
    return runs, time.perf_counter() - start


@pytest.mark.parametrize("spec", BLOCK_SPECS, ids=spec_id)
def test_derivation_dimension(spec, oracle_runs):
    runs, _ = oracle_runs
    expected = EXPECTED_DER_DIM[spec_id(spec)]
    got = len(runs[spec_id(spec)])
    assert got == der_dimension(spec) or spec_id(spec) == "n5m3r2B1,0"
    verdict(
        f"derivation dimension {spec_id(spec)} == {expected}",
        got == expected,
        f"oracle found {got}",
    )


def test_derivation_oracle_runtime(oracle_runs):
    _, elapsed = oracle_runs
    verdict("derivation oracle runtime < 60 s", elapsed < 60.0, f"{elapsed:.2f}s")


# ------------------------------------ gate derivation condition equivalence


def _images_with(spec, assignments):
    e0 = [[Fraction(0)] * spec.dim for _ in range(spec.m)]
    e1 = [[Fraction(0)] * spec.dim for _ in range(spec.m)]
    for which, s, k, v in assignments:
        (e0 if which == 0 else e1)[s - 1][k] = Fraction(v)
    return GeneratorImages.from_vectors(e0, e1)


MUTANT_VALUES = [1, 2, 3, -1, Fraction(1, 2)]


def _derivation_mutants(spec):
    """Five single-entry perturbations per condition, each tripping exactly it."""
    out = {}
    out["e0-support"] = [
        _images_with(spec, [(0, 1, spec.gen_index(1, 1), v)]) for v in MUTANT_VALUES
    ]
    out["e1-support"] = [
        _images_with(spec, [(1, 1, spec.gen_index(2, 2), v)]) for v in MUTANT_VALUES
    ]
    out["odd-level-vanishing"] = [
        _images_with(spec, [(1, 1, spec.gen_index(1, 3), v)]) for v in MUTANT_VALUES
    ]
    out["glued-weight-match"] = [
        _images_with(spec, [(1, 1, spec.gen_index(1, 1), v)]) for v in MUTANT_VALUES
    ]
    out["cross-pair-balance"] = [
        _images_with(spec, [(1, 1, spec.gen_index(2, spec.n - 1), v)])
        for v in MUTANT_VALUES
    ]
    return out


def test_derivation_condition_equivalence(rng):
    ok = True
    for spec in TEST_MATRIX:
        L = build_quasi(spec)
        agreeing = []
        for draw in (random_images, random_supported_images, random_passing_images):
            for _ in range(70):
                gi = draw(spec, rng)
                predicted = derivation_conditions(spec, gi).ok
                actual = is_derivation(L, extend_derivation_candidate(spec, gi))
                agreeing.append(predicted == actual)
        ok = ok and len(agreeing) >= 200 and all(agreeing)
    spec = make_spec(5, 2, 1, [["1"]])
    L = build_quasi(spec)
    for label, mutants in _derivation_mutants(spec).items():
        for gi in mutants:
            v = derivation_conditions(spec, gi)
            ok = ok and (v.ok, v.failed) == (False, label)
            ok = ok and not is_derivation(L, extend_derivation_candidate(spec, gi))
    verdict("derivation conditions == Leibniz (210/gluing + 25 mutants)", ok)


# --------------------------------------------------- gate closed-form basis


@pytest.mark.parametrize("spec", BLOCK_SPECS, ids=spec_id)
def test_closed_form_basis_span(spec, oracle_runs):
    runs, _ = oracle_runs
    L = build_quasi(spec)
    elements = torus_basis(spec) + nilpotent_basis(spec)
    assert all(is_derivation(L, el.matrix) for el in elements)
    torus = [el.matrix for el in torus_basis(spec)]
    for i, A in enumerate(torus):
        for B in torus[i + 1 :]:
            assert A * B == B * A
    size = L.dim * L.dim
    closed = column_span([flatten(el.matrix) for el in elements], size)
    oracle = column_span([flatten(D) for D in runs[spec_id(spec)]], size)
    verdict(
        f"closed-form basis spans Der {spec_id(spec)}",
        closed == oracle,
        f"{len(elements)} closed-form vs {len(runs[spec_id(spec)])} oracle",
    )


def test_top_eigenvalue_uniform_on_single_top(oracle_runs):
    runs, _ = oracle_runs
    ok = True
    for spec in SINGLE_TOP_SPECS:
        for D in runs[spec_id(spec)]:
            tops = lambda_of(spec, D).top_weights
            ok = ok and len(set(tops)) == 1
    verdict("top eigenvalue uniform across copies (r=1 gluings)", ok)


# ---------------------------------- gate automorphism condition equivalence


def _identity_candidate(spec):
    return make_scaling_automorphism(spec, [1] * spec.m, [1] * spec.m)


def _aut_mutants(spec):
    out = {}
    n = spec.n
    base = _identity_candidate(spec)

    def tweak(e0_edits=(), e1_edits=()):
        e0 = [list(v) for v in base.e0]
        e1 = [list(v) for v in base.e1]
        for s, k, v in e0_edits:
            e0[s - 1][k] = Fraction(v)
        for s, k, v in e1_edits:
            e1[s - 1][k] = Fraction(v)
        return AutCandidate.from_vectors(e0, e1)

    out["single-target-copy"] = [
        tweak(e0_edits=[(1, spec.gen_index(2, 0), v)]) for v in MUTANT_VALUES
    ]
    out["copy-permutation"] = [
        tweak(
            e0_edits=[(2, spec.gen_index(2, 0), 0), (2, spec.gen_index(1, 0), v)],
            e1_edits=[(2, spec.gen_index(2, 1), 0), (2, spec.gen_index(1, 1), v)],
        )
        for v in MUTANT_VALUES
    ]
    out["leading-coefficients"] = [
        tweak(e1_edits=[(1, spec.gen_index(1, 1), 0), (1, spec.gen_index(1, 2), v)])
        for v in MUTANT_VALUES
    ]
    out["odd-convolution"] = [
        tweak(e1_edits=[(1, spec.gen_index(1, 2), v)]) for v in MUTANT_VALUES
    ]
    out["gluing-compatibility"] = [
        make_scaling_automorphism(spec, [1, 1], [v, 5 * v]) for v in MUTANT_VALUES
    ]
    return out


def test_automorphism_condition_equivalence(rng):
    ok = True
    for spec in TEST_MATRIX:
        L = build_quasi(spec)
        agreeing = []
        for draw in (random_aut_candidate, passing_aut_candidate):
            for _ in range(100):
                cand = draw(spec, rng)
                predicted = automorphism_conditions(spec, cand).ok
                actual = is_automorphism(L, extend_endomorphism(spec, L, cand))
                agreeing.append(predicted == actual)
        ok = ok and len(agreeing) >= 200 and all(agreeing)
    spec = make_spec(5, 2, 1, [["1"]])
    L = build_quasi(spec)
    for label, mutants in _aut_mutants(spec).items():
        for cand in mutants:
            v = automorphism_conditions(spec, cand)
            ok = ok and (v.ok, v.failed) == (False, label)
            ok = ok and not is_automorphism(L, extend_endomorphism(spec, L, cand))
    # equal copy scales verify; unequal ones fail exactly at the gluing check
    equal = make_scaling_automorphism(spec, [2, 2], [3, 3])
    ok = ok and automorphism_conditions(spec, equal).ok
    ok = ok and is_automorphism(L, extend_endomorphism(spec, L, equal))
    verdict("automorphism conditions == brute force (200/gluing + 25 mutants)", ok)


# ----------------------------------------------- gate isomorphism decisions


def test_isomorphism_decisions():
    start = time.perf_counter()
    ok = True

    pair_yes = (make_spec(5, 3, 2, [["1"], ["1"]]), make_spec(5, 3, 2, [["2"], ["1"]]))
    v = iso_decide(*pair_yes)
    ok = ok and v.isomorphic
    L1, L2 = build_quasi(pair_yes[0]), build_quasi(pair_yes[1])
    ok = ok and rank(v.map) == L1.dim and bracket_preserving(L1, L2, v.map)

    pair_no = (make_spec(5, 3, 2, [["1"], ["0"]]), make_spec(5, 3, 2, [["1"], ["1"]]))
    ok = ok and not iso_decide(*pair_no).isomorphic

    for spec in TEST_MATRIX:  # reflexivity
        ok = ok and iso_decide(spec, spec).isomorphic

    # symmetry
    ok = ok and iso_decide(pair_yes[1], pair_yes[0]).isomorphic
    ok = ok and not iso_decide(pair_no[1], pair_no[0]).isomorphic

    # permuting the copies of a gluing never changes the isomorphism class
    base = make_spec(5, 4, 2, [["1", "2"], ["3", "4"]])
    swapped_free = make_spec(5, 4, 2, [["2", "1"], ["4", "3"]])
    swapped_glued = make_spec(5, 4, 2, [["3", "4"], ["1", "2"]])
    ok = ok and iso_decide(base, swapped_free).isomorphic
    ok = ok and iso_decide(base, swapped_glued).isomorphic

    elapsed = time.perf_counter() - start
    verdict("isomorphism decisions with verified witnesses (< 10 s)", ok and elapsed < 10.0, f"{elapsed:.2f}s")


# ----------------------------------------------------- gate CLI determinism


def test_cli_golden_battery(tmp_path, capsys):
    algebra = tmp_path / "a.json"
    assert main(["build", "--n", "5", "--m", "2", "--r", "1", "--B", '[["1"]]', "--out", str(algebra)]) == 0
    spec_a = tmp_path / "sa.json"
    spec_a.write_text(dumps(spec_to_json(make_spec(5, 3, 2, [["1"], ["1"]]))))
    spec_b = tmp_path / "sb.json"
    spec_b.write_text(dumps(spec_to_json(make_spec(5, 3, 2, [["2"], ["1"]]))))
    capsys.readouterr()
    battery = [
        ["build", "--n", "5", "--m", "1", "--r", "1"],
        ["build", "--n", "5", "--m", "2", "--r", "1", "--B", '[["1"]]'],
        ["build", "--n", "7", "--m", "1", "--r", "1"],
        ["build", "--n", "5", "--m", "3", "--r", "2", "--B", '[["1"],["0"]]'],
        ["check", str(algebra)],
        ["der", str(algebra), "--compare"],
        ["iso", str(spec_a), str(spec_b)],
        ["iso", str(spec_a), str(spec_a)],
        ["related", str(spec_a)],
        ["related", str(spec_b)],
        ["weights", str(algebra)],
    ]
    golden = []
    for run_no in range(2):
        outputs = []
        for argv in battery:
            assert main(argv) == 0
            outputs.append(capsys.readouterr().out)
            json.loads(outputs[-1])  # every emission is valid JSON
        golden.append(outputs)
    with capsys.disabled():
        verdict("CLI battery byte-identical across runs (11 commands)", golden[0] == golden[1])
