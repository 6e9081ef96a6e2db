import random

import pytest

from signedchip import engine as E
from signedchip.errors import PreconditionError, UnsupportedFamilyError
from signedchip.families import (
    FamilySpec,
    build,
    cycle_statistic,
    duality_map,
    family_edges,
    fibonacci,
    is_palindromic,
    lucas,
    predicted_group,
)
from signedchip.graph import (
    is_balanced,
    reduced_laplacians,
    spanning_tree_count,
    switching_equivalent,
)
from signedchip.linalg import Matrix, det

from conftest import neg_cycle


def computed(spec):
    return E.critical_group(E.make_pair(build(spec))).invariant_factors


def test_sequences():
    assert (fibonacci(0), fibonacci(1), lucas(0), lucas(1)) == (0, 1, 2, 1)
    assert fibonacci(10) == 55 and lucas(10) == 123
    for n in range(1, 30):
        assert lucas(n) == fibonacci(n - 1) + fibonacci(n + 1)
    with pytest.raises(ValueError):
        fibonacci(-1)


def test_build_examples():
    L = reduced_laplacians(build(FamilySpec("cycle", 3, "all_negative")))[0]
    assert L == Matrix([[2, 1], [1, 2]])
    L = reduced_laplacians(build(FamilySpec("wheel", 6)))[0]
    n = 6
    assert L == Matrix([[3 if i == j else (-1 if (i - j) % n in (1, n - 1) else 0)
                         for j in range(n)] for i in range(n)])
    L = reduced_laplacians(build(FamilySpec("fan", 5)))[0]
    assert [L[i, i] for i in range(5)] == [2, 3, 3, 3, 2]
    assert all(L[i, i + 1] == -1 for i in range(4))


def test_spec_validation():
    with pytest.raises(UnsupportedFamilyError):
        FamilySpec("star", 4)
    with pytest.raises(PreconditionError):
        FamilySpec("wheel", 2)
    with pytest.raises(PreconditionError):
        FamilySpec("cycle", 4, "explicit")
    with pytest.raises(PreconditionError):
        build(FamilySpec("cycle", 4, "explicit", ("+",)))
    with pytest.raises(UnsupportedFamilyError):
        build(FamilySpec("fan", 1, "unbalanced_class"))


def test_unbalanced_variant_is_unbalanced():
    for kind, n in [("cycle", 5), ("wheel", 4), ("fan", 3), ("complete", 4)]:
        assert not is_balanced(build(FamilySpec(kind, n, "unbalanced_class")))
        assert is_balanced(build(FamilySpec(kind, n, "balanced_class")))


def test_predicted_examples():
    assert predicted_group(FamilySpec("wheel", 5, "unbalanced_class")).invariant_factors == (5, 25)
    assert predicted_group(FamilySpec("fan", 3)).invariant_factors == (8,)
    assert predicted_group(FamilySpec("complete", 5, "all_negative")).invariant_factors == (3, 3, 21)
    # one negative inner edge: neither balanced nor in the class of -K_5
    with pytest.raises(UnsupportedFamilyError):
        predicted_group(FamilySpec("complete", 5, "explicit", ("-",) + ("+",) * 9))


@pytest.mark.parametrize("n", range(3, 11))
def test_wheel_table(n):
    f, l = fibonacci(n), lucas(n)
    bal = computed(FamilySpec("wheel", n, "balanced_class"))
    unb = computed(FamilySpec("wheel", n, "unbalanced_class"))
    fib_pair, luc_pair = (f, 5 * f), (l, l)
    if n % 2:
        assert (bal, unb) == (luc_pair, fib_pair)
    else:
        assert (bal, unb) == (fib_pair, luc_pair)
    assert det_of("wheel", n, "balanced_class") * det_of("wheel", n, "unbalanced_class") == 5 * (f * l) ** 2
    for v in ("balanced_class", "unbalanced_class", "all_negative"):
        spec = FamilySpec("wheel", n, v)
        assert computed(spec) == predicted_group(spec).invariant_factors


def det_of(kind, n, variant):
    return abs(det(reduced_laplacians(build(FamilySpec(kind, n, variant)))[0]))


@pytest.mark.parametrize("n", range(3, 8))
def test_complete_classes(n):
    bal = FamilySpec("complete", n, "balanced_class")
    neg = FamilySpec("complete", n, "all_negative")
    assert computed(bal) == tuple(d for d in (n,) * (n - 2) if d != 1)
    expect = (n - 2,) * (n - 3) + ((n - 2) * (2 * n - 3),)
    assert computed(neg) == tuple(d for d in expect if d != 1)
    for spec in (bal, neg):
        assert computed(spec) == predicted_group(spec).invariant_factors


def test_random_signs_cycles_and_fans():
    rng = random.Random(11)
    for kind, ns in (("cycle", range(3, 13)), ("fan", range(1, 11))):
        for n in ns:
            m = len(family_edges(kind, n)[1])
            for _ in range(5):
                spec = FamilySpec(kind, n, "explicit", tuple(rng.choice("+-") for _ in range(m)))
                assert computed(spec) == predicted_group(spec).invariant_factors


def test_cycle_statistic():
    assert cycle_statistic((0, 0, 0, 0), 2) == 0
    for a in range(12):
        assert cycle_statistic((a, 0, 0, 0), 2) == a % 5
    p = neg_cycle(5)
    rng = random.Random(5)
    for _ in range(20):
        c = tuple(rng.randint(-6, 6) for _ in range(4))
        for i in range(4):
            assert cycle_statistic(E.fire(p, c, i), 2) == cycle_statistic(c, 2)
    with pytest.raises(PreconditionError):
        cycle_statistic((1, 2, 3), 2)


def test_palindromes():
    assert is_palindromic((1, 2, 2, 1))
    assert not is_palindromic((1, 0, 0, 0))
    for m in (2, 3, 4):
        assert all(is_palindromic(c) for c in E.enumerate_superstables(neg_cycle(2 * m + 1)))


@pytest.mark.parametrize("n", [3, 5, 7])
def test_duality(n):
    p = neg_cycle(n)
    assert duality_map(p, [0] * (n - 1)) == E.identity(p)
    assert E.is_critical(p, E.identity(p))
    image = {duality_map(p, c) for c in E.enumerate_superstables(p)}
    assert image == set(E.enumerate_criticals(p))
    with pytest.raises(PreconditionError):
        duality_map(p, [9] * (n - 1))
    with pytest.raises(PreconditionError):
        duality_map(neg_cycle(4), [0, 0, 0])


@pytest.mark.parametrize("n", range(4, 11, 2))
def test_even_wheel_materializations_agree(n):
    one = build(FamilySpec("wheel", n, "unbalanced_class"))
    rim = [i for i, (u, v) in enumerate(family_edges("wheel", n)[1]) if "q" not in (u, v)]
    # all rim edges but the last negative: rim sign product is -1 for even n
    signs = tuple("-" if i in rim[:-1] else "+" for i in range(len(one.edges)))
    spec = FamilySpec("wheel", n, "explicit", signs)
    assert switching_equivalent(one, build(spec), modulo_sink=True)
    assert computed(spec) == (lucas(n), lucas(n))


@pytest.mark.parametrize("n", range(1, 11))
def test_fan_spanning_trees(n):
    assert spanning_tree_count(build(FamilySpec("fan", n))) == fibonacci(2 * n)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_cycle_statistic_surjective(m):
    p = neg_cycle(2 * m + 1)
    values = {cycle_statistic(c, m) for c in E.enumerate_criticals(p)}
    assert values == set(range(2 * m + 1))
