"""Signed cycles, wheels, fans and complete graphs, with the closed-form
critical groups known for them."""

from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError, UnsupportedFamilyError
from .graph import Sign, SignedGraph, is_balanced, switching_equivalent
from .engine import ChipFiringPair, identity, is_z_superstable

KINDS = ("cycle", "wheel", "fan", "complete")
VARIANTS = ("all_positive", "all_negative", "explicit", "balanced_class", "unbalanced_class")
_MIN_N = {"cycle": 3, "wheel": 3, "fan": 1, "complete": 2}


@dataclass(frozen=True)
class FamilySpec:
    """``n`` counts all vertices for cycles and complete graphs, and the
    rim/path vertices (sink excluded) for wheels and fans."""

    kind: str
    n: int
    variant: str = "all_positive"
    signs: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedFamilyError(f"unknown family kind {self.kind!r}")
        if self.variant not in VARIANTS:
            raise UnsupportedFamilyError(f"unknown variant {self.variant!r}")
        if self.n < _MIN_N[self.kind]:
            raise PreconditionError(f"{self.kind} needs n >= {_MIN_N[self.kind]}, got {self.n}")
        if (self.variant == "explicit") != (self.signs is not None):
            raise PreconditionError("explicit variant requires a sign list (and only it)")


@dataclass(frozen=True)
class PredictedGroup:
    invariant_factors: tuple
    source_theorem: str


def family_edges(kind, n):
    """Vertex names and edge list (in sign-list order) for a family member.

    Edges avoiding the sink come first, then the edges at the sink.
    """
    if kind == "cycle":
        names = [f"v{i}" for i in range(1, n)] + ["q"]
        inner = [(f"v{i}", f"v{i + 1}") for i in range(1, n - 1)]
        return names, inner + [(f"v{n - 1}", "q"), ("q", "v1")]
    if kind in ("wheel", "fan"):
        names = [f"v{i}" for i in range(1, n + 1)] + ["q"]
        inner = [(f"v{i}", f"v{i + 1}") for i in range(1, n)]
        if kind == "wheel":
            inner.append((f"v{n}", "v1"))
        return names, inner + [("q", f"v{i}") for i in range(1, n + 1)]
    if kind == "complete":
        names = [f"v{i}" for i in range(1, n)] + ["q"]
        inner = [(f"v{i}", f"v{j}") for i in range(1, n) for j in range(i + 1, n)]
        return names, inner + [("q", f"v{i}") for i in range(1, n)]
    raise UnsupportedFamilyError(f"unknown family kind {kind!r}")


def build(spec: FamilySpec) -> SignedGraph:
    names, edges = family_edges(spec.kind, spec.n)
    inner = [i for i, (u, v) in enumerate(edges) if "q" not in (u, v)]
    signs = [Sign.POSITIVE] * len(edges)
    if spec.variant == "all_negative":
        for i in inner:
            signs[i] = Sign.NEGATIVE
    elif spec.variant == "explicit":
        if len(spec.signs) != len(edges):
            raise PreconditionError(f"{spec.kind} n={spec.n} has {len(edges)} edges, "
                                    f"got {len(spec.signs)} signs")
        signs = [Sign.parse(s) if not isinstance(s, Sign) else s for s in spec.signs]
    elif spec.variant == "unbalanced_class" and inner:
        if spec.kind == "complete":
            # the class the closed form covers is that of -K_n
            for i in inner:
                signs[i] = Sign.NEGATIVE
        else:
            signs[inner[0]] = Sign.NEGATIVE
    g = SignedGraph.from_edges([(u, v, s) for (u, v), s in zip(edges, signs)], "q", vertices=names)
    if spec.variant == "unbalanced_class" and is_balanced(g):
        raise UnsupportedFamilyError(f"{spec.kind} n={spec.n} has no unbalanced class")
    return g


@lru_cache(maxsize=None)
def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@lru_cache(maxsize=None)
def lucas(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _nontrivial(factors):
    return tuple(d for d in factors if d != 1)


def predicted_group(spec: FamilySpec) -> PredictedGroup:
    """Closed-form invariant factors (nontrivial ones only)."""
    n = spec.n
    if spec.kind == "cycle":
        return PredictedGroup(_nontrivial((n,)), "signed cycles: Z_n")
    if spec.kind == "fan":
        return PredictedGroup(_nontrivial((fibonacci(2 * n),)), "signed fans: Z_f(2n)")
    g = build(spec)
    # sink-edge signs never enter L, so balance is judged on G minus q
    balanced = is_balanced(g, modulo_sink=True)
    if spec.kind == "wheel":
        f, l = fibonacci(n), lucas(n)
        odd = n % 2 == 1
        if odd != balanced:  # odd unbalanced / even balanced
            return PredictedGroup(_nontrivial((f, 5 * f)), "signed wheels: Z_f(n) + Z_5f(n)")
        return PredictedGroup(_nontrivial((l, l)), "signed wheels: Z_l(n) + Z_l(n)")
    # complete graphs: only the balanced class and the class of -K_n are known
    if balanced:
        return PredictedGroup(_nontrivial((n,) * (n - 2)), "balanced K_n: Z_n^(n-2)")
    neg = build(FamilySpec("complete", n, "all_negative"))
    if n >= 3 and switching_equivalent(g, neg, modulo_sink=True):
        return PredictedGroup(_nontrivial((n - 2,) * (n - 3) + ((n - 2) * (2 * n - 3),)),
                              "class of -K_n: Z_(n-2)^(n-3) + Z_(n-2)(2n-3)")
    raise UnsupportedFamilyError("critical group of this signed complete graph is open")


def cycle_statistic(c, m: int) -> int:
    """Alternating weighted sum of c modulo 2m+1 (a class invariant on -C_{2m+1})."""
    if len(c) != 2 * m:
        raise PreconditionError(f"expected a configuration of length {2 * m}, got {len(c)}")
    return sum((-1) ** j * (j + 1) * x for j, x in enumerate(c)) % (2 * m + 1)


def is_palindromic(c) -> bool:
    c = list(c)
    return c == c[::-1]


def _odd_negative_cycle_m(p: ChipFiringPair):
    n = p.n
    if n % 2 or n < 2:
        return None
    expected = [[2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    return n // 2 if p.L.tolist() == expected else None


def duality_map(p: ChipFiringPair, c) -> tuple:
    """c -> identity + c, mapping superstables of -C_{2m+1} onto criticals."""
    if _odd_negative_cycle_m(p) is None:
        raise PreconditionError("duality map is defined for -C_(2m+1) only")
    if not is_z_superstable(p, c):
        raise PreconditionError(f"{list(c)} is not z-superstable")
    return tuple(a + b for a, b in zip(identity(p), c))
