"""Chip-firing on a signed graph through the pair (L, M).

``L`` is the reduced signed Laplacian and ``M`` the reduced Laplacian of
the underlying graph.  A configuration ``c`` is valid when ``M L^-1 c`` is
nonnegative.  Internally the image ``x = M L^-1 c`` is carried as the
integer vector ``X = D * x`` with ``D = |det L|``, so every validity,
stability and superstability test is plain integer arithmetic.  In those
coordinates site ``i`` is ready to fire exactly when ``x_i >= deg(v_i)``,
and firing it moves ``x`` by ``-M e_i``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import ceil, lcm, prod

import numpy as np

from .errors import (
    DimensionError,
    DisconnectedGraphError,
    IntegralityError,
    InvalidConfigurationError,
    NonTerminationError,
    NotCriticalError,
    PreconditionError,
    ResourceLimitError,
    SearchExhaustedError,
    SingularMatrixError,
)
from .graph import Sign, SignedGraph, reduced_laplacians
from .linalg import Matrix, det, hermite_lower, invert, mat_vec, smith_normal_form

DEFAULT_CHI_CAP = 20
DEFAULT_BOX_CAP = 2 ** 10
DEFAULT_ENUM_CAP = 200_000
MAX_FIRING_ROUNDS = 1_000_000
_BOX_POINT_LIMIT = 20_000_000


@dataclass(frozen=True)
class CriticalGroup:
    invariant_factors: tuple
    order: int

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z_{d}" for d in self.invariant_factors)


@dataclass(frozen=True, eq=False)
class ChipFiringPair:
    graph: SignedGraph
    L: Matrix
    M: Matrix
    L_inv: Matrix
    M_inv: Matrix
    LM_inv: Matrix
    ML_inv: Matrix
    det_L: int
    s: tuple
    degrees: tuple

    @property
    def n(self):
        return self.L.rows

    @property
    def order(self):
        return abs(self.det_L)

    @cached_property
    def _P(self):
        # |det L| * M L^-1, an integer matrix
        return Matrix([[int(x * self.order) for x in row] for row in self.ML_inv])

    @cached_property
    def _P_np(self):
        return _as_np(self._P.tolist())

    @cached_property
    def snf(self):
        return smith_normal_form(self.L)

    @cached_property
    def _u_inv(self):
        return Matrix(invert(self.snf.u))

    @cached_property
    def _neighbors(self):
        g = self.graph
        idx = {v: k for k, v in enumerate(g.nonsink)}
        return tuple(tuple(idx[w] for w in g.neighbors(v) if w in idx) for v in g.nonsink)

    @cached_property
    def nonsink_connected(self):
        return self.graph.is_connected(without_sink=True)


def make_pair(g: SignedGraph) -> ChipFiringPair:
    if g.num_vertices < 2:
        raise DimensionError("a chip-firing pair needs at least two vertices")
    g.require_connected()
    L, M = reduced_laplacians(g)
    d = det(L)
    if d == 0:
        raise SingularMatrixError("reduced signed Laplacian is singular")
    L_inv, M_inv = invert(L), invert(M)
    sink_nbrs = g.neighbors(g.sink)
    return ChipFiringPair(
        graph=g, L=L, M=M, L_inv=L_inv, M_inv=M_inv,
        LM_inv=L @ M_inv, ML_inv=M @ L_inv, det_L=d,
        s=tuple(int(v in sink_nbrs) for v in g.nonsink),
        degrees=tuple(g.degree(v) for v in g.nonsink),
    )


def _as_np(rows):
    flat = [abs(x) for r in rows for x in (r if isinstance(r, (list, tuple)) else [r])]
    big = max(flat, default=0) >= 2 ** 40
    return np.array(rows, dtype=object if big else np.int64)


def _config(p, c):
    c = tuple(int(x) for x in c)
    if len(c) != p.n:
        raise DimensionError(f"configuration has length {len(c)}, expected {p.n}")
    return c


def _scaled(p, c):
    return mat_vec(p._P, c)


def _require_valid(p, c):
    c = _config(p, c)
    if not is_valid(p, c):
        raise InvalidConfigurationError(f"configuration {list(c)} is not valid")
    return c


# -- validity and coordinates ------------------------------------------------

def is_valid(p: ChipFiringPair, c) -> bool:
    return all(x >= 0 for x in _scaled(p, _config(p, c)))


def to_R(p: ChipFiringPair, c) -> tuple:
    return mat_vec(p.ML_inv, _config(p, c))


def from_R(p: ChipFiringPair, x) -> tuple:
    if len(x) != p.n:
        raise DimensionError(f"point has length {len(x)}, expected {p.n}")
    c = mat_vec(p.LM_inv, [Fraction(v) for v in x])
    if not all(isinstance(v, int) for v in c):
        raise IntegralityError(f"LM^-1 x = {[str(v) for v in c]} is not integral")
    return c


# -- firing --------------------------------------------------------------------

def fire(p: ChipFiringPair, c, i) -> tuple:
    c = _config(p, c)
    col = p.L.column(i)
    return tuple(a - b for a, b in zip(c, col))


def fire_multiset(p: ChipFiringPair, c, z) -> tuple:
    c = _config(p, c)
    lz = mat_vec(p.L, _config(p, z))
    return tuple(a - b for a, b in zip(c, lz))


def ready_to_fire(p: ChipFiringPair, c, i) -> bool:
    """Whether ``c - L e_i`` is still valid (checked directly in S+)."""
    c = _require_valid(p, c)
    if not 0 <= i < p.n:
        raise IndexError(f"site {i} out of range 0..{p.n - 1}")
    return is_valid(p, fire(p, c, i))


def legal_sites(p: ChipFiringPair, c) -> list:
    return [i for i in range(p.n) if ready_to_fire(p, c, i)]


def is_stable(p: ChipFiringPair, c) -> bool:
    c = _require_valid(p, c)
    D = p.order
    return all(x < D * d for x, d in zip(_scaled(p, c), p.degrees))


def _stabilize_scaled(p, X, max_rounds=MAX_FIRING_ROUNDS):
    """Stabilize a scaled R+ point; returns (X_stable, firing_vector)."""
    D = p.order
    thresholds = [D * d for d in p.degrees]
    nbrs = p._neighbors
    X = list(X)
    f = [0] * p.n
    for _ in range(max_rounds):
        i = next((k for k in range(p.n) if X[k] >= thresholds[k]), None)
        if i is None:
            return X, f
        k = X[i] // thresholds[i]
        f[i] += k
        X[i] -= k * thresholds[i]
        for j in nbrs[i]:
            X[j] += k * D
    raise NonTerminationError(f"stabilization did not finish within {max_rounds} rounds",
                              rounds=max_rounds)


def stabilize(p: ChipFiringPair, c):
    """Stabilize a valid configuration.

    Returns ``(stable, firing_vector)`` with ``stable = c - L @ firing_vector``.
    The lowest-index ready site is fired repeatedly; the work happens on the
    R+ image, where legal firings correspond one-to-one.
    """
    c = _require_valid(p, c)
    _, f = _stabilize_scaled(p, _scaled(p, c))
    return fire_multiset(p, c, f), tuple(f)


# -- superstability ------------------------------------------------------------

@lru_cache(maxsize=64)
def _m_chi_table(M: Matrix):
    """Rows ``M @ chi`` for every nonzero 0/1 vector chi (bit k = site k)."""
    n = M.rows
    chi = ((np.arange(1, 1 << n)[:, None] >> np.arange(n)) & 1).astype(np.int64)
    return chi @ np.array(M.tolist(), dtype=np.int64).T


def _chi_superstable_scaled(p, X, chi_cap):
    if p.n > chi_cap:
        raise ResourceLimitError(f"{p.n} sites exceeds the chi-test cap {chi_cap} "
                                 f"(2^n - 1 subsets)", cap=chi_cap)
    D = p.order
    # chi = e_i already rules out any x_i >= deg_i
    if any(x >= D * d for x, d in zip(X, p.degrees)):
        return False
    table = _m_chi_table(p.M)
    Xa = np.array(X, dtype=object if max(map(abs, X), default=0) >= 2 ** 40 else np.int64)
    return not bool(np.any(np.all(Xa >= D * table, axis=1)))


def is_z_superstable(p: ChipFiringPair, c, chi_cap=DEFAULT_CHI_CAP) -> bool:
    """No nonzero 0/1 set-firing keeps ``M L^-1 c`` nonnegative.

    By the z = chi theorem for signed graphs this is the same as
    z-superstability.
    """
    c = _require_valid(p, c)
    return _chi_superstable_scaled(p, _scaled(p, c), chi_cap)


def _superstable_mask(p, X_rows, chi_cap):
    """Vectorised chi-test over a batch of scaled points (N x n)."""
    if p.n > chi_cap:
        raise ResourceLimitError(f"{p.n} sites exceeds the chi-test cap {chi_cap}", cap=chi_cap)
    D = p.order
    X_rows = np.asarray(X_rows)
    ok = np.all(X_rows < D * np.array(p.degrees, dtype=np.int64), axis=1)
    table = D * _m_chi_table(p.M)
    idx = np.nonzero(ok)[0]
    for start in range(0, len(idx), 512):
        block = idx[start:start + 512]
        sub = X_rows[block]
        fires = np.zeros(len(block), dtype=bool)
        for t0 in range(0, len(table), 2048):
            t = table[t0:t0 + 2048]
            fires |= np.any(np.all(sub[:, None, :] >= t[None, :, :], axis=2), axis=1)
        ok[block] = ~fires
    return ok


# -- classes --------------------------------------------------------------------

def class_label(p: ChipFiringPair, c) -> tuple:
    c = _config(p, c)
    uc = mat_vec(p.snf.u, c)
    return tuple(x % d if d else x for x, d in zip(uc, p.snf.d))


def same_class(p: ChipFiringPair, c, d) -> bool:
    c, d = _config(p, c), _config(p, d)
    return all(isinstance(v, int) for v in mat_vec(p.L_inv, [a - b for a, b in zip(c, d)]))


def label_preimage(p: ChipFiringPair, label) -> tuple:
    """An integer configuration whose class label is ``label``."""
    return mat_vec(p._u_inv, list(label))


def all_labels(p: ChipFiringPair):
    return product(*(range(d) for d in p.snf.d))


def critical_group(p: ChipFiringPair) -> CriticalGroup:
    d = p.snf.d
    return CriticalGroup(invariant_factors=tuple(x for x in d if x != 1), order=prod(d))


# -- critical configurations -----------------------------------------------------

def _big_firing_vector(p, x_c):
    """Integer z with ``x_c + M z >= deg + 1`` componentwise."""
    target = [d + 1 - x for d, x in zip(p.degrees, x_c)]
    pad = 0
    while True:
        z = [ceil(v) for v in mat_vec(p.M_inv, [t + pad for t in target])]
        mz = mat_vec(p.M, z)
        if all(a >= t for a, t in zip(mz, target)):
            return z
        pad += 1


def critical_rep(p: ChipFiringPair, c) -> tuple:
    """The unique critical configuration equivalent to ``c``.

    Adds ``M z`` in R+ so that every site can fire, stabilizes, and maps
    back; the result is stable and reachable by construction.
    """
    c = _config(p, c)
    x_c = to_R(p, c)
    z = _big_firing_vector(p, x_c)
    X0 = [a + p.order * b for a, b in zip(_scaled(p, c), mat_vec(p.M, z))]
    _, f = _stabilize_scaled(p, X0)
    return fire_multiset(p, c, [a - b for a, b in zip(f, z)])


def sink_firing_constant(p: ChipFiringPair):
    """Least N0 > 0 with ``N0 L^-1 s`` a nonnegative integer vector, or None.

    None means ``s`` is not valid, so sink firing cannot certify criticality.
    """
    regular = _signed_regular(p.graph)
    if regular is not None:
        _, m_neg = regular
        return 2 * m_neg + 1
    if not is_valid(p, p.s):
        return None
    y = mat_vec(p.L_inv, p.s)
    if any(v < 0 for v in y) or not any(y):
        return None
    return lcm(*(Fraction(v).denominator for v in y))


def is_critical(p: ChipFiringPair, c, method="auto") -> bool:
    """Criticality of a valid configuration.

    ``method="sink"`` checks ``stab(c + N0 s) == c``; ``method="rep"`` checks
    that ``c`` is stable and equals its class's critical representative.
    ``"auto"`` prefers the sink test when it applies.
    """
    c = _require_valid(p, c)
    n0 = sink_firing_constant(p)
    if method == "auto":
        if n0 is not None and p.nonsink_connected:
            method = "sink"
        elif n0 is None and not p.nonsink_connected:
            raise PreconditionError("criticality is undetermined when s is invalid and "
                                    "G minus the sink is disconnected")
        else:
            method = "rep"
    if method == "sink":
        if n0 is None:
            raise PreconditionError("sink firing constant unavailable (s is not valid)")
        if not p.nonsink_connected:
            raise DisconnectedGraphError("sink-firing test needs G minus the sink connected")
        bumped = [a + n0 * b for a, b in zip(c, p.s)]
        return stabilize(p, bumped)[0] == c
    if method == "rep":
        return is_stable(p, c) and critical_rep(p, c) == c
    raise ValueError(f"unknown method {method!r}")


def enumerate_criticals(p: ChipFiringPair, cap=DEFAULT_ENUM_CAP, jobs=1) -> list:
    """All |det L| critical configurations, ordered by class label.

    Same construction as :func:`critical_rep`, run for every class at once:
    one firing vector ``z`` makes every label preimage able to fire
    everywhere, and the whole batch is stabilized together.
    """
    _check_enum_cap(p, cap)
    starts = [label_preimage(p, lab) for lab in all_labels(p)]
    if jobs > 1 and len(starts) > 4096:
        from concurrent.futures import ProcessPoolExecutor
        size = -(-len(starts) // jobs)
        chunks = [starts[k:k + size] for k in range(0, len(starts), size)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return [c for part in ex.map(_criticals_from, [p] * len(chunks), chunks) for c in part]
    return _criticals_from(p, starts)


def _criticals_from(p, starts):
    C = _as_np(starts)
    X = C @ p._P_np.T
    D = p.order
    low = [Fraction(int(v), D) for v in X.min(axis=0)]
    z = _big_firing_vector(p, low)
    X = X + _as_np(mat_vec(p.M, z)) * D
    _, F = _stabilize_batch(p, X)
    out = C - (F - _as_np(z)) @ _as_np(p.L.tolist()).T
    return [tuple(int(v) for v in row) for row in out]


def _stabilize_batch(p, X, max_rounds=MAX_FIRING_ROUNDS):
    """Stabilize many scaled R+ points (rows of X) at once.

    Every ready site fires as often as it can in each round; firing one
    site only adds to the others, so this is a legal firing order and by
    confluence ends where lowest-index-first does.
    """
    D = p.order
    thresholds = _as_np([D * d for d in p.degrees])
    step = _as_np(p.M.tolist()) * D
    F = np.zeros_like(X)
    for _ in range(max_rounds):
        K = X // thresholds
        active = K.any(axis=1)
        if not active.any():
            return X, F
        K = K[active]
        F[active] += K
        X[active] -= K @ step
    raise NonTerminationError(f"stabilization did not finish within {max_rounds} rounds",
                              rounds=max_rounds)


def _check_enum_cap(p, cap):
    if p.order > cap:
        raise ResourceLimitError(f"|det L| = {p.order} exceeds the enumeration cap {cap}",
                                 cap=cap, order=p.order)


# -- superstable enumeration -----------------------------------------------------

def _lattice_points_below_degree(p):
    """All scaled R+ points X (lattice P Z^n) with 0 <= X_i < D deg_i.

    Walks the lower-triangular Hermite basis coordinate by coordinate.
    Returns (X_rows, coefficient_rows); configurations are ``U @ a``.
    """
    H = hermite_lower(p._P)
    n, D = p.n, p.order
    upper = [D * d for d in p.degrees]
    pts, coeffs = [], []
    X = [0] * n
    a = [0] * n

    def walk(k):
        if k == n:
            pts.append(list(X))
            coeffs.append(list(a))
            return
        partial = sum(H[k, j] * a[j] for j in range(k))
        h = H[k, k]
        lo = -(partial // h)  # ceil(-partial / h)
        hi = (upper[k] - 1 - partial) // h
        for ak in range(lo, hi + 1):
            a[k] = ak
            X[k] = partial + h * ak
            walk(k + 1)
        a[k] = 0

    walk(0)
    return pts, coeffs, H


def enumerate_superstables(p: ChipFiringPair, cap=DEFAULT_ENUM_CAP,
                           chi_cap=DEFAULT_CHI_CAP, method="lattice", bound=DEFAULT_BOX_CAP) -> list:
    """All |det L| z-superstable configurations, ordered by class label.

    ``method="lattice"`` enumerates R+ lattice points with x_i < deg(v_i)
    (necessary for superstability) and applies the chi-test;
    ``method="box"`` scans growing boxes [0, B]^n of configurations.
    """
    _check_enum_cap(p, cap)
    if method == "box":
        found = _box_search(p, None, chi_cap, bound)
    elif method == "lattice":
        pts, coeffs, H = _lattice_points_below_degree(p)
        mask = _superstable_mask(p, _as_np(pts), chi_cap) if pts else []
        U = mat_vec_rows(invert(p._P) @ H, [a for a, ok in zip(coeffs, mask) if ok])
        found = {class_label(p, c): c for c in U}
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(found) != p.order:
        raise SearchExhaustedError(f"found {len(found)} of {p.order} superstable classes",
                                   found=len(found), expected=p.order)
    return [found[lab] for lab in sorted(found)]


def mat_vec_rows(A: Matrix, rows):
    out = []
    for r in rows:
        v = mat_vec(A, r)
        if not all(isinstance(x, int) for x in v):
            raise IntegralityError("lattice coefficient mapped to a non-integral configuration")
        out.append(v)
    return out


def _box_search(p, want_label, chi_cap, bound_cap):
    """Doubling box search for superstables; all classes, or one label."""
    neg_deg = [sum(1 for w in p.graph.neighbors(v) if p.graph.sign(v, w) is Sign.NEGATIVE)
               for v in p.graph.nonsink]
    B = max(1, max(p.degrees) * (2 * max(neg_deg, default=0) + 1))
    U = np.array(p.snf.u.tolist(), dtype=np.int64)
    dvec = np.array(p.snf.d, dtype=np.int64)
    P = p._P_np
    while True:
        B = min(B, bound_cap)
        if (B + 1) ** p.n > _BOX_POINT_LIMIT:
            raise ResourceLimitError(f"box [0,{B}]^{p.n} is too large to scan", bound=B)
        grid = np.indices((B + 1,) * p.n).reshape(p.n, -1).T.astype(np.int64)
        if want_label is not None:
            labels = (grid @ U.T) % dvec
            grid = grid[np.all(labels == np.array(want_label), axis=1)]
        X = grid @ P.T
        grid, X = grid[np.all(X >= 0, axis=1)], X[np.all(X >= 0, axis=1)]
        mask = _superstable_mask(p, X, chi_cap)
        found = {}
        for row in grid[mask]:
            c = tuple(int(v) for v in row)
            found.setdefault(class_label(p, c), c)
        if want_label is not None and found:
            return found
        if want_label is None and len(found) == p.order:
            return found
        if B >= bound_cap:
            raise SearchExhaustedError(f"superstable search exhausted at bound {B}", bound=B,
                                       found=len(found))
        B *= 2


def superstable_rep(p: ChipFiringPair, c, method="lattice", bound=DEFAULT_BOX_CAP,
                    chi_cap=DEFAULT_CHI_CAP) -> tuple:
    """The unique z-superstable configuration equivalent to ``c``."""
    lab = class_label(p, c)
    if method == "box":
        return _box_search(p, lab, chi_cap, bound)[lab]
    for rep in _superstables_cached(p, chi_cap):
        if class_label(p, rep) == lab:
            return rep
    raise SearchExhaustedError(f"no superstable found for class {lab}")


def _superstables_cached(p, chi_cap):
    cache = p.__dict__.setdefault("_superstable_cache", {})
    if chi_cap not in cache:
        cache[chi_cap] = enumerate_superstables(p, cap=float("inf"), chi_cap=chi_cap)
    return cache[chi_cap]


# -- group structure ---------------------------------------------------------------

def identity(p: ChipFiringPair) -> tuple:
    """Identity of K(G_phi), computed as LM^-1 applied to the identity of |G|."""
    pu = make_pair(p.graph.underlying())
    e_g = critical_rep(pu, [0] * p.n)
    e = mat_vec(p.LM_inv, e_g)
    if not all(isinstance(v, int) for v in e):
        raise IntegralityError("LM^-1 e_G is not integral")
    return e


def group_add(p: ChipFiringPair, c1, c2, check=True) -> tuple:
    c1, c2 = _config(p, c1), _config(p, c2)
    if check:
        for c in (c1, c2):
            if not is_valid(p, c) or not is_critical(p, c):
                raise NotCriticalError(f"{list(c)} is not critical")
    return stabilize(p, [a + b for a, b in zip(c1, c2)])[0]


def classical_superstables(p: ChipFiringPair) -> list:
    """Superstable configurations of the underlying unsigned graph |G|."""
    cache = p.__dict__.setdefault("_classical_cache", [])
    if not cache:
        box = np.indices(p.degrees).reshape(p.n, -1).T.astype(np.int64)
        table = _m_chi_table(p.M)
        keep = []
        for start in range(0, len(box), 512):
            sub = box[start:start + 512]
            fires = np.any(np.all(sub[:, None, :] >= table[None, :, :], axis=2), axis=1)
            keep.extend(tuple(int(v) for v in row) for row in sub[~fires])
        cache.extend(keep)
    return list(cache)


def superstable_certificate(p: ChipFiringPair, c) -> bool:
    """Sufficient test: ``M L^-1 c`` lies below some superstable of |G|."""
    c = _require_valid(p, c)
    x = to_R(p, c)
    return any(all(a <= b for a, b in zip(x, w)) for w in classical_superstables(p))


def _signed_regular(g: SignedGraph):
    """(m, m_minus) if the sink is universal and every nonsink vertex has
    degree m and m_minus negative edges to other nonsink vertices."""
    ns = g.nonsink
    if any(g.sign(g.sink, v) is None for v in ns):
        return None
    degs = {g.degree(v) for v in ns}
    negs = {sum(1 for w in g.neighbors(v) if w != g.sink and g.sign(v, w) is Sign.NEGATIVE)
            for v in ns}
    if len(degs) != 1 or len(negs) != 1:
        return None
    return degs.pop(), negs.pop()


def max_critical(p: ChipFiringPair):
    """``m' * 1`` with ``m' = m(2 m_- + 1) - 1`` for signed-regular graphs with
    a universal sink; None when the structure does not apply."""
    reg = _signed_regular(p.graph)
    if reg is None:
        return None
    m, m_neg = reg
    return tuple([m * (2 * m_neg + 1) - 1] * p.n)
