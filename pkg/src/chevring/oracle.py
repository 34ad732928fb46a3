"""Brute-force verifiers that do not reuse the fast code paths.

Scalars are multiplied by schoolbook polynomial arithmetic written here,
matrices by an explicit triple loop, and membership by a Leibniz
determinant and a direct form check.  Only generators and defining data
(roots, Weyl representatives, the symplectic form) are taken from the
group module.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .budget import BudgetExceeded, require
from .group import GroupDescriptor, Matrix, build_group, demo_ring

DEFAULT_SEED = 20240601


# ---------------------------------------------------------------------------
# scalars


class NaiveRing:
    """Arithmetic on the same integer encoding as the ring module, done slowly."""

    def __init__(self, ring):
        self.ring = ring
        self.p, self.r, self.n, self.kind = ring.p, ring.r, ring.n, ring.kind
        self.witt = ring.kind == "witt"
        self.modulus = self.p ** self.r if self.witt else self.p
        self.dim = self.n if self.witt else self.r * self.n
        self.size = self.modulus ** self.dim
        self.f = tuple(ring.f)
        self._mul_memo: dict = {}
        self._inv_memo: dict = {}
        self.zero = 0
        self.one = self.encode([1] + [0] * (self.dim - 1))

    def encode(self, c: Sequence[int]) -> int:
        out = 0
        for x in c:
            out = out * self.modulus + x % self.modulus
        return out

    def decode(self, a: int) -> list[int]:
        out = []
        for _ in range(self.dim):
            a, x = divmod(a, self.modulus)
            out.append(x)
        return out[::-1]

    def _reduce_poly(self, poly: list[int], mod: int) -> list[int]:
        n, f = self.n, self.f
        poly = poly[:]
        for k in range(len(poly) - 1, n - 1, -1):
            c = poly[k] % mod
            poly[k] = 0
            if c:
                for i in range(n):
                    poly[k - n + i] -= c * f[i]
        return [x % mod for x in poly[:n]] + [0] * max(0, n - len(poly))

    def _poly_mul(self, a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self._reduce_poly(out, mod)

    def add(self, a: int, b: int) -> int:
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def neg(self, a: int) -> int:
        return self.encode([-x for x in self.decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        hit = self._mul_memo.get(key)
        if hit is not None:
            return hit
        ca, cb = self.decode(a), self.decode(b)
        if self.witt:
            out = self.encode(self._poly_mul(ca, cb, self.modulus))
        else:
            n, r = self.n, self.r
            blocks = [[0] * n for _ in range(r)]
            for i in range(r):
                for j in range(r - i):
                    prod_ij = self._poly_mul(ca[i * n:(i + 1) * n], cb[j * n:(j + 1) * n], self.p)
                    blocks[i + j] = [(x + y) % self.p for x, y in zip(blocks[i + j], prod_ij)]
            out = self.encode([x for blk in blocks for x in blk])
        self._mul_memo[key] = out
        return out

    def is_unit(self, a: int) -> bool:
        c = self.decode(a)
        if self.witt:
            return any(x % self.p for x in c)
        return any(c[:self.n])

    def valuation(self, a: int) -> int:
        c = self.decode(a)
        if self.witt:
            v = self.r
            for x in c:
                if x:
                    k = 0
                    while x % self.p == 0:
                        x //= self.p
                        k += 1
                    v = min(v, k)
            return v
        for j in range(self.r):
            if any(c[j * self.n:(j + 1) * self.n]):
                return j
        return self.r

    def inv(self, a: int) -> int:
        if a not in self._inv_memo:
            self._inv_memo[a] = next(b for b in range(self.size) if self.mul(a, b) == self.one)
        return self._inv_memo[a]

    def units(self) -> list[int]:
        return [a for a in range(self.size) if self.is_unit(a)]

    def ideal(self, i: int) -> list[int]:
        return [a for a in range(self.size) if self.valuation(a) >= i]

    def tables(self):
        """Multiplication, addition and valuation tables as numpy arrays."""
        s = self.size
        require("naive ring tables", s * s)
        mul = np.array([[self.mul(a, b) for b in range(s)] for a in range(s)], dtype=np.int32)
        add = np.array([[self.add(a, b) for b in range(s)] for a in range(s)], dtype=np.int32)
        val = np.array([self.valuation(a) for a in range(s)], dtype=np.int32)
        neg = np.array([self.neg(a) for a in range(s)], dtype=np.int32)
        return mul, add, val, neg


# ---------------------------------------------------------------------------
# matrices


class NaiveGroup:
    """Matrix multiplication and membership for a preset, independent of the group module."""

    def __init__(self, G: GroupDescriptor):
        self.G = G
        self.R = NaiveRing(G.ring)
        self.d = G.d
        self.preset = G.preset
        self.identity = tuple(self.R.one if i == j else 0 for i in range(self.d) for j in range(self.d))
        form = G.datum.form
        self.form = None
        if form is not None:
            self.form = tuple(self._from_int(v) for row in form for v in row)

    def _from_int(self, k: int) -> int:
        R = self.R
        if k >= 0:
            out = R.zero
            for _ in range(k):
                out = R.add(out, R.one)
            return out
        return R.neg(self._from_int(-k))

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        R, d = self.R, self.d
        out = []
        for i in range(d):
            for j in range(d):
                acc = R.zero
                for k in range(d):
                    acc = R.add(acc, R.mul(a[i * d + k], b[k * d + j]))
                out.append(acc)
        return tuple(out)

    def prod(self, *ms: Matrix) -> Matrix:
        out = self.identity
        for m in ms:
            out = self.mul(out, m)
        return out

    def det(self, a: Matrix) -> int:
        R, d = self.R, self.d
        total = R.zero
        for perm in permutations(range(d)):
            sign = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j]) % 2
            term = R.one
            for i in range(d):
                term = R.mul(term, a[i * d + perm[i]])
            total = R.sub(total, term) if sign else R.add(total, term)
        return total

    def transpose(self, a: Matrix) -> Matrix:
        d = self.d
        return tuple(a[j * d + i] for i in range(d) for j in range(d))

    def is_member(self, a: Matrix) -> bool:
        det = self.det(a)
        if self.preset.startswith("GL"):
            return self.R.is_unit(det)
        if det != self.R.one:
            return False
        if self.form is not None:
            return self.prod(self.transpose(a), self.form, a) == self.form
        return True

    def inv(self, a: Matrix) -> Matrix:
        """Adjugate over determinant."""
        R, d = self.R, self.d
        dinv = R.inv(self.det(a))
        out = [0] * (d * d)
        for i in range(d):
            for j in range(d):
                minor = [a[r * d + c] for r in range(d) if r != j for c in range(d) if c != i]
                sub = NaiveGroup.__new__(NaiveGroup)
                sub.R, sub.d = R, d - 1
                cof = sub.det(tuple(minor)) if d > 1 else R.one
                if (i + j) % 2:
                    cof = R.neg(cof)
                out[i * d + j] = R.mul(cof, dinv)
        return tuple(out)

    def level(self, a: Matrix) -> int:
        R = self.R
        best = R.r
        for x, e in zip(a, self.identity):
            if x != e:
                best = min(best, R.valuation(R.sub(x, e)))
        return best

    # shapes used by the decomposition searches
    def _shape_scan(self, positions: Sequence[tuple[int, int]], pool: Sequence[int],
                    diagonal: Sequence[int] | None = None) -> list[Matrix]:
        d = self.d
        require("naive shape scan", len(pool) ** len(positions))
        out = []
        for vals in product(pool, repeat=len(positions)):
            m = list(self.identity)
            for (i, j), v in zip(positions, vals):
                m[i * d + j] = v
            m = tuple(m)
            if self.is_member(m):
                out.append(m)
        return out

    def upper_unitriangular(self, level: int = 0) -> list[Matrix]:
        d = self.d
        return self._shape_scan([(i, j) for i in range(d) for j in range(i + 1, d)], self.R.ideal(level))

    def lower_unitriangular(self, level: int = 0) -> list[Matrix]:
        d = self.d
        return self._shape_scan([(i, j) for i in range(d) for j in range(i)], self.R.ideal(level))

    def diagonal(self, level: int = 0) -> list[Matrix]:
        d, R = self.d, self.R
        pool = R.units() if level == 0 else [R.add(R.one, y) for y in R.ideal(level)]
        require("naive torus scan", len(pool) ** d)
        out = []
        for vals in product(pool, repeat=d):
            m = tuple(vals[i] if i == j else 0 for i in range(d) for j in range(d))
            if self.is_member(m):
                out.append(m)
        return out

    def is_upper_unitriangular(self, a: Matrix) -> bool:
        d, R = self.d, self.R
        return all(a[i * d + j] == (R.one if i == j else 0) for i in range(d) for j in range(i + 1))

    def is_lower_unitriangular(self, a: Matrix) -> bool:
        d, R = self.d, self.R
        return all(a[i * d + j] == (R.one if i == j else 0) for i in range(d) for j in range(i, d))


# ---------------------------------------------------------------------------
# enumeration and class counts


def _additive_basis(ring) -> list[int]:
    dim = ring.dim
    return [ring.encode([1 if k == i else 0 for k in range(dim)]) for i in range(dim)]


def generators(G: GroupDescriptor, naive: NaiveGroup | None = None) -> list[Matrix]:
    """Root elements on an additive basis, simple Weyl representatives and, for GL, diag(u, 1, ...)."""
    naive = naive or NaiveGroup(G)
    gens = [G.root_element(a, u) for a in G.datum.roots for u in _additive_basis(G.ring)]
    gens += [G.simple_weyl_rep(k) for k in range(len(G.datum.simple))]
    if G.preset.startswith("GL"):
        for u in naive.R.units():
            gens.append(tuple(u if i == j == 0 else (naive.R.one if i == j else 0)
                              for i in range(G.d) for j in range(G.d)))
    out = []
    for g in gens:
        if not naive.is_member(g):
            raise AssertionError("generator fails the naive membership test")
        if g not in out:
            out.append(g)
    return out


def enumerate_group(G: GroupDescriptor) -> list[Matrix]:
    """All elements by closure from generators, sorted; cross-checked against the order formula."""
    expected = G.order()
    require("closure enumeration", expected)
    naive = NaiveGroup(G)
    gens = generators(G, naive)
    seen = {naive.identity}
    queue = deque([naive.identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = naive.mul(g, s)
            if h not in seen:
                seen.add(h)
                queue.append(h)
                if len(seen) > expected:
                    raise AssertionError("closure exceeds the order formula")
    if len(seen) != expected:
        raise AssertionError(f"closure found {len(seen)} elements, order formula gives {expected}")
    return sorted(seen)


def conjugacy_class_count(G: GroupDescriptor, elements: list[Matrix] | None = None) -> int:
    """Number of orbits under conjugation by the generators."""
    naive = NaiveGroup(G)
    elements = elements if elements is not None else enumerate_group(G)
    gens = generators(G, naive)
    conj = [(s, naive.inv(s)) for s in gens]
    unseen = set(elements)
    classes = 0
    while unseen:
        start = unseen.pop()
        classes += 1
        stack = [start]
        while stack:
            g = stack.pop()
            for s, si in conj:
                h = naive.prod(s, g, si)
                if h in unseen:
                    unseen.remove(h)
                    stack.append(h)
    return classes


def abelian_class_count(elements: Iterable, mul: Callable, inv: Callable) -> int:
    """Conjugacy classes of a finite group given by its elements and law."""
    elements = list(elements)
    unseen = set(elements)
    classes = 0
    while unseen:
        g = unseen.pop()
        classes += 1
        for h in elements:
            unseen.discard(mul(mul(h, g), inv(h)))
    return classes


# ---------------------------------------------------------------------------
# decomposition searches


@dataclass(frozen=True)
class DecompositionSolution:
    kind: str
    w: str | None
    factors: tuple


def _iwahori_sets(naive: NaiveGroup):
    return naive.lower_unitriangular(1), naive.diagonal(1), naive.upper_unitriangular(1)


def _bruhat_sets(G: GroupDescriptor, naive: NaiveGroup):
    U = naive.upper_unitriangular()
    T = naive.diagonal()
    K1 = naive.lower_unitriangular(1)
    out = []
    for w in G.datum.weyl_elements():
        lift = G.weyl_rep(w)
        li = naive.inv(lift)
        Uw = [u for u in U if naive.is_lower_unitriangular(naive.prod(li, u, lift))]
        K = [k for k in K1 if naive.is_lower_unitriangular(naive.prod(lift, k, li))]
        out.append((w, lift, Uw, T, K, U))
    return out


def naive_decomposition_search(G: GroupDescriptor, g: Matrix, kind: str) -> list[DecompositionSolution]:
    """Every factor tuple whose product is g."""
    naive = NaiveGroup(G)
    sols = []
    if kind == "iwahori":
        L, T, U = _iwahori_sets(naive)
        require("iwahori candidates", len(L) * len(T) * len(U))
        for a, t, b in product(L, T, U):
            if naive.prod(a, t, b) == g:
                sols.append(DecompositionSolution(kind, None, (a, t, b)))
    elif kind == "bruhat":
        for w, lift, Uw, T, K, U in _bruhat_sets(G, naive):
            require("bruhat candidates", len(Uw) * len(T) * len(K) * len(U))
            for u, t, k, up in product(Uw, T, K, U):
                if naive.prod(u, lift, t, k, up) == g:
                    sols.append(DecompositionSolution(kind, w.name(), (u, lift, t, k, up)))
    else:
        raise ValueError(f"unknown decomposition kind {kind!r}")
    return sols


def naive_decomposition_table(G: GroupDescriptor, kind: str) -> dict[Matrix, list[DecompositionSolution]]:
    """All products from the disjoint factor sets, grouped by value."""
    naive = NaiveGroup(G)
    table: dict[Matrix, list] = {}
    if kind == "iwahori":
        L, T, U = _iwahori_sets(naive)
        require("iwahori candidates", len(L) * len(T) * len(U))
        for a, t, b in product(L, T, U):
            table.setdefault(naive.prod(a, t, b), []).append(DecompositionSolution(kind, None, (a, t, b)))
    elif kind == "bruhat":
        for w, lift, Uw, T, K, U in _bruhat_sets(G, naive):
            require("bruhat candidates", len(Uw) * len(T) * len(K) * len(U))
            for u, t, k, up in product(Uw, T, K, U):
                table.setdefault(naive.prod(u, lift, t, k, up), []).append(
                    DecompositionSolution(kind, w.name(), (u, lift, t, k, up)))
    else:
        raise ValueError(f"unknown decomposition kind {kind!r}")
    return table


# ---------------------------------------------------------------------------
# vectorised commutator levels


class _BatchArithmetic:
    def __init__(self, naive: NaiveGroup):
        self.naive = naive
        self.mul_t, self.add_t, self.val_t, self.neg_t = naive.R.tables()
        self.d = naive.d

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        d = self.d
        out = np.empty(np.broadcast_shapes(A.shape, B.shape), dtype=np.int32)
        for i in range(d):
            for j in range(d):
                acc = self.mul_t[A[..., i * d], B[..., j]]
                for k in range(1, d):
                    acc = self.add_t[acc, self.mul_t[A[..., i * d + k], B[..., k * d + j]]]
                out[..., i * d + j] = acc
        return out

    def levels(self, C: np.ndarray) -> np.ndarray:
        ident = np.array(self.naive.identity, dtype=np.int32)
        diff = self.add_t[C, self.neg_t[ident]]
        return self.val_t[diff].min(axis=-1)


def commutator_level_violations(G: GroupDescriptor, i: int, j: int, elements_i=None, elements_j=None,
                                sample: int | None = None, seed: int = DEFAULT_SEED,
                                chunk: int = 200_000):
    """Pairs (g, h) in G^i x G^j with level([g, h]) < min(i + j, r); returns (checked, first violation)."""
    naive = NaiveGroup(G)
    r = G.ring.r
    target = min(i + j, r)
    if elements_i is None:
        elements_i = congruence_elements(G, i)
    if elements_j is None:
        elements_j = congruence_elements(G, j)
    batch = _BatchArithmetic(naive)
    A = np.array(elements_i, dtype=np.int32)
    B = np.array(elements_j, dtype=np.int32)
    Ai = np.array([naive.inv(g) for g in elements_i], dtype=np.int32)
    Bi = np.array([naive.inv(h) for h in elements_j], dtype=np.int32)
    if sample is None:
        require("commutator pairs", len(A) * len(B))
        rows_per = max(1, chunk // len(B))
        checked = 0
        for start in range(0, len(A), rows_per):
            a = A[start:start + rows_per, None, :]
            ai = Ai[start:start + rows_per, None, :]
            C = batch.matmul(batch.matmul(batch.matmul(a, B[None]), ai), Bi[None])
            bad = np.argwhere(batch.levels(C) < target)
            checked += C.shape[0] * C.shape[1]
            if len(bad):
                x, y = bad[0]
                return checked, (elements_i[start + x], elements_j[y])
        return checked, None
    rng = np.random.default_rng(seed)
    checked = 0
    while checked < sample:
        m = min(chunk, sample - checked)
        ia = rng.integers(0, len(A), m)
        ib = rng.integers(0, len(B), m)
        C = batch.matmul(batch.matmul(batch.matmul(A[ia], B[ib]), Ai[ia]), Bi[ib])
        bad = np.flatnonzero(batch.levels(C) < target)
        checked += m
        if len(bad):
            k = bad[0]
            return checked, (elements_i[ia[k]], elements_j[ib[k]])
    return checked, None


def random_words(G: GroupDescriptor, count: int, length: int = 40, seed: int = DEFAULT_SEED) -> list[Matrix]:
    """Elements of G(O) as random words in the generators (not uniform, but spread out)."""
    naive = NaiveGroup(G)
    gens = generators(G, naive)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        g = naive.identity
        for _ in range(length):
            g = naive.mul(g, rng.choice(gens))
        out.append(g)
    return out


def congruence_elements(G: GroupDescriptor, i: int) -> list[Matrix]:
    """G^i by scanning matrices congruent to 1 mod m^i with the naive membership test."""
    naive = NaiveGroup(G)
    R = naive.R
    d = G.d
    if i == 0:
        return enumerate_group(G)
    ideal = R.ideal(i)
    diag = [R.add(R.one, y) for y in ideal]
    pools = [diag if a == b else ideal for a in range(d) for b in range(d)]
    require("congruence scan", int(np.prod([len(p) for p in pools], dtype=float)))
    return [m for m in product(*pools) if naive.is_member(m)]


# ---------------------------------------------------------------------------
# property suite


@dataclass
class VerificationReport:
    property_id: str
    scope: str
    mode: str
    checked: int
    outcome: str
    witness: object = None
    seed: int | None = None
    wall_time: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def to_record(self) -> dict:
        return {
            "property": self.property_id,
            "scope": self.scope,
            "mode": self.mode,
            "checked": self.checked,
            "outcome": self.outcome,
            "witness": _jsonable(self.witness),
            "seed": self.seed,
            "wall_time": round(self.wall_time, 3),
            "note": self.note,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "name") and callable(x.name):
        return x.name()
    return repr(x)


@dataclass
class CheckResult:
    mode: str
    checked: int
    witness: object = None
    note: str = ""
    seed: int | None = None


SUITES: dict[str, Callable] = {}


def register(name: str):
    def wrap(fn):
        SUITES[name] = fn
        return fn
    return wrap


def parse_scope(scope: str) -> GroupDescriptor:
    """'SL2(Z/4)' or 'SL2(Z/4)@s1' (group twist) to a group."""
    body, _, twist = scope.partition("@")
    preset, _, rest = body.partition("(")
    if not rest.endswith(")"):
        raise ValueError(f"scope {scope!r} should look like SL2(Z/4)")
    return build_group(preset.strip(), demo_ring(rest[:-1]), twist or None)


def _tori(G):
    from .torus import make_torus
    return [make_torus(G, w) for w in G.datum.weyl_elements()]


FILTRATION_EXHAUSTIVE_LIMIT = 2_000_000
FILTRATION_SAMPLE = 100_000
FILTRATION_WORDS = 2000


@register("filtration-commutator")
def _check_filtration(G, seed, inject):
    """level([g, h]) >= min(i + j, r) on G^i x G^j.

    Pairs with i = 0 are included exhaustively when G itself is small
    enough to enumerate, and otherwise sampled with G^0 drawn as random
    words in the generators; the pair (0, 0) says nothing and is skipped.
    """
    r = G.ring.r
    levels = list(range(0 if G.order() <= 5000 else 1, r))
    cache = {k: congruence_elements(G, k) for k in levels}
    checked, sampled, notes = 0, False, []
    for i in levels:
        for j in levels:
            if i == j == 0:
                continue
            size = len(cache[i]) * len(cache[j])
            sample = FILTRATION_SAMPLE if size > FILTRATION_EXHAUSTIVE_LIMIT else None
            sampled = sampled or sample is not None
            n, bad = commutator_level_violations(G, i, j, cache[i], cache[j], sample=sample, seed=seed)
            checked += n
            if bad:
                return CheckResult("sampled" if sampled else "exhaustive", checked,
                                   {"i": i, "j": j, "pair": bad}, seed=seed)
    if 0 not in levels:
        words = random_words(G, FILTRATION_WORDS, seed=seed)
        for j in levels:
            n, bad = commutator_level_violations(G, 0, j, words, cache[j], sample=FILTRATION_SAMPLE, seed=seed)
            checked += n
            sampled = True
            if bad:
                return CheckResult("sampled", checked, {"i": 0, "j": j, "pair": bad}, seed=seed)
        notes.append(f"G^0 sampled from {FILTRATION_WORDS} random words")
    return CheckResult("sampled" if sampled else "exhaustive", checked, note="; ".join(notes),
                       seed=seed if sampled else None)


@register("iwahori-unique")
def _check_iwahori(G, seed, inject):
    from .decomp import iwahori_decompose
    table = naive_decomposition_table(G, "iwahori")
    G1 = congruence_elements(G, 1)
    for g in G1:
        sols = table.get(g, [])
        rec = iwahori_decompose(G, g)
        if len(sols) != 1 or sols[0].factors != (rec.u_minus, rec.t, rec.u):
            return CheckResult("exhaustive", len(G1), {"g": g, "solutions": len(sols)})
    if set(table) != set(G1):
        return CheckResult("exhaustive", len(G1), {"stray": sorted(set(table) ^ set(G1))[:1]})
    return CheckResult("exhaustive", len(G1))


@register("bruhat-unique")
def _check_bruhat(G, seed, inject):
    from .decomp import bruhat_decompose
    elems = enumerate_group(G)
    table = naive_decomposition_table(G, "bruhat")
    if set(table) != set(elems):
        return CheckResult("exhaustive", len(elems), {"products_outside_or_missing": len(set(table) ^ set(elems))})
    for g in elems:
        sols = table[g]
        rec = bruhat_decompose(G, g)
        fast = (rec.u, rec.lift, rec.t_prime, rec.k, rec.u_prime)
        if len(sols) != 1 or sols[0].factors != fast or sols[0].w != rec.w.name():
            return CheckResult("exhaustive", len(elems), {"g": g, "solutions": len(sols)})
    return CheckResult("exhaustive", len(elems))


def rank1_factorisations(G: GroupDescriptor, a, target: Matrix) -> set:
    """All pairs (tau, u) with tau in the coroot image and u in U_a multiplying to target."""
    naive = NaiveGroup(G)
    taus = {G.coroot_element(a, lam) for lam in naive.R.units()}
    return {(tau, x) for tau in taus for x in range(naive.R.size)
            if naive.mul(tau, G.root_element(a, x)) == target}


@register("rank1-closed-form")
def _check_rank1(G, seed, inject):
    from .decomp import rank1_commutator
    R = G.ring
    r = R.r
    checked = 0
    a = G.datum.positive[0]
    for b in range(r + 1):
        for c in range(r + 1):
            if b + c < r - 1 or b + 2 * c < r:
                continue
            for x in R.ideal(b):
                for y in R.ideal(c):
                    rec = rank1_commutator(G, a, x, y, b, c)
                    checked += 1
                    sols = rank1_factorisations(G, a, rec.direct)
                    if not rec.agrees or len(sols) != 1:
                        return CheckResult("exhaustive", checked,
                                           {"b": b, "c": c, "x": x, "y": y, "factorisations": len(sols)})
    return CheckResult("exhaustive", checked)


@register("chevalley-expansion")
def _check_chevalley(G, seed, inject):
    naive = NaiveGroup(G)
    R = naive.R
    D = G.datum
    checked = 0
    bump = bool(inject and inject.get("structure_constant"))
    cache: dict = {}

    def elem(root, v):
        if (root, v) not in cache:
            g = G.root_element(root, v)
            cache[(root, v)] = (g, naive.inv(g))
        return cache[(root, v)][0]

    def elem_inv(root, v):
        elem(root, v)
        return cache[(root, v)][1]

    for a in D.roots:
        for b in D.roots:
            if a == b or a == tuple(-x for x in b):
                continue
            terms = D.chevalley_pairs(a, b)
            for x in range(R.size):
                for y in range(R.size):
                    direct = naive.prod(elem(a, x), elem(b, y), elem_inv(a, x), elem_inv(b, y))
                    factors = []
                    for idx, t in enumerate(terms):
                        const = t.constant + (1 if bump and idx == 0 else 0)
                        v = naive._from_int(const)
                        for _ in range(t.i):
                            v = R.mul(v, x)
                        for _ in range(t.j):
                            v = R.mul(v, y)
                        factors.append(elem(t.root, v))
                    checked += 1
                    if naive.prod(*factors) != direct:
                        return CheckResult("exhaustive", checked, {"a": a, "b": b, "x": x, "y": y})
    return CheckResult("exhaustive", checked)


@register("stratification")
def _check_stratification(G, seed, inject):
    from .decomp import default_frame, stratum_index, transporter_frame, z_stratify
    checked = 0
    frames = [default_frame(G)] + [transporter_frame(G, w) for w in G.datum.weyl_elements()]
    for frame in frames:
        labels = set(stratum_index(frame))
        Z1 = frame.z_elements(1)
        counts = Counter()
        for z in Z1:
            if z == G.identity:
                continue
            first = z_stratify(G, z, frame, "primary")
            second = z_stratify(G, z, frame, "alternate")
            checked += 1
            if first != second or first not in labels:
                return CheckResult("exhaustive", checked, {"frame": frame.v.name(), "z": z})
            counts[first] += 1
        if sum(counts.values()) != len(set(Z1)) - 1:
            return CheckResult("exhaustive", checked, {"frame": frame.v.name(), "cover": sum(counts.values())})
    return CheckResult("exhaustive", checked)


def norm_checks(T, max_b: int = 6):
    """Transitivity on generators and surjectivity on congruence and coroot parts; first failure or None."""
    checked = 0
    for b in range(1, max_b + 1):
        fb = T.fixed(b)
        for a in [k for k in range(1, b + 1) if b % k == 0]:
            fa = T.fixed(a)
            for c in [k for k in range(1, a + 1) if a % k == 0]:
                for g in fb.structure.generators:
                    checked += 1
                    if T.norm(T.norm(g, b, a), a, c) != T.norm(g, b, c):
                        return checked, {"a": c, "b": a, "c": b, "t": g}
            image = {T.norm(t, b, a) for t in fb.congruence}
            checked += len(fb.congruence)
            if image != set(fa.congruence):
                return checked, {"surjective": "congruence", "a": a, "b": b}
            for root in T.datum.positive:
                big, small = fb.alpha_subgroup(root), fa.alpha_subgroup(root)
                checked += len(big)
                if {T.norm(t, b, a) for t in big} != set(small):
                    return checked, {"surjective": "coroot", "root": root, "a": a, "b": b}
    return checked, None


@register("norm-maps")
def _check_norms(G, seed, inject):
    checked = 0
    for T in _tori(G):
        n, bad = norm_checks(T, 6 if G.ring.size <= 4 else 2)
        checked += n
        if bad:
            return CheckResult("exhaustive", checked, {"torus": T.w.name(), **bad})
    return CheckResult("exhaustive", checked)


@register("regularity-minimal-m")
def _check_regularity(G, seed, inject):
    from .torus import characters, is_regular, is_regular_all_levels
    checked = 0
    for T in _tori(G):
        for th in characters(T.fixed(1).structure):
            checked += 1
            if is_regular(T, th) != is_regular_all_levels(T, th, 6):
                return CheckResult("exhaustive", checked, {"torus": T.w.name(), "theta": th.images})
    return CheckResult("exhaustive", checked)


@register("lift-independence")
def _check_lifts(G, seed, inject):
    from .torus import characters, transport_character, weyl_transporter
    checked = 0
    tori = _tori(G)
    for T in tori:
        chars_T = characters(T.fixed(1).structure)
        for Tp in tori:
            chars_Tp = characters(Tp.fixed(1).structure)
            for cls in weyl_transporter(T, Tp):
                for th in chars_T:
                    for thp in chars_Tp:
                        verdicts = {transport_character(T, Tp, L, thp) == th for L in cls.lifts}
                        checked += len(cls.lifts)
                        if len(verdicts) != 1:
                            return CheckResult("exhaustive", checked, {"w": cls.x.name(), "theta": th.images})
    return CheckResult("exhaustive", checked)


def naive_inner_count(T, theta, Tp, theta_p) -> int:
    """Double loop over W and T^F using matrices: classes carrying T'^F onto T^F and theta' to theta."""
    G = T.G
    if T.fixed(1).ring != Tp.fixed(1).ring:
        return 0
    Gn = T.group_at(1)
    naive = NaiveGroup(Gn)
    elems_T = T.fixed(1).elements()
    elems_Tp = set(Tp.fixed(1).elements())
    count = 0
    for x in G.datum.weyl_elements():
        L = G.embed(G.weyl_rep(x), Gn)
        Li = naive.inv(L)
        ok = True
        for t in elems_T:
            m = naive.prod(Li, Gn.diagonal(t), L)
            tp = tuple(m[i * Gn.d + i] for i in range(Gn.d))
            if Gn.diagonal(tp) != m or tp not in elems_Tp or theta_p(tp) != theta(t):
                ok = False
                break
        if ok and _naive_F_stable(T, Tp, x):
            count += 1
    return count


def _naive_F_stable(T, Tp, x) -> bool:
    """(n_x n_T')^-1 n_T F(n_x) is diagonal, i.e. Ad(n_x) intertwines the two Frobenius maps."""
    G = T.G
    naive = NaiveGroup(G)
    nx = G.weyl_rep(x)
    m = naive.prod(naive.inv(naive.mul(nx, Tp.lift)), T.lift, G.frobenius(nx))
    d = G.d
    return all(m[i * d + j] == 0 for i in range(d) for j in range(d) if i != j)


@register("inner-product")
def _check_inner(G, seed, inject):
    from .torus import characters
    from .variety import inner_product_rhs
    checked = 0
    tori = _tori(G)
    for T in tori:
        for Tp in tori:
            for th in characters(T.fixed(1).structure):
                for thp in characters(Tp.fixed(1).structure):
                    fwd = inner_product_rhs(T, th, Tp, thp, override=True).count
                    back = inner_product_rhs(Tp, thp, T, th, override=True).count
                    naive = naive_inner_count(T, th, Tp, thp)
                    checked += 1
                    if not (fwd == back == naive):
                        return CheckResult("exhaustive", checked,
                                           {"T": T.w.name(), "Tp": Tp.w.name(), "counts": [fwd, back, naive]})
    return CheckResult("exhaustive", checked)


@register("sigma-identities")
def _check_sigma(G, seed, inject):
    from .variety import (hat_sigma_fiber_sizes, hat_sigma_fixed_count, quotient_fiber_sizes,
                          sigma_partition, sigma_points, sigma_tilde_report)
    checked = 0
    tori = _tori(G)
    for T in tori:
        for Tp in tori:
            sigma = sigma_points(T, Tp, 1)
            sigma_partition(sigma)
            q = quotient_fiber_sizes(T, Tp, 1)
            checked += len(sigma)
            if not (q.image_in_sigma and (not q.fiber_sizes or q.constant)):
                return CheckResult("exhaustive", checked, {"T": T.w.name(), "Tp": Tp.w.name(), "quotient": q.fiber_sizes})
            for w in G.datum.weyl_elements():
                tilde = sigma_tilde_report(T, Tp, w, n=1, sigma=sigma)
                hat = hat_sigma_fiber_sizes(T, Tp, w, n=1, sigma=sigma)
                fixed = hat_sigma_fixed_count(T, Tp, w)
                checked += tilde.tuples + hat.tuples + 1
                if not (tilde.ok and hat.covers_cell and hat.equivariant
                        and (hat.constant or not hat.tuples) and fixed.agrees):
                    return CheckResult("exhaustive", checked, {"T": T.w.name(), "Tp": Tp.w.name(), "w": w.name()})
    return CheckResult("exhaustive", checked)


@register("enumeration-stable")
def _check_enumeration(G, seed, inject):
    first = enumerate_group(G)
    second = enumerate_group(G)
    naive = NaiveGroup(G)
    if first != second:
        return CheckResult("exhaustive", len(first), {"differs": True})
    bad = next((g for g in first if not naive.is_member(g)), None)
    return CheckResult("exhaustive", len(first), {"nonmember": bad} if bad else None)


@register("class-bound")
def _check_class_bound(G, seed, inject):
    n_orbits = regular_orbit_count(G)
    classes = conjugacy_class_count(G)
    if n_orbits > classes:
        return CheckResult("exhaustive", classes, {"orbits": n_orbits, "classes": classes})
    return CheckResult("exhaustive", classes, note=f"{n_orbits} orbits <= {classes} classes")


def regular_orbit_count(G: GroupDescriptor) -> int:
    """Weyl orbits of (torus twist, regular theta) pairs whose stabiliser is trivial."""
    from .torus import regular_characters, transport_character, weyl_transporter
    from .variety import inner_product_rhs
    tori = _tori(G)
    seen: set = set()
    orbits = 0
    for T in tori:
        for th in regular_characters(T):
            key = (T.w.name(), th.images)
            if key in seen:
                continue
            orbit = {key}
            for Tp in tori:
                for cls in weyl_transporter(Tp, T):
                    moved = transport_character(Tp, T, cls.lift, th)
                    orbit.add((Tp.w.name(), moved.images))
            seen |= orbit
            if inner_product_rhs(T, th, T, th).count == 1:
                orbits += 1
    return orbits


DEFAULT_ALL = ["enumeration-stable", "filtration-commutator", "iwahori-unique", "bruhat-unique",
               "rank1-closed-form", "chevalley-expansion", "stratification", "norm-maps",
               "regularity-minimal-m", "lift-independence", "inner-product", "sigma-identities",
               "class-bound"]


def run_suite(suite_id: str, scope: str, seed: int = DEFAULT_SEED,
              inject: dict | None = None) -> list[VerificationReport]:
    """Run one registered property (or 'all') on a scope such as 'SL2(Z/4)'."""
    ids = DEFAULT_ALL if suite_id == "all" else [suite_id]
    G = parse_scope(scope)
    reports = []
    for pid in ids:
        if pid not in SUITES:
            raise ValueError(f"unknown suite {pid!r}; known: {sorted(SUITES)}")
        start = time.perf_counter()
        try:
            res = SUITES[pid](G, seed, inject)
            outcome = "fail" if res.witness is not None else "pass"
            rep = VerificationReport(pid, scope, res.mode, res.checked, outcome, res.witness,
                                     res.seed, note=res.note)
        except BudgetExceeded as exc:
            rep = VerificationReport(pid, scope, "exhaustive", 0, "skipped", note=str(exc))
        except (AssertionError, ValueError) as exc:
            rep = VerificationReport(pid, scope, "exhaustive", 0, "fail", witness=str(exc))
        rep.wall_time = time.perf_counter() - start
        reports.append(rep)
    return reports
