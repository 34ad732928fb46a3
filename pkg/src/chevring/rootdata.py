"""Root data of the supported presets, realised inside a matrix representation.

Roots live in an ambient integer lattice; the pairing with coroots is the dot
product.  Every preset also fixes a faithful matrix representation: the
weights of the diagonal entries and one nilpotent matrix X_a per root, so
that p_a(u) = 1 + u X_a.  Chevalley structure constants and the rank-one
constant are read off that representation rather than taken from a table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

Vector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]

PRESETS = ("A1", "A2", "C2", "GL2", "GL3")


def _add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _scale(k: int, a: Vector) -> Vector:
    return tuple(k * x for x in a)


def _dot(a: Vector, b: Vector) -> int:
    return sum(x * y for x, y in zip(a, b))


def _neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _unit(d: int, i: int, j: int) -> IntMatrix:
    return tuple(tuple(1 if (r, c) == (i, j) else 0 for c in range(d)) for r in range(d))


def _madd(a: IntMatrix, b: IntMatrix, k: int = 1) -> IntMatrix:
    return tuple(tuple(x + k * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _zero(d: int) -> IntMatrix:
    return tuple(tuple(0 for _ in range(d)) for _ in range(d))


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element with a reduced word in the simple reflections."""

    word: tuple[int, ...]
    perm: tuple[int, ...]
    matrix: IntMatrix = field(compare=False)

    def __len__(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def name(self) -> str:
        return "1" if not self.word else "s" + "s".join(str(i + 1) for i in self.word)


@dataclass(frozen=True)
class ChevalleyTerm:
    i: int
    j: int
    root: Vector
    constant: int


class RootDatum:
    """Roots, positive system, coroots, Weyl group and structure constants."""

    def __init__(self, name: str, ambient: int, simple: list[Vector], diag_weights: list[Vector],
                 form: IntMatrix | None = None):
        self.name = name
        self.ambient = ambient
        self.simple = [tuple(s) for s in simple]
        self.diag_weights = [tuple(w) for w in diag_weights]
        self.dim = len(diag_weights)
        self.form = form
        self.roots = self._close_roots()
        self.positive = sorted((a for a in self.roots if self._is_positive(a)), key=self._order_key)
        self.negative = [_neg(a) for a in self.positive]
        self._index = {a: i for i, a in enumerate(self.roots)}
        self.root_vectors = self._root_vectors()
        self._weyl = self._enumerate_weyl()
        self.structure_constants = self._extract_structure_constants()
        self._rank1 = {a: self._solve_rank1_constant(a) for a in self.roots}

    # -- roots ----------------------------------------------------------------
    def coroot(self, a: Vector) -> Vector:
        nrm = _dot(a, a)
        v = tuple(Fraction(2 * x, nrm) for x in a)
        if any(x.denominator != 1 for x in v):
            raise ValueError("coroot not integral in the ambient lattice")
        return tuple(int(x) for x in v)

    def pairing(self, v: Vector, a: Vector) -> int:
        return _dot(v, self.coroot(a))

    def reflect(self, s: Vector, v: Vector) -> Vector:
        return _add(v, _scale(-self.pairing(v, s), s))

    def _close_roots(self) -> list[Vector]:
        found = set(self.simple) | {_neg(s) for s in self.simple}
        frontier = list(found)
        while frontier:
            nxt = []
            for v in frontier:
                for s in self.simple:
                    w = self.reflect(s, v)
                    if w not in found:
                        found.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(found, key=lambda a: (not self._is_positive(a), self._order_key(a if self._is_positive(a) else _neg(a))))

    def simple_coefficients(self, a: Vector) -> tuple[int, ...]:
        """Coordinates of a root in the basis of simple roots."""
        k = len(self.simple)
        for coeffs in product(range(-4, 5), repeat=k):
            v = tuple(sum(c * s[i] for c, s in zip(coeffs, self.simple)) for i in range(self.ambient))
            if v == a:
                return coeffs
        raise ValueError(f"{a} is not in the root lattice")

    def _is_positive(self, a: Vector) -> bool:
        return sum(self.simple_coefficients(a)) > 0

    def height(self, a: Vector) -> int:
        if a not in self.positive_set:
            raise ValueError(f"{a} is not a positive root")
        return sum(self.simple_coefficients(a))

    @property
    def positive_set(self) -> frozenset:
        return frozenset(self.positive)

    def _order_key(self, a: Vector):
        return (sum(self.simple_coefficients(a)), tuple(-x for x in a))

    def is_root(self, v: Vector) -> bool:
        return v in self._index

    def index(self, a: Vector) -> int:
        return self._index[a]

    # -- matrix realisation -----------------------------------------------------
    def weight_positions(self, a: Vector) -> list[tuple[int, int]]:
        d = self.dim
        return [(i, j) for i in range(d) for j in range(d)
                if i != j and tuple(x - y for x, y in zip(self.diag_weights[i], self.diag_weights[j])) == a]

    def _in_lie_algebra(self, x: IntMatrix) -> bool:
        if self.form is None:
            return True
        d = self.dim
        xt = tuple(tuple(x[j][i] for j in range(d)) for i in range(d))
        return _madd(_matmul(xt, self.form), _matmul(self.form, x)) == _zero(d)

    def coroot_diagonal(self, a: Vector) -> tuple[int, ...]:
        """Exponents e_k with coroot(a)(lam) = diag(lam^{e_k})."""
        c = self.coroot(a)
        return tuple(_dot(w, c) for w in self.diag_weights)

    def _root_vectors(self) -> dict[Vector, IntMatrix]:
        d = self.dim
        out = {}
        for a in self.roots:
            pos = self.weight_positions(a)
            if not pos:
                raise ValueError(f"no matrix position of weight {a}")
            lead = _unit(d, *pos[0])
            chosen = None
            for signs in product((1, -1), repeat=len(pos) - 1):
                x = lead
                for s, (i, j) in zip(signs, pos[1:]):
                    x = _madd(x, _unit(d, i, j), s)
                if self._in_lie_algebra(x):
                    chosen = x
                    break
            if chosen is None:
                raise ValueError(f"no root vector of weight {a} in the Lie algebra")
            if _matmul(chosen, chosen) != _zero(d):
                raise ValueError("root vectors must square to zero")
            out[a] = chosen
        # normalise negative root vectors so that [X_a, X_-a] is the coroot
        for a in self.positive:
            x, y = out[a], out[_neg(a)]
            h = _madd(_matmul(x, y), _matmul(y, x), -1)
            diag = self.coroot_diagonal(a)
            target = tuple(tuple(diag[i] if i == j else 0 for j in range(d)) for i in range(d))
            if h == target:
                continue
            if h == _madd(_zero(d), target, -1):
                out[_neg(a)] = _madd(_zero(d), y, -1)
            else:
                raise ValueError(f"root vectors for {a} do not form an sl2 triple")
        return out

    def leading_position(self, a: Vector) -> tuple[int, int]:
        return self.weight_positions(a)[0]

    # -- Weyl group -----------------------------------------------------------
    def _reflection_matrix(self, s: Vector) -> IntMatrix:
        n = self.ambient
        cols = [self.reflect(s, tuple(1 if k == i else 0 for k in range(n))) for i in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def act(self, w: WeylElement | IntMatrix, v: Vector) -> Vector:
        m = w.matrix if isinstance(w, WeylElement) else w
        return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))

    def _enumerate_weyl(self) -> list[WeylElement]:
        n = self.ambient
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        gens = [self._reflection_matrix(s) for s in self.simple]

        def perm_of(m):
            return tuple(self._index[self.act(m, a)] for a in self.roots)

        start = WeylElement((), perm_of(ident), ident)
        seen = {start.perm: start}
        layer = [start]
        while layer:
            nxt = []
            for w in layer:
                for k, g in enumerate(gens):
                    m = _matmul(w.matrix, g)
                    pm = perm_of(m)
                    if pm not in seen:
                        e = WeylElement(w.word + (k,), pm, m)
                        seen[pm] = e
                        nxt.append(e)
            layer = nxt
        return sorted(seen.values(), key=lambda e: (len(e.word), e.word))

    def weyl_elements(self) -> list[WeylElement]:
        return list(self._weyl)

    def identity(self) -> WeylElement:
        return self._weyl[0]

    def longest(self) -> WeylElement:
        return max(self._weyl, key=len)

    def weyl_from_word(self, word) -> WeylElement:
        m = self.identity().matrix
        for k in word:
            m = _matmul(m, self._reflection_matrix(self.simple[k]))
        return self.weyl_from_matrix(m)

    def weyl_from_matrix(self, m: IntMatrix) -> WeylElement:
        pm = tuple(self._index[self.act(m, a)] for a in self.roots)
        for e in self._weyl:
            if e.perm == pm:
                return e
        raise ValueError("matrix is not a Weyl group element")

    def compose(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.weyl_from_matrix(_matmul(a.matrix, b.matrix))

    def inverse(self, a: WeylElement) -> WeylElement:
        for e in self._weyl:
            if self.compose(a, e).is_identity:
                return e
        raise AssertionError("Weyl group not closed")

    def weyl_by_name(self, name: str) -> WeylElement:
        for e in self._weyl:
            if e.name() == name or (name in ("id", "e", "") and e.is_identity):
                return e
        if name == "w0":
            return self.longest()
        if name == "s" and len(self.simple) == 1:
            return self._weyl[1]
        raise KeyError(f"no Weyl element named {name!r}")

    # -- commutator data --------------------------------------------------------
    def chevalley_pairs(self, a: Vector, b: Vector) -> list[ChevalleyTerm]:
        """Terms of [p_a(t), p_b(u)] = prod p_{ia+jb}(C t^i u^j), in expansion order."""
        if _neg(a) == b:
            raise ValueError("opposite roots: use the rank-one commutator")
        return list(self.structure_constants.get((a, b), []))

    def _pairs(self, a: Vector, b: Vector) -> list[tuple[int, int, Vector]]:
        out = []
        for i in range(1, 4):
            for j in range(1, 4):
                g = _add(_scale(i, a), _scale(j, b))
                if self.is_root(g):
                    out.append((i, j, g))
        out.sort(key=lambda t: (t[0] + t[1], t[0], t[1]))
        return out

    def _extract_structure_constants(self) -> dict:
        table = {}
        for a in self.roots:
            for b in self.roots:
                if b == _neg(a):
                    continue
                table[(a, b)] = tuple(self._expand_commutator(a, b))
        return table

    def _expand_commutator(self, a: Vector, b: Vector) -> list[ChevalleyTerm]:
        d = self.dim
        xa, xb = self.root_vectors[a], self.root_vectors[b]

        def elem(x, mono, sign=1):
            return [[({(0, 0): 1} if i == j else {}) | ({mono: sign * x[i][j]} if x[i][j] else {})
                     for j in range(d)] for i in range(d)]

        comm = _pmat_mul(_pmat_mul(elem(xa, (1, 0)), elem(xb, (0, 1))),
                         _pmat_mul(elem(xa, (1, 0), -1), elem(xb, (0, 1), -1)))
        terms = []
        for i, j, g in self._pairs(a, b):
            pi, pj = self.leading_position(g)
            c = comm[pi][pj].get((i, j), 0)
            terms.append(ChevalleyTerm(i, j, g, c))
            if c:
                inv = [[({(0, 0): 1} if r == s else {}) | ({(i, j): -c * self.root_vectors[g][r][s]}
                                                          if self.root_vectors[g][r][s] else {})
                        for s in range(d)] for r in range(d)]
                comm = _pmat_mul(inv, comm)
        ident = [[({(0, 0): 1} if i == j else {}) for j in range(d)] for i in range(d)]
        if comm != ident:
            raise ValueError(f"commutator of {a}, {b} does not match a Chevalley expansion")
        return terms

    def rank1_constant(self, a: Vector) -> int:
        return self._rank1[a]

    def _solve_rank1_constant(self, a: Vector) -> int:
        # p_a(x)p_-a(y) = p_-a(y/(1+cxy)) coroot(1+cxy) p_a(x/(1+cxy)); solved over Z/9
        mod = 9
        d = self.dim
        xa, xb = self.root_vectors[a], self.root_vectors[_neg(a)]
        expo = self.coroot_diagonal(a)

        def pm(x, u):
            return tuple(tuple(((1 if i == j else 0) + u * x[i][j]) % mod for j in range(d)) for i in range(d))

        def mm(p, q):
            return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(d)) % mod for j in range(d)) for i in range(d))

        def cor(lam):
            return tuple(tuple((pow(lam, e, mod) if i == j else 0) for j, e in enumerate(expo)) for i in range(d))

        for c in (1, -1):
            ok = True
            for x in range(mod):
                for y in range(mod):
                    s = (1 + c * x * y) % mod
                    if s % 3 == 0:
                        continue
                    si = pow(s, -1, mod)
                    lhs = mm(pm(xa, x), pm(xb, y))
                    rhs = mm(mm(pm(xb, y * si), cor(s)), pm(xa, x * si))
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return c
        raise ValueError(f"no rank-one constant for root {a}")

    # -- serialisation ----------------------------------------------------------
    def to_record(self) -> dict:
        return {
            "name": self.name,
            "roots": [list(a) for a in self.roots],
            "positive": [list(a) for a in self.positive],
            "weyl": [{"word": list(w.word), "perm": list(w.perm)} for w in self._weyl],
        }


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, j), v in a.items():
        for (k, l), w in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + v * w
    return {k: v for k, v in out.items() if v}


def _pmat_mul(a, b):
    d = len(a)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc: dict = {}
            for k in range(d):
                if a[i][k] and b[k][j]:
                    acc = _padd(acc, _pmul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


SYMPLECTIC_FORM: IntMatrix = ((0, 0, 0, 1), (0, 0, 1, 0), (0, -1, 0, 0), (-1, 0, 0, 0))


@lru_cache(maxsize=None)
def make_root_datum(preset: str) -> RootDatum:
    """Root datum of a preset among A1, A2, C2, GL2, GL3."""
    if preset in ("A1", "GL2"):
        return RootDatum(preset, 2, [(1, -1)], [(1, 0), (0, 1)])
    if preset in ("A2", "GL3"):
        return RootDatum(preset, 3, [(1, -1, 0), (0, 1, -1)], [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    if preset == "C2":
        return RootDatum(preset, 2, [(1, -1), (0, 2)], [(1, 0), (0, 1), (0, -1), (-1, 0)], SYMPLECTIC_FORM)
    raise ValueError(f"unknown root datum preset {preset!r}")


def height(datum: RootDatum, a: Vector) -> int:
    return datum.height(a)


def chevalley_pairs(datum: RootDatum, a: Vector, b: Vector) -> list[ChevalleyTerm]:
    return datum.chevalley_pairs(a, b)


def weyl_elements(datum: RootDatum) -> list[WeylElement]:
    return datum.weyl_elements()
