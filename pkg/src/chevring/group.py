"""Matrix groups SL2, SL3, GL2, GL3 and Sp4 over the finite local rings of ``ring``.

A group element is stored as a flat row-major tuple of encoded ring elements.
The descriptor owns all arithmetic; ``GroupElem`` is a thin convenience wrapper
for callers who prefer operators.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .budget import require
from .ring import RingDescriptor, RingElem, embedding, extend, make_ring, truncate
from .rootdata import RootDatum, Vector, WeylElement, make_root_datum

Matrix = tuple[int, ...]

PRESETS = {"SL2": "A1", "SL3": "A2", "GL2": "GL2", "GL3": "GL3", "Sp4": "C2"}
_DIMENSION = {"SL2": 3, "SL3": 8, "GL2": 4, "GL3": 9, "Sp4": 10}


def normalize_preset(name: str) -> str:
    for key in PRESETS:
        if key.lower() == name.lower():
            return key
    raise ValueError(f"unknown group preset {name!r}; expected one of {sorted(PRESETS)}")


def finite_field_order(preset: str, q: int) -> int:
    """Order of the split group over F_q."""
    if preset == "SL2":
        return q * (q * q - 1)
    if preset == "SL3":
        return q**3 * (q * q - 1) * (q**3 - 1)
    if preset == "Sp4":
        return q**4 * (q * q - 1) * (q**4 - 1)
    d = 2 if preset == "GL2" else 3
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out


class GroupDescriptor:
    """A preset group over a ring, with Frobenius F = Ad(twist lift) o (entrywise F)."""

    def __init__(self, preset: str, ring: RingDescriptor, twist: WeylElement | None = None):
        self.preset = normalize_preset(preset)
        self.ring = ring
        self.datum: RootDatum = make_root_datum(PRESETS[self.preset])
        self.d = self.datum.dim
        self.twist = twist if twist is not None else self.datum.identity()
        self._root_cache: dict = {}
        self.identity: Matrix = tuple(ring.one if i == j else ring.zero
                                      for i in range(self.d) for j in range(self.d))
        self._form = None
        if self.datum.form is not None:
            self._form = self.from_ints(v for row in self.datum.form for v in row)
        self._weyl_cache: dict = {}
        self.twist_lift = self.weyl_rep(self.twist)
        self.twist_lift_inv = self.inv(self.twist_lift)
        self._check_frobenius_stability()

    # -- identity -----------------------------------------------------------------
    def key(self) -> tuple:
        return (self.preset, self.ring.key(), self.twist.word)

    def __eq__(self, other):
        return isinstance(other, GroupDescriptor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GroupDescriptor({self.preset} over {self.ring.label()}, twist {self.twist.name()})"

    def to_record(self) -> dict:
        return {"preset": self.preset, "ring": self.ring.to_record(), "twist": list(self.twist.word)}

    @property
    def dimension(self) -> int:
        return _DIMENSION[self.preset]

    def order(self) -> int:
        """|G(R)| from the residue-field order and the size of the congruence kernel."""
        R = self.ring
        return finite_field_order(self.preset, R.residue_size) * R.residue_size ** ((R.r - 1) * self.dimension)

    # -- construction helpers -----------------------------------------------------
    def from_ints(self, values: Iterable[int]) -> Matrix:
        return tuple(self.ring.from_int(v) for v in values)

    def from_rows(self, rows: Sequence[Sequence]) -> Matrix:
        """Matrix from rows whose entries are ints (images of Z) or coefficient lists."""
        out = []
        for row in rows:
            for v in row:
                if isinstance(v, RingElem):
                    out.append(v.index)
                elif isinstance(v, (list, tuple)):
                    out.append(self.ring.encode(list(v) + [0] * (self.ring.dim - len(v))))
                else:
                    out.append(self.ring.from_int(v))
        if len(out) != self.d * self.d:
            raise ValueError(f"expected a {self.d}x{self.d} matrix")
        return tuple(out)

    def to_rows(self, g: Matrix) -> list[list[list[int]]]:
        d = self.d
        return [[list(self.ring.decode(g[i * d + j])) for j in range(d)] for i in range(d)]

    def to_int_rows(self, g: Matrix) -> list[list[int]]:
        """Rows of encoded integers; equals the residues themselves when n = 1."""
        d = self.d
        return [list(g[i * d:(i + 1) * d]) for i in range(d)]

    def element(self, rows) -> "GroupElem":
        g = self.from_rows(rows)
        if not self.is_member(g):
            raise ValueError(f"matrix is not in {self.preset}")
        return GroupElem(self, g)

    def wrap(self, g: Matrix) -> "GroupElem":
        return GroupElem(self, g)

    # -- arithmetic ---------------------------------------------------------------
    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        d, R = self.d, self.ring
        if R._tables:
            M, A, s = R._mul, R._add, R.size
            out = []
            for i in range(d):
                row = a[i * d:(i + 1) * d]
                for j in range(d):
                    acc = 0
                    for k in range(d):
                        x = row[k]
                        if x:
                            y = b[k * d + j]
                            if y:
                                acc = A[acc * s + M[x * s + y]]
                    out.append(acc)
            return tuple(out)
        if R.dim == 1:
            m = R.modulus
            return tuple(sum(a[i * d + k] * b[k * d + j] for k in range(d)) % m
                         for i in range(d) for j in range(d))
        out = []
        for i in range(d):
            for j in range(d):
                acc = R.zero
                for k in range(d):
                    acc = R.add(acc, R.mul(a[i * d + k], b[k * d + j]))
                out.append(acc)
        return tuple(out)

    def prod(self, *factors: Matrix) -> Matrix:
        out = self.identity
        for f in factors:
            out = self.mul(out, f)
        return out

    def det(self, a: Matrix) -> int:
        R, d = self.ring, self.d
        rows = [list(a[i * d:(i + 1) * d]) for i in range(d)]
        return _det(R, rows)

    def inv(self, a: Matrix) -> Matrix:
        R, d = self.ring, self.d
        if d == 2:
            det = R.sub(R.mul(a[0], a[3]), R.mul(a[1], a[2]))
            di = R.inv(det)
            return (R.mul(a[3], di), R.neg(R.mul(a[1], di)), R.neg(R.mul(a[2], di)), R.mul(a[0], di))
        work = [list(a[i * d:(i + 1) * d]) + [R.one if i == j else R.zero for j in range(d)] for i in range(d)]
        for col in range(d):
            piv = next((i for i in range(col, d) if R.is_unit(work[i][col])), None)
            if piv is None:
                raise ZeroDivisionError("matrix is not invertible")
            work[col], work[piv] = work[piv], work[col]
            pinv = R.inv(work[col][col])
            work[col] = [R.mul(pinv, x) for x in work[col]]
            for i in range(d):
                if i != col and work[i][col]:
                    f = work[i][col]
                    work[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(work[i], work[col])]
        return tuple(x for row in work for x in row[d:])

    def commutator(self, a: Matrix, b: Matrix) -> Matrix:
        """[a, b] = a b a^-1 b^-1."""
        return self.prod(a, b, self.inv(a), self.inv(b))

    def conj(self, a: Matrix, g: Matrix) -> Matrix:
        """a g a^-1."""
        return self.prod(a, g, self.inv(a))

    def transpose(self, a: Matrix) -> Matrix:
        d = self.d
        return tuple(a[j * d + i] for i in range(d) for j in range(d))

    def is_member(self, a: Matrix) -> bool:
        if len(a) != self.d * self.d:
            return False
        det = self.det(a)
        if self.preset.startswith("GL"):
            return self.ring.is_unit(det)
        if det != self.ring.one:
            return False
        if self._form is not None:
            return self.prod(self.transpose(a), self._form, a) == self._form
        return True

    # -- generators ---------------------------------------------------------------
    def root_element(self, a: Vector, u: int) -> Matrix:
        """p_a(u) = 1 + u X_a."""
        R = self.ring
        x = self.datum.root_vectors[tuple(a)]
        d = self.d
        out = list(self.identity)
        for i in range(d):
            for j in range(d):
                c = x[i][j]
                if c:
                    v = u if c == 1 else R.neg(u) if c == -1 else R.mul(R.from_int(c), u)
                    out[i * d + j] = R.add(out[i * d + j], v)
        return tuple(out)

    def coroot_element(self, a: Vector, lam: int) -> Matrix:
        R = self.ring
        if not R.is_unit(lam):
            raise ValueError("coroot parameter must be a unit")
        expo = self.datum.coroot_diagonal(tuple(a))
        return self.diagonal([R.power(lam, e) for e in expo])

    def diagonal(self, entries: Sequence[int]) -> Matrix:
        d = self.d
        return tuple(entries[i] if i == j else self.ring.zero for i in range(d) for j in range(d))

    def diagonal_entries(self, g: Matrix) -> tuple[int, ...]:
        d = self.d
        return tuple(g[i * d + i] for i in range(d))

    def simple_weyl_rep(self, k: int) -> Matrix:
        a = self.datum.simple[k]
        R = self.ring
        neg = tuple(-x for x in a)
        return self.prod(self.root_element(a, R.one), self.root_element(neg, R.neg(R.one)),
                         self.root_element(a, R.one))

    def weyl_rep(self, w: WeylElement) -> Matrix:
        """n_w: the product of the simple representatives along the reduced word."""
        hit = self._weyl_cache.get(w.word)
        if hit is None:
            hit = self.prod(*(self.simple_weyl_rep(k) for k in w.word))
            self._weyl_cache[w.word] = hit
        return hit

    def weyl_permutation(self, w: WeylElement) -> tuple[int, ...]:
        """pi with n_w diag(t) n_w^-1 = diag(t_{pi^-1(i)}), i.e. entry k moves to pi[k]."""
        nw = self.weyl_rep(w)
        d = self.d
        out = [None] * d
        for i in range(d):
            for j in range(d):
                if nw[i * d + j] != self.ring.zero:
                    out[j] = i
        return tuple(out)

    # -- Frobenius ----------------------------------------------------------------
    def entrywise_frobenius(self, g: Matrix, k: int = 1) -> Matrix:
        R = self.ring
        return tuple(R.frobenius(x, k) for x in g)

    def frobenius(self, g: Matrix, k: int = 1) -> Matrix:
        """F^k(g) with F(g) = n_w0 F_std(g) n_w0^-1 for the twist w0."""
        if self.twist.is_identity:
            return self.entrywise_frobenius(g, k)
        for _ in range(k):
            g = self.prod(self.twist_lift, self.entrywise_frobenius(g), self.twist_lift_inv)
        return g

    def _check_frobenius_stability(self) -> None:
        d = self.d
        nw = self.twist_lift
        for i in range(d):
            if sum(1 for j in range(d) if nw[i * d + j] != self.ring.zero) != 1:
                raise ValueError("twist representative is not monomial")

    # -- filtration -----------------------------------------------------------------
    def level(self, g: Matrix) -> int:
        R = self.ring
        best = R.r
        for x, e in zip(g, self.identity):
            if x != e:
                best = min(best, R.valuation(R.sub(x, e)))
                if best == 0:
                    return 0
        return best

    def reduce(self, g: Matrix, r2: int) -> Matrix:
        R = self.ring
        if r2 == R.r:
            return g
        return tuple(R.reduce(x, r2) for x in g)

    def truncation(self, r2: int) -> "GroupDescriptor":
        return build_group(self.preset, truncate(self.ring, r2), self.twist)

    # -- extensions -----------------------------------------------------------------
    def extension(self, m: int) -> "GroupDescriptor":
        big, _ = extend(self.ring, m)
        return build_group(self.preset, big, self.twist)

    def embed(self, g: Matrix, target: "GroupDescriptor") -> Matrix:
        if target.ring == self.ring:
            return g
        emb = embedding(self.ring, target.ring)
        return tuple(emb.map(x) for x in g)

    # -- subgroup predicates ------------------------------------------------------------
    def is_diagonal(self, g: Matrix) -> bool:
        d = self.d
        return all(g[i * d + j] == self.ring.zero for i in range(d) for j in range(d) if i != j)

    def in_torus(self, g: Matrix) -> bool:
        return self.is_diagonal(g) and self.is_member(g)

    def _unitriangular(self, g: Matrix, upper: bool) -> bool:
        d, R = self.d, self.ring
        for i in range(d):
            for j in range(d):
                x = g[i * d + j]
                if i == j:
                    if x != R.one:
                        return False
                elif (i > j) == upper and x != R.zero:
                    return False
        return True

    def in_U(self, g: Matrix) -> bool:
        return self._unitriangular(g, True) and self.is_member(g)

    def in_U_minus(self, g: Matrix) -> bool:
        return self._unitriangular(g, False) and self.is_member(g)

    def in_B(self, g: Matrix) -> bool:
        d, R = self.d, self.ring
        return self.is_member(g) and all(g[i * d + j] == R.zero for i in range(d) for j in range(i))

    def in_root_subgroup(self, g: Matrix, a: Vector) -> bool:
        d = self.d
        i, j = self.datum.leading_position(tuple(a))
        return g == self.root_element(a, g[i * d + j])

    def in_level(self, g: Matrix, i: int) -> bool:
        return self.level(g) >= i

    def root_coordinate(self, g: Matrix, a: Vector) -> int:
        """Entry of g at the leading matrix position of the root a."""
        i, j = self.datum.leading_position(tuple(a))
        return g[i * self.d + j]

    def factor_product(self, g: Matrix, roots: Sequence[Vector], side: str = "left") -> dict | None:
        """Coordinates u_b with g = prod_b p_b(u_b) over ``roots`` in the given order.

        The order must list roots so that no root is a sum of roots listed after
        it (e.g. increasing height); factors are peeled from ``side``.
        Returns None if g is not such a product.
        """
        R = self.ring
        coords = {}
        if side == "left":
            for b in roots:
                u = self.root_coordinate(g, b)
                coords[tuple(b)] = u
                if u:
                    g = self.mul(self.root_element(b, R.neg(u)), g)
        else:
            for b in roots:
                u = self.root_coordinate(g, b)
                coords[tuple(b)] = u
                if u:
                    g = self.mul(g, self.root_element(b, R.neg(u)))
        return coords if g == self.identity else None

    def factor_U(self, g: Matrix) -> dict | None:
        """Coordinates in U = prod over positive roots, increasing height."""
        return self.factor_product(g, self.datum.positive)

    def factor_U_minus(self, g: Matrix) -> dict | None:
        return self.factor_product(g, self.datum.negative)

    def compose_product(self, coords: dict, roots: Sequence[Vector]) -> Matrix:
        return self.prod(*(self.root_element(b, coords.get(tuple(b), self.ring.zero)) for b in roots))

    # -- enumeration ----------------------------------------------------------------------
    def elements(self) -> Iterator[Matrix]:
        """All elements of G(R), in lexicographic order of the flat matrix."""
        R, d = self.ring, self.d
        require(f"{self.preset} matrix scan", R.size ** (d * d))
        for g in product(range(R.size), repeat=d * d):
            if self.is_member(g):
                yield g

    def torus_elements(self, level: int = 0) -> list[Matrix]:
        """Diagonal elements of T with entries in 1 + m^level (units when level = 0)."""
        R = self.ring
        from .ring import enumerate_indices, one_plus_m_power
        pool = list(enumerate_indices(R, "units" if level == 0 else one_plus_m_power(level)))
        out = []
        require("torus scan", len(pool) ** self.d)
        for entries in product(pool, repeat=self.d):
            g = self.diagonal(entries)
            if self.is_member(g):
                out.append(g)
        return out

    def unipotent_elements(self, roots: Sequence[Vector], level: int = 0) -> list[Matrix]:
        """All products prod_b p_b(u_b) with u_b in m^level, in the given order."""
        pool = list(self.ring.ideal(level))
        require("unipotent scan", len(pool) ** len(roots))
        out = []
        for us in product(pool, repeat=len(roots)):
            out.append(self.prod(*(self.root_element(b, u) for b, u in zip(roots, us))))
        return out

    def U_elements(self, level: int = 0) -> list[Matrix]:
        return self.unipotent_elements(self.datum.positive, level)

    def U_minus_elements(self, level: int = 0) -> list[Matrix]:
        return self.unipotent_elements(self.datum.negative, level)


class GroupElem:
    """An element of a ``GroupDescriptor`` with operators."""

    __slots__ = ("group", "matrix")

    def __init__(self, group: GroupDescriptor, matrix: Matrix):
        self.group = group
        self.matrix = tuple(matrix)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(self.group, self.group.mul(self.matrix, other.matrix))

    def inverse(self) -> "GroupElem":
        return GroupElem(self.group, self.group.inv(self.matrix))

    def __eq__(self, other):
        return isinstance(other, GroupElem) and other.group == self.group and other.matrix == self.matrix

    def __hash__(self):
        return hash((self.group.key(), self.matrix))

    def __repr__(self):
        return f"GroupElem({self.group.to_int_rows(self.matrix)})"

    def frobenius(self, k: int = 1) -> "GroupElem":
        return GroupElem(self.group, self.group.frobenius(self.matrix, k))

    def level(self) -> int:
        return self.group.level(self.matrix)

    def to_list(self) -> list[list[list[int]]]:
        return self.group.to_rows(self.matrix)


def _det(R: RingDescriptor, rows: list[list[int]]) -> int:
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return R.sub(R.mul(rows[0][0], rows[1][1]), R.mul(rows[0][1], rows[1][0]))
    acc = R.zero
    for j in range(d):
        if rows[0][j] == R.zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = R.mul(rows[0][j], _det(R, minor))
        acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
    return acc


@lru_cache(maxsize=None)
def _build(preset: str, ring: RingDescriptor, word: tuple[int, ...]) -> GroupDescriptor:
    datum = make_root_datum(PRESETS[preset])
    return GroupDescriptor(preset, ring, datum.weyl_from_word(word))


def build_group(preset: str, ring: RingDescriptor, twist: WeylElement | str | None = None) -> GroupDescriptor:
    """The preset group over ``ring`` with Frobenius twisted by a Weyl element."""
    preset = normalize_preset(preset)
    datum = make_root_datum(PRESETS[preset])
    if twist is None:
        w = datum.identity()
    elif isinstance(twist, str):
        w = datum.weyl_by_name(twist)
    else:
        w = twist
    return _build(preset, ring, w.word)


def root_element(group: GroupDescriptor, a: Vector, u) -> GroupElem:
    u = u.index if isinstance(u, RingElem) else group.ring.from_int(u)
    return GroupElem(group, group.root_element(a, u))


def coroot_element(group: GroupDescriptor, a: Vector, lam) -> GroupElem:
    lam = lam.index if isinstance(lam, RingElem) else group.ring.from_int(lam)
    return GroupElem(group, group.coroot_element(a, lam))


def level(g: GroupElem) -> int:
    return g.level()


def frobenius_g(g: GroupElem, k: int = 1) -> GroupElem:
    return g.frobenius(k)


def simple_root(group: GroupDescriptor, k: int = 0) -> Vector:
    return group.datum.simple[k]


def demo_ring(label: str) -> RingDescriptor:
    """Convenience names used in examples and tests: Z/4, Z/8, F2[t]/t2, GR16, F3[t]/t2."""
    table = {
        "Z/2": (2, 1, 1, "witt"), "Z/3": (3, 1, 1, "witt"), "Z/4": (2, 2, 1, "witt"), "Z/8": (2, 3, 1, "witt"),
        "Z/9": (3, 2, 1, "witt"), "F2[t]/t2": (2, 2, 1, "equal-char"), "F3[t]/t2": (3, 2, 1, "equal-char"),
        "GR16": (2, 2, 2, "witt"), "F4": (2, 1, 2, "witt"), "F3": (3, 1, 1, "witt"),
    }
    p, r, n, kind = table[label]
    return make_ring(p, r, n, kind)
