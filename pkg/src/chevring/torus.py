"""Diagonal tori with Weyl-twisted Frobenius, their fixed points, norms and characters.

A torus T_w is the diagonal subgroup with Frobenius F_w = Ad(n_w) o F.  On
diagonal entries this permutes positions and applies the ring Frobenius, so
T^{F^n} has entries in the unramified extension of degree n * L, where L is
the lcm of the cycle lengths of the permutation raised to the n-th power.

Fixed points are enumerated through the splitting R^x = (Teichmuller) x (1 + m):
both factors are Frobenius-stable and the defining relations of the torus
split along them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import product
from math import gcd, lcm
from typing import Callable, Iterator, Sequence

from .budget import require
from .group import GroupDescriptor, Matrix, build_group
from .ring import WITT, RingDescriptor, embedding, extend, prime_factors
from .rootdata import Vector, WeylElement

Entries = tuple[int, ...]


# ---------------------------------------------------------------------------
# finite abelian groups


def _crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        # solve x' = x mod m, x' = r mod n (coprime moduli)
        t = ((r - x) * pow(m, -1, n)) % n if n > 1 else 0
        x, m = x + m * t, m * n
    return x % m if m > 1 else 0


class AbelianStructure:
    """A finite abelian group given by explicit element lists of direct factors.

    ``parts`` are element lists of subgroups whose internal product is direct;
    ``split`` sends an element to its tuple of components.  The structure
    records invariant factors d_1 | d_2 | ..., generators, and a discrete log.
    """

    def __init__(self, parts: Sequence[Sequence], mul: Callable, identity, split: Callable | None = None,
                 orders: Sequence[dict | None] | None = None):
        self.mul = mul
        self.identity = identity
        self.split = split if split is not None else (lambda x: (x,))
        self.parts = [list(p) for p in parts]
        primaries = []  # (generator, prime, order, part index)
        self._part_logs = []
        known = list(orders) if orders is not None else [None] * len(self.parts)
        for idx, elems in enumerate(self.parts):
            basis, logs = self._primary_basis(elems, known[idx])
            offset = len(primaries)
            primaries.extend((g, p, o, idx) for g, p, o in basis)
            self._part_logs.append((offset, len(basis), logs))
        self.primaries = primaries
        self._log_memo: dict = {}
        self._assign_invariants()

    # -- construction ---------------------------------------------------------
    def power(self, x, k: int):
        out, base = self.identity, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def element_order(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def order_dividing(self, x, n: int) -> int:
        """Order of x, given that it divides n."""
        k = n
        for p in prime_factors(n) if n > 1 else []:
            while k % p == 0 and self.power(x, k // p) == self.identity:
                k //= p
        return k

    def _primary_basis(self, elems: list, orders: dict | None = None):
        n = len(elems)
        if len(set(elems)) != n or self.identity not in set(elems):
            raise ValueError("element list must be a duplicate-free subgroup")
        if orders is None:
            orders = {x: self.order_dividing(x, n) for x in elems}
        basis = []
        primes = prime_factors(n) if n > 1 else []
        # per prime: span dict element -> exponent vector on that prime's generators
        spans = []
        for p in primes:
            gp = [x for x in elems if _is_power_of(orders[x], p)]
            span = {self.identity: ()}
            gens = []
            while len(span) < len(gp):
                best, best_k, best_vec = None, 0, None
                for x in gp:
                    if x in span:
                        continue
                    k, y = 1, x
                    while y not in span:
                        y = self.mul(y, x)
                        k += 1
                    if k > best_k:
                        best, best_k, best_vec = x, k, span[y]
                if any(v % best_k for v in best_vec):
                    raise AssertionError("primary decomposition failed")
                root = self.identity
                for (g, o), v in zip(gens, best_vec):
                    root = self.mul(root, self.power(g, v // best_k))
                gen = self.mul(best, self.power(root, _group_exponent(gens) - 1))
                if self.power(gen, best_k) != self.identity:
                    raise AssertionError("adjusted generator has the wrong order")
                gens.append((gen, best_k))
                new_span = {}
                step = self.identity
                for j in range(best_k):
                    for s, vec in span.items():
                        new_span[self.mul(s, step)] = vec + (j,)
                    step = self.mul(step, gen)
                span = new_span
            spans.append((p, gens, span))
            basis.extend((g, p, o) for g, o in gens)
        # discrete log for the part: combine the primes
        if not spans:
            return basis, {self.identity: ()}
        combined = {self.identity: ()}
        for _, _, span in spans:
            nxt = {}
            for a, va in combined.items():
                for b, vb in span.items():
                    nxt[self.mul(a, b)] = va + vb
            combined = nxt
        if len(combined) != n:
            raise AssertionError("primary generators do not span the group")
        return basis, combined

    def _assign_invariants(self) -> None:
        by_prime: dict[int, list[int]] = {}
        for i, (_, p, o, _) in enumerate(self.primaries):
            by_prime.setdefault(p, []).append(i)
        for p in by_prime:
            by_prime[p].sort(key=lambda i: -self.primaries[i][2])
        slots = max((len(v) for v in by_prime.values()), default=0)
        # slot 0 is the largest invariant factor; reverse for d_1 | d_2 | ...
        members: list[list[int]] = [[] for _ in range(slots)]
        for p, idxs in by_prime.items():
            for s, i in enumerate(idxs):
                members[s].append(i)
        members.reverse()
        self._slot_of = {}
        self.invariants = []
        self.generators = []
        for s, idxs in enumerate(members):
            d = 1
            g = self.identity
            for i in idxs:
                d *= self.primaries[i][2]
                g = self.mul(g, self.primaries[i][0])
                self._slot_of[i] = s
            self.invariants.append(d)
            self.generators.append(g)
        self._slot_members = members

    # -- queries ----------------------------------------------------------------
    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariants, 1)

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def log(self, x) -> tuple[int, ...]:
        """Exponent vector of x against the invariant generators."""
        hit = self._log_memo.get(x)
        if hit is None:
            hit = self._log_memo[x] = self._log(x)
        return hit

    def _log(self, x) -> tuple[int, ...]:
        comps = self.split(x)
        prim = [0] * len(self.primaries)
        for (offset, count, logs), c in zip(self._part_logs, comps):
            vec = logs.get(c)
            if vec is None:
                raise KeyError("element is not in the group")
            prim[offset:offset + count] = vec
        out = []
        for s, idxs in enumerate(self._slot_members):
            out.append(_crt([prim[i] for i in idxs], [self.primaries[i][2] for i in idxs]))
        return tuple(out)

    def from_log(self, vec: Sequence[int]):
        out = self.identity
        for g, e in zip(self.generators, vec):
            out = self.mul(out, self.power(g, e))
        return out

    def elements(self) -> Iterator:
        require("abelian group enumeration", self.order)
        for vec in product(*(range(d) for d in self.invariants)):
            yield self.from_log(vec)

    def to_record(self) -> dict:
        return {"invariants": list(self.invariants), "order": self.order}


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _group_exponent(gens) -> int:
    return reduce(lcm, (o for _, o in gens), 1)


@dataclass(frozen=True)
class Character:
    """A homomorphism to Q/Z given by the images of the invariant generators."""

    structure: AbelianStructure
    images: tuple[Fraction, ...]

    def __call__(self, x) -> Fraction:
        return self.value_at_log(self.structure.log(x))

    def value_at_log(self, vec: Sequence[int]) -> Fraction:
        return sum((e * v for e, v in zip(vec, self.images)), Fraction(0)) % 1

    @property
    def order(self) -> int:
        return reduce(lcm, (v.denominator for v in self.images), 1)

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.images)

    def __eq__(self, other):
        return isinstance(other, Character) and other.structure is self.structure and other.images == self.images

    def __hash__(self):
        return hash(self.images)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.structure, tuple((a + b) % 1 for a, b in zip(self.images, other.images)))

    def inverse(self) -> "Character":
        return Character(self.structure, tuple((-a) % 1 for a in self.images))

    def to_record(self) -> dict:
        return {"invariants": list(self.structure.invariants), "images": [str(v) for v in self.images]}


def characters(structure: AbelianStructure) -> list[Character]:
    """All characters, ordered lexicographically by generator images."""
    require("character enumeration", structure.order)
    return [Character(structure, tuple(Fraction(k, d) for k, d in zip(ks, structure.invariants)))
            for ks in product(*(range(d) for d in structure.invariants))]


def character_from_function(structure: AbelianStructure, fn: Callable) -> Character:
    """The character whose values on the invariant generators are given by ``fn``."""
    return Character(structure, tuple(Fraction(fn(g)) % 1 for g in structure.generators))


def trivial_character(structure: AbelianStructure) -> Character:
    return Character(structure, tuple(Fraction(0) for _ in structure.invariants))


# ---------------------------------------------------------------------------
# restriction of scalars back to a subring


def restrict(y: int, small: RingDescriptor, big: RingDescriptor) -> int:
    """Inverse of the embedding small -> big."""
    if small == big:
        return y
    return embedding(small, big).preimage(y)


def unit_norm(x: int, big: RingDescriptor, base: RingDescriptor) -> int:
    """N(x) = x F(x) ... F^{m-1}(x) for big of degree m over base, returned in base."""
    m = big.n // base.n
    acc = big.one
    y = x
    for _ in range(m):
        acc = big.mul(acc, y)
        y = big.frobenius(y, 1)
    return restrict(acc, base, big)


# ---------------------------------------------------------------------------
# tori


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, k = [], start
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = perm[k]
        out.append(cyc)
    return out


def _perm_power(perm: Sequence[int], k: int) -> tuple[int, ...]:
    out = tuple(range(len(perm)))
    for _ in range(k):
        out = tuple(perm[i] for i in out)
    return out


class Torus:
    """The diagonal torus T_w of G with Frobenius F_w = Ad(n_w) o F_G."""

    def __init__(self, G: GroupDescriptor, w: WeylElement):
        if G.ring.n != G.ring.frobenius_degree:
            raise ValueError("tori are built over a base ring fixed by its Frobenius")
        self.G = G
        self.w = w
        self.datum = G.datum
        self.lift = G.weyl_rep(w)
        self.effective = self.datum.compose(w, G.twist)
        eff = G.mul(self.lift, G.twist_lift)
        d = G.d
        self.perm = tuple(next(i for i in range(d) if eff[i * d + j] != G.ring.zero) for j in range(d))
        self._fixed: dict[int, FixedPoints] = {}

    def __repr__(self):
        return f"Torus({self.G.preset} over {self.G.ring.label()}, w={self.w.name()})"

    def to_record(self) -> dict:
        return {"group": self.G.to_record(), "twist": list(self.w.word), "lift": self.G.to_rows(self.lift)}

    @property
    def base(self) -> RingDescriptor:
        return self.G.ring

    def level_degree(self, n: int) -> int:
        """Degree N over the base ring of the ring holding T^{F^n}."""
        cyc = _cycles(_perm_power(self.perm, n))
        return n * reduce(lcm, (len(c) for c in cyc), 1)

    def ring_at(self, n: int) -> RingDescriptor:
        return extend(self.base, self.level_degree(n))[0]

    def group_at(self, n: int) -> GroupDescriptor:
        return build_group(self.G.preset, self.ring_at(n), self.G.twist)

    def frobenius(self, t: Entries, ring: RingDescriptor, k: int = 1) -> Entries:
        """F_w^k on diagonal entries over ``ring``."""
        for _ in range(k):
            out = [None] * len(t)
            for i, x in enumerate(t):
                out[self.perm[i]] = ring.frobenius(x, 1)
            t = tuple(out)
        return t

    def frobenius_matrix(self, t: Matrix, n: int, k: int = 1) -> Matrix:
        """F_w^k computed on matrices, as a cross-check of the entry formula."""
        Gn = self.group_at(n)
        lift = self.G.embed(self.lift, Gn)
        for _ in range(k):
            t = Gn.conj(lift, Gn.frobenius(t))
        return t

    def fixed(self, n: int = 1) -> "FixedPoints":
        if n not in self._fixed:
            self._fixed[n] = FixedPoints(self, n)
        return self._fixed[n]

    # -- roots and regularity ---------------------------------------------------
    def root_image(self, a: Vector, k: int = 1) -> Vector:
        w = self.effective
        v = tuple(a)
        for _ in range(k):
            v = self.datum.act(w, v)
        return v

    def stabilizes(self, a: Vector, n: int) -> bool:
        """Whether F^n maps the image of the coroot of a to itself."""
        img = self.root_image(a, n)
        return img == tuple(a) or img == tuple(-x for x in a)

    def minimal_stabilizing_power(self) -> int:
        m = 1
        while not all(self.stabilizes(a, m) for a in self.datum.roots):
            m += 1
        return m

    # -- norms ------------------------------------------------------------------
    def norm(self, t: Entries, b: int, a: int = 1) -> Entries:
        """N_{F^a}^{F^b}: T^{F^b} -> T^{F^a}."""
        if b % a:
            raise ValueError("norm needs a | b")
        big = self.ring_at(b)
        small = self.ring_at(a)
        acc = t
        y = t
        for _ in range(b // a - 1):
            y = self.frobenius(y, big, a)
            acc = tuple(big.mul(p, q) for p, q in zip(acc, y))
        if small == big:
            return acc
        return tuple(restrict(x, small, big) for x in acc)

    def coroot_point(self, a: Vector, lam: int, ring: RingDescriptor) -> Entries:
        expo = self.datum.coroot_diagonal(tuple(a))
        return tuple(ring.power(lam, e) for e in expo)

    def embed_entries(self, t: Entries, small: RingDescriptor, big: RingDescriptor) -> Entries:
        if small == big:
            return t
        emb = embedding(small, big)
        return tuple(emb.map(x) for x in t)


def _satisfies_relations(preset: str, t: Entries, ring: RingDescriptor) -> bool:
    if preset.startswith("GL"):
        return True
    if preset == "Sp4":
        return ring.mul(t[0], t[3]) == ring.one and ring.mul(t[1], t[2]) == ring.one
    acc = ring.one
    for x in t:
        acc = ring.mul(acc, x)
    return acc == ring.one


def _exponent_relations(preset: str, e: Sequence[int], modulus: int) -> bool:
    if preset.startswith("GL"):
        return True
    if preset == "Sp4":
        return (e[0] + e[3]) % modulus == 0 and (e[1] + e[2]) % modulus == 0
    return sum(e) % modulus == 0


class FixedPoints:
    """T^{F^n} as the direct product of its Teichmuller and principal-unit parts."""

    def __init__(self, torus: Torus, n: int):
        self.torus = torus
        self.n = n
        self.N = torus.level_degree(n)
        self.ring = torus.ring_at(n)
        self.identity = tuple(self.ring.one for _ in range(len(torus.perm)))
        self._alpha: dict = {}

    @property
    def mu(self) -> list[Entries]:
        return self._parts[0]

    @property
    def u1(self) -> list[Entries]:
        return self._parts[1]

    @cached_property
    def _parts(self):
        torus, n = self.torus, self.n
        R = self.ring
        preset = torus.G.preset
        perm_n = _perm_power(torus.perm, n)
        cycles = _cycles(perm_n)
        d = len(torus.perm)
        # Teichmuller part on exponents of a generator zeta of the residue units
        Q1 = R.residue_size - 1
        P = torus.base.q ** n
        choices = []
        for cyc in cycles:
            step = Q1 // (P ** len(cyc) - 1) if Q1 else 1
            choices.append([j * step for j in range(P ** len(cyc) - 1)] if Q1 else [0])
        require("Teichmuller part", reduce(lambda x, y: x * len(y), choices, 1))
        mu_exps = []
        for picks in product(*choices):
            e = [0] * d
            for cyc, e0 in zip(cycles, picks):
                v = e0
                for k in cyc:
                    e[k] = v % Q1 if Q1 else 0
                    v = v * P
            if _exponent_relations(preset, e, Q1 if Q1 else 1):
                mu_exps.append(tuple(e))
        zeta = R.teichmuller_generator
        powers = {}
        for e in {x for ex in mu_exps for x in ex}:
            powers[e] = R.power(zeta, e)
        mu = [tuple(powers[x] for x in e) for e in mu_exps]
        self._mu_orders = {t: reduce(lcm, (Q1 // gcd(Q1, x) for x in e), 1) if Q1 else 1
                           for t, e in zip(mu, mu_exps)}
        # principal units
        if R.r == 1:
            return mu, [self.identity]
        else:
            ones = [R.add(R.one, y) for y in R.ideal(1)]
            per_cycle = []
            for cyc in cycles:
                opts = []
                for u in ones:
                    if R.frobenius(u, n * len(cyc)) != u:
                        continue
                    opts.append(u)
                per_cycle.append(opts)
            require("principal unit part", reduce(lambda x, y: x * len(y), per_cycle, 1))
            u1 = []
            for picks in product(*per_cycle):
                t = [None] * d
                for cyc, u0 in zip(cycles, picks):
                    v = u0
                    for k in cyc:
                        t[k] = v
                        v = R.frobenius(v, n)
                t = tuple(t)
                if _satisfies_relations(preset, t, R):
                    u1.append(t)
            return mu, u1

    # -- group law --------------------------------------------------------------
    def mul(self, s: Entries, t: Entries) -> Entries:
        R = self.ring
        return tuple(R.mul(x, y) for x, y in zip(s, t))

    def inv(self, t: Entries) -> Entries:
        return tuple(self.ring.inv(x) for x in t)

    def split(self, t: Entries) -> tuple[Entries, Entries]:
        R = self.ring
        teich = tuple(R.teichmuller(x) for x in t)
        return teich, tuple(R.div(x, y) for x, y in zip(t, teich))

    @property
    def size(self) -> int:
        return len(self.mu) * len(self.u1)

    def elements(self) -> list[Entries]:
        require("torus fixed points", self.size)
        return [self.mul(a, b) for a in self.mu for b in self.u1]

    def contains(self, t: Entries) -> bool:
        R = self.ring
        return (all(R.is_unit(x) for x in t) and _satisfies_relations(self.torus.G.preset, t, R)
                and self.torus.frobenius(t, R, self.n) == t)

    @cached_property
    def structure(self) -> AbelianStructure:
        mu, u1 = self._parts
        return AbelianStructure([mu, u1], self.mul, self.identity, self.split,
                                orders=[self._mu_orders, None])

    def matrix(self, t: Entries) -> Matrix:
        return self.torus.group_at(self.n).diagonal(t)

    # -- congruence subgroups ------------------------------------------------------
    @cached_property
    def congruence(self) -> list[Entries]:
        """The fixed points of the level r-1 congruence torus (all of T^{F^n} when r = 1)."""
        R = self.ring
        if R.r == 1:
            return self.elements()
        lvl = R.r - 1
        return [t for t in self.u1 if all(R.valuation(R.sub(x, R.one)) >= lvl for x in t)]

    @cached_property
    def congruence_structure(self) -> AbelianStructure:
        elems = self.congruence
        return AbelianStructure([elems], self.mul, self.identity)

    def alpha_subgroup(self, a: Vector) -> list[Entries]:
        """Fixed points of the level r-1 congruence part of the image of the coroot of a."""
        a = tuple(a)
        if a not in self._alpha:
            self._alpha[a] = self._alpha_subgroup(a)
        return self._alpha[a]

    def alpha_norms(self, a: Vector) -> list[Entries]:
        """The image in T^F of alpha_subgroup(a) under the norm, without repeats."""
        key = ("norm", tuple(a))
        if key not in self._alpha:
            self._alpha[key] = sorted({self.torus.norm(t, self.n, 1) for t in self.alpha_subgroup(a)})
        return self._alpha[key]

    def _alpha_subgroup(self, a: Vector) -> list[Entries]:
        R = self.ring
        T = self.torus
        if R.r == 1:
            # solve on exponents of zeta: F^n sends entry i to perm_n[i] raised to P
            Q1 = R.residue_size - 1
            P = T.base.q ** self.n
            perm_n = _perm_power(T.perm, self.n)
            expo = T.datum.coroot_diagonal(tuple(a))
            g = Q1
            for i, k in enumerate(perm_n):
                g = gcd(g, expo[k] - P * expo[i])
            step = Q1 // g
            zeta = R.teichmuller_generator
            pool = [R.power(zeta, e) for e in range(0, Q1, step)]
            points = [T.coroot_point(a, lam, R) for lam in pool]
        else:
            # u^2 = 0, so (1 + u)^c = 1 + c u
            expo = T.datum.coroot_diagonal(a)
            points = [tuple(R.add(R.one, R.mul(R.from_int(c % R.modulus), u)) for c in expo)
                      for u in _top_level_solutions(T, a, self.n)]
        return sorted({t for t in points if T.frobenius(t, R, self.n) == t})


def _top_coordinates(R: RingDescriptor, y: int) -> list[int]:
    """F_p coordinates of y in m^{r-1} against the basis pi^{r-1} x^j."""
    c = R.decode(y)
    if R.kind == WITT:
        scale = R.p ** (R.r - 1)
        return [x // scale for x in c]
    return list(c[(R.r - 1) * R.n:])


def _nullspace_mod_p(columns: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the kernel of the matrix with the given columns, over F_p."""
    n_cols = len(columns)
    rows = [list(r) for r in zip(*columns)] if columns else []
    pivots = []
    row = 0
    for col in range(n_cols):
        piv = next((i for i in range(row, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = pow(rows[row][col], -1, p)
        rows[row] = [x * inv % p for x in rows[row]]
        for i in range(len(rows)):
            if i != row and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[row])]
        pivots.append(col)
        row += 1
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        v = [0] * n_cols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][free]) % p
        basis.append(v)
    return basis


def _top_level_solutions(T: "Torus", a: Vector, n: int) -> list[int]:
    """u in m^{r-1} with F^n fixing the coroot point of 1 + u.

    Since u^2 = 0, the coroot point has entries 1 + c_i u and the fixed-point
    condition c_{perm(i)} u = c_i F^n(u) is F_p-linear in u.
    """
    R = T.ring_at(n)
    p = R.p
    expo = T.datum.coroot_diagonal(tuple(a))
    perm_n = _perm_power(T.perm, n)
    top = R.power(R.uniformizer(), R.r - 1)
    x = R.generator() if R.n > 1 else R.one
    basis = [R.mul(top, R.power(x, j)) for j in range(R.n)]

    def scaled(k, y):
        return R.mul(R.from_int(k % R.modulus), y)

    columns = []
    for b in basis:
        fb = R.frobenius(b, n)
        col = []
        for i, k in enumerate(perm_n):
            col.extend(_top_coordinates(R, R.sub(scaled(expo[k], b), scaled(expo[i], fb))))
        columns.append(col)
    kernel = _nullspace_mod_p(columns, p)
    require("coroot congruence points", p ** len(kernel))
    out = []
    for coeffs in product(range(p), repeat=len(kernel)):
        u = R.zero
        for c, v in zip(coeffs, kernel):
            for cj, bj in zip(v, basis):
                if c * cj % p:
                    u = R.add(u, scaled(c * cj % p, bj))
        out.append(u)
    return out


def make_torus(G: GroupDescriptor, w: WeylElement | str | None = None) -> Torus:
    if w is None:
        w = G.datum.identity()
    elif isinstance(w, str):
        w = G.datum.weyl_by_name(w)
    return Torus(G, w)


def torus_fixed_points(T: Torus, n: int = 1) -> AbelianStructure:
    return T.fixed(n).structure


def norm_map(T: Torus, b: int, a: int = 1) -> Callable[[Entries], Entries]:
    if b % a:
        raise ValueError("norm needs a | b")
    return lambda t: T.norm(t, b, a)


# ---------------------------------------------------------------------------
# regularity


@dataclass(frozen=True)
class RegularityCertificate:
    regular: bool
    m: int
    failing_root: Vector | None

    def to_record(self) -> dict:
        return {"regular": self.regular, "m": self.m,
                "failing_root": list(self.failing_root) if self.failing_root else None}


def restricted_norm_values(T: Torus, theta: Character, a: Vector, n: int) -> list[Fraction]:
    """Values of theta on the norm image of the coroot fixed points of a at level n."""
    return [theta(t) for t in T.fixed(n).alpha_norms(a)]


def is_regular_at(T: Torus, theta: Character, a: Vector, n: int) -> bool:
    return any(v != 0 for v in restricted_norm_values(T, theta, a, n))


def regularity(T: Torus, theta: Character) -> RegularityCertificate:
    """The test at the minimal m with F^m stabilising every coroot image."""
    m = T.minimal_stabilizing_power()
    for a in T.datum.roots:
        if not is_regular_at(T, theta, a, m):
            return RegularityCertificate(False, m, a)
    return RegularityCertificate(True, m, None)


def is_regular(T: Torus, theta: Character) -> bool:
    return regularity(T, theta).regular


def is_regular_all_levels(T: Torus, theta: Character, n_max: int = 6) -> bool:
    """Definition check: nontrivial at every n <= n_max with F^n stabilising the coroot image."""
    for a in T.datum.roots:
        for n in range(1, n_max + 1):
            if T.stabilizes(a, n) and not is_regular_at(T, theta, a, n):
                return False
    return True


def regular_characters(T: Torus) -> list[Character]:
    return [th for th in characters(T.fixed(1).structure) if is_regular(T, th)]


# ---------------------------------------------------------------------------
# transporters and character transport


@dataclass(frozen=True)
class TransporterClass:
    x: WeylElement
    lift: Matrix
    lifts: tuple

    def to_record(self, G: GroupDescriptor) -> dict:
        return {"w": self.x.name(), "word": list(self.x.word), "lift": G.to_rows(self.lift),
                "lift_count": len(self.lifts)}


def weyl_transporter(T: Torus, Tp: Torus) -> list[TransporterClass]:
    """Classes x in W with x w'_eff = w_eff x, each with all lifts n_x * delta, delta in T^1."""
    if T.G != Tp.G:
        raise ValueError("tori must live in the same group")
    D = T.datum
    G = T.G
    deltas = G.torus_elements(1) if G.ring.r > 1 else [G.identity]
    out = []
    for x in D.weyl_elements():
        if D.compose(x, Tp.effective) == D.compose(T.effective, x):
            nx = G.weyl_rep(x)
            out.append(TransporterClass(x, nx, tuple(G.mul(nx, dlt) for dlt in deltas)))
    return out


def transport_character(T: Torus, Tp: Torus, lift: Matrix, theta_p: Character) -> Character:
    """The character t -> theta'(lift^-1 t lift) of T^F."""
    points = _pulled_back_generators(T, Tp, lift)
    return Character(T.fixed(1).structure, tuple(theta_p(t) for t in points))


@lru_cache(maxsize=4096)
def _pulled_back_generators(T: Torus, Tp: Torus, lift: Matrix) -> tuple[Entries, ...]:
    """lift^-1 g lift for the invariant generators g of T^F, checked to land in T'^F."""
    fp, fpp = T.fixed(1), Tp.fixed(1)
    if fp.ring != fpp.ring:
        raise ValueError("lift does not transport T' to T")
    Gn = T.group_at(1)
    L = T.G.embed(lift, Gn)
    Li = Gn.inv(L)
    out = []
    for g in fp.structure.generators:
        m = Gn.prod(Li, Gn.diagonal(g), L)
        if not Gn.is_diagonal(m):
            raise ValueError("lift does not normalise the diagonal torus")
        t = Gn.diagonal_entries(m)
        if not fpp.contains(t):
            raise ValueError("lift does not carry T^F into T'^F")
        out.append(t)
    return tuple(out)


@dataclass(frozen=True)
class ConjugacyWitness:
    n: int
    x: WeylElement
    witness: Matrix


def geometric_conjugacy_search(T: Torus, theta: Character, Tp: Torus, theta_p: Character,
                               n_max: int = 6) -> ConjugacyWitness | None:
    """Least n <= n_max and g in N(T, T')^{F^n} carrying theta o N to theta' o N on congruence fixed points.

    Candidates are the canonical lifts n_x; the diagonal factor of a general
    element of the transporter acts trivially on the torus.
    """
    if T.G != Tp.G:
        raise ValueError("tori must live in the same group")
    D = T.datum
    for n in range(1, n_max + 1):
        wn = _weyl_power(D, T.effective, n)
        wpn = _weyl_power(D, Tp.effective, n)
        fp, fpp = T.fixed(n), Tp.fixed(n)
        if fp.ring != fpp.ring:
            continue
        Gn = T.group_at(n)
        for x in D.weyl_elements():
            if D.compose(x, wpn) != D.compose(wn, x):
                continue
            g = T.G.embed(T.G.weyl_rep(x), Gn)
            gi = Gn.inv(g)
            ok = True
            for y in fpp.congruence:
                conj = Gn.diagonal_entries(Gn.prod(g, Gn.diagonal(y), gi))
                if theta_p(Tp.norm(y, n, 1)) != theta(T.norm(conj, n, 1)):
                    ok = False
                    break
            if ok:
                return ConjugacyWitness(n, x, g)
    return None


def _weyl_power(D, w: WeylElement, n: int) -> WeylElement:
    out = D.identity()
    for _ in range(n):
        out = D.compose(out, w)
    return out


def inner_product(theta: Character, theta_p: Character) -> int:
    """<theta, theta'> on T^F, evaluated exactly.

    The sum of a nontrivial character psi of order o over the group vanishes
    because each value k/o is taken equally often; this is checked rather
    than assumed.
    """
    S = theta.structure
    counts: dict[Fraction, int] = {}
    for vec in product(*(range(d) for d in S.invariants)):
        v = (theta.value_at_log(vec) - theta_p.value_at_log(vec)) % 1
        counts[v] = counts.get(v, 0) + 1
    if set(counts) == {Fraction(0)}:
        return 1
    o = reduce(lcm, (v.denominator for v in counts), 1)
    if len(counts) != o or len(set(counts.values())) != 1:
        raise AssertionError("character values are not equidistributed")
    return 0
