"""Decompositions and commutator identities in the preset groups.

Iwahori factorisation of the first congruence subgroup, the refined Bruhat
decomposition over a local ring, commutators of root elements (opposite
roots, the general Chevalley expansion, and the inductive version for
products), and the labelling of nontrivial elements of Z^1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .group import GroupDescriptor, Matrix
from .rootdata import Vector, WeylElement


def _neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# triangular factorisations


def ldu(G: GroupDescriptor, g: Matrix) -> tuple[Matrix, Matrix, Matrix] | None:
    """g = L D V with L lower unitriangular, D diagonal, V upper unitriangular.

    Returns None when some leading pivot is not a unit.
    """
    R, d = G.ring, G.d
    work = [list(g[i * d:(i + 1) * d]) for i in range(d)]
    lower = [[R.one if i == j else R.zero for j in range(d)] for i in range(d)]
    for k in range(d):
        piv = work[k][k]
        if not R.is_unit(piv):
            return None
        pinv = R.inv(piv)
        for i in range(k + 1, d):
            f = R.mul(work[i][k], pinv)
            if f:
                lower[i][k] = f
                work[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(work[i], work[k])]
    diag = [work[i][i] for i in range(d)]
    upper = []
    for i in range(d):
        dinv = R.inv(diag[i])
        upper.extend(R.mul(dinv, x) for x in work[i])
    L = tuple(x for row in lower for x in row)
    return L, G.diagonal(diag), tuple(upper)


def _reversal(G: GroupDescriptor, g: Matrix) -> Matrix:
    d = G.d
    return tuple(g[(d - 1 - i) * d + (d - 1 - j)] for i in range(d) for j in range(d))


def upper_lower(G: GroupDescriptor, g: Matrix) -> tuple[Matrix, Matrix] | None:
    """g = A C with A upper and C lower unitriangular, if such a factorisation exists."""
    parts = ldu(G, _reversal(G, g))
    if parts is None:
        return None
    low, diag, up = parts
    if diag != G.identity:
        return None
    return _reversal(G, low), _reversal(G, up)


# ---------------------------------------------------------------------------
# Iwahori


@dataclass(frozen=True)
class IwahoriRecord:
    u_minus: Matrix
    t: Matrix
    u: Matrix

    def product(self, G: GroupDescriptor) -> Matrix:
        return G.prod(self.u_minus, self.t, self.u)

    def to_record(self, G: GroupDescriptor) -> dict:
        return {"u_minus": G.to_rows(self.u_minus), "t": G.to_rows(self.t), "u": G.to_rows(self.u)}


def iwahori_decompose(G: GroupDescriptor, g: Matrix) -> IwahoriRecord:
    """The factorisation g = u^- t u with factors in (U^-)^1, T^1 and U^1."""
    if G.level(g) < 1:
        raise ValueError("element is not in the first congruence subgroup")
    parts = ldu(G, g)
    if parts is None:
        raise AssertionError("congruence element without unit pivots")
    rec = IwahoriRecord(*parts)
    if not (G.in_U_minus(rec.u_minus) and G.in_torus(rec.t) and G.in_U(rec.u)):
        raise AssertionError("Iwahori factors left their subgroups")
    if min(G.level(rec.u_minus), G.level(rec.t), G.level(rec.u)) < 1:
        raise AssertionError("Iwahori factors are not congruent to 1")
    return rec


# ---------------------------------------------------------------------------
# residue Bruhat cell and the refined decomposition


def _rank_over_field(F, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != F.zero), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][c])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != F.zero:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _rank_profile(F, d: int, g: Matrix) -> tuple:
    out = []
    for i in range(d):
        for j in range(d):
            sub = [[g[k * d + c] for c in range(j + 1)] for k in range(i, d)]
            out.append(_rank_over_field(F, sub))
    return tuple(out)


def residue_bruhat_cell(G: GroupDescriptor, g: Matrix) -> WeylElement:
    """The Weyl element w with g mod m in B_1 n_w B_1."""
    G1 = G.truncation(1)
    F = G1.ring
    g1 = G.reduce(g, 1)
    target = _rank_profile(F, G.d, g1)
    for w in G.datum.weyl_elements():
        if _rank_profile(F, G.d, G1.weyl_rep(w)) == target:
            return w
    raise AssertionError("residue matrix lies in no Bruhat cell")


@dataclass(frozen=True)
class BruhatRecord:
    w: WeylElement
    lift: Matrix
    u: Matrix
    t_prime: Matrix
    k: Matrix
    u_prime: Matrix

    def product(self, G: GroupDescriptor) -> Matrix:
        return G.prod(self.u, self.lift, self.t_prime, self.k, self.u_prime)

    def to_record(self, G: GroupDescriptor) -> dict:
        return {
            "w": self.w.name(),
            "w_word": list(self.w.word),
            "lift": G.to_rows(self.lift),
            "u": G.to_rows(self.u),
            "t_prime": G.to_rows(self.t_prime),
            "k": G.to_rows(self.k),
            "u_prime": G.to_rows(self.u_prime),
        }


def bruhat_factor_checks(G: GroupDescriptor, lift: Matrix, u: Matrix, t: Matrix, k: Matrix, up: Matrix) -> bool:
    """Membership of the factors in U ∩ ŵU⁻ŵ⁻¹, T, (U⁻)¹ ∩ ŵ⁻¹U⁻ŵ and U."""
    li = G.inv(lift)
    return (G.in_U(u) and G.in_U_minus(G.prod(li, u, lift)) and G.in_torus(t)
            and G.in_U_minus(k) and G.level(k) >= 1 and G.in_U_minus(G.prod(lift, k, li))
            and G.in_U(up))


def bruhat_decompose(G: GroupDescriptor, g: Matrix, lifts: dict | None = None) -> BruhatRecord:
    """The unique factorisation g = u ŵ t' k u'.

    ``lifts`` optionally maps Weyl elements to chosen representatives; the
    default is n_w.  With T = T' diagonal, only the lift depends on the tori.
    """
    w = residue_bruhat_cell(G, g)
    lift = (lifts or {}).get(w) or G.weyl_rep(w)
    li = G.inv(lift)
    parts = ldu(G, G.mul(li, g))
    if parts is None:
        raise AssertionError("element is not in the cell of its residue")
    low, diag, up = parts
    split = upper_lower(G, G.prod(lift, low, li))
    if split is None:
        raise AssertionError("conjugated lower factor does not split")
    u, c = split
    k_tilde = G.prod(li, c, lift)
    k = G.prod(G.inv(diag), k_tilde, diag)
    rec = BruhatRecord(w, lift, u, diag, k, up)
    if rec.product(G) != g or not bruhat_factor_checks(G, lift, u, diag, k, up):
        raise AssertionError("Bruhat factors failed verification")
    return rec


# ---------------------------------------------------------------------------
# commutators of root elements


@dataclass(frozen=True)
class Rank1Commutator:
    """[p_a(x), p_-a(y)] = tau p_a(u), together with the closed-form prediction."""

    root: Vector
    tau: Matrix
    tau_parameter: int
    u: Matrix
    u_parameter: int
    closed_tau: Matrix
    closed_u: Matrix
    constant: int
    direct: Matrix

    @property
    def agrees(self) -> bool:
        return self.tau == self.closed_tau and self.u == self.closed_u


def rank1_commutator(G: GroupDescriptor, a: Vector, x: int, y: int, b: int = 0, c: int = 0) -> Rank1Commutator:
    """Commutator of p_a(x) in (U_a)^b with p_-a(y) in (U_-a)^c, where b + c >= r - 1 and b + 2c >= r."""
    R = G.ring
    r = R.r
    a = tuple(a)
    if R.valuation(x) < b or R.valuation(y) < c:
        raise ValueError("parameters are not in the stated congruence levels")
    if b + c < r - 1 or b + 2 * c < r:
        raise ValueError("levels must satisfy b + c >= r - 1 and b + 2c >= r")
    na = _neg(a)
    direct = G.commutator(G.root_element(a, x), G.root_element(na, y))
    tau = G.diagonal(G.diagonal_entries(direct))
    u = G.mul(G.inv(tau), direct)
    lam = _coroot_parameter(G, a, tau)
    if lam is None or not G.in_root_subgroup(u, a):
        raise AssertionError("commutator is not in T^a U_a")
    const = G.datum.rank1_constant(a)
    s = R.mul(R.from_int(const), R.mul(x, y))
    closed_tau = G.coroot_element(a, R.add(R.one, s))
    closed_u = G.root_element(a, R.div(R.mul(x, y), R.sub(R.one, s)))
    return Rank1Commutator(a, tau, lam, u, G.root_coordinate(u, a), closed_tau, closed_u, const, direct)


def _coroot_parameter(G: GroupDescriptor, a: Vector, tau: Matrix) -> int | None:
    expo = G.datum.coroot_diagonal(a)
    entries = G.diagonal_entries(tau)
    k = expo.index(1)
    lam = entries[k]
    if not G.ring.is_unit(lam) or G.coroot_element(a, lam) != tau:
        return None
    return lam


@dataclass(frozen=True)
class CommutatorFactor:
    root: Vector
    i: int
    j: int
    constant: int
    value: int


def chevalley_commutator(G: GroupDescriptor, a: Vector, x: int, b_root: Vector, y: int,
                         b: int = 0, c: int = 0) -> list[CommutatorFactor]:
    """[p_a(x), p_b(y)] as the ordered product of p_{ia+jb}(C x^i y^j)."""
    R = G.ring
    a, b_root = tuple(a), tuple(b_root)
    if a == _neg(b_root):
        raise ValueError("opposite roots: use rank1_commutator")
    if R.valuation(x) < b or R.valuation(y) < c:
        raise ValueError("parameters are not in the stated congruence levels")
    out = []
    for term in G.datum.chevalley_pairs(a, b_root):
        v = R.mul(R.from_int(term.constant), R.mul(R.power(x, term.i), R.power(y, term.j)))
        out.append(CommutatorFactor(term.root, term.i, term.j, term.constant, v))
    direct = G.commutator(G.root_element(a, x), G.root_element(b_root, y))
    if expansion_product(G, out) != direct:
        raise AssertionError("Chevalley expansion disagrees with the matrix commutator")
    return out


def expansion_product(G: GroupDescriptor, factors: Sequence[CommutatorFactor]) -> Matrix:
    return G.prod(*(G.root_element(f.root, f.value) for f in factors))


# ---------------------------------------------------------------------------
# unipotent subgroups attached to a Weyl element


@dataclass(frozen=True)
class UnipotentFrame:
    """V = n_v U n_v^-1 with its positive system, height function and Z = U^{amb} ∩ V."""

    G: GroupDescriptor
    v: WeylElement
    ambient: str = "positive"
    positive: tuple = field(init=False)
    heights: dict = field(init=False)
    z_roots: tuple = field(init=False)

    def __post_init__(self):
        D = self.G.datum
        if self.ambient not in ("positive", "negative"):
            raise ValueError("ambient must be 'positive' or 'negative'")
        heights = {}
        for b in D.positive:
            img = D.act(self.v, b)
            heights[img] = D.height(b)
        order = sorted(heights, key=lambda b: (heights[b], tuple(-x for x in b)))
        amb = set(D.positive if self.ambient == "positive" else D.negative)
        object.__setattr__(self, "positive", tuple(order))
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "z_roots", tuple(b for b in order if b in amb))

    def height(self, b: Vector) -> int:
        return self.heights[tuple(b)]

    @property
    def negative(self) -> tuple:
        return tuple(_neg(b) for b in self.positive)

    def factor(self, g: Matrix, order: str = "primary") -> dict | None:
        """Coordinates of g in V under one of two product orders."""
        if order == "primary":
            return self.G.factor_product(g, self.positive, "left")
        peel = sorted(self.positive, key=lambda b: (self.heights[b], b))
        return self.G.factor_product(g, peel, "right")

    def factor_negative(self, g: Matrix) -> dict | None:
        return self.G.factor_product(g, self.negative, "left")

    def in_V(self, g: Matrix) -> bool:
        return self.factor(g) is not None

    def in_Z(self, g: Matrix) -> bool:
        coords = self.factor(g)
        if coords is None:
            return False
        zs = set(self.z_roots)
        return all(v == self.G.ring.zero for b, v in coords.items() if b not in zs)

    def z_elements(self, level: int = 0) -> list[Matrix]:
        return self.G.unipotent_elements(self.z_roots, level)


def default_frame(G: GroupDescriptor) -> UnipotentFrame:
    return UnipotentFrame(G, G.datum.identity(), "positive")


def transporter_frame(G: GroupDescriptor, w: WeylElement) -> UnipotentFrame:
    """V = ŵ U'^- ŵ^-1 with Z = U^- ∩ V, the frame of the main counting argument."""
    D = G.datum
    return UnipotentFrame(G, D.compose(w, D.longest()), "negative")


# ---------------------------------------------------------------------------
# inductive commutator


@dataclass(frozen=True)
class InductionCommutator:
    tau: Matrix
    tau_parameter: int
    omega: Matrix


def induction_commutator(G: GroupDescriptor, a: Vector, xi: int, z: Matrix, level_a: int,
                         frame: UnipotentFrame | None = None) -> InductionCommutator:
    """[p_a(xi), z] = tau omega with tau in the image of a-check and omega in (V^-)^{r-1}.

    Here a is negative for the frame, xi lies in m^{r-a-1} and z in V^a with
    coordinates in m^{a+1} above the height of -a.
    """
    frame = frame or default_frame(G)
    R = G.ring
    r = R.r
    a = tuple(a)
    if a not in frame.negative:
        raise ValueError("root must be negative for the frame")
    if not 1 <= level_a <= r - 1:
        raise ValueError("level must satisfy 1 <= a <= r - 1")
    if R.valuation(xi) < r - level_a - 1:
        raise ValueError("xi is not in (U_a)^{r-a-1}")
    coords = frame.factor(z)
    if coords is None or G.level(z) < level_a:
        raise ValueError("z is not in V^a")
    h = frame.height(_neg(a))
    for b, u in coords.items():
        if frame.height(b) > h and R.valuation(u) < level_a + 1:
            raise ValueError("height condition fails")
    factors = [(b, coords[b]) for b in frame.positive if coords[b] != R.zero]
    tau, omega = _induct(G, a, xi, factors)
    direct = G.commutator(G.root_element(a, xi), z)
    if G.mul(tau, omega) != direct:
        raise AssertionError("inductive commutator disagrees with the matrix commutator")
    lam = _coroot_parameter(G, a, tau)
    if lam is None or R.valuation(R.sub(lam, R.one)) < r - 1:
        raise AssertionError("torus part is not in the level r-1 image of the coroot")
    if frame.factor_negative(omega) is None or G.level(omega) < r - 1:
        raise AssertionError("unipotent part is not in (V^-)^{r-1}")
    return InductionCommutator(tau, lam, omega)


def _induct(G: GroupDescriptor, a: Vector, xi: int, factors: list) -> tuple[Matrix, Matrix]:
    if not factors:
        return G.identity, G.identity
    if len(factors) == 1:
        b, u = factors[0]
        if b == _neg(a):
            direct = G.commutator(G.root_element(a, xi), G.root_element(b, u))
            tau = G.diagonal(G.diagonal_entries(direct))
            return tau, G.mul(G.inv(tau), direct)
        return G.identity, expansion_product(G, chevalley_commutator(G, a, xi, b, u))
    head, rest = factors[:1], factors[1:]
    t1, w1 = _induct(G, a, xi, head)
    t2, w2 = _induct(G, a, xi, rest)
    return G.mul(t1, t2), G.mul(w1, w2)


# ---------------------------------------------------------------------------
# stratification of Z^1 - {1}


@dataclass(frozen=True)
class StratumLabel:
    a: int
    roots: frozenset

    def to_record(self) -> dict:
        return {"a": self.a, "I": sorted(list(b) for b in self.roots)}


def z_stratify(G: GroupDescriptor, z: Matrix, frame: UnipotentFrame | None = None,
               order: str = "primary") -> StratumLabel:
    """The label (a, I_z) of a nontrivial z in Z^1."""
    frame = frame or default_frame(G)
    R = G.ring
    if z == G.identity:
        raise ValueError("z must be nontrivial")
    if not frame.in_Z(z) or G.level(z) < 1:
        raise ValueError("z is not in Z^1")
    a = G.level(z)
    coords = frame.factor(z, order)
    val = {b: R.valuation(u) for b, u in coords.items()}
    chosen = set()
    for b in frame.z_roots:
        if val[b] != a:
            continue
        hb = frame.height(b)
        if all(val[c] >= a + 1 for c in frame.positive if frame.height(c) > hb):
            chosen.add(b)
    return StratumLabel(a, frozenset(chosen))


def stratum_index(frame: UnipotentFrame) -> list[StratumLabel]:
    """All labels (a, I): 1 <= a <= r-1 and I nonempty of constant height in Z's roots."""
    from itertools import combinations
    r = frame.G.ring.r
    groups: dict[int, list] = {}
    for b in frame.z_roots:
        groups.setdefault(frame.height(b), []).append(b)
    subsets = []
    for members in groups.values():
        for k in range(1, len(members) + 1):
            subsets.extend(frozenset(c) for c in combinations(members, k))
    return [StratumLabel(a, s) for a in range(1, r) for s in subsets]
