"""Finite point sets of the varieties Sigma, Sigma_w and S_{T,U}.

Everything is written in the diagonal model of the tori.  A torus T_w is
g T_diag g^-1 with g^-1 F(g) = n_w; substituting x = g X n_w^-1 g^-1,
y = g Y g'^-1 turns the defining equation x F(y) = y x' into

    X F(Y) = Y X',   X in n_w U,  X' in n_w' U,

and the action of (t, t') = (g d g^-1, g' d' g'^-1) into

    X -> d X F(d)^-1,  X' -> d' X' F(d')^-1,  Y -> d Y d'^-1.

Similarly S_{T,U} becomes {k : k^-1 F(k) in n_w U} with G^F acting on the
left and T^F through k -> k d^-1.  Level n means coordinates in the
extension of degree n * L, where L is the least degree carrying T^F and
T'^F (L = 1 for split tori, so level 1 is the F-fixed world).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import lcm
from typing import Iterable, Iterator, Sequence

from .budget import require
from .decomp import residue_bruhat_cell
from .group import GroupDescriptor, Matrix, build_group
from .ring import embedding, enumerate_indices, extend
from .rootdata import WeylElement
from .torus import Character, Torus, is_regular, transport_character, weyl_transporter

Point = tuple


# ---------------------------------------------------------------------------
# point sets


@dataclass
class PointSet:
    """Solutions of one defining equation, with a reproducibility header."""

    group: GroupDescriptor
    kind: str
    header: dict
    points: list[Point]
    _index: set = field(default=None, init=False, repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p: Point) -> bool:
        if self._index is None:
            self._index = set(self.points)
        return p in self._index

    def subset(self, points: list[Point], **extra) -> "PointSet":
        return PointSet(self.group, self.kind, {**self.header, **extra}, points)

    def serialize(self, p: Point) -> list:
        return [self.group.to_int_rows(m) for m in p]

    def to_lines(self) -> Iterator[str]:
        yield json.dumps({"header": self.header, "count": len(self.points)}, sort_keys=True)
        for p in sorted(self.points):
            yield json.dumps(self.serialize(p))

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            for line in self.to_lines():
                fh.write(line + "\n")


@dataclass
class VarietySetting:
    """The pair of tori, the level and the coordinate group they live in."""

    T: Torus
    Tp: Torus
    n: int
    group: GroupDescriptor
    lift_T: Matrix
    lift_Tp: Matrix

    @property
    def G(self) -> GroupDescriptor:
        return self.T.G

    def header(self, predicate: str) -> dict:
        G = self.G
        return {
            "preset": G.preset,
            "ring": G.ring.label(),
            "group_twist": G.twist.name(),
            "twist": self.T.w.name(),
            "twist_prime": self.Tp.w.name(),
            "level": self.n,
            "degree": self.group.ring.n // G.ring.n,
            "predicate": predicate,
        }

    def embed(self, g: Matrix) -> Matrix:
        return self.G.embed(g, self.group)

    def torus_pairs(self) -> list[tuple[Matrix, Matrix]]:
        """T^F x T'^F as pairs of diagonal matrices in the coordinate group."""
        return [(d, dp) for d in _fixed_matrices(self.T, self.group)
                for dp in _fixed_matrices(self.Tp, self.group)]


def _fixed_matrices(T: Torus, Gm: GroupDescriptor) -> list[Matrix]:
    fp = T.fixed(1)
    emb = embedding(fp.ring, Gm.ring) if fp.ring != Gm.ring else None
    out = []
    for t in fp.elements():
        entries = t if emb is None else tuple(emb.map(x) for x in t)
        out.append(Gm.diagonal(entries))
    return out


def variety_setting(T: Torus, Tp: Torus | None = None, n: int = 1) -> VarietySetting:
    Tp = Tp or T
    if T.G != Tp.G:
        raise ValueError("tori must live in the same group")
    if n < 1:
        raise ValueError("level must be positive")
    G = T.G
    degree = n * lcm(T.level_degree(1), Tp.level_degree(1))
    Gm = G if degree == 1 else build_group(G.preset, extend(G.ring, degree)[0], G.twist)
    return VarietySetting(T, Tp, n, Gm, G.embed(T.lift, Gm), G.embed(Tp.lift, Gm))


def frobenius_fixed(Gm: GroupDescriptor) -> list[Matrix]:
    """G^F inside the coordinate group, by scanning."""
    return [g for g in Gm.elements() if Gm.frobenius(g) == g]


# ---------------------------------------------------------------------------
# Sigma and its Bruhat pieces


def sigma_action(Gm: GroupDescriptor, d: Matrix, dp: Matrix, p: Point) -> Point:
    X, Xp, Y = p
    return (Gm.prod(d, X, Gm.inv(Gm.frobenius(d))),
            Gm.prod(dp, Xp, Gm.inv(Gm.frobenius(dp))),
            Gm.prod(d, Y, Gm.inv(dp)))


def closed_under(points: PointSet, actions: Iterable, act) -> bool:
    return all(act(a, p) in points for a in actions for p in points)


def sigma_points(T: Torus, Tp: Torus | None = None, n: int = 1, check: bool = True) -> PointSet:
    """All (X, X', Y) with X F(Y) = Y X' at level n."""
    S = variety_setting(T, Tp, n)
    Gm = S.group
    U = Gm.U_elements()
    require("sigma enumeration", len(U) * Gm.ring.size ** (Gm.d * Gm.d))
    left = [Gm.mul(S.lift_T, u) for u in U]
    right = {Gm.mul(S.lift_Tp, u) for u in U}
    pts = []
    for Y in Gm.elements():
        FY = Gm.frobenius(Y)
        Yi = Gm.inv(Y)
        for X in left:
            Xp = Gm.prod(Yi, X, FY)
            if Xp in right:
                pts.append((X, Xp, Y))
    out = PointSet(Gm, "sigma", S.header("X F(Y) = Y X'"), pts)
    out.setting = S
    if check and not closed_under(out, S.torus_pairs(), lambda a, p: sigma_action(Gm, a[0], a[1], p)):
        raise AssertionError("Sigma is not stable under the torus action")
    return out


def sigma_w_points(sigma: PointSet, w: WeylElement) -> PointSet:
    """The points whose Y lies in the residue Bruhat cell of w."""
    Gm = sigma.group
    pts = [p for p in sigma if residue_bruhat_cell(Gm, p[2]) == w]
    return sigma.subset(pts, cell=w.name())


def sigma_partition(sigma: PointSet) -> dict[str, PointSet]:
    """Sigma split by the cell of Y; raises if the pieces fail to partition."""
    D = sigma.group.datum
    pieces = {w.name(): sigma_w_points(sigma, w) for w in D.weyl_elements()}
    seen: set = set()
    for piece in pieces.values():
        block = set(piece.points)
        if seen & block:
            raise AssertionError("Bruhat pieces of Sigma overlap")
        seen |= block
    if seen != set(sigma.points):
        raise AssertionError("Bruhat pieces do not cover Sigma")
    return pieces


# ---------------------------------------------------------------------------
# S_{T,U} and the quotient map


def s_tu_points(T: Torus, n: int = 1, partner: Torus | None = None, check: bool = True) -> PointSet:
    """All k with k^-1 F(k) in n_w U, in the coordinate group shared with ``partner``."""
    S = variety_setting(T, partner, n)
    Gm = S.group
    require("S enumeration", Gm.ring.size ** (Gm.d * Gm.d))
    li = Gm.inv(S.lift_T)
    pts = [(k,) for k in Gm.elements() if Gm.in_U(Gm.prod(li, Gm.inv(k), Gm.frobenius(k)))]
    out = PointSet(Gm, "s", S.header("k^-1 F(k) in F(U)"), pts)
    out.setting = S
    if check:
        fixed = frobenius_fixed(Gm)
        tf = _fixed_matrices(T, Gm)
        acts = [(g1, d) for g1 in fixed for d in tf]
        if not closed_under(out, acts, lambda a, p: (Gm.prod(a[0], p[0], Gm.inv(a[1])),)):
            raise AssertionError("S is not stable under G^F x T^F")
    return out


@dataclass(frozen=True)
class QuotientReport:
    fiber_sizes: dict
    group_fixed_order: int
    image_in_sigma: bool
    image_size: int
    sigma_size: int

    @property
    def constant(self) -> bool:
        return set(self.fiber_sizes) == {self.group_fixed_order}


def quotient_fiber_sizes(T: Torus, Tp: Torus | None = None, n: int = 1) -> QuotientReport:
    """Fibers of (k, k') -> (k^-1 F(k), k'^-1 F(k'), k^-1 k') over their image."""
    Tp = Tp or T
    S = s_tu_points(T, n, Tp, check=False)
    Sp = s_tu_points(Tp, n, T, check=False)
    sigma = sigma_points(T, Tp, n, check=False)
    Gm = S.group
    require("quotient pairs", len(S) * len(Sp))
    left = [(k, Gm.inv(k), Gm.mul(Gm.inv(k), Gm.frobenius(k))) for (k,) in S]
    right = [(kp, Gm.mul(Gm.inv(kp), Gm.frobenius(kp))) for (kp,) in Sp]
    fibers: Counter = Counter()
    for k, ki, X in left:
        for kp, Xp in right:
            fibers[(X, Xp, Gm.mul(ki, kp))] += 1
    return QuotientReport(
        fiber_sizes=dict(Counter(fibers.values())),
        group_fixed_order=len(frobenius_fixed(Gm)),
        image_in_sigma=all(p in sigma for p in fibers),
        image_size=len(fibers),
        sigma_size=len(sigma),
    )


# ---------------------------------------------------------------------------
# the parametrisations through the Bruhat factors


def _cell_roots(G: GroupDescriptor, w: WeylElement):
    D = G.datum
    wi = D.inverse(w)
    neg = set(D.negative)
    u_roots = [b for b in D.positive if D.act(wi, b) in neg]
    k_roots = [b for b in D.negative if D.act(w, b) in neg]
    z_roots = [b for b in D.negative if D.act(wi, b) in neg]
    return u_roots, k_roots, z_roots


def _twisted_conj(Gm: GroupDescriptor, d: Matrix, X: Matrix) -> Matrix:
    return Gm.prod(d, X, Gm.inv(Gm.frobenius(d)))


@dataclass(frozen=True)
class TildeReport:
    w: str
    tuples: int
    cell_points: int
    bijective: bool
    equivariant: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.equivariant


def sigma_tilde_report(T: Torus, Tp: Torus | None, w: WeylElement, lift: Matrix | None = None,
                       n: int = 1, sigma: PointSet | None = None) -> TildeReport:
    """Solve for (X, X', u, u', k, nu) and compare with Sigma_w through (X, X', u nu k u')."""
    S = variety_setting(T, Tp, n)
    Gm = S.group
    G = S.G
    lift_m = S.embed(lift if lift is not None else G.weyl_rep(w))
    u_roots, k_roots, _ = _cell_roots(Gm, w)
    Uw = Gm.unipotent_elements(u_roots)
    K = Gm.unipotent_elements(k_roots, 1)
    nus = [Gm.mul(lift_m, t) for t in Gm.torus_elements()]
    U = Gm.U_elements()
    require("tilde factors", len(Uw) * len(K) * len(nus) * len(U) * len(U))

    left = [Gm.mul(S.lift_T, u) for u in U]
    right = {Gm.mul(S.lift_Tp, u) for u in U}
    tuples = []
    for u, nu, k, up in product(Uw, nus, K, U):
        y = Gm.prod(u, nu, k, up)
        Fy, yi = Gm.frobenius(y), Gm.inv(y)
        for X in left:
            Xp = Gm.prod(yi, X, Fy)
            if Xp in right:
                tuples.append((X, Xp, u, up, k, nu))

    if sigma is None:
        sigma = sigma_points(S.T, S.Tp, n, check=False)
    cell = set(sigma_w_points(sigma, w).points)
    images = Counter((X, Xp, Gm.prod(u, nu, k, up)) for X, Xp, u, up, k, nu in tuples)
    bijective = set(images) == cell and all(c == 1 for c in images.values())

    members = set(tuples)
    equivariant = True
    for d, dp in S.torus_pairs():
        di, dpi = Gm.inv(d), Gm.inv(dp)
        for X, Xp, u, up, k, nu in tuples:
            moved = (_twisted_conj(Gm, d, X), _twisted_conj(Gm, dp, Xp), Gm.prod(d, u, di),
                     Gm.prod(dp, up, dpi), Gm.prod(dp, k, dpi), Gm.prod(d, nu, dpi))
            if moved not in members:
                equivariant = False
                break
            image = (moved[0], moved[1], Gm.prod(moved[2], moved[5], moved[4], moved[3]))
            if image != sigma_action(Gm, d, dp, (X, Xp, Gm.prod(u, nu, k, up))):
                equivariant = False
                break
        if not equivariant:
            break
    return TildeReport(w.name(), len(tuples), len(cell), bijective, equivariant)


def sigma_tilde_check(T: Torus, Tp: Torus | None, w: WeylElement, lift: Matrix | None = None,
                      n: int = 1) -> bool:
    return sigma_tilde_report(T, Tp, w, lift, n).ok


@dataclass(frozen=True)
class HatReport:
    w: str
    tuples: int
    fiber_sizes: dict
    covers_cell: bool
    equivariant: bool
    degenerate: int

    @property
    def constant(self) -> bool:
        return len(self.fiber_sizes) == 1


def hat_sigma_fiber_sizes(T: Torus, Tp: Torus | None, w: WeylElement, lift: Matrix | None = None,
                          n: int = 1, sigma: PointSet | None = None) -> HatReport:
    """Fibers of (X, X', u, u', z, tau') -> (X, X', u z w tau' u') over Sigma_w.

    ``degenerate`` counts the tuples with z = 1, the part on which the
    torus product acts through tau' alone.
    """
    S = variety_setting(T, Tp, n)
    Gm = S.group
    lift_m = S.embed(lift if lift is not None else S.G.weyl_rep(w))
    lift_inv = Gm.inv(lift_m)
    _, _, z_roots = _cell_roots(Gm, w)
    Z = Gm.unipotent_elements(z_roots, 1)
    taus = Gm.torus_elements()
    U = Gm.U_elements()
    require("hat factors", len(U) ** 3 * len(Z) * len(taus))

    left = [Gm.mul(S.lift_T, u) for u in U]
    right = {Gm.mul(S.lift_Tp, u) for u in U}
    tuples = []
    for u, z, tau, up in product(U, Z, taus, U):
        y = Gm.prod(u, z, lift_m, tau, up)
        Fy, yi = Gm.frobenius(y), Gm.inv(y)
        for X in left:
            Xp = Gm.prod(yi, X, Fy)
            if Xp in right:
                tuples.append((X, Xp, u, up, z, tau))

    def image(t):
        X, Xp, u, up, z, tau = t
        return (X, Xp, Gm.prod(u, z, lift_m, tau, up))

    fibers = Counter(image(t) for t in tuples)
    if sigma is None:
        sigma = sigma_points(S.T, S.Tp, n, check=False)
    cell = set(sigma_w_points(sigma, w).points)

    members = set(tuples)
    equivariant = True
    for d, dp in S.torus_pairs():
        di, dpi = Gm.inv(d), Gm.inv(dp)
        shift = Gm.prod(lift_inv, d, lift_m)
        for t in tuples:
            X, Xp, u, up, z, tau = t
            moved = (_twisted_conj(Gm, d, X), _twisted_conj(Gm, dp, Xp), Gm.prod(d, u, di),
                     Gm.prod(dp, up, dpi), Gm.prod(d, z, di), Gm.prod(shift, tau, dpi))
            if moved not in members or image(moved) != sigma_action(Gm, d, dp, image(t)):
                equivariant = False
                break
        if not equivariant:
            break
    identity = Gm.identity
    return HatReport(
        w=w.name(),
        tuples=len(tuples),
        fiber_sizes=dict(Counter(fibers.values())),
        covers_cell=set(fibers) == cell,
        equivariant=equivariant,
        degenerate=sum(1 for t in tuples if t[4] == identity),
    )


# ---------------------------------------------------------------------------
# the fixed set of the degenerate part


@dataclass(frozen=True)
class FixedCountReport:
    w: str
    count: int
    closed_form: int
    F_stable: bool
    stable_under_h: bool | None

    @property
    def agrees(self) -> bool:
        return self.count == self.closed_form


def _frobenius_of_class(T: Torus, Tp: Torus, w: WeylElement) -> bool:
    D = T.datum
    return D.compose(w, Tp.effective) == D.compose(T.effective, w)


def _twisted_diagonal_solutions(Tp: Torus, delta: Sequence[int], ring) -> list[tuple[int, ...]]:
    """Diagonal entries e with e = delta * F_{T'}(e) entrywise, over ``ring``.

    Each cycle of the permutation of F_{T'} is determined by one entry; the
    relations of the group are imposed afterwards.
    """
    perm = Tp.perm
    d = len(perm)
    seen: set = set()
    cycles = []
    for i in range(d):
        if i not in seen:
            cyc = [i]
            seen.add(i)
            while perm[cyc[-1]] not in seen:
                cyc.append(perm[cyc[-1]])
                seen.add(cyc[-1])
            cycles.append(cyc)
    units = list(enumerate_indices(ring, "units"))
    require("twisted torus scan", len(units) * len(cycles))
    per_cycle = []
    for cyc in cycles:
        sols = []
        for y in units:
            vals = {cyc[0]: y}
            cur, idx = y, cyc[0]
            ok = True
            for _ in range(len(cyc)):
                nxt = perm[idx]
                val = ring.mul(delta[nxt], ring.frobenius(cur, 1))
                if nxt in vals:
                    ok = vals[nxt] == val
                    break
                vals[nxt] = val
                cur, idx = val, nxt
            if ok:
                sols.append(vals)
        per_cycle.append(sols)
    out = []
    for combo in product(*per_cycle):
        entries = [None] * d
        for vals in combo:
            for i, v in vals.items():
                entries[i] = v
        out.append(tuple(entries))
    return out


def hat_sigma_fixed_count(T: Torus, Tp: Torus | None, w: WeylElement,
                          lift: Matrix | None = None) -> FixedCountReport:
    """#{tau' in T' : F(w tau') = w tau'} against |T'^F| [F(w) = w].

    In diagonal coordinates the condition reads n_T F(lift e) n_T'^-1 = lift e,
    i.e. e = delta F_{T'}(e) with delta = lift^-1 n_T F(lift) n_T'^-1, which
    has diagonal solutions only when delta is diagonal.  Solutions are
    searched in an extension large enough to split the cocycle delta.
    """
    Tp = Tp or T
    G = T.G
    lift = lift if lift is not None else G.weyl_rep(w)
    degree = 2 * lcm(T.level_degree(1), Tp.level_degree(1))
    Gm = build_group(G.preset, extend(G.ring, degree)[0], G.twist)
    L = G.embed(lift, Gm)
    nT, nTp = G.embed(T.lift, Gm), G.embed(Tp.lift, Gm)
    delta = Gm.prod(Gm.inv(L), nT, Gm.frobenius(L), Gm.inv(nTp))
    stable = _frobenius_of_class(T, Tp, w)
    closed = Tp.fixed(1).size if stable else 0
    if not Gm.is_diagonal(delta):
        return FixedCountReport(w.name(), 0, closed, stable, True)
    R = Gm.ring
    sols = [e for e in _twisted_diagonal_solutions(Tp, Gm.diagonal_entries(delta), R)
            if Gm.is_member(Gm.diagonal(e))]
    stable_h = _h_stability(Gm, T, Tp, L, nT, nTp, {Gm.diagonal(e) for e in sols})
    return FixedCountReport(w.name(), len(sols), closed, stable, stable_h)


def _h_stability(Gm, T, Tp, L, nT, nTp, fixed: set) -> bool:
    """The fixed set is carried into itself by every (d, d') in the finite H-tilde.

    H-tilde consists of the pairs with d n_T F(d)^-1 = n_T F(L) n_T'^-1 d' n_T' F(d')^-1 F(L)^-1,
    acting by e -> L^-1 d L e d'^-1.  Only pairs from the torus of the
    coordinate ring are tried, and only when that torus is small; otherwise
    the check is reported as not run.
    """
    if Gm.ring.size > 64:
        return None
    torus = Gm.torus_elements()
    if len(torus) > 256:
        return None
    FL = Gm.frobenius(L)
    FLi = Gm.inv(FL)
    Li = Gm.inv(L)
    for d in torus:
        lhs = Gm.prod(d, nT, Gm.inv(Gm.frobenius(d)))
        for dp in torus:
            rhs = Gm.prod(nT, FL, Gm.inv(nTp), dp, nTp, Gm.inv(Gm.frobenius(dp)), FLi)
            if lhs != rhs:
                continue
            shift, dpi = Gm.prod(Li, d, L), Gm.inv(dp)
            if any(Gm.prod(shift, e, dpi) not in fixed for e in fixed):
                return False
    return True


# ---------------------------------------------------------------------------
# the counting formula


@dataclass(frozen=True)
class Witness:
    w: WeylElement
    lift: Matrix


@dataclass(frozen=True)
class InnerProductReport:
    T: Torus
    theta: Character
    Tp: Torus
    theta_p: Character
    witnesses: tuple

    @property
    def count(self) -> int:
        return len(self.witnesses)

    def to_record(self) -> dict:
        G = self.T.G
        return {
            "torus": self.T.w.name(),
            "theta": self.theta.to_record(),
            "torus_prime": self.Tp.w.name(),
            "theta_prime": self.theta_p.to_record(),
            "count": self.count,
            "witnesses": [{"w": x.w.name(), "lift": G.to_int_rows(x.lift)} for x in self.witnesses],
        }


def inner_product_rhs(T: Torus, theta: Character, Tp: Torus, theta_p: Character,
                      override: bool = False) -> InnerProductReport:
    """The F-stable transporter classes w whose lift carries theta' to theta."""
    if T.G.ring.r >= 2 and not override and not (is_regular(Tp, theta_p) or is_regular(T, theta)):
        raise ValueError("for r >= 2 one of the characters must be regular")
    hits = []
    for cls in weyl_transporter(T, Tp):
        if transport_character(T, Tp, cls.lift, theta_p) == theta:
            hits.append(Witness(cls.x, cls.lift))
    return InnerProductReport(T, theta, Tp, theta_p, tuple(hits))


def irreducibility_predicate(T: Torus, theta: Character) -> str:
    """'irreducible' when only w = 1 fixes theta, else 'not-applicable'."""
    if not is_regular(T, theta):
        raise ValueError("character is not regular")
    return "irreducible" if inner_product_rhs(T, theta, T, theta).count == 1 else "not-applicable"
