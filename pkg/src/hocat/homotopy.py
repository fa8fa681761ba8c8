"""Homotopy-level invariants of enriched categories at a finite stage.

Over chain complexes ``pi0`` takes ``H_0`` of every hom; over finite sets weak
equivalences are bijections, so ``pi0`` is the category itself.  Every verdict
refers to the weight ``<= p`` part of the homs and the degrees ``<= d``.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .chain import boundaries, complex_of_space, cycles
from .enriched import VCategory, unit_space
from .linalg import rank, rational_str, solve_rows
from .spaces import CHAIN, Linear

YES, NO, UNKNOWN = "YES", "NO", "UNKNOWN"
CERTIFIED, FAILED = "CERTIFIED-UP-TO", "FAILED"


# --- homology of one truncated hom ---------------------------------------------------------

def _padded(rows, width):
    return [list(r) + [0] * (width - len(r)) for r in rows]


def _cycle_rows(space, q, n):
    c, _ = complex_of_space(space, q)
    return cycles(c, n) if c.dim(n) else []


def _boundary_rows(space, q, n):
    c, _ = complex_of_space(space, q)
    return boundaries(c, n) if c.dim(n) else []


class HomologyAt:
    """``H_n`` of the weight ``<= q`` part of a space.

    Representatives are chosen stage by stage, so each class is carried by a
    cycle of the least possible weight.
    """

    def __init__(self, space, q, n=0):
        self.space, self.stage, self.degree = space, q, n
        self.positions = space.basis_by_degree(q).get(n, [])
        width = len(self.positions)
        self.boundary_rows = _boundary_rows(space, q, n)
        self.reps, self.rep_weights = [], []
        current = list(self.boundary_rows)
        have = rank(current, width) if current else 0
        for w in range(q + 1):
            for z in _padded(_cycle_rows(space, w, n), width):
                r = rank(current + [z], width)
                if r > have:
                    current.append(z)
                    self.reps.append(z)
                    self.rep_weights.append(w)
                    have = r

    @property
    def dim(self):
        return len(self.reps)

    def rep_vec(self, k):
        return {self.positions[c]: x for c, x in enumerate(self.reps[k]) if x}

    def coords(self, vec):
        """Coordinates of the class of the cycle ``vec``; ``None`` if it is not one."""
        local = {j: c for c, j in enumerate(self.positions)}
        dense = [0] * len(self.positions)
        for j, x in vec.items():
            if j not in local:
                return None
            dense[local[j]] = x
        rows = self.reps + self.boundary_rows
        if not rows:
            return [] if not any(dense) else None
        sols, _ = solve_rows(rows, [dense], len(rows))
        if sols[0] is None:
            return None
        return sols[0][: self.dim]


def homology_table(space, q, degree_bound):
    """``{n: dim H_n}`` of the weight ``<= q`` part, for ``n <= degree_bound``."""
    if space.base != CHAIN:
        n = space.prefix(q)
        return {0: n} if n else {}
    c, _ = complex_of_space(space, q)
    out = {}
    for n in c.degrees:
        if n > degree_bound:
            continue
        rk_out = rank(c.diff(n), c.dim(n)) if c.dim(n - 1) else 0
        rk_in = rank(c.diff(n + 1), c.dim(n + 1)) if c.dim(n + 1) else 0
        b = c.dim(n) - rk_out - rk_in
        if b:
            out[n] = b
    return out


def stage_map_is_iso(space, q, degree_bound):
    """The map of homology from weight ``<= q`` to weight ``<= q + 1`` is bijective."""
    if space.base != CHAIN:
        return space.prefix(q) == space.prefix(q + 1)
    upper = space.basis_by_degree(q + 1)
    lower = space.basis_by_degree(q)
    for n, pos in upper.items():
        if n > degree_bound:
            continue
        width = len(pos)
        bnd = _boundary_rows(space, q + 1, n)
        base = rank(bnd, width) if bnd else 0
        z_low = _padded(_cycle_rows(space, q, n), width) if n in lower else []
        z_high = _cycle_rows(space, q + 1, n)
        image = (rank(bnd + z_low, width) if bnd + z_low else 0) - base
        target = (rank(bnd + z_high, width) if bnd + z_high else 0) - base
        b_low = _boundary_rows(space, q, n) if n in lower else []
        z_dim = len(z_low)
        source = z_dim - (rank(b_low, len(lower.get(n, []))) if b_low else 0)
        if not (image == source == target):
            return False
    return True


# --- pi0 ----------------------------------------------------------------------------------

@dataclass
class Pi0Category:
    """An ordinary category with finite-dimensional homs, truncated at a stage.

    ``homs[slot]`` is the hom dimension.  ``table[(gslot, fslot)][(a, b)]`` is
    the coordinate vector of the composite of basis classes ``a o b``, or
    ``None`` when representatives compose beyond the stage.  ``units[x]`` is
    the coordinate vector of the identity class.
    """

    objects: tuple
    homs: dict
    table: dict
    units: dict
    stage: int
    base: str
    rep_weights: dict = field(default_factory=dict)

    def compose(self, gslot, g, fslot, f):
        """Bilinear composite of coordinate vectors, ``None`` past the stage."""
        out = [Fraction(0)] * self.homs[(fslot[0], gslot[1])]
        for a, x in enumerate(g):
            if not x:
                continue
            for b, y in enumerate(f):
                if not y:
                    continue
                v = self.table[(gslot, fslot)][(a, b)]
                if v is None:
                    return None
                for k, c in enumerate(v):
                    out[k] += x * y * c
        return out

    def unit(self, x):
        return list(self.units[x])

    def check(self):
        """Unit laws and associativity wherever composites are defined."""
        for (s, t), n in self.homs.items():
            for a in range(n):
                e = _basis(n, a)
                for lhs in (self.compose((t, t), self.unit(t), (s, t), e), self.compose((s, t), e, (s, s), self.unit(s))):
                    if lhs is not None and lhs != e:
                        return False
        for x, y, z, w in product(self.objects, repeat=4):
            for a, b, c in product(range(self.homs[(z, w)]), range(self.homs[(y, z)]), range(self.homs[(x, y)])):
                ea, eb, ec = _basis(self.homs[(z, w)], a), _basis(self.homs[(y, z)], b), _basis(self.homs[(x, y)], c)
                ab = self.compose((z, w), ea, (y, z), eb)
                bc = self.compose((y, z), eb, (x, y), ec)
                if ab is None or bc is None:
                    continue
                left = self.compose((y, w), ab, (x, y), ec)
                right = self.compose((z, w), ea, (x, z), bc)
                if left is not None and right is not None and left != right:
                    return False
        return True

    def as_dict(self):
        return {
            "stage": self.stage,
            "objects": list(self.objects),
            "homs": {f"{s}->{t}": n for (s, t), n in sorted(self.homs.items())},
            "units": {str(x): [rational_str(c) for c in u] for x, u in sorted(self.units.items())},
        }


def _basis(n, a):
    return [Fraction(int(k == a)) for k in range(n)]


def pi0(cat, stage=None):
    """The homotopy category of ``cat`` truncated at ``stage``."""
    p = cat.stage if stage is None else min(stage, cat.stage)
    objects = cat.objects
    slots = list(product(objects, repeat=2))
    if cat.base != CHAIN:
        homs = {slot: cat.homs[slot].prefix(p) for slot in slots}
        reps = {slot: [{i: 1} for i in range(homs[slot])] for slot in slots}
        weights = {slot: list(cat.homs[slot].weights[: homs[slot]]) for slot in slots}

        def coords(slot, vec):
            return [Fraction(int(k in vec)) for k in range(homs[slot])]

    else:
        hh = {slot: HomologyAt(cat.homs[slot], p, 0) for slot in slots}
        homs = {slot: hh[slot].dim for slot in slots}
        reps = {slot: [hh[slot].rep_vec(k) for k in range(hh[slot].dim)] for slot in slots}
        weights = {slot: list(hh[slot].rep_weights) for slot in slots}

        def coords(slot, vec):
            out = hh[slot].coords(vec)
            return [Fraction(c) for c in out]

    table = {}
    for (x, y), (y2, z) in product(slots, repeat=2):
        if y != y2:
            continue
        entry = {}
        for a, b in product(range(homs[(y, z)]), range(homs[(x, y)])):
            v = cat.try_compose((y, z), reps[(y, z)][a], (x, y), reps[(x, y)][b])
            if v is not None and cat.homs[(x, z)].weight_of(v) > p:
                v = None
            entry[(a, b)] = None if v is None else coords((x, z), v)
        table[((y, z), (x, y))] = entry
    units = {x: coords((x, x), cat.unit(x)) for x in objects}
    return Pi0Category(tuple(objects), homs, table, units, p, cat.base, weights)


# --- functors ----------------------------------------------------------------------------

@dataclass
class VFunctor:
    """An enriched functor: an object map and one linear map per source hom."""

    source: VCategory
    target: VCategory
    on_objects: dict
    on_homs: dict
    name: str = "F"

    def target_slot(self, slot):
        return (self.on_objects[slot[0]], self.on_objects[slot[1]])

    def compose(self, first):
        """``self o first``."""
        maps = {slot: self.on_homs[first.target_slot(slot)].compose(f) for slot, f in first.on_homs.items()}
        objs = {x: self.on_objects[y] for x, y in first.on_objects.items()}
        return VFunctor(first.source, self.target, objs, maps, f"{self.name}{first.name}")

    def check(self):
        """Units and composites are preserved on basis elements within the stage."""
        for x in self.source.objects:
            fx = self.on_objects[x]
            if self.on_homs[(x, x)].apply(self.source.unit(x)) != self.target.unit(fx):
                return False
        for (x, y), (y2, z) in product(self.source.homs, repeat=2):
            if y != y2:
                continue
            for a, b in product(range(self.source.homs[(y, z)].dim), range(self.source.homs[(x, y)].dim)):
                v = self.source.compose_basis((y, z), (x, y), a, b)
                if v is None:
                    continue
                lhs = self.on_homs[(x, z)].apply(v)
                rhs = self.target.try_compose(
                    self.target_slot((y, z)), self.on_homs[(y, z)].cols[a], self.target_slot((x, y)), self.on_homs[(x, y)].cols[b]
                )
                if rhs is not None and lhs != rhs:
                    return False
        return True


def identity_functor(cat):
    return VFunctor(cat, cat, {x: x for x in cat.objects}, {slot: Linear.identity(s) for slot, s in cat.homs.items()}, "id")


def terminal_category(base, stage):
    return VCategory(base, stage, (0,), {(0, 0): unit_space(base, stage, "1")}, {0: {0: 1}}, lambda *a: {0: 1}, "terminal")


def empty_category(base, stage):
    return VCategory(base, stage, (), {}, {}, lambda *a: {}, "empty")


def functor_to_terminal(cat):
    """The collapse of every hom onto the unit; only valid when every hom is a set."""
    term = terminal_category(cat.base, cat.stage)
    maps = {slot: Linear(s, term.homs[(0, 0)], [{0: 1}] * s.dim) for slot, s in cat.homs.items()}
    return VFunctor(cat, term, {x: 0 for x in cat.objects}, maps, "collapse")


def functor_from_empty(cat):
    src = empty_category(cat.base, cat.stage)
    return VFunctor(src, cat, {}, {}, "empty")


# --- local predicates ----------------------------------------------------------------------

@dataclass
class Verdict:
    holds: object
    stage: int
    degree: int
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {"holds": self.holds, "stage": self.stage, "degree": self.degree, "detail": self.detail}


def _degrees(*spaces, bound):
    return sorted({n for s in spaces for n in s.degrees if n <= bound})


def _hom_predicates(f, p, d):
    """``(weak equivalence, fibration)`` of one hom map at weight ``<= p``, degrees ``<= d``."""
    if f.source.base != CHAIN:
        return f.is_iso(p), f.is_surjective(p)
    surjective = True
    for n in _degrees(f.target, bound=d):
        mat, src, tgt = f.matrix(n, p)
        if tgt and (not src or rank(mat, len(src)) < len(tgt)):
            surjective = False
    quasi = True
    for n in _degrees(f.source, f.target, bound=d):
        hs, ht = HomologyAt(f.source, p, n), HomologyAt(f.target, p, n)
        if hs.dim != ht.dim:
            quasi = False
            break
        if not hs.dim:
            continue
        images = [ht.coords(f.apply(hs.rep_vec(k))) for k in range(hs.dim)]
        if rank(images, ht.dim) < ht.dim:
            quasi = False
            break
    return quasi, surjective


def local_predicates(F, stage=None, degree=4):
    """``(local weak equivalence, local fibration, local trivial fibration)`` verdicts."""
    p = min(F.source.stage, F.target.stage) if stage is None else stage
    per_hom = {}
    we = fib = True
    for slot in sorted(F.source.homs):
        w, fb = _hom_predicates(F.on_homs[slot], p, degree)
        per_hom[f"{slot[0]}->{slot[1]}"] = {"weak_equivalence": w, "fibration": fb}
        we, fib = we and w, fib and fb
    detail = {"homs": per_hom}
    return Verdict(we, p, degree, detail), Verdict(fib, p, degree, detail), Verdict(we and fib, p, degree, detail)


def is_trivial_fibration(F, stage=None, degree=4):
    _, _, triv = local_predicates(F, stage, degree)
    onto = set(F.on_objects.values()) == set(F.target.objects)
    return Verdict(triv.holds and onto, triv.stage, degree, {"local": triv.holds, "surjective_on_objects": onto})


# --- homotopy equivalence of objects ------------------------------------------------------

@dataclass
class Equivalence:
    verdict: str
    alpha: list = None
    beta: list = None
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        out = {"verdict": self.verdict, "detail": self.detail}
        if self.alpha is not None:
            out["alpha"] = [rational_str(c) for c in self.alpha]
            out["beta"] = [rational_str(c) for c in self.beta]
        return out


def _left_matrix(P, alpha, x, y):
    """Columns of ``beta -> beta o alpha`` from ``P(y, x)`` to ``P(x, x)``, or ``None``."""
    cols = []
    for b in range(P.homs[(y, x)]):
        v = P.compose((y, x), _basis(P.homs[(y, x)], b), (x, y), alpha)
        if v is None:
            return None
        cols.append(v)
    return cols


def _right_matrix(P, alpha, x, y):
    """Columns of ``beta -> alpha o beta`` from ``P(y, x)`` to ``P(y, y)``, or ``None``."""
    cols = []
    for b in range(P.homs[(y, x)]):
        v = P.compose((x, y), alpha, (y, x), _basis(P.homs[(y, x)], b))
        if v is None:
            return None
        cols.append(v)
    return cols


def inverse_class(P, alpha, x, y):
    """``beta`` with ``beta alpha = 1`` and ``alpha beta = 1``; ``False`` if none, ``None`` if undecided."""
    left, right = _left_matrix(P, alpha, x, y), _right_matrix(P, alpha, x, y)
    if left is None or right is None:
        return None
    n = P.homs[(y, x)]
    # rows of the stacked system: beta coordinates times columns give both targets
    rows = [list(left[b]) + list(right[b]) for b in range(n)]
    target = P.unit(x) + P.unit(y)
    if not rows:
        return [] if not any(target) else False
    sols, _ = solve_rows(rows, [target], n)
    return False if sols[0] is None else sols[0]


def homotopy_equivalent(cat, x, y, stage=None, budget=10**4, seed=0, P=None):
    """Decide whether ``x`` and ``y`` are isomorphic in ``pi0(cat, stage)``.

    With one-dimensional homs the inverse is solved for directly.  In general an
    arrow ``alpha`` is invertible exactly when the two maps ``beta -> beta alpha``
    and ``beta -> alpha beta`` are bijective, a polynomial condition of degree
    at most ``2n`` in the coordinates of ``alpha``.  Seeded random trials look
    for a witness; exhausting a grid with ``2n + 1`` points per coordinate proves
    that none exists.  ``budget`` bounds the number of trials.
    """
    P = pi0(cat, stage) if P is None else P
    if x == y:
        return Equivalence(YES, P.unit(x), P.unit(x), {"reason": "identity"})
    dims = {k: P.homs[k] for k in [(x, x), (x, y), (y, x), (y, y)]}
    detail = {"dims": {f"{a}->{b}": n for (a, b), n in dims.items()}}
    if not (dims[(x, x)] == dims[(y, x)] == dims[(y, y)]):
        return Equivalence(NO, detail={**detail, "reason": "hom dimensions differ"})
    m, n = dims[(x, y)], dims[(y, x)]
    if m == 0:
        if n == 0 and not any(P.unit(x)) and not any(P.unit(y)):
            return Equivalence(YES, [], [], {**detail, "reason": "both objects are zero"})
        return Equivalence(NO, detail={**detail, "reason": "empty hom"})
    undecided = False
    trials = []
    if m == 1:
        trials.append([Fraction(1)])
    else:
        rng = random.Random(seed)
        trials += [_basis(m, a) for a in range(m)]
        trials += [[Fraction(rng.randint(-9, 9)) for _ in range(m)] for _ in range(8)]
    for alpha in trials:
        beta = inverse_class(P, alpha, x, y)
        if beta is None:
            undecided = True
        elif beta is not False:
            return Equivalence(YES, alpha, beta, {**detail, "reason": "solved"})
    if m == 1:
        return Equivalence(UNKNOWN if undecided else NO, detail={**detail, "reason": "one-dimensional solve"})
    side = 2 * n + 1
    if side**m > budget:
        return Equivalence(UNKNOWN, detail={**detail, "reason": "search budget exhausted"})
    for point in product(range(side), repeat=m):
        alpha = [Fraction(c) for c in point]
        beta = inverse_class(P, alpha, x, y)
        if beta is None:
            undecided = True
        elif beta is not False:
            return Equivalence(YES, alpha, beta, {**detail, "reason": "grid search"})
    if undecided:
        return Equivalence(UNKNOWN, detail={**detail, "reason": "composites beyond stage"})
    return Equivalence(NO, detail={**detail, "reason": "invertibility polynomial vanishes on the grid"})


# --- Dwyer-Kan equivalences ----------------------------------------------------------------

def pi0_functor_matrices(F, P, Q):
    """Per source slot, the matrix of ``pi0(F)`` in the chosen bases (columns)."""
    out = {}
    for slot in F.source.homs:
        tslot = F.target_slot(slot)
        if F.source.base != CHAIN:
            cols = []
            for a in range(P.homs[slot]):
                (j,) = F.on_homs[slot].cols[a]
                cols.append(_basis(Q.homs[tslot], j) if j < Q.homs[tslot] else None)
            out[slot] = cols
            continue
        hs = HomologyAt(F.source.homs[slot], P.stage, 0)
        ht = HomologyAt(F.target.homs[tslot], Q.stage, 0)
        out[slot] = [ht.coords(F.on_homs[slot].apply(hs.rep_vec(k))) for k in range(hs.dim)]
    return out


def is_dwyer_kan(F, stage=None, degree=4, budget=10**4):
    """Local weak equivalence inducing an equivalence of ``pi0`` categories."""
    p = min(F.source.stage, F.target.stage) if stage is None else stage
    we, _, _ = local_predicates(F, p, degree)
    P, Q = pi0(F.source, p), pi0(F.target, p)
    mats = pi0_functor_matrices(F, P, Q)
    faithful = all(
        None not in cols and (rank([list(c) for c in cols], Q.homs[F.target_slot(slot)]) if cols else 0)
        == P.homs[slot] == Q.homs[F.target_slot(slot)]
        for slot, cols in mats.items()
    )
    essential = {}
    undecided = False
    for b in F.target.objects:
        found = NO
        for a in F.source.objects:
            verdict = homotopy_equivalent(F.target, F.on_objects[a], b, p, budget, P=Q).verdict
            if verdict == YES:
                found = YES
                break
            if verdict == UNKNOWN:
                found = UNKNOWN
        essential[str(b)] = found
        undecided = undecided or found == UNKNOWN
    surjective = all(v == YES for v in essential.values())
    detail = {"local_weak_equivalence": we.holds, "pi0_fully_faithful": faithful, "essentially_surjective": essential}
    if not (we.holds and faithful):
        return Verdict(False, p, degree, detail)
    if surjective:
        return Verdict(True, p, degree, detail)
    return Verdict(None if undecided else False, p, degree, detail)


# --- interval certificates ----------------------------------------------------------------

@dataclass
class IntervalCertificate:
    verdict: str
    stage: int
    degree: int
    tables: dict
    stabilized: bool
    pi0_ok: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "stage": self.stage,
            "degree": self.degree,
            "stabilized": self.stabilized,
            "pi0_matches_interval": self.pi0_ok,
            "homology": {
                f"{s}->{t}": {str(q): {str(n): b for n, b in tab.items()} for q, tab in per.items()}
                for (s, t), per in sorted(self.tables.items())
            },
            "detail": self.detail,
        }


def _interval_condition(cat, tables, p, d):
    """Every hom has ``H_0`` of rank one, no higher homology, and ``pi0`` is ``I``."""
    homs_ok = all(per[p].get(0, 0) == 1 and all(not per[p].get(n) for n in per[p] if 0 < n <= d) for per in tables.values())
    if not homs_ok:
        return False, False
    P = pi0(cat, p)
    composites = True
    for (x, y), (y2, z) in product(P.homs, repeat=2):
        if y != y2:
            continue
        v = P.table[((y, z), (x, y))][(0, 0)]
        if v is None or not v[0]:
            composites = False
    return composites, composites


def certify_category(cat, stage=None, degree=4):
    """Interval certificate for an already materialised two-object category."""
    p = cat.stage if stage is None else min(stage, cat.stage)
    tables = {slot: {q: homology_table(space, q, degree) for q in range(p + 1)} for slot, space in cat.homs.items()}
    stabilized = p >= 2 and all(stage_map_is_iso(space, q, degree) for space in cat.homs.values() for q in (p - 2, p - 1))
    holds, pi0_ok = _interval_condition(cat, tables, p, degree)
    # set homs only grow along the stages, so a second element is final
    grown = cat.base != CHAIN and any(per[p].get(0, 0) > 1 for per in tables.values())
    if holds and stabilized:
        verdict = CERTIFIED
    elif stabilized or grown:
        verdict = FAILED
    else:
        verdict = UNKNOWN
    return IntervalCertificate(verdict, p, degree, tables, stabilized, pi0_ok, {"condition_at_top": holds})


def check_interval(pres, stage=3, degree=4):
    """Build a two-object presentation and certify it as an interval up to ``(stage, degree)``."""
    from .presentation import build

    built = build(pres, stage)
    return certify_category(built.category, stage, degree)
