"""The base-category contract shared by the chain and set bases.

A base supplies the closed symmetric monoidal structure, finite colimits,
generating cofibrations and a strict lifting solver on its own finite
objects.  Everything the enriched layer builds lives in presented spaces
(:mod:`hocat.spaces`); this module also hosts the pieces that are independent
of which base is in use: the size budget, filtered objects and the
universal-property certifier.
"""

import contextlib
import contextvars
import random
from dataclasses import dataclass, field

DEFAULT_BUDGET = 10**6

_budget = contextvars.ContextVar("hocat_budget", default=DEFAULT_BUDGET)


class BudgetExceeded(RuntimeError):
    """A construction would exceed the configured size budget."""


class CertificateFailure(AssertionError):
    """A structural certificate did not hold."""


def current_budget():
    return _budget.get()


@contextlib.contextmanager
def budget(limit):
    token = _budget.set(int(limit))
    try:
        yield
    finally:
        _budget.reset(token)


class Base:
    """Interface implemented by :class:`hocat.chain.ChainBase` and :class:`hocat.finset.SetBase`."""

    name = "abstract"

    def unit(self):
        raise NotImplementedError

    def initial(self):
        raise NotImplementedError

    def tensor(self, a, b):
        raise NotImplementedError

    def coproduct(self, a, b):
        raise NotImplementedError

    def pushout(self, f, g):
        raise NotImplementedError

    def coequalizer(self, f, g):
        raise NotImplementedError

    def generating_cofibrations(self, bound):
        raise NotImplementedError

    def solve_strict_lift(self, i, p, top, bottom):
        raise NotImplementedError

    def is_cofibration(self, f):
        raise NotImplementedError

    def is_weak_equivalence(self, f):
        raise NotImplementedError

    def is_fibration(self, f):
        raise NotImplementedError

    def is_trivial_fibration(self, f):
        return self.is_fibration(f) and self.is_weak_equivalence(f)


# --- filtered objects --------------------------------------------------------

class FilteredObject:
    """A filtered object computed lazily up to a requested stage.

    ``builder(p)`` returns a :class:`~hocat.spaces.Space` truncated at
    weight ``p``.  Stage ``q <= p`` is the weight-``q`` prefix of that space and
    the bonds are the prefix inclusions.  Extending never changes earlier
    stages; :meth:`extend` checks this bit for bit.
    """

    def __init__(self, builder, name=""):
        self._builder = builder
        self.name = name
        self.space = None
        self.computed = -1
        self._signatures = {}

    def extend(self, p):
        if p <= self.computed:
            return self.space
        space = self._builder(p)
        for stage, sig in self._signatures.items():
            if space.signature(stage) != sig:
                raise CertificateFailure(f"{self.name}: stage {stage} changed when extending to {p}")
        for stage in range(p + 1):
            self._signatures[stage] = space.signature(stage)
        self.space = space
        self.computed = p
        return space

    def stage(self, p):
        from .spaces import restrict

        return restrict(self.extend(p), p)

    def dims(self, p):
        return self.extend(p).dims_by_degree(p)

    def bond(self, p, q):
        """Inclusion of stage ``p`` into stage ``q``."""
        from .spaces import Linear

        if p > q:
            raise ValueError("bonds go up")
        lo, hi = self.stage(p), self.stage(q)
        return Linear(lo, hi, [{i: 1} for i in range(lo.dim)], f"{self.name}:{p}->{q}")


# --- universal properties ------------------------------------------------------

@dataclass
class UniversalVerdict:
    holds: bool
    cocone: bool
    cones: list = field(default_factory=list)
    reason: str = ""

    def as_dict(self):
        return {
            "holds": self.holds,
            "cocone": self.cocone,
            "cones": self.cones,
            "reason": self.reason,
        }


def check_universal_property(kind, diagram, candidate, test_cones=3, seed=0):
    """Certify that ``candidate`` is a colimit of ``diagram``.

    ``diagram`` is ``(objects, arrows)`` with arrows ``(s, t, Linear)``;
    ``candidate`` is ``(space, legs)``.  The cocone condition is checked
    exactly.  Then ``test_cones`` cocones are drawn from a reference colimit,
    computed densely as the quotient of the coproduct by the arrow relations,
    and composed with seeded random quotient maps; for each one a mediating map
    must exist and be unique.
    """
    objects, arrows = diagram
    space, legs = candidate
    for s, t, f in arrows:
        if legs[t].compose(f).cols != legs[s].cols:
            return UniversalVerdict(False, False, [], f"{kind}: candidate legs do not commute")
    stage = space.stage
    ref, ref_legs = reference_colimit(objects, arrows, stage)
    rng = random.Random(seed)
    results = []
    ok = True
    for k in range(test_cones):
        if k == 0:
            target, proj = ref, None
        else:
            target, proj = _random_quotient(ref, rng)
        cone = [leg if proj is None else proj.compose(leg) for leg in ref_legs]
        exists, unique = _mediating(space, legs, target, cone)
        results.append({"exists": exists, "unique": unique, "target_dim": target.dim})
        ok = ok and exists and unique
    reason = "" if ok else f"{kind}: mediating map missing or not unique"
    return UniversalVerdict(ok, True, results, reason)


def reference_colimit(objects, arrows, stage):
    """Colimit by dense elimination over the coproduct of ``objects``.

    Chain base: per degree, row-reduce the relations ``in_t f(x) - in_s(x)``
    and keep the non-pivot basis vectors.  Set base: union-find on the
    disjoint union.  Returns ``(space, legs)``.
    """
    from .linalg import rref
    from .spaces import CHAIN, SET, Linear, free_space

    coords = [(k, i) for k, obj in enumerate(objects) for i in range(obj.dim)]
    pos = {c: r for r, c in enumerate(coords)}
    base = objects[0].base if objects else CHAIN
    relations = []
    for s, t, f in arrows:
        for i, col in enumerate(f.cols):
            rel = {pos[(s, i)]: -1}
            for j, c in col.items():
                rel[pos[(t, j)]] = rel.get(pos[(t, j)], 0) + c
            relations.append({r: c for r, c in rel.items() if c})
    weight = {pos[(k, i)]: obj.weights[i] for k, obj in enumerate(objects) for i in range(obj.dim)}
    degree = {pos[(k, i)]: obj.degrees[i] for k, obj in enumerate(objects) for i in range(obj.dim)}
    if base == CHAIN:
        image = {}
        by_degree = {}
        for r in range(len(coords)):
            by_degree.setdefault(degree[r], []).append(r)
        for deg, members in by_degree.items():
            rows = [[rel.get(r, 0) for r in members] for rel in relations if rel and degree[next(iter(rel))] == deg]
            red, pivots = rref(rows, len(members)) if rows else ([], [])
            pivot_row = {members[c]: red[k] for k, c in enumerate(pivots)}
            for r in members:
                if r in pivot_row:
                    row = pivot_row[r]
                    image[r] = {members[c]: -x for c, x in enumerate(row) if x and members[c] != r}
                else:
                    image[r] = {r: 1}
        kept = sorted(r for r in image if image[r] == {r: 1})

        def project(vec):
            out = {}
            for r, c in vec.items():
                for t, x in image[r].items():
                    out[(t,)] = out.get((t,), 0) + c * x
            return {t: x for t, x in out.items() if x}

        def d_of(r):
            k, i = coords[r]
            return {pos[(k, j)]: c for j, c in objects[k].d[i].items()}

        items = [((r,), weight[r], degree[r], project(d_of(r))) for r in kept]
        space = free_space(CHAIN, stage, items, "reference")

        def leg_col(k, i):
            return {space.index[t]: x for t, x in project({pos[(k, i)]: 1}).items()}

        legs = [Linear(obj, space, [leg_col(k, i) for i in range(obj.dim)]) for k, obj in enumerate(objects)]
        return space, legs
    parent = list(range(len(coords)))

    def find(r):
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    for rel in relations:
        if len(rel) != 2:
            continue
        a, b = rel
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(r) for r in range(len(coords))})
    space = free_space(SET, stage, [((r,), weight[r], 0, {}) for r in roots], "reference")
    legs = [Linear(obj, space, [{space.index[(find(pos[(k, i)]),)]: 1} for i in range(obj.dim)]) for k, obj in enumerate(objects)]
    return space, legs


def _random_quotient(space, rng):
    """Quotient of ``space`` by the subcomplex generated by a few random vectors."""
    from .spaces import CHAIN, Linear, present, vadd

    gens = []
    if space.dim:
        for _ in range(rng.randint(0, max(1, space.dim // 3))):
            pick = rng.randrange(space.dim)
            deg = space.degrees[pick]
            same = [i for i in range(space.dim) if space.degrees[i] == deg]
            vec = {}
            for i in rng.sample(same, min(len(same), 2)):
                vadd(vec, {i: 1}, rng.randint(1, 3))
            if space.base != CHAIN:
                vec = {pick: 1}
            gens.append(vec)
    spanning = [((i,), space.weights[i], space.degrees[i]) for i in range(space.dim)]
    relations = []
    if space.base == CHAIN:
        for vec in gens:
            for v in (vec, space.apply_d(vec)):
                if v:
                    relations.append(({(i,): c for i, c in v.items()}, {}))
        bd = lambda t: {(j,): c for j, c in space.d[t[0]].items()}
    else:
        for vec in gens:
            (i,) = vec
            j = rng.randrange(space.dim)
            relations.append(({(i,): 1}, {(j,): 1}))
        bd = None
    quot = present(space.base, space.stage, spanning, relations, bd, "random-quotient")
    proj = Linear(space, quot, [quot.vec((i,)) for i in range(space.dim)])
    return quot, proj


def _mediating(space, legs, target, cone):
    """Does a unique base map ``space -> target`` restricting to ``cone`` along ``legs`` exist?"""
    from .spaces import CHAIN

    if space.base != CHAIN:
        assign = {}
        for leg, c in zip(legs, cone):
            for col, img in zip(leg.cols, c.cols):
                (j,) = col
                if assign.setdefault(j, img) != img:
                    return False, True
        covered = len(assign) == space.dim
        exists = covered or target.dim > 0
        return exists, covered
    from .linalg import solve_rows

    exists = True
    unique = True
    images = {}
    for deg, src in space.basis_by_degree().items():
        pos = {j: r for r, j in enumerate(src)}
        columns = []
        values = []
        for leg, c in zip(legs, cone):
            for i, col in enumerate(leg.cols):
                if leg.source.degrees[i] != deg:
                    continue
                columns.append(col)
                values.append(c.cols[i])
        tgt = target.basis_by_degree().get(deg, [])
        mat = [[0] * len(columns) for _ in src]
        for c, col in enumerate(columns):
            for j, x in col.items():
                mat[pos[j]][c] = x
        rows = []
        for t in tgt:
            rows.append([v.get(t, 0) for v in values])
        sols, uniq = solve_rows(mat, rows, len(src))
        if any(s is None for s in sols):
            exists = False
        if not uniq:
            unique = False
        if exists:
            for r, j in enumerate(src):
                images[j] = {t: sols[k][r] for k, t in enumerate(tgt) if sols[k][r]}
    if exists and unique:
        for j in range(space.dim):
            lhs = {}
            for i, c in space.d[j].items():
                for t, x in images.get(i, {}).items():
                    lhs[t] = lhs.get(t, 0) + c * x
            lhs = {t: x for t, x in lhs.items() if x}
            if lhs != target.apply_d(images.get(j, {})):
                exists = False
    return exists, unique
