"""Checks replayed on the provenance of each attachment.

Every function returns a :class:`Certificate`; ``holds`` is exact, never a
tolerance.  Per-stage results are keyed by the stage ``q`` and refer to the
weight ``<= q`` part of the materialised objects.
"""

from dataclasses import dataclass, field

from .base import check_universal_property
from .enriched import boundary, check_compatibility
from .spaces import Linear, tensor_over, tensor_vecs


@dataclass
class Certificate:
    name: str
    holds: bool
    stages: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        out = {"name": self.name, "holds": self.holds}
        if self.stages:
            out["stages"] = {str(q): v for q, v in sorted(self.stages.items())}
        if self.detail:
            out["detail"] = self.detail
        return out


def _per_stage(check, stage):
    return {q: bool(check(q)) for q in range(stage + 1)}


def _identity_upto(f, q):
    n = f.source.prefix(q)
    return all(f.cols[i] == {i: 1} for i in range(n))


def _frame(step):
    """The attachment in the frame where its slot is ``(0, 1)`` or ``(0, 0)``."""
    return step.parts.get("inner", step)


# --- witnesses ------------------------------------------------------------------------------------

def witness_certificates(step):
    """Two-sided inverse checks for the iso witnesses of case ``(0, 1)``."""
    step = _frame(step)
    out = []
    pairs = [("P=Q", "P->Q", "Q->P"), ("K10 formulas agree", "K10->alt", "alt->K10")]
    stage = step.result.stage
    for label, fwd, bwd in pairs:
        if fwd not in step.witnesses:
            continue
        f, g = step.witnesses[fwd], step.witnesses[bwd]
        gf, fg = g.compose(f), f.compose(g)
        stages = {q: _identity_upto(gf, q) and _identity_upto(fg, q) for q in range(stage + 1)}
        detail = {"dims": [f.source.dim, f.target.dim], "chain_maps": f.is_chain_map() and g.is_chain_map()}
        out.append(Certificate(label, all(stages.values()) and detail["chain_maps"], stages, detail))
    return out


# --- boundary maps ------------------------------------------------------------------------------

def boundary_map(step, i):
    """``dH_i -> dK_i`` induced by the structure maps, with both boundary objects."""
    H, K = step.source, step.result
    dH, cH = boundary(H, i)
    dK, cK = boundary(K, i)
    other = 1 - i
    first, second = step.structure[(other, i)], step.structure[(i, other)]
    cols = [dK.reduce(tensor_vecs([first.cols[a], second.cols[b]])) for a, b in dH.terms]
    return Linear(dH, dK, cols, f"d{i}"), (dH, cH), (dK, cK)


def boundary_pushout(step, test_cones=3, seed=0):
    """The square ``dH_i -> H_i / dK_i -> K_i`` is a pushout.

    Case ``(0, 1)`` uses ``i = 0``; case ``(0, 0)`` uses ``i = 1``.
    """
    step = _frame(step)
    i = 0 if step.case == "01" else 1
    dmap, (dH, cH), (dK, cK) = boundary_map(step, i)
    S = step.structure[(i, i)]
    Ki = step.result.homs[(i, i)]
    diagram = ([dH, step.source.homs[(i, i)], dK], [(0, 1, cH), (0, 2, dmap)])
    candidate = (Ki, [S.compose(cH), S, cK])
    verdict = check_universal_property(f"boundary square {i}", diagram, candidate, test_cones, seed)
    name = "dH0->H0 / dK0->K0 pushout" if i == 0 else "dH1->H1 / dK1->K1 pushout"
    return Certificate(name, verdict.holds, {}, verdict.as_dict())


# --- injectivity -----------------------------------------------------------------------------

def comparison_maps(K, H, structure):
    """``K1 (x)_{H1} H(0,1) -> K(0,1)`` and ``H(0,1) (x)_{H0} K0 -> K(0,1)``."""
    s11, s00, s01 = structure[(1, 1)], structure[(0, 0)], structure[(0, 1)]
    K1, K0, K01 = K.homs[(1, 1)], K.homs[(0, 0)], K.homs[(0, 1)]
    H01 = H.homs[(0, 1)]
    stage = K.stage

    def k_right(k, r):
        return K.try_compose((1, 1), {k: 1}, (1, 1), s11.cols[r])

    def h_left(r, a):
        return H.compose_basis((1, 1), (0, 1), r, a)

    left = tensor_over([K1, H01], [(H.homs[(1, 1)], k_right, h_left)], stage, "K1(x)H01")
    left_map = Linear(left, K01, [K.compose((1, 1), {k: 1}, (0, 1), s01.cols[a]) for k, a in left.terms])

    def h_right(a, r):
        return H.compose_basis((0, 1), (0, 0), a, r)

    def k_left(r, k):
        return K.try_compose((0, 0), s00.cols[r], (0, 0), {k: 1})

    right = tensor_over([H01, K0], [(H.homs[(0, 0)], h_right, k_left)], stage, "H01(x)K0")
    right_map = Linear(right, K01, [K.compose((0, 1), s01.cols[a], (0, 0), {k: 1}) for a, k in right.terms])
    return left_map, right_map


def injectivity(step, upto=None):
    """``c_0``, ``c_1`` and both comparison maps are degreewise injective per stage."""
    K = step.result
    stage = K.stage if upto is None else min(upto, K.stage)
    maps = {"c0": boundary(K, 0)[1], "c1": boundary(K, 1)[1]}
    maps["K1(x)H01->K01"], maps["H01(x)K0->K01"] = comparison_maps(K, step.source, step.structure)
    out = []
    for label, f in maps.items():
        stages = _per_stage(f.is_injective, stage)
        out.append(Certificate(f"{label} injective", all(stages.values()), stages, {"dims": [f.source.dim, f.target.dim]}))
    return out


# --- axioms -------------------------------------------------------------------------------------

def axiom_certificates(cat):
    failures = cat.check_axioms()
    compat = check_compatibility(cat)
    return [
        Certificate("category axioms", not failures, {}, {"failures": len(failures)}),
        Certificate("sixtuple compatibility", not compat, {}, {"failures": len(compat)}),
    ]


def attachment_certificates(step, test_cones=3, seed=0):
    """All certificates of one attachment."""
    certs = axiom_certificates(step.result)
    certs += witness_certificates(step)
    certs.append(boundary_pushout(step, test_cones, seed))
    certs += injectivity(step)
    return certs


def build_certificates(built, test_cones=3, seed=0):
    """``[(attachment index, [Certificate, ...]), ...]`` for a built presentation."""
    return [(k, attachment_certificates(step, test_cones, seed + k)) for k, step in enumerate(built.steps)]
