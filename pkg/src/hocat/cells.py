"""Cell attachments to two-object enriched categories.

Attaching a cell ``J_{i,j}[X] -> J_{i,j}[Y]`` along ``X -> H(i, j)`` is
computed hom by hom.  For the slot ``(0, 1)`` the endo-monoids are free
monoid extensions, ``K(0,1)`` is presented twice (as ``P`` out of
``H(0,1) (x)_{H0} K0`` and as ``Q`` out of ``K1 (x)_{H1} H(0,1)``) and
``K(1,0)`` is presented as both ``K0 (x)_{H0} H(1,0)`` and
``H(1,0) (x)_{H1} K1``.  For the slot ``(0, 0)`` the monoid ``K0`` is a free
extension, ``K1`` is the pushout of ``H1 <- dH1 -> H(0,1) (x) K0 (x) H(1,0)``
and the cross homs are one-sided tensors.  The other two slots are reduced to
these by reversing arrows or swapping the objects.

Composition is computed by flattening basis terms to alternating strings
(:mod:`hocat.words`), concatenating, and parsing the result back into the
target presentation.
"""

from dataclasses import dataclass, field

from .enriched import BeyondStage, TwoObjectCategory, boundary, opposite, swap_objects
from .freemonoid import Bimodule, FreeExtension
from .spaces import Linear, colimit, tensor, tensor_over, tensor_vecs, vadd
from .words import Strings, flatten_free, parse_free, parse_vector


@dataclass
class Cell:
    """A generating cofibration ``u: X -> Y`` attached along ``X -> H(slot)``.

    ``attach[i]`` is the image of basis element ``i`` of ``X`` as a sparse
    vector over the basis of ``H(slot)``.  ``names`` labels the basis of ``Y``.
    """

    slot: tuple
    X: object
    Y: object
    u: Linear
    attach: list
    weight: int
    names: list
    index: int = 0
    label: str = ""


@dataclass
class Attachment:
    """Everything built while attaching one cell, kept for certificates."""

    cell: Cell
    source: TwoObjectCategory
    result: TwoObjectCategory
    structure: dict
    case: str
    parts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)


# --- small helpers ------------------------------------------------------------------

def mulvec(ext, a, b):
    acc = {}
    for i, x in a.items():
        for j, y in b.items():
            v = ext.mul_basis(i, j)
            if v is None:
                from .enriched import BeyondStage

                raise BeyondStage("product beyond stage")
            vadd(acc, v, x * y)
    return acc


def _triple(cat, space, mslot, lslot, rslot):
    """``L (x) Y (x) R`` as a bimodule over the monoid in ``mslot``."""

    def left(r, i):
        l, y, rr = space.terms[i]
        v = cat.compose_basis(mslot, lslot, r, l)
        return space.reduce(tensor_vecs([v, {y: 1}, {rr: 1}]))

    def right(i, r):
        l, y, rr = space.terms[i]
        v = cat.compose_basis(rslot, mslot, rr, r)
        return space.reduce(tensor_vecs([{l: 1}, {y: 1}, v]))

    return Bimodule(space, left, right)


def _middle(space, fn):
    """Apply ``fn`` to the middle factor of triple terms, linearly."""

    def image(i):
        l, m, r = space.terms[i] if isinstance(i, int) else i
        return tensor_vecs([{l: 1}, fn(m), {r: 1}])

    return image


def _extension(cat, cell, mslot, lslot, rslot, nx_factors, ny_factors, att_fn, name):
    stage = cat.stage
    nx = tensor(nx_factors, stage, f"{name}:NX")
    ny = tensor(ny_factors, stage, f"{name}:NY")
    monoid = cat.homs[mslot]
    rmul = lambda a, b: cat.compose_basis(mslot, mslot, a, b)
    u = lambda i: ny.reduce(_middle(nx, lambda x: cell.u.cols[x])(i))
    att = lambda i: att_fn(*nx.terms[i])
    ext = FreeExtension(
        monoid, rmul, _triple(cat, nx, mslot, lslot, rslot), _triple(cat, ny, mslot, lslot, rslot), u, att, stage, name
    )
    return ext, ny


def _from_objects(space, maps, target):
    """Map out of a colimit given maps out of each diagram object (sources last)."""
    return Linear(space, target, [maps[t].cols[i] for t, i in space.terms])


def _flatten_vec(flat_basis, vec):
    acc = {}
    for i, c in vec.items():
        vadd(acc, flat_basis(i), c)
    return acc


class _Homs:
    """Flatten and parse functions for the four homs of a result category."""

    def __init__(self, strings):
        self.strings = strings
        self.flatten = {}
        self.parse = {}
        self._flat_cache = {}

    def flat(self, slot, i):
        key = (slot, i)
        if key not in self._flat_cache:
            self._flat_cache[key] = self.flatten[slot](i)
        return self._flat_cache[key]

    def parse_flat(self, slot, flat, parser=None):
        return parse_vector(flat, parser or self.parse[slot], None)

    def composer(self):
        strings = self.strings

        def comp(gslot, fslot, g, f):
            flat = strings.concat(self.flat(gslot, g), gslot, self.flat(fslot, f), fslot)
            return self.parse_flat((fslot[0], gslot[1]), flat)

        return comp


def _new_letters(cell, slot, parse):
    """Letter vectors of the cell generators; ``None`` for those beyond the stage."""
    out = {}
    for y, lname in enumerate(cell.names):
        try:
            out[lname] = (slot, parse(y) if y < cell.Y.dim else None)
        except BeyondStage:
            out[lname] = (slot, None)
    return out


def _result(source, homs, calc, letters_new, name, strings):
    comp = calc.composer()
    units = {}
    for s in (0, 1):
        u = source.homs[(s, s)].unit_index
        units[s] = calc.parse_flat((s, s), strings.old((s, s), u))
    structure = {}
    for slot, space in source.homs.items():
        cols = [calc.parse_flat(slot, strings.old(slot, i)) for i in range(space.dim)]
        structure[slot] = Linear(space, homs[slot], cols, f"H{slot}->K{slot}")
    letters = {}
    for lname, (slot, vec) in source.letters.items():
        letters[lname] = (slot, None if vec is None else structure[slot].apply(vec))
    letters.update(letters_new)
    cat = TwoObjectCategory(source.base, source.stage, homs, units, comp, name, letters)
    return cat, structure


# --- case (0, 1) ------------------------------------------------------------------------

def pushout_01(H, cell, name="K"):
    """Attach a cell at slot ``(0, 1)``."""
    if tuple(cell.slot) != (0, 1):
        raise ValueError(f"pushout_01 needs slot (0, 1), got {cell.slot}")
    N = H.stage
    X, Y = cell.X, cell.Y
    H0, H1, H01, H10 = H.H0, H.H1, H.H01, H.H10
    e0, e1 = H0.unit_index, H1.unit_index
    strings = Strings(H, (0, 1), Y)
    att = lambda x: cell.attach[x]

    def att0(h, x, f):
        return H.compose((1, 0), {h: 1}, (0, 1), H.compose((0, 1), att(x), (0, 0), {f: 1}))

    def att1(g, x, h):
        return H.compose((1, 1), {g: 1}, (1, 1), H.compose((0, 1), att(x), (1, 0), {h: 1}))

    ext0, ny0 = _extension(H, cell, (0, 0), (1, 0), (0, 0), [H10, X, H0], [H10, Y, H0], att0, f"{name}0")
    ext1, ny1 = _extension(H, cell, (1, 1), (1, 1), (1, 0), [H1, X, H10], [H1, Y, H10], att1, f"{name}1")
    K0, K1 = ext0.space, ext1.space
    k0u, k1u = K0.unit_index, K1.unit_index

    flatK0 = lambda i: flatten_free(ext0, ny0, strings, ((1, 0), (0, 0)), (0, 0), K0.terms[i])
    flatK1 = lambda i: flatten_free(ext1, ny1, strings, ((1, 1), (1, 0)), (1, 1), K1.terms[i])
    parseK0 = lambda hs, ys: parse_free(ext0, ny0, hs, ys, True, e1, e0)
    parseK1 = lambda hs, ys: parse_free(ext1, ny1, hs, ys, False, e1, e0)

    # P: pushout of H(0,1) (x)_{H0} K0 <- U -> H1 (x) Y (x) K0
    A = tensor_over(
        [H01, K0],
        [(H0, lambda a, r: H.compose_basis((0, 1), (0, 0), a, r), lambda r, k: mulvec(ext0, ext0.r_vec(r), {k: 1}))],
        N,
        "H01(x)K0",
    )
    B = tensor([H1, Y, K0], N, "H1(x)Y(x)K0")
    dH1, c1 = boundary(H, 1)
    dH0, c0 = boundary(H, 0)
    UX = tensor([H1, X, K0], N)
    UY = tensor([dH1, Y, K0], N)
    U0 = tensor([dH1, X, K0], N)
    u_arrows = [
        (2, 0, Linear.from_terms(U0, UX, lambda t: tensor_vecs([c1.cols[t[0]], {t[1]: 1}, {t[2]: 1}]))),
        (2, 1, Linear.from_terms(U0, UY, lambda t: tensor_vecs([{t[0]: 1}, cell.u.cols[t[1]], {t[2]: 1}]))),
    ]
    U, _ = colimit([UX, UY, U0], u_arrows, N, f"{name}:U", sources={2})

    def uy_to_a(t):
        a, h = dH1.terms[t[0]]
        k = mulvec(ext0, parseK0((h, e0), (t[1],)), {t[2]: 1})
        return tensor_vecs([{a: 1}, k])

    ux_a = Linear.from_terms(UX, A, lambda t: tensor_vecs([H.compose((1, 1), {t[0]: 1}, (0, 1), att(t[1])), {t[2]: 1}]))
    uy_a = Linear.from_terms(UY, A, uy_to_a)
    ux_b = Linear.from_terms(UX, B, lambda t: tensor_vecs([{t[0]: 1}, cell.u.cols[t[1]], {t[2]: 1}]))
    uy_b = Linear.from_terms(UY, B, lambda t: tensor_vecs([c1.cols[t[0]], {t[1]: 1}, {t[2]: 1}]))
    u0_a = ux_a.compose(u_arrows[0][2])
    u_to_a = _from_objects(U, [ux_a, uy_a, u0_a], A)
    u_to_b = _from_objects(U, [ux_b, uy_b, ux_b.compose(u_arrows[0][2])], B)
    P, plegs = colimit([A, B, U], [(2, 0, u_to_a), (2, 1, u_to_b)], N, f"{name}(0,1):P", sources={2})

    # Q: pushout of K1 (x)_{H1} H(0,1) <- U' -> K1 (x) Y (x) H0
    A2 = tensor_over(
        [K1, H01],
        [(H1, lambda k, r: mulvec(ext1, {k: 1}, ext1.r_vec(r)), lambda r, a: H.compose_basis((1, 1), (0, 1), r, a))],
        N,
        "K1(x)H01",
    )
    B2 = tensor([K1, Y, H0], N, "K1(x)Y(x)H0")
    VX = tensor([K1, X, H0], N)
    VY = tensor([K1, Y, dH0], N)
    V0 = tensor([K1, X, dH0], N)
    v_arrows = [
        (2, 0, Linear.from_terms(V0, VX, lambda t: tensor_vecs([{t[0]: 1}, {t[1]: 1}, c0.cols[t[2]]]))),
        (2, 1, Linear.from_terms(V0, VY, lambda t: tensor_vecs([{t[0]: 1}, cell.u.cols[t[1]], {t[2]: 1}]))),
    ]
    V, _ = colimit([VX, VY, V0], v_arrows, N, f"{name}:U'", sources={2})

    def vy_to_a(t):
        h, a = dH0.terms[t[2]]
        xi = mulvec(ext1, {t[0]: 1}, parseK1((e1, h), (t[1],)))
        return tensor_vecs([xi, {a: 1}])

    vx_a = Linear.from_terms(VX, A2, lambda t: tensor_vecs([{t[0]: 1}, H.compose((0, 1), att(t[1]), (0, 0), {t[2]: 1})]))
    vy_a = Linear.from_terms(VY, A2, vy_to_a)
    vx_b = Linear.from_terms(VX, B2, lambda t: tensor_vecs([{t[0]: 1}, cell.u.cols[t[1]], {t[2]: 1}]))
    vy_b = Linear.from_terms(VY, B2, lambda t: tensor_vecs([{t[0]: 1}, {t[1]: 1}, c0.cols[t[2]]]))
    v_to_a = _from_objects(V, [vx_a, vy_a, vx_a.compose(v_arrows[0][2])], A2)
    v_to_b = _from_objects(V, [vx_b, vy_b, vx_b.compose(v_arrows[0][2])], B2)
    Q, qlegs = colimit([A2, B2, V], [(2, 0, v_to_a), (2, 1, v_to_b)], N, f"{name}(0,1):Q", sources={2})

    # K(1,0) in its two forms
    K10 = tensor_over(
        [K0, H10],
        [(H0, lambda k, r: mulvec(ext0, {k: 1}, ext0.r_vec(r)), lambda r, h: H.compose_basis((0, 0), (1, 0), r, h))],
        N,
        f"{name}(1,0)",
    )
    K10b = tensor_over(
        [H10, K1],
        [(H1, lambda h, r: H.compose_basis((1, 0), (1, 1), h, r), lambda r, k: mulvec(ext1, ext1.r_vec(r), {k: 1}))],
        N,
        f"{name}(1,0):alt",
    )

    old = strings.old
    yslot = (0, 1)

    def flat_a(t):
        return strings.concat(old((0, 1), t[0]), (0, 1), flatK0(t[1]), (0, 0))

    def flat_b(t):
        return strings.chain([(old((1, 1), t[0]), (1, 1)), (strings.letter(t[1]), yslot), (flatK0(t[2]), (0, 0))])[0]

    def flat_a2(t):
        return strings.concat(flatK1(t[0]), (1, 1), old((0, 1), t[1]), (0, 1))

    def flat_b2(t):
        return strings.chain([(flatK1(t[0]), (1, 1)), (strings.letter(t[1]), yslot), (old((0, 0), t[2]), (0, 0))])[0]

    def flat_colimit(space, corners, fallback):
        def flat(i):
            tag, idx = space.terms[i]
            if tag < len(corners):
                return corners[tag](corners_spaces[space][tag].terms[idx])
            return _flatten_vec(lambda j: flat(j), fallback(idx))

        return flat

    corners_spaces = {P: [A, B], Q: [A2, B2]}
    flatP = flat_colimit(P, [flat_a, flat_b], lambda idx: plegs[0].apply(u_to_a.cols[idx]))
    flatQ = flat_colimit(Q, [flat_a2, flat_b2], lambda idx: qlegs[0].apply(v_to_a.cols[idx]))
    flat10 = lambda i: strings.concat(flatK0(K10.terms[i][0]), (0, 0), old((1, 0), K10.terms[i][1]), (1, 0))
    flat10b = lambda i: strings.concat(old((1, 0), K10b.terms[i][0]), (1, 0), flatK1(K10b.terms[i][1]), (1, 1))

    def parseP(key):
        hs, ys = key
        if not ys:
            return plegs[0].apply(A.reduce({(hs[0], k0u): 1}))
        k = parseK0(hs[1:], ys[1:])
        return plegs[1].apply(B.reduce(tensor_vecs([{hs[0]: 1}, {ys[0]: 1}, k])))

    def parseQ(key):
        hs, ys = key
        if not ys:
            return qlegs[0].apply(A2.reduce({(k1u, hs[0]): 1}))
        n = len(ys)
        xi = parseK1(hs[:n], ys[: n - 1])
        return qlegs[1].apply(B2.reduce(tensor_vecs([xi, {ys[-1]: 1}, {hs[-1]: 1}])))

    def parse10(key):
        hs, ys = key
        if not ys:
            return K10.reduce({(k0u, hs[0]): 1})
        k = parseK0(hs[:-1] + (e0,), ys)
        return K10.reduce(tensor_vecs([k, {hs[-1]: 1}]))

    def parse10b(key):
        hs, ys = key
        if not ys:
            return K10b.reduce({(hs[0], k1u): 1})
        xi = parseK1((e1,) + hs[1:], ys)
        return K10b.reduce(tensor_vecs([{hs[0]: 1}, xi]))

    calc = _Homs(strings)
    calc.flatten = {(0, 0): flatK0, (1, 1): flatK1, (0, 1): flatP, (1, 0): flat10}
    calc.parse = {
        (0, 0): lambda key: parseK0(*key),
        (1, 1): lambda key: parseK1(*key),
        (0, 1): parseP,
        (1, 0): parse10,
    }
    homs = {(0, 0): K0, (1, 1): K1, (0, 1): P, (1, 0): K10}
    letters = _new_letters(cell, (0, 1), lambda y: parseP(((e1, e0), (y,))))
    K, structure = _result(H, homs, calc, letters, name, strings)

    def transfer(src, flat_fn, parser, tgt):
        return Linear(src, tgt, [parse_vector(flat_fn(i), parser, None) for i in range(src.dim)])

    witnesses = {
        "P->Q": transfer(P, flatP, parseQ, Q),
        "Q->P": transfer(Q, flatQ, parseP, P),
        "K10->alt": transfer(K10, flat10, parse10b, K10b),
        "alt->K10": transfer(K10b, flat10b, parse10, K10),
    }
    parts = {
        "K0": ext0,
        "K1": ext1,
        "P": (P, plegs, A, B, U, u_to_a, u_to_b),
        "Q": (Q, qlegs, A2, B2, V, v_to_a, v_to_b),
        "K10": K10,
        "K10alt": K10b,
        "dH0": (dH0, c0),
        "dH1": (dH1, c1),
        "cocone": [
            ("U->P corners", u_arrows, (ux_a, uy_a), (ux_b, uy_b)),
            ("U'->Q corners", v_arrows, (vx_a, vy_a), (vx_b, vy_b)),
        ],
        "strings": strings,
        "calc": calc,
    }
    return Attachment(cell, H, K, structure, "01", parts, witnesses)


# --- case (0, 0) ------------------------------------------------------------------------

def pushout_00(H, cell, name="K"):
    """Attach a cell at slot ``(0, 0)``."""
    if tuple(cell.slot) != (0, 0):
        raise ValueError(f"pushout_00 needs slot (0, 0), got {cell.slot}")
    N = H.stage
    X, Y = cell.X, cell.Y
    H0, H1, H01, H10 = H.H0, H.H1, H.H01, H.H10
    e0 = H0.unit_index
    strings = Strings(H, (0, 0), Y)
    old = strings.old

    def att0(r, x, s):
        return H.compose((0, 0), {r: 1}, (0, 0), H.compose((0, 0), cell.attach[x], (0, 0), {s: 1}))

    ext0, ny0 = _extension(H, cell, (0, 0), (0, 0), (0, 0), [H0, X, H0], [H0, Y, H0], att0, f"{name}0")
    K0 = ext0.space
    k0u = K0.unit_index
    flatK0 = lambda i: flatten_free(ext0, ny0, strings, ((0, 0), (0, 0)), (0, 0), K0.terms[i])
    parseK0 = lambda hs, ys: parse_free(ext0, ny0, hs, ys, True, e0, e0)

    right_a = lambda a, r: H.compose_basis((0, 1), (0, 0), a, r)
    left_h = lambda r, h: H.compose_basis((0, 0), (1, 0), r, h)
    left_k = lambda r, k: mulvec(ext0, ext0.r_vec(r), {k: 1})
    right_k = lambda k, r: mulvec(ext0, {k: 1}, ext0.r_vec(r))
    T = tensor_over([H01, K0, H10], [(H0, right_a, left_k), (H0, right_k, left_h)], N, "H01(x)K0(x)H10")
    dH1, c1 = boundary(H, 1)
    dH0, c0 = boundary(H, 0)
    d_to_t = Linear.from_terms(dH1, T, lambda t: {(t[0], k0u, t[1]): 1})
    K1, legs = colimit([H1, T, dH1], [(2, 0, c1), (2, 1, d_to_t)], N, f"{name}1", sources={2})
    K1.unit_index = next(iter(legs[0].cols[H1.unit_index]))
    K01 = tensor_over([H01, K0], [(H0, right_a, left_k)], N, f"{name}(0,1)")
    K10 = tensor_over([K0, H10], [(H0, right_k, left_h)], N, f"{name}(1,0)")

    def flat_t(t):
        return strings.chain([(old((0, 1), t[0]), (0, 1)), (flatK0(t[1]), (0, 0)), (old((1, 0), t[2]), (1, 0))])[0]

    def flatK1(i):
        tag, idx = K1.terms[i]
        if tag == 0:
            return old((1, 1), idx)
        if tag == 1:
            return flat_t(T.terms[idx])
        return strings.old_vec((1, 1), c1.cols[idx])

    flat01 = lambda i: strings.concat(old((0, 1), K01.terms[i][0]), (0, 1), flatK0(K01.terms[i][1]), (0, 0))
    flat10 = lambda i: strings.concat(flatK0(K10.terms[i][0]), (0, 0), old((1, 0), K10.terms[i][1]), (1, 0))

    def parseK1(key):
        hs, ys = key
        if not ys:
            return legs[0].apply({hs[0]: 1})
        k = parseK0((e0,) + hs[1:-1] + (e0,), ys)
        return legs[1].apply(T.reduce(tensor_vecs([{hs[0]: 1}, k, {hs[-1]: 1}])))

    def parse01(key):
        hs, ys = key
        if not ys:
            return K01.reduce({(hs[0], k0u): 1})
        return K01.reduce(tensor_vecs([{hs[0]: 1}, parseK0((e0,) + hs[1:], ys)]))

    def parse10(key):
        hs, ys = key
        if not ys:
            return K10.reduce({(k0u, hs[0]): 1})
        return K10.reduce(tensor_vecs([parseK0(hs[:-1] + (e0,), ys), {hs[-1]: 1}]))

    calc = _Homs(strings)
    calc.flatten = {(0, 0): flatK0, (1, 1): flatK1, (0, 1): flat01, (1, 0): flat10}
    calc.parse = {(0, 0): lambda key: parseK0(*key), (1, 1): parseK1, (0, 1): parse01, (1, 0): parse10}
    homs = {(0, 0): K0, (1, 1): K1, (0, 1): K01, (1, 0): K10}
    letters = _new_letters(cell, (0, 0), lambda y: parseK0((e0, e0), (y,)))
    K, structure = _result(H, homs, calc, letters, name, strings)
    parts = {
        "K0": ext0,
        "NY0": ny0,
        "K1": (K1, legs, T, d_to_t),
        "dH0": (dH0, c0),
        "dH1": (dH1, c1),
        "strings": strings,
        "calc": calc,
        "parseK0": parseK0,
    }
    return Attachment(cell, H, K, structure, "00", parts, {})


# --- dispatcher ---------------------------------------------------------------------------

def _reslotted(cell, slot):
    """The same cell seen through an object relabelling of the category."""
    return Cell(slot, cell.X, cell.Y, cell.u, cell.attach, cell.weight, cell.names, cell.index, cell.label)


def attach(H, cell, name="K"):
    """Attach ``cell`` to ``H`` at any slot.

    Slot ``(1, 0)`` is handled by reversing arrows around case ``(0, 1)``;
    slot ``(1, 1)`` by swapping the objects around case ``(0, 0)``.  The result
    carries the homs of the conjugated construction, relabelled back.
    """
    slot = tuple(cell.slot)
    if slot == (0, 1):
        return pushout_01(H, cell, name)
    if slot == (0, 0):
        return pushout_00(H, cell, name)
    if slot == (1, 0):
        inner = pushout_01(opposite(H), _reslotted(cell, (0, 1)), name)
        back = opposite(inner.result)
        structure = {(i, j): f for (j, i), f in inner.structure.items()}
        return _wrapped(cell, H, back, structure, "10", inner)
    if slot == (1, 1):
        inner = pushout_00(swap_objects(H), _reslotted(cell, (0, 0)), name)
        back = swap_objects(inner.result)
        structure = {(1 - i, 1 - j): f for (i, j), f in inner.structure.items()}
        return _wrapped(cell, H, back, structure, "11", inner)
    raise ValueError(f"unknown slot {slot}")


def _wrapped(cell, H, K, structure, case, inner):
    K.name = inner.result.name
    out = Attachment(cell, H, K, structure, case, {"inner": inner}, inner.witnesses)
    return out
