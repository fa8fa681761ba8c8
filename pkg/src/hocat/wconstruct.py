"""The cubical resolution ``W(H, I)`` of the interval category.

A cube is attached for every alternating string ``x0 x1 ... xm`` of objects;
its coordinates are the waiting times ``t1 .. t(m-1)`` of the inner vertices,
so the cube is ``H^(x)(m-1)`` with ``H`` the segment.  The weight of a cube is
the length ``m`` of its string, hence ``W_k`` is the weight ``<= k + 1`` part.

On the faces the attaching map is determined by the first coordinate sitting
at a vertex of ``H``:

* time ``1`` splits the string at that vertex into a composite of two
  shorter cubes;
* time ``0`` eliminates the vertex.  Its two neighbours are the same object and
  merge; two inner neighbours merge their times through the multiplication of
  ``H``, an end absorbs the time of its neighbour through the augmentation.
"""

from dataclasses import dataclass, field
from itertools import product

from .chain import SegmentH
from .linalg import rational_str

V0, V1, E = SegmentH.V0, SegmentH.V1, SegmentH.E
_CODE = {V0: "0", V1: "1", E: "e"}
_ORDER = (V0, V1, E)


class WBoundError(ValueError):
    """The requested ``k`` exceeds the configured bound."""


def string_of(start, length):
    return tuple((start + i) % 2 for i in range(length + 1))


def letter_name(start, length, times=()):
    code = "".join(_CODE[t] for t in times)
    return f"w{start}.{length}" + (f".{code}" if code else "")


def parse_letter(name):
    """Inverse of :func:`letter_name`: ``(start, length, times)``."""
    parts = name[1:].split(".")
    start, length = int(parts[0]), int(parts[1])
    code = parts[2] if len(parts) > 2 else ""
    decode = {c: t for t, c in _CODE.items()}
    return start, length, tuple(decode[c] for c in code)


def _degree(times):
    return sum(SegmentH.degree[t] for t in times)


def cube_basis(n):
    """Basis tensors of ``H^(x)n`` grouped by degree, in a fixed order."""
    out = {}
    for times in product(_ORDER, repeat=n):
        out.setdefault(_degree(times), []).append(times)
    return out


def cube_boundary(times):
    """Differential of a basis tensor with the Koszul sign rule."""
    out = {}
    sign = 1
    for i, t in enumerate(times):
        for s, c in SegmentH.boundary[t].items():
            new = times[:i] + (s,) + times[i + 1:]
            out[new] = out.get(new, 0) + sign * c
        if SegmentH.degree[t] % 2:
            sign = -sign
    return {k: v for k, v in out.items() if v}


def _times_mul(a, b):
    return SegmentH.mul(a, b)


def _letter(start, times):
    """The generator carrying ``times`` on the cube of the string starting at ``start``."""
    return (letter_name(start, len(times) + 1, times),)


def face_value(start, length, times):
    """Attaching value on a face: ``{word: coefficient}`` with words as letter tuples.

    ``times`` must contain a vertex factor.  Words are in composition order, so
    the first letter is applied last.
    """
    i = next(k for k, t in enumerate(times) if t != E)
    t = times[i]
    vertex = i + 1  # position of the inner vertex in the string
    if t == V1:
        left, right = times[:i], times[i + 1:]
        sign = -1 if _degree(left) % 2 and _degree(right) % 2 else 1
        mid = (start + vertex) % 2
        word = _letter(mid, right) + _letter(start, left)
        return {word: sign}
    # time 0: the neighbours of the vertex merge
    left_inner = vertex - 1 >= 1
    right_inner = vertex + 1 <= length - 1
    if length == 2:
        return {(): 1}
    before, after = times[: i - 1] if left_inner else (), times[i + 2:] if right_inner else ()
    if left_inner and right_inner:
        merged = _times_mul(times[i - 1], times[i + 1])
        out = {}
        for m, c in merged.items():
            # the merged factor keeps its position, no factor crosses another
            new = before + (m,) + after
            out[_letter(start, new)] = out.get(_letter(start, new), 0) + c
        return {w: c for w, c in out.items() if c}
    if not left_inner:
        # the start absorbs the time of the right neighbour
        c = SegmentH.counit[times[i + 1]]
        return {_letter(start, after): c} if c else {}
    c = SegmentH.counit[times[i - 1]]
    return {_letter(start, before): c} if c else {}


def _cube_attachment(start, length):
    """Attachment entry for the cube of the string ``start, ..., `` of ``length`` arrows."""
    string = string_of(start, length)
    slot = [string[0], string[-1]]
    n = length - 1
    basis = cube_basis(n)
    names = {str(deg): [letter_name(start, length, ts) for ts in tss] for deg, tss in sorted(basis.items())}
    if n == 0:
        return {
            "slot": slot,
            "X": {"degrees": {}},
            "Y": {"degrees": {"0": 1}, "d": {}},
            "u": {},
            "attach": {"map": {}, "stage": length},
            "names": names,
        }
    index = {deg: {ts: j for j, ts in enumerate(tss)} for deg, tss in basis.items()}
    ydiff = {}
    for deg, tss in basis.items():
        if deg == 0:
            continue
        mat = [[0] * len(tss) for _ in basis[deg - 1]]
        for j, ts in enumerate(tss):
            for face, c in cube_boundary(ts).items():
                mat[index[deg - 1][face]][j] = c
        ydiff[str(deg)] = [[rational_str(x) for x in row] for row in mat]
    faces = {deg: [ts for ts in tss if any(t != E for t in ts)] for deg, tss in basis.items()}
    faces = {deg: v for deg, v in faces.items() if v}
    findex = {deg: {ts: j for j, ts in enumerate(v)} for deg, v in faces.items()}
    xdiff, umat, amap = {}, {}, {}
    for deg, tss in faces.items():
        if deg - 1 in faces:
            mat = [[0] * len(tss) for _ in faces[deg - 1]]
            for j, ts in enumerate(tss):
                for face, c in cube_boundary(ts).items():
                    mat[findex[deg - 1][face]][j] = c
            xdiff[str(deg)] = [[rational_str(x) for x in row] for row in mat]
        mat = [[0] * len(tss) for _ in basis[deg]]
        for j, ts in enumerate(tss):
            mat[index[deg][ts]][j] = 1
        umat[str(deg)] = [[rational_str(x) for x in row] for row in mat]
        amap[str(deg)] = [
            {" ".join(w): rational_str(c) for w, c in sorted(face_value(start, length, ts).items())} for ts in tss
        ]
    return {
        "slot": slot,
        "X": {"degrees": {str(d): len(v) for d, v in sorted(faces.items())}, "d": xdiff},
        "Y": {"degrees": {str(d): len(v) for d, v in sorted(basis.items())}, "d": ydiff},
        "u": umat,
        "attach": {"map": amap, "stage": length},
        "names": names,
    }


def w_presentation(k):
    """Presentation of ``W_k(H, I)``: all cubes on strings with at most ``k + 1`` arrows."""
    atts = []
    for length in range(1, k + 2):
        for start in (0, 1):
            atts.append(_cube_attachment(start, length))
    return {"base": "chainQ", "attachments": atts}


@dataclass
class WStage:
    k: int
    presentation: dict
    built: object
    cubes: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    @property
    def category(self):
        return self.built.category

    def dims(self):
        return {f"{s}->{t}": dims for (s, t), dims in sorted(self.category.dims().items())}


def w_construction(k, bound=4, stage=None):
    """Build ``W_k(H, I)`` at weight ``k + 1`` (or ``stage``) with face bookkeeping."""
    from .certificates import Certificate
    from .presentation import build

    if k < 0 or k > bound:
        raise WBoundError(f"k={k} outside 0..{bound}")
    pres = w_presentation(k)
    N = k + 1 if stage is None else stage
    built = build(pres, N)
    cubes = [(start, length, letter_name(start, length, ())) for length in range(1, k + 2) for start in (0, 1)]
    certs = []
    faces_ok = True
    for length in range(2, min(k + 1, N) + 1):
        for start in (0, 1):
            for tss in cube_basis(length - 1).values():
                for ts in tss:
                    if V0 not in ts:
                        continue
                    value = face_value(start, length, ts) if ts[: ts.index(V0)].count(V1) == 0 else None
                    if value is None:
                        continue
                    faces_ok = faces_ok and all(len(w) <= 1 and _word_length(w) <= length - 2 for w in value)
    certs.append(Certificate("minus faces land in the previous stage", faces_ok))
    failures = built.category.check_axioms()
    certs.append(Certificate("concatenation is associative and unital", not failures, {}, {"failures": len(failures)}))
    return WStage(k, pres, built, cubes, certs)


def _word_length(word):
    return sum(int(name.split(".")[1]) for name in word)


def unit_check(stage):
    """``W_0(H, I)(0, 1)`` is the unit: one generator in degree 0 and no differential."""
    space = stage.category.homs[(0, 1)]
    return space.dims_by_degree() == {0: 1} and not any(space.d)

