"""Ready-made presentations: arrows, intervals and seeded random families."""

import random
from fractions import Fraction


def _sphere(n):
    return {"degrees": {str(n): 1}, "d": {}}


def _disk(n):
    return {"degrees": {str(n): 1, str(n - 1): 1}, "d": {str(n): [["1"]]}}


def free_generator(base, slot, name, degree=0):
    """A free generator ``name`` at ``slot``."""
    if base == "finset":
        return {"slot": list(slot), "X": {"elements": []}, "Y": {"elements": [name]}, "u": {}, "attach": {"map": {}}}
    return {
        "slot": list(slot),
        "X": {"degrees": {}},
        "Y": _sphere(degree),
        "u": {},
        "attach": {"map": {}},
        "names": {str(degree): [name]},
    }


def homotopy_cell(slot, name, boundary, degree=1, stage=None):
    """A cell ``name`` of the given degree with ``d(name) = boundary``.

    ``boundary`` maps words to coefficients; it must be a cycle.  The cell is
    the generating cofibration from the ``(degree-1)``-sphere to the disk.
    """
    att = {"map": {str(degree - 1): [dict(boundary)]}}
    if stage is not None:
        att["stage"] = stage
    return {
        "slot": list(slot),
        "X": _sphere(degree - 1),
        "Y": _disk(degree),
        "u": {str(degree - 1): [["1"]]},
        "attach": att,
        "names": {str(degree): [name], str(degree - 1): [f"{name}.b"]},
    }


def arrow(base="finset"):
    """The free category on one arrow ``f: 0 -> 1``."""
    return {"base": base, "attachments": [free_generator(base, (0, 1), "f")]}


def one_loop(base="finset", slot=(0, 0)):
    return {"base": base, "attachments": [free_generator(base, slot, "y")]}


def chain_interval():
    """The five-cell cofibrant interval over chain complexes.

    ``f, g`` in degree 0, ``h0, h1`` in degree 1 with ``d h0 = gf - 1`` and
    ``d h1 = fg - 1``, and ``k`` in degree 2 with ``d k = f h0 - h1 f``.
    """
    return {
        "base": "chainQ",
        "attachments": [
            free_generator("chainQ", (0, 1), "f"),
            free_generator("chainQ", (1, 0), "g"),
            homotopy_cell((0, 0), "h0", {"g f": "1", "": "-1"}),
            homotopy_cell((1, 1), "h1", {"f g": "1", "": "-1"}),
            homotopy_cell((0, 1), "k", {"f h0": "1", "h1 f": "-1"}, degree=2),
        ],
    }


def set_interval_attempt():
    """Two arrows and identity-valued attachments over finite sets.

    Over finite sets every cofibration is injective, so attachments can only
    add free generators; the result is the free category on ``f`` and ``g``
    and is not an interval.
    """
    return {
        "base": "finset",
        "attachments": [
            free_generator("finset", (0, 1), "f"),
            free_generator("finset", (1, 0), "g"),
        ],
    }


# --- random families --------------------------------------------------------------------------

def _paths(letters, slot, bound, degree=None):
    """Composable words at ``slot`` over ``letters = {name: (s, t, weight, degree)}``."""
    slot = tuple(slot)
    out = [()] if slot[0] == slot[1] and not degree else []
    frontier = [((), s, s, 0, 0) for s in (0, 1)]
    while frontier:
        nxt = []
        for word, src, tgt, w, g in frontier:
            for name in sorted(letters):
                ls, lt, lw, lg = letters[name]
                if ls != tgt or w + lw > bound:
                    continue
                new = (name,) + word
                nxt.append((new, src, lt, w + lw, g + lg))
                if (src, lt) == slot and (degree is None or g + lg == degree):
                    out.append(new)
        frontier = nxt
    return out


def random_set_presentation(rng, attachments=2, max_size=2, word_bound=2):
    """Up to ``attachments`` cells with ``|X| <= |Y| <= max_size``."""
    letters = {}
    atts = []
    for k in range(rng.randint(1, attachments)):
        slot = (rng.randint(0, 1), rng.randint(0, 1))
        ysize = rng.randint(1, max_size)
        ys = [f"y{k}{j}" for j in range(ysize)]
        words = _paths(letters, slot, word_bound)
        xsize = rng.randint(0, ysize) if words else 0
        xs = [f"x{k}{j}" for j in range(xsize)]
        targets = rng.sample(ys, xsize)
        amap = {x: " ".join(rng.choice(words)) for x in xs}
        atts.append(
            {
                "slot": list(slot),
                "X": {"elements": xs},
                "Y": {"elements": ys},
                "u": dict(zip(xs, targets)),
                "attach": {"map": amap},
            }
        )
        weight = max([1] + [sum(letters[a][2] for a in amap[x].split()) for x in xs])
        for y in ys:
            letters[y] = (slot[0], slot[1], weight, 0)
    return {"base": "finset", "attachments": atts}


def random_chain_presentation(rng, attachments=2, max_rank=2, word_bound=2):
    """Sums of generating cofibrations in degrees at most 1.

    Each cell is ``r`` copies of ``0 -> D^1``, ``S^0 -> D^1`` or ``0 -> S^0``
    with ``r <= max_rank``; attaching maps are random rational combinations of
    degree-0 words of earlier generators.
    """
    letters = {}
    atts = []
    for k in range(rng.randint(1, attachments)):
        slot = (rng.randint(0, 1), rng.randint(0, 1))
        kind = rng.choice(["free-disk", "sphere-disk", "free-point"])
        words = _paths(letters, slot, word_bound, degree=0)
        if kind == "sphere-disk" and not words:
            kind = "free-disk"
        r = rng.randint(1, max_rank)
        if kind == "free-point":
            Y = {"degrees": {"0": r}, "d": {}}
            X = {"degrees": {}}
            u, amap = {}, {}
        else:
            Y = {"degrees": {"1": r, "0": r}, "d": {"1": [["1" if i == j else "0" for j in range(r)] for i in range(r)]}}
            if kind == "free-disk":
                X, u, amap = {"degrees": {}}, {}, {}
            else:
                X = {"degrees": {"0": r}, "d": {}}
                u = {"0": [["1" if i == j else "0" for j in range(r)] for i in range(r)]}
                entries = []
                for _ in range(r):
                    combo = {}
                    for w in rng.sample(words, min(len(words), rng.randint(1, 2))):
                        combo[" ".join(w)] = str(Fraction(rng.choice([1, -1, 2, 1]), rng.choice([1, 1, 2])))
                    entries.append(combo)
                amap = {"0": entries}
        att = {"slot": list(slot), "X": X, "Y": Y, "u": u, "attach": {"map": amap}}
        atts.append(att)
        weight = 1
        for entries in amap.values():
            for combo in entries:
                for w in combo:
                    weight = max(weight, sum(letters[a][2] for a in w.split()))
        for n, dim in Y["degrees"].items():
            for j in range(dim):
                letters[f"a{k}.{n}.{j}"] = (slot[0], slot[1], weight, int(n))
    return {"base": "chainQ", "attachments": atts}


def random_presentations(kind, count, seed=0, **kw):
    rng = random.Random(seed)
    make = random_set_presentation if kind == "finset" else random_chain_presentation
    return [make(rng, **kw) for _ in range(count)]
