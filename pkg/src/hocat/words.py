"""Alternating strings of old arrows and new generator letters.

After attaching a cell ``Y`` at slot ``(a, b)`` every arrow of the new
category is a combination of strings ``h_0 y_1 h_1 ... y_n h_n`` with the
``h_k`` old arrows and the ``y_k`` basis letters of ``Y``, read in
composition order.  A flat vector maps keys ``(hs, ys)`` to coefficients,
where ``hs`` holds ``n + 1`` old basis indices and ``ys`` holds ``n`` letter
indices.  Composition of strings is concatenation followed by composing the
two old arrows that meet; no factors move past each other, so no Koszul signs
arise.
"""

from .enriched import BeyondStage
from .spaces import vadd


class Strings:
    def __init__(self, cat, yslot, letters):
        self.cat = cat
        self.ya, self.yb = yslot
        self.letters = letters

    def hslot(self, s, t, n, k):
        """Slot of the ``k``-th old letter (from the left) in a string ``s -> t`` with ``n`` letters."""
        if n == 0:
            return (s, t)
        if k == 0:
            return (self.yb, t)
        if k == n:
            return (s, self.ya)
        return (self.yb, self.ya)

    def old(self, slot, i):
        return {((i,), ()): 1}

    def old_vec(self, slot, vec):
        return {((i,), ()): c for i, c in vec.items()}

    def letter(self, y):
        ub = self.cat.homs[(self.yb, self.yb)].unit_index
        ua = self.cat.homs[(self.ya, self.ya)].unit_index
        return {((ub, ua), (y,)): 1}

    def letter_vec(self, vec):
        acc = {}
        for y, c in vec.items():
            vadd(acc, self.letter(y), c)
        return acc

    def concat(self, left, lslot, right, rslot):
        """Flat vector of ``left o right`` with ``left`` in ``lslot`` and ``right`` in ``rslot``."""
        s, m = rslot
        m2, t = lslot
        if m != m2:
            raise ValueError("strings are not composable")
        out = {}
        for (ha, ya), ca in left.items():
            for (hb, yb), cb in right.items():
                ls = self.hslot(m, t, len(ya), len(ya))
                rs = self.hslot(s, m, len(yb), 0)
                v = self.cat.compose_basis(ls, rs, ha[-1], hb[0])
                if v is None:
                    raise BeyondStage("string leaves the stage")
                for i, c in v.items():
                    vadd(out, {(ha[:-1] + (i,) + hb[1:], ya + yb): 1}, ca * cb * c)
        return out

    def chain(self, pieces):
        """Concatenate ``[(flat, slot), ...]`` listed left to right."""
        flat, slot = pieces[-1]
        for f, s in reversed(pieces[:-1]):
            flat = self.concat(f, s, flat, slot)
            slot = (slot[0], s[1])
        return flat, slot

    def weight(self, key, s, t):
        hs, ys = key
        n = len(ys)
        w = sum(self.cat.homs[self.hslot(s, t, n, k)].weights[h] for k, h in enumerate(hs))
        return w + sum(self.letters.weights[y] for y in ys)


def parse_free(ext, ny_space, hs, ys, left_units, unit_left, unit_right):
    """The word of ``ext`` encoded by a string.

    ``ny_space`` has terms ``(l, y, r)``.  With ``left_units`` the factors are
    ``(h_0, y_1, e), (h_1, y_2, e), ..., (h_{n-1}, y_n, h_n)``; otherwise
    ``(h_0, y_1, h_1), (e, y_2, h_2), ..., (e, y_n, h_n)``.
    """
    n = len(ys)
    if n == 0:
        return ext.r_vec(hs[0])
    z = []
    for k in range(n):
        if left_units:
            term = (hs[k], ys[k], hs[n] if k == n - 1 else unit_right)
        else:
            term = (hs[0] if k == 0 else unit_left, ys[k], hs[k + 1])
        i = ny_space.index.get(term)
        if i is None:
            raise BeyondStage("word factor beyond stage")
        z.append(i)
    vec = ext.word_vec(tuple(z))
    if vec is None:
        raise BeyondStage("word beyond stage")
    return vec


def parse_vector(flat, parse_key, target):
    """Linear extension of a key parser to a flat vector."""
    acc = {}
    for key, c in flat.items():
        vadd(acc, parse_key(key), c)
    return acc


def flatten_free(ext, ny_space, strings, ny_slots, rslot, term):
    """Flat vector of a basis term ``(0, r)`` or ``(n, z)`` of a free extension.

    ``ny_slots`` gives the slots of the outer factors of ``ny_space`` terms and
    ``rslot`` the slot of the monoid.
    """
    if term[0] == 0:
        return strings.old(rslot, term[1])
    lslot, rgt = ny_slots
    yslot = (strings.ya, strings.yb)
    pieces = []
    for zi in term[1]:
        l, y, r = ny_space.terms[zi]
        pieces += [(strings.old(lslot, l), lslot), (strings.letter(y), yslot), (strings.old(rgt, r), rgt)]
    flat, _ = strings.chain(pieces)
    return flat
