"""Brute-force reference computations working straight from presentation JSON.

Nothing here touches the cell engine.  The set oracle enumerates composable
strings of generator letters of weighted length at most ``L`` and normalises
them by rewriting each letter hit by ``u`` into its attaching word, in random
orders, checking that every order gives the same result.  The chain oracle
forms the graded vector space on formal words of weight at most ``p`` and
quotients by the span of ``w1 (u(x) - attach(x)) w2``.
"""

import random
from fractions import Fraction
from itertools import product


class OracleError(RuntimeError):
    pass


def _words(text):
    if isinstance(text, list):
        return tuple(str(t) for t in text)
    return tuple(t for t in str(text).split() if t)


def _generators(data):
    """Letters ``name -> (source, target, weight, degree)`` and relations per ``X`` element."""
    letters = {}
    relations = []
    chain = data["base"] == "chainQ"
    for k, att in enumerate(data.get("attachments", [])):
        i, j = (int(s) for s in att["slot"])
        amap = att.get("attach", {}).get("map", {})
        if chain:
            ydims = {int(n): int(c) for n, c in att["Y"].get("degrees", {}).items()}
            xdims = {int(n): int(c) for n, c in att.get("X", {"degrees": {}}).get("degrees", {}).items()}
            names = att.get("names") or {}
            ynames = {}
            for n in sorted(ydims):
                given = names.get(str(n)) or names.get(n)
                ynames[n] = [given[r] if given else f"a{k}.{n}.{r}" for r in range(ydims[n])]
            images = []
            for n in sorted(xdims):
                entries = amap.get(str(n), amap.get(n, []))
                for c in range(xdims[n]):
                    combo = {_words(w): Fraction(v) for w, v in entries[c].items()}
                    umat = att.get("u", {}).get(str(n), att.get("u", {}).get(n))
                    uvec = {}
                    if umat:
                        for r, row in enumerate(umat):
                            if Fraction(row[c]):
                                uvec[(ynames[n][r],)] = Fraction(row[c])
                    images.append((n, uvec, combo))
        else:
            ys = [str(y) for y in att["Y"]["elements"]]
            xs = [str(x) for x in att.get("X", {}).get("elements", [])]
            ynames = {0: ys}
            images = [(0, {(str(att["u"][x]),): 1}, {_words(amap[x]): 1}) for x in xs]
        image_weight = 0
        for _, _, combo in images:
            for w in combo:
                image_weight = max(image_weight, sum(letters[a][2] for a in w))
        stage = att.get("attach", {}).get("stage")
        weight = max(1, image_weight if stage is None else int(stage))
        for n, names_n in ynames.items():
            for name in names_n:
                letters[name] = (i, j, weight, n)
        for n, uvec, combo in images:
            relations.append(((i, j), weight, uvec, combo))
    return letters, relations


def enumerate_strings(letters, bound):
    """All composable strings by hom: ``{(s, t): {word: (weight, degree)}}``.

    Words are tuples in composition order; the rightmost letter acts first.
    """
    strings = {}
    frontier = []
    for s in (0, 1):
        strings.setdefault((s, s), {})[()] = (0, 0)
        frontier.append(((), s, s, 0, 0))
    ordered = sorted(letters.items())
    while frontier:
        nxt = []
        for word, src, tgt, w, deg in frontier:
            for name, (i, j, lw, ld) in ordered:
                if i != tgt or w + lw > bound:
                    continue
                new = (name,) + word
                strings.setdefault((src, j), {})[new] = (w + lw, deg + ld)
                nxt.append((new, src, j, w + lw, deg + ld))
        frontier = nxt
    return strings


# --- finite sets ---------------------------------------------------------------------------

class SetOracle:
    def __init__(self, data, bound, seed=0, orders=3):
        if data["base"] != "finset":
            raise OracleError("set oracle needs a finset presentation")
        self.bound = bound
        self.letters, rels = _generators(data)
        self.rewrite = {}
        for _, _, uvec, combo in rels:
            ((y,),) = uvec
            ((word, _),) = combo.items()
            self.rewrite[y] = word
        self.rng = random.Random(seed)
        self.orders = orders
        self.strings = enumerate_strings(self.letters, bound)
        self.confluent = True
        self.homs = {}
        self._nf = {}
        for slot, words in sorted(self.strings.items()):
            forms = set()
            for word in words:
                forms.add(self.normal(word))
            self.homs[slot] = sorted(forms, key=lambda w: (self.weight(w), w))

    def weight(self, word):
        return sum(self.letters[a][2] for a in word)

    def _rewrite_once(self, word, rng):
        spots = [k for k, a in enumerate(word) if a in self.rewrite]
        if not spots:
            return None
        k = rng.choice(spots)
        return word[:k] + self.rewrite[word[k]] + word[k + 1:]

    def normal(self, word):
        """Normal form; random rewrite orders must agree."""
        if word in self._nf:
            return self._nf[word]
        results = set()
        for _ in range(self.orders):
            w = word
            while True:
                nxt = self._rewrite_once(w, self.rng)
                if nxt is None:
                    break
                w = nxt
            results.add(w)
        if len(results) != 1:
            self.confluent = False
        out = min(results)
        self._nf[word] = out
        return out

    def compose(self, g, f):
        """Normal form of ``g o f`` or ``None`` past the bound."""
        if self.weight(g) + self.weight(f) > self.bound:
            return None
        return self.normal(g + f)

    def cardinalities(self):
        return {slot: len(v) for slot, v in self.homs.items()}

    def check_associativity(self, limit=20000):
        checks = 0
        for (a, b), fs in self.homs.items():
            for c in (0, 1):
                for d in (0, 1):
                    for f in fs:
                        for g in self.homs.get((b, c), []):
                            gf = self.compose(g, f)
                            if gf is None:
                                continue
                            for h in self.homs.get((c, d), []):
                                hgf = self.compose(h, gf)
                                hg = self.compose(h, g)
                                if hgf is None or hg is None:
                                    continue
                                checks += 1
                                if self.compose(hg, f) != hgf:
                                    return False
                                if checks > limit:
                                    return True
        return True


def compare_set(cat, oracle):
    """Compare an engine category (built at the oracle bound) with the set oracle.

    Returns ``(ok, details)``; the comparison evaluates oracle words in the
    engine, requiring a bijection on every hom and equal composition tables.
    """
    details = {"cardinalities": {}, "bijective": True, "functorial": True, "confluent": oracle.confluent}
    images = {}
    for slot, forms in oracle.homs.items():
        space = cat.homs[slot]
        n = space.prefix(oracle.bound)
        seen = {}
        for w in forms:
            _, vec = cat.evaluate_word(list(w), start=slot[0])
            (idx,) = vec
            seen[w] = idx
        images[slot] = seen
        details["cardinalities"][f"{slot[0]}->{slot[1]}"] = [len(forms), n]
        if len(set(seen.values())) != len(forms) or len(forms) != n:
            details["bijective"] = False
    for (a, b), fs in oracle.homs.items():
        for c in (0, 1):
            for f in fs:
                for g in oracle.homs.get((b, c), []):
                    gf = oracle.compose(g, f)
                    if gf is None:
                        continue
                    got = cat.compose((b, c), {images[(b, c)][g]: 1}, (a, b), {images[(a, b)][f]: 1})
                    if got != {images[(a, c)][gf]: 1}:
                        details["functorial"] = False
    ok = details["bijective"] and details["functorial"] and details["confluent"]
    return ok, details


# --- chain complexes ---------------------------------------------------------------------

def _rank(rows):
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            c = max(row)
            if c not in pivots:
                inv = 1 / Fraction(row[c])
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            p = pivots[c]
            a = row[c]
            for k, v in p.items():
                x = row.get(k, 0) - a * v
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
    return len(pivots)


def _letter_differentials(data):
    """``name -> {(name',): coefficient}`` from the differentials of the ``Y`` complexes."""
    out = {}
    for k, att in enumerate(data.get("attachments", [])):
        ydims = {int(n): int(c) for n, c in att["Y"].get("degrees", {}).items()}
        names = att.get("names") or {}

        def name(n, r):
            given = names.get(str(n))
            return given[r] if given else f"a{k}.{n}.{r}"

        for n, dim in ydims.items():
            mat = att["Y"].get("d", {}).get(str(n))
            for j in range(dim):
                image = {}
                if mat:
                    for i, row in enumerate(mat):
                        if Fraction(row[j]):
                            image[(name(n - 1, i),)] = Fraction(row[j])
                out[name(n, j)] = image
    return out


def _relation_rows(strings, rels, bound):
    """Spanning rows of ``w1 (u(x) - attach(x)) w2`` keyed by ``(slot, degree)``."""
    rows = {}
    for (i, j), weight, uvec, combo in rels:
        rel = dict(uvec)
        for w, c in combo.items():
            rel[w] = rel.get(w, 0) - c
        rel = {w: c for w, c in rel.items() if c}
        if not rel:
            continue
        for (s1, t1), lefts in strings.items():
            if s1 != j:
                continue
            for (s2, t2), rights in strings.items():
                if t2 != i:
                    continue
                slot = (s2, t1)
                for w1, (lw, _) in lefts.items():
                    for w2, (rw, _) in rights.items():
                        if lw + rw + weight > bound:
                            continue
                        row = {}
                        for w, c in rel.items():
                            full = w1 + w + w2
                            if full in strings[slot]:
                                row[full] = row.get(full, 0) + c
                        row = {w: c for w, c in row.items() if c}
                        if row:
                            deg = strings[slot][next(iter(row))][1]
                            rows.setdefault((slot, deg), []).append(row)
    return rows


def _quotient(data, bound):
    if data["base"] != "chainQ":
        raise OracleError("chain oracle needs a chainQ presentation")
    letters, rels = _generators(data)
    strings = enumerate_strings(letters, bound)
    return letters, strings, _relation_rows(strings, rels, bound)


def _by_degree(words):
    counts = {}
    for _, deg in words.values():
        counts[deg] = counts.get(deg, 0) + 1
    return counts


def chain_dimensions(data, bound):
    """``{(s, t): {degree: dim}}`` of the weight ``<= bound`` part of the built category."""
    _, strings, rows = _quotient(data, bound)
    dims = {slot: {} for slot in product((0, 1), repeat=2)}
    for slot, words in strings.items():
        for deg, cnt in sorted(_by_degree(words).items()):
            dim = cnt - _rank(rows.get((slot, deg), []))
            if dim:
                dims[slot][deg] = dim
    return dims


def _differential(word, letters, ldiff):
    """Leibniz rule on a formal word in composition order."""
    out = {}
    sign = 1
    for k, name in enumerate(word):
        for (image,), c in ldiff.get(name, {}).items():
            new = word[:k] + (image,) + word[k + 1:]
            out[new] = out.get(new, 0) + sign * c
        if letters[name][3] % 2:
            sign = -sign
    return {w: c for w, c in out.items() if c}


def chain_homology(data, bound):
    """``{(s, t): {degree: dim}}`` of the homology of the weight ``<= bound`` part."""
    letters, strings, rows = _quotient(data, bound)
    ldiff = _letter_differentials(data)
    out = {slot: {} for slot in product((0, 1), repeat=2)}
    for slot, words in strings.items():
        counts = _by_degree(words)
        rel_rank = {deg: _rank(rows.get((slot, deg), [])) for deg in counts}
        image_rank = {}
        for deg in counts:
            images = [_differential(w, letters, ldiff) for w, (_, g) in words.items() if g == deg]
            below = rows.get((slot, deg - 1), [])
            image_rank[deg] = _rank(below + [i for i in images if i]) - rel_rank.get(deg - 1, 0)
        for deg, cnt in sorted(counts.items()):
            dim = cnt - rel_rank[deg] - image_rank[deg] - image_rank.get(deg + 1, 0)
            if dim:
                out[slot][deg] = dim
    return out
