"""Free monoid extensions ``R[u]`` along a map of ``R``-bimodules.

Given a monoid ``R``, bimodules ``NX`` and ``NY``, a bimodule map ``u: NX ->
NY`` and an attaching map ``NX -> R``, the pushout of monoids
``R <- T_R(NX) -> T_R(NY)`` is the colimit of the filtration ``R[u]^(n)``
where ``R[u]^(n)`` is the pushout of ``R[u]^(n-1) <- Y^(n)_- -> Y^(n)``.
Here ``Y^(n)`` is the ``n``-fold tensor ``NY (x)_R ... (x)_R NY`` and
``Y^(n)_-`` is the colimit over the punctured cube of the tensors with some
factors replaced by ``NX``.

Basis terms of ``R[u]`` are ``(0, r)`` for ``r`` in ``R`` and ``(n, z)`` for a
canonical tuple ``z`` of ``NY`` basis indices of length ``n``.
"""

from itertools import combinations

from .spaces import CHAIN, Linear, colimit, present, tensor_over, tensor_vecs, vadd


class Bimodule:
    """A space with left and right actions given on basis elements."""

    def __init__(self, space, left, right):
        self.space = space
        self.left = left
        self.right = right


class FreeExtension:
    def __init__(self, monoid, rmul, nx, ny, u, att, stage, name="R[u]"):
        self.R = monoid
        self.rmul = rmul
        self.nx = nx
        self.ny = ny
        self.u = u
        self.att = att
        self.stage = stage
        self.name = name
        self.base = monoid.base
        self.unit = monoid.unit_index
        self.words = {}
        self.minus = {}
        self.stages = [self._stage_zero()]
        self._build()

    # -- construction -------------------------------------------------------

    def _stage_zero(self):
        r = self.R
        spanning = [((0, i), w, g) for i, (w, g) in enumerate(zip(r.weights, r.degrees))]
        bd = (lambda t: {(0, j): c for j, c in r.d[t[1]].items()}) if self.base == CHAIN else None
        return present(self.base, self.stage, spanning, (), bd, f"{self.name}^(0)")

    def _actions(self, mods):
        acts = []
        for k in range(len(mods) - 1):
            acts.append((self.R, mods[k].right, mods[k + 1].left))
        return acts

    def word_space(self, pattern):
        """``M_1 (x)_R ... (x)_R M_n`` for a pattern of ``'x'``/``'y'`` letters."""
        if pattern not in self.words:
            mods = [self.nx if c == "x" else self.ny for c in pattern]
            self.words[pattern] = tensor_over(
                [m.space for m in mods], self._actions(mods), self.stage, f"{self.name}:{pattern}"
            )
        return self.words[pattern]

    def _max_length(self):
        ys = self.ny.space
        if not ys.dim:
            return 0
        low = min(ys.weights)
        if low <= 0:
            raise ValueError("generator bimodule needs positive weights")
        return self.stage // low

    def _build(self):
        for n in range(1, self._max_length() + 1):
            yn = self.word_space("y" * n)
            if not yn.dim:
                break
            prev = self.stages[-1]
            spanning = [(t, w, g) for t, w, g in zip(prev.terms, prev.weights, prev.degrees)]
            spanning += [((n, z), w, g) for z, w, g in zip(yn.terms, yn.weights, yn.degrees)]
            relations = []
            ym, legs, patterns = self._punctured(n)
            self.minus[n] = (ym, legs, patterns)
            for b in range(ym.dim):
                lhs = self._minus_to_words(ym, b, patterns, yn, n)
                rhs = self._minus_to_previous(ym, b, patterns, n, prev)
                relations.append((lhs, rhs))

            def bd(t, prev=prev, yn=yn, n=n):
                if t[0] == n:
                    return {(n, yn.terms[j]): c for j, c in yn.d[yn.index[t[1]]].items()}
                return {prev.terms[j]: c for j, c in prev.d[prev.index[t]].items()}

            stage = present(
                self.base, self.stage, spanning, relations, bd if self.base == CHAIN else None, f"{self.name}^({n})"
            )
            self.stages.append(stage)
        self.space = self.stages[-1]
        self.space.unit_index = self.space.index.get((0, self.unit))
        self._embeddings()

    def _punctured(self, n):
        """Colimit over nonempty sets ``S`` of positions carrying ``NX``."""
        patterns = []
        for k in range(1, n + 1):
            for s in combinations(range(n), k):
                patterns.append("".join("x" if i in s else "y" for i in range(n)))
        objects = [self.word_space(p) for p in patterns]
        pos = {p: i for i, p in enumerate(patterns)}
        arrows = []
        for p in patterns:
            for i, c in enumerate(p):
                if c != "x":
                    continue
                q = p[:i] + "y" + p[i + 1:]
                if q not in pos:
                    continue
                src, tgt = self.word_space(p), self.word_space(q)
                f = Linear.from_terms(src, tgt, lambda t, i=i: self._apply_u(t, {i}))
                arrows.append((pos[p], pos[q], f))
        if not objects:
            return present(self.base, self.stage, []), [], patterns
        ym, legs = colimit(objects, arrows, self.stage, f"{self.name}:minus{n}")
        return ym, legs, patterns

    def _apply_u(self, term, positions):
        vecs = []
        for i, x in enumerate(term):
            vecs.append(self.u(x) if i in positions else {x: 1})
        return tensor_vecs(vecs)

    def _minus_term(self, ym, b, patterns):
        tag, idx = ym.terms[b]
        # colimit tags keep diagram order when no sources are declared
        pattern = patterns[tag]
        return pattern, self.word_space(pattern).terms[idx]

    def _minus_to_words(self, ym, b, patterns, yn, n):
        pattern, term = self._minus_term(ym, b, patterns)
        xs = {i for i, c in enumerate(pattern) if c == "x"}
        raw = self._apply_u(term, xs)
        vec = yn.reduce(raw)
        return {(n, yn.terms[j]): c for j, c in vec.items()}

    def _minus_to_previous(self, ym, b, patterns, n, prev):
        """Eliminate the leftmost ``NX`` factor through the attaching map."""
        pattern, term = self._minus_term(ym, b, patterns)
        k = pattern.index("x")
        r = self.att(term[k])
        if n == 1:
            return {(0, i): c for i, c in r.items()}
        rest = list(term[:k]) + list(term[k + 1:])
        rest_pattern = pattern[:k] + pattern[k + 1:]
        out = {}
        for ri, rc in r.items():
            if k > 0:
                merged = self.ny.right(term[k - 1], ri)
                slot = k - 1
            else:
                mod = self.nx if pattern[1] == "x" else self.ny
                merged = mod.left(ri, term[1])
                slot = 0
            vecs = []
            for i, x in enumerate(rest):
                v = merged if i == slot else {x: 1}
                if rest_pattern[i] == "x":
                    acc = {}
                    for xi, xc in v.items():
                        vadd(acc, self.u(xi), xc)
                    v = acc
                vecs.append(v)
            vadd(out, tensor_vecs(vecs), rc)
        words = self.word_space("y" * (n - 1))
        vec = words.reduce(out)
        res = {}
        for j, c in vec.items():
            vadd(res, prev.vec((n - 1, words.terms[j])), c)
        return {prev.terms[j]: c for j, c in res.items()}

    def _embeddings(self):
        top = len(self.stages) - 1
        self.emb = [None] * (top + 1)
        self.emb[top] = [{i: 1} for i in range(self.stages[top].dim)]
        for m in range(top - 1, -1, -1):
            lo, hi = self.stages[m], self.stages[m + 1]
            cols = []
            for t in lo.terms:
                acc = {}
                for j, c in hi.vec(t).items():
                    vadd(acc, self.emb[m + 1][j], c)
                cols.append(acc)
            self.emb[m] = cols

    # -- element access -------------------------------------------------------

    def r_vec(self, r):
        """Image of basis element ``r`` of ``R``."""
        acc = {}
        for j, c in self.stages[0].vec((0, r)).items():
            vadd(acc, self.emb[0][j], c)
        return acc

    def word_vec(self, z):
        """Image of the word ``z`` (a tuple of ``NY`` basis indices)."""
        if not z:
            return self.r_vec(self.unit)
        n = len(z)
        if n >= len(self.stages):
            return None
        words = self.word_space("y" * n)
        if z not in words.spanning_terms():
            return None
        acc = {}
        for j, c in words.vec(z).items():
            for i, x in self.stages[n].vec((n, words.terms[j])).items():
                vadd(acc, self.emb[n][i], c * x)
        return acc

    def stage_inclusion(self, m):
        """``R[u]^(m) -> R[u]`` as a linear map."""
        return Linear(self.stages[m], self.space, self.emb[m])

    def mul_basis(self, a, b):
        """Product of two basis elements of ``R[u]``."""
        ta, tb = self.space.terms[a], self.space.terms[b]
        if ta[0] == 0 and tb[0] == 0:
            acc = {}
            for r, c in self.rmul(ta[1], tb[1]).items():
                vadd(acc, self.r_vec(r), c)
            return acc
        if ta[0] == 0:
            z = tb[1]
            return self._words_from(tensor_vecs([self.ny.left(ta[1], z[0])] + [{x: 1} for x in z[1:]]))
        if tb[0] == 0:
            z = ta[1]
            return self._words_from(tensor_vecs([{x: 1} for x in z[:-1]] + [self.ny.right(z[-1], tb[1])]))
        return self.word_vec(ta[1] + tb[1])

    def _words_from(self, raw):
        acc = {}
        for z, c in raw.items():
            v = self.word_vec(z)
            if v is None:
                return None
            vadd(acc, v, c)
        return acc
