"""Presentations: ordered cell attachments starting from the initial category.

JSON layout::

    {"base": "chainQ" | "finset",
     "attachments": [{"slot": [i, j], "X": ..., "Y": ..., "u": ...,
                      "attach": {"stage": p, "map": ...}, "names": ...}]}

Over ``finset`` the objects ``X`` and ``Y`` are ``{"elements": [...]}``,
``u`` maps elements of ``X`` to elements of ``Y`` and ``attach.map`` sends
each element of ``X`` to a word.  The elements of ``Y`` name the new
generators.

Over ``chainQ`` the objects are chain complex JSON, ``u`` maps a degree to a
matrix, and ``attach.map`` maps a degree to one entry per basis element of
``X`` in that degree; an entry is an object ``{word: coefficient}``.
Generators are named by ``names`` (degree to list of names) or
``a<k>.<degree>.<index>`` otherwise.

A word is a space separated string of generator names in composition order
(the rightmost letter acts first); the empty string is an identity and is
only allowed on endo-slots.  ``attach.stage`` is the filtration stage the
attaching map lands in; it becomes the weight of the new generators.  When it
is omitted the least stage containing the image is used.
"""

import json
from dataclasses import dataclass, field

from .cells import Cell, attach
from .chain import ChainComplex, space_of_complex
from .enriched import BeyondStage, initial_category
from .linalg import parse_q
from .spaces import CHAIN, SET, Linear, free_space, vadd

BASE_NAMES = {"chainQ": CHAIN, "finset": SET}
BASE_LABELS = {v: k for k, v in BASE_NAMES.items()}


class PresentationError(ValueError):
    pass


@dataclass
class AttachmentSpec:
    slot: tuple
    X: object
    Y: object
    u: object
    attach_map: object
    stage: int = None
    names: object = None

    def to_json(self, base):
        out = {"slot": list(self.slot)}
        if base == SET:
            out["X"] = {"elements": list(self.X)}
            out["Y"] = {"elements": list(self.Y)}
            out["u"] = dict(self.u)
            out["attach"] = {"map": dict(self.attach_map)}
        else:
            out["X"] = self.X.to_json()
            out["Y"] = self.Y.to_json()
            out["u"] = {str(n): [[str(x) for x in row] for row in m] for n, m in sorted(self.u.items())}
            out["attach"] = {"map": {str(n): [dict(e) for e in entries] for n, entries in sorted(self.attach_map.items())}}
            if self.names:
                out["names"] = {str(n): list(v) for n, v in sorted(self.names.items())}
        if self.stage is not None:
            out["attach"]["stage"] = self.stage
        return out


@dataclass
class Presentation:
    base: str
    attachments: list = field(default_factory=list)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        label = data.get("base")
        if label not in BASE_NAMES:
            raise PresentationError(f"unknown base {label!r}; expected one of {sorted(BASE_NAMES)}")
        base = BASE_NAMES[label]
        specs = []
        for k, entry in enumerate(data.get("attachments", [])):
            try:
                specs.append(_parse_attachment(base, entry))
            except (KeyError, TypeError, ValueError) as exc:
                raise PresentationError(f"attachment {k}: {exc}") from exc
        return cls(base, specs)

    def to_json(self):
        return {"base": BASE_LABELS[self.base], "attachments": [a.to_json(self.base) for a in self.attachments]}


def _parse_attachment(base, entry):
    slot = tuple(int(s) for s in entry["slot"])
    if len(slot) != 2 or any(s not in (0, 1) for s in slot):
        raise ValueError(f"slot must be a pair in {{0,1}}, got {entry['slot']}")
    att = entry.get("attach", {})
    stage = att.get("stage")
    if stage is not None:
        stage = int(stage)
        if stage < 0:
            raise ValueError("attach stage must be nonnegative")
    if base == SET:
        X = [str(x) for x in entry.get("X", {}).get("elements", [])]
        Y = [str(y) for y in entry["Y"]["elements"]]
        u = {str(k): str(v) for k, v in entry.get("u", {}).items()}
        amap = {str(k): _word_text(v) for k, v in att.get("map", {}).items()}
        return AttachmentSpec(slot, X, Y, u, amap, stage)
    X = ChainComplex.from_json(entry.get("X", {"degrees": {}}))
    Y = ChainComplex.from_json(entry["Y"])
    u = {int(n): [[parse_q(x) for x in row] for row in m] for n, m in entry.get("u", {}).items()}
    amap = {}
    for n, entries in att.get("map", {}).items():
        amap[int(n)] = [{_word_text(w): parse_q(c) for w, c in e.items()} for e in entries]
    names = entry.get("names")
    if names is not None:
        names = {int(n): [str(x) for x in v] for n, v in names.items()}
    return AttachmentSpec(slot, X, Y, u, amap, stage, names)


def _word_text(w):
    if isinstance(w, list):
        return " ".join(str(x) for x in w)
    return str(w)


def parse_word(text):
    return [t for t in text.split() if t]


# --- building -------------------------------------------------------------------------------

@dataclass
class Built:
    presentation: Presentation
    stage: int
    category: object
    steps: list
    cells: list


def word_weight(cat, word, letter_weights=None):
    """Sum of the generator weights along ``word``."""
    total = 0
    for name in word:
        if letter_weights and name in letter_weights:
            total += letter_weights[name]
        else:
            slot, vec = cat.letters[name]
            total += cat.homs[slot].weight_of(vec)
    return total


def _evaluate(cat, text, slot):
    word = parse_word(text)
    for name in word:
        if name not in cat.letters:
            raise PresentationError(f"unknown generator {name!r} in word {text!r}")
    if not word:
        if slot[0] != slot[1]:
            raise PresentationError("the empty word is only an identity on an endo-slot")
        return cat.unit(slot[0])
    got, vec = cat.evaluate_word(word)
    if got != tuple(slot):
        raise PresentationError(f"word {text!r} lives in slot {got}, attachment needs {tuple(slot)}")
    return vec


def make_cell(cat, spec, index, letter_weights=None):
    """Turn an attachment spec into a :class:`Cell` against the current category."""
    base, N = cat.base, cat.stage
    slot = spec.slot
    tag = index + 1
    target = cat.homs[slot]
    images = []
    image_weight = 0
    if base == SET:
        xs, ys = list(spec.X), list(spec.Y)
        if len(set(ys)) != len(ys) or len(set(xs)) != len(xs):
            raise PresentationError("duplicate elements")
        for y in ys:
            if y in cat.letters:
                raise PresentationError(f"generator name {y!r} already used")
        for x in xs:
            if x not in spec.u or spec.u[x] not in ys:
                raise PresentationError(f"u is undefined or leaves Y at {x!r}")
        if len({spec.u[x] for x in xs}) != len(xs):
            raise PresentationError("u is not injective, so not a cofibration")
        for x in xs:
            if x not in spec.attach_map:
                raise PresentationError(f"attaching map undefined at {x!r}")
            word = parse_word(spec.attach_map[x])
            try:
                vec = _evaluate(cat, spec.attach_map[x], slot)
            except BeyondStage:
                vec = None
            images.append((vec, word))
            image_weight = max(image_weight, word_weight(cat, word, letter_weights))
        weight = _weight(spec.stage, image_weight, images, target)
        X = free_space(SET, N, [((tag, 0, j), weight, 0, {}) for j in range(len(xs))], "X")
        Y = free_space(SET, N, [((tag, 0, j), weight, 0, {}) for j in range(len(ys))], "Y")
        u = Linear(X, Y, [{ys.index(spec.u[x]): 1} for x in xs]) if X.dim else Linear(X, Y, [])
        attach_vecs = _checked_images(images, weight, X.dim)
        return Cell(slot, X, Y, u, attach_vecs, weight, ys, index, f"cell{index}")

    Xc, Yc = spec.X, spec.Y
    names = []
    for n in Yc.degrees:
        given = (spec.names or {}).get(n)
        if given is not None and len(given) != Yc.dim(n):
            raise PresentationError(f"names in degree {n} do not match the dimension")
        names += [given[j] if given else f"a{index}.{n}.{j}" for j in range(Yc.dim(n))]
    for name in names:
        if name in cat.letters:
            raise PresentationError(f"generator name {name!r} already used")
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator names")
    for n in Xc.degrees:
        entries = spec.attach_map.get(n, [])
        if len(entries) != Xc.dim(n):
            raise PresentationError(f"attaching map needs {Xc.dim(n)} entries in degree {n}")
        for entry in entries:
            acc = {}
            ok = True
            for text, c in entry.items():
                try:
                    vadd(acc, _evaluate(cat, text, slot), c)
                except BeyondStage:
                    ok = False
                image_weight = max(image_weight, word_weight(cat, parse_word(text), letter_weights))
            images.append((acc if ok else None, None))
    weight = _weight(spec.stage, image_weight, images, target)
    X = space_of_complex(Xc, weight, tag, N)
    Y = space_of_complex(Yc, weight, tag, N)
    if X.dim and Y.dim == 0:
        raise PresentationError("u must be injective")
    cols = []
    for i, (t) in enumerate(X.terms):
        _, n, j = t
        mat = spec.u.get(n)
        col = {}
        if mat is not None:
            for r, row in enumerate(mat):
                if row[j]:
                    col[Y.index[(tag, n, r)]] = row[j]
        cols.append(col)
    u = Linear(X, Y, cols)
    if not u.is_chain_map():
        raise PresentationError("u is not a chain map")
    if not u.is_injective():
        raise PresentationError("u is not degreewise injective, so not a cofibration")
    attach_vecs = _checked_images(images, weight, X.dim)
    f = Linear(X, target, attach_vecs)
    if not f.is_chain_map():
        raise PresentationError("attaching map is not a chain map")
    return Cell(slot, X, Y, u, attach_vecs, weight, names, index, f"cell{index}")


def _weight(declared, word_weight, images, target):
    """Declared stage, or the heaviest attaching word; at least 1."""
    if declared is None:
        return max(1, word_weight)
    if declared > target.stage:
        # the cell lies beyond the materialised stage and contributes nothing
        return declared
    for vec, _ in images:
        need = target.weight_of(vec) if vec else 0
        if vec is None or need > declared:
            raise PresentationError(f"attaching map does not land in stage {declared}")
    return max(1, declared)


def _checked_images(images, weight, xdim):
    vecs = []
    for vec, _ in images[:xdim]:
        if vec is None:
            raise PresentationError("attaching map lands beyond the materialised stage")
        vecs.append(vec)
    return vecs


def build(pres, stage):
    """Fold the attachments of ``pres`` over the initial category at ``stage``."""
    if isinstance(pres, dict):
        pres = Presentation.from_json(pres)
    cat = initial_category(pres.base, stage)
    steps, cells = [], []
    letter_weights = {}
    for k, spec in enumerate(pres.attachments):
        cell = make_cell(cat, spec, k, letter_weights)
        letter_weights.update((name, cell.weight) for name in cell.names)
        step = attach(cat, cell, f"K{k + 1}")
        steps.append(step)
        cells.append(cell)
        cat = step.result
    return Built(pres, stage, cat, steps, cells)
