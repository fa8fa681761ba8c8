"""Command line front end.

Every command produces one report with a fixed schema tag, the tool version,
an echo of the configuration and the verdicts of all certificates.  Numbers
are integers or ``"p/q"`` strings, so reports are byte-identical across runs.

Inputs are presentation JSON files or named sources:

``preset:arrow[:base]``, ``preset:loop[:base]``, ``preset:chain-interval``,
``preset:set-interval-attempt``, ``preset:interval[:base]`` and ``w:K`` for
the ``K``-th stage of the cubical resolution.
"""

import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from . import __version__, oracle, presets
from .amalgam import amalgamate, isomorphic_to_interval
from .base import BudgetExceeded, DEFAULT_BUDGET, budget
from .certificates import build_certificates
from .coherence import INSTANCES, NotAnEquivalence, coherent_extension
from .enriched import unit_interval
from .homotopy import certify_category, check_interval, functor_to_terminal, homology_table, is_dwyer_kan, pi0
from .lifting import LiftingError
from .linalg import rational_str
from .presentation import BASE_LABELS, BASE_NAMES, build
from .spaces import CHAIN
from .wconstruct import WBoundError, unit_check, w_construction, w_presentation

SCHEMA = "hocat/1"
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULTS = {"stage": 3, "degree_bound": 4, "word_bound": 6, "budget": DEFAULT_BUDGET, "seed": 0}


class UsageFailure(ValueError):
    """Bad input or configuration; reported with exit code 2."""


@dataclass
class JobConfig:
    command: str
    inputs: list = field(default_factory=list)
    stage: int = None
    degree_bound: int = 4
    word_bound: int = 6
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    format: str = "json"
    options: dict = field(default_factory=dict)

    @property
    def p(self):
        return DEFAULTS["stage"] if self.stage is None else self.stage

    def echo(self):
        out = asdict(self)
        out.pop("format")
        out["stage"] = self.p
        return out


# --- exact serialisation ----------------------------------------------------------------------

def exact(obj):
    """Make ``obj`` JSON-ready; fractions become ``"p/q"`` and floats are refused."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, float):
        raise TypeError("floating point value in a report")
    if isinstance(obj, dict):
        return {str(k): exact(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [exact(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return exact(obj.as_dict())
    return str(obj)


def render_text(report, indent=0):
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict) and value:
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.extend(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value)}")
    return lines


def serialise(report, fmt):
    if fmt == "text":
        return "\n".join(render_text(report)) + "\n"
    return json.dumps(report, indent=2) + "\n"


# --- sources ----------------------------------------------------------------------------------

@dataclass
class Source:
    label: str
    presentation: dict = None
    category: object = None

    def build(self, stage):
        if self.presentation is None:
            return None
        return build(self.presentation, stage)

    def category_at(self, stage):
        if self.category is not None:
            return self.category(stage)
        return self.build(stage).category


def load_source(spec):
    if spec.startswith("preset:"):
        name, _, base = spec[len("preset:"):].partition(":")
        base = base or None
        makers = {
            "arrow": lambda: presets.arrow(base or "finset"),
            "loop": lambda: presets.one_loop(base or "finset"),
            "chain-interval": presets.chain_interval,
            "set-interval-attempt": presets.set_interval_attempt,
        }
        if name == "interval":
            if (base or "chainQ") not in BASE_NAMES:
                raise UsageFailure(f"unknown base {base!r}")
            kind = BASE_NAMES[base or "chainQ"]
            return Source(spec, category=lambda stage: unit_interval(kind, stage))
        if name not in makers:
            raise UsageFailure(f"unknown preset {name!r}")
        return Source(spec, makers[name]())
    if spec.startswith("w:"):
        try:
            k = int(spec[2:])
        except ValueError as err:
            raise UsageFailure(f"bad W stage {spec!r}") from err
        return Source(spec, w_presentation(k))
    path = Path(spec)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise UsageFailure(f"cannot read presentation {spec}: {err}") from err
    return Source(spec, data)


def _inputs(cfg, count):
    if len(cfg.inputs) != count:
        raise UsageFailure(f"{cfg.command} expects {count} input(s), got {len(cfg.inputs)}")
    return [load_source(s) for s in cfg.inputs]


def _dims(cat, p=None):
    if cat.base == CHAIN:
        return {f"{s}->{t}": dims for (s, t), dims in sorted(cat.dims(p).items())}
    return {f"{s}->{t}": space.prefix(cat.stage if p is None else p) for (s, t), space in sorted(cat.homs.items())}


def _certs(certs):
    return [c.as_dict() for c in certs]


def _verdict_of(certs):
    return "OK" if all(c["holds"] for c in certs) else "FAILED"


# --- commands ---------------------------------------------------------------------------------

def cmd_build(cfg):
    (src,) = _inputs(cfg, 1)
    if src.presentation is None:
        raise UsageFailure("build needs a presentation")
    built = src.build(cfg.p)
    cat = built.category
    certs = []
    for k, group in build_certificates(built, 3, cfg.seed):
        certs += [{"attachment": k, **c.as_dict()} for c in group]
    result = {
        "base": BASE_LABELS[cat.base],
        "homs": _dims(cat),
        "by_stage": {str(q): _dims(cat, q) for q in range(cfg.p + 1)},
        "letters": {name: {"slot": list(slot), "built": vec is not None} for name, (slot, vec) in sorted(cat.letters.items())},
    }
    return result, certs, _verdict_of(certs)


def cmd_oracle_compare(cfg):
    (src,) = _inputs(cfg, 1)
    data = src.presentation
    if data is None:
        raise UsageFailure("oracle-compare needs a presentation")
    if data["base"] == "finset":
        bound = cfg.word_bound
        cat = src.build(bound).category
        reference = oracle.SetOracle(data, bound, cfg.seed)
        ok, detail = oracle.compare_set(cat, reference)
        result = {"base": "finset", "word_bound": bound, **detail}
    else:
        cat = src.build(cfg.p).category
        expected = oracle.chain_dimensions(data, cfg.p)
        got = cat.dims(cfg.p)
        table = {f"{s}->{t}": {"oracle": expected[(s, t)], "engine": got[(s, t)]} for (s, t) in sorted(got)}
        ok = all(v["oracle"] == v["engine"] for v in table.values())
        result = {"base": "chainQ", "stage": cfg.p, "dimensions": table}
    certs = [{"name": "engine equals oracle", "holds": ok}]
    return result, certs, "AGREE" if ok else "FAILED"


def cmd_check_interval(cfg):
    (src,) = _inputs(cfg, 1)
    if src.presentation is not None:
        cert = check_interval(src.presentation, cfg.p, cfg.degree_bound)
    else:
        cert = certify_category(src.category_at(cfg.p), cfg.p, cfg.degree_bound)
    return cert.as_dict(), [], cert.verdict


def cmd_amalgamate(cfg):
    first, second = _inputs(cfg, 2)
    H, K = first.category_at(cfg.p), second.category_at(cfg.p)
    res = amalgamate(H, K, cfg.p, 3, cfg.seed)
    L = res.amalgam.L
    result = {"L": _dims(L), "H*K": _dims(res.category), "H*K is I": isomorphic_to_interval(res.category)}
    if L.base == CHAIN:
        result["homology"] = {
            f"{s}->{t}": homology_table(space, cfg.p, cfg.degree_bound) for (s, t), space in sorted(L.homs.items())
        }
    certs = _certs(res.certificates)
    return result, certs, _verdict_of(certs)


def cmd_wconstruct(cfg):
    k = cfg.options.get("k", 1)
    try:
        stage = w_construction(k, bound=cfg.options.get("k_bound", 4), stage=cfg.stage)
    except WBoundError as err:
        raise UsageFailure(str(err)) from err
    p = cfg.stage = stage.built.stage
    interval = certify_category(stage.category, p, cfg.degree_bound)
    result = {
        "k": k,
        "stage": p,
        "homs": stage.dims(),
        "W0(0,1) is the unit": unit_check(stage),
        "interval": interval.as_dict(),
    }
    certs = _certs(stage.certificates)
    return result, certs, _verdict_of(certs)


def cmd_pi0(cfg):
    (src,) = _inputs(cfg, 1)
    P = pi0(src.category_at(cfg.p), cfg.p)
    certs = [{"name": "pi0 is a category", "holds": P.check()}]
    return P.as_dict(), certs, _verdict_of(certs)


def cmd_dk_check(cfg):
    (src,) = _inputs(cfg, 1)
    F = functor_to_terminal(src.category_at(cfg.p))
    verdict = is_dwyer_kan(F, cfg.p, cfg.degree_bound, min(cfg.budget, 10**4))
    label = {True: "DK-EQUIVALENCE", False: "FAILED", None: "UNKNOWN"}[verdict.holds]
    return {"functor": "to the terminal category", **verdict.as_dict()}, [], label


def cmd_coherent_extend(cfg):
    k = cfg.options.get("k", 2)
    if cfg.inputs:
        (src,) = _inputs(cfg, 1)
        cat = src.category_at(cfg.p)
        name = cfg.options.get("alpha")
        if name not in cat.letters or cat.letters[name][1] is None:
            raise UsageFailure(f"--alpha must name a built generator, got {name!r}")
        (x, y), alpha = cat.letters[name]
        label = f"{src.label}:{name}"
    else:
        label = cfg.options.get("instance") or "contractible"
        if label not in INSTANCES:
            raise UsageFailure(f"unknown instance {label!r}")
        cat, x, y, alpha = INSTANCES[label]()
    try:
        ext = coherent_extension(cat, x, y, alpha, k, min(cfg.budget, 10**4))
    except NotAnEquivalence as err:
        return {"instance": label, "k": k, "reason": str(err)}, [], "REFUSED"
    except LiftingError as err:
        return {"instance": label, "k": k, "reason": str(err)}, [], "FAILED"
    certs = [{"name": name, "holds": value == 0} for name, value in ext.residuals.items()]
    return {"instance": label, **ext.as_dict()}, certs, "EXTENDED" if ext.exact else "FAILED"


COMMANDS = {
    "build": cmd_build,
    "oracle-compare": cmd_oracle_compare,
    "check-interval": cmd_check_interval,
    "amalgamate": cmd_amalgamate,
    "wconstruct": cmd_wconstruct,
    "pi0": cmd_pi0,
    "dk-check": cmd_dk_check,
    "coherent-extend": cmd_coherent_extend,
}
FAILING = {"FAILED", "REFUSED"}


def run(cfg):
    """Execute one job; returns ``(exit code, report)``."""
    report = {"schema": SCHEMA, "version": __version__, "command": cfg.command}
    try:
        with budget(cfg.budget):
            result, certs, verdict = COMMANDS[cfg.command](cfg)
    except (UsageFailure, BudgetExceeded) as err:
        report.update({"config": exact(cfg.echo()), "verdict": "ERROR", "error": f"{type(err).__name__}: {err}"})
        return EXIT_USAGE, report
    report.update({"config": cfg.echo(), "verdict": verdict, "result": result, "certificates": certs})
    code = EXIT_FAILED if verdict in FAILING else EXIT_OK
    return code, exact(report)


# --- click wiring -----------------------------------------------------------------------------

def job_options(func):
    count = click.IntRange(min=0)
    options = [
        click.option("--stage", type=count, default=None, help="Stage bound p (default 3)."),
        click.option("--degree-bound", type=count, default=DEFAULTS["degree_bound"], show_default=True),
        click.option("--word-bound", type=count, default=DEFAULTS["word_bound"], show_default=True),
        click.option("--budget", "budget_", type=count, default=DEFAULTS["budget"], show_default=True),
        click.option("--seed", type=int, default=DEFAULTS["seed"], show_default=True),
        click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _dispatch(command, inputs, stage, degree_bound, word_bound, budget_, seed, fmt, out, **options):
    cfg = JobConfig(command, list(inputs), stage, degree_bound, word_bound, budget_, seed, fmt, options)
    code, report = run(cfg)
    text = serialise(report, fmt)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    if code == EXIT_USAGE:
        click.echo(report.get("error", "error"), err=True)
    sys.exit(code)


@click.group()
@click.version_option(__version__, prog_name="hocat")
def main():
    """Finitely presented enriched categories: build, certify and compare."""


def _single_input(name, help_text):
    @main.command(name, help=help_text)
    @click.argument("source")
    @job_options
    def command(source, **kw):
        _dispatch(name, [source], **kw)

    return command


_single_input("build", "Build a presentation and certify every attachment.")
_single_input("oracle-compare", "Compare the cell engine with the brute-force oracle.")
_single_input("check-interval", "Certify a two-object category as an interval up to (stage, degree).")
_single_input("pi0", "The homotopy category at the stage bound.")
_single_input("dk-check", "Decide whether the functor to the terminal category is a Dwyer-Kan equivalence.")


@main.command("amalgamate", help="Glue two intervals along an object and certify the hom formulas.")
@click.argument("first")
@click.argument("second")
@job_options
def amalgamate_command(first, second, **kw):
    _dispatch("amalgamate", [first, second], **kw)


@main.command("wconstruct", help="Build the stage W_k of the cubical resolution.")
@click.option("--k", type=click.IntRange(min=0), default=1, show_default=True)
@job_options
def wconstruct_command(k, **kw):
    _dispatch("wconstruct", [], k=k, **kw)


@main.command("coherent-extend", help="Extend a homotopy equivalence over W_k.")
@click.argument("source", required=False)
@click.option("--k", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--alpha", default=None, help="Generator name of the arrow when SOURCE is given.")
@click.option("--instance", type=click.Choice(["interval", "contractible", "zero-arrow"]), default=None)
@job_options
def coherent_extend_command(source, k, alpha, instance, **kw):
    _dispatch("coherent-extend", [source] if source else [], k=k, alpha=alpha, instance=instance, **kw)


if __name__ == "__main__":
    main()
