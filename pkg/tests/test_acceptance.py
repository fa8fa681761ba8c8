"""Acceptance criteria 1 to 12.  Each test records one pass/fail line."""

import json
import random
import subprocess
import sys
import time

from conftest import record

from hocat.amalgam import amalgamate, isomorphic_to_interval
from hocat.certificates import boundary_pushout, build_certificates, injectivity, witness_certificates
from hocat.chain import SegmentH, homology, tensor
from hocat.coherence import NotAnEquivalence, coherent_extension, contractible_instance, interval_instance, zero_arrow_instance
from hocat.enriched import unit_interval
from hocat.filtrations import boundary_filtration
from hocat.homotopy import CERTIFIED, certify_category, homology_table
from hocat.lifting import _BaseChange, _random_complex, random_parallel_lift_instance, random_weak_lift_instance, weak_lift
from hocat.oracle import SetOracle, chain_dimensions, compare_set
from hocat.presentation import build
from hocat.presets import free_generator, homotopy_cell
from hocat.spaces import CHAIN, SET
from hocat.wconstruct import unit_check, w_construction


def _frame(step):
    return step.parts.get("inner", step)


def test_criterion_01_set_oracle(set_suite):
    start = time.perf_counter()
    failures = []
    for k, data in enumerate(set_suite):
        cat = build(data, 6).category
        ok, detail = compare_set(cat, SetOracle(data, 6, seed=0))
        if not ok:
            failures.append((k, detail))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    record(1, ok, f"{len(set_suite) - len(failures)}/{len(set_suite)} set presentations match the oracle at L=6")
    assert not failures
    assert elapsed < 60


def test_criterion_02_chain_colimits(chain_suite):
    start = time.perf_counter()
    mismatches = []
    for k, data in enumerate(chain_suite):
        for p in (1, 2, 3):
            got = build(data, p).category.dims()
            if got != chain_dimensions(data, p):
                mismatches.append((k, p))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    record(2, ok, f"{len(chain_suite)} chain presentations, stages 1..3, {len(mismatches)} dimension mismatches")
    assert not mismatches
    assert elapsed < 300


def test_criterion_03_pq_witnesses(built_suites):
    checked, failed = 0, 0
    for built in built_suites:
        for step in built.steps:
            if _frame(step).case != "01":
                continue
            for cert in witness_certificates(step):
                if cert.name == "P=Q":
                    checked += 1
                    failed += not cert.holds
    record(3, checked > 0 and not failed, f"P=Q witnesses are two-sided inverses on {checked - failed}/{checked} attachments")
    assert checked > 0
    assert not failed


def test_criterion_04_boundary_pushouts(built_suites):
    cases, failed = {"01": 0, "00": 0}, 0
    for built in built_suites:
        for step in built.steps:
            cert = boundary_pushout(step, test_cones=3, seed=0)
            cases[_frame(step).case] += 1
            failed += not cert.holds
    record(4, all(cases.values()) and not failed, f"boundary squares certified: {cases}, failures {failed}")
    assert all(cases.values())
    assert not failed


def test_criterion_05_injectivity(built_suites):
    checked, failed = 0, []
    for k, built in enumerate(built_suites):
        for step in built.steps:
            for cert in injectivity(step, upto=3):
                checked += 1
                if not cert.holds:
                    failed.append((k, cert.name))
    record(5, not failed, f"c0, c1 and both comparison maps injective at stages <= 3: {checked - len(failed)}/{checked}")
    assert not failed


def _filtration_instances():
    def pair(base):
        return [free_generator(base, (0, 1), "f"), free_generator(base, (1, 0), "g")]

    return {
        "set free loop": {"base": "finset", "attachments": pair("finset") + [free_generator("finset", (0, 0), "z")]},
        "set relation": {
            "base": "finset",
            "attachments": pair("finset")
            + [{"slot": [0, 0], "X": {"elements": ["x"]}, "Y": {"elements": ["z", "w"]}, "u": {"x": "z"}, "attach": {"map": {"x": "g f"}}}],
        },
        "chain homotopy at 0": {"base": "chainQ", "attachments": pair("chainQ") + [homotopy_cell((0, 0), "h", {"g f": "1", "": "-1"})]},
        "chain free cell": {"base": "chainQ", "attachments": pair("chainQ") + [free_generator("chainQ", (0, 0), "z", 1)]},
        "chain homotopy at 1": {"base": "chainQ", "attachments": pair("chainQ") + [homotopy_cell((1, 1), "h", {"f g": "1", "": "-1"})]},
    }


def test_criterion_06_boundary_filtration():
    results = {}
    for name, data in _filtration_instances().items():
        filt = boundary_filtration(build(data, 3).steps[-1])
        results[name] = all(c.holds for c in filt.certificates)
    ok = len(results) == 5 and all(results.values())
    record(6, ok, f"D = dK0 certificates on {sum(results.values())}/5 instances at stages <= 3")
    assert ok


def test_criterion_07_w_construction():
    start = time.perf_counter()
    w0 = w_construction(0)
    unit = unit_check(w0)
    homs_ok = {}
    for k in range(4):
        stage = w_construction(k)
        cat = stage.category
        homs_ok[k] = all(
            table.get(0) == 1 and not any(table.get(j) for j in (1, 2, 3))
            for table in (homology_table(space, cat.stage, 3) for space in cat.homs.values())
        )
    top = w_construction(3)
    cert = certify_category(top.category, top.category.stage, 3)
    elapsed = time.perf_counter() - start
    ok = unit and all(homs_ok.values()) and cert.stabilized and cert.verdict == CERTIFIED and elapsed < 300
    record(7, ok, f"W0 unit check {unit}, contractible homs for k<=3: {homs_ok}, stabilized={cert.stabilized}")
    assert unit
    assert all(homs_ok.values())
    assert cert.stabilized and cert.verdict == CERTIFIED


def test_criterion_08_amalgamation():
    iso = {}
    for base in (CHAIN, SET):
        interval = unit_interval(base, 3)
        res = amalgamate(interval, interval, 3)
        iso[base] = isomorphic_to_interval(res.category) and all(c.holds for c in res.certificates)
    H, K = w_construction(2).category, w_construction(3).category
    for cat in (H, K):
        assert certify_category(cat, 3, 2).verdict == CERTIFIED
    res = amalgamate(H, K, 3)
    tables = {slot: homology_table(space, 3, 2) for slot, space in res.amalgam.L.homs.items()}
    contractible = all(t.get(0) == 1 and not t.get(1) for t in tables.values())
    certs = all(c.holds for c in res.certificates)
    ok = all(iso.values()) and contractible and certs
    record(8, ok, f"I*I = I over both bases: {all(iso.values())}; W2*W3 homs H0=1, H1=0 at (3, 2): {contractible}")
    assert all(iso.values())
    assert contractible and certs


def test_criterion_09_coherent_extension():
    exact = {}
    for name, make in (("interval", interval_instance), ("contractible", contractible_instance)):
        cat, x, y, alpha = make()
        ext = coherent_extension(cat, x, y, alpha, k=2)
        exact[name] = ext.exact and (1, 2) in ext.cubes and (0, 3) in ext.cubes
    cat, x, y, alpha = zero_arrow_instance()
    try:
        coherent_extension(cat, x, y, alpha, k=2)
        refused = False
    except NotAnEquivalence:
        refused = True
    ok = all(exact.values()) and refused
    record(9, ok, f"extensions to k=2 with zero residuals: {exact}; non-equivalence refused: {refused}")
    assert all(exact.values())
    assert refused


def test_criterion_10_lifting():
    weak = [random_weak_lift_instance(seed) for seed in range(10)]
    weak_ok = [weak_lift(i.gamma, i.w, i.top, i.bottom).exact for i in weak]
    par_ok = [random_parallel_lift_instance(seed).solve().exact for seed in range(10)]
    ok = all(weak_ok) and all(par_ok)
    record(10, ok, f"weak_lift exact on {sum(weak_ok)}/10, parallel_lift exact on {sum(par_ok)}/10")
    assert ok


def _convolve(a, b):
    out = {}
    for p, x in a.items():
        for r, y in b.items():
            out[p + r] = out.get(p + r, 0) + x * y
    return out


def test_criterion_11_chain_units(built_suites):
    start = time.perf_counter()
    rng = random.Random(0)
    complexes = []
    for _ in range(40):
        c = _random_complex(rng, pieces=4)
        complexes.append(_BaseChange(c, rng).new)
    kunneth = 0
    for a, b in zip(complexes[::2], complexes[1::2]):
        kunneth += homology(tensor(a, b)[0]) == _convolve(homology(a), homology(b))
    dd = True
    for c in complexes:
        c.validate()
    for built in built_suites:
        for space in built.category.homs.values():
            dd = dd and all(not space.apply_d(v) for v in space.d)
    for space in w_construction(3).category.homs.values():
        dd = dd and all(not space.apply_d(v) for v in space.d)
    segment = SegmentH.check()
    elapsed = time.perf_counter() - start
    ok = dd and segment and kunneth == 20 and elapsed < 30
    record(11, ok, f"d o d = 0: {dd}; segment axioms: {segment}; Kunneth on {kunneth}/20 pairs")
    assert dd and segment
    assert kunneth == 20
    assert elapsed < 30


def _suite_report(set_suite, chain_suite):
    out = []
    for data in set_suite + chain_suite:
        built = build(data, 3)
        out.append(
            {
                "dims": {str(k): v for k, v in built.category.dims().items()},
                "certificates": [[c.as_dict() for c in group] for _, group in build_certificates(built, 3, 0)],
            }
        )
    return json.dumps(out, default=str)


def test_criterion_12_determinism(set_suite, chain_suite, tmp_path):
    first = _suite_report(set_suite, chain_suite)
    second = _suite_report(set_suite, chain_suite)
    source = tmp_path / "presentation.json"
    source.write_text(json.dumps(set_suite[0]))
    jobs = [
        ["build", "preset:chain-interval"],
        ["oracle-compare", str(source)],
        ["wconstruct", "--k", "2"],
        ["amalgamate", "w:2", "w:2"],
        ["coherent-extend", "--instance", "contractible"],
    ]
    cli_same = True
    for job in jobs:
        runs = [subprocess.run([sys.executable, "-m", "hocat", *job, "--seed", "0"], capture_output=True, check=False) for _ in range(2)]
        cli_same = cli_same and runs[0].stdout == runs[1].stdout and runs[0].returncode == 0
    ok = first == second and cli_same
    record(12, ok, f"suite reports identical: {first == second}; CLI reports byte-identical over {len(jobs)} jobs: {cli_same}")
    assert first == second
    assert cli_same
