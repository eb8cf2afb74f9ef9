"""Exit criteria, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from credimatch.cli import main
from credimatch.combination import CombinationRule, combine_all, conflict, conjunctive, dempster, disjunctive
from credimatch.decision import DecisionConfig, betp, decide_min_distance, jousselme_distance
from credimatch.evidence import bel, frame_new, mass_new, pl, vacuous
from credimatch.formats import read_catalog, read_scores
from credimatch.pipeline import EntityCatalog, PipelineConfig, run_pipeline
from credimatch.similarity import hamming_sim, jaro_sim, levenshtein_sim

from . import oracles
from .conftest import random_mass

TWO_SOURCE_FUSED = {"θ1": 0.3478, "θ2": 0.1304, "θ2|θ3": 0.1739, "*": 0.3478}
DISTANCES = {"θ1": 0.537, "θ2": 0.647, "θ3": 0.741, "θ1|θ2": 0.472, "θ1|θ3": 0.536, "θ2|θ3": 0.529}
MEMBER_FUSED = {"Conference_fees": 0.2849, "Conference": 0.5853, "*": 0.1298}


def member_bbas(frame):
    scores = [("Conference_fees", 0.687), ("Conference", 0.516), ("Conference", 0.625)]
    return [mass_new(frame, [(frame.singleton(t), s), (frame.full, 1 - s)]) for t, s in scores]


@pytest.mark.criterion("AC1 two-source Dempster fusion (5e-5, < 1 ms)")
def test_ac1_two_source_fusion(bba1, bba2):
    combined = dempster(bba1, bba2)
    got = combined.to_labels()
    assert got.keys() == TWO_SOURCE_FUSED.keys()
    for k, v in TWO_SOURCE_FUSED.items():
        assert abs(got[k] - v) <= 5e-5, k
    runs = []
    for _ in range(200):
        t0 = time.perf_counter()
        dempster(bba1, bba2)
        runs.append(time.perf_counter() - t0)
    assert sorted(runs)[len(runs) // 2] < 1e-3


@pytest.mark.criterion("AC2 six candidate distances (1e-3) and choice of θ1∪θ2")
def test_ac2_distance_table(theta3, combined):
    out = decide_min_distance(combined, DecisionConfig(max_cardinality=2))
    table = {theta3.format(x): d for x, d in out.score_table}
    assert table.keys() == DISTANCES.keys()
    for k, v in DISTANCES.items():
        assert abs(table[k] - v) <= 1e-3, k
    assert theta3.format(out.chosen) == "θ1|θ2"


@pytest.mark.criterion("AC3 three-source Dempster fusion (5e-5, any frame size)")
def test_ac3_three_matcher_fusion():
    for size in (2, 3, 5, 10, 32, 64):
        frame = frame_new(["Conference_fees", "Conference", *[f"extra{i}" for i in range(size - 2)]])
        got = combine_all(CombinationRule.DEMPSTER, member_bbas(frame)).to_labels()
        assert got.keys() == MEMBER_FUSED.keys()
        for k, v in MEMBER_FUSED.items():
            assert abs(got[k] - v) <= 5e-5, (size, k)


@pytest.mark.criterion("AC4 ConferenceMember decided {Conference_fees, Conference} at 0.52 ± 0.02 on 10 targets")
def test_ac4_member_decision(data_dir):
    # the reference frame size is unknown; the replay fixture yields ten
    # targets, and candidates are restricted to pairs
    c1 = read_catalog(data_dir / "conference_source.txt")
    c2 = read_catalog(data_dir / "conference_target.txt")
    config = PipelineConfig(decision=DecisionConfig(min_cardinality=2, max_cardinality=2))
    doc = run_pipeline(c1, c2, config, records=read_scores(data_dir / "conference_scores.json"))
    assert len(doc.frame) == 10
    cell = doc.cell("ConferenceMember")
    assert set(cell.decided) == {"Conference_fees", "Conference"}
    assert abs(cell.distance - 0.52) <= 0.02


@pytest.mark.criterion("AC5 name similarities (Levenshtein, Hamming; Jaro discrepancy documented)")
def test_ac5_string_scores():
    assert abs(levenshtein_sim("ConferenceMember", "Conference_fees") - 0.687) <= 5e-4
    assert levenshtein_sim("ConferenceMember", "Conference_fees") == 0.6875
    assert hamming_sim("ConferenceMember", "Conference") == 0.625
    jaro = jaro_sim("ConferenceMember", "Conference")
    assert jaro == pytest.approx(0.875, abs=1e-12)
    # the reference score 0.516 is not produced by the standard formula
    assert abs(jaro - 0.516) > 0.3


def _random_pairs(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        frame = frame_new([f"h{i}" for i in range(int(rng.integers(1, 7)))])
        yield frame, random_mass(rng, frame), random_mass(rng, frame)


@pytest.mark.criterion("AC6 rules, bel/pl/BetP, Jousselme equal dense oracle on 200 pairs (1e-12)")
def test_ac6_oracle_equivalence():
    tol = 1e-12
    for frame, a, b in _random_pairs(200, seed=6):
        subsets = oracles.power_set(len(frame))
        va, vb = oracles.dense(a, subsets), oracles.dense(b, subsets)
        assert np.abs(oracles.dense(conjunctive(a, b), subsets) - oracles.conjunctive(va, vb, subsets)).max() <= tol
        assert np.abs(oracles.dense(disjunctive(a, b), subsets) - oracles.disjunctive(va, vb, subsets)).max() <= tol
        if conflict(a, b) < 1 - 1e-12:
            assert np.abs(oracles.dense(dempster(a, b), subsets) - oracles.dempster(va, vb, subsets)).max() <= tol
        for mask, s in zip(range(frame.full + 1), (oracles.to_set(k) for k in range(frame.full + 1))):
            assert abs(bel(a, mask) - oracles.bel(va, subsets, s)) <= tol
            assert abs(pl(a, mask) - oracles.pl(va, subsets, s)) <= tol
        for i, x in enumerate(frame.singletons()):
            assert abs(betp(a, x) - oracles.betp(va, subsets, i)) <= tol
        matrix = oracles.jaccard_matrix(subsets)
        assert abs(jousselme_distance(a, b) - oracles.jousselme(va, vb, matrix)) <= tol


@pytest.mark.criterion("AC7 normalization, bel<=pl, metric axioms, vacuous identity, commutativity/associativity")
def test_ac7_properties():
    rng = np.random.default_rng(7)
    for frame, a, b in _random_pairs(200, seed=70):
        for rule in (conjunctive, disjunctive):
            assert abs(math.fsum(v for _, v in rule(a, b).items()) - 1) <= 1e-9
        if conflict(a, b) < 1 - 1e-12:
            assert abs(math.fsum(v for _, v in dempster(a, b).items()) - 1) <= 1e-9
        assert conjunctive(a, vacuous(frame)).isclose(a, 1e-12)
        assert dempster(a, vacuous(frame)).isclose(a, 1e-12)
        assert conjunctive(a, b).isclose(conjunctive(b, a), 1e-12)
        c = random_mass(rng, frame)
        assert conjunctive(conjunctive(a, b), c).isclose(conjunctive(a, conjunctive(b, c)), 1e-12)

    for frame, m, _ in _random_pairs(1000, seed=71):
        subset = int(rng.integers(0, frame.full + 1))
        assert bel(m, subset) <= pl(m, subset) + 1e-12

    for frame, a, b in _random_pairs(200, seed=72):
        c = random_mass(rng, frame)
        ab = jousselme_distance(a, b)
        assert ab == jousselme_distance(b, a)
        assert jousselme_distance(a, a) == 0.0
        assert 0.0 <= ab <= 1.0 + 1e-9
        assert jousselme_distance(a, c) <= ab + jousselme_distance(b, c) + 1e-9


def _match_json(capsys, source, target, scores, *extra):
    code = main(["match", "--source", str(source), "--target", str(target), "--scores", str(scores), *extra])
    out = capsys.readouterr().out
    assert code == 0
    return out


@pytest.mark.criterion("AC8 byte-identical match output; target order changes nothing (1e-12)")
def test_ac8_determinism(capsys, data_dir, tmp_path):
    source, target = data_dir / "conference_source.txt", data_dir / "conference_target.txt"
    scores = data_dir / "conference_scores.json"
    first = _match_json(capsys, source, target, scores)
    assert first == _match_json(capsys, source, target, scores)
    assert first == _match_json(capsys, source, target, scores, "--workers", "3")

    labels = read_catalog(target).entities
    for seed in range(5):
        shuffled = list(labels)
        random.Random(seed).shuffle(shuffled)
        other = tmp_path / "conference_target.txt"
        other.write_text("\n".join(shuffled) + "\n", encoding="utf-8")
        for extra in ([], ["--kmin", "2"]):
            a = json.loads(_match_json(capsys, source, target, scores, *extra))
            b = json.loads(_match_json(capsys, source, other, scores, *extra))
            assert [(c["source"], set(c["decided"])) for c in a["cells"]] == [
                (c["source"], set(c["decided"])) for c in b["cells"]
            ]
            for x, y in zip(a["cells"], b["cells"]):
                assert abs(x["distance"] - y["distance"]) <= 1e-12

    # unrounded distances, same check at the library level
    c1 = read_catalog(source)
    c2 = read_catalog(target)
    records = read_scores(scores)
    base = run_pipeline(c1, c2, PipelineConfig(), records=records)
    flipped = run_pipeline(c1, EntityCatalog(c2.ontology_id, tuple(reversed(labels))), PipelineConfig(), records=records)
    for x, y in zip(base.cells, flipped.cells):
        assert set(x.decided) == set(y.decided)
        assert abs(x.distance - y.distance) <= 1e-12
