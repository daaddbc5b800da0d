import random
from functools import lru_cache
from statistics import fmean

import pytest

from onteval.errors import CyclicGraphError
from onteval.gold import (
    Alignment,
    MatchPair,
    align_lexicon,
    compare_lexicon,
    lexical_precision_recall,
    string_similarity,
    taxonomic_overlap,
)
from onteval.rdf import build_ontology
from onteval.rdf.terms import OWL_CLASS, RDF_TYPE, RDFS_LABEL, RDFS_SUBCLASS_OF, Literal, Triple, TripleSet

CAND = "http://cand.org/#"
GOLD = "http://gold.org/#"
WORDS = ["aphid", "aphids", "mite", "mites", "thrips", "colour", "color", "weevil", "wevil", "rust", "blight", "moth"]


def levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def sim_oracle(a: str, b: str) -> float:
    a, b = " ".join(a.casefold().split()), " ".join(b.casefold().split())
    return 1.0 if not (a or b) else 1 - levenshtein(a, b) / max(len(a), len(b))


def labelled(ns, labels, edges=()):
    triples = []
    for i, ls in enumerate(labels):
        e = f"{ns}e{i}"
        triples.append(Triple(e, RDF_TYPE, OWL_CLASS))
        triples += [Triple(e, RDFS_LABEL, Literal(l)) for l in ls]
    triples += [Triple(f"{ns}e{a}", RDFS_SUBCLASS_OF, f"{ns}e{b}") for a, b in edges]
    return build_ontology(TripleSet.of(triples))


def greedy_oracle(cand_labels, gold_labels, threshold):
    scored = []
    for i, ca in enumerate(cand_labels):
        for j, gb in enumerate(gold_labels):
            best = max(sim_oracle(x, y) for x in ca for y in gb)
            if best >= threshold:
                scored.append((best, f"{CAND}e{i}", f"{GOLD}e{j}"))
    scored.sort(key=lambda s: (-s[0], s[1], s[2]))
    used, out = set(), set()
    for s, c, g in scored:
        if c not in used and g not in used:
            used |= {c, g}
            out.add((c, g, s))
    return out


def random_labels(rng, max_n=8):
    return [rng.sample(WORDS, rng.randint(1, 2)) for _ in range(rng.randint(0, max_n))]


@pytest.mark.parametrize(
    "a, b, expected",
    [("Aphid", "aphid", 1.0), ("colour", "color", 5 / 6), ("abc", "xyz", 0.0), ("", "", 1.0), (" Spider  Mite", "spider mite", 1.0)],
)
def test_string_similarity_examples(a, b, expected):
    assert string_similarity(a, b) == pytest.approx(expected)


def test_string_similarity_against_recursive_oracle():
    rng = random.Random(1)
    alphabet = "abc "
    for _ in range(300):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        assert string_similarity(a, b) == pytest.approx(sim_oracle(a, b))
        assert string_similarity(a, b) == pytest.approx(string_similarity(b, a))


def test_identical_label_sets_match_fully():
    labels = [["aphid"], ["mite"], ["thrips"]]
    alignment, (p, r, f) = compare_lexicon(labelled(CAND, labels), labelled(GOLD, labels))
    assert all(pair.similarity == 1.0 for pair in alignment.pairs)
    assert (p.value, r.value, f.value) == (1.0, 1.0, 1.0)


def test_empty_gold_leaves_everything_unmatched():
    cand = labelled(CAND, [["aphid"], ["mite"]])
    a = align_lexicon(cand, labelled(GOLD, []))
    assert a.pairs == () and a.unmatched_candidate == {f"{CAND}e0", f"{CAND}e1"}


def test_unlabeled_entities_use_local_name():
    cand = build_ontology(TripleSet.of([Triple(CAND + "SpiderMite", RDF_TYPE, OWL_CLASS)]))
    gold = labelled(GOLD, [["spider mite"]])
    (pair,) = align_lexicon(cand, gold).pairs
    assert pair.similarity == 1.0


def test_threshold_bounds():
    g = labelled(GOLD, [["x"]])
    for bad in (0, -0.1, 1.1):
        with pytest.raises(ValueError):
            align_lexicon(g, g, bad)


@pytest.mark.parametrize("seed", range(100))
def test_greedy_alignment_against_replay(seed):
    rng = random.Random(seed)
    cl, gl = random_labels(rng), random_labels(rng)
    threshold = rng.choice([0.5, 0.8, 0.9, 1.0])
    a = align_lexicon(labelled(CAND, cl), labelled(GOLD, gl), threshold)
    got = {(p.candidate, p.gold, round(p.similarity, 12)) for p in a.pairs}
    assert got == {(c, g, round(s, 12)) for c, g, s in greedy_oracle(cl, gl, threshold)}
    # Pairs plus unmatched partition each side, one use per entity.
    cands = [p.candidate for p in a.pairs]
    golds = [p.gold for p in a.pairs]
    assert len(set(cands)) == len(cands) and len(set(golds)) == len(golds)
    assert set(cands) | a.unmatched_candidate == {f"{CAND}e{i}" for i in range(len(cl))}
    assert not set(cands) & a.unmatched_candidate
    assert set(golds) | a.unmatched_gold == {f"{GOLD}e{j}" for j in range(len(gl))}
    assert all(p.similarity >= threshold for p in a.pairs)


@pytest.mark.parametrize("seed", range(100))
def test_role_swap_transposes_pairs(seed):
    rng = random.Random(seed)
    # Distinct words on each side so no similarity ties are broken differently by role.
    words = rng.sample(WORDS, rng.randint(0, len(WORDS)))
    cl = [[w] for w in words[: len(words) // 2]]
    gl = [[w] for w in words[len(words) // 2 :]]
    sims = [s for s in (sim_oracle(x[0], y[0]) for x in cl for y in gl) if s >= 0.6]
    if len(set(sims)) != len(sims):
        return  # tie-break order depends on which side is the candidate
    a = align_lexicon(labelled(CAND, cl), labelled(GOLD, gl), 0.6)
    b = align_lexicon(labelled(GOLD, gl), labelled(CAND, cl), 0.6)
    assert {(p.candidate, p.gold, p.similarity) for p in a.pairs} == {(p.gold, p.candidate, p.similarity) for p in b.pairs}


@pytest.mark.parametrize("seed", range(100))
def test_threshold_is_antitone(seed):
    rng = random.Random(seed)
    c, g = labelled(CAND, random_labels(rng)), labelled(GOLD, random_labels(rng))
    sizes = [len(align_lexicon(c, g, t).pairs) for t in (0.3, 0.5, 0.7, 0.8, 0.9, 1.0)]
    assert sizes == sorted(sizes, reverse=True)


def _alignment(n):
    pairs = tuple(MatchPair(f"c{i}", f"g{i}", 1.0, ("x", "x")) for i in range(n))
    return Alignment(pairs, 0.8, frozenset(), frozenset())


def test_precision_recall_examples():
    p, r, f = lexical_precision_recall(_alignment(3), 4, 6)
    assert (p.value, r.value) == (0.75, 0.5) and f.value == pytest.approx(0.6)
    assert [m.value for m in lexical_precision_recall(_alignment(5), 5, 5)] == [1.0, 1.0, 1.0]
    assert [m.value for m in lexical_precision_recall(_alignment(0), 4, 6)] == [0, 0, 0]
    assert [m.value for m in lexical_precision_recall(_alignment(0), 0, 0)] == [0, 0, 0]
    with pytest.raises(ValueError):
        lexical_precision_recall(_alignment(3), 2, 6)


def test_precision_recall_bounds():
    rng = random.Random(4)
    for _ in range(500):
        n = rng.randint(0, 10)
        c, g = n + rng.randint(0, 10), n + rng.randint(0, 10)
        p, r, f = (m.value for m in lexical_precision_recall(_alignment(n), c, g))
        assert 0 <= p <= 1 and 0 <= r <= 1 and 0 <= f <= 1
        assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12
        assert (f == 0) == (n == 0)


# ---- taxonomic overlap


def test_isomorphic_chains_overlap_fully():
    labels = [["aphid"], ["insect"], ["animal"]]
    edges = [(0, 1), (1, 2)]
    c, g = labelled(CAND, labels, edges), labelled(GOLD, labels, edges)
    assert taxonomic_overlap(c, g, align_lexicon(c, g)).value == 1.0


def test_disjoint_ancestors_score_zero():
    c = labelled(CAND, [["aphid"], ["insect"], ["pest"]], [(0, 1)])
    g = labelled(GOLD, [["aphid"], ["insect"], ["pest"]], [(0, 2)])
    r = taxonomic_overlap(c, g, align_lexicon(c, g))
    # aphid: {insect} vs {pest} -> 0; insect and pest have no ancestors on either side -> 1
    assert r.value == pytest.approx(2 / 3)


def test_taxonomic_overlap_rejects_cycles():
    c = labelled(CAND, [["a"], ["b"]], [(0, 1), (1, 0)])
    with pytest.raises(CyclicGraphError):
        taxonomic_overlap(c, c, align_lexicon(c, c))


def test_empty_alignment_scores_zero():
    c = labelled(CAND, [["aphid"]])
    g = labelled(GOLD, [["zzz"]])
    assert taxonomic_overlap(c, g, align_lexicon(c, g)).value == 0.0


def _ancestors_oracle(n, edges):
    out = {}
    for s in range(n):
        seen, stack = set(), [b for a, b in edges if a == s]
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack += [b for a, b in edges if a == x]
        out[s] = seen
    return out


def _random_dag(rng, n):
    return {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3}


@pytest.mark.parametrize("seed", range(100))
def test_taxonomic_overlap_against_jaccard_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    words = [f"term{i}" for i in range(n)]
    ce, ge = _random_dag(rng, n), _random_dag(rng, n)
    c = labelled(CAND, [[w] for w in words], ce)
    g = labelled(GOLD, [[w] for w in words], ge)
    a = align_lexicon(c, g, 1.0)
    ca, ga = _ancestors_oracle(n, ce), _ancestors_oracle(n, ge)
    scores = []
    for i in range(n):
        image, target = {("m", x) for x in ca[i]}, {("m", x) for x in ga[i]}
        scores.append(len(image & target) / len(image | target) if image | target else 1.0)
    assert taxonomic_overlap(c, g, a).value == pytest.approx(fmean(scores))
    # Renaming both sides together with the alignment leaves the value unchanged.
    c2 = labelled("http://c2.org/#", [[w] for w in words], ce)
    g2 = labelled("http://g2.org/#", [[w] for w in words], ge)
    assert taxonomic_overlap(c2, g2, align_lexicon(c2, g2, 1.0)).value == pytest.approx(fmean(scores))
