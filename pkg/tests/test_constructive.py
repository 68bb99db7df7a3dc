import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmatch.conditions import admissible_side_pairs, check_main_condition
from rmatch.constructive import (
    CASES,
    AugmentationTrace,
    augment_near_perfect,
    build_near_perfect,
    contract_to_tripartite,
    decontract_matching,
    find_perfect_matching,
    pivot_guarantee,
    reduce_to_tripartite,
    solve,
    verify_solution_text,
)
from rmatch.errors import ConditionViolated, HypothesisViolated, InvalidMatching, NothingToContract
from rmatch.generators import gen_complete, gen_random
from rmatch.hypergraph import Hypergraph, validate_matching
from rmatch.oracle import find_perfect, has_perfect_matching, max_matching

from conftest import all_near_perfect


def _free(h, matching):
    return tuple(min(set(range(h.n)) - {e[s] for e in matching}) for s in range(h.r))


# -- contraction -------------------------------------------------------------


def test_contract_complete():
    image, cmap = contract_to_tripartite(gen_complete(4, 2))
    assert image == gen_complete(3, 2)
    assert cmap.F == [(0, 0), (1, 1)]


def test_contract_single_edge():
    image, _ = contract_to_tripartite(Hypergraph(4, 2, [(0, 0, 0, 0)]))
    assert image.edges == ((0, 0, 0),)


def test_contract_rejects_small_r():
    with pytest.raises(NothingToContract):
        contract_to_tripartite(gen_complete(3, 2))


def test_contract_round_trip():
    h = gen_random(5, 3, 0.6, 3)
    image, cmap = contract_to_tripartite(h)
    for e in image.edges:
        assert cmap.expand(e) in h.edge_set
    for e in h.edges:
        middle = e[1:-1]
        if len(set(middle)) == 1:
            assert (e[0], middle[0], e[-1]) in image.edge_set


def test_decontract():
    _, cmap = contract_to_tripartite(gen_complete(4, 2))
    assert decontract_matching([(0, 0, 0), (1, 1, 1)], cmap) == [(0, 0, 0, 0), (1, 1, 1, 1)]
    _, cmap1 = contract_to_tripartite(gen_complete(4, 1))
    assert decontract_matching([(0, 0, 0)], cmap1) == [(0, 0, 0, 0)]
    with pytest.raises(InvalidMatching):
        decontract_matching([(0, 0, 0)], cmap)


def test_decontract_every_perfect_matching_of_image():
    h = gen_random(5, 3, 0.8, 21)
    image, cmap = contract_to_tripartite(h)
    for combo in itertools.combinations(image.edges, 3):
        if validate_matching(image, combo).perfect:
            assert validate_matching(h, decontract_matching(combo, cmap)).perfect


# -- near-perfect ------------------------------------------------------------


def test_build_near_perfect_small():
    m, un = build_near_perfect(gen_complete(3, 2))
    assert m == [(0, 0, 0)] and un == (1, 1, 1)
    m, un = build_near_perfect(gen_complete(3, 1))
    assert m == [] and un == (0, 0, 0)


def test_build_near_perfect_random_n5():
    found = 0
    for seed in range(200):
        h = gen_random(3, 5, 0.85, seed)
        if not check_main_condition(h, 0, 2).holds:
            continue
        m, un = build_near_perfect(h)
        assert len(m) == 4 and validate_matching(h, m).valid
        assert max_matching(h).max_matching_size >= 4
        assert all(all(e[s] != un[s] for e in m) for s in range(3))
        found += 1
    assert found >= 10


# -- augmentation ------------------------------------------------------------


def test_augment_complete_direct_insert():
    h = gen_complete(3, 2)
    pm, trace = augment_near_perfect(h, [(0, 0, 0)], (1, 1, 1))
    assert pm == [(0, 0, 0), (1, 1, 1)]
    assert trace.case == "Case1" and trace.removed == [] and trace.added == [(1, 1, 1)]


def test_augment_direct_insert_small_instance():
    h = Hypergraph(3, 2, [(0, 0, 0), (1, 1, 1), (0, 1, 1), (1, 0, 0)])
    pm, _ = augment_near_perfect(h, [(0, 1, 1)], (1, 0, 0))
    assert pm == [(0, 1, 1), (1, 0, 0)]


# (input matching, unmatched triple) -> (case, trace line); instance in tests/data
FROZEN = [
    ([(0, 0, 0), (1, 1, 1), (3, 3, 3)], (2, 2, 2), "CASE Case2b w=0 -0,0,0 -1,1,1 +0,1,1 +1,0,2 +2,2,0"),
    ([(0, 0, 0), (1, 2, 2), (2, 3, 3)], (3, 1, 1), "CASE Case2a w=0 -0,0,0 +0,0,1 +3,1,0"),
    ([(0, 1, 1), (2, 3, 2), (3, 2, 3)], (1, 0, 0), "CASE Case3Direct w=0 -0,1,1 -2,3,2 +0,3,0 +1,0,2 +2,1,1"),
    (
        [(0, 1, 1), (2, 2, 3), (3, 3, 2)],
        (1, 0, 0),
        "CASE Case3Recount w=0 -0,1,1 -2,2,3 +0,0,3 +1,2,0 +2,1,1 @1,0,3",
    ),
]


@pytest.mark.parametrize("matching,unmatched,line", FROZEN)
def test_exchange_cases_on_frozen_instance(exchange_instance, matching, unmatched, line):
    h = exchange_instance
    assert check_main_condition(h, 0, 2).holds
    assert has_perfect_matching(h)
    assert tuple(unmatched) not in h.edge_set
    pm, trace = augment_near_perfect(h, matching, unmatched)
    assert trace.to_line() == line
    assert trace.w != unmatched[0]
    assert validate_matching(h, pm).perfect
    assert trace.replay(matching) == pm
    assert AugmentationTrace.from_line(line) == trace


def test_case3_inner_edge(exchange_instance):
    matching, unmatched, _ = FROZEN[3]
    _, trace = augment_near_perfect(exchange_instance, matching, unmatched)
    w, v2, x3 = trace.w, 2, unmatched[2]
    assert (w, v2, x3) not in exchange_instance.edge_set
    e = trace.inner
    assert (w, e[1], e[2]) in exchange_instance.edge_set
    assert (e[0], v2, x3) in exchange_instance.edge_set


def test_every_near_perfect_matching_augments(exchange_instance):
    h = exchange_instance
    seen = set()
    for m in all_near_perfect(h):
        un = _free(h, m)
        pm, trace = augment_near_perfect(h, m, un)
        _check_trace(h, m, un, pm, trace)
        seen.add(trace.case)
    assert seen == set(CASES)


def _check_trace(h, m, un, pm, trace):
    assert set(trace.removed) <= set(m)
    assert set(trace.added) <= h.edge_set
    assert len(trace.added) == len(trace.removed) + 1
    assert trace.replay(m) == pm
    assert validate_matching(h, pm).perfect
    if trace.case == "Case3Recount":
        assert (trace.w, trace.inner[1], trace.inner[2]) in h.edge_set


def test_hypothesis_violation_has_a_real_witness(parity32):
    m, un = [(1, 1, 1)], (0, 0, 0)
    with pytest.raises(HypothesisViolated) as info:
        augment_near_perfect(parity32, m, un)
    exc = info.value
    d = parity32.degree(exc.witness)
    assert d == exc.degree
    assert (2 * d <= parity32.n) if exc.strict else (2 * d < parity32.n)


def test_augment_rejects_bad_input(complete32):
    with pytest.raises(InvalidMatching):
        augment_near_perfect(complete32, [], (0, 0, 0))
    with pytest.raises(InvalidMatching):
        augment_near_perfect(complete32, [(0, 0, 0)], (0, 1, 1))


def test_pivot_guarantee_is_at_least_half():
    for n in range(2, 40):
        assert 2 * pivot_guarantee(n) >= n


# -- top level ---------------------------------------------------------------


def test_find_complete_r4():
    pm, traces = find_perfect_matching(gen_complete(4, 3))
    assert len(pm) == 3 and validate_matching(gen_complete(4, 3), pm).perfect
    assert len(traces) == 1


def test_find_parity_raises(parity32):
    with pytest.raises(ConditionViolated) as info:
        find_perfect_matching(parity32)
    assert not info.value.report.holds


def test_find_bipartite():
    h = gen_random(2, 6, 0.8, 4)
    assert next(admissible_side_pairs(h), None) is not None
    sol = solve(h)
    assert sol.reduction.padded
    pm, _ = find_perfect_matching(h)
    assert validate_matching(h, pm).perfect


def test_side_permutation_is_used():
    # the pair (0, 0) on sides 1, 2 keeps a single edge, so side 0 can be neither strict nor weak
    base = gen_complete(3, 3)
    h = Hypergraph(3, 3, [e for e in base.edges if e not in {(1, 0, 0), (2, 0, 0)}])
    pairs = list(admissible_side_pairs(h))
    assert pairs == [(1, 2), (2, 1)]
    sol = solve(h)
    assert (sol.reduction.strict, sol.reduction.weak) == pairs[0]
    assert validate_matching(h, sol.matching).perfect
    assert verify_solution_text(h, sol.to_text()) == (True, "ok")


def test_random_against_oracle():
    checked = 0
    for seed in range(400):
        n = 3 + seed % 3
        h = gen_random(3, n, 0.85, seed)
        if next(admissible_side_pairs(h), None) is None:
            continue
        pm, _ = find_perfect_matching(h)
        assert validate_matching(h, pm).perfect
        found, _ = find_perfect(h)
        assert found is not None
        checked += 1
    assert checked >= 30


def test_deterministic():
    h = next(h for h in (gen_random(3, 5, 0.85, s) for s in range(100)) if check_main_condition(h, 0, 2).holds)
    assert solve(h).to_text() == solve(h).to_text()


def test_transcript_tampering_is_detected(exchange_instance):
    h = exchange_instance
    text = solve(h).to_text()
    assert verify_solution_text(h, text) == (True, "ok")
    lines = text.splitlines()
    pm_lines = [l for l in lines if l.startswith("PM")]
    bad = "\n".join(l for l in lines if l != pm_lines[0]) + "\n"
    assert not verify_solution_text(h, bad)[0]
    assert not verify_solution_text(h, text.replace("REDUCE", "# REDUCE"))[0]


instances = st.builds(
    lambda r, n, p, seed: gen_random(r, n, p, seed),
    st.integers(3, 5), st.integers(2, 3), st.sampled_from([0.8, 0.9]), st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(instances)
def test_reduction_property(h):
    pair = next(admissible_side_pairs(h), None)
    if pair is None:
        with pytest.raises(ConditionViolated):
            solve(h)
        return
    red = reduce_to_tripartite(h, *pair)
    assert check_main_condition(red.image, 0, 2).holds
    sol = solve(h)
    assert validate_matching(h, sol.matching).perfect
    assert verify_solution_text(h, sol.to_text())[0]
