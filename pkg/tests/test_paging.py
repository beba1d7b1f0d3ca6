import itertools

import pytest
from hypothesis import given, settings, strategies as st

from auglab import paging as P
from auglab.paging import Policy

from oracles import naive_faults

small_seqs = st.lists(st.integers(0, 5), max_size=14).map(lambda r: P.PageRequestSequence(tuple(r), 6))
ks = st.integers(1, 6)

TRACE = P.PageRequestSequence.of([1, 2, 3, 2, 1, 4, 2])


def test_hand_traced_example():
    # k=2 by hand: FIF misses 1,2,3,1,4; LRU additionally misses the last 2
    assert P.faults("fif", 2, TRACE) == 5
    assert P.faults("lru", 2, TRACE) == 6
    assert P.offline_opt_bruteforce(TRACE, 2) == 5
    assert P.decompose_blocks(TRACE, 2).blocks == ((0, 2), (2, 4), (4, 6), (6, 7))


def test_fifo_anomaly():
    # the classic sequence where FIFO faults more with a larger cache
    z = P.PageRequestSequence.of([1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5])
    assert P.faults("fifo", 3, z) == 9
    assert P.faults("fifo", 4, z) == 10


@given(small_seqs, ks, st.sampled_from(["lru", "fifo"]))
def test_online_matches_naive(z, k, policy):
    res = P.simulate(policy, k, z)
    assert res.fault_count == naive_faults(policy, k, z.requests)
    assert len(res.final_cache) <= k
    assert res.final_cache <= set(z.requests)


@given(small_seqs, ks)
def test_fif_is_optimal(z, k):
    assert P.faults("fif", k, z) == P.offline_opt_bruteforce(z, k)


@given(small_seqs, ks, st.sampled_from(list(Policy)))
def test_fault_count_bounds(z, k, policy):
    # every distinct page misses once; no request misses twice
    assert len(set(z.requests)) <= P.faults(policy, k, z) <= len(z)


@given(small_seqs)
def test_lru_monotone_in_cache_size(z):
    curve = [P.faults("lru", k, z) for k in range(1, 8)]
    assert all(a >= b for a, b in zip(curve, curve[1:]))


@given(small_seqs, st.integers(1, 8))
def test_lru_curve_matches_simulation(z, k_max):
    assert P.lru_fault_curve(z, k_max) == [P.faults("lru", k, z) for k in range(1, k_max + 1)]


@given(small_seqs, ks)
def test_block_decomposition(z, k):
    dec = P.decompose_blocks(z, k)
    reqs = z.requests
    assert [i for a, b in dec.blocks for i in range(a, b)] == list(range(len(reqs)))
    for a, b in dec.blocks:
        assert len(set(reqs[a:b])) <= k
        if b < len(reqs):
            assert len(set(reqs[a:b + 1])) == k + 1
    assert P.faults("lru", k, z) <= dec.count * k
    for h in range(1, k + 1):
        assert P.faults("fif", h, z) >= (dec.count - 1) * (k - h + 1)


def test_empty_sequence():
    z = P.PageRequestSequence((), 3)
    for policy in Policy:
        assert P.faults(policy, 2, z) == 0
    assert P.decompose_blocks(z, 2).count == 0
    assert P.lru_fault_curve(z, 3) == [0, 0, 0]


def test_cyclic_adversary():
    z = P.gen_cyclic_adversary(3, 100)
    assert z.universe_size == 4
    assert P.faults("lru", 3, z) == 100
    assert P.faults("fifo", 3, z) == 100
    assert P.faults("lru", 4, z) == 4


@pytest.mark.parametrize("policy", ["lru", "fifo"])
@pytest.mark.parametrize("k", [1, 3, 6])
def test_adaptive_adversary_forces_every_fault(policy, k):
    z = P.gen_adaptive_adversary(policy, k, 200)
    assert P.faults(policy, k, z) == 200
    # over k+1 pages FIF faults at most once per k requests after warm-up
    assert P.faults("fif", k, z) <= k + 200 // k


def test_locality_workload_is_seeded():
    a = P.gen_locality_workload(30, 500, 7, 0.8)
    assert a == P.gen_locality_workload(30, 500, 7, 0.8)
    assert a != P.gen_locality_workload(30, 500, 8, 0.8)
    assert all(0 <= p < 30 for p in a)
    with pytest.raises(P.PagingError):
        P.gen_locality_workload(30, 10, 1, 1.5)


def test_online_cache_steps():
    c = P.OnlineCache("lru", 2)
    assert [c.request(p) for p in [0, 1, 0, 2, 1]] == [True, True, False, True, True]
    with pytest.raises(P.PagingError):
        P.OnlineCache("fif", 2)


def test_validation():
    with pytest.raises(P.PagingError):
        P.PageRequestSequence((0, 3), 3)
    with pytest.raises(P.PagingError):
        P.faults("lru", 0, TRACE)
    with pytest.raises(P.PagingError):
        Policy.parse("mru")
    with pytest.raises(P.BruteForceGuardError):
        P.offline_opt_bruteforce(P.PageRequestSequence.of(range(9)), 2)
    with pytest.raises(P.BruteForceGuardError):
        P.offline_opt_bruteforce(P.PageRequestSequence.of([0] * 21), 2)


def test_from_tokens():
    z, ids = P.from_tokens(["a", "b", "a", "c"])
    assert z.requests == (0, 1, 0, 2)
    assert ids == {"a": 0, "b": 1, "c": 2}


def test_all_sequences_count():
    assert sum(1 for _ in P.all_sequences(3, 4)) == sum(3 ** n for n in range(5))
    assert set(P.all_sequences(2, 2)) == {(), *itertools.product(range(2), repeat=1),
                                          *itertools.product(range(2), repeat=2)}


def test_trace_round_trip(tmp_path):
    z = P.gen_locality_workload(10, 50, 1, 0.5)
    path = tmp_path / "z.txt"
    P.write_trace(z, path)
    assert P.read_trace(path) == z
    (tmp_path / "empty.txt").write_text("")
    assert len(P.read_trace(tmp_path / "empty.txt")) == 0
    (tmp_path / "bare.txt").write_text("3\n1\n")
    assert P.read_trace(tmp_path / "bare.txt") == P.PageRequestSequence((3, 1), 4)
    (tmp_path / "bad.txt").write_text("N=4\n1\nx\n")
    with pytest.raises(P.PagingError, match="3"):
        P.read_trace(tmp_path / "bad.txt")


@settings(max_examples=30)
@given(small_seqs, ks, st.sampled_from(list(Policy)))
def test_result_round_trip(z, k, policy):
    res = P.simulate(policy, k, z)
    assert P.PagingSimResult.from_dict(res.to_dict()) == res
