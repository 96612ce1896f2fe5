import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oneparty.linear import (
    ClassicalCode,
    DecodeStatus,
    binary_entropy,
    code_from_dict,
    code_to_dict,
    decode,
    gf2_nullspace,
    gf2_rank,
    gf2_right_inverse,
    gf2_rref,
    gv_report,
    hamming7,
    load_code_file,
    minimum_distance,
    pack_rows,
    random_code,
    repetition3,
    syndrome,
    unpack_rows,
    weight,
)

bit_matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 9).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)))


def all_words(n):
    return [np.array(w, dtype=np.uint8) for w in itertools.product((0, 1), repeat=n)]


@given(bit_matrices)
def test_rank_matches_real_rank_of_rref(m):
    a = np.array(m, dtype=np.uint8)
    r, piv = gf2_rref(a)
    assert gf2_rank(a) == len(piv) <= min(a.shape)
    assert not r[len(piv):].any()


@given(bit_matrices)
def test_nullspace_is_annihilated_and_complete(m):
    a = np.array(m, dtype=np.uint8)
    ns = gf2_nullspace(a)
    assert ns.shape[0] == a.shape[1] - gf2_rank(a)
    if ns.size:
        assert not ((a.astype(int) @ ns.T.astype(int)) % 2).any()
        assert gf2_rank(ns) == ns.shape[0]


@given(bit_matrices)
def test_right_inverse_when_full_row_rank(m):
    a = np.array(m, dtype=np.uint8)
    if gf2_rank(a) != a.shape[0]:
        return
    ri = gf2_right_inverse(a)
    assert np.array_equal((a.astype(int) @ ri.astype(int)) % 2, np.eye(a.shape[0], dtype=int))


def test_pack_roundtrip():
    bits = np.array([[1, 0, 1, 1], [0, 0, 0, 1]], dtype=np.uint8)
    masks = pack_rows(bits)
    assert masks.tolist() == [0b1101, 0b1000]
    assert np.array_equal(unpack_rows(masks, 4), bits)


def test_repetition3_examples():
    c = repetition3()
    assert (c.n, c.k, c.t) == (3, 1, 1)
    assert syndrome(c, [0, 0, 0]).tolist() == [0, 0]
    assert syndrome(c, [0, 1, 0]).tolist() == [1, 1]
    assert syndrome(c, [1, 1, 1]).tolist() == [0, 0]
    assert c.encode([0]).tolist() == [0, 0, 0]
    assert c.encode([1]).tolist() == [1, 1, 1]
    e, st_ = decode(c, [0, 0])
    assert e.tolist() == [0, 0, 0] and st_ is DecodeStatus.CORRECTED
    e, st_ = decode(c, [1, 1])
    assert e.tolist() == [0, 1, 0] and st_ is DecodeStatus.CORRECTED


def test_repetition3_miscorrects_weight_two():
    c = repetition3()
    e, _ = decode(c, syndrome(c, [1, 1, 0]))
    assert e.tolist() == [0, 0, 1]
    residual = np.array([1, 1, 0]) ^ e
    assert c.unencode(residual).tolist() == [1]


def test_repetition3_exhaustive_syndromes():
    c = repetition3()
    table = {tuple(w): tuple(syndrome(c, w)) for w in all_words(3)}
    assert table[(1, 0, 0)] == (1, 0)
    assert table[(0, 0, 1)] == (0, 1)
    assert table[(0, 1, 0)] == (1, 1)
    for w, s in table.items():
        comp = tuple(1 - b for b in w)
        assert table[comp] == s


@pytest.mark.parametrize("factory", [repetition3, hamming7])
def test_code_invariants(factory):
    c = factory()
    assert not ((c.gen.astype(int) @ c.pchk.T.astype(int)) % 2).any()
    assert gf2_rank(c.gen) == c.k and gf2_rank(c.pchk) == c.n - c.k
    assert minimum_distance(c) == 2 * c.t + 1


def test_hamming7_weight_one_syndromes_distinct():
    c = hamming7()
    synds = {tuple(syndrome(c, w)) for w in all_words(7) if weight(w) <= 1}
    assert len(synds) == 8


@pytest.mark.parametrize("factory", [repetition3, hamming7])
def test_decode_corrects_up_to_t_exhaustive(factory):
    c = factory()
    for e in all_words(c.n):
        if weight(e) > c.t:
            continue
        est, status = decode(c, syndrome(c, e))
        assert np.array_equal(est, e)
        assert status is DecodeStatus.CORRECTED


@pytest.mark.parametrize("factory", [repetition3, hamming7])
def test_syndrome_linearity(factory):
    c = factory()
    words = all_words(c.n)
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = words[rng.integers(len(words))], words[rng.integers(len(words))]
        assert np.array_equal(syndrome(c, a ^ b), syndrome(c, a) ^ syndrome(c, b))


@pytest.mark.parametrize("factory", [repetition3, hamming7])
def test_decoder_idempotent_on_near_codewords(factory):
    c = factory()
    for m in all_words(c.k):
        cw = c.encode(m).astype(np.uint8)
        for e in all_words(c.n):
            if weight(e) > c.t:
                continue
            word = cw ^ e
            est, _ = decode(c, syndrome(c, word))
            assert np.array_equal(c.unencode(word ^ est), m)


def test_leaders_are_minimum_weight_and_lexicographic():
    c = ClassicalCode.from_parity_check([[1, 1, 1, 1]], t=0)
    e, status = decode(c, [1])
    # four weight-one candidates, the lexicographically least tuple wins
    assert e.tolist() == [0, 0, 0, 1]
    assert status is DecodeStatus.AMBIGUOUS
    rep = repetition3()
    # every syndrome of the repetition code has a weight <= 1 leader
    assert not rep.ambiguous_flags().any()


def test_ambiguous_status_beyond_radius():
    # [4,1] repetition code corrects 1, syndromes of weight-2 errors are ambiguous
    h = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]
    c = ClassicalCode.from_parity_check(h, t=1)
    e, status = decode(c, syndrome(c, [1, 1, 0, 0]))
    assert weight(e) == 2
    assert status is DecodeStatus.AMBIGUOUS


def test_invalid_codes_rejected():
    with pytest.raises(ValueError):
        ClassicalCode(n=3, k=1, t=1, gen=[[1, 1, 0]], pchk=[[1, 1, 0], [0, 1, 1]])
    with pytest.raises(ValueError):
        ClassicalCode(n=3, k=1, t=1, gen=[[1, 1, 1]], pchk=[[1, 1, 0], [1, 1, 0]])
    with pytest.raises(ValueError):
        ClassicalCode.from_parity_check([[1, 1, 0], [0, 1, 1]], t=2)
    with pytest.raises(ValueError):
        syndrome(repetition3(), [1, 0])
    with pytest.raises(ValueError):
        decode(repetition3(), [1, 0, 1])


def test_sparse_decoder_for_long_codes(rng):
    n = 30
    h = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        h[i, i] = h[i, i + 1] = 1
    c = ClassicalCode.from_parity_check(h, t=2)
    assert not c.has_table
    e = np.zeros(n, dtype=np.uint8)
    e[[3, 17]] = 1
    est, status = decode(c, syndrome(c, e))
    assert np.array_equal(est, e) and status is DecodeStatus.CORRECTED
    e[[5, 9, 21]] = 1
    est, status = decode(c, syndrome(c, e))
    assert status is DecodeStatus.AMBIGUOUS
    assert np.array_equal(syndrome(c, est), syndrome(c, e))


def test_gv_report_examples():
    assert gv_report(0.5).capacity == 0.0
    assert not gv_report(0.5).feasible
    assert gv_report(0.0).capacity == 1.0
    assert gv_report(0.11).capacity == pytest.approx(0.500, abs=1e-3)
    r = gv_report(0.11, 0.25)
    assert r.slack == pytest.approx(r.capacity - 0.25)
    with pytest.raises(ValueError):
        gv_report(1.2)


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(0, 1))
def test_gv_feasibility_monotone(a, b):
    lo, hi = sorted((a, b))
    if gv_report(hi).feasible:
        assert gv_report(lo).feasible


def test_binary_entropy():
    assert binary_entropy(0) == binary_entropy(1) == 0.0
    assert binary_entropy(0.5) == 1.0
    with pytest.raises(ValueError):
        binary_entropy(-0.1)


def test_random_code_is_valid(rng):
    c = random_code(10, 4, rng)
    assert c.k == 4
    for e in all_words(10):
        if weight(e) <= c.t:
            est, _ = decode(c, syndrome(c, e))
            assert np.array_equal(est, e)


def test_code_file_roundtrip(tmp_path):
    c = hamming7()
    path = tmp_path / "h7.json"
    path.write_text(json.dumps(code_to_dict(c)))
    c2 = load_code_file(path)
    assert (c2.n, c2.k, c2.t) == (7, 4, 1)
    assert np.array_equal(c2.pchk, c.pchk)


@pytest.mark.parametrize("bad", [
    {"n": 3, "k": 1, "t": 1},
    {"n": 3, "k": 1, "t": 1, "parity_check": ["110"]},
    {"n": 3, "k": 1, "t": 1, "parity_check": ["110", "01x"]},
    {"n": 3, "k": 1, "t": 1, "parity_check": ["110", "011"], "extra": 1},
    {"n": 3, "k": 2, "t": 1, "parity_check": ["110"]},
    {"n": "3", "k": 1, "t": 1, "parity_check": ["110", "011"]},
])
def test_code_file_strict(bad):
    with pytest.raises(ValueError):
        code_from_dict(bad)
