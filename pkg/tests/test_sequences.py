import logging

import pytest
from hypothesis import given, strategies as st

from gallab import IntegerSet, additive_energy, gen_interval, gen_random_subset, gen_squares, load_set, save_set
from gallab.errors import InvalidArgument, SetParseError


@pytest.mark.parametrize("N, expected", [(1, (1,)), (3, (1, 2, 3)), (5, (1, 2, 3, 4, 5))])
def test_interval(N, expected):
    assert gen_interval(N).elements == expected


@pytest.mark.parametrize("N, expected", [(1, (1,)), (3, (1, 4, 9)), (4, (1, 4, 9, 16))])
def test_squares(N, expected):
    assert gen_squares(N).elements == expected


@pytest.mark.parametrize("gen", [gen_interval, gen_squares])
def test_generators_reject_zero(gen):
    with pytest.raises(InvalidArgument):
        gen(0)


def test_squares_respect_element_cap():
    with pytest.raises(InvalidArgument):
        gen_squares(2**32)


def test_random_subset_forced_and_singleton():
    assert gen_random_subset(10, 10, 123).elements == tuple(range(1, 11))
    one = gen_random_subset(100, 1, seed=1)
    assert len(one) == 1 and 1 <= one.elements[0] <= 100


def test_random_subset_deterministic():
    assert gen_random_subset(1000, 50, seed=7) == gen_random_subset(1000, 50, seed=7)
    assert gen_random_subset(1000, 50, seed=7) != gen_random_subset(1000, 50, seed=8)


def test_random_subset_huge_universe():
    A = gen_random_subset(2**62, 20, seed=3)
    assert len(A) == 20 and A.elements[-1] <= 2**62


def test_random_subset_too_large():
    with pytest.raises(InvalidArgument):
        gen_random_subset(5, 6, seed=0)


def test_integer_set_invariants():
    with pytest.raises(InvalidArgument):
        IntegerSet((2, 1))
    with pytest.raises(InvalidArgument):
        IntegerSet((0, 1))
    with pytest.raises(InvalidArgument):
        IntegerSet(())
    A = IntegerSet((1, 5, 9))
    assert len(A) == A.N == 3 and 5 in A and 4 not in A


@pytest.mark.parametrize("text, expected", [("3\n1\n2\n", (1, 2, 3)), ("5\n5\n", (5,)), ("\n 7 \n\n2", (2, 7))])
def test_load_set(tmp_path, text, expected):
    p = tmp_path / "a.txt"
    p.write_text(text)
    assert load_set(p).elements == expected


def test_load_set_parse_error_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1\n\nx2\n")
    with pytest.raises(SetParseError) as err:
        load_set(p)
    assert err.value.lineno == 3
    p.write_text("a\n")
    with pytest.raises(SetParseError) as err:
        load_set(p)
    assert err.value.lineno == 1


def test_load_set_empty(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("\n  \n")
    with pytest.raises(InvalidArgument):
        load_set(p)


def test_duplicates_logged(tmp_path, caplog):
    p = tmp_path / "d.txt"
    p.write_text("4\n4\n4\n1\n")
    with caplog.at_level(logging.WARNING, logger="gallab.sequences"):
        assert load_set(p).elements == (1, 4)
    assert "collapsed 2 duplicate" in caplog.text


@given(st.sets(st.integers(1, 2**63 - 1), min_size=1, max_size=40))
def test_save_load_roundtrip(tmp_path_factory, values):
    A = IntegerSet.from_iterable(values)
    p = tmp_path_factory.mktemp("rt") / "s.txt"
    save_set(A, p)
    assert load_set(p) == A


@given(st.integers(1, 60))
def test_interval_energy_closed_form(N):
    assert additive_energy(gen_interval(N)) == (2 * N**3 + N) // 3


@given(st.integers(1, 300), st.integers(1, 300), st.integers(0, 2**64 - 1))
def test_generated_sets_are_valid(u, n, seed):
    n = min(n, u)
    for A in (gen_interval(n), gen_squares(n), gen_random_subset(u, n, seed)):
        els = A.elements
        assert len(els) == n and els[0] >= 1
        assert all(b > a for a, b in zip(els, els[1:]))
