import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shellcodes.errors import CapExceeded, DimensionMismatch, TooFewVectors
from shellcodes.shellgeom import (CodeSpec, ShellId, aut_orbit, aut_orbit_reps, aut_orbit_size,
                                  canonical_form, enumerate_shell, format_vector, inner,
                                  max_pairwise_inner, parse_vector_lines, read_vectors, shell_max_inner,
                                  shell_size,
                                  stream_shell, vector_keys, write_vectors)


def brute_shell(n, k):
    r = int(k ** 0.5)
    return sorted(v for v in itertools.product(range(-r, r + 1), repeat=n) if sum(x * x for x in v) == k)


def test_shell_id_validation():
    with pytest.raises(ValueError):
        ShellId(0, 3)
    with pytest.raises(ValueError):
        ShellId(3, 0)
    with pytest.raises(ValueError):
        CodeSpec(ShellId(3, 4), 4)
    with pytest.raises(ValueError):
        CodeSpec(ShellId(3, 4), -5)
    assert CodeSpec(ShellId(3, 4), -4).t == -4


def test_unit_vectors():
    vs = enumerate_shell(ShellId(6, 1))
    assert len(vs) == 12
    assert set(map(tuple, np.abs(vs).tolist())) == {tuple(int(i == j) for i in range(6)) for j in range(6)}


def test_n6_k4_matches_brute_force():
    vs = enumerate_shell(ShellId(6, 4))
    assert len(vs) == 252 == shell_size(ShellId(6, 4))
    assert [tuple(v) for v in vs.tolist()] == brute_shell(6, 4)


def test_one_dimensional():
    assert shell_size(ShellId(1, 4)) == 2
    assert shell_size(ShellId(1, 3)) == 0
    assert enumerate_shell(ShellId(1, 3)).shape == (0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 12))
def test_enumeration_matches_brute_force(n, k):
    got = [tuple(v) for v in enumerate_shell(ShellId(n, k)).tolist()]
    assert got == brute_shell(n, k)


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_shell(ShellId(8, 10), cap=100)


def test_canonical_form():
    assert canonical_form((0, -2, 1, 0, -1, 1, 1, 0, 0, 0)) == (2, 1, 1, 1, 1, 0, 0, 0, 0, 0)
    assert canonical_form((3,) + (0,) * 9) == (3,) + (0,) * 9


def test_s9_in_dimension_10():
    reps = aut_orbit_reps(ShellId(10, 9))
    expected = {(1,) * 9 + (0,), (2,) + (1,) * 5 + (0,) * 4, (2, 2, 1) + (0,) * 7, (3,) + (0,) * 9}
    assert set(reps) == expected
    assert reps == sorted(reps, reverse=True)
    forms = {canonical_form(v) for v in enumerate_shell(ShellId(10, 9)).tolist()}
    assert forms == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 14))
def test_orbit_reps_partition_the_shell(n, k):
    reps = aut_orbit_reps(ShellId(n, k))
    assert sum(aut_orbit_size(r) for r in reps) == shell_size(ShellId(n, k))
    forms = {canonical_form(v) for v in enumerate_shell(ShellId(n, k)).tolist()}
    assert forms == set(reps)


def test_aut_orbit_members():
    rep = (2, 1, 0)
    members = list(aut_orbit(rep))
    assert len(members) == len(set(members)) == aut_orbit_size(rep) == 24
    assert all(canonical_form(m) == rep for m in members)


def test_stream_shell_is_complete():
    shell = ShellId(5, 6)
    assert sorted(stream_shell(shell)) == [tuple(v) for v in enumerate_shell(shell).tolist()]


def test_vector_keys_preserve_order():
    vs = enumerate_shell(ShellId(4, 5))
    keys = vector_keys(vs, 5)
    assert keys is not None
    assert (np.diff(keys) > 0).all()


def test_inner():
    assert inner((1, 1, 1, 1, 0, 0), (2, 0, 0, 0, 0, 0)) == 2
    assert inner((1, -1, 0), (0, 1, -1)) == -1
    with pytest.raises(DimensionMismatch):
        inner((1, 2), (1, 2, 3))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=2, max_size=30))
def test_max_pairwise_inner_against_loop(rows):
    expected = max(inner(a, b) for i, a in enumerate(rows) for b in rows[i + 1:])
    assert max_pairwise_inner(rows) == expected


def test_max_pairwise_needs_two():
    with pytest.raises(TooFewVectors):
        max_pairwise_inner([(1, 0)])


def test_vector_file_round_trip(tmp_path):
    vs = [(1, -2, 0), (0, 0, 3)]
    path = tmp_path / "v.txt"
    write_vectors(path, vs, header="two vectors")
    assert read_vectors(path) == vs
    assert parse_vector_lines(["# c", "", format_vector((4, -1))]) == [(4, -1)]


@pytest.mark.parametrize("n, k", [(3, 2), (4, 4), (5, 6), (6, 4), (2, 5)])
def test_shell_max_inner(n, k):
    assert shell_max_inner(ShellId(n, k)) == max_pairwise_inner(enumerate_shell(ShellId(n, k)))


def test_shell_max_inner_small_shells():
    assert shell_max_inner(ShellId(1, 2)) is None
    assert shell_max_inner(ShellId(1, 1)) == -1
