import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shellcodes.assembler import (BoundRecord, Cosine, IntegerOrthogonalMatrix, ShellCode, augment,
                                  builtin_orthogonal, catalog_row, embed_scale, parse_rational,
                                  rational_embed, read_catalog, read_matrix, read_spherical,
                                  read_witness, render_catalog, tensor_orthogonal, to_spherical,
                                  union_scaled, verify_shell_code, write_catalog, write_matrix,
                                  write_spherical, write_witness)
from shellcodes.cliquesolve import CliqueResult, max_weight_clique
from shellcodes.errors import (CosineExceeded, DegenerateSpan, DuplicatePoint, IrrationalAngle,
                               NoKnownConstruction, NotOrthogonal, UnequalRowNorms,
                               VerificationFailed)
from shellcodes.orbitgraph import build_graph
from shellcodes.pipeline import search_with_group
from shellcodes.shellgeom import CodeSpec, ShellId
from shellcodes.symgroup import builtin_family, partition_orbits


def code(n, k, t, vectors):
    return ShellCode(CodeSpec(ShellId(n, k), t), vectors)


@pytest.fixture(scope="module")
def code_642():
    return search_with_group(CodeSpec(ShellId(6, 4), 2), builtin_family("s", 6, 0, "negacyclic")).code


def test_cosine_arithmetic():
    assert Cosine.from_inner(5, 7, 7) == Cosine(Fraction(5, 7))
    c = Cosine.from_inner(3, 6, 4)  # 3/sqrt(24) = sqrt(6)/4
    assert not c.is_rational
    assert str(c) == "1/4*sqrt(6)"
    assert math.isclose(float(c), 3 / math.sqrt(24))
    assert Cosine(Fraction(1, 2)) < c < Cosine(Fraction(2, 3))
    assert Cosine.from_inner(-3, 6, 4) < Cosine(0)


@settings(max_examples=200, deadline=None)
@given(st.integers(-30, 30), st.integers(1, 30), st.integers(1, 30), st.integers(-30, 30), st.integers(1, 30), st.integers(1, 30))
def test_cosine_order_matches_floats(a, k1, k2, b, k3, k4):
    x, y = Cosine.from_inner(a, k1, k2), Cosine.from_inner(b, k3, k4)
    fx, fy = a / math.sqrt(k1 * k2), b / math.sqrt(k3 * k4)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
    else:
        assert x == y


def test_parse_rational():
    assert parse_rational("4/5") == Fraction(4, 5)
    with pytest.raises(IrrationalAngle):
        parse_rational("sqrt(2)/2")
    with pytest.raises(IrrationalAngle):
        parse_rational(0.5)


def test_verify_reports_pair():
    c = code(3, 2, 0, [(1, 1, 0), (1, 0, 1), (0, 1, -1)])
    rep = verify_shell_code(c)
    assert not rep.ok and rep.max_inner == 1
    assert set(rep.violating_pair) == {(1, 1, 0), (1, 0, 1)}
    bad = verify_shell_code(code(3, 2, 1, [(1, 1, 0), (1, 1, 0), (2, 0, 0)]))
    assert bad.bad_norm == [(2, 0, 0)] and bad.duplicates == [(1, 1, 0)]
    assert "FAIL" in bad.summary()


def test_assemble_rejects_inconsistent_clique():
    table = partition_orbits(ShellId(6, 4), builtin_family("s", 6, 0, "negacyclic"))
    graph = build_graph(table, 2)
    best = max_weight_clique(graph)
    with pytest.raises(VerificationFailed):
        from shellcodes.assembler import assemble
        assemble(CliqueResult(best.vertices, best.weight + 1, True), table, CodeSpec(ShellId(6, 4), 2), graph)


def test_searched_code(code_642):
    assert len(code_642) == 60
    rep = verify_shell_code(code_642)
    assert rep.ok and rep.max_inner <= 2
    assert code_642.provenance["group_order"] == builtin_family("s", 6, 0, "negacyclic").order()


# -- integer orthogonal matrices ---------------------------------------------

def test_matrix_validation():
    IntegerOrthogonalMatrix(((1, 2), (2, -1)), 5)
    with pytest.raises(UnequalRowNorms):
        IntegerOrthogonalMatrix(((1, 2), (1, 0)), 5)
    with pytest.raises(NotOrthogonal):
        IntegerOrthogonalMatrix(((1, 2), (2, 1)), 5)


@pytest.mark.parametrize("c, n, kind", [(5, 2, None), (4, 3, None), (2, 6, None), (3, 4, "quaternion"),
                                        (7, 8, None), (5, 6, "quaternion"), (13, 2, "pairs")])
def test_builtin_orthogonal(c, n, kind):
    q = builtin_orthogonal(c, n, kind).array()
    assert q.shape == (n, n)
    assert (q @ q.T == c * np.eye(n, dtype=np.int64)).all()


def test_no_construction():
    with pytest.raises(NoKnownConstruction):
        builtin_orthogonal(7, 6)
    with pytest.raises(NoKnownConstruction):
        builtin_orthogonal(3, 3)


def test_tensor():
    q = tensor_orthogonal(builtin_orthogonal(2, 2), builtin_orthogonal(5, 2))
    assert q.c == 10 and q.shape == (4, 4)


def test_embed_scale(code_642):
    out = embed_scale(code_642, builtin_orthogonal(2, 6))
    assert (out.spec.k, out.spec.t) == (8, 4)
    a, b = code_642.array(), out.array()
    assert (b @ b.T == 2 * (a @ a.T)).all()
    assert verify_shell_code(out).ok
    assert out.provenance["embeddings"][0]["c"] == 2


# -- rational codes ----------------------------------------------------------

def simplex_gram(m):
    return [[Fraction(1) if i == j else Fraction(-1, m) for j in range(m + 1)] for i in range(m + 1)]


def test_triangle():
    c = rational_embed(gram=simplex_gram(2))
    arr = c.array()
    g = arr @ arr.T
    assert (g == c.spec.k * np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]) // 2).all()
    assert verify_shell_code(c).ok


def test_rational_points():
    pts = [(1, 0), (Fraction(1, 2), Fraction(1, 2)), (0, 1)]
    with pytest.raises(ValueError):
        rational_embed(points=pts)  # unequal norms
    c = rational_embed(points=[(1, 0), (0, 1), (-1, 0)])
    assert verify_shell_code(c).ok
    with pytest.raises(DegenerateSpan):
        rational_embed(points=[(1, 0, 0), (0, 1, 0)])
    with pytest.raises(DuplicatePoint):
        rational_embed(points=[(1, 0), (0, 1), (1, 0)])
    with pytest.raises(IrrationalAngle):
        rational_embed(gram=[[1, "sqrt(2)"], ["sqrt(2)", 1]])


# -- spherical codes ---------------------------------------------------------

def test_to_spherical(code_642):
    sc = to_spherical(code_642)
    assert sc.N == 60 and sc.t_max == Fraction(1, 2)
    assert sc.max_cosine == Cosine(Fraction(1, 2))


def test_union_pinpoints_pair():
    a = code(2, 1, 0, [(1, 0), (0, 1)])
    b = code(2, 2, 0, [(1, 1)])
    with pytest.raises(CosineExceeded) as err:
        union_scaled([a, b], Fraction(1, 2))
    assert err.value.cosine == Cosine.from_inner(1, 1, 2)
    ok = union_scaled([a, b], Fraction(3, 4))
    assert ok.max_cosine == Cosine.from_inner(1, 1, 2)
    with pytest.raises(DuplicatePoint):
        union_scaled([a, code(2, 4, 0, [(2, 0)])], Fraction(3, 4))


def test_union_negative_bound():
    simplex = rational_embed(gram=simplex_gram(3))
    sc = to_spherical(simplex)
    assert sc.max_cosine == Cosine(Fraction(-1, 3))
    assert union_scaled([simplex], Fraction(-1, 3)).N == 4
    with pytest.raises(CosineExceeded):
        union_scaled([simplex], Fraction(-1, 2))


def test_augment():
    base = code(2, 1, 0, [(1, 0), (0, 1)])
    sc = augment(base, [((-1, -1), 2)])
    assert sc.N == 3 and sc.max_cosine == Cosine(0)
    with pytest.raises(ValueError):
        augment(base, [((1, 1), 3)])


# -- files -------------------------------------------------------------------

def test_witness_round_trip(tmp_path, code_642):
    path = tmp_path / "w.txt"
    write_witness(path, code_642)
    again = read_witness(path)
    assert again.vectors == code_642.vectors and again.spec == code_642.spec
    assert again.provenance == code_642.provenance


def test_spherical_round_trip(tmp_path):
    sc = union_scaled([code(2, 1, 0, [(1, 0), (0, 1)]), code(2, 2, 0, [(-1, -1)])], Fraction(0))
    path = tmp_path / "s.txt"
    write_spherical(path, sc)
    assert read_spherical(path).points == sc.points


def test_matrix_round_trip(tmp_path):
    q = builtin_orthogonal(5, 4)
    write_matrix(tmp_path / "m.txt", q)
    assert read_matrix(tmp_path / "m.txt") == q


def test_catalog(tmp_path, code_642):
    write_witness(tmp_path / "w.txt", code_642)
    rec = BoundRecord(6, 2, 4, 60, "s", "w.txt", "s:negacyclic", True)
    write_catalog(tmp_path / "c.jsonl", [rec])
    assert read_catalog(tmp_path / "c.jsonl") == [rec]
    wrong = BoundRecord(6, 2, 4, 61, "s", "w.txt")
    write_catalog(tmp_path / "bad.jsonl", [wrong])
    with pytest.raises(VerificationFailed):
        read_catalog(tmp_path / "bad.jsonl")
    table = render_catalog([rec], 6, ts=[2], ks=range(4, 7))
    assert table.splitlines()[1].split() == ["2", "60s", "-", "-"]
    assert catalog_row([rec], 6, 2, range(4, 6)) == [60, None]


def test_shipped_union_parts():
    data = Path(__file__).resolve().parents[1] / "src" / "shellcodes" / "data" / "unions"
    parts = [read_witness(data / "n6_t8_k10.txt"), read_witness(data / "n6_t4_k6.txt")]
    assert all(verify_shell_code(p).ok for p in parts)
    out = union_scaled(parts, Fraction(4, 5))
    assert out.N == 568
    assert out.max_cosine == Cosine(Fraction(4, 5))
