import itertools

import numpy as np
import pytest

from finring import ring_core as rc
from finring.constructions import (CapExceeded, ConstructionError, SpecParseError, closure_set,
                                   compile_spec, direct_product, matrix_ring, matrix_unit,
                                   parse_poly, poly_quotient, subring_closure, zero_mul_ring, zmod)
from finring.zd_analysis import profile


def mats_f2():
    """All 2x2 matrices over F_2 in the documented index order."""
    out = []
    for idx in range(16):
        e = [(idx >> p) & 1 for p in range(4)]
        out.append(np.array(e).reshape(2, 2))
    return out


def test_zmod_basics():
    R = zmod(9)
    assert profile(R).two_sided == (3, 6)
    assert zmod(1).order == 1
    six = zmod(6)
    assert rc.find_unity(six) == 1 and rc.is_commutative(six)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_zmod_prime_is_field_and_square_matches_multiples(p):
    assert profile(zmod(p)).n == 0
    assert profile(zmod(p * p)).two_sided == tuple(k * p for k in range(1, p))


def test_poly_quotient_field_of_order_4():
    F = poly_quotient(2, [1, 1, 1])
    assert F.order == 4
    assert all(F.mul[a][b] != 0 for a in range(1, 4) for b in range(1, 4))


def test_poly_quotient_dual_numbers():
    R = poly_quotient(2, [0, 0, 1])
    x = 2  # coefficient vector (0, 1)
    assert R.mul[x][x] == 0
    assert profile(R).two_sided == (x,)
    assert R.order == (profile(R).n + 1) ** 2


def test_poly_quotient_degree_one_is_base_field():
    assert rc.is_isomorphic(poly_quotient(3, [0, 1]), zmod(3)) is not None


@pytest.mark.parametrize("p, f, exc", [(4, [0, 0, 1], ConstructionError),
                                       (2, [0, 0, 0], ConstructionError),
                                       (3, [1, 2], ConstructionError),
                                       (2, [0] * 13 + [1], CapExceeded)])
def test_poly_quotient_errors(p, f, exc):
    with pytest.raises(exc):
        poly_quotient(p, f)


def test_matrix_ring_small():
    assert rc.is_isomorphic(matrix_ring(zmod(2), 1), zmod(2)) is not None
    M = matrix_ring(zmod(2), 2)
    assert M.order == 16
    assert rc.find_unity(M) == matrix_unit(zmod(2), 2, 1, 1) + matrix_unit(zmod(2), 2, 2, 2)


def test_matrix_ring_over_f2_encoding_and_zero_divisors():
    M = matrix_ring(zmod(2), 2)
    mats = mats_f2()
    index = {tuple(m.ravel()): i for i, m in enumerate(mats)}
    for a, b in itertools.product(range(16), repeat=2):
        assert M.mul[a][b] == index[tuple(((mats[a] @ mats[b]) % 2).ravel())]
    singular = [i for i, m in enumerate(mats) if i and round(np.linalg.det(m)) % 2 == 0]
    assert len(singular) == 9
    assert profile(M).two_sided == tuple(singular)


def test_matrix_ring_cap():
    with pytest.raises(CapExceeded):
        matrix_ring(zmod(3), 3)


def test_closure_upper_triangular(upper_ring):
    assert upper_ring.order == 8
    M = matrix_ring(zmod(2), 2)
    members = closure_set(M, [1, 2, 8])
    mats = mats_f2()
    assert [i for i in range(16) if mats[i][1, 0] == 0] == members


def test_closure_column_ring(column_ring):
    M = matrix_ring(zmod(2), 2)
    e11, e21 = matrix_unit(zmod(2), 2, 1, 1), matrix_unit(zmod(2), 2, 2, 1)
    assert closure_set(M, [e11, e21]) == [0, e11, e21, e11 + e21]
    assert M.mul[e11][e21] == 0 and M.mul[e21][e11] == e21
    assert column_ring.order == 4


def test_closure_is_minimal():
    M = matrix_ring(zmod(2), 2)
    gens = [1, 4]
    members = closure_set(M, gens)
    for drop in members:
        if drop in gens or drop == 0:
            continue
        with pytest.raises(rc.NotClosed):
            rc.induced_subring(M, [m for m in members if m != drop])


def test_closure_of_nothing():
    assert subring_closure(zmod(6), []).order == 1


def test_direct_product():
    assert rc.is_isomorphic(direct_product(zmod(2), zmod(3)), zmod(6)) is not None
    R = zmod(5)
    assert rc.is_isomorphic(direct_product(R, zmod(1)), R) is not None
    P = direct_product(zmod(2), zmod(2))
    # (1,0) -> 2, (0,1) -> 1
    assert profile(P).two_sided == (1, 2)
    assert P.order <= (profile(P).n + 1) ** 2


def test_zero_mul_ring():
    R = zero_mul_ring([4])
    assert R.order == 4 and profile(R).n == 3
    assert rc.additive_type(zero_mul_ring([2, 2])) == [2, 2]
    assert zero_mul_ring([1]).order == 1


@pytest.mark.parametrize("text, coeffs", [("x^2+x+1", [1, 1, 1]), ("x^2", [0, 0, 1]),
                                          ("x", [0, 1]), ("2*x^3 + 1", [1, 0, 0, 2]),
                                          ("x^2-1", [2, 0, 1])])
def test_parse_poly(text, coeffs):
    assert parse_poly(text, 3) == coeffs


def test_compile_spec_examples(upper_ring):
    assert compile_spec("zmod:9") == zmod(9)
    assert rc.is_isomorphic(compile_spec("closure(matrix:zmod:2:2; E11,E12,E22)"), upper_ring)
    assert compile_spec("product(zmod:4, zmod:4)").order == 16


@pytest.mark.parametrize("text", [
    "poly:2:x^2+1", "matrix:poly:2:x^2:1", "zeromul:2,4", "product(zeromul:2, zmod:3)",
    "product(zmod:3, zeromul:2,2)", "closure(zmod:12; 3)", "closure(matrix:zmod:2:2; E1_2, 8)",
    "  zmod:5  ",
])
def test_compile_spec_accepts(text):
    R = compile_spec(text)
    assert R.order >= 1 and R.name == text.strip()


@pytest.mark.parametrize("text, exc", [
    ("zmod9", SpecParseError), ("zmod:", SpecParseError), ("zmod:4 junk", SpecParseError),
    ("closure(zmod:4; E11)", SpecParseError), ("poly:4:x^2", ConstructionError),
    ("zmod:5000", CapExceeded), ("closure(matrix:zmod:2:2; E31)", ConstructionError),
    ("file:/nonexistent/ring.json", ConstructionError),
])
def test_compile_spec_errors(text, exc):
    with pytest.raises(exc):
        compile_spec(text)


def test_compile_spec_parse_error_position():
    with pytest.raises(SpecParseError) as info:
        compile_spec("product(zmod:2; zmod:3)")
    assert info.value.pos == len("product(zmod:2")


def test_compile_file_spec(tmp_path):
    path = tmp_path / "r.json"
    rc.save_ring(zmod(6), path)
    assert compile_spec(f"file:{path}") == zmod(6)
    assert compile_spec(f"product(file:{path}, zmod:1)").order == 6


def test_cap_override():
    with pytest.raises(CapExceeded):
        compile_spec("zmod:20", cap=10)
    assert compile_spec("zmod:20", cap=20).order == 20
