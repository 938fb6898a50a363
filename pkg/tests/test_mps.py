import numpy as np
import pytest

from pdhglp import (GeneralLP, MpsParseError, SparseMatrix, as_general, house,
                    parse_mps, random_planted_lp, structurally_equal, wedge,
                    write_mps)

BASIC = """\
NAME TEST
* a comment line

ROWS
 N COST
 E R1
 L R2
 G R3
COLUMNS
 X1 COST 1.0 R1 2.0
 X1 R2 1.0
 X2 COST -1.5 R1 1.0
 X2 R3 4.0
RHS
 RHS R1 3.0 R2 2.0
 RHS R3 1.0
BOUNDS
 UP BND X2 5.0
ENDATA
"""


def test_parse_basic_fixture():
    gl = parse_mps(BASIC)
    assert gl.n == 2 and gl.m_E == 1 and gl.m_I == 3
    assert np.array_equal(gl.A_E.to_dense(), [[2.0, 1.0]])
    assert np.array_equal(gl.b_E, [3.0])
    # L row kept, G row negated, then the upper bound as a row
    assert np.array_equal(gl.A_I.to_dense(),
                          [[1.0, 0.0], [0.0, -4.0], [0.0, 1.0]])
    assert np.array_equal(gl.b_I, [2.0, -1.0, 5.0])
    assert np.array_equal(gl.c, [1.0, -1.5])


def test_parse_accepts_bytes():
    gl = parse_mps(BASIC.encode())
    assert gl.n == 2


def test_objsense_maximize_negates_objective():
    text = """\
NAME T
OBJSENSE
 MAX
ROWS
 N OBJ
 E R1
COLUMNS
 X1 OBJ 2.0 R1 1.0
RHS
 RHS R1 1.0
ENDATA
"""
    gl = parse_mps(text)
    assert np.array_equal(gl.c, [-2.0])


def test_fixed_bound_becomes_equality_row():
    text = """\
NAME T
ROWS
 N OBJ
 L R1
COLUMNS
 X1 OBJ 1.0 R1 1.0
 X2 OBJ 2.0 R1 1.0
RHS
 R1 4.0
BOUNDS
 FX BND X2 1.5
ENDATA
"""
    gl = parse_mps(text)
    assert gl.m_E == 1 and gl.m_I == 1
    assert np.array_equal(gl.A_E.to_dense(), [[0.0, 1.0]])
    assert np.array_equal(gl.b_E, [1.5])


def test_free_variable_is_split():
    text = """\
NAME T
ROWS
 N OBJ
 E R1
COLUMNS
 X1 OBJ 1.0 R1 1.0
 X2 OBJ 2.0 R1 3.0
RHS
 RHS R1 6.0
BOUNDS
 FR BND X1
ENDATA
"""
    gl = parse_mps(text)
    assert gl.n == 3  # X1 -> plus/minus pair, X2 unchanged
    assert np.array_equal(gl.A_E.to_dense(), [[1.0, -1.0, 3.0]])
    assert np.array_equal(gl.c, [1.0, -1.0, 2.0])


def test_nonzero_lower_bound_becomes_row():
    text = """\
NAME T
ROWS
 N OBJ
 L R1
COLUMNS
 X1 OBJ 1.0 R1 1.0
RHS
 RHS R1 4.0
BOUNDS
 LO BND X1 0.5
ENDATA
"""
    gl = parse_mps(text)
    # -x1 <= -0.5 appended after the L row
    assert np.array_equal(gl.A_I.to_dense(), [[1.0], [-1.0]])
    assert np.array_equal(gl.b_I, [4.0, -0.5])


def test_duplicate_entries_accumulate():
    text = """\
NAME T
ROWS
 N OBJ
 E R1
COLUMNS
 X1 OBJ 1.0 R1 1.0
 X1 R1 2.0 OBJ 0.5
RHS
 RHS R1 1.0
 RHS R1 1.0
ENDATA
"""
    gl = parse_mps(text)
    assert np.array_equal(gl.A_E.to_dense(), [[3.0]])
    assert np.array_equal(gl.c, [1.5])
    assert np.array_equal(gl.b_E, [2.0])


def test_integer_marker_warns_and_is_ignored():
    text = """\
NAME T
ROWS
 N OBJ
 E R1
COLUMNS
 M1 'MARKER' 'INTORG'
 X1 OBJ 1.0 R1 1.0
 M2 'MARKER' 'INTEND'
RHS
 RHS R1 1.0
ENDATA
"""
    with pytest.warns(UserWarning, match="integer markers"):
        gl = parse_mps(text)
    assert gl.n == 1


def test_objective_rhs_warns_and_is_ignored():
    text = """\
NAME T
ROWS
 N OBJ
 E R1
COLUMNS
 X1 OBJ 1.0 R1 1.0
RHS
 RHS OBJ 5.0 R1 1.0
ENDATA
"""
    with pytest.warns(UserWarning, match="constant offset"):
        gl = parse_mps(text)
    assert np.array_equal(gl.b_E, [1.0])


@pytest.mark.parametrize("text,match", [
    ("NAME T\nRANGES\nENDATA\n", "RANGES"),
    ("NAME T\nROWS\n N OBJ\n", "ENDATA"),
    ("NAME T\nROWS\n E R1\nENDATA\n", "objective"),
    ("NAME T\nROWS\n N OBJ\n N OBJ2\nENDATA\n", "multiple objective"),
    ("NAME T\nROWS\n N OBJ\n E R1\n E R1\nENDATA\n", "duplicate row"),
    ("NAME T\nROWS\n N OBJ\nCOLUMNS\n X1 BAD 1.0\nENDATA\n", "unknown row"),
    ("NAME T\nROWS\n N OBJ\nCOLUMNS\n X1 OBJ abc\nENDATA\n", "malformed"),
    ("NAME T\nROWS\n N OBJ\nCOLUMNS\n X1 OBJ 1.0\nBOUNDS\n"
     " BV BND X1\nENDATA\n", "integer"),
    ("NAME T\nROWS\n N OBJ\nCOLUMNS\n X1 OBJ 1.0\nBOUNDS\n"
     " UP BND X9 1.0\nENDATA\n", "unknown column"),
    (" X1 OBJ 1.0\nENDATA\n", "outside"),
    ("NAME T\nROWS\n Z R1\nENDATA\n", "unknown row type"),
])
def test_parse_errors(text, match):
    with pytest.raises(MpsParseError, match=match):
        parse_mps(text)


def test_round_trip_house_and_wedge_exact():
    for gl in (house(0.5, 0.1), as_general(wedge(1e-2))):
        back = parse_mps(write_mps(gl))
        assert structurally_equal(gl, back, tol=0.0)


def test_round_trip_random_planted():
    lp, _ = random_planted_lp(5, 9, seed=7)
    gl = as_general(lp)
    assert structurally_equal(gl, parse_mps(write_mps(gl)), tol=0.0)


def test_round_trip_keeps_empty_column():
    A_E = SparseMatrix.from_dense([[1.0, 0.0]])
    A_I = SparseMatrix.from_dense(np.zeros((0, 2)))
    gl = GeneralLP(A_E, np.array([1.0]), A_I, np.zeros(0),
                   np.array([1.0, 2.0]), 2)
    back = parse_mps(write_mps(gl))
    assert back.n == 2
    assert structurally_equal(gl, back, tol=0.0)


def test_structurally_equal_detects_changes():
    gl = house(0.5, 0.1)
    other = house(0.5, 0.1)
    other.c[0] += 1e-12
    assert not structurally_equal(gl, other, tol=0.0)
    assert structurally_equal(gl, other, tol=1e-10)
