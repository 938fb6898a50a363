"""Free-format MPS parsing and writing for GeneralLP fixtures.

Supported sections: NAME, OBJSENSE, ROWS, COLUMNS (integer markers ignored
with a warning), RHS, BOUNDS (LO, UP, FX, FR, MI, PL), ENDATA.  RANGES and
BV bounds raise.  G rows are negated into <= rows; variables with a lower
bound other than 0 get split or an extra constraint row so that the result
is always "x >= 0 plus equality/inequality rows".
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import GeneralLP
from .sparse import SparseMatrix


class MpsParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass
class MpsDocument:
    name: str = ""
    objective_row: str = ""
    maximize: bool = False
    row_types: dict = field(default_factory=dict)   # name -> E/L/G
    row_order: list = field(default_factory=list)   # constraint rows in order
    col_order: list = field(default_factory=list)
    entries: list = field(default_factory=list)     # (col, row, value)
    rhs: dict = field(default_factory=dict)         # row -> value
    bounds: dict = field(default_factory=dict)      # col -> [lo, up]


def _tokens(line):
    return line.split()


def parse_mps_document(text):
    """Parse raw MPS text into an MpsDocument (no LP construction yet)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    doc = MpsDocument()
    section = None
    saw_endata = False
    pending_objsense = False
    known_cols = set()
    int_marker_warned = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        is_header = not raw[0].isspace()
        toks = _tokens(raw)

        if pending_objsense and not is_header:
            doc.maximize = toks[0].upper() in ("MAX", "MAXIMIZE")
            pending_objsense = False
            continue
        pending_objsense = False

        if is_header:
            head = toks[0].upper()
            if head == "NAME":
                doc.name = toks[1] if len(toks) > 1 else ""
                section = "NAME"
            elif head == "OBJSENSE":
                if len(toks) > 1:
                    doc.maximize = toks[1].upper() in ("MAX", "MAXIMIZE")
                else:
                    pending_objsense = True
                section = "OBJSENSE"
            elif head in ("ROWS", "COLUMNS", "RHS", "BOUNDS"):
                section = head
            elif head == "RANGES":
                raise MpsParseError("RANGES section is not supported", lineno)
            elif head == "ENDATA":
                saw_endata = True
                section = "ENDATA"
                break
            else:
                raise MpsParseError(f"unknown section {toks[0]!r}", lineno)
            continue

        if section == "ROWS":
            if len(toks) != 2:
                raise MpsParseError("ROWS entries need a type and a name", lineno)
            rtype, rname = toks[0].upper(), toks[1]
            if rname in doc.row_types or rname == doc.objective_row:
                raise MpsParseError(f"duplicate row name {rname!r}", lineno)
            if rtype == "N":
                if doc.objective_row:
                    raise MpsParseError("multiple objective (N) rows", lineno)
                doc.objective_row = rname
            elif rtype in ("E", "L", "G"):
                doc.row_types[rname] = rtype
                doc.row_order.append(rname)
            else:
                raise MpsParseError(f"unknown row type {rtype!r}", lineno)
        elif section == "COLUMNS":
            if "'MARKER'" in toks:
                if not int_marker_warned:
                    warnings.warn("integer markers ignored; parsing the LP relaxation")
                    int_marker_warned = True
                continue
            if len(toks) < 3 or len(toks) % 2 == 0:
                raise MpsParseError("COLUMNS entries come in (row, value) pairs", lineno)
            col = toks[0]
            if col not in known_cols:
                known_cols.add(col)
                doc.col_order.append(col)
            for k in range(1, len(toks), 2):
                row = toks[k]
                if row != doc.objective_row and row not in doc.row_types:
                    raise MpsParseError(f"unknown row {row!r}", lineno)
                try:
                    val = float(toks[k + 1])
                except ValueError:
                    raise MpsParseError(f"malformed number {toks[k + 1]!r}", lineno)
                if not math.isfinite(val):
                    raise MpsParseError(f"non-finite coefficient {val!r}", lineno)
                doc.entries.append((col, row, val))
        elif section == "RHS":
            # optional set-name first token
            body = toks
            if body[0] not in doc.row_types and body[0] != doc.objective_row:
                body = body[1:]
            if not body or len(body) % 2 != 0:
                raise MpsParseError("RHS entries come in (row, value) pairs", lineno)
            for k in range(0, len(body), 2):
                row = body[k]
                if row == doc.objective_row:
                    warnings.warn("objective-row RHS (constant offset) ignored")
                    continue
                if row not in doc.row_types:
                    raise MpsParseError(f"unknown row {row!r}", lineno)
                try:
                    val = float(body[k + 1])
                except ValueError:
                    raise MpsParseError(f"malformed number {body[k + 1]!r}", lineno)
                doc.rhs[row] = doc.rhs.get(row, 0.0) + val
        elif section == "BOUNDS":
            btype = toks[0].upper()
            if btype in ("BV", "LI", "UI"):
                raise MpsParseError(f"bound type {btype} (integer) not supported", lineno)
            if btype not in ("LO", "UP", "FX", "FR", "MI", "PL"):
                raise MpsParseError(f"unknown bound type {btype!r}", lineno)
            needs_value = btype in ("LO", "UP", "FX")
            body = toks[1:]
            # optional bound-set name before the column name
            expect = 2 if needs_value else 1
            if len(body) == expect + 1:
                body = body[1:]
            if len(body) != expect:
                raise MpsParseError("malformed BOUNDS entry", lineno)
            col = body[0]
            if col not in known_cols:
                raise MpsParseError(f"bound on unknown column {col!r}", lineno)
            lo, up = doc.bounds.get(col, (0.0, math.inf))
            if needs_value:
                try:
                    val = float(body[1])
                except ValueError:
                    raise MpsParseError(f"malformed number {body[1]!r}", lineno)
            if btype == "LO":
                lo = val
            elif btype == "UP":
                up = val
            elif btype == "FX":
                lo = up = val
            elif btype == "FR":
                lo, up = -math.inf, math.inf
            elif btype == "MI":
                lo = -math.inf
            elif btype == "PL":
                up = math.inf
            doc.bounds[col] = (lo, up)
        elif section in ("NAME", "OBJSENSE", None):
            raise MpsParseError("data line outside of a section", lineno)

    if not saw_endata:
        raise MpsParseError("missing ENDATA")
    if not doc.objective_row:
        raise MpsParseError("no objective (N) row declared")
    return doc


def _build_general_lp(doc):
    # column layout: split variables with lower bound -inf into a
    # difference of nonnegatives (plus column then minus column)
    col_index = {}
    split = {}
    n = 0
    for col in doc.col_order:
        lo, up = doc.bounds.get(col, (0.0, math.inf))
        if lo > up:
            raise MpsParseError(f"infeasible bounds on column {col!r}")
        col_index[col] = n
        if lo == -math.inf:
            split[col] = True
            n += 2
        else:
            split[col] = False
            n += 1

    c = np.zeros(n)
    sign = -1.0 if doc.maximize else 1.0
    eq_rows = [r for r in doc.row_order if doc.row_types[r] == "E"]
    ineq_rows = [r for r in doc.row_order if doc.row_types[r] in ("L", "G")]
    eq_index = {r: i for i, r in enumerate(eq_rows)}
    ineq_index = {r: i for i, r in enumerate(ineq_rows)}

    e_trip = ([], [], [])
    i_trip = ([], [], [])

    def add(trip, row, col, val):
        trip[0].append(row)
        trip[1].append(col)
        trip[2].append(val)

    def add_var_coef(trip, row, col, val):
        j = col_index[col]
        add(trip, row, j, val)
        if split[col]:
            add(trip, row, j + 1, -val)

    obj_acc = {}
    for col, row, val in doc.entries:
        if row == doc.objective_row:
            obj_acc[col] = obj_acc.get(col, 0.0) + val
        elif doc.row_types[row] == "E":
            add_var_coef(e_trip, eq_index[row], col, val)
        else:
            v = val if doc.row_types[row] == "L" else -val
            add_var_coef(i_trip, ineq_index[row], col, v)

    for col, val in obj_acc.items():
        j = col_index[col]
        c[j] = sign * val
        if split[col]:
            c[j + 1] = -sign * val

    b_E = [doc.rhs.get(r, 0.0) for r in eq_rows]
    b_I = [doc.rhs.get(r, 0.0) if doc.row_types[r] == "L" else -doc.rhs.get(r, 0.0)
           for r in ineq_rows]
    m_E, m_I = len(eq_rows), len(ineq_rows)

    # bound rows, in column order: upper bounds and nonzero finite lower
    # bounds become inequality rows, fixings become equality rows
    for col in doc.col_order:
        lo, up = doc.bounds.get(col, (0.0, math.inf))
        if lo == up:
            add_var_coef(e_trip, m_E, col, 1.0)
            b_E.append(lo)
            m_E += 1
            continue
        if up < math.inf:
            add_var_coef(i_trip, m_I, col, 1.0)
            b_I.append(up)
            m_I += 1
        if lo != 0.0 and lo > -math.inf:
            add_var_coef(i_trip, m_I, col, -1.0)
            b_I.append(-lo)
            m_I += 1

    A_E = SparseMatrix.from_coo(m_E, n, *e_trip)
    A_I = SparseMatrix.from_coo(m_I, n, *i_trip)
    return GeneralLP(A_E, np.array(b_E), A_I, np.array(b_I), c, n)


def parse_mps(text):
    """Parse MPS text (str or bytes) into a GeneralLP."""
    return _build_general_lp(parse_mps_document(text))


def _fmt(v):
    return repr(float(v))


def write_mps(gl, name="PDHGLP"):
    """Serialize a GeneralLP to free-format MPS text.

    Row names: OBJ, E{i}, L{i}; columns X{j}.  Every column gets an
    explicit objective coefficient (zero included) so that empty columns
    survive the round trip.  parse_mps(write_mps(gl)) is structurally
    identical to gl.
    """
    lines = [f"NAME {name}", "ROWS", " N OBJ"]
    for i in range(gl.m_E):
        lines.append(f" E E{i}")
    for i in range(gl.m_I):
        lines.append(f" L L{i}")
    # column-major views of both blocks
    by_col = {j: [] for j in range(gl.n)}
    for mat, tag in ((gl.A_E, "E"), (gl.A_I, "L")):
        for i in range(mat.n_rows):
            lo, hi = mat.indptr[i], mat.indptr[i + 1]
            for p in range(lo, hi):
                by_col[int(mat.indices[p])].append((tag, i, mat.data[p]))
    lines.append("COLUMNS")
    for j in range(gl.n):
        lines.append(f" X{j} OBJ {_fmt(gl.c[j])}")
        for tag, i, v in by_col[j]:
            lines.append(f" X{j} {tag}{i} {_fmt(v)}")
    lines.append("RHS")
    for i in range(gl.m_E):
        if gl.b_E[i] != 0.0:
            lines.append(f" RHS E{i} {_fmt(gl.b_E[i])}")
    for i in range(gl.m_I):
        if gl.b_I[i] != 0.0:
            lines.append(f" RHS L{i} {_fmt(gl.b_I[i])}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def structurally_equal(g1, g2, tol=0.0):
    """Same dimensions, same sparsity patterns, coefficients equal within
    tol (exact when tol=0)."""
    def mat_eq(a, b):
        if a.shape != b.shape or not np.array_equal(a.indptr, b.indptr) \
           or not np.array_equal(a.indices, b.indices):
            return False
        return np.allclose(a.data, b.data, rtol=0.0, atol=tol) if tol \
            else np.array_equal(a.data, b.data)

    def vec_eq(u, v):
        if u.shape != v.shape:
            return False
        return np.allclose(u, v, rtol=0.0, atol=tol) if tol \
            else np.array_equal(u, v)

    return (g1.n == g2.n and mat_eq(g1.A_E, g2.A_E) and mat_eq(g1.A_I, g2.A_I)
            and vec_eq(g1.b_E, g2.b_E) and vec_eq(g1.b_I, g2.b_I)
            and vec_eq(g1.c, g2.c))
