"""Tanner graph representation, alist / edge-list I/O and basic graph queries."""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlistError",
    "TannerGraph",
    "VariableSubset",
    "as_subset",
    "parse_alist",
    "serialize_alist",
    "read_alist",
    "write_alist",
    "parse_edgelist",
    "serialize_edgelist",
    "girth",
    "neighborhood",
    "variable_neighbors",
    "gf2_rank",
    "code_rate",
    "null_space_basis",
    "find_nonzero_codeword",
    "syndrome",
]

# Sorted tuple of distinct variable indices.
VariableSubset = tuple[int, ...]


class AlistError(ValueError):
    """Malformed alist or edge-list input; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TannerGraph:
    """Bipartite variable/check graph of a parity-check matrix.

    Adjacency is stored in both directions. Instances are immutable after
    construction and safe to share between threads or processes.

    Parameters
    ----------
    n_variables, n_checks : int
        Number of variable nodes (columns of H) and check nodes (rows of H).
    var_adjacency : sequence of sequences of int
        For each variable, the ordered list of adjacent check indices.
    check_adjacency : sequence of sequences of int, optional
        For each check, the ordered list of adjacent variable indices. Derived
        from ``var_adjacency`` when omitted; validated for consistency when given.
    """

    _frozen = ("n_variables", "n_checks", "var_adjacency", "check_adjacency")

    def __init__(
        self,
        n_variables: int,
        n_checks: int,
        var_adjacency: Sequence[Sequence[int]],
        check_adjacency: Sequence[Sequence[int]] | None = None,
    ):
        if n_variables < 0 or n_checks < 0:
            raise ValueError("node counts must be non-negative")
        if len(var_adjacency) != n_variables:
            raise ValueError(f"expected {n_variables} variable lists, got {len(var_adjacency)}")
        var_adj = tuple(tuple(int(c) for c in row) for row in var_adjacency)
        for v, row in enumerate(var_adj):
            if len(set(row)) != len(row):
                raise ValueError(f"duplicate edge at variable {v}")
            for c in row:
                if not 0 <= c < n_checks:
                    raise ValueError(f"check index {c} out of range at variable {v}")
        if check_adjacency is None:
            rows: list[list[int]] = [[] for _ in range(n_checks)]
            for v, row in enumerate(var_adj):
                for c in row:
                    rows[c].append(v)
            chk_adj = tuple(tuple(r) for r in rows)
        else:
            if len(check_adjacency) != n_checks:
                raise ValueError(f"expected {n_checks} check lists, got {len(check_adjacency)}")
            chk_adj = tuple(tuple(int(v) for v in row) for row in check_adjacency)
            for c, row in enumerate(chk_adj):
                if len(set(row)) != len(row):
                    raise ValueError(f"duplicate edge at check {c}")
                for v in row:
                    if not 0 <= v < n_variables:
                        raise ValueError(f"variable index {v} out of range at check {c}")
            from_var = {(v, c) for v, row in enumerate(var_adj) for c in row}
            from_chk = {(v, c) for c, row in enumerate(chk_adj) for v in row}
            if from_var != from_chk:
                raise ValueError("variable and check adjacency lists describe different edge sets")
        object.__setattr__(self, "n_variables", n_variables)
        object.__setattr__(self, "n_checks", n_checks)
        object.__setattr__(self, "var_adjacency", var_adj)
        object.__setattr__(self, "check_adjacency", chk_adj)

    def __setattr__(self, name, value):
        if name in TannerGraph._frozen:
            raise AttributeError("TannerGraph is immutable")
        object.__setattr__(self, name, value)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, n_variables: int, n_checks: int, edges: Iterable[tuple[int, int]]) -> "TannerGraph":
        rows: list[list[int]] = [[] for _ in range(n_variables)]
        for v, c in edges:
            if not 0 <= v < n_variables:
                raise ValueError(f"variable index {v} out of range")
            rows[v].append(c)
        return cls(n_variables, n_checks, rows)

    @classmethod
    def from_matrix(cls, H) -> "TannerGraph":
        H = np.asarray(H)
        if H.ndim != 2:
            raise ValueError("parity-check matrix must be 2-D")
        m, n = H.shape
        rows = [np.flatnonzero(H[:, v] % 2).tolist() for v in range(n)]
        return cls(n, m, rows)

    def to_matrix(self) -> np.ndarray:
        H = np.zeros((self.n_checks, self.n_variables), dtype=np.uint8)
        H[self.edge_checks, self.edge_vars] = 1
        return H

    # degree metadata ------------------------------------------------------

    @cached_property
    def var_degrees(self) -> np.ndarray:
        return np.array([len(r) for r in self.var_adjacency], dtype=np.int64)

    @cached_property
    def check_degrees(self) -> np.ndarray:
        return np.array([len(r) for r in self.check_adjacency], dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.var_degrees.sum())

    @property
    def left_degree(self) -> int | None:
        """Common variable degree, or None for a left-irregular graph."""
        degs = set(self.var_degrees.tolist())
        return degs.pop() if len(degs) == 1 else None

    @property
    def right_degree(self) -> int | None:
        degs = set(self.check_degrees.tolist())
        return degs.pop() if len(degs) == 1 else None

    def is_left_regular(self, gamma: int | None = None) -> bool:
        d = self.left_degree
        return d is not None and (gamma is None or d == gamma)

    # edge arrays in variable-major order ------------------------------------

    @cached_property
    def edge_vars(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_variables), self.var_degrees)

    @cached_property
    def edge_checks(self) -> np.ndarray:
        return np.fromiter(
            (c for row in self.var_adjacency for c in row), dtype=np.int64, count=self.n_edges
        )

    @cached_property
    def check_bitmasks(self) -> tuple[int, ...]:
        """Per-variable check neighborhood as an integer bitmask."""
        return tuple(sum(1 << c for c in row) for row in self.var_adjacency)

    def __repr__(self) -> str:
        return (
            f"TannerGraph(n_variables={self.n_variables}, n_checks={self.n_checks}, "
            f"n_edges={self.n_edges})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (
            self.n_variables == other.n_variables
            and self.n_checks == other.n_checks
            and [sorted(r) for r in self.var_adjacency] == [sorted(r) for r in other.var_adjacency]
        )

    def __hash__(self) -> int:
        return hash((self.n_variables, self.n_checks, tuple(tuple(sorted(r)) for r in self.var_adjacency)))

    def __reduce__(self):
        return (TannerGraph, (self.n_variables, self.n_checks, self.var_adjacency, self.check_adjacency))


def as_subset(g: TannerGraph, members: Iterable[int]) -> VariableSubset:
    """Validate ``members`` against ``g`` and return them as a sorted tuple."""
    out = tuple(sorted(int(v) for v in members))
    if len(set(out)) != len(out):
        raise ValueError("subset members must be distinct")
    for v in out:
        if not 0 <= v < g.n_variables:
            raise ValueError(f"variable {v} out of range")
    return out


# --------------------------------------------------------------------------
# alist

def _tokens(text: str | bytes) -> list[tuple[int, list[str]]]:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if toks:
            lines.append((lineno, toks))
    return lines


def _ints(lineno: int, toks: list[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise AlistError(f"non-integer entry in {' '.join(toks)!r}", lineno) from None


def parse_alist(text: str | bytes) -> TannerGraph:
    """Parse MacKay's alist format.

    Zero entries in the body are padding and dropped. Declared degrees are
    checked against the body, and the variable-side and check-side lists must
    describe the same edge set.

    Raises
    ------
    AlistError
        On any inconsistency, with the offending line number attached.
    """
    lines = _tokens(text)
    if len(lines) < 4:
        raise AlistError("truncated header (need 4 header lines)", lines[-1][0] if lines else 1)
    ln, head = lines[0]
    head = _ints(ln, head)
    if len(head) != 2 or min(head) < 0:
        raise AlistError("first line must be 'n m'", ln)
    n, m = head
    ln, maxd = lines[1]
    maxd = _ints(ln, maxd)
    if len(maxd) != 2:
        raise AlistError("second line must be 'max_var_degree max_check_degree'", ln)
    ln_vd, vdeg = lines[2]
    vdeg = _ints(ln_vd, vdeg)
    if len(vdeg) != n:
        raise AlistError(f"expected {n} variable degrees, got {len(vdeg)}", ln_vd)
    ln_cd, cdeg = lines[3]
    cdeg = _ints(ln_cd, cdeg)
    if len(cdeg) != m:
        raise AlistError(f"expected {m} check degrees, got {len(cdeg)}", ln_cd)
    if (vdeg and max(vdeg) != maxd[0]) or (cdeg and max(cdeg) != maxd[1]):
        raise AlistError("maximum degrees disagree with degree lists", lines[1][0])

    body = lines[4:]
    if len(body) < n + m:
        last = body[-1][0] if body else lines[3][0]
        raise AlistError(f"expected {n + m} body lines, got {len(body)}", last)
    if len(body) > n + m:
        raise AlistError(f"unexpected extra line (expected {n + m} body lines)", body[n + m][0])

    var_adj: list[list[int]] = []
    for v in range(n):
        ln, toks = body[v]
        entries = [x for x in _ints(ln, toks) if x != 0]
        for x in entries:
            if not 1 <= x <= m:
                raise AlistError(f"check index {x} out of range 1..{m}", ln)
        if len(entries) != vdeg[v]:
            raise AlistError(f"variable {v + 1} lists {len(entries)} checks, degree says {vdeg[v]}", ln)
        if len(set(entries)) != len(entries):
            raise AlistError(f"duplicate check index for variable {v + 1}", ln)
        var_adj.append([x - 1 for x in entries])

    chk_adj: list[list[int]] = []
    for c in range(m):
        ln, toks = body[n + c]
        entries = [x for x in _ints(ln, toks) if x != 0]
        for x in entries:
            if not 1 <= x <= n:
                raise AlistError(f"variable index {x} out of range 1..{n}", ln)
        if len(entries) != cdeg[c]:
            raise AlistError(f"check {c + 1} lists {len(entries)} variables, degree says {cdeg[c]}", ln)
        if len(set(entries)) != len(entries):
            raise AlistError(f"duplicate variable index for check {c + 1}", ln)
        chk_adj.append([x - 1 for x in entries])

    # locate the first inconsistent line for a useful message
    var_sets = [set(r) for r in var_adj]
    for c, row in enumerate(chk_adj):
        for v in row:
            if c not in var_sets[v]:
                raise AlistError(f"check {c + 1} lists variable {v + 1}, which does not list it", body[n + c][0])
    chk_sets = [set(r) for r in chk_adj]
    for v, row in enumerate(var_adj):
        for c in row:
            if v not in chk_sets[c]:
                raise AlistError(f"variable {v + 1} lists check {c + 1}, which does not list it", body[v][0])
    return TannerGraph(n, m, var_adj, chk_adj)


def serialize_alist(g: TannerGraph, pad: bool = False) -> str:
    """Render ``g`` in alist format (1-based, no zero padding unless ``pad``)."""
    vd, cd = g.var_degrees, g.check_degrees
    max_v = int(vd.max()) if g.n_variables else 0
    max_c = int(cd.max()) if g.n_checks else 0

    def row(entries, width):
        vals = [str(x + 1) for x in entries]
        if pad:
            vals += ["0"] * (width - len(vals))
        return " ".join(vals)

    out = [
        f"{g.n_variables} {g.n_checks}",
        f"{max_v} {max_c}",
        " ".join(map(str, vd.tolist())),
        " ".join(map(str, cd.tolist())),
    ]
    out += [row(r, max_v) for r in g.var_adjacency]
    out += [row(r, max_c) for r in g.check_adjacency]
    return "\n".join(out) + "\n"


def read_alist(path) -> TannerGraph:
    with open(path, "rb") as fh:
        return parse_alist(fh.read())


def write_alist(g: TannerGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_alist(g))


# --------------------------------------------------------------------------
# edge list

def parse_edgelist(
    text: str | bytes, n_variables: int | None = None, n_checks: int | None = None
) -> TannerGraph:
    """Parse ``v c`` lines (0-based); ``#`` starts a comment.

    Node counts default to one past the largest index seen.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) != 2:
            raise AlistError("expected two integers 'v c'", lineno)
        v, c = _ints(lineno, body)
        if v < 0 or c < 0:
            raise AlistError("indices must be non-negative", lineno)
        if n_variables is not None and v >= n_variables:
            raise AlistError(f"variable index {v} out of range", lineno)
        if n_checks is not None and c >= n_checks:
            raise AlistError(f"check index {c} out of range", lineno)
        edges.append((v, c, lineno))
    n = n_variables if n_variables is not None else max((e[0] for e in edges), default=-1) + 1
    m = n_checks if n_checks is not None else max((e[1] for e in edges), default=-1) + 1
    seen = set()
    for v, c, lineno in edges:
        if (v, c) in seen:
            raise AlistError(f"duplicate edge ({v}, {c})", lineno)
        seen.add((v, c))
    return TannerGraph.from_edges(n, m, ((v, c) for v, c, _ in edges))


def serialize_edgelist(g: TannerGraph) -> str:
    lines = [f"# n_variables={g.n_variables} n_checks={g.n_checks}"]
    lines += [f"{v} {c}" for v, row in enumerate(g.var_adjacency) for c in row]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# structural queries

def girth(g: TannerGraph) -> int | None:
    """Length of the shortest cycle, or None when the graph is acyclic.

    Breadth-first search from every variable node; each search stops once
    its depth can no longer improve on the best cycle found so far.
    """
    n = g.n_variables
    var_adj, chk_adj = g.var_adjacency, g.check_adjacency
    best = None
    # nodes: variables 0..n-1, checks n..n+m-1
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if best is not None and 2 * du + 1 >= best:
                break
            nbrs = [n + c for c in var_adj[u]] if u < n else chk_adj[u - n]
            for w in nbrs:
                if w == parent[u]:
                    continue
                if w in dist:
                    length = du + dist[w] + 1
                    if best is None or length < best:
                        best = length
                else:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
        if best == 4:
            break
    return best


def neighborhood(g: TannerGraph, subset: Iterable[int]) -> frozenset[int]:
    """Checks adjacent to at least one variable of ``subset``."""
    out: set[int] = set()
    for v in subset:
        out.update(g.var_adjacency[v])
    return frozenset(out)


def variable_neighbors(g: TannerGraph, checks: Iterable[int]) -> frozenset[int]:
    """Variables adjacent to at least one of ``checks``."""
    out: set[int] = set()
    for c in checks:
        out.update(g.check_adjacency[c])
    return frozenset(out)


# --------------------------------------------------------------------------
# GF(2) linear algebra

def _row_reduce(H: np.ndarray) -> tuple[np.ndarray, list[int]]:
    A = (np.array(H, dtype=np.uint8) & 1).copy()
    m, n = A.shape
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, col])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, col])
        others = others[others != r]
        A[others] ^= A[r]
        pivots.append(col)
        r += 1
    return A[:r], pivots


def gf2_rank(g: TannerGraph) -> int:
    return len(_row_reduce(g.to_matrix())[1])


def code_rate(g: TannerGraph) -> float:
    """Dimension over length, from the GF(2) rank of H (redundant rows allowed)."""
    if g.n_variables == 0:
        return 0.0
    return 1.0 - gf2_rank(g) / g.n_variables


def null_space_basis(g: TannerGraph) -> np.ndarray:
    """Basis of {x : Hx = 0 over GF(2)}, one vector per row."""
    R, pivots = _row_reduce(g.to_matrix())
    n = g.n_variables
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = R[row, f]
    return basis


def find_nonzero_codeword(g: TannerGraph) -> np.ndarray | None:
    """Some nonzero codeword of ``g``, or None when the code is trivial."""
    basis = null_space_basis(g)
    if basis.shape[0] == 0:
        return None
    return basis[0]


def syndrome(g: TannerGraph, x) -> np.ndarray:
    """H x over GF(2); ``x`` may carry leading batch dimensions."""
    x = np.asarray(x, dtype=np.int64)
    return ((x @ g.to_matrix().T.astype(np.int64)) & 1).astype(np.uint8)
