"""Undirected simple graphs, deterministic generators, and exact edge counting.

The edge-count convention follows the double sum e(X, Y) = sum over x in X,
y in Y of A[x, y]. In particular an edge with both endpoints in X contributes
2 to e(X, X). This differs from the common "number of edges" convention and
is documented wherever counts surface.
"""

from __future__ import annotations

import numpy as np

from .errors import GenerationError, InputError

__all__ = [
    "Graph",
    "from_edge_list",
    "gen_named",
    "gen_erdos_renyi",
    "gen_random_regular",
    "edges_between",
    "degree_extrema",
    "read_edge_list",
    "write_edge_list",
]


class Graph:
    """Immutable undirected simple graph on vertices 0..n-1.

    Stores a CSR-style neighbor structure (sorted, symmetric, no loops,
    no multi-edges). Safe to share across threads after construction.
    """

    __slots__ = ("n", "m", "_indptr", "_indices", "_eu", "_ev", "_csr")

    def __init__(self, n, edges):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InputError(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        pairs = set()
        for e in edges:
            try:
                u, v = e
                u, v = int(u), int(v)
            except (TypeError, ValueError):
                raise InputError(f"edge {e!r} is not a vertex pair")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            pairs.add((u, v) if u < v else (v, u))
        self.n = n
        self.m = len(pairs)
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int64)
            self._eu, self._ev = arr[:, 0].copy(), arr[:, 1].copy()
        else:
            self._eu = np.empty(0, dtype=np.int64)
            self._ev = np.empty(0, dtype=np.int64)
        both = np.concatenate([self._eu, self._ev])
        other = np.concatenate([self._ev, self._eu])
        order = np.lexsort((other, both))
        counts = np.bincount(both, minlength=n)
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self._indptr[1:])
        self._indices = other[order]
        self._csr = None

    @classmethod
    def _from_sorted_pairs(cls, n, eu, ev):
        # generator fast path: caller guarantees canonical pair arrays
        # (u < v, unique, lexsorted), so python-level dedup is skipped
        self = cls.__new__(cls)
        self.n = int(n)
        self.m = len(eu)
        self._eu = np.asarray(eu, dtype=np.int64)
        self._ev = np.asarray(ev, dtype=np.int64)
        both = np.concatenate([self._eu, self._ev])
        other = np.concatenate([self._ev, self._eu])
        order = np.lexsort((other, both))
        counts = np.bincount(both, minlength=self.n)
        self._indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=self._indptr[1:])
        self._indices = other[order]
        self._csr = None
        return self

    @property
    def degrees(self):
        return np.diff(self._indptr)

    def degree(self, x):
        return int(self._indptr[x + 1] - self._indptr[x])

    def neighbors(self, x):
        """Sorted neighbor array of vertex x (a read-only view)."""
        if not (0 <= x < self.n):
            raise InputError(f"vertex {x} out of range")
        return self._indices[self._indptr[x]:self._indptr[x + 1]]

    def edge_arrays(self):
        """The m edges as parallel arrays (u, v) with u < v, lexsorted."""
        return self._eu, self._ev

    def adjacency(self):
        """Adjacency matrix as scipy CSR, built lazily and cached."""
        if self._csr is None:
            from scipy.sparse import csr_matrix

            data = np.ones(len(self._indices), dtype=np.float64)
            self._csr = csr_matrix(
                (data, self._indices, self._indptr), shape=(self.n, self.n)
            )
        return self._csr

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(n, edges):
    """Build a Graph from an iterable of unordered vertex pairs.

    Duplicate pairs (in either orientation) collapse to a single edge.
    Out-of-range endpoints and self-loops raise InputError.
    """
    return Graph(n, edges)


def gen_named(family, n):
    """Deterministic canonical graphs: cycle, path, complete, star,
    two_cliques_bridged.

    two_cliques_bridged puts cliques on [0, n/2) and [n/2, n) joined by the
    single edge (n/2 - 1, n/2); it requires even n >= 4. Cycles require
    n >= 3; the rest accept any n >= 1.
    """
    if family == "cycle":
        if n < 3:
            raise InputError(f"cycle needs n >= 3, got {n}")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "path":
        if n < 1:
            raise InputError(f"path needs n >= 1, got {n}")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if family == "complete":
        if n < 1:
            raise InputError(f"complete needs n >= 1, got {n}")
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if family == "star":
        if n < 1:
            raise InputError(f"star needs n >= 1, got {n}")
        return Graph(n, [(0, i) for i in range(1, n)])
    if family == "two_cliques_bridged":
        if n < 4 or n % 2:
            raise InputError(f"two_cliques_bridged needs even n >= 4, got {n}")
        half = n // 2
        edges = [(i, j) for i in range(half) for j in range(i + 1, half)]
        edges += [(i, j) for i in range(half, n) for j in range(i + 1, n)]
        edges.append((half - 1, half))
        return Graph(n, edges)
    raise InputError(f"unknown graph family {family!r}")


def gen_erdos_renyi(n, p, seed):
    """G(n, p): each of the C(n, 2) pairs present independently with
    probability p. Bit-reproducible given (n, p, seed).

    Pairs are drawn in row-major order over the upper triangle. The
    uniforms come out of the generator in fixed-size blocks, which leaves
    the stream (and so the sampled graph) identical to a pair-at-a-time
    loop while keeping memory linear in the block size.
    """
    if not (0.0 <= p <= 1.0):
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    if n < 1:
        raise InputError(f"vertex count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    offsets = np.zeros(n, dtype=np.int64)
    np.cumsum(np.arange(n - 1, 0, -1, dtype=np.int64), out=offsets[1:])
    total = int(offsets[-1])
    us, vs = [], []
    block = 1 << 21
    for start in range(0, total, block):
        take = min(block, total - start)
        hits = np.flatnonzero(rng.random(take) < p) + start
        rows = np.searchsorted(offsets, hits, side="right") - 1
        us.append(rows)
        vs.append(hits - offsets[rows] + rows + 1)
    empty = np.empty(0, dtype=np.int64)
    eu = np.concatenate(us) if us else empty
    ev = np.concatenate(vs) if vs else empty
    return Graph._from_sorted_pairs(n, eu, ev)


def gen_random_regular(n, d, seed, max_restarts=10000):
    """Random d-regular simple graph via the pairing (configuration) model.

    Stubs are shuffled and matched sequentially; stubs from rejected pairs
    (self-loops or repeats) are reshuffled and re-matched rather than
    restarting the whole pairing, because the probability that a raw pairing
    is simple decays like exp(-(d^2-1)/4) and is negligible already at
    d = 20. A full restart happens only when the leftover stubs admit no
    further legal pair. Deterministic given seed.
    """
    if n < 1 or d < 0:
        raise InputError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if (n * d) % 2:
        raise InputError(f"n*d must be even, got n={n}, d={d}")
    if d >= n:
        raise InputError(f"degree {d} impossible on {n} vertices")
    if d == 0:
        return Graph(n, [])
    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        pending = np.repeat(np.arange(n, dtype=np.int64), d)
        rng.shuffle(pending)
        present = set()
        while len(pending):
            leftover = []
            progressed = False
            for i in range(0, len(pending) - 1, 2):
                a, b = int(pending[i]), int(pending[i + 1])
                key = (a, b) if a < b else (b, a)
                if a == b or key in present:
                    leftover.append(a)
                    leftover.append(b)
                else:
                    present.add(key)
                    progressed = True
            if len(pending) % 2:
                leftover.append(int(pending[-1]))
            if leftover and not progressed:
                break  # stuck: remaining stubs admit no legal pair
            pending = np.array(leftover, dtype=np.int64)
            rng.shuffle(pending)
        else:
            return Graph(n, sorted(present))
    raise GenerationError(
        f"no simple {d}-regular pairing on {n} vertices in {max_restarts} restarts"
    )


def _as_vertex_array(g, X):
    xs = [int(x) for x in X]
    uniq = sorted(set(xs))
    if len(uniq) != len(xs):
        raise InputError("vertex set contains duplicate members")
    arr = np.asarray(uniq, dtype=np.int64)
    if len(arr) and (arr[0] < 0 or arr[-1] >= g.n):
        raise InputError(f"vertex set contains out-of-range members for n={g.n}")
    return arr


def edges_between(g, X, Y):
    """e(X, Y) = sum_{x in X} sum_{y in Y} A[x, y], exactly.

    Double-sum convention: an edge with both endpoints in X contributes 2
    to e(X, X). X and Y may overlap.
    """
    xs = _as_vertex_array(g, X)
    ys = _as_vertex_array(g, Y)
    if len(xs) == 0 or len(ys) == 0:
        return 0
    in_y = np.zeros(g.n, dtype=bool)
    in_y[ys] = True
    starts = g._indptr[xs]
    counts = g._indptr[xs + 1] - starts
    nz = counts > 0
    starts, counts = starts[nz], counts[nz]
    if len(starts) == 0:
        return 0
    # flat ragged-range gather of all neighbor slices at once
    cum = np.cumsum(counts)
    flat = np.ones(cum[-1], dtype=np.int64)
    flat[0] = starts[0]
    flat[cum[:-1]] = starts[1:] - starts[:-1] - counts[:-1] + 1
    neigh = g._indices[np.cumsum(flat)]
    return int(in_y[neigh].sum())


def degree_extrema(g):
    """(d_min, d_max) of the degree sequence."""
    degs = g.degrees
    return int(degs.min()), int(degs.max())


def write_edge_list(g, path):
    """Write the text format: first line "n m", then m lines "u v", u < v."""
    eu, ev = g.edge_arrays()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in zip(eu, ev):
            fh.write(f"{u} {v}\n")


def read_edge_list(path):
    """Read the edge-list text format, rejecting any format violation."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise InputError(f"{path}: empty edge-list file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"{path}: header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"{path}: non-integer header {lines[0]!r}")
    if len(lines) - 1 != m:
        raise InputError(f"{path}: header claims {m} edges, found {len(lines) - 1}")
    edges = []
    seen = set()
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 2:
            raise InputError(f"{path}: bad edge line {ln!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise InputError(f"{path}: non-integer edge line {ln!r}")
        if not u < v:
            raise InputError(f"{path}: edges must satisfy u < v, got {ln!r}")
        if (u, v) in seen:
            raise InputError(f"{path}: duplicate edge {ln!r}")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)
