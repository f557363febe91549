"""Constructive verification of clique geometry on explicit graphs.

Each check returns a :class:`CheckResult` carrying a status, integer tallies and,
on failure, a concrete witness. Objects later checks depend on (the line cover,
the assembly system) travel in ``CheckResult.payload``.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .graphs import DRGRefutation, Distances, Graph, bits_to_list, check_distance_regular, iter_bits, mask_of
from .params import ClassicalParams, geometric_intersection_numbers, intersection_array, recognize_classical

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

CHECK_ORDER = ("drg", "classical", "geometric", "phi", "dual-pasch", "assemblies",
               "local-grid", "phi-star", "ci-grid", "design")

# check -> checks whose payload or verdict it needs
PREREQUISITES = {
    "drg": (),
    "classical": ("drg",),
    "geometric": ("classical",),
    "phi": ("geometric",),
    "dual-pasch": ("geometric",),
    "assemblies": ("dual-pasch",),
    "local-grid": ("assemblies",),
    "phi-star": ("assemblies",),
    "ci-grid": ("assemblies",),
    "design": ("assemblies",),
}


class CliqueCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"more than {cap} maximal cliques; enumeration aborted")
        self.cap = cap


def _plain(value: Any) -> Any:
    """JSON-ready copy: Fractions become ints or "p/q" strings, tuples become lists."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


@dataclass
class CheckResult:
    name: str
    status: str
    counts: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    note: str = ""
    payload: Any = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "counts": _plain(self.counts)}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.note:
            out["note"] = self.note
        return out


# ---------------------------------------------------------------- cliques

def maximal_cliques(g: Graph, min_size: int = 1, cap: Optional[int] = None) -> list[tuple[int, ...]]:
    """All inclusion-maximal cliques with at least ``min_size`` vertices, sorted.

    Bron-Kerbosch with Tomita pivoting on bit sets, started from each vertex u
    with candidates restricted to later neighbours, so every clique is reported
    once from its smallest vertex.
    """
    adj = g.adj
    found: list[tuple[int, ...]] = []

    def expand(r: list[int], p: int, x: int) -> None:
        if not p:
            if not x and len(r) >= min_size:
                found.append(tuple(sorted(r)))
                if cap is not None and len(found) > cap:
                    raise CliqueCapExceeded(cap)
            return
        if len(r) + p.bit_count() < min_size:
            return
        pivot = max(iter_bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in iter_bits(p & ~adj[pivot]):
            bit = 1 << v
            r.append(v)
            expand(r, p & adj[v], x & adj[v])
            r.pop()
            p &= ~bit
            x |= bit

    for u in range(g.n):
        later = adj[u] >> (u + 1) << (u + 1)
        expand([u], later, adj[u] & ~later)
    found.sort()
    return found


@dataclass
class CliqueCover:
    lines: list[tuple[int, ...]]
    line_of_edge: dict[tuple[int, int], int]
    lines_through: list[list[int]]
    masks: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self.masks:
            self.masks = [mask_of(ln) for ln in self.lines]

    def line_of(self, u: int, v: int) -> int:
        return self.line_of_edge[(u, v) if u < v else (v, u)]


def _cover_from_cliques(n: int, cliques: Sequence[tuple[int, ...]]) -> CliqueCover:
    line_of_edge = {}
    through: list[list[int]] = [[] for _ in range(n)]
    for idx, c in enumerate(cliques):
        for v in c:
            through[v].append(idx)
        for e in itertools.combinations(c, 2):
            line_of_edge[e] = idx
    return CliqueCover(list(cliques), line_of_edge, through)


def _exact_edge_partition(clique_edges: list[list[int]], edge_options: list[list[int]],
                          node_cap: int = 100_000) -> Optional[list[int]]:
    """Choose cliques so every edge is covered exactly once (Algorithm X with unit propagation).

    Returns the chosen clique indices (sorted) or ``None`` if no partition exists.
    """
    n_edges = len(edge_options)
    nodes = 0

    class Conflict(Exception):
        pass

    def select(state, c, queue):
        alive, count, covered, chosen = state
        chosen.append(c)
        alive[c] = 0
        for e in clique_edges[c]:
            if covered[e]:
                raise Conflict
            covered[e] = 1
        for e in clique_edges[c]:
            for c2 in edge_options[e]:
                if alive[c2]:
                    alive[c2] = 0
                    for e2 in clique_edges[c2]:
                        if not covered[e2]:
                            count[e2] -= 1
                            if count[e2] == 0:
                                raise Conflict
                            if count[e2] == 1:
                                queue.append(e2)

    def propagate(state, queue):
        alive, count, covered, _ = state
        while queue:
            e = queue.pop()
            if covered[e]:
                continue
            c = next(c for c in edge_options[e] if alive[c])
            select(state, c, queue)

    def solve(state) -> Optional[list[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise RuntimeError(f"exact edge partition search exceeded {node_cap} nodes")
        alive, count, covered, chosen = state
        best = None
        for e in range(n_edges):
            if not covered[e] and (best is None or count[e] < count[best]):
                best = e
                if count[e] <= 1:
                    break
        if best is None:
            return sorted(chosen)
        for c in sorted(c for c in edge_options[best] if alive[c]):
            branch = (bytearray(alive), list(count), bytearray(covered), list(chosen))
            try:
                queue: list[int] = []
                select(branch, c, queue)
                propagate(branch, queue)
            except Conflict:
                continue
            result = solve(branch)
            if result is not None:
                return result
        return None

    count = [len(opts) for opts in edge_options]
    if any(c == 0 for c in count):
        return None
    state = (bytearray([1]) * len(clique_edges), count, bytearray(n_edges), [])
    try:
        queue = [e for e in range(n_edges) if count[e] == 1]
        propagate(state, queue)
    except Conflict:
        return None
    return solve(state)


def _integral(x: Fraction) -> Optional[int]:
    return int(x) if x.denominator == 1 else None


def _classical_prerequisite(g: Graph, p: ClassicalParams, dist: Distances) -> Optional[dict]:
    arr = check_distance_regular(g, dist)
    if isinstance(arr, DRGRefutation):
        return {"prerequisite": "drg", **arr.as_dict()}
    expected = intersection_array(p)
    if arr != expected:
        return {"prerequisite": "classical", "found_array": str(arr), "expected_array": str(expected)}
    return None


def delsarte_cover(g: Graph, p: ClassicalParams, dist: Optional[Distances] = None,
                   check: bool = True) -> CheckResult:
    """Find a set of (beta+1)-cliques that covers every edge exactly once.

    All cliques of order beta+1 are enumerated; a larger clique refutes the
    clique bound outright. When several Delsarte cliques share an edge (lines and
    assemblies can both reach the bound), an exact partition of the edge set is
    searched for.
    """
    name = "geometric"
    dist = dist if dist is not None else Distances(g)
    if check:
        failure = _classical_prerequisite(g, p, dist)
        if failure is not None:
            return CheckResult(name, FAIL, witness=failure, note="graph does not have the stated parameters")
    order = _integral(p.beta + 1)
    if order is None or order < 2:
        return CheckResult(name, FAIL, witness={"reason": "beta + 1 is not an integer >= 2"})
    cliques = maximal_cliques(g, min_size=order)
    for c in cliques:
        if len(c) > order:
            return CheckResult(name, FAIL, counts={"delsarte_order": order},
                               witness={"reason": "clique above the Delsarte bound", "clique": list(c)})
    edges = g.edges()
    edge_id = {e: i for i, e in enumerate(edges)}
    clique_edges = [[edge_id[e] for e in itertools.combinations(c, 2)] for c in cliques]
    options: list[list[int]] = [[] for _ in edges]
    for ci, es in enumerate(clique_edges):
        for e in es:
            options[e].append(ci)
    per_edge = Counter(len(o) for o in options)
    counts = {"delsarte_order": order, "delsarte_cliques": len(cliques),
              "edges": len(edges), "cliques_per_edge": dict(sorted(per_edge.items()))}
    uncovered = next((i for i, o in enumerate(options) if not o), None)
    if uncovered is not None:
        return CheckResult(name, FAIL, counts=counts,
                           witness={"edge": list(edges[uncovered]), "delsarte_cliques_on_edge": 0})
    chosen = _exact_edge_partition(clique_edges, options)
    if chosen is None:
        first = next(i for i, o in enumerate(options) if len(o) >= 2)
        return CheckResult(name, FAIL, counts=counts,
                           witness={"edge": list(edges[first]), "delsarte_cliques_on_edge": len(options[first]),
                                    "reason": "no set of Delsarte cliques partitions the edges"})
    cover = _cover_from_cliques(g.n, [cliques[i] for i in chosen])
    # Soundness of the returned cover.
    r_int = _integral(p.r)
    per_vertex = Counter(len(t) for t in cover.lines_through)
    pair_total = sum(len(ln) * (len(ln) - 1) // 2 for ln in cover.lines)
    counts.update({"lines": len(cover.lines), "lines_per_vertex": dict(sorted(per_vertex.items())),
                   "edge_pairs_in_lines": pair_total})
    if pair_total != len(edges):
        return CheckResult(name, FAIL, counts=counts, witness={"reason": "line pairs do not sum to |E|"})
    bad = next((v for v, t in enumerate(cover.lines_through) if len(t) != r_int), None)
    if bad is not None:
        return CheckResult(name, FAIL, counts=counts,
                           witness={"vertex": bad, "lines": len(cover.lines_through[bad]), "expected": r_int})
    counts["delsarte_vertices"] = g.n
    if p.b >= 2:
        census = xy_census(g, cover, dist)
        counts["xy_sizes"] = dict(sorted(census.items()))
    return CheckResult(name, PASS, counts=counts, payload=cover)


def line_set_xy(g: Graph, cover: CliqueCover, dist: Distances, x: int, y: int) -> list[int]:
    """Lines through x all of whose vertices are within distance 2 of y."""
    if dist.d(x, y) != 2:
        raise ValueError(f"vertices {x} and {y} are not at distance 2")
    near = dist.ball(y, 2)
    return [i for i in cover.lines_through[x] if not cover.masks[i] & ~near]


def xy_census(g: Graph, cover: CliqueCover, dist: Distances) -> Counter:
    """Histogram of |[x, y]| over all ordered pairs at distance 2."""
    balls = [dist.ball(y, 2) for y in range(g.n)]
    hist: Counter = Counter()
    for x in range(g.n):
        mine = [cover.masks[i] for i in cover.lines_through[x]]
        for y in iter_bits(dist.layer(x, 2)):
            near = balls[y]
            hist[sum(1 for m in mine if not m & ~near)] += 1
    return hist


# ---------------------------------------------------------------- distance tallies

def _clique_tallies(dmat: np.ndarray, cliques: Sequence[Sequence[int]], through: Sequence[Sequence[int]]):
    """For each vertex x and clique C: j = d(x, C) and |{y in C : d(x, y) = j}|;
    for each ordered pair (x, y): number of cliques through y at distance d(x, y) - 1 from x.

    Yields per-x arrays; the caller folds them into tallies.
    """
    members = np.array(cliques, dtype=np.int64)
    thr = np.array(through, dtype=np.int64)
    for x in range(dmat.shape[0]):
        d = dmat[x].astype(np.int64)
        dm = d[members]
        dc = dm.min(axis=1)
        near_count = (dm == dc[:, None]).sum(axis=1)
        tau = (dc[thr] == (d[:, None] - 1)).sum(axis=1)
        yield x, d, dc, near_count, tau


def _fold_tallies(g: Graph, dmat, cliques, through, phi_expected, tau_expected, D, label):
    """Shared tally loop for lines (phi/tau) and assemblies (phi*/tau*)."""
    phi_tally: dict[int, Counter] = {}
    tau_tally: dict[int, Counter] = {}
    witness = None
    for x, d, dc, near_count, tau in _clique_tallies(dmat, cliques, through):
        for j, cnt in zip(*np.unique(dc * 100000 + near_count, return_counts=True)):
            key_j, value = divmod(int(j), 100000)
            phi_tally.setdefault(key_j, Counter())[value] += int(cnt)
        mask = d >= 1
        for j, cnt in zip(*np.unique(d[mask].astype(np.int64) * 100000 + tau[mask], return_counts=True)):
            key_j, value = divmod(int(j), 100000)
            tau_tally.setdefault(key_j, Counter())[value] += int(cnt)
        if witness is None:
            if label == "line" and (dc >= D).any():
                c = int(np.argmax(dc >= D))
                witness = {"vertex": x, label: c, "distance": int(dc[c]), "reason": f"vertex at distance D from a {label}"}
                continue
            want = np.array([phi_expected.get(int(j), -1) for j in dc])
            bad = np.nonzero(near_count != want)[0]
            if bad.size:
                c = int(bad[0])
                witness = {"vertex": x, label: c, "distance": int(dc[c]), "count": int(near_count[c]),
                           "expected": phi_expected.get(int(dc[c]))}
                continue
            want_t = np.array([tau_expected.get(int(j), -1) for j in d])
            bad = np.nonzero(mask & (tau != want_t))[0]
            if bad.size:
                y = int(bad[0])
                witness = {"x": x, "y": y, "distance": int(d[y]), "count": int(tau[y]),
                           "expected": tau_expected.get(int(d[y]))}
    return phi_tally, tau_tally, witness


def _tally_dict(t: dict[int, Counter]) -> dict:
    return {j: dict(sorted(c.items())) for j, c in sorted(t.items())}


def phi_check(g: Graph, p: ClassicalParams, cover: CliqueCover, dist: Distances) -> CheckResult:
    """Tally phi_j over every (line, vertex) and tau_j over every ordered pair, then
    rebuild the intersection numbers from the tallies."""
    D = p.D
    phi_expected = {j: int(1 + p.alpha * p.bracket(j)) for j in range(D)}
    tau_expected = {j: int(p.bracket(j)) for j in range(1, D + 1)}
    sizes = {len(t) for t in cover.lines_through}
    if len(sizes) != 1:
        return CheckResult("phi", FAIL, witness={"reason": "vertices lie on differing numbers of lines"})
    phi_tally, tau_tally, witness = _fold_tallies(g, dist.matrix(), cover.lines, cover.lines_through,
                                                  phi_expected, tau_expected, D, "line")
    counts = {"phi_tallies": _tally_dict(phi_tally), "tau_tallies": _tally_dict(tau_tally),
              "phi_expected": phi_expected, "tau_expected": tau_expected}
    if witness is not None:
        return CheckResult("phi", FAIL, counts=counts, witness=witness)
    phi_seq = [phi_expected[j] for j in range(D)]
    tau_seq = [tau_expected[j] for j in range(1, D + 1)]
    arr = intersection_array(p)
    b_rebuilt, c_rebuilt = geometric_intersection_numbers(phi_seq, tau_seq, arr.k, -p.r)
    b_true = [arr.b(i) for i in range(1, D)]
    c_true = [arr.c(i) for i in range(1, D + 1)]
    counts["rebuilt_b"] = b_rebuilt
    counts["rebuilt_c"] = c_rebuilt
    if b_rebuilt != b_true or c_rebuilt != c_true:
        return CheckResult("phi", FAIL, counts=counts,
                           witness={"reason": "phi/tau do not reproduce the intersection numbers",
                                    "b": b_true, "c": c_true})
    note = "" if p.b >= 2 else "b = 1: expected values use the b >= 2 formulas"
    return CheckResult("phi", PASS, counts=counts, note=note)


# ---------------------------------------------------------------- dual Pasch, assemblies

def dual_pasch_check(g: Graph, cover: CliqueCover) -> CheckResult:
    """For every edge, the common neighbours off its line must form a clique."""
    adj = g.adj
    sizes: Counter = Counter()
    for (x, y), li in sorted(cover.line_of_edge.items()):
        u = adj[x] & adj[y] & ~cover.masks[li]
        sizes[u.bit_count()] += 1
        for a in iter_bits(u):
            missing = (u & ~adj[a]) & ~(1 << a)
            if missing:
                b = (missing & -missing).bit_length() - 1
                return CheckResult("dual-pasch", FAIL, counts={"off_line_sizes": dict(sorted(sizes.items()))},
                                   witness={"edge": [x, y], "non_adjacent_pair": [a, b]})
    return CheckResult("dual-pasch", PASS, counts={"off_line_sizes": dict(sorted(sizes.items()))})


@dataclass
class AssemblySystem:
    assemblies: list[tuple[int, ...]]
    assembly_of_edge: dict[tuple[int, int], int]
    assemblies_through: list[list[int]]
    masks: list[int] = field(default_factory=list, repr=False)

    def assembly_of(self, u: int, v: int) -> int:
        return self.assembly_of_edge[(u, v) if u < v else (v, u)]


def assemblies(g: Graph, p: ClassicalParams, cover: CliqueCover) -> CheckResult:
    """Per edge, close {x, y} plus the off-line common neighbours to a maximal clique."""
    name = "assemblies"
    alpha = _integral(p.alpha)
    if alpha is None or not (1 <= p.alpha <= p.b - 1):
        return CheckResult(name, SKIPPED, note="assemblies need an integer alpha with 1 <= alpha <= b - 1")
    adj = g.adj
    index: dict[int, int] = {}
    masks: list[int] = []
    of_edge: dict[tuple[int, int], int] = {}
    line_masks = set(cover.masks)
    for (x, y), li in sorted(cover.line_of_edge.items()):
        m = (adj[x] & adj[y] & ~cover.masks[li]) | (1 << x) | (1 << y)
        if not g.is_clique(m):
            return CheckResult(name, FAIL, witness={"edge": [x, y], "reason": "off-line common neighbours not a clique"})
        ext = ~m
        for v in iter_bits(m):
            ext &= adj[v]
        ext &= (1 << g.n) - 1
        if ext:
            if not g.is_clique(ext):
                return CheckResult(name, FAIL, witness={"edge": [x, y], "reason": "clique closure is not unique",
                                                        "extension": bits_to_list(ext)})
            m |= ext
        if m in line_masks:
            return CheckResult(name, FAIL, witness={"edge": [x, y], "reason": "closure is a line"})
        if m not in index:
            index[m] = len(masks)
            masks.append(m)
        of_edge[(x, y)] = index[m]
    order = [tuple(bits_to_list(m)) for m in masks]
    perm = sorted(range(len(order)), key=lambda i: order[i])
    rank = {old: new for new, old in enumerate(perm)}
    asm = [order[i] for i in perm]
    masks = [masks[i] for i in perm]
    of_edge = {e: rank[i] for e, i in of_edge.items()}
    through: list[list[int]] = [[] for _ in range(g.n)]
    for i, a in enumerate(asm):
        for v in a:
            through[v].append(i)
    expected_order = int(p.alpha * p.r + 1)
    expected_per_vertex = p.beta / p.alpha
    sizes = Counter(len(a) for a in asm)
    per_vertex = Counter(len(t) for t in through)
    counts = {"assemblies": len(asm), "orders": dict(sorted(sizes.items())),
              "per_vertex": dict(sorted(per_vertex.items())),
              "expected_order": expected_order, "expected_per_vertex": expected_per_vertex}
    system = AssemblySystem(asm, of_edge, through, masks)
    edge_hits: Counter = Counter()
    for a in asm:
        for e in itertools.combinations(a, 2):
            edge_hits[e] += 1
    multi = next((e for e, c in sorted(edge_hits.items()) if c != 1), None)
    if multi is not None:
        return CheckResult(name, FAIL, counts=counts,
                           witness={"edge": list(multi), "assemblies_on_edge": edge_hits[multi]})
    bad = next((a for a in asm if len(a) != expected_order), None)
    if bad is not None:
        return CheckResult(name, FAIL, counts=counts, witness={"assembly": list(bad), "order": len(bad)})
    badv = next((v for v, t in enumerate(through) if len(t) != expected_per_vertex), None)
    if badv is not None:
        return CheckResult(name, FAIL, counts=counts, witness={"vertex": badv, "assemblies": len(through[badv])})
    return CheckResult(name, PASS, counts=counts, payload=system)


# ---------------------------------------------------------------- grids

def grid_extension(m: int, n: int, alpha: int) -> Graph:
    """The alpha-clique extension of the m x n grid; vertex (i, j, t) -> (i*n + j)*alpha + t."""
    cells = [(i, j, t) for i in range(m) for j in range(n) for t in range(alpha)]
    adj = []
    for u, (i, j, _) in enumerate(cells):
        adj.append(mask_of(v for v, (i2, j2, _) in enumerate(cells) if v != u and (i2 == i or j2 == j)))
    return Graph(len(cells), adj)


@dataclass(frozen=True)
class GridRecognition:
    ok: bool
    reason: str = ""
    coordinates: Optional[tuple[tuple[int, int], ...]] = None  # per vertex (row, column)

    def __bool__(self) -> bool:
        return self.ok


def grid_recognizer(h: Graph, alpha: int, m: int, n: int) -> GridRecognition:
    """Decide whether ``h`` is the alpha-clique extension of the m x n grid (m, n >= 2)."""
    if alpha < 1 or m < 2 or n < 2:
        return GridRecognition(False, "needs alpha >= 1 and m, n >= 2")
    if h.n != alpha * m * n:
        return GridRecognition(False, f"{h.n} vertices, expected {alpha * m * n}")
    valency = (m + n - 1) * alpha - 1
    odd = next((v for v in range(h.n) if h.degree(v) != valency), None)
    if odd is not None:
        return GridRecognition(False, f"vertex {odd} has valency {h.degree(odd)}, expected {valency}")
    classes: dict[int, list[int]] = {}
    for v in range(h.n):
        classes.setdefault(h.adj[v] | (1 << v), []).append(v)
    groups = sorted(classes.values())
    if any(len(c) != alpha for c in groups):
        size = next(len(c) for c in groups if len(c) != alpha)
        return GridRecognition(False, f"closed-neighbourhood class of size {size}, expected {alpha}")
    rep_class = {}
    for ci, c in enumerate(groups):
        for v in c:
            rep_class[v] = ci
    q_adj = []
    for c in groups:
        q_adj.append(mask_of({rep_class[w] for w in iter_bits(h.adj[c[0]])} - {rep_class[c[0]]}))
    quotient = Graph(len(groups), q_adj)
    if any(quotient.degree(v) != m + n - 2 for v in range(quotient.n)):
        return GridRecognition(False, "quotient is not (m + n - 2)-regular")
    cliques = [mask_of(c) for c in maximal_cliques(quotient, min_size=2)]
    first = cliques[0]
    side_a = [c for c in cliques if c == first or not c & first]
    side_b = [c for c in cliques if c not in side_a]
    a_sizes = {c.bit_count() for c in side_a}
    b_sizes = {c.bit_count() for c in side_b}
    if (len(side_a), a_sizes, len(side_b), b_sizes) == (m, {n}, n, {m}):
        rows, cols = side_a, side_b
    elif (len(side_b), b_sizes, len(side_a), a_sizes) == (m, {n}, n, {m}):
        rows, cols = side_b, side_a
    else:
        return GridRecognition(False, "maximal cliques of the quotient are not m rows and n columns")
    full = (1 << quotient.n) - 1
    if _disjoint_union(rows) != full or _disjoint_union(cols) != full:
        return GridRecognition(False, "rows or columns do not partition the quotient")
    coord = {}
    for ri, rmask in enumerate(rows):
        for ci, cmask in enumerate(cols):
            meet = rmask & cmask
            if meet.bit_count() != 1:
                return GridRecognition(False, f"row {ri} and column {ci} meet in {meet.bit_count()} cells")
            coord[meet.bit_length() - 1] = (ri, ci)
    for a in range(quotient.n):
        ra, ca = coord[a]
        want = mask_of(b for b, (rb, cb) in coord.items() if b != a and (rb == ra or cb == ca))
        if quotient.adj[a] != want:
            return GridRecognition(False, f"cell {a} has non-grid adjacency")
    return GridRecognition(True, "", tuple(coord[rep_class[v]] for v in range(h.n)))


def _disjoint_union(masks: Sequence[int]) -> int:
    acc = 0
    for m in masks:
        if acc & m:
            return -1
        acc |= m
    return acc


def local_grid_check(g: Graph, p: ClassicalParams, cover: CliqueCover, asys: AssemblySystem,
                     recognize: bool = True) -> CheckResult:
    """Every local graph is the alpha-clique extension of the (beta/alpha) x r grid,
    with cells given by (assembly, line) through the vertex."""
    name = "local-grid"
    alpha = int(p.alpha)
    t = int(p.beta / p.alpha)
    r = int(p.r)
    adj = g.adj
    certified = 0
    for x in range(g.n):
        nx = adj[x]
        lines = cover.lines_through[x]
        asms = asys.assemblies_through[x]
        for li in lines:
            for ai in asms:
                meet = (cover.masks[li] & asys.masks[ai]).bit_count()
                if meet != alpha + 1:
                    return CheckResult(name, FAIL, witness={"vertex": x, "line": li, "assembly": ai,
                                                            "intersection": meet, "expected": alpha + 1})
        row_mask = {li: cover.masks[li] & nx for li in lines}
        col_mask = {ai: asys.masks[ai] & nx for ai in asms}
        cells: Counter = Counter()
        for z in iter_bits(nx):
            li, ai = cover.line_of(x, z), asys.assembly_of(x, z)
            cells[(ai, li)] += 1
            want = (row_mask[li] | col_mask[ai]) & ~(1 << z)
            if adj[z] & nx != want:
                stray = (adj[z] & nx) ^ want
                w = (stray & -stray).bit_length() - 1
                return CheckResult(name, FAIL, witness={"vertex": x, "neighbour": z, "cell": [ai, li],
                                                        "non_grid_pair_with": w})
        if len(cells) != r * t or any(c != alpha for c in cells.values()):
            cell, size = next(((c, s) for c, s in sorted(cells.items()) if s != alpha), (None, None))
            return CheckResult(name, FAIL, witness={"vertex": x, "cells": len(cells), "expected_cells": r * t,
                                                    "cell": cell, "cell_size": size})
        if recognize:
            local = g.induced(bits_to_list(nx))
            rec = grid_recognizer(local, alpha, t, r)
            if not rec:
                return CheckResult(name, FAIL, witness={"vertex": x, "recognizer": rec.reason})
            certified += 1
    counts = {"vertices": g.n, "grid_shape": [t, r], "alpha": alpha, "cells_per_vertex": r * t,
              "recognizer_certified": certified}
    return CheckResult(name, PASS, counts=counts)


# ---------------------------------------------------------------- phi*, tau*, B_h

def phi_star_tau_star(g: Graph, p: ClassicalParams, asys: AssemblySystem, dist: Distances,
                      samples: int = 200, seed: int = 0) -> CheckResult:
    """Tally assembly distance counts and check B_h(x, y) grid shapes on sampled pairs.

    The constants are guaranteed only when beta > alpha*r; the tallies are
    computed either way and the hypothesis flag is reported in the counts.
    """
    name = "phi-star"
    D = p.D
    alpha = int(p.alpha)
    t = p.beta / p.alpha
    hypothesis = p.beta > p.alpha * p.r
    phi_expected = {j: int(1 + p.alpha * p.bracket(j)) for j in range(D + 1)}
    tau_expected = {j: int(p.bracket(j)) for j in range(1, D + 1)}
    phi_tally, tau_tally, witness = _fold_tallies(g, dist.matrix(), asys.assemblies, asys.assemblies_through,
                                                  phi_expected, tau_expected, D, "assembly")
    counts: dict = {"hypothesis_beta_gt_alpha_r": hypothesis,
                    "phi_star_tallies": _tally_dict(phi_tally), "tau_star_tallies": _tally_dict(tau_tally)}
    rng = random.Random(seed)
    shapes = {}
    if witness is None:
        for h in range(D):
            rows, cols = t - p.bracket(h), p.r - p.bracket(h)
            if rows < 2 or cols < 2 or rows.denominator != 1 or cols.denominator != 1:
                shapes[h] = {"shape": [rows, cols], "checked": 0}
                continue
            pairs = [(x, y) for x in range(g.n) for y in iter_bits(dist.layer(x, h))]
            chosen = pairs if len(pairs) <= samples else rng.sample(pairs, samples)
            for x, y in sorted(chosen):
                bh = dist.layer(x, h + 1) & g.adj[y]
                rec = grid_recognizer(g.induced(bits_to_list(bh)), alpha, int(rows), int(cols))
                if not rec:
                    witness = {"x": x, "y": y, "h": h, "recognizer": rec.reason}
                    break
            shapes[h] = {"shape": [rows, cols], "checked": len(chosen)}
            if witness is not None:
                break
    counts["b_h_grids"] = shapes
    note = "" if hypothesis else "beta = alpha*r: constants recorded outside their stated hypothesis"
    if witness is not None:
        return CheckResult(name, FAIL, counts=counts, witness=witness, note=note)
    return CheckResult(name, PASS, counts=counts, note=note)


def ci_subgrid_check(g: Graph, p: ClassicalParams, cover: CliqueCover, asys: AssemblySystem,
                     dist: Distances) -> CheckResult:
    """Map C_i(x, y) into ([i] lines) x ([i] assemblies) through y and check it is a sub-grid."""
    name = "ci-grid"
    adj = g.adj
    coord = []
    for y in range(g.n):
        coord.append({z: (cover.line_of(y, z), asys.assembly_of(y, z)) for z in iter_bits(adj[y])})
    checked: Counter = Counter()
    largest: dict[int, int] = {}
    for x in range(g.n):
        layers = dist.layers[x]
        for i in range(2, len(layers)):
            side = int(p.bracket(i))
            below = layers[i - 1]
            for y in iter_bits(layers[i]):
                c = adj[y] & below
                cy = coord[y]
                rows: dict[int, int] = {}
                cols: dict[int, int] = {}
                seen = set()
                for z in iter_bits(c):
                    rc = cy[z]
                    if rc in seen:
                        return CheckResult(name, FAIL, witness={"x": x, "y": y, "i": i, "vertex": z,
                                                                "reason": "two vertices share a grid cell"})
                    seen.add(rc)
                    rows[rc[0]] = rows.get(rc[0], 0) | (1 << z)
                    cols[rc[1]] = cols.get(rc[1], 0) | (1 << z)
                if len(rows) > side or len(cols) > side:
                    return CheckResult(name, FAIL, witness={"x": x, "y": y, "i": i, "rows": len(rows),
                                                            "columns": len(cols), "side": side})
                for z in iter_bits(c):
                    rc = cy[z]
                    stray = adj[z] & c & ~(rows[rc[0]] | cols[rc[1]])
                    if stray:
                        w = (stray & -stray).bit_length() - 1
                        return CheckResult(name, FAIL, witness={"x": x, "y": y, "i": i, "adjacent_pair": [z, w],
                                                                "reason": "adjacent but in different row and column"})
                checked[i] += 1
                largest[i] = max(largest.get(i, 0), c.bit_count())
    counts = {"pairs_checked": dict(sorted(checked.items())), "largest_c_i": dict(sorted(largest.items())),
              "grid_side": {i: p.bracket(i) for i in sorted(checked)}}
    return CheckResult(name, PASS, counts=counts)


# ---------------------------------------------------------------- designs

@dataclass(frozen=True)
class DesignInstance:
    points: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    v: int
    k_blk: int
    lam: int


class DesignError(ValueError):
    def __init__(self, witness: dict):
        super().__init__(str(witness))
        self.witness = witness


def design_extract(g: Graph, p: ClassicalParams, asys: AssemblySystem, cover: CliqueCover,
                   assembly: int, x: int, dist: Distances) -> DesignInstance:
    """Points: vertices of the assembly at distance 2 from x; blocks: their traces on lines."""
    m_mask = asys.masks[assembly]
    if dist.dist_to_set(x, m_mask) != 2:
        raise ValueError(f"vertex {x} is not at distance 2 from assembly {assembly}")
    pts_mask = dist.layer(x, 2) & m_mask
    points = tuple(bits_to_list(pts_mask))
    line_ids = sorted({li for v in points for li in cover.lines_through[v]})
    blocks = []
    for li in line_ids:
        meet = cover.masks[li] & pts_mask
        if meet.bit_count() >= 2:
            blocks.append(tuple(bits_to_list(meet)))
    blocks.sort()
    alpha, b = int(p.alpha), int(p.b)
    where = {"assembly": assembly, "x": x}
    if len(points) != alpha * (b + 1) + 1:
        raise DesignError({**where, "points": len(points), "expected": alpha * (b + 1) + 1})
    bad = next((bl for bl in blocks if len(bl) != alpha + 1), None)
    if bad is not None:
        raise DesignError({**where, "block": list(bad), "expected_size": alpha + 1})
    cover_count: Counter = Counter()
    for bl in blocks:
        for pair in itertools.combinations(bl, 2):
            cover_count[pair] += 1
    for pair in itertools.combinations(points, 2):
        if cover_count[pair] != 1:
            raise DesignError({**where, "pair": list(pair), "blocks_through_pair": cover_count[pair]})
    if len(blocks) * (alpha + 1) != len(points) * (b + 1):
        raise DesignError({**where, "blocks": len(blocks), "reason": "block count identity fails"})
    return DesignInstance(points, tuple(blocks), len(points), alpha + 1, 1)


def design_check(g: Graph, p: ClassicalParams, asys: AssemblySystem, cover: CliqueCover, dist: Distances,
                 samples: int = 200, seed: int = 0) -> CheckResult:
    """Extract designs at ``samples`` seeded-random (assembly, vertex) pairs at distance 2."""
    name = "design"
    rng = random.Random(seed)
    dmat = dist.matrix()
    members = np.array(asys.assemblies, dtype=np.int64)
    admissible = []
    for x in range(g.n):
        dm = dmat[x][members].min(axis=1)
        admissible.extend((int(a), x) for a in np.nonzero(dm == 2)[0])
    if not admissible:
        return CheckResult(name, SKIPPED, note="no vertex at distance 2 from an assembly")
    chosen = sorted(admissible if len(admissible) <= samples else rng.sample(admissible, samples))
    shapes: Counter = Counter()
    for a, x in chosen:
        try:
            des = design_extract(g, p, asys, cover, a, x, dist)
        except DesignError as err:
            return CheckResult(name, FAIL, counts={"admissible_pairs": len(admissible), "sampled": len(chosen)},
                               witness=err.witness)
        shapes[(des.v, des.k_blk, des.lam, len(des.blocks))] += 1
    alpha, b = int(p.alpha), int(p.b)
    counts = {"admissible_pairs": len(admissible), "sampled": len(chosen), "seed": seed,
              "designs": [{"v": v, "k": k, "lambda": lam, "blocks": nb, "count": c}
                          for (v, k, lam, nb), c in sorted(shapes.items())],
              "alpha_plus_1_divides_b_b_plus_1": b * (b + 1) % (alpha + 1) == 0}
    return CheckResult(name, PASS, counts=counts)


# ---------------------------------------------------------------- pipeline

def run_checks(g: Graph, p: Optional[ClassicalParams], requested: Sequence[str],
               samples: int = 200, seed: int = 0) -> list[CheckResult]:
    """Run the requested checks (plus silent prerequisites) and return them in canonical order."""
    unknown = [c for c in requested if c not in CHECK_ORDER]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    results: dict[str, CheckResult] = {}
    dist = Distances(g)
    state: dict[str, Any] = {}

    def blocked(name: str) -> Optional[CheckResult]:
        for pre in PREREQUISITES[name]:
            res = get(pre)
            if res.status == FAIL:
                return CheckResult(name, FAIL, witness={"prerequisite": pre, "prerequisite_witness": res.witness})
            if res.status == SKIPPED:
                return CheckResult(name, SKIPPED, note=f"prerequisite {pre} skipped")
        return None

    def get(name: str) -> CheckResult:
        if name in results:
            return results[name]
        res = blocked(name)
        if res is None:
            res = compute(name)
        results[name] = res
        return res

    def compute(name: str) -> CheckResult:
        if name == "drg":
            if not dist.connected:
                return CheckResult(name, FAIL, witness={"reason": "graph is disconnected"})
            arr = check_distance_regular(g, dist)
            if isinstance(arr, DRGRefutation):
                return CheckResult(name, FAIL, witness=arr.as_dict())
            state["array"] = arr
            b_seq, c_seq = arr.as_lists()
            return CheckResult(name, PASS, counts={"diameter": arr.D, "b": b_seq, "c": c_seq, "n": g.n},
                               payload=arr)
        if p is None:
            return CheckResult(name, FAIL, witness={"reason": "no classical parameters fit the array"})
        if name == "classical":
            arr = state["array"]
            expected = intersection_array(p)
            fits = recognize_classical(arr) if arr.D >= 2 else []
            counts = {"params": str(p), "recognized": [str(q) for q in fits]}
            if arr != expected:
                return CheckResult(name, FAIL, counts=counts,
                                   witness={"found_array": str(arr), "expected_array": str(expected)})
            if p not in fits:
                return CheckResult(name, FAIL, counts=counts, witness={"reason": "params not recovered from array"})
            return CheckResult(name, PASS, counts=counts)
        if name == "geometric":
            return delsarte_cover(g, p, dist, check=False)
        cover = results["geometric"].payload
        if name == "phi":
            return phi_check(g, p, cover, dist)
        if name == "dual-pasch":
            return dual_pasch_check(g, cover)
        if name == "assemblies":
            return assemblies(g, p, cover)
        asys = results["assemblies"].payload
        if name == "local-grid":
            return local_grid_check(g, p, cover, asys)
        if name == "phi-star":
            return phi_star_tau_star(g, p, asys, dist, samples, seed)
        if name == "ci-grid":
            return ci_subgrid_check(g, p, cover, asys, dist)
        if name == "design":
            return design_check(g, p, asys, cover, dist, samples, seed)
        raise AssertionError(name)

    for name in CHECK_ORDER:
        if name in requested:
            get(name)
    return [results[n] for n in CHECK_ORDER if n in requested]


def report_document(results: Sequence[CheckResult], params: Optional[ClassicalParams], n: int) -> dict:
    failed = [r.name for r in results if r.status == FAIL]
    return {
        "params": str(params) if params is not None else None,
        "vertices": n,
        "checks": [r.as_dict() for r in results],
        "summary": {"passed": sum(r.status == PASS for r in results), "failed": len(failed),
                    "skipped": sum(r.status == SKIPPED for r in results), "failed_checks": failed},
    }


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
