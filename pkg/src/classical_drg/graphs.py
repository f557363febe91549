"""Explicit desk-scale graphs from the classical families, and brute-force
extraction of their parameters.

Adjacency rows are Python ints used as bit sets: bit ``v`` of ``adj[u]`` is set
iff u ~ v. Set algebra on rows (``&``, ``|``, ``bit_count``) does the heavy
lifting everywhere.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .params import (
    ClassicalParams,
    IntersectionArray,
    bracket,
    multiplicity,
    recognize_classical,
)

DEFAULT_CAP = 100_000


class GraphError(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Finite simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "labels")

    def __init__(self, n: int, adj: Sequence[int], labels: Optional[Sequence[str]] = None):
        if len(adj) != n:
            raise GraphError("adjacency row count differs from n")
        self.n = n
        self.adj = list(adj)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise GraphError("label count differs from n")
        for u, row in enumerate(self.adj):
            if row >> u & 1:
                raise GraphError(f"loop at vertex {u}")
            if row >> n:
                raise GraphError(f"vertex {u} has a neighbour outside 0..{n - 1}")
        for u, row in enumerate(self.adj):
            for v in iter_bits(row):
                if not self.adj[v] >> u & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, labels)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits_to_list(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            rows.append(mask_of(index[w] for w in iter_bits(self.adj[v]) if w in index))
        return Graph(len(vertices), rows)

    def is_clique(self, mask: int) -> bool:
        for v in iter_bits(mask):
            if (mask & ~(1 << v)) & ~self.adj[v]:
                return False
        return True

    def toggled(self, u: int, v: int) -> "Graph":
        """Copy with the pair {u, v} flipped between edge and non-edge."""
        if u == v:
            raise GraphError("cannot toggle a loop")
        adj = list(self.adj)
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
        return Graph(self.n, adj, self.labels)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges()})"


class Distances:
    """All-pairs BFS. ``layers[x][i]`` is the bit set of vertices at distance i from x."""

    def __init__(self, g: Graph):
        self.graph = g
        self.layers: list[list[int]] = [self._bfs_layers(g, s) for s in range(g.n)]
        self._matrix: Optional[np.ndarray] = None
        self.connected = all(sum(map(int.bit_count, ls)) == g.n for ls in self.layers)
        self.diameter = max(len(ls) - 1 for ls in self.layers) if g.n else 0

    @staticmethod
    def _bfs_layers(g: Graph, source: int) -> list[int]:
        seen = 1 << source
        frontier = seen
        layers = [frontier]
        adj = g.adj
        while True:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            nxt &= ~seen
            if not nxt:
                return layers
            seen |= nxt
            layers.append(nxt)
            frontier = nxt

    def matrix(self) -> np.ndarray:
        """n x n distance matrix (uint8); 255 marks unreachable pairs."""
        if self._matrix is None:
            n = self.graph.n
            nbytes = (n + 7) // 8
            mat = np.full((n, n), 255, dtype=np.uint8)
            for x, layers in enumerate(self.layers):
                row = mat[x]
                for i, layer in enumerate(layers):
                    bits = np.unpackbits(np.frombuffer(layer.to_bytes(nbytes, "little"), dtype=np.uint8),
                                         bitorder="little")[:n]
                    row[bits.astype(bool)] = i
            self._matrix = mat
        return self._matrix

    def d(self, x: int, y: int) -> int:
        return int(self.matrix()[x, y])

    def layer(self, x: int, i: int) -> int:
        ls = self.layers[x]
        return ls[i] if 0 <= i < len(ls) else 0

    def ball(self, x: int, i: int) -> int:
        m = 0
        for layer in self.layers[x][: i + 1]:
            m |= layer
        return m

    def dist_to_set(self, x: int, mask: int) -> int:
        for i, layer in enumerate(self.layers[x]):
            if layer & mask:
                return i
        return 255


def bfs_distances(g: Graph, source: int) -> list[Optional[int]]:
    """Shortest-path distances from ``source``; ``None`` marks unreachable vertices."""
    dist: list[Optional[int]] = [None] * g.n
    for i, layer in enumerate(Distances._bfs_layers(g, source)):
        for v in iter_bits(layer):
            dist[v] = i
    return dist


def diameter(g: Graph) -> int:
    dist = Distances(g)
    if not dist.connected:
        raise GraphError("graph is disconnected")
    return dist.diameter


@dataclass(frozen=True)
class DRGRefutation:
    """Witness that a graph is not distance-regular.

    The pair (x, y) at distance ``distance`` has ``found`` neighbours of y on the
    ``kind`` side ("c": at distance i-1 from x, "b": at distance i+1), where the
    reference pair (ref_x, ref_y) has ``expected``.
    """

    x: int
    y: int
    distance: int
    kind: str
    expected: int
    found: int
    ref_x: int
    ref_y: int

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "distance": self.distance, "kind": self.kind,
                "expected": self.expected, "found": self.found,
                "reference_pair": [self.ref_x, self.ref_y]}


def check_distance_regular(g: Graph, dist: Optional[Distances] = None
                           ) -> Union[IntersectionArray, DRGRefutation]:
    """Count c and b for every ordered pair; return the array or a conflicting pair."""
    if g.n == 0:
        raise GraphError("empty graph")
    dist = dist if dist is not None else Distances(g)
    if not dist.connected:
        raise GraphError("graph is disconnected")
    D = dist.diameter
    if D == 0:
        raise GraphError("a single vertex has no intersection array")
    adj = g.adj
    ref: dict[int, tuple[int, int, int, int]] = {}  # i -> (c, b, x, y)
    for x in range(g.n):
        layers = dist.layers[x] + [0]
        for i in range(len(layers) - 1):
            below = layers[i - 1] if i > 0 else 0
            above = layers[i + 1]
            for y in iter_bits(layers[i]):
                row = adj[y]
                c = (row & below).bit_count()
                b = (row & above).bit_count()
                known = ref.get(i)
                if known is None:
                    ref[i] = (c, b, x, y)
                elif known[0] != c:
                    return DRGRefutation(x, y, i, "c", known[0], c, known[2], known[3])
                elif known[1] != b:
                    return DRGRefutation(x, y, i, "b", known[1], b, known[2], known[3])
    b_seq = [ref[i][1] for i in range(D)]
    c_seq = [ref[i][0] for i in range(1, D + 1)]
    return IntersectionArray.from_sequences(b_seq, c_seq)


# ---------------------------------------------------------------- families

@dataclass
class FamilyInstance:
    family: str
    args: list[int]
    graph: Graph
    expected_params: ClassicalParams
    notes: list[str] = field(default_factory=list)


def _cap_check(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise GraphError(f"{what} would have {count} vertices, above the cap of {cap}")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _word(symbols: Sequence[int], q: int) -> str:
    return "".join(map(str, symbols)) if q <= 10 else ",".join(map(str, symbols))


def build_hamming(D: int, q: int, cap: int = DEFAULT_CAP) -> FamilyInstance:
    if D < 1 or q < 2:
        raise GraphError("Hamming graph needs D >= 1 and q >= 2")
    _cap_check(q**D, cap, f"H({D},{q})")
    words = list(itertools.product(range(q), repeat=D))
    index = {w: i for i, w in enumerate(words)}
    adj = [0] * len(words)
    for i, w in enumerate(words):
        row = 0
        for pos in range(D):
            for s in range(q):
                if s != w[pos]:
                    row |= 1 << index[w[:pos] + (s,) + w[pos + 1:]]
        adj[i] = row
    g = Graph(len(words), adj, [_word(w, q) for w in words])
    return FamilyInstance("hamming", [D, q], g, ClassicalParams(D, 1, 0, q - 1))


def build_johnson(n: int, D: int, cap: int = DEFAULT_CAP) -> FamilyInstance:
    if D < 1 or 2 * D > n:
        raise GraphError("Johnson graph J(n, D) needs 1 <= D and 2D <= n")
    _cap_check(math.comb(n, D), cap, f"J({n},{D})")
    subsets = list(itertools.combinations(range(n), D))
    masks = [mask_of(s) for s in subsets]
    adj = [0] * len(subsets)
    for i, mi in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if (mi & masks[j]).bit_count() == D - 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    g = Graph(len(subsets), adj, [",".join(map(str, s)) for s in subsets])
    return FamilyInstance("johnson", [n, D], g, ClassicalParams(D, 1, 1, n - D))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    """Reduced row-echelon form over GF(p), zero rows dropped."""
    m = [list(r) for r in rows]
    out = []
    ncols = len(m[0]) if m else 0
    pivot_row = 0
    for col in range(ncols):
        sel = next((i for i in range(pivot_row, len(m)) if m[i][col] % p), None)
        if sel is None:
            continue
        m[pivot_row], m[sel] = m[sel], m[pivot_row]
        inv = pow(m[pivot_row][col], p - 2, p)
        m[pivot_row] = [(x * inv) % p for x in m[pivot_row]]
        for i in range(len(m)):
            if i != pivot_row and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    for r in m[:pivot_row]:
        out.append(tuple(r))
    return out


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref_mod_p(rows, p)) if rows else 0


def enumerate_rref(n: int, D: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every D x n reduced row-echelon matrix of rank D over GF(q), lexicographic in pivots."""
    for pivots in itertools.combinations(range(n), D):
        pivot_set = set(pivots)
        free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivot_set]
        for values in itertools.product(range(q), repeat=len(free)):
            m = [[0] * n for _ in range(D)]
            for i, pc in enumerate(pivots):
                m[i][pc] = 1
            for (i, j), v in zip(free, values):
                m[i][j] = v
            yield tuple(tuple(r) for r in m)


def _projective_points(n: int, q: int) -> dict[tuple[int, ...], int]:
    pts = {}
    for v in itertools.product(range(q), repeat=n):
        lead = next((x for x in v if x), 0)
        if lead == 1:
            pts[v] = len(pts)
    return pts


def _normalize(v: Sequence[int], q: int) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = pow(lead, q - 2, q)
    return tuple((x * inv) % q for x in v)


def build_grassmann(q: int, n: int, D: int, cap: int = DEFAULT_CAP) -> FamilyInstance:
    if not _is_prime(q):
        raise GraphError("only prime q is supported")
    if D < 1 or 2 * D > n:
        raise GraphError("Grassmann graph J_q(n, D) needs 1 <= D and 2D <= n")
    _cap_check(gaussian_binomial(n, D, q), cap, f"J_{q}({n},{D})")
    points = _projective_points(n, q)
    # Subspaces are compared through their projective point sets: they meet in
    # dimension D-1 exactly when they share [D-1] points.
    spaces = list(enumerate_rref(n, D, q))
    pt_masks = []
    for basis in spaces:
        m = 0
        for coeffs in itertools.product(range(q), repeat=D):
            if any(coeffs):
                v = [sum(c * basis[i][j] for i, c in enumerate(coeffs)) % q for j in range(n)]
                m |= 1 << points[_normalize(v, q)]
        pt_masks.append(m)
    target = int(bracket(D - 1, q))
    adj = [0] * len(spaces)
    for i, mi in enumerate(pt_masks):
        for j in range(i + 1, len(spaces)):
            if (mi & pt_masks[j]).bit_count() == target:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    labels = ["/".join(_word(r, q) for r in basis) for basis in spaces]
    g = Graph(len(spaces), adj, labels)
    params = ClassicalParams(D, q, q, bracket(n - D + 1, q) - 1)
    return FamilyInstance("grassmann", [q, n, D], g, params)


def build_bilinear_forms(q: int, d: int, e: int, cap: int = DEFAULT_CAP) -> FamilyInstance:
    if not _is_prime(q):
        raise GraphError("only prime q is supported")
    if d < 1 or d > e:
        raise GraphError("bilinear forms graph H_q(d, e) needs 1 <= d <= e")
    _cap_check(q ** (d * e), cap, f"H_{q}({d},{e})")
    size = d * e
    weights = [q ** (size - 1 - t) for t in range(size)]
    rank_one = set()
    for u in itertools.product(range(q), repeat=d):
        if not any(u):
            continue
        for v in itertools.product(range(q), repeat=e):
            if any(v):
                rank_one.add(tuple((a * b) % q for a in u for b in v))
    rank_one = sorted(rank_one)
    mats = list(itertools.product(range(q), repeat=size))
    adj = [0] * len(mats)
    for idx, m in enumerate(mats):
        row = 0
        for r1 in rank_one:
            row |= 1 << sum(((a + b) % q) * w for a, b, w in zip(m, r1, weights))
        adj[idx] = row
    labels = ["/".join(_word(m[i * e:(i + 1) * e], q) for i in range(d)) for m in mats]
    g = Graph(len(mats), adj, labels)
    return FamilyInstance("bilinear", [q, d, e], g, ClassicalParams(d, q, q - 1, q**e - 1))


def build_halved_cube(n: int, cap: int = DEFAULT_CAP) -> FamilyInstance:
    if n < 3:
        raise GraphError("halved n-cube needs n >= 3")
    _cap_check(2 ** (n - 1), cap, f"halved {n}-cube")
    words = [w for w in range(2**n) if w.bit_count() % 2 == 0]
    index = {w: i for i, w in enumerate(words)}
    flips = [(1 << i) | (1 << j) for i, j in itertools.combinations(range(n), 2)]
    adj = [mask_of(index[w ^ f] for f in flips) for w in words]
    labels = [format(w, f"0{n}b") for w in words]
    g = Graph(len(words), adj, labels)
    inst = FamilyInstance("halved-cube", [n], g, ClassicalParams(n // 2, 1, 2, 1))
    arr = check_distance_regular(g)
    if isinstance(arr, DRGRefutation):
        raise GraphError(f"halved {n}-cube failed its distance-regularity check: {arr}")
    matches = [p for p in (recognize_classical(arr) if arr.D >= 2 else [])
               if p.b == 1 and p.alpha == 2]
    if not matches:
        raise GraphError(f"halved {n}-cube: no classical tuple with b = 1, alpha = 2 fits {arr}")
    inst.expected_params = matches[0]
    return inst


GOSSET_ARRAY = ([27, 10, 1], [1, 10, 27])


def build_gosset() -> FamilyInstance:
    """Two copies of the 28 pairs from an 8-set; same copy: meet in one point,
    opposite copies: disjoint. The construction is accepted only after its
    extracted array matches {27, 10, 1; 1, 10, 27}."""
    pairs = [mask_of(p) for p in itertools.combinations(range(8), 2)]
    n = 2 * len(pairs)
    adj = [0] * n
    for i, pi in enumerate(pairs):
        for j, pj in enumerate(pairs):
            if i == j:
                continue
            if (pi & pj).bit_count() == 1:
                adj[i] |= 1 << j
                adj[i + 28] |= 1 << (j + 28)
            if not pi & pj:
                adj[i] |= 1 << (j + 28)
                adj[i + 28] |= 1 << j
    labels = [f"{side}{''.join(str(v) for v in iter_bits(p))}" for side in "ab" for p in pairs]
    g = Graph(n, adj, labels)
    arr = check_distance_regular(g)
    if isinstance(arr, DRGRefutation) or arr.as_lists() != GOSSET_ARRAY:
        raise GraphError(f"Gosset construction model failed its self-check: {arr}")
    return FamilyInstance("gosset", [], g, ClassicalParams(3, 1, 4, 9))


FAMILY_BUILDERS = {
    "hamming": build_hamming,
    "johnson": build_johnson,
    "grassmann": build_grassmann,
    "bilinear": build_bilinear_forms,
    "halved-cube": build_halved_cube,
    "gosset": build_gosset,
}


def build_family(name: str, args: Sequence[int]) -> FamilyInstance:
    try:
        builder = FAMILY_BUILDERS[name]
    except KeyError:
        raise GraphError(f"unknown family {name!r}; choose from {', '.join(FAMILY_BUILDERS)}") from None
    try:
        return builder(*args)
    except TypeError as exc:
        raise GraphError(f"bad arguments for {name}: {exc}") from None


def catalog_params(max_D: int = 6) -> list[tuple[str, ClassicalParams]]:
    """Parameter rows of known graphs with classical parameters, D >= 3.

    Also covers families that are never constructed here (Doob, dual polar,
    twisted Grassmann, Hermitian forms).
    """
    rows: list[tuple[str, ClassicalParams]] = []
    prime_powers = [2, 3, 4, 5, 7, 8, 9]
    for D in range(3, max_D + 1):
        for q in range(2, 7):
            rows.append((f"H({D},{q})", ClassicalParams(D, 1, 0, q - 1)))
        rows.append((f"Doob(D={D})", ClassicalParams(D, 1, 0, 3)))
        for n in range(2 * D, 2 * D + 5):
            rows.append((f"J({n},{D})", ClassicalParams(D, 1, 1, n - D)))
        rows.append((f"halved {2 * D}-cube", ClassicalParams(D, 1, 2, 2 * D - 1)))
        rows.append((f"halved {2 * D + 1}-cube", ClassicalParams(D, 1, 2, 2 * D + 1)))
        for q in prime_powers:
            for n in range(2 * D, 2 * D + 4):
                rows.append((f"J_{q}({n},{D})", ClassicalParams(D, q, q, bracket(n - D + 1, q) - 1)))
            for e in range(D, D + 4):
                rows.append((f"H_{q}({D},{e})", ClassicalParams(D, q, q - 1, q**e - 1)))
            exps = [Fraction(0), Fraction(1), Fraction(2)]
            root = math.isqrt(q)
            if root * root == q:
                exps += [Fraction(1, 2), Fraction(3, 2)]
            for ex in exps:
                beta = root ** int(2 * ex) if ex.denominator == 2 else q ** int(ex)
                rows.append((f"dual polar (D={D}, q={q}, e={ex})", ClassicalParams(D, q, 0, beta)))
            rows.append((f"twisted J_{q}({2 * D + 1},{D})",
                         ClassicalParams(D, q, q, q * q * bracket(D, q) + q)))
        for rr in (2, 3):
            rows.append((f"Her({D},{rr}^2)", ClassicalParams(D, -rr, -rr - 1, -((-rr) ** D) - 1)))
    rows.append(("Gosset", ClassicalParams(3, 1, 4, 9)))
    return rows


# ---------------------------------------------------------------- spectrum

@dataclass(frozen=True)
class Spectrum:
    """Rational eigenvalues of the intersection matrix, largest first.

    ``multiplicities`` follow the standard-sequence formula (``None`` when the
    array has no distance distribution). ``residual`` holds the coefficients
    (constant term first) of the factor without rational roots, if any.
    """

    eigenvalues: tuple[Fraction, ...]
    multiplicities: Optional[tuple[Fraction, ...]]
    residual: tuple[Fraction, ...] = ()
    note: str = ""


def intersection_matrix(arr: IntersectionArray) -> list[list[Fraction]]:
    D = arr.D
    m = [[Fraction(0)] * (D + 1) for _ in range(D + 1)]
    for i in range(D + 1):
        m[i][i] = arr.a(i)
        if i > 0:
            m[i][i - 1] = arr.c(i)
        if i < D:
            m[i][i + 1] = arr.b(i)
    return m


def characteristic_polynomial(arr: IntersectionArray) -> list[Fraction]:
    """det(xI - L) for the tridiagonal intersection matrix, constant term first."""
    prev2 = [Fraction(1)]
    prev = [-arr.a(0), Fraction(1)]
    for i in range(1, arr.D + 1):
        lin = [Fraction(0)] + prev  # x * prev
        cur = [lin[j] - arr.a(i) * (prev[j] if j < len(prev) else 0) for j in range(len(lin))]
        w = arr.b(i - 1) * arr.c(i)
        for j, coef in enumerate(prev2):
            cur[j] -= w * coef
        prev2, prev = prev, cur
    return prev


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: Sequence[Fraction], root: Fraction) -> list[Fraction]:
    """Divide by (x - root); assumes root is an exact root."""
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    carry = Fraction(0)
    for j in range(n, 0, -1):
        carry = coeffs[j] + carry * root
        out[j - 1] = carry
    return out


def spectrum_oracle(arr: IntersectionArray) -> Spectrum:
    """Exact rational roots of the intersection matrix's characteristic polynomial.

    Float eigenvalues of the matrix only nominate candidates; a value is
    reported exactly when the polynomial vanishes at it in rational arithmetic.
    """
    poly = characteristic_polynomial(arr)
    den = math.lcm(*(c.denominator for c in poly))
    approx = np.linalg.eigvals(np.array([[float(x) for x in row] for row in intersection_matrix(arr)]))
    approx = sorted({complex(z).real for z in approx if abs(complex(z).imag) < 1e-6}, reverse=True)
    roots: list[Fraction] = []
    for z in approx:
        for cand in {Fraction(round(z)), Fraction(z).limit_denominator(den),
                     Fraction(math.floor(z)), Fraction(math.ceil(z))}:
            while len(poly) > 1 and _poly_eval(poly, cand) == 0:
                poly = _deflate(poly, cand)
                if cand not in roots:
                    roots.append(cand)
    roots.sort(reverse=True)
    note = ""
    residual: tuple[Fraction, ...] = ()
    if len(poly) > 1:
        residual = tuple(poly)
        note = "non-rational root(s) of the residual factor"
    mults = None
    if arr.n is not None:
        try:
            mults = tuple(multiplicity(arr, th) for th in roots)
        except ValueError:
            mults = None
    return Spectrum(tuple(roots), mults, residual, note)


def adjacency_spectrum(g: Graph, decimals: int = 6) -> dict[float, int]:
    """Numerical distinct eigenvalues of the adjacency matrix with their counts."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    vals = np.linalg.eigvalsh(a)
    out: dict[float, int] = {}
    for v in np.round(vals, decimals):
        key = float(v) + 0.0
        out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------- file format

def dumps_graph(g: Graph, family: Optional[str] = None, args: Optional[Sequence[int]] = None) -> str:
    """Canonical text form: fixed field order, sorted edges, one array element per line."""
    lines = ["{", f'  "n": {g.n},']
    edges = g.edges()
    parts = []

    def array_block(name: str, items: list[str]) -> str:
        if not items:
            return f'  "{name}": []'
        body = ",\n".join("    " + it for it in items)
        return f'  "{name}": [\n{body}\n  ]'

    parts.append(array_block("edges", [f"[{u}, {v}]" for u, v in edges]))
    if g.labels is not None:
        parts.append(array_block("labels", [json.dumps(s) for s in g.labels]))
    if family is not None:
        parts.append(f'  "family": {json.dumps(family)}')
    if args is not None:
        parts.append(f'  "args": {json.dumps(list(args))}')
    lines.append(",\n".join(parts))
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> tuple[Graph, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphError("graph file needs fields 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise GraphError("'n' must be a non-negative integer")
    edges = []
    for e in doc["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise GraphError(f"bad edge entry {e!r}")
        u, v = e
        if not u < v:
            raise GraphError(f"edge {e!r} must satisfy u < v")
        edges.append((u, v))
    labels = doc.get("labels")
    g = Graph.from_edges(n, edges, labels)
    meta = {k: doc[k] for k in ("family", "args") if k in doc}
    return g, meta


def write_graph(path_or_file: Union[str, IO[str]], g: Graph, family=None, args=None) -> None:
    text = dumps_graph(g, family, args)
    if isinstance(path_or_file, str):
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        path_or_file.write(text)


def read_graph(path: str) -> tuple[Graph, dict]:
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())
