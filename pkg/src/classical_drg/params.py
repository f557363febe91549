"""Exact closed-form quantities attached to classical parameters (D, b, alpha, beta).

Everything here is rational arithmetic on :class:`fractions.Fraction`; no
floating point is used anywhere in the module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Union[int, Fraction]


class InfeasibleError(ValueError):
    """An operation was asked to divide by an intersection number that is zero."""


def as_fraction(value: Union[Rational, str]) -> Fraction:
    """Parse ``"p/q"``, an integer literal, or a number into a Fraction.

    Floats are refused: they would silently smuggle rounding error into an
    exact computation.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or a 'p/q' string")
    if isinstance(value, str):
        text = value
        if not text or any(ch.isspace() for ch in text) or "." in text or "e" in text.lower():
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    return Fraction(value)


def bracket(j: int, b: Rational) -> Fraction:
    """The b-analogue of j: ``(b**j - 1)/(b - 1)``, or ``j`` when b == 1."""
    if j < 0:
        raise ValueError("bracket needs j >= 0")
    b = Fraction(b)
    if b == 1:
        return Fraction(j)
    return (b**j - 1) / (b - 1)


@dataclass(frozen=True)
class ClassicalParams:
    D: int
    b: Fraction
    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.D, int) or isinstance(self.D, bool):
            raise TypeError("D must be an int")
        if self.D < 1:
            raise ValueError("diameter D must be >= 1")
        for name in ("b", "alpha", "beta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    @classmethod
    def parse(cls, D, b, alpha, beta) -> "ClassicalParams":
        return cls(int(D), as_fraction(b), as_fraction(alpha), as_fraction(beta))

    @property
    def r(self) -> Fraction:
        """``[D]``: lines per vertex in the geometric case, minus the least eigenvalue."""
        return bracket(self.D, self.b)

    def bracket(self, j: int) -> Fraction:
        return bracket(j, self.b)

    def validation_issues(self) -> list[str]:
        """Necessary conditions every graph with these parameters satisfies."""
        issues = []
        if self.D >= 3:
            if self.b.denominator != 1:
                issues.append(f"b = {self.b} is not an integer (b is integral once D >= 3)")
            elif self.b in (0, -1):
                issues.append(f"b = {self.b} is excluded (b must avoid 0 and -1)")
            if self.b >= 1 and self.alpha < 0:
                issues.append(f"alpha = {self.alpha} < 0 with b >= 1")
        return issues

    def as_tuple(self) -> tuple:
        return (self.D, self.b, self.alpha, self.beta)

    def __str__(self) -> str:
        return f"({self.D}, {self.b}, {self.alpha}, {self.beta})"


@dataclass(frozen=True)
class IntersectionArray:
    """Intersection numbers of a (putative) distance-regular graph.

    ``b_seq`` is b_0..b_{D-1}, ``c_seq`` is c_1..c_D and ``a_seq`` is a_1..a_D.
    ``k_dist`` holds k_0..k_D; an entry is ``None`` once some c_i vanished.
    ``issues`` lists every feasibility failure found on construction.
    """

    D: int
    b_seq: tuple[Fraction, ...]
    c_seq: tuple[Fraction, ...]
    a_seq: tuple[Fraction, ...]
    k: Fraction
    k_dist: tuple[Optional[Fraction], ...]
    n: Optional[Fraction]
    issues: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_sequences(cls, b_seq: Iterable[Rational], c_seq: Iterable[Rational]) -> "IntersectionArray":
        b_seq = tuple(Fraction(x) for x in b_seq)
        c_seq = tuple(Fraction(x) for x in c_seq)
        if len(b_seq) != len(c_seq) or not b_seq:
            raise ValueError("need b_0..b_{D-1} and c_1..c_D of equal nonzero length")
        D = len(b_seq)
        k = b_seq[0]
        issues = []
        # a_i = k - b_i - c_i, with b_D = 0
        a_seq = tuple(k - (b_seq[i] if i < D else 0) - c_seq[i - 1] for i in range(1, D + 1))
        for i, x in enumerate(b_seq):
            if x <= 0:
                issues.append(f"b_{i} = {x} is not positive")
            elif x.denominator != 1:
                issues.append(f"b_{i} = {x} is not an integer")
        for i, x in enumerate(c_seq, start=1):
            if x <= 0:
                issues.append(f"c_{i} = {x} is not positive")
            elif x.denominator != 1:
                issues.append(f"c_{i} = {x} is not an integer")
        for i, x in enumerate(a_seq, start=1):
            if x < 0:
                issues.append(f"a_{i} = {x} is negative")
            elif x.denominator != 1:
                issues.append(f"a_{i} = {x} is not an integer")

        k_dist: list[Optional[Fraction]] = [Fraction(1)]
        for i in range(1, D + 1):
            prev = k_dist[-1]
            if prev is None or c_seq[i - 1] == 0:
                k_dist.append(None)
            else:
                k_dist.append(prev * b_seq[i - 1] / c_seq[i - 1])
        if any(x is None for x in k_dist):
            issues.append("distance distribution undefined (some c_i = 0)")
            n = None
        else:
            for i, x in enumerate(k_dist):
                if x.denominator != 1:
                    issues.append(f"k_{i} = {x} is not an integer")
            n = sum(k_dist)
            if n.denominator != 1:
                issues.append(f"vertex count n = {n} is not an integer")
        return cls(D, b_seq, c_seq, a_seq, k, tuple(k_dist), n, tuple(issues))

    @property
    def feasible(self) -> bool:
        return not self.issues

    @property
    def integral(self) -> bool:
        entries = self.b_seq + self.c_seq
        return all(x > 0 and x.denominator == 1 for x in entries)

    def b(self, i: int) -> Fraction:
        """b_i with the convention b_D = 0."""
        return self.b_seq[i] if 0 <= i < self.D else Fraction(0)

    def c(self, i: int) -> Fraction:
        """c_i with the convention c_0 = 0."""
        return self.c_seq[i - 1] if 1 <= i <= self.D else Fraction(0)

    def a(self, i: int) -> Fraction:
        return Fraction(0) if i == 0 else self.a_seq[i - 1]

    def as_lists(self) -> tuple[list[int | Fraction], list[int | Fraction]]:
        def tidy(x):
            return int(x) if x.denominator == 1 else x

        return [tidy(x) for x in self.b_seq], [tidy(x) for x in self.c_seq]

    def __str__(self) -> str:
        bs, cs = self.as_lists()
        return "{" + ", ".join(map(str, bs)) + "; " + ", ".join(map(str, cs)) + "}"


@dataclass(frozen=True)
class StandardSequence:
    theta: Fraction
    u_seq: tuple[Fraction, ...]


@dataclass(frozen=True)
class GeometricProfile:
    phi_seq: tuple[Fraction, ...]
    tau_seq: tuple[Fraction, ...]
    delsarte_order: Fraction
    lines_per_vertex: Fraction
    assembly_order: Fraction
    assemblies_per_vertex: Optional[Fraction]
    notes: tuple[str, ...] = ()


def intersection_array(p: ClassicalParams) -> IntersectionArray:
    br = p.bracket
    r = p.r
    b_seq = [(r - br(i)) * (p.beta - p.alpha * br(i)) for i in range(p.D)]
    c_seq = [br(i) * (1 + p.alpha * br(i - 1)) for i in range(1, p.D + 1)]
    return IntersectionArray.from_sequences(b_seq, c_seq)


def eigenvalues(p: ClassicalParams) -> list[Fraction]:
    """theta_0..theta_D, with theta_i = b_i / b**i - [i] and b_D read as 0."""
    if p.b == 0:
        raise ValueError("eigenvalue formula needs b != 0")
    arr = intersection_array(p)
    return [arr.b(i) / p.b**i - p.bracket(i) for i in range(p.D + 1)]


def standard_sequence(arr: IntersectionArray, theta: Rational) -> StandardSequence:
    theta = Fraction(theta)
    if arr.k == 0:
        raise InfeasibleError("valency k = 0")
    u = [Fraction(1), theta / arr.k]
    for i in range(1, arr.D):
        if arr.b(i) == 0:
            raise InfeasibleError(f"b_{i} = 0; the recurrence cannot be solved for u_{i + 1}")
        u.append(((theta - arr.a(i)) * u[i] - arr.c(i) * u[i - 1]) / arr.b(i))
    return StandardSequence(theta, tuple(u[: arr.D + 1]))


def standard_sequence_closed_form(p: ClassicalParams) -> StandardSequence:
    """Product formula for the sequence at the least eigenvalue -r (b >= 2, D >= 2)."""
    if p.b < 2 or p.b.denominator != 1:
        raise ValueError("closed form needs an integer b >= 2")
    if p.D < 2:
        raise ValueError("closed form needs D >= 2")
    if p.beta == 0:
        raise ValueError("beta = 0: u_1 = -1/beta is undefined")
    u = [Fraction(1), -1 / p.beta]
    ratio = Fraction(1)
    for i in range(2, p.D + 1):
        j = i - 1
        denom = p.beta - p.alpha * p.bracket(j)
        if denom == 0:
            raise ValueError(f"zero factor beta - alpha*[{j}] = 0 in the closed form")
        ratio *= (1 + p.alpha * p.bracket(j)) / denom
        u.append((-1) ** i / p.beta * ratio)
    return StandardSequence(-p.r, tuple(u))


def multiplicity(arr: IntersectionArray, theta: Rational) -> Fraction:
    """Multiplicity of theta as an eigenvalue: n / sum_i k_i u_i(theta)**2."""
    seq = standard_sequence(arr, theta)
    if arr.n is None:
        raise InfeasibleError("distance distribution undefined")
    norm = sum(k * u * u for k, u in zip(arr.k_dist, seq.u_seq))
    if norm == 0:
        raise InfeasibleError("standard sequence has zero weighted norm")
    return arr.n / norm


def delsarte_clique_data(p: ClassicalParams) -> GeometricProfile:
    if p.b < 2 or p.D < 2:
        raise ValueError("phi/tau formulas need b >= 2 and D >= 2")
    br = p.bracket
    notes = []
    if p.alpha == 0:
        notes.append("alpha = 0: no assemblies (assemblies_per_vertex undefined)")
        per_vertex = None
    else:
        per_vertex = p.beta / p.alpha
    return GeometricProfile(
        phi_seq=tuple(1 + p.alpha * br(j) for j in range(p.D)),
        tau_seq=tuple(br(j) for j in range(1, p.D + 1)),
        delsarte_order=p.beta + 1,
        lines_per_vertex=p.r,
        assembly_order=p.alpha * p.r + 1,
        assemblies_per_vertex=per_vertex,
        notes=tuple(notes),
    )


def geometric_intersection_numbers(
    phi_seq: Sequence[Rational], tau_seq: Sequence[Rational], k: Rational, theta_min: Rational
) -> tuple[list[Fraction], list[Fraction]]:
    """Rebuild (b_1..b_{D-1}, c_1..c_D) of a geometric graph from phi_j and tau_j.

    ``phi_seq`` is phi_0..phi_{D-1} and ``tau_seq`` is tau_1..tau_D.
    """
    k, theta_min = Fraction(k), Fraction(theta_min)
    D = len(tau_seq)
    order = 1 + k / -theta_min
    c_seq = [Fraction(tau_seq[i - 1]) * Fraction(phi_seq[i - 1]) for i in range(1, D + 1)]
    b_seq = [-(theta_min + tau_seq[i - 1]) * (order - phi_seq[i]) for i in range(1, D)]
    return b_seq, c_seq


def recognize_classical(arr: IntersectionArray) -> list[ClassicalParams]:
    """Every integral-b tuple whose formulas reproduce ``arr`` exactly.

    Works for D >= 2; for D = 2 the answer may contain several tuples. Since
    c_2 = (b+1)(alpha+1), the search over b+1 in [-|c_2|, |c_2|] is complete
    whenever |alpha+1| >= 1, which covers every known family.
    """
    if arr.D < 2:
        raise ValueError("recognition needs D >= 2 (c_2 must exist)")
    c2 = arr.c(2)
    bound = int(abs(c2))
    found = []
    for b in range(-bound - 1, bound):
        if b in (0, -1):
            continue
        alpha = c2 / (b + 1) - 1
        rD = bracket(arr.D, b)
        if rD == 0:
            continue
        p = ClassicalParams(arr.D, Fraction(b), alpha, arr.k / rD)
        cand = intersection_array(p)
        if cand.b_seq == arr.b_seq and cand.c_seq == arr.c_seq:
            found.append(p)
    return found
