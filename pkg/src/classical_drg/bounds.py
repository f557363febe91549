"""Inequalities and divisibility conditions on classical parameters,
and the case analysis that classifies parameter tuples using them.

All comparisons are exact; there is deliberately no tolerance anywhere here.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .params import ClassicalParams, Rational, intersection_array


class Relation(str, enum.Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    DIVIDES = "divides"
    INTEGER = "integer"

    def evaluate(self, lhs: Fraction, rhs: Fraction) -> bool:
        if self is Relation.LT:
            return lhs < rhs
        if self is Relation.LE:
            return lhs <= rhs
        if self is Relation.GT:
            return lhs > rhs
        if self is Relation.GE:
            return lhs >= rhs
        if self is Relation.DIVIDES:
            # lhs | rhs for integers, lhs != 0
            if lhs == 0 or lhs.denominator != 1 or rhs.denominator != 1:
                return False
            return rhs.numerator % lhs.numerator == 0
        return lhs.denominator == 1


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    relation: Relation
    holds: bool
    strictness_note: str = ""
    at: Optional[Fraction] = None  # the integer s / sigma a check was evaluated at, if any

    @classmethod
    def evaluate(cls, name: str, lhs: Rational, relation: Relation, rhs: Rational,
                 note: str = "", at: Optional[Rational] = None) -> "BoundCheck":
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        return cls(name, lhs, rhs, relation, relation.evaluate(lhs, rhs), note,
                   None if at is None else Fraction(at))

    def describe(self) -> str:
        mark = "ok " if self.holds else "NO "
        if self.relation is Relation.INTEGER:
            body = f"{self.lhs} is an integer"
        else:
            body = f"{self.lhs} {self.relation.value} {self.rhs}"
        return f"{mark}{self.name}: {body}"


def _binom2(x: Rational) -> Fraction:
    x = Fraction(x)
    return x * (x - 1) / 2


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _a1_c2_k(p: ClassicalParams) -> tuple[Fraction, Fraction, Fraction]:
    arr = intersection_array(p)
    return arr.a(1), arr.c(2) if p.D >= 2 else Fraction(0), arr.k


def claw_bound(k: Rational, a1: Rational, c2: Rational, s: int) -> BoundCheck:
    """No induced K_{1,s+1} when (s+1)(a1+1) - k > (c2-1) * C(s+1, 2)."""
    _require(s >= 1, "claw bound needs s >= 1")
    lhs = (s + 1) * (Fraction(a1) + 1) - Fraction(k)
    rhs = (Fraction(c2) - 1) * _binom2(s + 1)
    return BoundCheck.evaluate("claw_bound", lhs, Relation.GT, rhs,
                               "strict; holds => no induced (s+1)-claw", at=s)


def metsch_conditions(k: Rational, a1: Rational, c2: Rational, s: int
                      ) -> tuple[BoundCheck, BoundCheck, Fraction]:
    """Both checks holding make the graph a partial linear space whose lines are the
    maximal cliques of size at least the returned threshold, at most s per vertex."""
    _require(s >= 1, "Metsch's conditions need s >= 1")
    a1, c2 = Fraction(a1), Fraction(c2)
    first = dataclasses.replace(claw_bound(k, a1, c2, s), name="metsch_claw")
    second = BoundCheck.evaluate("metsch_lambda", a1 + 1, Relation.GT, (c2 - 1) * (2 * s - 1),
                                 "strict", at=s)
    threshold = a1 + 2 - (c2 - 1) * (s - 1)
    return first, second, threshold


def spls_conditions(p: ClassicalParams, c: int, s: int) -> list[BoundCheck]:
    """Numerical side conditions of the SPLS(c, s) property."""
    _require(c >= 1 and s >= 2, "SPLS(c, s) needs c >= 1 and s >= 2")
    a1, c2, _ = _a1_c2_k(p)
    return [
        BoundCheck.evaluate("spls_a1", a1, Relation.GE, (2 * s - 1) * (c - 1), at=s),
        BoundCheck.evaluate("spls_c_le_c2", c, Relation.LE, c2),
        BoundCheck.evaluate("spls_line_size", a1 + 2 - (c - 1) * (s - 1), Relation.GE,
                            s * (c - 1) + 2, "line size floor", at=s),
        BoundCheck.evaluate("spls_s_ge_r", s, Relation.GE, p.r, "necessary once SPLS(s) holds", at=s),
    ]


def sigma_lower_bound(p: ClassicalParams) -> BoundCheck:
    """Smallest integer sigma >= r with sigma(a1+1) - k <= (c2-1) C(sigma, 2).

    ``at`` carries sigma. If no such sigma exists (c2 <= 1 with the left side
    growing) the check comes back with ``holds`` False at sigma = r.
    """
    _require(p.b >= 1, "sigma bound needs b >= 1")
    a1, c2, k = _a1_c2_k(p)
    r = math.ceil(p.r)

    def sides(sig: int) -> tuple[Fraction, Fraction]:
        return sig * (a1 + 1) - k, (c2 - 1) * _binom2(sig)

    lhs, rhs = sides(r)
    if lhs <= rhs:
        return BoundCheck.evaluate("sigma_lower_bound", lhs, Relation.LE, rhs, "sigma >= r", at=r)
    if c2 <= 1:
        return BoundCheck.evaluate("sigma_lower_bound", lhs, Relation.LE, rhs,
                                   "no finite sigma: the right side does not grow", at=r)
    # f(x) = (c2-1) x(x-1)/2 - (a1+1) x + k is an upward parabola negative at r;
    # start from the float root estimate and settle the integer exactly.
    q = float(c2 - 1) / 2
    lin = float(a1 + 1) + q
    disc = max(lin * lin - 4 * q * float(k), 0.0)
    sig = max(r + 1, int((lin + math.sqrt(disc)) / (2 * q)) - 2)
    while sides(sig)[0] > sides(sig)[1]:
        sig += 1
    while sig - 1 > r and sides(sig - 1)[0] <= sides(sig - 1)[1]:
        sig -= 1
    lhs, rhs = sides(sig)
    return BoundCheck.evaluate("sigma_lower_bound", lhs, Relation.LE, rhs, "sigma >= r", at=sig)


def thm_spls_sufficient(p: ClassicalParams) -> BoundCheck:
    """beta >= (8ab + 8b + 5a) r / 3 gives SPLS(floor(4r/3)) and an integral alpha in [0, b]."""
    _require(p.b >= 2 and p.D >= 3, "needs b >= 2 and D >= 3")
    a, b = p.alpha, p.b
    rhs = (8 * a * b + 8 * b + 5 * a) * p.r / 3
    return BoundCheck.evaluate("spls_sufficient", p.beta, Relation.GE, rhs,
                               "non-strict", at=math.floor(4 * p.r / 3))


def thm_geometric_conditions(p: ClassicalParams, s: int) -> list[BoundCheck]:
    """Three strict lower bounds on beta which, with SPLS(s), force geometricity."""
    _require(p.b >= 2 and p.D >= 3 and s >= 2, "needs b >= 2, D >= 3, s >= 2")
    a, b, r = p.alpha, p.b, p.r
    cub = (b + 1) * (b * b + b + 1) - 2
    rhs1 = (b + 2) * (b + 1) * (s - 1) - (b * (b + 1) + r - 1) * a
    rhs2 = cub * (s - b) - a * (b + 1) * r + a * (b + 1) ** 2
    rhs3 = (cub + b) * (s - b) - a * (r - 1) + b * b - b
    return [
        BoundCheck.evaluate("geometric_1", p.beta, Relation.GT, rhs1, "strict", at=s),
        BoundCheck.evaluate("geometric_2", p.beta, Relation.GT, rhs2, "strict", at=s),
        BoundCheck.evaluate("geometric_3", p.beta, Relation.GT, rhs3, "strict", at=s),
    ]


def betabound_terms(p: ClassicalParams) -> tuple[Fraction, Fraction]:
    """The two arguments of the max in the beta bound that forces geometricity.

    The first is kept in the form 2 (b+2)^2 (ab+b+a) r / (2b+3).
    """
    a, b, r = p.alpha, p.b, p.r
    first = 2 * (b + 2) ** 2 * (a * b + b + a) * r / (2 * b + 3)
    second = (2 * b + 4) * r * ((b + 1) * (b * b + b + 2) - 3) / (2 * b + 3)
    return first, second


def thm_betabound(p: ClassicalParams) -> BoundCheck:
    _require(p.b >= 2 and p.D >= 3, "needs b >= 2 and D >= 3")
    return BoundCheck.evaluate("betabound_geometric", p.beta, Relation.GE, max(betabound_terms(p)),
                               "non-strict; holds => geometric")


def item7_bound(p: ClassicalParams) -> BoundCheck:
    """Membership in the bounded-beta region of the classification."""
    _require(p.b >= 2 and p.D >= 3, "needs b >= 2 and D >= 3")
    return BoundCheck.evaluate("item7_region", p.beta, Relation.LT, max(betabound_terms(p)), "strict")


def corollary_alpha_zero(p: ClassicalParams) -> BoundCheck:
    """With alpha = 0 every graph has beta < 2 (b+2)/(2b+3) (b^3 + 2b^2 + 3b - 1) r."""
    _require(p.b >= 2 and p.D >= 3, "needs b >= 2 and D >= 3")
    _require(p.alpha == 0, "the alpha = 0 bound applies only when alpha = 0")
    b = p.b
    rhs = 2 * (b + 2) * (b**3 + 2 * b * b + 3 * b - 1) * p.r / (2 * b + 3)
    return BoundCheck.evaluate("alpha_zero_bound", p.beta, Relation.LT, rhs,
                               "strict; violation => no such graph")


def metsch_legacy_bounds(p: ClassicalParams) -> list[BoundCheck]:
    """Bounds for alpha in {b-1, b}; a violation forces bilinear forms / Grassmann."""
    _require(p.b >= 2, "needs b >= 2")
    b = p.b
    if p.alpha == b - 1:
        rhs = (2 * b**4 + 2 * b**3 + 2 * b * b + b - 1) * p.r / (2 * b - 1)
        return [BoundCheck.evaluate("metsch_bilinear", p.beta, Relation.LT, rhs,
                                    "strict; violation => bilinear forms graph")]
    if p.alpha == b:
        rhs = Fraction(8, 3) * (b * b + 2 * b) * p.r
        return [BoundCheck.evaluate("metsch_grassmann", p.beta, Relation.LT, rhs,
                                    "strict; violation => Grassmann graph")]
    raise ValueError("Metsch's bounds apply only to alpha in {b-1, b}")


def dual_pasch_bound(p: ClassicalParams) -> BoundCheck:
    _require(p.b >= 2 and p.D >= 3, "needs b >= 2 and D >= 3")
    _require(1 <= p.alpha <= p.b - 1, "needs 1 <= alpha <= b-1")
    a, b = p.alpha, p.b
    return BoundCheck.evaluate("dual_pasch", p.beta, Relation.GT, (p.r - a - 1) * a * b + a, "strict")


def item8_conditions(p: ClassicalParams) -> list[BoundCheck]:
    _require(p.b >= 2, "needs b >= 2")
    a, b = p.alpha, p.b
    checks = [
        BoundCheck.evaluate("item8_b_ge_3", b, Relation.GE, 3),
        BoundCheck.evaluate("item8_alpha_integer", a, Relation.INTEGER, 0),
        BoundCheck.evaluate("item8_alpha_ge_1", a, Relation.GE, 1),
        BoundCheck.evaluate("item8_alpha_le_b_minus_2", a, Relation.LE, b - 2),
        BoundCheck.evaluate("item8_divisibility", a + 1, Relation.DIVIDES, b * (b + 1)),
        BoundCheck.evaluate("item8_beta_ge_alpha_r", p.beta, Relation.GE, a * p.r),
    ]
    if a != 0:
        checks.append(BoundCheck.evaluate("item8_assemblies_integer", p.beta / a, Relation.INTEGER, 0))
    else:
        checks.append(BoundCheck("item8_assemblies_integer", Fraction(0), Fraction(0), Relation.INTEGER,
                                 False, "alpha = 0: beta/alpha undefined"))
    return checks


class CaseTag(str, enum.Enum):
    JOHNSON = "Johnson"
    HAMMING_OR_DOOB = "HammingOrDoob"
    HALVED_CUBE = "HalvedCube"
    GOSSET = "Gosset"
    GRASSMANN_FORCED = "GrassmannForced"
    BILINEAR_FORMS_FORCED = "BilinearFormsForced"
    ITEM7_REGION = "Item7Region"
    ITEM8_CANDIDATE = "Item8Candidate"
    INFEASIBLE = "Infeasible"
    OUTSIDE_SCOPE_B_NEGATIVE = "OutsideScope_bNegative"


@dataclass(frozen=True)
class ClassificationOutcome:
    params: ClassicalParams
    case_tags: frozenset
    evidence: tuple[BoundCheck, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.case_tags:
            raise ValueError("an outcome needs at least one tag")
        if CaseTag.INFEASIBLE in self.case_tags and len(self.case_tags) > 1:
            raise ValueError("Infeasible excludes every other tag")

    @property
    def infeasible(self) -> bool:
        return CaseTag.INFEASIBLE in self.case_tags

    @property
    def tag_names(self) -> list[str]:
        return sorted(t.value for t in self.case_tags)

    @property
    def violated(self) -> list[str]:
        return [c.name for c in self.evidence if not c.holds]


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _classify_b1(p: ClassicalParams) -> tuple[set, list, list]:
    # Terwilliger's list for b = 1; the beta ranges are those of the actual families.
    D, a, beta = p.D, p.alpha, p.beta
    tags, notes = set(), []
    if a == 0 and _is_int(beta) and beta >= 1:
        tags.add(CaseTag.HAMMING_OR_DOOB)
    elif a == 1 and _is_int(beta) and beta >= D:
        tags.add(CaseTag.JOHNSON)
    elif a == 2 and beta in (2 * D - 1, 2 * D + 1):
        tags.add(CaseTag.HALVED_CUBE)
    elif (D, a, beta) == (3, 4, 9):
        tags.add(CaseTag.GOSSET)
    if not tags:
        tags.add(CaseTag.INFEASIBLE)
        notes.append("b = 1: not among the Johnson, Hamming/Doob, halved cube or Gosset "
                     "parameters (Terwilliger's classification)")
    return tags, [], notes


def classify(p: ClassicalParams) -> ClassificationOutcome:
    if p.D < 3:
        raise ValueError("classification needs D >= 3")
    evidence: list[BoundCheck] = []
    notes: list[str] = []
    tags: set = set()

    issues = p.validation_issues()
    if p.b.denominator == 1 and p.b <= -2:
        return ClassificationOutcome(
            p, frozenset({CaseTag.OUTSIDE_SCOPE_B_NEGATIVE}), (),
            ("b <= -2 is outside this classification",))
    if issues:
        return ClassificationOutcome(p, frozenset({CaseTag.INFEASIBLE}), (), tuple(issues))

    if p.b == 1:
        tags, evidence, notes = _classify_b1(p)
        return ClassificationOutcome(p, frozenset(tags), tuple(evidence), tuple(notes))

    a, b = p.alpha, p.b
    item7 = item7_bound(p)
    spls = thm_spls_sufficient(p)
    geometric = thm_betabound(p)
    infeasible = False

    if a == 0:
        cor = corollary_alpha_zero(p)
        evidence += [cor, item7]
        if cor.holds:
            tags.add(CaseTag.ITEM7_REGION)
        else:
            infeasible = True
            notes.append("alpha = 0 and beta reaches the alpha = 0 bound")
    elif a in (b - 1, b):
        legacy = metsch_legacy_bounds(p)[0]
        evidence += [legacy, item7]
        if legacy.holds:
            tags.add(CaseTag.ITEM7_REGION)
        else:
            tags.add(CaseTag.BILINEAR_FORMS_FORCED if a == b - 1 else CaseTag.GRASSMANN_FORCED)
            if item7.holds:
                tags.add(CaseTag.ITEM7_REGION)
    else:
        evidence.append(item7)
        if item7.holds:
            tags.add(CaseTag.ITEM7_REGION)
        else:
            item8 = item8_conditions(p)
            evidence += item8
            if all(c.holds for c in item8):
                tags.add(CaseTag.ITEM8_CANDIDATE)
            else:
                infeasible = True
                notes.append("beta exceeds the bounded region and the item-8 conditions fail")

    evidence += [spls, geometric]
    if spls.holds and not _is_int(a):
        infeasible = True
        notes.append("beta reaches the SPLS bound, which forces alpha to be an integer")
    if spls.holds and a > b:
        infeasible = True
        notes.append("beta reaches the SPLS bound, which forces alpha <= b")
    if geometric.holds and not infeasible:
        notes.append("geometric forced")
    if infeasible:
        tags = {CaseTag.INFEASIBLE}
    return ClassificationOutcome(p, frozenset(tags), tuple(evidence), tuple(notes))


@dataclass(frozen=True)
class ScanRow:
    params: ClassicalParams
    outcome: ClassificationOutcome


def rational_range(lo: Rational, hi: Rational, step: Rational = 1) -> list[Fraction]:
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def scan(D_range: Iterable[int], b_range: Iterable[int], alphas: Iterable[Rational],
         beta_range: Sequence[Rational]) -> list[ScanRow]:
    """Classify every tuple of the grid; rows in lexicographic (D, b, alpha, beta) order.

    ``beta_range`` is ``(lo, hi)`` or ``(lo, hi, step)``, inclusive of both ends.
    """
    Ds = sorted(set(D_range))
    bs = sorted({Fraction(x) for x in b_range})
    alist = sorted({Fraction(x) for x in alphas})
    betas = rational_range(*beta_range)
    rows = []
    for D in Ds:
        for b in bs:
            for a in alist:
                for beta in betas:
                    p = ClassicalParams(D, b, a, beta)
                    rows.append(ScanRow(p, classify(p)))
    return rows
