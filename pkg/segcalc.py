#!/usr/bin/env python3
"""
Segment Calculus
Zelevinsky segments and multisegments over formal cuspidal lines with a
parity class: shifts, conjugate duals, linking, standard order, ladder and
Speh predicates, the Moeglin-Waldspurger involution, and the three-valued
distinction and reducibility predicates the orbit engine and verdicts use.

Endpoints are half-integers stored doubled; a segment [a,b] on a line is the
set of points a, a+1, ..., b.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from config import ENGINE_CONFIG, SQINT_RULES
from errors import InputValidationError, PreconditionError

logger = logging.getLogger(__name__)


class Tri(Enum):
    """Three-valued outcome with Kleene connectives"""
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def and_(self, other: "Tri") -> "Tri":
        if Tri.NO in (self, other):
            return Tri.NO
        if Tri.UNKNOWN in (self, other):
            return Tri.UNKNOWN
        return Tri.YES

    def or_(self, other: "Tri") -> "Tri":
        if Tri.YES in (self, other):
            return Tri.YES
        if Tri.UNKNOWN in (self, other):
            return Tri.UNKNOWN
        return Tri.NO

    @staticmethod
    def of(flag: bool) -> "Tri":
        return Tri.YES if flag else Tri.NO

    @staticmethod
    def all_of(values: Iterable["Tri"]) -> "Tri":
        result = Tri.YES
        for value in values:
            result = result.and_(value)
            if result is Tri.NO:
                break
        return result

    @staticmethod
    def any_of(values: Iterable["Tri"]) -> "Tri":
        result = Tri.NO
        for value in values:
            result = result.or_(value)
            if result is Tri.YES:
                break
        return result


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact element of (1/2)Z, stored as twice its value"""
    doubled: int

    @classmethod
    def of(cls, value: Union["HalfInt", int, str, Fraction]) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise InputValidationError(f"{value!r} is not a half-integer", clause="half-integer value")
        try:
            frac = Fraction(value) if not isinstance(value, str) else Fraction(value.strip())
        except (ValueError, ZeroDivisionError, TypeError):
            raise InputValidationError(f"{value!r} is not a half-integer", clause="half-integer value")
        twice = frac * 2
        if twice.denominator != 1:
            raise InputValidationError(f"{value!r} is not a half-integer", clause="half-integer value")
        return cls(int(twice))

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)


class LineClass(Enum):
    """Conjugate self-duality class of a cuspidal line"""
    EVEN = "even"    # nu^(1/2) rho x| 1_0 reducible, GL(F)-distinguished
    ODD = "odd"      # rho x| 1_0 reducible
    NONSD = "nonsd"  # not conjugate self-dual, paired with a partner line


@dataclass(frozen=True)
class CuspLine:
    id: str
    sd_class: LineClass
    partner: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise InputValidationError("line id must be nonempty", clause="CuspLine: id")
        if self.sd_class is LineClass.NONSD:
            if not self.partner or self.partner == self.id:
                raise InputValidationError(f"line {self.id}: non-self-dual line needs a distinct partner",
                                           clause="CuspLine: partner != self")
        elif self.partner is not None:
            raise InputValidationError(f"line {self.id}: self-dual line cannot have a partner",
                                       clause="CuspLine: no partner on Even/Odd")

    @property
    def is_self_dual(self) -> bool:
        return self.sd_class is not LineClass.NONSD

    @property
    def parity(self) -> Optional[int]:
        """eta: +1 on Even lines, -1 on Odd lines"""
        return {LineClass.EVEN: 1, LineClass.ODD: -1}.get(self.sd_class)

    def dual_line(self) -> "CuspLine":
        if self.is_self_dual:
            return self
        return CuspLine(self.partner, LineClass.NONSD, partner=self.id)


@dataclass(frozen=True)
class Segment:
    line: CuspLine
    a: HalfInt
    b: HalfInt

    def __post_init__(self):
        if (self.b.doubled - self.a.doubled) % 2 != 0:
            raise InputValidationError(f"segment [{self.a},{self.b}]: b - a is not an integer",
                                       clause="Segment: b - a integral")
        if self.b.doubled < self.a.doubled:
            raise InputValidationError(f"segment [{self.a},{self.b}] is empty",
                                       clause="Segment: b >= a")

    @property
    def a2(self) -> int:
        return self.a.doubled

    @property
    def b2(self) -> int:
        return self.b.doubled

    @property
    def length(self) -> int:
        return (self.b2 - self.a2) // 2 + 1

    @property
    def residue(self) -> int:
        return self.a2 % 2

    def points(self) -> List[int]:
        """Doubled coordinates of the points of the segment"""
        return list(range(self.a2, self.b2 + 1, 2))

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]@{self.line.id}"


def seg(line: CuspLine, a, b) -> Segment:
    """Segment from loosely typed endpoints (ints, strings like '3/2', HalfInt)"""
    return Segment(line, HalfInt.of(a), HalfInt.of(b))


def seg2(line: CuspLine, a2: int, b2: int) -> Optional[Segment]:
    """Segment from doubled endpoints, None for the empty segment [a, a-1]"""
    if b2 < a2:
        return None
    return Segment(line, HalfInt(a2), HalfInt(b2))


def _std_key(s: Segment) -> Tuple[str, int, int]:
    return (s.line.id, -s.a2, -s.b2)


@dataclass(frozen=True)
class Multisegment:
    """Finite multiset of segments, kept in standard order"""
    segs: Tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'segs', tuple(sorted(self.segs, key=_std_key)))

    @classmethod
    def of(cls, *segs: Segment) -> "Multisegment":
        return cls(tuple(segs))

    def __iter__(self):
        return iter(self.segs)

    def __len__(self) -> int:
        return len(self.segs)

    @property
    def size(self) -> int:
        """Number of support points counted with multiplicity"""
        return sum(s.length for s in self.segs)

    def __str__(self) -> str:
        return '{' + ', '.join(str(s) for s in self.segs) + '}'


def shift(s: Segment, x) -> Segment:
    """nu^x s"""
    x = HalfInt.of(x)
    return Segment(s.line, s.a + x, s.b + x)


def conj_dual(s: Segment) -> Segment:
    """[a,b]@rho -> [-b,-a] on the conjugate-dual line"""
    return Segment(s.line.dual_line(), -s.b, -s.a)


def shift_multiseg(m: Multisegment, x) -> Multisegment:
    return Multisegment(tuple(shift(s, x) for s in m))


def conj_dual_multiseg(m: Multisegment) -> Multisegment:
    return Multisegment(tuple(conj_dual(s) for s in m))


def is_conj_self_dual(m: Multisegment) -> bool:
    return conj_dual_multiseg(m) == m


def exponent(s: Segment) -> HalfInt:
    """(a + b) / 2"""
    return HalfInt((s.a2 + s.b2) // 2)


def linked(s1: Segment, s2: Segment) -> bool:
    """Union is a segment different from both"""
    if s1.line != s2.line or s1.residue != s2.residue:
        return False
    if max(s1.a2, s2.a2) > min(s1.b2, s2.b2) + 2:
        return False
    contains_12 = s1.a2 <= s2.a2 and s2.b2 <= s1.b2
    contains_21 = s2.a2 <= s1.a2 and s1.b2 <= s2.b2
    return not (contains_12 or contains_21)


def precedes(s1: Segment, s2: Segment) -> bool:
    """s1 and s2 linked with s2 beginning strictly later"""
    return linked(s1, s2) and s2.a2 > s1.a2


def std_sort(m: Multisegment) -> List[Segment]:
    """Standard form: grouped by line id, beginnings weakly decreasing"""
    return sorted(m.segs, key=_std_key)


def support(m: Multisegment) -> Counter:
    """Multiset of (line id, doubled point)"""
    return Counter((s.line.id, x) for s in m for x in s.points())


def is_rigid(m: Multisegment) -> bool:
    """Supported on a single line and residue class"""
    return len({(s.line, s.residue) for s in m}) <= 1


def is_generic(m: Multisegment) -> bool:
    """No two segments linked"""
    segs = m.segs
    return not any(linked(segs[i], segs[j]) for i in range(len(segs)) for j in range(i + 1, len(segs)))


def is_ladder(m: Multisegment) -> bool:
    """Rigid with strictly decreasing beginnings and ends"""
    if not is_rigid(m):
        return False
    segs = std_sort(m)
    return all(segs[i].a2 > segs[i + 1].a2 and segs[i].b2 > segs[i + 1].b2 for i in range(len(segs) - 1))


def is_speh(m: Multisegment) -> bool:
    """Ladder with unit steps: a_i = a_{i+1} + 1 and b_i = b_{i+1} + 1"""
    if not is_ladder(m):
        return False
    segs = std_sort(m)
    return all(segs[i].a2 == segs[i + 1].a2 + 2 and segs[i].b2 == segs[i + 1].b2 + 2
               for i in range(len(segs) - 1))


def _mw_rigid(pieces: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Moeglin-Waldspurger end-chain extraction on doubled (a, b) pairs of one residue"""
    work = [list(p) for p in pieces]
    out = []
    while work:
        end = max(b for _, b in work)
        current = max((p for p in work if p[1] == end), key=lambda p: p[0])
        chain = [current]
        target = end - 2
        while True:
            options = [p for p in work if p[1] == target and p[0] < current[0]]
            if not options:
                break
            current = max(options, key=lambda p: p[0])
            chain.append(current)
            target -= 2
        out.append((end - 2 * (len(chain) - 1), end))
        for p in chain:
            p[1] -= 2
        work = [p for p in work if p[1] >= p[0]]
    return out


def _mw_ladder(pieces: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Same extraction on a ladder: each chain is the prefix with consecutive ends"""
    work = [list(p) for p in sorted(pieces, key=lambda p: -p[1])]
    out = []
    while work:
        r = 1
        while r < len(work) and work[r][1] == work[r - 1][1] - 2:
            r += 1
        end = work[0][1]
        out.append((end - 2 * (r - 1), end))
        for p in work[:r]:
            p[1] -= 2
        work = [p for p in work if p[1] >= p[0]]
    return out


def _by_rigid_class(m: Multisegment) -> Dict[Tuple[CuspLine, int], List[Tuple[int, int]]]:
    groups: Dict[Tuple[CuspLine, int], List[Tuple[int, int]]] = defaultdict(list)
    for s in m:
        groups[(s.line, s.residue)].append((s.a2, s.b2))
    return groups


def mw_dual(m: Multisegment, use_ladder_rule: bool = True) -> Multisegment:
    """
    Zelevinsky involution partner: Z(m) = L(mw_dual(m)).

    Multi-line input is processed one rigid class at a time. Ladders go
    through the prefix rule unless use_ladder_rule is False.
    """
    out = []
    for (line, _), pieces in sorted(_by_rigid_class(m).items(), key=lambda kv: (kv[0][0].id, kv[0][1])):
        rigid = Multisegment(tuple(Segment(line, HalfInt(a), HalfInt(b)) for a, b in pieces))
        if use_ladder_rule and is_ladder(rigid):
            dual = _mw_ladder(pieces)
        else:
            dual = _mw_rigid(pieces)
        out.extend(Segment(line, HalfInt(a), HalfInt(b)) for a, b in dual)
    return Multisegment(tuple(out))


def zelevinsky_to_langlands(s: Segment) -> Multisegment:
    """Z(s) in Langlands notation: the singletons of s"""
    return Multisegment(tuple(Segment(s.line, HalfInt(x), HalfInt(x)) for x in s.points()))


def sp_dist_ladder(m: Multisegment) -> bool:
    """Even number of segments with Delta_{2i-1} = nu Delta_{2i} in ladder order"""
    if not is_ladder(m):
        raise PreconditionError(f"{m} is not a ladder", clause="sp_dist_ladder: ladder input")
    segs = std_sort(m)
    if len(segs) % 2:
        return False
    return all(segs[i] == shift(segs[i + 1], ONE) for i in range(0, len(segs), 2))


def _rule(rule: Optional[str]) -> str:
    rule = rule or ENGINE_CONFIG['sqint_dist_rule']
    if rule not in SQINT_RULES:
        raise InputValidationError(f"unknown square-integrable rule {rule!r}", clause="sqint_dist_rule")
    return rule


def glF_dist_sqint(s: Segment, rule: Optional[str] = None) -> Tri:
    """
    GL(F)-distinction of the essentially square-integrable L(s).

    Length one is decided by the line class. Longer segments use the parity
    rule (-1)^(l-1) eta = +1, or Unknown under the conservative rule.
    """
    rule = _rule(rule)
    if not s.line.is_self_dual or exponent(s).doubled != 0 or conj_dual(s) != s:
        return Tri.NO
    if s.length == 1:
        return Tri.of(s.line.sd_class is LineClass.EVEN)
    if rule == 'conservative':
        return Tri.UNKNOWN
    return Tri.of((-1) ** (s.length - 1) * s.line.parity == 1)


def matringe_witness(m: Multisegment, rule: Optional[str] = None) -> Tuple[Tri, Optional[List[Tuple[int, int]]]]:
    """
    Search involutions w of the segment indices with Delta_w(i) = conj_dual(Delta_i)
    and GL(F)-distinguished fixed points.

    Returns:
        (verdict, pairs) where pairs lists (i, w(i)) for a Yes witness (i == w(i) for fixed points)
    """
    if not is_generic(m):
        raise PreconditionError(f"{m} has linked segments", clause="glF_dist_generic: generic input")
    rule = _rule(rule)
    segs = m.segs
    memo: Dict[Tuple[int, ...], Tuple[Tri, Optional[List[Tuple[int, int]]]]] = {}

    def search(remaining: Tuple[int, ...]) -> Tuple[Tri, Optional[List[Tuple[int, int]]]]:
        if not remaining:
            return Tri.YES, []
        if remaining in memo:
            return memo[remaining]
        i, rest = remaining[0], remaining[1:]
        best = Tri.NO
        result: Tuple[Tri, Optional[List[Tuple[int, int]]]] = (Tri.NO, None)
        fixed = glF_dist_sqint(segs[i], rule)
        if fixed is not Tri.NO:
            sub, pairs = search(rest)
            combined = fixed.and_(sub)
            if combined is Tri.YES:
                result = (Tri.YES, [(i, i)] + pairs)
            best = best.or_(combined)
        if result[0] is not Tri.YES:
            dual = conj_dual(segs[i])
            for j in rest:
                if segs[j] != dual:
                    continue
                sub, pairs = search(tuple(k for k in rest if k != j))
                if sub is Tri.YES:
                    result = (Tri.YES, [(i, j)] + pairs)
                    break
                best = best.or_(sub)
        if result[0] is not Tri.YES:
            result = (best, None)
        memo[remaining] = result
        return result

    return search(tuple(range(len(segs))))


def glF_dist_generic(m: Multisegment, rule: Optional[str] = None) -> Tri:
    """GL(F)-distinction of the generic L(m) by the involution criterion"""
    return matringe_witness(m, rule)[0]


def in_reducibility_set(line: CuspLine, x) -> bool:
    """Whether nu^x rho x| 1_0 is reducible: x = +-1/2 on Even lines, x = 0 on Odd lines"""
    x = HalfInt.of(x)
    if line.sd_class is LineClass.EVEN:
        return abs(x.doubled) == 1
    if line.sd_class is LineClass.ODD:
        return x.doubled == 0
    return False


def meets_reducibility_set(s: Segment) -> bool:
    return any(in_reducibility_set(s.line, HalfInt(x)) for x in s.points())


def conj_symplectic_sqint(s: Segment) -> bool:
    """Parameter of L(s) conjugate-symplectic: (-1)^(l-1) eta = -1"""
    if not s.line.is_self_dual or exponent(s).doubled != 0:
        raise PreconditionError(f"{s} is not conjugate self-dual", clause="conj_symplectic_sqint: self-dual input")
    return (-1) ** (s.length - 1) * s.line.parity == -1
