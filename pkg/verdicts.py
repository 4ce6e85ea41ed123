#!/usr/bin/env python3
"""
Distinction Verdicts
High-level decision procedures: discrete-series and tempered vanishing from
admissible data, base-change verdicts for ladders and Speh representations,
standard modules with a generic GL-part, and the sufficiency combinators.

Every definite verdict carries a certificate naming the result applied and
the witness data it was applied to.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from errors import InputValidationError, PreconditionError
from orbits import BlockKind, BlockSpec, SearchStatus, exists_relevant, glF_half, sp_dist
from segcalc import (HALF, CuspLine, HalfInt, LineClass, Multisegment, Segment, Tri, conj_symplectic_sqint, exponent,
                     glF_dist_sqint, is_conj_self_dual, is_generic, is_ladder, matringe_witness,
                     meets_reducibility_set, seg2, shift, shift_multiseg, sp_dist_ladder, std_sort)
from signgraph import SignTuple, check_signs, decompose, f, format_signs, path_v0, path_v1, tau, walk

logger = logging.getLogger(__name__)

# Result identifiers reported in certificates
THEOREM_LABELS = {
    'ds_odd_t': "Thm 1.1(1)",
    'ds_gap': "Thm 1.1(2)",
    'ds_repeat': "Thm 1.1(3)",
    'tempered_nonsd': "Prop 7.2(1)",
    'tempered_parity': "Prop 7.2(2)",
    'tempered_bound': "Prop 7.2(3)",
    'hered': "Lemma 8.4",
    'distinct_lines': "Lemma 8.5",
    'odd_mid_length': "Lemma 8.6",
    'ladder_not_sp': "Prop 9.4",
    'ladder_pairs': "Cor 9.3",
    'ladder_odd_s': "Prop 9.5",
    'ladder_odd_t': "Prop 9.7",
    'speh_odd': "Thm 1.3(1)",
    'speh_even': "Thm 1.3(2)",
    'standard_module': "Thm 10.3",
}


class Outcome(Enum):
    DISTINGUISHED = "Distinguished"
    NOT_DISTINGUISHED = "NotDistinguished"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    outcome: Outcome
    theorem: Optional[str] = None
    certificate: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def is_definite(self) -> bool:
        return self.outcome is not Outcome.INCONCLUSIVE


def _definite(outcome: Outcome, key: str, **certificate) -> Verdict:
    return Verdict(outcome, THEOREM_LABELS[key], dict(certificate))


def _inconclusive(*notes: str, **certificate) -> Verdict:
    return Verdict(Outcome.INCONCLUSIVE, None, dict(certificate), list(notes))


@dataclass(frozen=True)
class JordanEntry:
    """Per-line part of an admissible datum: a_1 > ... > a_k >= 0 and signs eps"""
    line: CuspLine
    a: Tuple[HalfInt, ...]
    eps: SignTuple

    @property
    def k(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class AdmissibleDatum:
    entries: Tuple[JordanEntry, ...]

    def entry(self, line_id: str) -> Optional[JordanEntry]:
        for e in self.entries:
            if e.line.id == line_id:
                return e
        return None

    @property
    def support(self) -> int:
        """Support points of I_pi: sum over lines of a_i + 1/2"""
        return sum((sum(x.doubled for x in e.a) + e.k) // 2 for e in self.entries)


@dataclass(frozen=True)
class TemperedDatum:
    gl_pairs: Tuple[Segment, ...]
    ds: AdmissibleDatum


def _fail(message: str, clause: str):
    raise InputValidationError(message, clause=clause)


def validate_entry(e: JordanEntry) -> None:
    where = f"line {e.line.id}"
    if not e.line.is_self_dual:
        _fail(f"{where}: admissible data live on Even or Odd lines", "datum: line is Even or Odd")
    if e.k < 1:
        _fail(f"{where}: empty Jordan set", "datum: k >= 1")
    if len(e.eps) != e.k:
        _fail(f"{where}: {len(e.eps)} signs for {e.k} values", "datum: len(a) = len(eps)")
    check_signs(e.eps)
    if any(x.doubled < 0 for x in e.a):
        _fail(f"{where}: negative a", "datum: a_i >= 0")
    if any(e.a[i].doubled <= e.a[i + 1].doubled for i in range(e.k - 1)):
        _fail(f"{where}: a is not strictly decreasing", "datum: a strictly decreasing")
    if e.line.sd_class is LineClass.ODD:
        if e.k % 2:
            _fail(f"{where}: Odd line needs an even number of values", "datum: k even on Odd lines")
        if not all(x.is_integer for x in e.a):
            _fail(f"{where}: Odd line needs integral a", "datum: a integral on Odd lines")
    elif any(x.is_integer for x in e.a):
        _fail(f"{where}: Even line needs a in 1/2 + Z", "datum: a half-integral on Even lines")
    if tau(e.eps) not in (0, 1):
        _fail(f"{where}: tau({format_signs(e.eps)}) = {tau(e.eps)}", "datum: tau(eps) in {0, 1}")


def validate_datum(d) -> None:
    """Check every clause of an AdmissibleDatum or TemperedDatum"""
    if isinstance(d, TemperedDatum):
        for s in d.gl_pairs:
            if exponent(s).doubled != 0:
                _fail(f"GL segment {s} is not centered", "tempered datum: gl segments centered")
        validate_datum(d.ds)
        return
    ids = [e.line.id for e in d.entries]
    if len(set(ids)) != len(ids):
        _fail(f"repeated line in {ids}", "datum: one entry per line")
    for e in d.entries:
        validate_entry(e)


def jordan_of(d: AdmissibleDatum, line_id: str) -> Tuple[int, ...]:
    """x_i = 2 a_i + 1"""
    e = d.entry(line_id)
    if e is None:
        raise PreconditionError(f"line {line_id} not in the datum", clause="jordan_of: line in datum")
    validate_entry(e)
    return tuple(x.doubled + 1 for x in e.a)


def first_repeat(eps: SignTuple) -> Optional[int]:
    """t: 1 if k = 1, else the least t with eps_t = eps_(t+1); None when eps alternates throughout"""
    if len(eps) == 1:
        return 1
    for t in range(1, len(eps)):
        if eps[t - 1] == eps[t]:
            return t
    return None


def _ds_witness(e: JordanEntry) -> Optional[Dict[str, Any]]:
    t = first_repeat(e.eps)
    if t is None:
        return None
    base = {'line': e.line.id, 't': t}
    if t % 2 == 1:
        return dict(base, condition=1, witness_index=t, key='ds_odd_t', packet_wide=False)
    for i in range(1, t // 2 + 1):
        if e.a[2 * i - 2].doubled > e.a[2 * i - 1].doubled + 2:
            return dict(base, condition=2, witness_index=i, key='ds_gap', packet_wide=True)
    if t + 2 <= e.k and e.eps[t + 1] == e.eps[t]:
        return dict(base, condition=3, witness_index=t + 2, key='ds_repeat', packet_wide=False)
    return None


def ds_vanishing(d: AdmissibleDatum) -> Verdict:
    """Not distinguished as soon as one line meets an odd t, a gap, or a repeated sign after t"""
    validate_datum(d)
    skipped = []
    for e in d.entries:
        witness = _ds_witness(e)
        if witness is not None:
            key = witness.pop('key')
            logger.info(f"Discrete series not distinguished: line {e.line.id}, condition ({witness['condition']})")
            return _definite(Outcome.NOT_DISTINGUISHED, key, **witness)
        if first_repeat(e.eps) is None:
            skipped.append(e.line.id)
    notes = [f"line {line_id}: eps alternates, no t" for line_id in skipped]
    return _inconclusive(*notes, lines=[e.line.id for e in d.entries])


def _default_pattern(e: JordanEntry, variant: bool = False) -> Tuple[int, ...]:
    if e.eps in (f(0), f(1)):
        return ()
    if tau(e.eps) == 0:
        return path_v0(e.eps, variant)
    return path_v1(e.eps, variant)


def _line_segments(e: JordanEntry, pattern: Sequence[int]) -> Tuple[List[Segment], Optional[Segment]]:
    end, history = walk(e.eps, tuple(pattern))
    if end not in (f(0), f(1)):
        raise PreconditionError(f"line {e.line.id}: pattern ends at {format_signs(end)!r}, not f_0 or f_1",
                                clause="build_I_pi: path into f_0 or f_1")
    pairs = [seg2(e.line, -e.a[x - 1].doubled, e.a[y - 1].doubled) for x, y in history.pairs]
    leftover = None
    if end == f(1):
        z = (set(range(1, e.k + 1)) - history.deleted()).pop()
        leftover = seg2(e.line, -e.a[z - 1].doubled, -1)
    return pairs, leftover


def build_I_pi(d: AdmissibleDatum, patterns: Optional[Dict[str, Sequence[int]]] = None) -> List[Segment]:
    """
    Segments of the induced representation attached to a datum and one path per line.

    Each step (x, y) of a line's history contributes [-a_x, a_y]; when the path
    ends at f_1 the leftover index z contributes [-a_z, -1/2]. Lines without
    an explicit pattern use the first-form path.
    """
    validate_datum(d)
    patterns = patterns or {}
    blocks = []
    for e in d.entries:
        pattern = patterns.get(e.line.id)
        if pattern is None:
            pattern = _default_pattern(e)
        pairs, leftover = _line_segments(e, pattern)
        blocks.extend(pairs)
        if leftover is not None:
            blocks.append(leftover)
    return blocks


def cross_validate_ds(d: AdmissibleDatum, rule: Optional[str] = None) -> Dict[str, Any]:
    """
    Replay a discrete-series vanishing verdict through the orbit engine.

    The witness line goes last; its path uses the variant form when only the
    repeated-sign condition holds. The leftover segment of a line precedes the
    segments of its closing descending run. The resulting L-blocks should admit
    no relevant orbit.
    """
    verdict = ds_vanishing(d)
    if verdict.outcome is not Outcome.NOT_DISTINGUISHED:
        return {'applicable': False, 'reason': "not applicable", 'ds_outcome': verdict.outcome.value}

    witness_line = verdict.certificate['line']
    variant = verdict.certificate['condition'] == 3
    ordered = [e for e in d.entries if e.line.id != witness_line] + [d.entry(witness_line)]

    patterns = {}
    segments: List[Segment] = []
    for e in ordered:
        use_variant = variant and e.line.id == witness_line
        pattern = _default_pattern(e, use_variant)
        patterns[e.line.id] = list(pattern)
        pairs, leftover = _line_segments(e, pattern)
        if leftover is not None:
            top = decompose(e.eps)[1][0] + (1 if use_variant else 0)
            closing = 0
            for label in reversed(pattern):
                if label > top:
                    break
                closing += 1
            pairs.insert(len(pairs) - closing, leftover)
        segments.extend(pairs)

    blocks = [BlockSpec(BlockKind.L, s) for s in segments]
    search = exists_relevant(blocks, rule)
    consistent = search.status is SearchStatus.NONE_CERTIFIED
    if not consistent:
        logger.warning(f"Replay of {verdict.theorem} on line {witness_line} gave {search.status.value}")
    return {
        'applicable': True,
        'ds_theorem': verdict.theorem,
        'ds_certificate': verdict.certificate,
        'line_order': [e.line.id for e in ordered],
        'patterns': patterns,
        'variant': variant,
        'blocks': [str(s) for s in segments],
        'outcome': search.status.value,
        'consistent': consistent,
        'nodes_visited': search.nodes_visited,
        'branches_checked': search.branches_checked,
    }


def tempered_vanishing(td: TemperedDatum) -> Verdict:
    """Conditions on each GL pair (rho, a) against the Jordan values on rho"""
    validate_datum(td)
    for s in td.gl_pairs:
        a = s.length
        if not s.line.is_self_dual:
            return _definite(Outcome.NOT_DISTINGUISHED, 'tempered_nonsd', segment=str(s), packet_wide=True)
        entry = td.ds.entry(s.line.id)
        jordan = [x.doubled + 1 for x in entry.a] if entry else []
        if jordan and all((a - b) % 2 for b in jordan):
            return _definite(Outcome.NOT_DISTINGUISHED, 'tempered_parity', segment=str(s), a=a,
                             jordan=jordan, packet_wide=True)
        if all(b <= a for b in jordan):
            verdict = _definite(Outcome.NOT_DISTINGUISHED, 'tempered_bound', segment=str(s), a=a,
                                jordan=jordan, packet_wide=True)
            if not jordan:
                verdict.certificate['marker'] = "vacuous-(3)"
                verdict.notes.append("empty Jordan set on this line; bound holds vacuously")
            return verdict
    return _inconclusive(gl_pairs=[str(s) for s in td.gl_pairs])


def _check_bc_ladder(m: Multisegment) -> List[Segment]:
    if not m.segs or not is_ladder(m):
        raise PreconditionError(f"{m} is not a nonempty ladder", clause="ladder_bc: ladder input")
    if not is_conj_self_dual(m):
        raise PreconditionError(f"{m} is not conjugate self-dual", clause="ladder_bc: conjugate self-dual")
    return std_sort(m)


def siegel_induced_irreducible(m: Multisegment) -> bool:
    """L(Delta_1..Delta_t) x| 1_0 irreducibility: the middle-left segment misses the reducibility set"""
    segs = _check_bc_ladder(m)
    return not meets_reducibility_set(segs[(len(segs) + 1) // 2 - 1])


@dataclass
class BaseChangeReport:
    in_image: Tri
    fiber: Dict[str, Any]
    verdict: Verdict


def hered_sufficient(part1: Multisegment, part2: Multisegment) -> Verdict:
    """pi_1 x pi_2 x| 1 is distinguished when nu^(-1/2) pi_1 is GL(F)- and pi_2 is Sp-distinguished"""
    if part1.segs and glF_half(part1) is not Tri.YES:
        raise PreconditionError(f"nu^(-1/2) L({part1}) is not known to be GL(F)-distinguished",
                                clause="hered_sufficient: part1 GL(F)-distinguished")
    if part2.segs and sp_dist(part2) is not Tri.YES:
        raise PreconditionError(f"L({part2}) is not known to be Sp-distinguished",
                                clause="hered_sufficient: part2 Sp-distinguished")
    return _definite(Outcome.DISTINGUISHED, 'hered', part1=str(part1), part2=str(part2))


def ladder_bc(m: Multisegment) -> BaseChangeReport:
    """Base-change image membership, fiber and verdict for a conjugate self-dual ladder"""
    segs = _check_bc_ladder(m)
    t = len(segs)
    half = segs[:t // 2]
    fiber: Dict[str, Any] = {'gl_part': [str(s) for s in half], 'singleton': True}

    if t % 2 == 0:
        in_image = Tri.YES
        fiber['base'] = "trivial 1_0"
    else:
        mid = segs[t // 2]
        in_image = Tri.of(conj_symplectic_sqint(mid))
        if in_image is Tri.YES:
            fiber['base'] = f"tau+({mid.line.id}, {mid.length})"
        else:
            fiber['base'] = "nontrivial-partial-support"
            fiber['singleton'] = False

    if t % 2 == 0:
        s = t // 2
        delta_s = segs[s - 1]
        if not sp_dist_ladder(m):
            verdict = _definite(Outcome.NOT_DISTINGUISHED, 'ladder_not_sp', ladder=str(m))
        elif meets_reducibility_set(delta_s):
            verdict = _inconclusive("tau' distinguished, irreducibility fails", ladder=str(m), s=s,
                                    delta_s=str(delta_s))
        elif s % 2 == 0:
            combined = hered_sufficient(Multisegment(), Multisegment(tuple(half)))
            verdict = _definite(Outcome.DISTINGUISHED, 'ladder_pairs', ladder=str(m), s=s,
                                delta_s=str(delta_s), via=combined.theorem)
        else:
            verdict = _definite(Outcome.NOT_DISTINGUISHED, 'ladder_odd_s', ladder=str(m), s=s,
                                delta_s=str(delta_s))
        if verdict.outcome is not Outcome.NOT_DISTINGUISHED and sp_dist_ladder(m):
            verdict.notes.append("an Sp-distinguished conjugate self-dual member forces a singleton fiber")
    else:
        k = t // 2
        mid = segs[k]
        if mid.length % 2:
            verdict = _definite(Outcome.NOT_DISTINGUISHED, 'odd_mid_length', ladder=str(m), mid=str(mid))
        elif k == 0 or segs[k - 1].a2 != 3:
            verdict = _definite(Outcome.NOT_DISTINGUISHED, 'ladder_odd_t', ladder=str(m), mid=str(mid), k=k)
        else:
            verdict = _inconclusive("b(Delta_k) = nu^(3/2) rho", ladder=str(m), k=k)
        if in_image is Tri.NO:
            verdict.notes.append("ladder is not in the base change image")

    logger.info(f"ladder_bc({m}): {verdict.outcome.value}")
    return BaseChangeReport(in_image, fiber, verdict)


def speh_ladder(delta: Segment, m: int) -> Multisegment:
    """(nu^((m-1)/2) delta, ..., nu^((1-m)/2) delta)"""
    return Multisegment(tuple(shift(delta, HalfInt(m - 1 - 2 * i)) for i in range(m)))


def speh_verdict(delta: Segment, m: int) -> Verdict:
    """Speh representations in the image: odd m never, m = 2k decided by k when nu^k Delta misses the set"""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InputValidationError(f"m must be a positive integer, got {m!r}", clause="speh_verdict: m >= 1")
    if not delta.line.is_self_dual or exponent(delta).doubled != 0:
        raise PreconditionError(f"{delta} is not conjugate self-dual", clause="speh_verdict: delta self-dual")
    ladder = speh_ladder(delta, m)
    report = ladder_bc(ladder)
    verdict = report.verdict
    if verdict.is_definite:
        key = 'speh_odd' if m % 2 else 'speh_even'
        verdict = Verdict(verdict.outcome, THEOREM_LABELS[key],
                          dict(verdict.certificate, m=m, delta=str(delta), via=verdict.theorem), verdict.notes)
    if m % 2:
        verdict.certificate['in_image'] = report.in_image.value
    return verdict


def standard_module_verdict(m: Multisegment, rule: Optional[str] = None) -> Verdict:
    """pi x| 1_0 with generic pi and positive exponents: distinguished iff nu^(-1/2) pi is GL(F)-distinguished"""
    if not m.segs:
        raise PreconditionError("empty multisegment", clause="standard_module_verdict: nonempty input")
    if any(exponent(s).doubled <= 0 for s in m):
        raise PreconditionError(f"{m} has a non-positive exponent", clause="standard_module_verdict: exponents > 0")
    if not is_generic(m):
        raise PreconditionError(f"{m} has linked segments", clause="standard_module_verdict: generic input")
    twisted = shift_multiseg(m, -HALF)
    value, pairs = matringe_witness(twisted, rule)
    if value is Tri.UNKNOWN:
        return _inconclusive("GL(F)-distinction of nu^(-1/2) pi undecided", twisted=str(twisted))
    if value is Tri.NO:
        return _definite(Outcome.NOT_DISTINGUISHED, 'standard_module', twisted=str(twisted))
    verdict = _definite(Outcome.DISTINGUISHED, 'standard_module', twisted=str(twisted),
                        involution=[[i + 1, j + 1] for i, j in pairs])
    verdict.notes.append("nu^(-1/2) pi is tempered")
    return verdict


def distinct_lines_verdict(m: Multisegment, rule: Optional[str] = None) -> Verdict:
    """Segments on mutually non-dual lines: every nu^(-1/2) L(Delta_i) must be GL(F)-distinguished"""
    lines = [s.line for s in m]
    for i, x in enumerate(lines):
        for y in lines[i + 1:]:
            if x.id == y.id or x.id == y.dual_line().id:
                raise PreconditionError(f"lines {x.id} and {y.id} are equal or conjugate dual",
                                        clause="distinct_lines_verdict: distinct lines")
    values = [(s, glF_dist_sqint(shift(s, -HALF), rule)) for s in m]
    overall = Tri.all_of(v for _, v in values)
    detail = {str(s): v.value for s, v in values}
    if overall is Tri.YES:
        return _definite(Outcome.DISTINGUISHED, 'distinct_lines', factors=detail)
    if overall is Tri.NO:
        return _definite(Outcome.NOT_DISTINGUISHED, 'distinct_lines', factors=detail)
    return _inconclusive("some factor undecided", factors=detail)
