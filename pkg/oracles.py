#!/usr/bin/env python3
"""
Exhaustive desk-scale sweeps

Each sweep checks a structural law of one engine module against an
independent computation and returns {"suite", "checked", "failures"}.
Instances are exhaustive up to a size bound, except for the random parts of
the MW and standard-module sweeps, which draw seeded samples. Failures are
listed, never raised.
"""

import logging
from itertools import combinations, permutations, product
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from config import ORACLE_CONFIG
from errors import InputValidationError, InternalInvariantError, UnidistError
from jacquet import compositions
from orbits import BlockKind, BlockSpec, OrbitDescriptor, SearchStatus, enumerate_orbit_shapes, exists_relevant
from segcalc import (HALF, CuspLine, HalfInt, LineClass, Multisegment, Tri, _mw_ladder, _mw_rigid, conj_dual,
                     glF_dist_generic, glF_dist_sqint, is_generic, mw_dual, seg2, shift_multiseg, sp_dist_ladder,
                     support)
from signgraph import bfs_component, decompose, edges, f, path_v0, path_v1, tau, walk
from verdicts import (AdmissibleDatum, JordanEntry, Outcome, cross_validate_ds, ds_vanishing, ladder_bc,
                      standard_module_verdict)
from weylinv import (c_sets, conjugate, conjugate_set, elements, gw_edges, identity, involutions, is_minimal,
                     multiply, simple_reflection, springer_path)

logger = logging.getLogger(__name__)

EVEN_LINE = CuspLine('rho', LineClass.EVEN)
ODD_LINE = CuspLine('rho', LineClass.ODD)
NONSD_A = CuspLine('a', LineClass.NONSD, partner='b')


def _report(suite: str, checked: int, failures: List[Any]) -> Dict[str, Any]:
    if failures:
        logger.warning(f"Sweep {suite}: {len(failures)} failures out of {checked} checks")
    else:
        logger.info(f"Sweep {suite}: {checked} checks passed")
    return {'suite': suite, 'checked': checked, 'failures': failures}


def _closing_run(pattern: Sequence[int], top: int) -> List[int]:
    run = []
    for label in reversed(pattern):
        if label > top:
            break
        run.append(label)
    return run[::-1]


def _check_path(e, pattern, variant: bool) -> List[str]:
    t1 = decompose(e)[1][0]
    top = t1 + 1 if variant else t1
    target = f(tau(e))
    problems = []
    end, history = walk(e, pattern)
    if end != target:
        problems.append(f"ends at {end}, expected {target}")
    suffix = _closing_run(pattern, top)
    earlier = pattern[:len(pattern) - len(suffix)]
    if any(label <= top + 1 for label in earlier):
        problems.append(f"early label not above {top + 1}")
    if tau(e) == 0 or (t1 == 1 and not variant):
        allowed = {1}
    else:
        allowed = {1, 2}
    if not suffix or suffix != list(range(top, suffix[-1] - 1, -1)):
        problems.append(f"suffix {suffix} is not a descending run from {top}")
    elif suffix[-1] not in allowed:
        problems.append(f"suffix ends at {suffix[-1]}, allowed {sorted(allowed)}")
    problems.extend(history.violations())
    return problems


def sweep_signgraph(max_len: Optional[int] = None) -> Dict[str, Any]:
    """Component law, edge invariance and both path constructors on every tuple up to max_len"""
    max_len = ORACLE_CONFIG['signgraph_max'] if max_len is None else max_len
    checked, failures = 0, []
    for length in range(0, max_len + 1):
        for e in product((1, -1), repeat=length):
            checked += 1
            if tau(e) != bfs_component(e, cap=max(max_len, length)):
                failures.append({'tuple': e, 'law': 'tau = bfs_component'})
            for label, target in edges(e):
                if tau(target) != tau(e):
                    failures.append({'tuple': e, 'law': f'edge {label} preserves tau'})
            if tau(e) not in (0, 1) or e in (f(0), f(1)):
                continue
            build = path_v0 if tau(e) == 0 else path_v1
            t1 = decompose(e)[1][0]
            variants = [False] + ([True] if len(e) >= t1 + 2 and e[t1 + 1] == e[t1] else [])
            for variant in variants:
                try:
                    problems = _check_path(e, build(e, variant), variant)
                except (InputValidationError, InternalInvariantError) as err:
                    problems = [str(err)]
                if problems:
                    failures.append({'tuple': e, 'variant': variant, 'problems': problems})
    return _report('signgraph', checked, failures)


def sweep_weyl(max_rank: Optional[int] = None, path_rank: int = 3) -> Dict[str, Any]:
    """Springer reachability, c-set conjugation laws, edge symmetry, and c_< transport along graph paths"""
    max_rank = ORACLE_CONFIG['weyl_max'] if max_rank is None else max_rank
    checked, failures = 0, []
    for n in range(1, max_rank + 1):
        invs = involutions(n)
        group = list(elements(n))
        for w in invs:
            checked += 1
            sigma, w_min, labels = springer_path(w)
            if not is_minimal(w_min) or conjugate(sigma, w) != w_min:
                failures.append({'w': str(w), 'law': 'springer path reaches a minimal involution'})
            sets = c_sets(w)
            for s in group:
                w2 = c_sets(conjugate(s, w))
                if (conjugate_set(s, sets.c_plus) != w2.c_plus or conjugate_set(s, sets.c_minus) != w2.c_minus
                        or conjugate_set(s, sets.c_neq) != w2.c_neq):
                    failures.append({'w': str(w), 'sigma': str(s), 'law': 'c-set conjugation'})
            sizes = (len(sets.c_plus), len(sets.c_minus), len(sets.c_neq))
            for label, target in gw_edges(w):
                checked += 1
                if (label, w) not in gw_edges(target):
                    failures.append({'w': str(w), 'label': label, 'law': 'edges are symmetric'})
                target_sets = c_sets(target)
                if (len(target_sets.c_plus), len(target_sets.c_minus), len(target_sets.c_neq)) != sizes:
                    failures.append({'w': str(w), 'label': label, 'law': 'c-set sizes constant along edges'})
        if n > path_rank:
            continue
        for w in invs:
            frontier = [(identity(n), w)]
            for _ in range(3):
                step = []
                for sigma, current in frontier:
                    for label, target in gw_edges(current):
                        path_sigma = multiply(simple_reflection(n, label), sigma)
                        checked += 1
                        if conjugate_set(path_sigma, c_sets(w).c_less) != c_sets(target).c_less:
                            failures.append({'w': str(w), 'sigma': str(path_sigma), 'law': 'c_< transport'})
                        step.append((path_sigma, target))
                frontier = step
    return _report('weyl', checked, failures)


def _raw_conditions_hold(splits, c: Set[Tuple[int, int]], tau_map: Dict[Tuple[int, int], Tuple[int, int]]) -> bool:
    for i, parts in enumerate(splits, 1):
        row = [(i, j) for j in range(1, len(parts) + 1)]
        for x, y in combinations(row, 2):
            x_in, y_in = x in c, y in c
            if x_in == y_in and tau_map[x][0] == tau_map[y][0]:
                return False
            if not x_in and y_in:
                continue
            if x_in and not y_in:
                return False
            if x_in and not tau_map[y] < tau_map[x]:
                return False
            if not x_in and not tau_map[x] < tau_map[y]:
                return False
    return True


def brute_force_shapes(blocks: Sequence[BlockSpec]) -> Set[OrbitDescriptor]:
    """Filter every (split, subset, involution) triple against the raw orbit conditions"""
    if not blocks:
        return {OrbitDescriptor((), (), ())}
    found = set()
    for splits in product(*[compositions(b.size) for b in blocks]):
        indices = [(i, j) for i, parts in enumerate(splits, 1) for j in range(1, len(parts) + 1)]
        size = {(i, j): splits[i - 1][j - 1] for i, j in indices}
        for perm in permutations(indices):
            tau_map = dict(zip(indices, perm))
            if any(tau_map[tau_map[x]] != x or size[tau_map[x]] != size[x] for x in indices):
                continue
            for r in range(len(indices) + 1):
                for chosen in combinations(indices, r):
                    c = set(chosen)
                    if any((tau_map[x] in c) != (x in c) for x in indices):
                        continue
                    if not _raw_conditions_hold(splits, c, tau_map):
                        continue
                    s_cut = tuple(sum(1 for j in range(1, len(parts) + 1) if (i, j) not in c)
                                  for i, parts in enumerate(splits, 1))
                    found.add(OrbitDescriptor(splits, s_cut, tuple(sorted(tau_map.items()))))
    return found


def _size_profiles(max_total: int) -> List[Tuple[int, ...]]:
    """Block size tuples with total size at most max_total"""
    out: List[Tuple[int, ...]] = [()]
    frontier: List[Tuple[int, ...]] = [()]
    while frontier:
        nxt = []
        for sizes in frontier:
            for n in range(1, max_total - sum(sizes) + 1):
                nxt.append(sizes + (n,))
        out.extend(nxt)
        frontier = nxt
    return out


def sweep_orbits(max_factors: Optional[int] = None) -> Dict[str, Any]:
    """enumerate_orbit_shapes against brute force for every size profile with at most max_factors parts"""
    max_factors = ORACLE_CONFIG['orbits_max'] if max_factors is None else max_factors
    checked, failures = 0, []
    for sizes in _size_profiles(max_factors):
        blocks = [BlockSpec(BlockKind.L, seg2(EVEN_LINE, 1, 2 * n - 1)) for n in sizes]
        checked += 1
        listed = list(enumerate_orbit_shapes(blocks))
        expected = brute_force_shapes(blocks)
        if len(listed) != len(set(listed)) or set(listed) != expected:
            failures.append({'sizes': list(sizes), 'engine': len(listed), 'brute_force': len(expected)})
    return _report('orbits', checked, failures)


def _decreasing_tuples(values: Sequence[int], k: int) -> List[Tuple[int, ...]]:
    return [tuple(sorted(c, reverse=True)) for c in combinations(values, k)]


def sweep_nested(max_support: Optional[int] = None) -> Dict[str, Any]:
    """Strictly nested [-a_i, b_i] blocks on one line: a relevant orbit forces k even and a_(2i) = a_(2i-1) - 1"""
    max_support = ORACLE_CONFIG['nested_max'] if max_support is None else max_support
    checked, failures = 0, []
    for line, residue in ((EVEN_LINE, 1), (ODD_LINE, 0)):
        values = [x for x in range(-max_support, max_support + 1) if x % 2 == residue]
        for k in range(1, max_support // 2 + 1):
            for chosen in combinations(sorted(values, reverse=True), 2 * k):
                a2 = chosen[:k]
                b2 = tuple(reversed(chosen[k:]))
                segs = [seg2(line, -a, b) for a, b in zip(a2, b2)]
                if any(s is None for s in segs) or sum(s.length for s in segs) > max_support:
                    continue
                checked += 1
                blocks = [BlockSpec(BlockKind.L, s) for s in reversed(segs)]
                result = exists_relevant(blocks)
                if result.status is SearchStatus.FOUND:
                    paired = k % 2 == 0 and all(a2[2 * i + 1] == a2[2 * i] - 2 for i in range(k // 2))
                    if not paired:
                        failures.append({'line': line.sd_class.value, 'a2': list(a2), 'b2': list(b2)})
    return _report('nested', checked, failures)


def _line_points(line: CuspLine, bound: int) -> List[int]:
    """Doubled points of the line's residue class in [-bound, bound], highest first"""
    residue = 1 if line.sd_class is LineClass.EVEN else 0
    return [x for x in range(2 * bound, -2 * bound - 1, -1) if x % 2 == residue]


def _random_rigid(rng: np.random.Generator, max_support: int) -> Multisegment:
    """Random multisegment with at most max_support points on the Odd (integer) or Even (half-integer) line"""
    line = ODD_LINE if rng.integers(0, 2) == 0 else EVEN_LINE
    residue = 0 if line is ODD_LINE else 1
    segs, total = [], 0
    for _ in range(int(rng.integers(1, 5))):
        length = int(rng.integers(1, 4))
        if total + length > max_support:
            break
        a2 = 2 * int(rng.integers(-3, 4)) + residue
        segs.append(seg2(line, a2, a2 + 2 * (length - 1)))
        total += length
    return Multisegment(tuple(segs))


def _ladder_pieces(points: Sequence[int], max_segments: int) -> Iterator[List[Tuple[int, int]]]:
    """Doubled (a, b) pairs of every ladder on the given points, top segment first"""
    points = sorted(points, reverse=True)
    prefix: List[Tuple[int, int]] = []

    def extend() -> Iterator[List[Tuple[int, int]]]:
        if prefix:
            yield list(prefix)
        if len(prefix) == max_segments:
            return
        top = prefix[-1] if prefix else None
        for b in points:
            if top is not None and b >= top[1]:
                continue
            for a in points:
                if a > b or (top is not None and a >= top[0]):
                    continue
                prefix.append((a, b))
                yield from extend()
                prefix.pop()

    return extend()


def sweep_mw(samples: Optional[int] = None, max_support: int = 8,
             max_segments: Optional[int] = None, bound: Optional[int] = None) -> Dict[str, Any]:
    """MW involutivity and support on random rigid multisegments; ladder prefix rule against the general rule"""
    samples = ORACLE_CONFIG['mw_samples'] if samples is None else samples
    max_segments = ORACLE_CONFIG['ladder_segments'] if max_segments is None else max_segments
    bound = ORACLE_CONFIG['mw_ladder_bound'] if bound is None else bound
    rng = np.random.default_rng(ORACLE_CONFIG['seed'])
    checked, failures = 0, []
    for _ in range(samples):
        m = _random_rigid(rng, max_support)
        checked += 1
        dual = mw_dual(m)
        if mw_dual(dual) != m or support(dual) != support(m):
            failures.append({'multisegment': str(m), 'law': 'mw involution'})
    for line in (ODD_LINE, EVEN_LINE):
        for pieces in _ladder_pieces(_line_points(line, bound), max_segments):
            checked += 1
            if sorted(_mw_ladder(pieces)) != sorted(_mw_rigid(pieces)):
                failures.append({'line': line.sd_class.value, 'pieces': pieces, 'law': 'ladder prefix rule'})
    return _report('mw', checked, failures)


def _is_conj_self_dual_pieces(pieces: Sequence[Tuple[int, int]]) -> bool:
    return sorted(pieces) == sorted((-b, -a) for a, b in pieces)


def sweep_ladder_bc(max_segments: Optional[int] = None, bound: Optional[int] = None) -> Dict[str, Any]:
    """ladder_bc on every conjugate self-dual ladder: no Distinguished without the Sp pairing, labelled definites"""
    max_segments = ORACLE_CONFIG['ladder_segments'] if max_segments is None else max_segments
    bound = ORACLE_CONFIG['bc_ladder_bound'] if bound is None else bound
    checked, failures = 0, []
    for line in (EVEN_LINE, ODD_LINE):
        for pieces in _ladder_pieces(_line_points(line, bound), max_segments):
            if not _is_conj_self_dual_pieces(pieces):
                continue
            m = Multisegment(tuple(seg2(line, a, b) for a, b in pieces))
            checked += 1
            try:
                verdict = ladder_bc(m).verdict
            except UnidistError as err:
                failures.append({'ladder': str(m), 'error': str(err)})
                continue
            t = len(pieces)
            if verdict.outcome is Outcome.DISTINGUISHED and (t % 2 or not sp_dist_ladder(m)):
                failures.append({'ladder': str(m), 'law': 'Distinguished needs t even and the Sp pairing'})
            if verdict.is_definite and not verdict.theorem:
                failures.append({'ladder': str(m), 'law': 'definite verdict carries a theorem label'})
    return _report('ladder_bc', checked, failures)


def _random_generic(rng: np.random.Generator) -> Multisegment:
    """Positive-exponent segments, about half centred at 1/2, with occasional dual pairs on non-self-dual lines"""
    segs = []
    for _ in range(int(rng.integers(1, 5))):
        length = int(rng.integers(1, 4))
        if rng.random() < 0.25:
            x2 = 1 - (length - 1)
            segs.append(seg2(NONSD_A, x2, x2 + 2 * (length - 1)))
            segs.append(seg2(NONSD_A.dual_line(), x2, x2 + 2 * (length - 1)))
            continue
        line = (EVEN_LINE, ODD_LINE, NONSD_A)[int(rng.integers(0, 3))]
        center2 = 1 if rng.random() < 0.5 else int(rng.integers(2, 6))
        segs.append(seg2(line, center2 - (length - 1), center2 + (length - 1)))
    return Multisegment(tuple(segs))


def sweep_standard_module(samples: Optional[int] = None, rule: Optional[str] = None) -> Dict[str, Any]:
    """standard_module_verdict against the involution criterion on nu^(-1/2) pi for random generic pi"""
    samples = ORACLE_CONFIG['standard_samples'] if samples is None else samples
    rng = np.random.default_rng(ORACLE_CONFIG['seed'])
    expected_outcome = {Tri.YES: Outcome.DISTINGUISHED, Tri.NO: Outcome.NOT_DISTINGUISHED,
                        Tri.UNKNOWN: Outcome.INCONCLUSIVE}
    checked, failures = 0, []
    while checked < samples:
        m = _random_generic(rng)
        if not is_generic(m):
            continue
        checked += 1
        twisted = shift_multiseg(m, -HALF)
        verdict = standard_module_verdict(m, rule)
        if verdict.outcome is not expected_outcome[glF_dist_generic(twisted, rule)]:
            failures.append({'multisegment': str(m), 'outcome': verdict.outcome.value})
            continue
        if verdict.outcome is not Outcome.DISTINGUISHED:
            continue
        segs = twisted.segs
        pairs = verdict.certificate['involution']
        covered = sorted(k for i, j in pairs for k in ({i, j}))
        witnessed = all(glF_dist_sqint(segs[i - 1], rule) is Tri.YES if i == j
                        else segs[j - 1] == conj_dual(segs[i - 1]) for i, j in pairs)
        if covered != list(range(1, len(segs) + 1)) or not witnessed or not verdict.notes:
            failures.append({'multisegment': str(m), 'law': 'involution witness'})
    return _report('standard', checked, failures)


def small_data(max_support: int) -> List[AdmissibleDatum]:
    """Single-line admissible data with support at most max_support"""
    out = []
    for line, residue in ((EVEN_LINE, 1), (ODD_LINE, 0)):
        values = [x for x in range(0, 2 * max_support + 1) if x % 2 == residue]
        for k in range(1, max_support + 1):
            if line.sd_class is LineClass.ODD and k % 2:
                continue
            for a2 in _decreasing_tuples(values, k):
                if (sum(a2) + k) // 2 > max_support:
                    continue
                for eps in product((1, -1), repeat=k):
                    if tau(eps) in (0, 1):
                        out.append(AdmissibleDatum((JordanEntry(line, tuple(HalfInt(x) for x in a2), eps),)))
    return out


def sweep_replay(max_support: Optional[int] = None) -> Dict[str, Any]:
    """Every non-distinguished small datum should replay to NoneCertified"""
    max_support = ORACLE_CONFIG['replay_max'] if max_support is None else max_support
    checked, failures = 0, []
    for d in small_data(max_support):
        if ds_vanishing(d).outcome is not Outcome.NOT_DISTINGUISHED:
            continue
        checked += 1
        report = cross_validate_ds(d)
        if not report['consistent']:
            failures.append({'blocks': report['blocks'], 'outcome': report['outcome'],
                             'condition': report['ds_certificate']['condition']})
    return _report('replay', checked, failures)


SUITES: Dict[str, Callable[[Optional[int]], Dict[str, Any]]] = {
    'signgraph': sweep_signgraph,
    'weyl': sweep_weyl,
    'orbits': sweep_orbits,
    'nested': sweep_nested,
    'replay': sweep_replay,
    'mw': sweep_mw,
    'ladder_bc': sweep_ladder_bc,
    'standard': sweep_standard_module,
}


def run_sweep(suite: str, max_n: Optional[int] = None) -> Dict[str, Any]:
    if suite not in SUITES:
        raise InputValidationError(f"unknown suite {suite!r}, expected one of {', '.join(SUITES)}",
                                   clause="oracle sweep: suite")
    return SUITES[suite](max_n)
