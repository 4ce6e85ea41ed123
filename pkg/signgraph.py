#!/usr/bin/env python3
"""
Graph of Signs
Directed labelled graph on ordered sign tuples: an edge labelled i deletes the
equal entries i and i+1. Provides the component invariant tau, an exhaustive
BFS oracle for it, path walking with coordinate histories, and the two
constrained path constructors into f_0 and f_1.
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Set, Tuple

from config import ENGINE_CONFIG
from errors import CapExceededError, InternalInvariantError, InputValidationError, InvalidLabelError, PreconditionError

logger = logging.getLogger(__name__)

SignTuple = Tuple[int, ...]
Pattern = Tuple[int, ...]

_SIGN_CHARS = {'+': 1, '-': -1, '−': -1}


def parse_signs(text: str) -> SignTuple:
    """Parse a string over {+,-} into a sign tuple (empty string is f_0)"""
    signs = []
    for pos, ch in enumerate(text.strip(), 1):
        if ch not in _SIGN_CHARS:
            raise InputValidationError(f"sign tuple: character {ch!r} at position {pos} is not + or -",
                                       clause="sign tuple alphabet")
        signs.append(_SIGN_CHARS[ch])
    return tuple(signs)


def format_signs(e: SignTuple) -> str:
    return ''.join('+' if s > 0 else '-' for s in e)


def check_signs(e) -> SignTuple:
    """Coerce to a tuple and validate every entry is +1 or -1"""
    e = tuple(e)
    for pos, s in enumerate(e, 1):
        if s not in (1, -1):
            raise InputValidationError(f"sign tuple: entry {pos} is {s!r}, expected +1 or -1",
                                       clause="sign tuple entries")
    return e


def f(t: int) -> SignTuple:
    """Alternating tuple of length t starting with +"""
    return tuple(1 if i % 2 == 0 else -1 for i in range(t))


@dataclass(frozen=True)
class History:
    """Coordinate history of a walk: pairs of original indices deleted at each step"""
    pairs: Tuple[Tuple[int, int], ...]

    def deleted(self) -> Set[int]:
        return {i for pair in self.pairs for i in pair}

    def violations(self) -> List[str]:
        """Return the history properties that fail (empty when valid)"""
        problems = []
        seen: Set[int] = set()
        for step, (x, y) in enumerate(self.pairs, 1):
            if not x < y:
                problems.append(f"step {step}: x={x} is not below y={y}")
            if x in seen or y in seen:
                problems.append(f"step {step}: index reused")
            missing = [z for z in range(x + 1, y) if z not in seen]
            if missing:
                problems.append(f"step {step}: indices {missing} between {x} and {y} not deleted earlier")
            seen.update((x, y))
        for (xi, yi), (xj, yj) in product(self.pairs, repeat=2):
            if xi < xj < yi < yj:
                problems.append(f"pairs ({xi},{yi}) and ({xj},{yj}) cross")
        return problems

    def is_valid(self) -> bool:
        return not self.violations()


def edges(e: SignTuple) -> List[Tuple[int, SignTuple]]:
    """All deletion edges out of e, sorted by label"""
    return [
        (i, e[:i - 1] + e[i + 1:])
        for i in range(1, len(e))
        if e[i - 1] == e[i]
    ]


def decompose(e: SignTuple) -> Optional[Tuple[int, List[int]]]:
    """
    Write e = sign * f_{t_1,...,t_m}.

    Returns:
        (sign, [t_1, ..., t_m]) or None for the empty tuple
    """
    if not e:
        return None
    blocks = [1]
    for i in range(1, len(e)):
        if e[i] == e[i - 1]:
            blocks.append(1)
        else:
            blocks[-1] += 1
    return e[0], blocks


def tau(e: SignTuple) -> int:
    """Component index: e_1 * (t_1 - t_2 + t_3 - ...), zero on the empty tuple"""
    parts = decompose(e)
    if parts is None:
        return 0
    sign, blocks = parts
    return sign * sum(t if i % 2 == 0 else -t for i, t in enumerate(blocks))


def _sink_value(e: SignTuple) -> int:
    parts = decompose(e)
    if parts is None:
        return 0
    sign, blocks = parts
    if len(blocks) != 1:
        raise InternalInvariantError(f"{format_signs(e)} has edges but was treated as a sink")
    return sign * blocks[0]


def reachable_subgraph(e: SignTuple, cap: Optional[int] = None) -> Dict[SignTuple, List[Tuple[int, SignTuple]]]:
    """Adjacency of every vertex reachable from e, in BFS order"""
    cap = ENGINE_CONFIG['sign_bfs_cap'] if cap is None else cap
    if len(e) > cap:
        raise CapExceededError("sign tuple length", cap, len(e))
    adjacency: Dict[SignTuple, List[Tuple[int, SignTuple]]] = {}
    queue = deque([e])
    while queue:
        current = queue.popleft()
        if current in adjacency:
            continue
        adjacency[current] = edges(current)
        for _, target in adjacency[current]:
            if target not in adjacency:
                queue.append(target)
    logger.debug(f"BFS from {format_signs(e)!r} visited {len(adjacency)} vertices")
    return adjacency


def bfs_component(e: SignTuple, cap: Optional[int] = None) -> int:
    """Component index found by exhaustive search for the sink +-f_t"""
    adjacency = reachable_subgraph(e, cap)
    values = {_sink_value(v) for v, out in adjacency.items() if not out}
    if len(values) != 1:
        raise InternalInvariantError(f"{format_signs(e)!r} reaches distinct sinks {sorted(values)}")
    return values.pop()


def walk(e: SignTuple, pattern: Pattern) -> Tuple[SignTuple, History]:
    """Follow a pattern from e, returning the endpoint and the coordinate history"""
    current = list(e)
    remaining = list(range(1, len(e) + 1))
    pairs = []
    for step, label in enumerate(pattern, 1):
        if not 1 <= label < len(current) or current[label - 1] != current[label]:
            raise InvalidLabelError(
                f"step {step}: no edge labelled {label} from {format_signs(tuple(current))!r}", step=step)
        pairs.append((remaining[label - 1], remaining[label]))
        del current[label - 1:label + 1]
        del remaining[label - 1:label + 1]
    return tuple(current), History(tuple(pairs))


def sink_path(e: SignTuple) -> Tuple[Pattern, SignTuple]:
    """Reduce e to the sink of its component, always taking the leftmost edge"""
    current = tuple(e)
    labels = []
    while True:
        out = edges(current)
        if not out:
            return tuple(labels), current
        label, current = out[0]
        labels.append(label)


def _first_block(e: SignTuple) -> int:
    return decompose(e)[1][0]


def _variant_available(e: SignTuple) -> bool:
    t1 = _first_block(e)
    return len(e) >= t1 + 2 and e[t1 + 1] == e[t1]


def _mirror_path(e: SignTuple, offset: int, top: int, targets: Dict[int, SignTuple]) -> Pattern:
    """
    Reduce the tail e[offset:] and close with the descending suffix (top, ..., x).

    The tail must reduce to targets[x] for some x; earlier labels are shifted by
    offset so they never touch the first offset entries.
    """
    tail_pattern, tail_sink = sink_path(e[offset:])
    for x, target in sorted(targets.items()):
        if tail_sink == target:
            return tuple(label + offset for label in tail_pattern) + tuple(range(top, x - 1, -1))
    raise InternalInvariantError(
        f"tail of {format_signs(e)!r} reduces to {format_signs(tail_sink)!r}, not a mirror of the first block")


def path_v0(e: SignTuple, variant: bool = False) -> Pattern:
    """
    Path from e to f_0 ending in (t_1, ..., 2, 1) with earlier labels > t_1 + 1.

    With variant=True (requires e_{t_1+2} = e_{t_1+1}) the path ends in
    (t_1 + 1, ..., 1) with earlier labels > t_1 + 2.
    """
    e = check_signs(e)
    if not e:
        raise PreconditionError("path_v0 requires a nonempty tuple", clause="path_v0: e nonempty")
    if tau(e) != 0:
        raise PreconditionError(f"path_v0 requires tau = 0, {format_signs(e)!r} has tau {tau(e)}",
                                clause="path_v0: tau(e) = 0")
    t1 = _first_block(e)
    head = e[:t1]
    if variant:
        if not _variant_available(e):
            raise PreconditionError(f"variant path needs e_(t1+2) = e_(t1+1) in {format_signs(e)!r}",
                                    clause="path_v0: variant condition")
        return _mirror_path(e, t1 + 2, t1 + 1, {1: head[::-1]})
    return _mirror_path(e, t1 + 1, t1, {1: head[:-1][::-1]})


def path_v1(e: SignTuple, variant: bool = False) -> Pattern:
    """
    Path from e to f_1 ending in (t_1, ..., x), x in {1, 2}, earlier labels > t_1 + 1.

    x = 1 whenever t_1 = 1. With variant=True the suffix starts at t_1 + 1 and
    earlier labels exceed t_1 + 2.
    """
    e = check_signs(e)
    if tau(e) != 1:
        raise PreconditionError(f"path_v1 requires tau = 1, {format_signs(e)!r} has tau {tau(e)}",
                                clause="path_v1: tau(e) = 1")
    if e == f(1):
        raise PreconditionError("path_v1 requires e != f_1", clause="path_v1: e != f_1")
    t1 = _first_block(e)
    head = e[:t1]
    if variant:
        if not _variant_available(e):
            raise PreconditionError(f"variant path needs e_(t1+2) = e_(t1+1) in {format_signs(e)!r}",
                                    clause="path_v1: variant condition")
        return _mirror_path(e, t1 + 2, t1 + 1, {1: head[::-1] + (1,), 2: head[1:][::-1]})
    targets = {1: head[:-1][::-1] + (1,)}
    if t1 >= 2:
        targets[2] = head[1:-1][::-1]
    return _mirror_path(e, t1 + 1, t1, targets)


def component_census(length: int) -> Dict[int, int]:
    """Number of tuples of the given length in each component"""
    return dict(sorted(Counter(tau(e) for e in product((1, -1), repeat=length)).items()))


def to_dot(e: SignTuple, cap: Optional[int] = None) -> str:
    """DOT rendering of the subgraph reachable from e"""
    adjacency = reachable_subgraph(e, cap)
    lines = ['digraph G {']
    for vertex in adjacency:
        lines.append(f'"{format_signs(vertex)}";')
    for vertex, out in adjacency.items():
        for label, target in out:
            lines.append(f'"{format_signs(vertex)}" -> "{format_signs(target)}" [label="{label}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'
