#!/usr/bin/env python3
"""
Geometric Lemma Engine
Orbit shapes of the geometric lemma for representations induced from the
Siegel Levi: admissible involutions, stabilizer and modulus descriptors, the
enumeration of (split, cut, involution) orbit shapes, and the relevance test
with a three-valued depth-first search over shapes and Jacquet factorization
terms that abandons a branch at its first failing condition.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from config import ENGINE_CONFIG
from errors import CapExceededError, InputValidationError, PreconditionError
from jacquet import Composition, compositions, split_L, split_ladder_composition, split_Z
from segcalc import (HalfInt, Multisegment, Segment, Tri, conj_dual_multiseg, glF_dist_generic, glF_dist_sqint,
                     is_conj_self_dual, is_generic, is_ladder, seg2, shift_multiseg, sp_dist_ladder, support,
                     zelevinsky_to_langlands)
from weylinv import SignedPermutation, c_sets, elements, is_involution

logger = logging.getLogger(__name__)

Index = Tuple[int, int]


class BlockKind(Enum):
    """Type of an irreducible block of the inducing data"""
    L = "L"            # L(Delta), essentially square-integrable
    Z = "Z"            # Z(Delta)
    LADDER = "ladder"  # ladder representation L(Delta_1, ..., Delta_k)


@dataclass(frozen=True)
class BlockSpec:
    kind: BlockKind
    payload: Union[Segment, Multisegment]

    def __post_init__(self):
        if self.kind is BlockKind.LADDER:
            if not isinstance(self.payload, Multisegment) or not self.payload.segs:
                raise InputValidationError("ladder block needs a nonempty multisegment", clause="BlockSpec: ladder payload")
            if not is_ladder(self.payload):
                raise InputValidationError(f"{self.payload} is not a ladder", clause="BlockSpec: ladder payload")
        elif not isinstance(self.payload, Segment):
            raise InputValidationError(f"{self.kind.value} block needs a segment", clause="BlockSpec: segment payload")

    @property
    def size(self) -> int:
        if isinstance(self.payload, Segment):
            return self.payload.length
        return self.payload.size

    def __str__(self) -> str:
        return f"{self.kind.value}{self.payload}"


@dataclass(frozen=True)
class OrbitDescriptor:
    """Orbit shape: per-block compositions, cut points s_i and an involution of the flattened index set"""
    splits: Tuple[Composition, ...]
    s_cut: Tuple[int, ...]
    tau: Tuple[Tuple[Index, Index], ...]

    def indices(self) -> List[Index]:
        return [(i, j) for i, parts in enumerate(self.splits, 1) for j in range(1, len(parts) + 1)]

    @property
    def c(self) -> FrozenSet[Index]:
        """c = {(i, j) : s_i < j}"""
        return frozenset((i, j) for i, j in self.indices() if j > self.s_cut[i - 1])

    def image(self, index: Index) -> Index:
        return dict(self.tau)[index]

    def part_size(self, index: Index) -> int:
        i, j = index
        return self.splits[i - 1][j - 1]

    @property
    def total_parts(self) -> int:
        return sum(len(parts) for parts in self.splits)


@dataclass
class ConditionEntry:
    index: Index
    condition: str
    verdict: Tri
    witness: str = ""


@dataclass
class RelevanceCertificate:
    orbit: OrbitDescriptor
    factor_assignment: Tuple[Tuple[Multisegment, ...], ...]
    condition_log: List[ConditionEntry] = field(default_factory=list)


class SearchStatus(Enum):
    FOUND = "Found"
    NONE_CERTIFIED = "NoneCertified"
    UNKNOWN = "Unknown"


@dataclass
class SearchResult:
    status: SearchStatus
    certificate: Optional[RelevanceCertificate] = None
    unknown_branches: List[RelevanceCertificate] = field(default_factory=list)
    nodes_visited: int = 0
    branches_checked: int = 0


@dataclass(frozen=True)
class StabilizerFactor:
    group: str             # GL or Sp
    field: str             # F or E
    size: int
    blocks: Tuple[int, ...]


@dataclass(frozen=True)
class ModulusFactor:
    field: str
    size: int
    exponent: int
    blocks: Tuple[int, ...]


def _check_sizes(w: SignedPermutation, sizes: Sequence[int]) -> None:
    if len(sizes) != w.n:
        raise InputValidationError(f"{len(sizes)} sizes for rank {w.n}", clause="sizes match rank")
    if any(n < 1 for n in sizes):
        raise InputValidationError(f"sizes {list(sizes)} must be positive", clause="sizes positive")


def is_admissible(w: SignedPermutation, sizes: Sequence[int]) -> bool:
    """Involution preserving block sizes with even blocks on c_+"""
    _check_sizes(w, sizes)
    if not is_involution(w):
        return False
    if any(sizes[w.tau_of(i) - 1] != sizes[i - 1] for i in range(1, w.n + 1)):
        return False
    return all(sizes[i - 1] % 2 == 0 for i in c_sets(w).c_plus)


def admissible_involutions(sizes: Sequence[int]) -> List[SignedPermutation]:
    k = len(sizes)
    if k == 0:
        return []
    if k > ENGINE_CONFIG['max_blocks']:
        raise CapExceededError("number of blocks", ENGINE_CONFIG['max_blocks'], k)
    return [w for w in elements(k) if is_admissible(w, sizes)]


def _require_admissible(w: SignedPermutation, sizes: Sequence[int]) -> None:
    if not is_admissible(w, sizes):
        raise PreconditionError(f"{w} is not admissible for sizes {list(sizes)}", clause="admissible involution")


def stabilizer_descriptor(w: SignedPermutation, sizes: Sequence[int]) -> List[StabilizerFactor]:
    """GL_n(F) on c_-, GL_n(E) per pair in c_<, Sp_n(E) on c_+"""
    _require_admissible(w, sizes)
    sets = c_sets(w)
    out = []
    for i in range(1, w.n + 1):
        if i in sets.c_minus:
            out.append(StabilizerFactor('GL', 'F', sizes[i - 1], (i,)))
        elif i in sets.c_plus:
            out.append(StabilizerFactor('Sp', 'E', sizes[i - 1], (i,)))
        elif i in sets.c_less:
            out.append(StabilizerFactor('GL', 'E', sizes[i - 1], (i, w.tau_of(i))))
    return out


def modulus_exponents(w: SignedPermutation, sizes: Sequence[int]) -> List[ModulusFactor]:
    """|det|_F on c_- blocks, |det|_E once per c_< pair, nothing on c_+ blocks"""
    return [
        ModulusFactor(factor.field, factor.size, 0 if factor.group == 'Sp' else 1, factor.blocks)
        for factor in stabilizer_descriptor(w, sizes)
    ]


def _check_caps(blocks: Sequence[BlockSpec]) -> None:
    total = sum(b.size for b in blocks)
    if total > ENGINE_CONFIG['max_support']:
        raise CapExceededError("total support", ENGINE_CONFIG['max_support'], total)
    if len(blocks) > ENGINE_CONFIG['max_blocks']:
        raise CapExceededError("number of blocks", ENGINE_CONFIG['max_blocks'], len(blocks))


def _size_compatible_involutions(indices: List[Index], in_c: Dict[Index, bool],
                                 sizes: Dict[Index, int]) -> Iterator[Dict[Index, Index]]:
    """Involutions preserving c and part sizes; fixed point first, then partners in order"""
    def build(remaining: List[Index], partial: Dict[Index, Index]) -> Iterator[Dict[Index, Index]]:
        if not remaining:
            yield dict(partial)
            return
        first, rest = remaining[0], remaining[1:]
        partial[first] = first
        yield from build(rest, partial)
        del partial[first]
        for pos, other in enumerate(rest):
            if in_c[other] != in_c[first] or sizes[other] != sizes[first]:
                continue
            partial[first], partial[other] = other, first
            yield from build(rest[:pos] + rest[pos + 1:], partial)
            del partial[first], partial[other]

    return build(indices, {})


def satisfies_orbit_conditions(splits: Tuple[Composition, ...], s_cut: Tuple[int, ...],
                               tau: Dict[Index, Index]) -> bool:
    """Row-injectivity on c and on its complement, and the row monotonicity around s_i"""
    for i, parts in enumerate(splits, 1):
        s = s_cut[i - 1]
        rows_out = [tau[(i, j)][0] for j in range(1, s + 1)]
        rows_in = [tau[(i, j)][0] for j in range(s + 1, len(parts) + 1)]
        if any(rows_out[k] >= rows_out[k + 1] for k in range(len(rows_out) - 1)):
            return False
        if any(rows_in[k] <= rows_in[k + 1] for k in range(len(rows_in) - 1)):
            return False
    return True


def _all_splits(blocks: Sequence[BlockSpec]) -> List[Tuple[Composition, ...]]:
    per_block = [compositions(b.size) for b in blocks]
    return sorted(product(*per_block), key=lambda sp: (sum(len(c) for c in sp), sp))


def enumerate_orbit_shapes(blocks: Sequence[BlockSpec]) -> Iterator[OrbitDescriptor]:
    """Every orbit shape, by increasing number of parts, then split, cut and involution order"""
    _check_caps(blocks)
    if not blocks:
        yield OrbitDescriptor((), (), ())
        return
    for splits in _all_splits(blocks):
        indices = [(i, j) for i, parts in enumerate(splits, 1) for j in range(1, len(parts) + 1)]
        sizes = {(i, j): splits[i - 1][j - 1] for i, j in indices}
        for s_cut in product(*[range(len(parts) + 1) for parts in splits]):
            in_c = {(i, j): j > s_cut[i - 1] for i, j in indices}
            for tau in _size_compatible_involutions(indices, in_c, sizes):
                if satisfies_orbit_conditions(splits, s_cut, tau):
                    yield OrbitDescriptor(splits, tuple(s_cut), tuple(sorted(tau.items())))


def factorization_terms(block: BlockSpec, parts: Composition) -> List[Tuple[Multisegment, ...]]:
    """All Jacquet factorization terms of a block for one composition, in Langlands notation"""
    if block.kind is BlockKind.L:
        return [tuple(Multisegment.of(p) for p in split_L(block.payload, parts))]
    if block.kind is BlockKind.Z:
        return [tuple(zelevinsky_to_langlands(p) for p in split_Z(block.payload, parts))]
    return split_ladder_composition(block.payload, parts)


def glF_half(factor: Multisegment, rule: Optional[str] = None) -> Tri:
    """GL(F)-distinction of nu^(-1/2) L(factor)"""
    twisted = shift_multiseg(factor, HalfInt(-1))
    if len(twisted) == 1:
        return glF_dist_sqint(twisted.segs[0], rule)
    if not is_conj_self_dual(twisted):
        return Tri.NO
    if is_generic(twisted):
        return glF_dist_generic(twisted, rule)
    return Tri.UNKNOWN


def sp_dist(factor: Multisegment) -> Tri:
    """Sp(E)-distinction of L(factor); essentially square-integrable factors never are"""
    if len(factor) == 1:
        return Tri.NO
    if is_ladder(factor):
        return Tri.of(sp_dist_ladder(factor))
    return Tri.UNKNOWN


def check_relevant(blocks: Sequence[BlockSpec], orbit: OrbitDescriptor,
                   factors: Sequence[Sequence[Multisegment]],
                   rule: Optional[str] = None) -> Tuple[Tri, List[ConditionEntry]]:
    """Kleene AND of the fixed-point and pairing conditions over the index set"""
    if len(factors) != len(blocks) or len(orbit.splits) != len(blocks):
        raise PreconditionError("factor assignment does not match the blocks", clause="check_relevant: block count")
    flat: Dict[Index, Multisegment] = {}
    for i, (parts, row) in enumerate(zip(orbit.splits, factors), 1):
        if len(row) != len(parts):
            raise PreconditionError(f"block {i}: {len(row)} factors for {len(parts)} parts",
                                    clause="check_relevant: factors match splits")
        for j, (part, factor) in enumerate(zip(parts, row), 1):
            if factor.size != part:
                raise PreconditionError(f"factor {(i, j)} has size {factor.size}, expected {part}",
                                        clause="check_relevant: factor sizes")
            flat[(i, j)] = factor

    c = orbit.c
    log = []
    for index, target in orbit.tau:
        factor = flat[index]
        if target == index:
            if index in c:
                log.append(ConditionEntry(index, "Sp(E)-distinguished", sp_dist(factor), str(factor)))
            else:
                log.append(ConditionEntry(index, "nu^(-1/2) GL(F)-distinguished", glF_half(factor, rule), str(factor)))
        elif index < target:
            if index in c:
                expected = shift_multiseg(factor, HalfInt(-2))
                condition = f"factor {target} = nu^-1 factor {index}"
            else:
                expected = shift_multiseg(conj_dual_multiseg(factor), HalfInt(2))
                condition = f"factor {target} = nu conj_dual(factor {index})"
            log.append(ConditionEntry(index, condition, Tri.of(flat[target] == expected),
                                      f"{flat[target]} vs {expected}"))
    return Tri.all_of(entry.verdict for entry in log), log


@dataclass
class _OpenPart:
    """A placed part still waiting for its involution partner"""
    index: Index
    in_c: bool
    size: int
    expected: Multisegment


class _Found(Exception):
    pass


def _fits(demand: Counter, available: Counter) -> bool:
    return all(available[key] >= count for key, count in demand.items())


class _RelevanceSearch:
    """
    Depth-first construction of (split, cut, involution, factor) branches.

    Parts are placed block by block, out parts before the parts in c. Each
    part is either a fixed point, the partner of an earlier open part, or left
    open. A branch is dropped as soon as a fixed-point or pairing condition is
    a definite No, a row condition fails, or the open parts demand more
    support than the unplaced parts still carry.
    """

    def __init__(self, blocks: List[BlockSpec], rule: Optional[str], keep_unknown: int):
        self.blocks = blocks
        self.rule = rule
        self.keep_unknown = keep_unknown
        self.result = SearchResult(SearchStatus.NONE_CERTIFIED)
        self.splits: List[List[int]] = []
        self.factors: List[List[Multisegment]] = []
        self.in_c: Dict[Index, bool] = {}
        self.tau: Dict[Index, Index] = {}
        self.open: List[_OpenPart] = []
        self.demand: Counter = Counter()
        self._fixed: Dict[Tuple[Multisegment, bool], Tri] = {}
        self._options: Dict[Tuple[int, object], list] = {}
        self._supports: Dict[Tuple[int, object], Counter] = {}
        self.tails = [Counter() for _ in range(len(blocks) + 1)]
        for i in range(len(blocks) - 1, -1, -1):
            payload = blocks[i].payload
            block_support = support(payload if isinstance(payload, Multisegment) else Multisegment.of(payload))
            self.tails[i] = self.tails[i + 1] + block_support

    def run(self) -> SearchResult:
        try:
            self._block(0)
        except _Found:
            pass
        return self.result

    def _initial_states(self, i: int) -> list:
        block = self.blocks[i]
        if block.kind is BlockKind.LADDER:
            return [tuple(zip(parts, term)) for parts in compositions(block.size)
                    for term in split_ladder_composition(block.payload, parts)]
        return [block.payload]

    def _next_parts(self, i: int, state) -> list:
        """(size, factor, remaining state) for every choice of the next part of block i"""
        key = (i, state)
        if key in self._options:
            return self._options[key]
        block = self.blocks[i]
        options = []
        if block.kind is BlockKind.LADDER:
            if state:
                options.append((state[0][0], state[0][1], state[1:]))
        elif state is not None:
            line, a2, b2 = state.line, state.a2, state.b2
            for n in range(1, state.length + 1):
                if block.kind is BlockKind.L:
                    factor = Multisegment.of(seg2(line, b2 - 2 * (n - 1), b2))
                    rest = seg2(line, a2, b2 - 2 * n)
                else:
                    factor = zelevinsky_to_langlands(seg2(line, a2, a2 + 2 * (n - 1)))
                    rest = seg2(line, a2 + 2 * n, b2)
                options.append((n, factor, rest))
        self._options[key] = options
        return options

    def _state_support(self, i: int, state) -> Counter:
        key = (i, state)
        if key not in self._supports:
            if self.blocks[i].kind is BlockKind.LADDER:
                total = Counter()
                for _, factor in state:
                    total += support(factor)
            else:
                total = support(Multisegment.of(state)) if state is not None else Counter()
            self._supports[key] = total
        return self._supports[key]

    def _fixed_verdict(self, factor: Multisegment, inside: bool) -> Tri:
        key = (factor, inside)
        if key not in self._fixed:
            self._fixed[key] = sp_dist(factor) if inside else glF_half(factor, self.rule)
        return self._fixed[key]

    def _rows_ok(self, index: Index) -> bool:
        """Row monotonicity against the already-matched neighbours on the same side"""
        i, j = index
        side = self.in_c[index]
        row = self.tau[index][0]
        for other, before in (((i, j - 1), True), ((i, j + 1), False)):
            if other not in self.tau or self.in_c.get(other) != side:
                continue
            first, second = (self.tau[other][0], row) if before else (row, self.tau[other][0])
            if side and first <= second:
                return False
            if not side and first >= second:
                return False
        return True

    def _block(self, i: int) -> None:
        if i == len(self.blocks):
            if not self.open:
                self._leaf()
            return
        self.splits.append([])
        self.factors.append([])
        for state in self._initial_states(i):
            self._part(i, state, False)
        self.splits.pop()
        self.factors.pop()

    def _part(self, i: int, state, inside: bool) -> None:
        options = self._next_parts(i, state)
        if not options:
            self._block(i + 1)
            return
        index = (i + 1, len(self.splits[i]) + 1)
        for size, factor, rest in options:
            available = self._state_support(i, rest) + self.tails[i + 1]
            self.splits[i].append(size)
            self.factors[i].append(factor)
            for side in ((True,) if inside else (False, True)):
                self.in_c[index] = side
                self._assign(i, index, size, factor, side, rest, available)
                del self.in_c[index]
            self.splits[i].pop()
            self.factors[i].pop()

    def _assign(self, i: int, index: Index, size: int, factor: Multisegment, side: bool,
                rest, available: Counter) -> None:
        self.result.nodes_visited += 1

        if self._fixed_verdict(factor, side) is not Tri.NO and _fits(self.demand, available):
            self.tau[index] = index
            if self._rows_ok(index):
                self._part(i, rest, side)
            del self.tau[index]

        for pos, part in enumerate(list(self.open)):
            if part.in_c != side or part.size != size or part.expected != factor:
                continue
            need = support(part.expected)
            del self.open[pos]
            self.demand -= need
            self.tau[index], self.tau[part.index] = part.index, index
            if self._rows_ok(index) and self._rows_ok(part.index) and _fits(self.demand, available):
                self._part(i, rest, side)
            del self.tau[index], self.tau[part.index]
            self.demand += need
            self.open.insert(pos, part)

        if side:
            expected = shift_multiseg(factor, HalfInt(-2))
        else:
            expected = shift_multiseg(conj_dual_multiseg(factor), HalfInt(2))
        need = support(expected)
        if _fits(self.demand + need, available):
            self.open.append(_OpenPart(index, side, size, expected))
            self.demand += need
            self._part(i, rest, side)
            self.demand -= need
            self.open.pop()

    def _leaf(self) -> None:
        splits = tuple(tuple(parts) for parts in self.splits)
        s_cut = tuple(sum(1 for j in range(1, len(parts) + 1) if not self.in_c[(i, j)])
                      for i, parts in enumerate(splits, 1))
        if not satisfies_orbit_conditions(splits, s_cut, self.tau):
            return
        self.result.branches_checked += 1
        orbit = OrbitDescriptor(splits, s_cut, tuple(sorted(self.tau.items())))
        factors = tuple(tuple(row) for row in self.factors)
        verdict, log = check_relevant(self.blocks, orbit, factors, self.rule)
        if verdict is Tri.YES:
            self.result.status = SearchStatus.FOUND
            self.result.certificate = RelevanceCertificate(orbit, factors, log)
            raise _Found()
        if verdict is Tri.UNKNOWN:
            self.result.status = SearchStatus.UNKNOWN
            if len(self.result.unknown_branches) < self.keep_unknown:
                self.result.unknown_branches.append(RelevanceCertificate(orbit, factors, log))


def exists_relevant(blocks: Sequence[BlockSpec], rule: Optional[str] = None,
                    keep_unknown: int = 10) -> SearchResult:
    """
    Search the orbit shapes and factorization terms for a relevant orbit.

    Found on the first Yes; NoneCertified only when every branch is No;
    Unknown otherwise. Branches with a definite No condition are cut while
    the involution is still partial.
    """
    blocks = list(blocks)
    _check_caps(blocks)
    result = _RelevanceSearch(blocks, rule, keep_unknown).run()
    if result.status is SearchStatus.FOUND:
        logger.info(f"Relevant orbit found after {result.nodes_visited} nodes")
    else:
        logger.info(f"No relevant orbit certified: {result.status.value} "
                    f"({result.nodes_visited} nodes, {result.branches_checked} branches)")
    return result
