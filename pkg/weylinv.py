#!/usr/bin/env python3
"""
Signed Permutation Group
The hyperoctahedral group W_n = S_n x| Xi_n of type C_n acting on R^n, its
involutions, their c-set decomposition, minimal involutions and the Springer
conjugation graph whose edges are w -> s_a w s_a for simple roots a with
w(a) != +-a.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from config import ENGINE_CONFIG
from errors import CapExceededError, InputValidationError, InternalInvariantError, PreconditionError

logger = logging.getLogger(__name__)


def mask_of(indices) -> int:
    """Bitmask of a set of 1-based indices"""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> List[int]:
    """Sorted 1-based indices in a bitmask"""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class SignedPermutation:
    """
    Element (tau, c) of W_n acting by e_i -> -e_tau(i) for i in c, e_i -> e_tau(i) otherwise.

    perm holds the 0-based one-line images of tau; c is a bitmask over 1..n.
    """
    n: int
    perm: Tuple[int, ...]
    c: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputValidationError(f"rank must be positive, got {self.n}", clause="SignedPermutation: n >= 1")
        if sorted(self.perm) != list(range(self.n)):
            raise InputValidationError(f"{list(self.perm)} is not a permutation of 0..{self.n - 1}",
                                       clause="SignedPermutation: tau bijective")
        if self.c >> self.n:
            raise InputValidationError(f"c has indices beyond {self.n}", clause="SignedPermutation: c within 1..n")

    @property
    def permutation(self) -> Permutation:
        return Permutation(list(self.perm))

    def tau_of(self, i: int) -> int:
        """Image of the 1-based index i"""
        return self.perm[i - 1] + 1

    def image_of_set(self, mask: int) -> int:
        return mask_of(self.tau_of(i) for i in indices_of(mask))

    def c_indices(self) -> List[int]:
        return indices_of(self.c)

    def __str__(self) -> str:
        tau = ' '.join(str(p + 1) for p in self.perm)
        return f"[{tau}|{','.join(map(str, self.c_indices()))}]"


@dataclass(frozen=True)
class CSets:
    """Decomposition of {1..n} attached to an element"""
    c_plus: FrozenSet[int]
    c_minus: FrozenSet[int]
    c_neq: FrozenSet[int]
    c_less: FrozenSet[int]


def identity(n: int) -> SignedPermutation:
    return SignedPermutation(n, tuple(range(n)), 0)


def from_one_line(tau: List[int], c=()) -> SignedPermutation:
    """Build from a 1-based one-line permutation and 1-based c indices"""
    return SignedPermutation(len(tau), tuple(t - 1 for t in tau), mask_of(c))


def _check_same_rank(w1: SignedPermutation, w2: SignedPermutation) -> None:
    if w1.n != w2.n:
        raise InputValidationError(f"rank mismatch: {w1.n} vs {w2.n}", clause="multiply: same n")


def multiply(w1: SignedPermutation, w2: SignedPermutation) -> SignedPermutation:
    """(tau1, c1)(tau2, c2) = (tau1 tau2, tau2^-1(c1) xor c2)"""
    _check_same_rank(w1, w2)
    # sympy composes left to right: (p * q)(i) = q(p(i))
    product = w2.permutation * w1.permutation
    pulled_back = inverse(w2).image_of_set(w1.c)
    return SignedPermutation(w1.n, tuple(product.array_form), pulled_back ^ w2.c)


def inverse(w: SignedPermutation) -> SignedPermutation:
    return SignedPermutation(w.n, tuple((~w.permutation).array_form), w.image_of_set(w.c))


def conjugate(sigma: SignedPermutation, w: SignedPermutation) -> SignedPermutation:
    """sigma w sigma^-1"""
    return multiply(multiply(sigma, w), inverse(sigma))


def is_involution(w: SignedPermutation) -> bool:
    return (w.permutation ** 2).is_Identity and w.image_of_set(w.c) == w.c


def c_sets(w: SignedPermutation) -> CSets:
    c = set(w.c_indices())
    fixed = {i for i in range(1, w.n + 1) if w.tau_of(i) == i}
    return CSets(
        c_plus=frozenset(fixed & c),
        c_minus=frozenset(fixed - c),
        c_neq=frozenset(set(range(1, w.n + 1)) - fixed),
        c_less=frozenset(i for i in range(1, w.n + 1) if i < w.tau_of(i)),
    )


def conjugate_set(sigma: SignedPermutation, subset) -> FrozenSet[int]:
    """The subset read off sigma (id, S) sigma^-1, which is again a pure sign change"""
    result = conjugate(sigma, SignedPermutation(sigma.n, tuple(range(sigma.n)), mask_of(subset)))
    if not result.permutation.is_Identity:
        raise InternalInvariantError(f"conjugate of a sign change by {sigma} is not a sign change")
    return frozenset(result.c_indices())


def simple_reflection(n: int, i: int) -> SignedPermutation:
    """s_{a_i}: swap i, i+1 for i < n; negate coordinate n for i = n"""
    if not 1 <= i <= n:
        raise InputValidationError(f"simple root index {i} outside 1..{n}", clause="simple root index")
    if i == n:
        return SignedPermutation(n, tuple(range(n)), mask_of([n]))
    perm = list(range(n))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return SignedPermutation(n, tuple(perm), 0)


def simple_root(n: int, i: int) -> np.ndarray:
    """a_i = e_i - e_{i+1} for i < n, a_n = 2 e_n"""
    root = np.zeros(n, dtype=int)
    if i == n:
        root[n - 1] = 2
    else:
        root[i - 1] = 1
        root[i] = -1
    return root


def act(w: SignedPermutation, v: np.ndarray) -> np.ndarray:
    """(w v)_{tau(i)} = -v_i if i in c, else v_i"""
    signs = np.array([-1 if (w.c >> i) & 1 else 1 for i in range(w.n)], dtype=int)
    result = np.zeros(w.n, dtype=int)
    result[list(w.perm)] = signs * np.asarray(v, dtype=int)
    return result


def elements(n: int) -> Iterator[SignedPermutation]:
    """All 2^n n! elements of W_n"""
    for perm in permutations(range(n)):
        for c in range(1 << n):
            yield SignedPermutation(n, perm, c)


def involutions(n: int) -> List[SignedPermutation]:
    return [w for w in elements(n) if is_involution(w)]


def _adjacent_matchings(k: int) -> List[Tuple[int, ...]]:
    """Sets of pairwise disjoint simple transpositions s_i (i < k), as sorted tuples of i"""
    if k < 2:
        return [()]
    out = [()]
    for i in range(1, k):
        for rest in _adjacent_matchings(i - 1):
            out.append(rest + (i,))
    return sorted(out, key=lambda m: (len(m), m))


def _check_rank(n: int) -> None:
    cap = ENGINE_CONFIG['weyl_max_rank']
    if n > cap:
        raise CapExceededError("Weyl group rank", cap, n)


def minimal_involutions(n: int) -> List[SignedPermutation]:
    """rho c_{k,n}: c = {k+1..n}, rho a product of disjoint simple transpositions of S_k"""
    _check_rank(n)
    out = []
    for k in range(0, n + 1):
        c = mask_of(range(k + 1, n + 1))
        for matching in _adjacent_matchings(k):
            perm = list(range(n))
            for i in matching:
                perm[i - 1], perm[i] = perm[i], perm[i - 1]
            out.append(SignedPermutation(n, tuple(perm), c))
    return out


def is_minimal(w: SignedPermutation) -> bool:
    k = w.n - bin(w.c).count('1')
    if w.c != mask_of(range(k + 1, w.n + 1)):
        return False
    i = 1
    while i <= w.n:
        image = w.tau_of(i)
        if image == i:
            i += 1
        elif i < k and image == i + 1 and w.tau_of(i + 1) == i:
            i += 2
        else:
            return False
    return True


def gw_edges(w: SignedPermutation) -> List[Tuple[int, SignedPermutation]]:
    """Edges w -> s_a w s_a for simple roots a with w(a) not in {a, -a}"""
    if not is_involution(w):
        raise PreconditionError(f"{w} is not an involution", clause="gw_edges: involution input")
    out = []
    for i in range(1, w.n + 1):
        root = simple_root(w.n, i)
        image = act(w, root)
        if np.array_equal(image, root) or np.array_equal(image, -root):
            continue
        s = simple_reflection(w.n, i)
        out.append((i, multiply(multiply(s, w), s)))
    return out


def springer_path(w: SignedPermutation) -> Tuple[SignedPermutation, SignedPermutation, List[int]]:
    """
    Shortest, label-lexicographically least path from w to a minimal involution.

    Returns:
        (sigma, w_min, labels) with sigma = s_{a_k} ... s_{a_1} and sigma w sigma^-1 = w_min
    """
    _check_rank(w.n)
    if not is_involution(w):
        raise PreconditionError(f"{w} is not an involution", clause="springer_path: involution input")
    if is_minimal(w):
        return identity(w.n), w, []

    parents: Dict[SignedPermutation, Optional[Tuple[SignedPermutation, int]]] = {w: None}
    queue = deque([w])
    while queue:
        current = queue.popleft()
        for label, target in gw_edges(current):
            if target in parents:
                continue
            parents[target] = (current, label)
            if is_minimal(target):
                labels = []
                node = target
                while parents[node] is not None:
                    node, step = parents[node]
                    labels.append(step)
                labels.reverse()
                sigma = identity(w.n)
                for step in labels:
                    sigma = multiply(simple_reflection(w.n, step), sigma)
                logger.debug(f"Springer path {w} -> {target} via {labels}")
                return sigma, target, labels
            queue.append(target)
    raise InternalInvariantError(f"no minimal involution reachable from {w}")


def involution_graph(n: int) -> Dict[SignedPermutation, List[Tuple[int, SignedPermutation]]]:
    _check_rank(n)
    return {w: gw_edges(w) for w in involutions(n)}


def to_dot(n: int) -> str:
    """DOT rendering of the involution graph, minimal involutions boxed"""
    graph = involution_graph(n)
    lines = ['digraph G {']
    for w in graph:
        shape = ' [shape=box]' if is_minimal(w) else ''
        lines.append(f'"{w}"{shape};')
    for w, out in graph.items():
        for label, target in out:
            lines.append(f'"{w}" -> "{target}" [label="a{label}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'
