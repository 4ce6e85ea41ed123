"""
Unit tests for orbits - admissible involutions, orbit shapes and the relevance search
"""
from collections import Counter
from itertools import product

import pytest

import config
from errors import CapExceededError, InputValidationError, PreconditionError
from orbits import (BlockKind, BlockSpec, ModulusFactor, OrbitDescriptor, SearchStatus, StabilizerFactor,
                    admissible_involutions, check_relevant, enumerate_orbit_shapes, exists_relevant,
                    factorization_terms, glF_half, is_admissible, modulus_exponents, sp_dist,
                    stabilizer_descriptor)
from segcalc import Multisegment, Tri, seg
from weylinv import from_one_line, identity, involutions, springer_path


def L(line, a, b):
    return BlockSpec(BlockKind.L, seg(line, a, b))


@pytest.mark.unit
class TestBlocks:
    """Test block validation"""

    def test_sizes(self, odd_line, even_ladder):
        """Test block sizes count support points"""
        assert L(odd_line, 0, 2).size == 3
        assert BlockSpec(BlockKind.LADDER, even_ladder).size == 4

    def test_ladder_payload(self, odd_line):
        """Test ladder blocks reject non-ladders"""
        with pytest.raises(InputValidationError):
            BlockSpec(BlockKind.LADDER, Multisegment.of(seg(odd_line, 0, 1), seg(odd_line, 0, 1)))

    def test_segment_payload(self, even_ladder):
        """Test L blocks need a single segment"""
        with pytest.raises(InputValidationError):
            BlockSpec(BlockKind.L, even_ladder)


@pytest.mark.unit
class TestAdmissibility:
    """Test admissible involutions and their stabilizers"""

    def test_counts(self):
        """Test admissible involutions for small size profiles"""
        assert len(admissible_involutions((1,))) == 1
        assert len(admissible_involutions((2, 1))) == 2
        assert len(admissible_involutions((2, 2))) == 6
        assert admissible_involutions(()) == []

    def test_odd_block_on_c_plus(self):
        """Test c_+ blocks must have even size"""
        assert is_admissible(from_one_line([1], [1]), (2,))
        assert not is_admissible(from_one_line([1], [1]), (3,))

    def test_swap_needs_equal_sizes(self):
        """Test tau must preserve block sizes"""
        assert not is_admissible(from_one_line([2, 1]), (2, 1))

    def test_unequal_even_sizes(self):
        """Test unequal even sizes only admit the four diagonal involutions"""
        found = admissible_involutions((2, 4))
        assert len(found) == 4
        assert all(w.tau_of(1) == 1 and w.tau_of(2) == 2 for w in found)
        assert {tuple(w.c_indices()) for w in found} == {(), (1,), (2,), (1, 2)}
        assert not is_admissible(from_one_line([2, 1], [1, 2]), (2, 4))
        assert len(admissible_involutions((1, 3))) == 1

    def test_stabilizer(self):
        """Test stabilizer factors for the three c-set types"""
        assert stabilizer_descriptor(identity(1), (3,)) == [StabilizerFactor('GL', 'F', 3, (1,))]
        assert stabilizer_descriptor(from_one_line([2, 1]), (2, 2)) == [StabilizerFactor('GL', 'E', 2, (1, 2))]
        assert stabilizer_descriptor(from_one_line([1], [1]), (2,)) == [StabilizerFactor('Sp', 'E', 2, (1,))]

    def test_modulus(self):
        """Test the modulus exponents follow the stabilizer"""
        assert modulus_exponents(from_one_line([1], [1]), (2,)) == [ModulusFactor('E', 2, 0, (1,))]
        assert modulus_exponents(identity(1), (3,)) == [ModulusFactor('F', 3, 1, (1,))]

    def test_not_admissible(self):
        """Test descriptors refuse non-admissible input"""
        with pytest.raises(PreconditionError):
            stabilizer_descriptor(from_one_line([1], [1]), (3,))

    def test_modulus_invariant_along_springer_paths(self):
        """Test the modulus multiset is unchanged by conjugation to a minimal involution"""
        sizes = (2, 2, 2)
        for w in involutions(3):
            _, w_min, _ = springer_path(w)
            before = Counter((m.field, m.size, m.exponent) for m in modulus_exponents(w, sizes))
            after = Counter((m.field, m.size, m.exponent) for m in modulus_exponents(w_min, sizes))
            assert before == after


@pytest.mark.unit
class TestOrbitShapes:
    """Test orbit shape enumeration"""

    def test_empty(self):
        """Test no blocks gives the trivial shape"""
        assert list(enumerate_orbit_shapes([])) == [OrbitDescriptor((), (), ())]

    def test_single_point(self, odd_line):
        """Test a size-one block has a fixed shape on each side of the cut"""
        shapes = list(enumerate_orbit_shapes([L(odd_line, 0, 0)]))
        assert len(shapes) == 2
        assert {shape.s_cut for shape in shapes} == {(0,), (1,)}
        assert shapes[0].c == frozenset({(1, 1)})

    def test_no_repeats(self, even_line):
        """Test shapes are listed once each"""
        shapes = list(enumerate_orbit_shapes([L(even_line, '1/2', '3/2'), L(even_line, '1/2', '1/2')]))
        assert len(shapes) == len(set(shapes))

    def test_row_conditions(self, even_line):
        """Test two parts of one block never land in the same row on the same side"""
        for shape in enumerate_orbit_shapes([L(even_line, '1/2', '5/2')]):
            rows = {}
            for index, target in shape.tau:
                side = index in shape.c
                rows.setdefault(side, []).append(target[0])
            for targets in rows.values():
                assert len(targets) == len(set(targets))

    def test_support_cap(self, odd_line, monkeypatch):
        """Test the support cap stops enumeration"""
        monkeypatch.setitem(config.ENGINE_CONFIG, 'max_support', 2)
        with pytest.raises(CapExceededError):
            list(enumerate_orbit_shapes([L(odd_line, 0, 2)]))


@pytest.mark.unit
class TestFactors:
    """Test factorization terms and the per-index predicates"""

    def test_terms(self, odd_line):
        """Test L and Z blocks give one term in Langlands notation"""
        assert factorization_terms(L(odd_line, 0, 1), (1, 1)) == [
            (Multisegment.of(seg(odd_line, 1, 1)), Multisegment.of(seg(odd_line, 0, 0)))]
        z = BlockSpec(BlockKind.Z, seg(odd_line, 0, 1))
        assert factorization_terms(z, (1, 1)) == [
            (Multisegment.of(seg(odd_line, 0, 0)), Multisegment.of(seg(odd_line, 1, 1)))]
        assert factorization_terms(z, (2,)) == [
            (Multisegment.of(seg(odd_line, 0, 0), seg(odd_line, 1, 1)),)]

    def test_ladder_terms(self, even_ladder):
        """Test ladder blocks use the ladder splitting rule"""
        assert len(factorization_terms(BlockSpec(BlockKind.LADDER, even_ladder), (2, 2))) == 2

    def test_glF_half(self, even_line, odd_line):
        """Test the twisted GL(F) predicate"""
        assert glF_half(Multisegment.of(seg(odd_line, 0, 1))) is Tri.YES
        assert glF_half(Multisegment.of(seg(even_line, 0, 1))) is Tri.NO
        assert glF_half(Multisegment.of(seg(even_line, 0, 1), seg(even_line, 0, 1))) is Tri.YES
        assert glF_half(Multisegment.of(seg(even_line, 1, 1), seg(even_line, 0, 0))) is Tri.UNKNOWN

    def test_sp_dist(self, even_line, even_ladder):
        """Test Sp(E)-distinction of factors"""
        assert sp_dist(Multisegment.of(seg(even_line, 0, 1))) is Tri.NO
        assert sp_dist(even_ladder) is Tri.YES
        assert sp_dist(Multisegment.of(seg(even_line, 0, 1), seg(even_line, 0, 1))) is Tri.UNKNOWN


@pytest.mark.unit
class TestRelevance:
    """Test the relevance check and the search"""

    def test_fixed_outside_c(self, odd_line):
        """Test L([0,1]) on an Odd line with identity shape and empty c"""
        blocks = [L(odd_line, 0, 1)]
        orbit = OrbitDescriptor(((2,),), (1,), (((1, 1), (1, 1)),))
        verdict, log = check_relevant(blocks, orbit, ((Multisegment.of(seg(odd_line, 0, 1)),),))
        assert verdict is Tri.YES
        assert log[0].condition == "nu^(-1/2) GL(F)-distinguished"

    def test_fixed_inside_c(self, odd_line):
        """Test a segment on c is never Sp(E)-distinguished"""
        blocks = [L(odd_line, 0, 1)]
        orbit = OrbitDescriptor(((2,),), (0,), (((1, 1), (1, 1)),))
        verdict, _ = check_relevant(blocks, orbit, ((Multisegment.of(seg(odd_line, 0, 1)),),))
        assert verdict is Tri.NO

    def test_pairing_outside_c(self, even_line):
        """Test factor_2 = nu conj_dual(factor_1) fails for [-1,0] and [0,1]"""
        blocks = [L(even_line, -1, 0), L(even_line, 0, 1)]
        orbit = OrbitDescriptor(((2,), (2,)), (1, 1), (((1, 1), (2, 1)), ((2, 1), (1, 1))))
        factors = ((Multisegment.of(seg(even_line, -1, 0)),), (Multisegment.of(seg(even_line, 0, 1)),))
        verdict, log = check_relevant(blocks, orbit, factors)
        assert verdict is Tri.NO
        assert len(log) == 1

    def test_factor_size_mismatch(self, odd_line):
        """Test factors must match the part sizes"""
        orbit = OrbitDescriptor(((2,),), (1,), (((1, 1), (1, 1)),))
        with pytest.raises(PreconditionError):
            check_relevant([L(odd_line, 0, 1)], orbit, ((Multisegment.of(seg(odd_line, 0, 0)),),))

    def test_search_none(self, even_line):
        """Test L([1,2]) alone has no relevant orbit"""
        result = exists_relevant([L(even_line, 1, 2)])
        assert result.status is SearchStatus.NONE_CERTIFIED
        assert result.certificate is None
        assert result.nodes_visited > 0

    def test_search_found(self, even_line):
        """Test nu Delta x Delta pairs inside c"""
        result = exists_relevant([L(even_line, 0, 1), L(even_line, -1, 0)])
        assert result.status is SearchStatus.FOUND
        assert all(entry.verdict is Tri.YES for entry in result.certificate.condition_log)

    def test_search_unknown(self, even_line):
        """Test the conservative rule leaves a longer self-dual segment undecided"""
        result = exists_relevant([L(even_line, 0, 1)], rule='conservative')
        assert result.status is SearchStatus.UNKNOWN
        assert result.unknown_branches

    def test_search_empty(self):
        """Test no blocks is trivially relevant"""
        assert exists_relevant([]).status is SearchStatus.FOUND


def Z(line, a, b):
    return BlockSpec(BlockKind.Z, seg(line, a, b))


def exhaustive_status(blocks, rule=None):
    """Kleene OR of check_relevant over every shape and factorization term"""
    values = []
    for orbit in enumerate_orbit_shapes(blocks):
        per_block = [factorization_terms(b, parts) for b, parts in zip(blocks, orbit.splits)]
        for factors in product(*per_block):
            values.append(check_relevant(blocks, orbit, factors, rule)[0])
    return {Tri.YES: SearchStatus.FOUND, Tri.NO: SearchStatus.NONE_CERTIFIED,
            Tri.UNKNOWN: SearchStatus.UNKNOWN}[Tri.any_of(values)]


@pytest.mark.unit
class TestPrunedSearch:
    """Test the pruned search agrees with evaluating every shape and term"""

    def cases(self, even_line, odd_line, even_ladder):
        return [
            [L(even_line, 0, 1), L(even_line, -1, 0)],
            [L(even_line, 1, 2)],
            [L(even_line, '-1/2', '1/2')],
            [Z(even_line, '-1/2', '1/2')],
            [Z(odd_line, -1, 0), L(odd_line, 0, 0)],
            [L(odd_line, 0, 1), Z(odd_line, 0, 1)],
            [L(even_line, '1/2', '1/2'), L(even_line, '-1/2', '-1/2')],
            [L(even_line, '-1/2', '3/2'), L(even_line, '-3/2', '1/2')],
            [BlockSpec(BlockKind.LADDER, even_ladder)],
            [BlockSpec(BlockKind.LADDER, even_ladder), L(even_line, '1/2', '1/2')],
        ]

    @pytest.mark.parametrize("rule", ['parity', 'conservative'])
    def test_status_matches_exhaustive(self, even_line, odd_line, even_ladder, rule):
        """Test the status of every small case against the exhaustive evaluation"""
        for blocks in self.cases(even_line, odd_line, even_ladder):
            assert exists_relevant(blocks, rule).status is exhaustive_status(blocks, rule), [str(b) for b in blocks]

    def test_certificate_is_a_listed_shape(self, even_line, odd_line, even_ladder):
        """Test a Found certificate names an enumerated shape whose conditions all hold"""
        for blocks in self.cases(even_line, odd_line, even_ladder):
            result = exists_relevant(blocks)
            if result.status is not SearchStatus.FOUND:
                continue
            cert = result.certificate
            assert cert.orbit in set(enumerate_orbit_shapes(blocks))
            assert check_relevant(blocks, cert.orbit, cert.factor_assignment)[0] is Tri.YES

    def test_unknown_branches_are_capped(self, even_line):
        """Test at most keep_unknown undecided branches are kept"""
        blocks = [L(even_line, '-1/2', '1/2'), L(even_line, '-1/2', '1/2')]
        result = exists_relevant(blocks, rule='conservative', keep_unknown=1)
        assert len(result.unknown_branches) <= 1

    def test_pruning_skips_branches(self, even_line):
        """Test nested segments reach far fewer leaves than there are shape and term pairs"""
        blocks = [L(even_line, '-3/2', '3/2'), L(even_line, '-1/2', '1/2')]
        result = exists_relevant(blocks)
        assert result.branches_checked < len(list(enumerate_orbit_shapes(blocks)))
