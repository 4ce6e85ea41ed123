"""
Unit tests for oracles - desk-scale sweeps at small sizes
"""
import numpy as np
import pytest

from config import ORACLE_CONFIG
from errors import InputValidationError
from oracles import (EVEN_LINE, ODD_LINE, _ladder_pieces, _line_points, _random_rigid, brute_force_shapes, run_sweep,
                     small_data, sweep_ladder_bc, sweep_mw, sweep_nested, sweep_orbits, sweep_signgraph,
                     sweep_standard_module, sweep_weyl)
from orbits import BlockKind, BlockSpec, enumerate_orbit_shapes
from segcalc import Multisegment, is_ladder, seg, seg2
from verdicts import validate_datum


@pytest.mark.unit
class TestSweeps:
    """Test each sweep reports no failures on small instances"""

    def test_signgraph(self):
        """Test the sign graph sweep up to length 6"""
        report = sweep_signgraph(6)
        assert report['suite'] == 'signgraph'
        assert report['checked'] == 2 ** 7 - 1
        assert report['failures'] == []

    def test_weyl(self):
        """Test the Weyl sweep up to rank 2"""
        report = sweep_weyl(2)
        assert report['checked'] > 0
        assert report['failures'] == []

    def test_orbits(self):
        """Test shape enumeration against brute force up to three factors"""
        report = sweep_orbits(3)
        assert report['failures'] == []

    def test_mw_sample_size(self):
        """Test the MW sweep checks every sample plus both ladder grids"""
        report = sweep_mw(20, max_segments=2, bound=1)
        assert report['suite'] == 'mw'
        assert report['checked'] == 20 + 12 + 4
        assert report['failures'] == []

    def test_mw_half_integer_sample(self):
        """Test the random sample covers both integer and half-integer lines"""
        rng = np.random.default_rng(ORACLE_CONFIG['seed'])
        residues = {s.residue for _ in range(50) for s in _random_rigid(rng, 8)}
        assert residues == {0, 1}

    def test_mw_seeded(self):
        """Test the MW sample is reproducible from the configured seed"""
        assert sweep_mw(10, max_segments=2, bound=1) == sweep_mw(10, max_segments=2, bound=1)

    def test_ladder_grid(self):
        """Test the ladder grid on three points"""
        grid = list(_ladder_pieces(_line_points(ODD_LINE, 1), 2))
        assert len(grid) == 12
        assert all(is_ladder(Multisegment(tuple(seg2(ODD_LINE, a, b) for a, b in pieces))) for pieces in grid)

    def test_line_points(self):
        """Test doubled points follow the line residue"""
        assert _line_points(ODD_LINE, 1) == [2, 0, -2]
        assert _line_points(EVEN_LINE, 1) == [1, -1]

    def test_ladder_bc(self):
        """Test the base change sweep on ladders with doubled endpoints in [-4, 4]"""
        report = sweep_ladder_bc(4, 2)
        assert report['suite'] == 'ladder_bc'
        assert report['checked'] > 0
        assert report['failures'] == []

    def test_standard_module(self):
        """Test 40 random generic standard modules"""
        report = sweep_standard_module(40)
        assert report['checked'] == 40
        assert report['failures'] == []

    def test_standard_module_conservative(self):
        """Test the conservative rule keeps verdicts and the criterion in step"""
        assert sweep_standard_module(20, rule='conservative')['failures'] == []

    def test_nested_small(self):
        """Test nested segments with support at most 6"""
        report = sweep_nested(6)
        assert report['checked'] > 0
        assert report['failures'] == []

    def test_unknown_suite(self):
        """Test run_sweep rejects unknown suites"""
        with pytest.raises(InputValidationError):
            run_sweep('everything')


@pytest.mark.unit
class TestBruteForce:
    """Test the brute-force orbit filter directly"""

    def test_two_points(self):
        """Test two size-one blocks agree with the engine"""
        blocks = [BlockSpec(BlockKind.L, seg(EVEN_LINE, '1/2', '1/2')),
                  BlockSpec(BlockKind.L, seg(EVEN_LINE, '3/2', '3/2'))]
        assert set(enumerate_orbit_shapes(blocks)) == brute_force_shapes(blocks)

    def test_small_data_valid(self):
        """Test every generated datum passes validation"""
        data = small_data(2)
        assert len(data) == 4
        for d in data:
            validate_datum(d)
