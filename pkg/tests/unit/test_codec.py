"""
Unit tests for codec - JSON documents for lines, segments, blocks, data and verdicts
"""
import json

import pytest

from codec import (decode_blocks_document, decode_datum, decode_lines, decode_multisegment_document, decode_orbit,
                   decode_segment_document, decode_signed_permutation, decode_signs, decode_tempered, dumps,
                   encode_blocks_document, encode_datum, encode_multisegment_document, encode_orbit,
                   encode_search_result, encode_signed_permutation, encode_tempered, encode_verdict, load_json)
from errors import InputValidationError
from orbits import BlockKind, BlockSpec, OrbitDescriptor, exists_relevant
from segcalc import LineClass, seg
from verdicts import ds_vanishing
from weylinv import from_one_line

EVEN_LINES = [{"id": "rho", "class": "even"}]


@pytest.mark.unit
class TestLoading:
    """Test JSON loading and rendering"""

    def test_load_text(self):
        """Test inline JSON text"""
        assert load_json('{"n": 1}') == {"n": 1}

    def test_load_file(self, tmp_path):
        """Test a path is read from disk"""
        path = tmp_path / "doc.json"
        path.write_text('[1, 2]')
        assert load_json(str(path)) == [1, 2]

    def test_malformed(self):
        """Test malformed JSON names the syntax clause"""
        with pytest.raises(InputValidationError) as exc:
            load_json('{"n": ')
        assert exc.value.clause == "JSON syntax"

    def test_dumps_sorted(self):
        """Test keys are rendered in sorted order"""
        assert dumps({"b": 1, "a": 2}) == '{"a": 2, "b": 1}'


@pytest.mark.unit
class TestLines:
    """Test line tables"""

    def test_partner_added(self):
        """Test a missing partner line is filled in"""
        table = decode_lines([{"id": "a", "class": {"nonsd": "b"}}])
        assert table["b"].sd_class is LineClass.NONSD
        assert table["b"].partner == "a"

    def test_bad_class(self):
        """Test unknown classes are rejected"""
        with pytest.raises(InputValidationError):
            decode_lines([{"id": "rho", "class": "weird"}])

    def test_duplicate(self):
        """Test ids are unique"""
        with pytest.raises(InputValidationError):
            decode_lines(EVEN_LINES + EVEN_LINES)

    def test_partner_mismatch(self):
        """Test partners must agree"""
        with pytest.raises(InputValidationError):
            decode_lines([{"id": "a", "class": {"nonsd": "b"}}, {"id": "b", "class": {"nonsd": "c"}}])


@pytest.mark.unit
class TestDocuments:
    """Test segment, multisegment and block documents"""

    def test_segment_document(self, even_line):
        """Test doubled endpoints"""
        s = decode_segment_document({"lines": EVEN_LINES, "segment": {"line": "rho", "a2": -1, "b2": 3}})
        assert s == seg(even_line, '-1/2', '3/2')

    def test_unknown_line(self):
        """Test segments must refer to a listed line"""
        with pytest.raises(InputValidationError) as exc:
            decode_segment_document({"lines": EVEN_LINES, "segment": {"line": "pi", "a2": 0, "b2": 0}})
        assert exc.value.clause == "segment.line"

    def test_wrong_type(self):
        """Test endpoints must be integers"""
        with pytest.raises(InputValidationError):
            decode_segment_document({"lines": EVEN_LINES, "segment": {"line": "rho", "a2": "0", "b2": 0}})

    def test_multisegment_document(self, even_ladder):
        """Test a multisegment document decodes to the same multisegment it was built from"""
        doc = json.loads(dumps(encode_multisegment_document(even_ladder)))
        assert doc["lines"] == EVEN_LINES
        assert decode_multisegment_document(doc) == even_ladder

    def test_blocks_document(self):
        """Test block kinds and payloads"""
        blocks = decode_blocks_document({
            "lines": EVEN_LINES,
            "blocks": [
                {"kind": "L", "segment": {"line": "rho", "a2": 0, "b2": 2}},
                {"kind": "Z", "segment": {"line": "rho", "a2": 0, "b2": 0}},
                {"kind": "ladder", "multisegment": [{"line": "rho", "a2": 2, "b2": 4},
                                                   {"line": "rho", "a2": 0, "b2": 2}]},
            ],
        })
        assert [b.kind for b in blocks] == [BlockKind.L, BlockKind.Z, BlockKind.LADDER]
        assert [b.size for b in blocks] == [2, 1, 4]

    def test_blocks_document_round_trip(self, even_line, odd_line, even_ladder):
        """Test encoded blocks survive JSON text and decode to the same blocks"""
        blocks = [BlockSpec(BlockKind.L, seg(even_line, '1/2', '3/2')),
                  BlockSpec(BlockKind.Z, seg(even_line, '-1/2', '1/2')),
                  BlockSpec(BlockKind.LADDER, even_ladder)]
        text = dumps(encode_blocks_document(blocks))
        assert decode_blocks_document(json.loads(text)) == blocks
        odd_blocks = [BlockSpec(BlockKind.L, seg(odd_line, 0, 1))]
        assert decode_blocks_document(encode_blocks_document(odd_blocks)) == odd_blocks

    def test_bad_block_kind(self):
        """Test unknown block kinds are rejected"""
        with pytest.raises(InputValidationError):
            decode_blocks_document({"lines": EVEN_LINES, "blocks": [{"kind": "X"}]})


@pytest.mark.unit
class TestEngineObjects:
    """Test signs, signed permutations, orbits and search results"""

    def test_signs(self):
        """Test sign tuples are strings"""
        assert decode_signs("+-") == (1, -1)
        with pytest.raises(InputValidationError):
            decode_signs([1, -1])

    def test_signed_permutation(self):
        """Test one-line tau and 1-based c"""
        w = decode_signed_permutation({"n": 3, "tau": [2, 1, 3], "c": [3]})
        assert w == from_one_line([2, 1, 3], [3])
        assert encode_signed_permutation(w) == {"n": 3, "tau": [2, 1, 3], "c": [3]}

    def test_signed_permutation_invalid(self):
        """Test malformed permutations are rejected"""
        with pytest.raises(InputValidationError):
            decode_signed_permutation({"n": 2, "tau": [1, 1]})
        with pytest.raises(InputValidationError):
            decode_signed_permutation({"n": 2, "tau": [1, 2], "c": [3]})

    def test_orbit(self):
        """Test orbit descriptors render c and decode back"""
        orbit = OrbitDescriptor(((1, 1),), (1,), (((1, 1), (1, 1)), ((1, 2), (1, 2))))
        encoded = encode_orbit(orbit)
        assert encoded["c"] == [[1, 2]]
        assert decode_orbit(json.loads(dumps(encoded))) == orbit

    def test_search_result(self, even_line):
        """Test a Found result carries its certificate"""
        result = exists_relevant([BlockSpec(BlockKind.L, seg(even_line, 0, 1)),
                                  BlockSpec(BlockKind.L, seg(even_line, -1, 0))])
        encoded = encode_search_result(result)
        assert encoded["status"] == "Found"
        assert all(entry["verdict"] == "Yes" for entry in encoded["certificate"]["condition_log"])


@pytest.mark.unit
class TestData:
    """Test admissible and tempered data documents"""

    def test_datum(self):
        """Test entries decode with doubled values"""
        doc = {"lines": EVEN_LINES, "entries": [{"line": "rho", "a2": [3, 1], "eps": "++"}]}
        d = decode_datum(doc)
        assert d.entries[0].eps == (1, 1)
        assert [x.doubled for x in d.entries[0].a] == [3, 1]
        assert encode_datum(d) == doc

    def test_datum_bad_values(self):
        """Test a2 must be integers"""
        with pytest.raises(InputValidationError):
            decode_datum({"lines": EVEN_LINES, "entries": [{"line": "rho", "a2": [1.5], "eps": "+"}]})

    def test_tempered(self):
        """Test GL pairs ride along with the datum"""
        doc = {
            "lines": EVEN_LINES + [{"id": "sigma", "class": "odd"}],
            "entries": [{"line": "rho", "a2": [3, 1], "eps": "++"}],
            "gl_pairs": [{"line": "sigma", "a2": 0, "b2": 0}],
        }
        td = decode_tempered(doc)
        assert td.gl_pairs[0].line.id == "sigma"
        assert {line["id"] for line in encode_tempered(td)["lines"]} == {"rho", "sigma"}

    def test_verdict(self):
        """Test verdicts render outcome, theorem, certificate and notes"""
        doc = {"lines": EVEN_LINES, "entries": [{"line": "rho", "a2": [5, 1], "eps": "++"}]}
        encoded = encode_verdict(ds_vanishing(decode_datum(doc)))
        assert encoded["outcome"] == "NotDistinguished"
        assert encoded["theorem"] == "Thm 1.1(1)"
        assert encoded["certificate"]["t"] == 1
        assert encoded["notes"] == []
