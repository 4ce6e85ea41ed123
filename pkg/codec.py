#!/usr/bin/env python3
"""
JSON wire format for the engine's domain objects.

Decoders validate their input and raise InputValidationError naming the
violated clause; encoders produce plain dicts and lists that dumps() renders
with sorted keys.
"""

import json
import logging
import os
from typing import Any, Dict, Iterable, List, Optional

from errors import InputValidationError
from orbits import BlockKind, BlockSpec, OrbitDescriptor, RelevanceCertificate, SearchResult
from segcalc import CuspLine, HalfInt, LineClass, Multisegment, Segment
from signgraph import format_signs, parse_signs
from verdicts import AdmissibleDatum, BaseChangeReport, JordanEntry, TemperedDatum, Verdict
from weylinv import SignedPermutation, from_one_line

logger = logging.getLogger(__name__)

LineTable = Dict[str, CuspLine]


def dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


def load_json(source: str) -> Any:
    """Parse a JSON document from a file path, or from the text itself"""
    text = source
    if os.path.exists(source):
        with open(source, 'r') as f:
            text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}",
                                   clause="JSON syntax")


def _require(obj: Any, key: str, kind: type, what: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputValidationError(f"{what}: missing field {key!r}", clause=f"{what}.{key}")
    value = obj[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise InputValidationError(f"{what}: field {key!r} has the wrong type", clause=f"{what}.{key}")
    return value


# Sign tuples and signed permutations

def encode_signs(e) -> str:
    return format_signs(e)


def decode_signs(value: Any):
    if not isinstance(value, str):
        raise InputValidationError("sign tuple must be a string over +/-", clause="sign tuple alphabet")
    return parse_signs(value)


def encode_signed_permutation(w: SignedPermutation) -> Dict[str, Any]:
    return {'n': w.n, 'tau': [w.tau_of(i) for i in range(1, w.n + 1)], 'c': w.c_indices()}


def decode_signed_permutation(obj: Any) -> SignedPermutation:
    n = _require(obj, 'n', int, 'signed permutation')
    tau = _require(obj, 'tau', list, 'signed permutation')
    c = obj.get('c', [])
    if len(tau) != n or not all(isinstance(t, int) and 1 <= t <= n for t in tau):
        raise InputValidationError(f"tau {tau} is not a one-line permutation of 1..{n}",
                                   clause="SignedPermutation: tau bijective")
    if not isinstance(c, list) or not all(isinstance(i, int) and 1 <= i <= n for i in c):
        raise InputValidationError(f"c {c} must list indices in 1..{n}", clause="SignedPermutation: c within 1..n")
    return from_one_line(tau, c)


# Lines, segments, multisegments

def encode_line(line: CuspLine) -> Dict[str, Any]:
    if line.sd_class is LineClass.NONSD:
        return {'id': line.id, 'class': {'nonsd': line.partner}}
    return {'id': line.id, 'class': line.sd_class.value}


def decode_line(obj: Any) -> CuspLine:
    line_id = _require(obj, 'id', str, 'line')
    cls = obj.get('class')
    if isinstance(cls, dict) and set(cls) == {'nonsd'} and isinstance(cls['nonsd'], str):
        return CuspLine(line_id, LineClass.NONSD, partner=cls['nonsd'])
    if cls in ('even', 'odd'):
        return CuspLine(line_id, LineClass(cls))
    raise InputValidationError(f"line {line_id}: class must be even, odd or {{nonsd: partner}}",
                               clause="line.class")


def decode_lines(items: Any) -> LineTable:
    if not isinstance(items, list):
        raise InputValidationError("lines must be an array", clause="lines")
    table: LineTable = {}
    for item in items:
        line = decode_line(item)
        if line.id in table:
            raise InputValidationError(f"line {line.id} listed twice", clause="lines: unique ids")
        table[line.id] = line
    for line in list(table.values()):
        if line.sd_class is not LineClass.NONSD:
            continue
        partner = table.get(line.partner)
        if partner is None:
            table[line.partner] = line.dual_line()
        elif partner != line.dual_line():
            raise InputValidationError(f"lines {line.id} and {line.partner} are not mutual partners",
                                       clause="lines: partner symmetric")
    return table


def lines_of(segments: Iterable[Segment]) -> List[Dict[str, Any]]:
    seen: Dict[str, CuspLine] = {}
    for s in segments:
        seen.setdefault(s.line.id, s.line)
    return [encode_line(seen[k]) for k in sorted(seen)]


def encode_segment(s: Segment) -> Dict[str, Any]:
    return {'line': s.line.id, 'a2': s.a2, 'b2': s.b2}


def decode_segment(obj: Any, lines: LineTable) -> Segment:
    line_id = _require(obj, 'line', str, 'segment')
    if line_id not in lines:
        raise InputValidationError(f"segment refers to unknown line {line_id!r}", clause="segment.line")
    a2 = _require(obj, 'a2', int, 'segment')
    b2 = _require(obj, 'b2', int, 'segment')
    return Segment(lines[line_id], HalfInt(a2), HalfInt(b2))


def encode_multisegment(m: Multisegment) -> List[Dict[str, Any]]:
    return [encode_segment(s) for s in m]


def decode_multisegment(items: Any, lines: LineTable) -> Multisegment:
    if not isinstance(items, list):
        raise InputValidationError("multisegment must be an array of segments", clause="multisegment")
    return Multisegment(tuple(decode_segment(item, lines) for item in items))


def encode_multisegment_document(m: Multisegment) -> Dict[str, Any]:
    return {'lines': lines_of(m), 'multisegment': encode_multisegment(m)}


def decode_multisegment_document(obj: Any) -> Multisegment:
    lines = decode_lines(_require(obj, 'lines', list, 'document'))
    return decode_multisegment(_require(obj, 'multisegment', list, 'document'), lines)


def decode_segment_document(obj: Any) -> Segment:
    lines = decode_lines(_require(obj, 'lines', list, 'document'))
    return decode_segment(_require(obj, 'segment', dict, 'document'), lines)


# Orbit engine

def encode_block(block: BlockSpec) -> Dict[str, Any]:
    if block.kind is BlockKind.LADDER:
        return {'kind': block.kind.value, 'multisegment': encode_multisegment(block.payload)}
    return {'kind': block.kind.value, 'segment': encode_segment(block.payload)}


def decode_block(obj: Any, lines: LineTable) -> BlockSpec:
    kind_name = _require(obj, 'kind', str, 'block')
    try:
        kind = BlockKind(kind_name)
    except ValueError:
        raise InputValidationError(f"block kind {kind_name!r} is not L, Z or ladder", clause="block.kind")
    if kind is BlockKind.LADDER:
        return BlockSpec(kind, decode_multisegment(_require(obj, 'multisegment', list, 'block'), lines))
    return BlockSpec(kind, decode_segment(_require(obj, 'segment', dict, 'block'), lines))


def encode_blocks_document(blocks: List[BlockSpec]) -> Dict[str, Any]:
    segments = [s for b in blocks for s in ([b.payload] if isinstance(b.payload, Segment) else b.payload.segs)]
    return {'lines': lines_of(segments), 'blocks': [encode_block(b) for b in blocks]}


def decode_blocks_document(obj: Any) -> List[BlockSpec]:
    lines = decode_lines(_require(obj, 'lines', list, 'document'))
    return [decode_block(item, lines) for item in _require(obj, 'blocks', list, 'document')]


def encode_orbit(orbit: OrbitDescriptor) -> Dict[str, Any]:
    return {
        'splits': [list(parts) for parts in orbit.splits],
        's_cut': list(orbit.s_cut),
        'tau': [[list(src), list(dst)] for src, dst in orbit.tau],
        'c': [list(index) for index in sorted(orbit.c)],
    }


def decode_orbit(obj: Any) -> OrbitDescriptor:
    splits = tuple(tuple(parts) for parts in _require(obj, 'splits', list, 'orbit'))
    s_cut = tuple(_require(obj, 's_cut', list, 'orbit'))
    tau = tuple(sorted((tuple(src), tuple(dst)) for src, dst in _require(obj, 'tau', list, 'orbit')))
    if len(s_cut) != len(splits):
        raise InputValidationError("orbit: one cut per block", clause="orbit.s_cut")
    return OrbitDescriptor(splits, s_cut, tau)


def encode_certificate(cert: RelevanceCertificate) -> Dict[str, Any]:
    return {
        'orbit': encode_orbit(cert.orbit),
        'factors': [[encode_multisegment(m) for m in row] for row in cert.factor_assignment],
        'condition_log': [
            {'index': list(entry.index), 'condition': entry.condition,
             'verdict': entry.verdict.value, 'witness': entry.witness}
            for entry in cert.condition_log
        ],
    }


def encode_search_result(result: SearchResult) -> Dict[str, Any]:
    out = {
        'status': result.status.value,
        'nodes_visited': result.nodes_visited,
        'branches_checked': result.branches_checked,
    }
    if result.certificate is not None:
        out['certificate'] = encode_certificate(result.certificate)
    if result.unknown_branches:
        out['unknown_branches'] = [encode_certificate(c) for c in result.unknown_branches]
    return out


# Admissible and tempered data

def encode_datum(d: AdmissibleDatum) -> Dict[str, Any]:
    return {
        'lines': [encode_line(e.line) for e in d.entries],
        'entries': [{'line': e.line.id, 'a2': [x.doubled for x in e.a], 'eps': format_signs(e.eps)}
                    for e in d.entries],
    }


def decode_datum(obj: Any, lines: Optional[LineTable] = None) -> AdmissibleDatum:
    if lines is None:
        lines = decode_lines(_require(obj, 'lines', list, 'datum'))
    entries = []
    for item in _require(obj, 'entries', list, 'datum'):
        line_id = _require(item, 'line', str, 'datum entry')
        if line_id not in lines:
            raise InputValidationError(f"datum entry refers to unknown line {line_id!r}", clause="datum entry.line")
        a2 = _require(item, 'a2', list, 'datum entry')
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in a2):
            raise InputValidationError("a2 must be an array of integers", clause="datum entry.a2")
        eps = decode_signs(_require(item, 'eps', str, 'datum entry'))
        entries.append(JordanEntry(lines[line_id], tuple(HalfInt(x) for x in a2), eps))
    return AdmissibleDatum(tuple(entries))


def encode_tempered(td: TemperedDatum) -> Dict[str, Any]:
    out = encode_datum(td.ds)
    known = {line['id'] for line in out['lines']}
    out['lines'] += [line for line in lines_of(td.gl_pairs) if line['id'] not in known]
    out['gl_pairs'] = [encode_segment(s) for s in td.gl_pairs]
    return out


def decode_tempered(obj: Any) -> TemperedDatum:
    lines = decode_lines(_require(obj, 'lines', list, 'datum'))
    gl_pairs = tuple(decode_segment(item, lines) for item in _require(obj, 'gl_pairs', list, 'datum'))
    return TemperedDatum(gl_pairs, decode_datum(obj, lines))


# Verdicts

def encode_verdict(v: Verdict) -> Dict[str, Any]:
    return {'outcome': v.outcome.value, 'theorem': v.theorem, 'certificate': v.certificate, 'notes': v.notes}


def encode_bc_report(report: BaseChangeReport) -> Dict[str, Any]:
    return {'in_image': report.in_image.value, 'fiber': report.fiber, 'verdict': encode_verdict(report.verdict)}
