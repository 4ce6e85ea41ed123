#!/usr/bin/env python3
"""
unidist command-line front end

All results are printed as JSON on stdout (DOT for graph exports); logs go to
stderr. Exit codes: 0 success, 1 internal error, 2 invalid input, 3 cap exceeded.
"""

import argparse
import logging
import re
import sys
from typing import Any, Callable, List, Optional

import config
import oracles
import orbits
import segcalc
import signgraph
import verdicts
import weylinv
from codec import (decode_blocks_document, decode_datum, decode_multisegment_document, decode_segment_document,
                   decode_signed_permutation, decode_signs, decode_tempered, dumps, encode_bc_report,
                   encode_multisegment_document, encode_orbit, encode_search_result, encode_signed_permutation,
                   encode_signs, encode_verdict, load_json)
from errors import InputValidationError, UnidistError

logger = logging.getLogger(__name__)

_SIGN_TOKEN = re.compile('^[+\\-−]+$')


# sign

def cmd_sign_component(args) -> Any:
    return {'tau': signgraph.tau(decode_signs(args.tuple))}


def cmd_sign_path(args) -> Any:
    e = decode_signs(args.tuple)
    target = args.target or ('v0' if signgraph.tau(e) == 0 else 'v1')
    build = signgraph.path_v0 if target == 'v0' else signgraph.path_v1
    pattern = build(e, args.variant)
    end, history = signgraph.walk(e, pattern)
    return {'pattern': list(pattern), 'history': [list(p) for p in history.pairs], 'end': encode_signs(end)}


def cmd_sign_dot(args) -> str:
    return signgraph.to_dot(decode_signs(args.tuple))


def cmd_sign_graph(args) -> Any:
    e = decode_signs(args.tuple)
    if args.dot:
        return signgraph.to_dot(e)
    adjacency = signgraph.reachable_subgraph(e)
    return {'vertices': [encode_signs(v) for v in adjacency],
            'edges': [{'from': encode_signs(v), 'label': label, 'to': encode_signs(target)}
                      for v, out in adjacency.items() for label, target in out]}


# weyl

def cmd_weyl_minimal(args) -> Any:
    return [encode_signed_permutation(w) for w in weylinv.minimal_involutions(args.n)]


def cmd_weyl_springer(args) -> Any:
    sigma, w_min, labels = weylinv.springer_path(decode_signed_permutation(load_json(args.json)))
    return {'sigma': encode_signed_permutation(sigma), 'w_min': encode_signed_permutation(w_min), 'labels': labels}


def cmd_weyl_dot(args) -> str:
    return weylinv.to_dot(args.n)


def cmd_weyl_graph(args) -> Any:
    if args.dot:
        return weylinv.to_dot(args.n)
    graph = weylinv.involution_graph(args.n)
    return {'vertices': [encode_signed_permutation(w) for w in graph],
            'minimal': [encode_signed_permutation(w) for w in graph if weylinv.is_minimal(w)],
            'edges': [{'from': encode_signed_permutation(w), 'label': label, 'to': encode_signed_permutation(target)}
                      for w, out in graph.items() for label, target in out]}


# seg

def cmd_seg_mw(args) -> Any:
    return encode_multisegment_document(segcalc.mw_dual(decode_multisegment_document(load_json(args.json))))


def cmd_seg_ladder_dist(args) -> Any:
    return {'sp_dist': segcalc.sp_dist_ladder(decode_multisegment_document(load_json(args.json)))}


# orbit

def cmd_orbit_enumerate(args) -> Any:
    shapes = [encode_orbit(o) for o in orbits.enumerate_orbit_shapes(decode_blocks_document(load_json(args.json)))]
    return {'count': len(shapes), 'shapes': shapes}


def cmd_orbit_relevant(args) -> Any:
    return encode_search_result(orbits.exists_relevant(decode_blocks_document(load_json(args.json))))


# verdict

def cmd_verdict_discrete(args) -> Any:
    datum = decode_datum(load_json(args.json))
    out = encode_verdict(verdicts.ds_vanishing(datum))
    if args.replay:
        out['replay'] = verdicts.cross_validate_ds(datum)
    return out


def cmd_verdict_tempered(args) -> Any:
    return encode_verdict(verdicts.tempered_vanishing(decode_tempered(load_json(args.json))))


def cmd_verdict_ladder_bc(args) -> Any:
    return encode_bc_report(verdicts.ladder_bc(decode_multisegment_document(load_json(args.json))))


def cmd_verdict_speh(args) -> Any:
    return encode_verdict(verdicts.speh_verdict(decode_segment_document(load_json(args.json)), args.m))


def cmd_verdict_standard(args) -> Any:
    return encode_verdict(verdicts.standard_module_verdict(decode_multisegment_document(load_json(args.json))))


# oracle

def cmd_oracle_sweep(args) -> Any:
    return oracles.run_sweep(args.suite, args.max)


class JsonArgumentParser(argparse.ArgumentParser):
    """Argument errors raise InputValidationError so they reach stdout as JSON"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise InputValidationError(f"{self.prog}: {message}", clause="command line arguments")


def build_parser() -> argparse.ArgumentParser:
    parser = JsonArgumentParser(prog='unidist', description='Sp-distinction decision engine for unitary groups')
    parser.add_argument('--config', help='YAML configuration file (default config/engine.yaml)')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Override log level')
    groups = parser.add_subparsers(dest='group', required=True)

    def command(group, name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = group.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sign = groups.add_parser('sign', help='Graph of signs').add_subparsers(dest='command', required=True)
    command(sign, 'component', cmd_sign_component, 'Component index tau').add_argument('tuple')
    path = command(sign, 'path', cmd_sign_path, 'Constrained path into f_0 or f_1')
    path.add_argument('tuple')
    path.add_argument('--target', choices=['v0', 'v1'], help='Target component (default from tau)')
    path.add_argument('--variant', action='store_true', help='Use the shifted variant path')
    graph = command(sign, 'graph', cmd_sign_graph, 'Reachable subgraph as JSON, or DOT with --dot')
    graph.add_argument('tuple')
    graph.add_argument('--dot', action='store_true', help='Print DOT instead of JSON')
    dot = command(sign, 'dot', cmd_sign_dot, 'DOT export of the reachable subgraph')
    dot.add_argument('tuple')
    dot.set_defaults(dot=True)

    weyl = groups.add_parser('weyl', help='Signed permutation group').add_subparsers(dest='command', required=True)
    command(weyl, 'minimal', cmd_weyl_minimal, 'Minimal involutions of W_n').add_argument('n', type=int)
    command(weyl, 'springer', cmd_weyl_springer, 'Springer path to a minimal involution').add_argument('json')
    graph = command(weyl, 'graph', cmd_weyl_graph, 'Involution graph as JSON, or DOT with --dot')
    graph.add_argument('n', type=int)
    graph.add_argument('--dot', action='store_true', help='Print DOT instead of JSON')
    dot = command(weyl, 'dot', cmd_weyl_dot, 'DOT export of the involution graph')
    dot.add_argument('n', type=int)
    dot.set_defaults(dot=True)

    seg = groups.add_parser('seg', help='Segment calculus').add_subparsers(dest='command', required=True)
    command(seg, 'mw', cmd_seg_mw, 'Moeglin-Waldspurger involution').add_argument('json')
    command(seg, 'ladder-dist', cmd_seg_ladder_dist, 'Sp-distinction of a ladder').add_argument('json')

    orbit = groups.add_parser('orbit', help='Geometric lemma engine').add_subparsers(dest='command', required=True)
    command(orbit, 'enumerate', cmd_orbit_enumerate, 'All orbit shapes').add_argument('json')
    command(orbit, 'relevant', cmd_orbit_relevant, 'Search for a relevant orbit').add_argument('json')

    verdict = groups.add_parser('verdict', help='Distinction verdicts').add_subparsers(dest='command', required=True)
    discrete = command(verdict, 'discrete', cmd_verdict_discrete, 'Discrete series vanishing')
    discrete.add_argument('json')
    discrete.add_argument('--replay', action='store_true', help='Replay through the orbit engine')
    command(verdict, 'tempered', cmd_verdict_tempered, 'Tempered vanishing').add_argument('json')
    command(verdict, 'ladder-bc', cmd_verdict_ladder_bc, 'Base change verdict for a ladder').add_argument('json')
    speh = command(verdict, 'speh', cmd_verdict_speh, 'Speh representation verdict')
    speh.add_argument('json')
    speh.add_argument('--m', type=int, required=True, help='Number of segments')
    command(verdict, 'standard', cmd_verdict_standard, 'Standard module verdict').add_argument('json')

    oracle = groups.add_parser('oracle', help='Exhaustive sweeps').add_subparsers(dest='command', required=True)
    sweep = command(oracle, 'sweep', cmd_oracle_sweep, 'Run one sweep suite')
    sweep.add_argument('--suite', required=True, choices=sorted(oracles.SUITES))
    sweep.add_argument('--max', type=int, help='Size bound (default from configuration)')
    return parser


def protect_sign_tuples(argv: List[str]) -> List[str]:
    """
    Keep sign tuples such as '-+' positional for the sign subcommands.

    A '--' separator directly before a sign token is dropped, and a leading
    ASCII minus of a sign token becomes U+2212, which parse_signs reads as -1.
    """
    if 'sign' not in argv:
        return list(argv)
    start = argv.index('sign') + 2
    head, tail = list(argv[:start]), list(argv[start:])
    if '--' in tail[:-1]:
        pos = tail.index('--')
        if _SIGN_TOKEN.match(tail[pos + 1]):
            del tail[pos]
    return head + ['−' + token[1:] if _SIGN_TOKEN.match(token) and token.startswith('-') else token
                   for token in tail]


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch one subcommand, print its result; returns the exit code"""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(protect_sign_tuples(argv))
    except InputValidationError as e:
        print(dumps({'error': str(e), 'clause': e.clause}))
        return e.exit_code
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    config.reload_config(args.config)
    if args.log_level:
        config.LOGGING_CONFIG['log_level'] = args.log_level
    config.setup_logging()
    for problem in config.validate_config():
        logger.warning(f"Configuration: {problem}")

    try:
        result = args.handler(args)
    except UnidistError as e:
        print(dumps({'error': str(e), 'clause': getattr(e, 'clause', None)}))
        logger.debug(f"{type(e).__name__}: exit {e.exit_code}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Internal error: {e}")
        print(dumps({'error': f"internal error: {e}", 'clause': None}))
        return 1

    if getattr(args, 'dot', False):
        sys.stdout.write(result)
    else:
        print(dumps(result))
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
