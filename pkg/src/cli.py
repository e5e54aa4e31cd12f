#!/usr/bin/env python3
"""
SegalKit command line
=====================

One document in, one document out. Exit codes: 0 success, 1 check failed,
2 input or validation error, 3 budget exceeded.

Usage: python -m src.cli <subcommand> [inputs] [--truncation D] [--outer N]
       [--budget STEPS] [--mode MODE] [--seed SEED] [--out PATH]

Inputs are JSON document paths or builtin categories written as
builtin:<name>[:<n>], for example builtin:linear:3 or builtin:bar_interval.
"""

import argparse
import contextlib
import logging
import os
import sys

from src import documents, fincat, harness, realization, simplex, sset, sspace
from src.exceptions import DocumentError, InvalidStructure, SegalKitError
from src.utils import get_budget, get_seed, get_setting, setup_logging

logger = logging.getLogger(__name__)

SEGAL_MODES = {'strict': 'strict', 'pi0': 'pi0'}
EQUIVALENCE_MODES = {'pi0': 'pi0', 'nerve-equivalence': 'nerve'}

OK, CHECK_FAILED = 0, 1


def build_parser():
    parser = argparse.ArgumentParser(prog='segalkit', description='SegalKit - finite simplicial structures toolkit')
    parser.add_argument('--log-level', default=None, help='Logging level (default from SEGALKIT_LOG_LEVEL)')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p, truncation=False, outer=False, budget=False, mode=None, seed=False):
        if truncation:
            p.add_argument('--truncation', type=int, default=None, help='Inner truncation D')
        if outer:
            p.add_argument('--outer', type=int, default=None, help='Outer truncation N')
        if budget:
            p.add_argument('--budget', type=int, default=None, help='Enumeration budget in steps')
        if mode:
            p.add_argument('--mode', choices=list(mode), default=list(mode)[0], help='Decision mode')
        if seed:
            p.add_argument('--seed', type=int, default=None, help='Seed for random corpora')
        p.add_argument('--out', type=str, default=None, help='Write the output document here instead of stdout')

    p = sub.add_parser('delta-hom', help='Enumerate monotone maps [n] -> [m]')
    p.add_argument('n', type=int)
    p.add_argument('m', type=int)
    common(p, budget=True)

    p = sub.add_parser('delta-aut', help='Object-fixing automorphisms of the truncated simplex category')
    p.add_argument('max_degree', type=int, nargs='?', default=None)
    common(p, budget=True)

    p = sub.add_parser('nerve', help='Nerve of a finite category')
    p.add_argument('input')
    common(p, truncation=True)

    p = sub.add_parser('segal-check', help='Segal condition for a simplicial set, space or category nerve')
    p.add_argument('input')
    common(p, truncation=True, mode=SEGAL_MODES)

    p = sub.add_parser('complete-check', help='Completeness of a simplicial space')
    p.add_argument('input')
    common(p, truncation=True, mode=EQUIVALENCE_MODES)

    p = sub.add_parser('realize', help='Realization of a simplicial space')
    p.add_argument('input')
    common(p)

    p = sub.add_parser('diagonal', help='Diagonal of a simplicial space')
    p.add_argument('input')
    common(p)

    p = sub.add_parser('c-nerve', help='C-nerve of a map of simplicial sets')
    p.add_argument('input')
    common(p, outer=True, budget=True)

    p = sub.add_parser('classify', help='Classification diagram of a relative category')
    p.add_argument('input')
    common(p, truncation=True, outer=True, budget=True)

    p = sub.add_parser('axiom-check', help='Run the axiom harness')
    p.add_argument('--all', action='store_true', help='Run every planned check')
    p.add_argument('--check', action='append', default=None, help='Run only this check (repeatable)')
    p.add_argument('--timings', action='store_true', help='Include timings in the output')
    p.add_argument('--workers', type=int, default=1, help='Worker threads')
    common(p, seed=True)

    p = sub.add_parser('interval-search', help='Search small rigid categories for the interval properties')
    p.add_argument('--max-objects', type=int, default=None)
    p.add_argument('--max-arrows', type=int, default=None)
    common(p, truncation=True)

    p = sub.add_parser('corpus-gen', help='Generate the category corpus and random relative categories')
    p.add_argument('--max-objects', type=int, default=None)
    p.add_argument('--max-arrows', type=int, default=None)
    common(p, budget=True, seed=True)

    p = sub.add_parser('validate', help='Validate a JSON document')
    p.add_argument('input')
    common(p)
    return parser


# -- inputs -----------------------------------------------------------------------------------------

def load_input(spec, kind=None):
    """A document path, or builtin:<name>[:<n>] for a builtin category."""
    if spec.startswith('builtin:'):
        parts = spec.split(':')
        n = int(parts[2]) if len(parts) > 2 else None
        return fincat.builtin(parts[1], n)
    return documents.load(spec, kind)


def _truncation(args):
    return get_setting('truncation', 'inner') if args.truncation is None else args.truncation


def _as_sset(value, args):
    if isinstance(value, fincat.FinCategory):
        return sset.nerve(value, _truncation(args))
    return value


def jsonable(value):
    """Plain JSON values with a deterministic order for sets."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, simplex.SimplexMap):
        return str(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def result_document(command, parameters, result, verdict=None):
    document = {
        '$schema': documents.schema_tag('result'),
        'command': command,
        'parameters': jsonable(parameters),
    }
    if verdict is not None:
        document['verdict'] = verdict
    document['result'] = jsonable(result)
    return document


# -- subcommands ------------------------------------------------------------------------------------

def cmd_delta_hom(args):
    budget = args.budget if args.budget is not None else get_budget('enumeration')
    maps = simplex.enumerate_maps(args.n, args.m, budget)
    return OK, result_document('delta-hom', {'n': args.n, 'm': args.m, 'budget': budget},
                               {'count': len(maps), 'maps': [str(f) for f in maps]})


def cmd_delta_aut(args):
    max_degree = get_setting('truncation', 'automorphism_cap') if args.max_degree is None else args.max_degree
    budget = args.budget if args.budget is not None else get_budget('enumeration')
    autos = simplex.automorphisms(max_degree, budget)
    violations = simplex.cosimplicial_identity_violations(max_degree)
    return OK, result_document('delta-aut', {'max_degree': max_degree, 'budget': budget}, {
        'count': len(autos),
        'automorphisms': [{'name': a.name, 'permutations': a.permutations} for a in autos],
        'squares_to_identity': all(a.compose(a).is_identity for a in autos),
        'identity_violations': len(violations),
    })


def cmd_nerve(args):
    category = load_input(args.input)
    if not isinstance(category, fincat.FinCategory):
        raise DocumentError("nerve needs a category document")
    truncation = _truncation(args)
    return OK, documents.sset_document(sset.nerve(category, truncation), provenance={
        'construction': 'nerve', 'input': args.input, 'truncation': truncation})


def cmd_segal_check(args):
    value = load_input(args.input)
    mode = SEGAL_MODES[args.mode]
    if isinstance(value, sspace.SimplicialSpace):
        verdict = sspace.is_segal(value, mode)
        result = {'degree': verdict.degree, 'inner_degree': verdict.inner_degree, 'witness': verdict.witness}
    else:
        X = _as_sset(value, args)
        if not isinstance(X, sset.FinSSet):
            raise DocumentError("segal-check needs a simplicial set, space or category")
        verdict = sset.is_strict_segal(X)
        result = {'degree': verdict.degree, 'witness': verdict.witness}
    status = 'segal' if verdict else 'not segal'
    return (OK if verdict else CHECK_FAILED), result_document(
        'segal-check', {'input': args.input, 'mode': args.mode, 'truncation': _truncation(args)}, result, status)


def cmd_complete_check(args):
    value = load_input(args.input)
    if isinstance(value, fincat.FinCategory):
        value = sspace.discrete_levels(sset.nerve(value, _truncation(args)))
    elif isinstance(value, sset.FinSSet):
        value = sspace.discrete_levels(value)
    if not isinstance(value, sspace.SimplicialSpace):
        raise DocumentError("complete-check needs a space, simplicial set or category")
    verdict = sspace.is_complete(value, EQUIVALENCE_MODES[args.mode])
    status = 'complete' if verdict else 'incomplete'
    return (OK if verdict else CHECK_FAILED), result_document(
        'complete-check', {'input': args.input, 'mode': args.mode, 'truncation': _truncation(args)},
        verdict.details, status)


def _space_input(args):
    value = load_input(args.input)
    if not isinstance(value, sspace.SimplicialSpace):
        raise DocumentError(f"{args.command} needs a space document")
    return value


def _space_provenance(construction, args, X):
    return {'construction': construction, 'input': args.input,
            'outer': X.outer_truncation, 'inner': X.inner_truncation}


def cmd_realize(args):
    X = _space_input(args)
    return OK, documents.sset_document(realization.realize(X), provenance=_space_provenance('realize', args, X))


def cmd_diagonal(args):
    X = _space_input(args)
    return OK, documents.sset_document(realization.diagonal(X), provenance=_space_provenance('diagonal', args, X))


def _outer(args):
    return get_setting('truncation', 'outer') if args.outer is None else args.outer


def cmd_c_nerve(args):
    p = load_input(args.input, 'sset-map')
    budget = args.budget if args.budget is not None else get_budget('mapset_nodes')
    space = realization.c_nerve(p, _outer(args), budget)
    space.provenance.update({'input': args.input, 'budget': budget})
    return OK, documents.to_document(space)


def cmd_classify(args):
    value = load_input(args.input)
    if isinstance(value, fincat.FinCategory):
        value = fincat.with_isomorphisms(value)
    if not isinstance(value, fincat.RelCategory):
        raise DocumentError("classify needs a relative category or a category")
    budget = args.budget if args.budget is not None else get_budget('functors')
    space = sspace.classification_diagram(value, _outer(args), _truncation(args), budget)
    space.provenance.update({'input': args.input, 'outer': _outer(args), 'inner': _truncation(args),
                             'budget': budget})
    return OK, documents.to_document(space)


def cmd_axiom_check(args):
    if not args.all and not args.check:
        raise DocumentError("axiom-check needs --all or at least one --check")
    seed = get_seed() if args.seed is None else args.seed
    runner = harness.AxiomHarness(workers=args.workers, timings=args.timings, seed=seed)
    with contextlib.redirect_stdout(sys.stderr):
        runner.run(None if args.all else args.check)
        runner.print_compliance_summary()
    return (OK if runner.overall_status() == 'PASS' else CHECK_FAILED), runner.batch_document()


def _corpus_bounds(args):
    max_objects = get_setting('corpus', 'max_objects') if args.max_objects is None else args.max_objects
    max_arrows = get_setting('corpus', 'max_arrows') if args.max_arrows is None else args.max_arrows
    return max_objects, max_arrows


def cmd_interval_search(args):
    max_objects, max_arrows = _corpus_bounds(args)
    with contextlib.redirect_stdout(sys.stderr):
        report = harness.interval_uniqueness_search(max_objects, max_arrows, _truncation(args))
    return (OK if report.passed else CHECK_FAILED), result_document(
        'interval-search', {'max_objects': max_objects, 'max_arrows': max_arrows,
                            'truncation': _truncation(args)}, report.to_dict(), report.verdict)


def cmd_corpus_gen(args):
    max_objects, max_arrows = _corpus_bounds(args)
    seed = get_seed() if args.seed is None else args.seed
    budget = args.budget if args.budget is not None else get_budget('corpus_tables')
    corpus = fincat.generate_corpus(max_objects, max_arrows, budget)
    relcats = harness.default_corpus(seed).relcats
    return OK, result_document('corpus-gen', {'max_objects': max_objects, 'max_arrows': max_arrows,
                                              'budget': budget, 'seed': seed}, {
        'categories': [documents.to_document(C) for C in corpus],
        'relcategories': [documents.to_document(R) for R in relcats],
    })


def cmd_validate(args):
    document = documents.read_json(args.input)
    kind = documents.document_kind(document)
    value = documents.from_document(document, kind)
    summary = kind if isinstance(value, dict) else repr(value)
    return OK, result_document('validate', {'input': args.input}, {'kind': kind, 'summary': summary}, 'valid')


COMMANDS = {
    'delta-hom': cmd_delta_hom,
    'delta-aut': cmd_delta_aut,
    'nerve': cmd_nerve,
    'segal-check': cmd_segal_check,
    'complete-check': cmd_complete_check,
    'realize': cmd_realize,
    'diagonal': cmd_diagonal,
    'c-nerve': cmd_c_nerve,
    'classify': cmd_classify,
    'axiom-check': cmd_axiom_check,
    'interval-search': cmd_interval_search,
    'corpus-gen': cmd_corpus_gen,
    'validate': cmd_validate,
}


def error_document(exc):
    document = {
        '$schema': documents.schema_tag('error'),
        'error': type(exc).__name__,
        'message': str(exc),
    }
    if isinstance(exc, InvalidStructure) and exc.location:
        document['location'] = jsonable(exc.location)
    if isinstance(exc, DocumentError) and exc.line is not None:
        document['line'] = exc.line
        document['column'] = exc.column
    return document


def emit(document, out=None, stream=None):
    text = documents.dumps(document)
    if out:
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Wrote {out}")
    else:
        (stream or sys.stdout).write(text)


def run(argv=None, stream=None):
    """Parse argv, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    setup_logging(args.log_level)

    try:
        code, document = COMMANDS[args.command](args)
    except SegalKitError as exc:
        logger.error(f"{args.command} failed: {exc}")
        emit(error_document(exc), getattr(args, 'out', None), stream)
        return exc.exit_code
    except (FileNotFoundError, ValueError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        emit(error_document(exc), getattr(args, 'out', None), stream)
        return 2
    emit(document, args.out, stream)
    return code


def main():
    return run()


if __name__ == "__main__":
    sys.exit(main())
