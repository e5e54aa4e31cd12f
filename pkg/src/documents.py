"""JSON documents for categories, simplicial sets, maps, spaces and reports.

Every document carries a "$schema" tag "segalkit/<kind>/v1". Parsing checks
the JSON syntax, then the schema under docs/schemas, then the structure
itself (category laws, simplicial identities).
"""

from __future__ import annotations

import json
import logging
import os
from functools import lru_cache

from jsonschema import Draft202012Validator

from src import fincat
from src.exceptions import DocumentError
from src.fincat import FinCategory, Functor, RelCategory
from src.sset import FinSSet, SSetMap
from src.sspace import SimplicialSpace

logger = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(__file__), '../docs/schemas')

KINDS = ('category', 'relcategory', 'functor', 'sset', 'sset-map', 'space', 'batch', 'result', 'error')


def schema_tag(kind):
    return f"segalkit/{kind}/v1"


@lru_cache(maxsize=None)
def schema_validator(kind):
    path = os.path.join(SCHEMA_DIR, f"{kind}.schema.json")
    with open(path, 'r', encoding='utf-8') as f:
        return Draft202012Validator(json.load(f))


def validate_with_schema(document, kind):
    """Raise DocumentError listing every schema violation."""
    errors = [f"{list(e.absolute_path)}: {e.message}"
              for e in sorted(schema_validator(kind).iter_errors(document), key=str)]
    if errors:
        raise DocumentError(f"Document does not match {schema_tag(kind)}: " + '; '.join(errors))


def parse_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"Malformed JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}",
                            exc.lineno, exc.colno) from exc


def document_kind(document):
    if not isinstance(document, dict):
        raise DocumentError("A document must be a JSON object")
    tag = document.get('$schema')
    if tag is not None:
        for kind in KINDS:
            if tag == schema_tag(kind):
                return kind
        raise DocumentError(f"Unknown document tag {tag!r}")
    if 'outerTruncation' in document:
        return 'space'
    if 'truncation' in document and 'cells' in document:
        return 'sset'
    if 'objects' in document:
        return 'relcategory' if 'weq' in document else 'category'
    raise DocumentError("Cannot tell the document kind; add a \"$schema\" tag")


# -- writers --------------------------------------------------------------------------------------

def category_document(category, tagged=True):
    document = {'$schema': schema_tag('category')} if tagged else {}
    document.update({
        'name': category.name,
        'objects': list(category.objects),
        'arrows': [{'id': a.id, 'src': a.src, 'tgt': a.tgt} for a in category.arrows],
        'identities': {x: category.identities[x] for x in category.objects},
        'compose': [[g, f, gf] for (g, f), gf in sorted(category.composition.items())],
    })
    return document


def relcategory_document(relcat):
    document = category_document(relcat.base)
    document['$schema'] = schema_tag('relcategory')
    document['weq'] = [a for a in relcat.base.arrow_ids if a in relcat.weq]
    return document


def functor_document(functor):
    return {
        '$schema': schema_tag('functor'),
        'source': category_document(functor.source, tagged=False),
        'target': category_document(functor.target, tagged=False),
        'objectMap': {x: functor.object_map[x] for x in functor.source.objects},
        'arrowMap': {a: functor.arrow_map[a] for a in functor.source.arrow_ids},
    }


def sset_document(X, tagged=True, provenance=None):
    document = {'$schema': schema_tag('sset')} if tagged else {}
    document.update({
        'truncation': X.truncation,
        'cells': {str(k): list(X.cells[k]) for k in range(X.truncation + 1)},
        'faces': {str(k): {c: list(X.faces[k][c]) for c in X.cells[k]} for k in range(1, X.truncation + 1)},
        'degens': {str(k): {c: list(X.degens[k][c]) for c in X.cells[k]} for k in range(X.truncation)},
    })
    if provenance:
        document['provenance'] = {k: provenance[k] for k in sorted(provenance)}
    return document


def _mapping_document(f):
    return {str(k): {c: f.mapping[k][c] for c in f.source.cells[k]} for k in range(f.source.truncation + 1)}


def sset_map_document(f):
    return {
        '$schema': schema_tag('sset-map'),
        'source': sset_document(f.source, tagged=False),
        'target': sset_document(f.target, tagged=False),
        'mapping': _mapping_document(f),
    }


def space_document(X):
    return {
        '$schema': schema_tag('space'),
        'outerTruncation': X.outer_truncation,
        'levels': [sset_document(level, tagged=False) for level in X.levels],
        'outerFaces': [[_mapping_document(f) for f in X.faces[n]] for n in range(X.outer_truncation + 1)],
        'outerDegens': [[_mapping_document(s) for s in X.degens[n]] for n in range(X.outer_truncation + 1)],
        'provenance': {k: X.provenance[k] for k in sorted(X.provenance)},
    }


def to_document(value):
    if isinstance(value, RelCategory):
        return relcategory_document(value)
    if isinstance(value, FinCategory):
        return category_document(value)
    if isinstance(value, Functor):
        return functor_document(value)
    if isinstance(value, FinSSet):
        return sset_document(value)
    if isinstance(value, SSetMap):
        return sset_map_document(value)
    if isinstance(value, SimplicialSpace):
        return space_document(value)
    raise TypeError(f"No document form for {type(value).__name__}")


def dumps(document):
    """Serialize with a fixed layout so equal documents give equal bytes."""
    return json.dumps(document, indent=2, ensure_ascii=False) + '\n'


# -- readers ---------------------------------------------------------------------------------------

def category_from_document(document):
    return fincat.make_category(
        document['objects'],
        [(a['id'], a['src'], a['tgt']) for a in document['arrows']],
        document['identities'],
        [tuple(entry) for entry in document['compose']],
        name=document.get('name', ''),
    )


def sset_from_document(document):
    D = document['truncation']
    cells = [tuple(document['cells'].get(str(k), [])) for k in range(D + 1)]
    face_tables, degen_tables = document.get('faces', {}), document.get('degens', {})
    faces = [{}] + [{c: tuple(fs) for c, fs in face_tables.get(str(k), {}).items()} for k in range(1, D + 1)]
    degens = [{c: tuple(ss) for c, ss in degen_tables.get(str(k), {}).items()} for k in range(D)] + [{}]
    return FinSSet(D, tuple(cells), tuple(faces), tuple(degens)).validate()


def _mapping_from_document(mapping, source):
    return tuple(dict(mapping.get(str(k), {})) for k in range(source.truncation + 1))


def space_from_document(document):
    levels = [sset_from_document(level) for level in document['levels']]
    N = document['outerTruncation']
    if len(levels) != N + 1:
        raise DocumentError(f"Expected {N + 1} levels, got {len(levels)}")
    for key in ('outerFaces', 'outerDegens'):
        if len(document[key]) != N + 1:
            raise DocumentError(f"Expected {N + 1} entries in {key}, got {len(document[key])}")
    faces = [()] + [tuple(SSetMap(levels[n], levels[n - 1], _mapping_from_document(m, levels[n]))
                          for m in document['outerFaces'][n]) for n in range(1, N + 1)]
    degens = [tuple(SSetMap(levels[n], levels[n + 1], _mapping_from_document(m, levels[n]))
                    for m in document['outerDegens'][n]) for n in range(N)] + [()]
    return SimplicialSpace(tuple(levels), tuple(faces), tuple(degens),
                           dict(document.get('provenance', {}))).validate()


def from_document(document, kind=None):
    """Build and structurally validate the value a parsed document describes."""
    kind = kind or document_kind(document)
    validate_with_schema(document, kind)
    if kind == 'category':
        return category_from_document(document)
    if kind == 'relcategory':
        return RelCategory(category_from_document(document), frozenset(document['weq'])).validate()
    if kind == 'functor':
        return Functor(category_from_document(document['source']), category_from_document(document['target']),
                       document['objectMap'], document['arrowMap']).validate()
    if kind == 'sset':
        return sset_from_document(document)
    if kind == 'sset-map':
        source, target = sset_from_document(document['source']), sset_from_document(document['target'])
        return SSetMap(source, target, _mapping_from_document(document['mapping'], source)).validate()
    if kind == 'space':
        return space_from_document(document)
    # batch, result and error documents are output only and stay plain data
    return document


def loads(text, kind=None):
    return from_document(parse_json(text), kind)


def read_json(path):
    if not os.path.exists(path):
        raise DocumentError(f"Input document not found: {path}")
    logger.debug(f"Loading document {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_json(f.read())


def load(path, kind=None):
    return from_document(read_json(path), kind)
