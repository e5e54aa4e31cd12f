"""
Tests for JSON documents: writers, readers, schema checks and error locations.
"""

import json

import pytest

from src import documents, fincat, sset, sspace
from src.exceptions import DocumentError, InvalidStructure


def round_trip(value, kind=None):
    return documents.loads(documents.dumps(documents.to_document(value)), kind)


class TestRoundTrips:
    """Values survive a write and a read."""

    def test_categories(self, named_categories):
        for name, A in named_categories.items():
            back = round_trip(A)
            assert back == A, f"{name} changed after a round trip"
            assert back.name == A.name

    def test_relative_category(self):
        R = fincat.with_isomorphisms(fincat.bar_interval())
        assert round_trip(R) == R

    def test_functor(self):
        witness = fincat.are_equivalent(fincat.bar_interval(), fincat.point()).witness
        assert round_trip(witness) == witness

    def test_sset_and_map(self):
        X = sset.nerve(fincat.bar_interval(), 2)
        assert round_trip(X) == X
        m = sset.cell_as_map(X, 1, 'f')
        assert round_trip(m) == m

    def test_space(self):
        X = sspace.h_space(1, 2, 1)
        back = round_trip(X)
        assert back == X
        assert back.provenance == {'construction': 'h_space', 'n': 1}

    def test_dumps_is_stable(self):
        text = documents.dumps(documents.to_document(fincat.linear(2)))
        assert text == documents.dumps(json.loads(text))
        assert text.endswith('\n')


class TestErrors:
    """Malformed, schema-invalid and structurally invalid documents."""

    def test_malformed_json_location(self):
        with pytest.raises(DocumentError) as exc:
            documents.loads('{\n  "objects": [}')
        assert (exc.value.line, exc.value.column) == (2, 15)

    def test_schema_violation(self):
        with pytest.raises(DocumentError) as exc:
            documents.loads(json.dumps({'$schema': 'segalkit/category/v1', 'objects': ['x']}))
        assert 'segalkit/category/v1' in str(exc.value)
        assert "'arrows' is a required property" in str(exc.value)

    def test_unknown_tag(self):
        with pytest.raises(DocumentError):
            documents.document_kind({'$schema': 'segalkit/unknown/v9'})

    def test_kind_inference(self):
        assert documents.document_kind({'truncation': 0, 'cells': {}}) == 'sset'
        assert documents.document_kind({'objects': [], 'weq': []}) == 'relcategory'
        with pytest.raises(DocumentError):
            documents.document_kind({'name': 'nothing'})

    def test_broken_simplicial_identity(self, broken_sset):
        text = documents.dumps(documents.sset_document(broken_sset))
        with pytest.raises(InvalidStructure) as exc:
            documents.loads(text)
        assert exc.value.location['identity'] == 'd0s0'

    def test_category_law_violation(self):
        document = documents.category_document(fincat.cyclic_group(2))
        document['compose'] = [entry for entry in document['compose'] if entry[:2] != ['g1', 'g1']]
        with pytest.raises(InvalidStructure) as exc:
            documents.from_document(document)
        assert exc.value.location == {'pair': ['g1', 'g1']}

    @pytest.mark.parametrize('key', ['outerFaces', 'outerDegens'])
    def test_space_with_short_structure_maps(self, key):
        document = documents.space_document(sspace.h_space(1, 2, 1))
        document[key] = document[key][:2]
        with pytest.raises(DocumentError, match=key):
            documents.from_document(document)

    def test_sset_provenance_is_sorted(self):
        document = documents.sset_document(sset.point(0), provenance={'outer': 1, 'construction': 'realize'})
        assert list(document['provenance']) == ['construction', 'outer']
        documents.validate_with_schema(document, 'sset')
        assert documents.from_document(document) == sset.point(0)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError):
            documents.read_json(str(tmp_path / 'missing.json'))

    def test_no_document_form(self):
        with pytest.raises(TypeError):
            documents.to_document(object())

    def test_load_from_path(self, tmp_path):
        path = tmp_path / 'edge.json'
        path.write_text(documents.dumps(documents.to_document(sset.standard(1, 2))), encoding='utf-8')
        assert documents.load(str(path), 'sset') == sset.standard(1, 2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
