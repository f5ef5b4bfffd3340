#!/usr/bin/env python3
"""
Tests for graph document parsing and canonical serialization
"""
import json
import os
import sys

import numpy as np
import pytest

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from document_io import (canonicalize, document_from_dict, document_to_dict, document_to_graph,
                         format_float, graph_to_document, load_document, parse_document,
                         save_document, serialize_document)
from instances import builtin_instance, k7_graph
from models import DocumentError
from torus_core import count_faces, validate


@pytest.fixture
def k7_text():
    return serialize_document(builtin_instance("k7_uniform"))


def _k7_data(k7_text):
    return json.loads(k7_text)


def test_k7_document_parses_to_valid_graph(k7_text):
    graph, stresses = document_to_graph(parse_document(k7_text))
    assert validate(graph).is_valid
    assert (graph.num_vertices, graph.num_edges, count_faces(graph)) == (7, 21, 14)
    assert graph.name == "k7_uniform"
    assert set(stresses) == {"uniform", "scaled_uniform", "weird", "negative"}
    np.testing.assert_array_equal(stresses["uniform"], np.ones(21))


def test_round_trip_is_byte_stable(k7_text):
    assert serialize_document(parse_document(k7_text)) == k7_text
    assert canonicalize(k7_text) == k7_text


def test_canonicalize_reorders_and_reformats(k7_text):
    data = _k7_data(k7_text)
    shuffled = json.dumps(dict(reversed(list(data.items()))), indent=4)
    assert canonicalize(shuffled) == k7_text


def test_canonical_layout(k7_text):
    lines = k7_text.splitlines()
    assert k7_text.endswith("\n")
    assert lines[0] == "{"
    assert '    {"head": 1, "shift": [0, 0], "tail": 0},' in lines
    keys = [line.split('"')[1] for line in lines if line.startswith('  "')]
    assert keys == sorted(keys)


def test_missing_rotation_is_derived(k7_text):
    data = _k7_data(k7_text)
    del data["rotation"]
    graph, _ = document_to_graph(document_from_dict(data))
    assert graph.rotation == k7_graph().rotation


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["edges"][0].update(shift=[0.5, 0]), "Invalid integer"),
    (lambda d: d["edges"][0].update(head=7), "out of range"),
    (lambda d: d["rotation"][0].append(d["rotation"][0][0]), "appears twice"),
    (lambda d: d["rotation"][1].append(99), "out of range"),
    (lambda d: d.update(version=2), "Unsupported document version"),
    (lambda d: d.update(colour="red"), "Unknown document keys"),
    (lambda d: d.pop("edges"), "missing 'edges'"),
    (lambda d: d["stresses"].update(short=[1.0, 2.0]), "one weight per edge"),
    (lambda d: d["vertices"][0].__setitem__(0, "0.5"), "Invalid numeric"),
    (lambda d: d["edges"][2].update(tail="1"), "Invalid integer"),
    (lambda d: d.update(torus=[[1.0, 0.0]]), "2x2"),
])
def test_invalid_documents(k7_text, mutate, message):
    data = _k7_data(k7_text)
    mutate(data)
    with pytest.raises(DocumentError, match=message):
        document_from_dict(data)


def test_malformed_text():
    with pytest.raises(DocumentError, match="Malformed"):
        parse_document('{"version": 1,')
    with pytest.raises(DocumentError):
        parse_document("[1, 2, 3]")


def test_integral_float_shift_is_accepted(k7_text):
    data = _k7_data(k7_text)
    data["edges"][0]["shift"] = [0.0, 0]
    document = document_from_dict(data)
    assert document.edges[0]["shift"] == [0, 0]


def test_format_float():
    assert format_float(1) == "1.0"
    assert format_float(-0.0) == "0.0"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1 / 3) == "0.33333333333333331"
    assert float(format_float(2 / 7)) == 2 / 7
    with pytest.raises(DocumentError):
        format_float(float("nan"))


def test_graph_document_round_trip():
    graph = k7_graph()
    document = graph_to_document(graph, {"uniform": np.ones(21)}, name="mine")
    assert document_to_dict(document)["name"] == "mine"
    again, stresses = document_to_graph(parse_document(serialize_document(document)))
    np.testing.assert_array_equal(again.vertex_coords, graph.vertex_coords)
    np.testing.assert_array_equal(again.dart_homology, graph.dart_homology)
    assert again.rotation == graph.rotation
    np.testing.assert_array_equal(stresses["uniform"], np.ones(21))


def test_save_and_load(tmp_path):
    document = builtin_instance("grid_2")
    path = tmp_path / "grid.json"
    save_document(document, str(path))
    loaded = load_document(str(path))
    assert serialize_document(loaded) == path.read_text(encoding="utf-8")
    assert loaded.name == "grid_2"
