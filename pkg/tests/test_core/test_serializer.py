import enum
from core.compat import StrEnum
import math
from fractions import Fraction

import numpy as np
import pytest

from core.serializer import DataclassSerializer, csv_text, dumps_json, format_float, to_plain
from energy.models import CoronaTree


class Color(StrEnum):
    RED = 'red'


def test_tree_serializer_serialize(tree_serializer):
    dto = tree_serializer.serialize(CoronaTree(root=3, layer=1, tree=(3, 7), bce=(7,)))
    assert dto == {'root': 3, 'layer': 1, 'tree': [3, 7], 'bce': [7]}


def test_tree_serializer_deserialize(tree_serializer):
    tree = tree_serializer.deserialize({'root': 3, 'layer': 1, 'tree': (3,), 'bce': ()})
    assert isinstance(tree, CoronaTree)
    assert tree.root == 3
    assert tree.tree == (3,)


@pytest.mark.parametrize('trees_number', [2])
def test_tree_serializer_flat_serialize(tree_serializer, trees, trees_number):
    trees_dto = tree_serializer.flat.serialize(trees)
    assert len(trees_dto) == len(trees)
    for tree, dto in zip(trees, trees_dto):
        assert dto['root'] == tree.root
        assert dto['tree'] == list(tree.tree)


@pytest.mark.parametrize('trees_number', [2])
def test_tree_serializer_flat_deserialize(tree_serializer, trees_dto, trees_number):
    trees = tree_serializer.flat.deserialize(trees_dto)
    assert len(trees) == len(trees_dto)
    for tree, dto in zip(trees, trees_dto):
        assert isinstance(tree, CoronaTree)
        assert tree.root == dto['root']


def test_dataclass_serializer_needs_a_dataclass():
    with pytest.raises(TypeError):
        DataclassSerializer(dict)


def test_to_plain_flattens_numeric_types():
    value = {'f': Fraction(1, 4), 'a': np.arange(3), 's': np.float64(0.5), 'e': Color.RED, 'set': {3, 1}}
    assert to_plain(value) == {'f': 0.25, 'a': [0, 1, 2], 's': 0.5, 'e': 'red', 'set': [1, 3]}


def test_dumps_json_is_sorted_and_finite():
    assert dumps_json({'b': math.inf, 'a': [-math.inf, math.nan]}) == '{"a": ["-inf", "nan"], "b": "inf"}'


def test_csv_text_with_echo():
    text = csv_text(['x', 'n'], [(0.1, 2)], ['SEED=0'])
    assert text == '# SEED=0\nx,n\n0.10000000000000001,2\n'
    assert format_float(0.5) == '0.5'
