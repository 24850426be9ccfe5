"""The public entry points document their arguments and results."""

import inspect

import pytest

from lz77em.codec.reader import read_parsing
from lz77em.codec.writer import write_parsing
from lz77em.decoders.empq import decode_empq
from lz77em.decoders.plainio import decode_plain
from lz77em.emkit.sort import em_sort
from lz77em.factorize import factorize_greedy
from lz77em.runner import run_bench

ENTRY_POINTS = [
    read_parsing,
    write_parsing,
    decode_empq,
    decode_plain,
    em_sort,
    factorize_greedy,
    run_bench,
]


@pytest.mark.parametrize("func", ENTRY_POINTS, ids=lambda f: f.__name__)
def test_args_and_returns(func):
    doc = inspect.getdoc(func)
    assert doc is not None
    assert "Args:" in doc
    assert "Returns:" in doc
    documented = doc.split("Args:", 1)[1].split("Returns:", 1)[0]
    for name in inspect.signature(func).parameters:
        assert f"{name}:" in documented, f"{func.__name__} does not document {name}"
