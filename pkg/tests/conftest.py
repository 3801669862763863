"""
Pytest configuration and shared fixtures.
"""

import shutil
import tempfile
from pathlib import Path

import pytest
from hypothesis import settings

from src.divisor_tools import divisor_lattice
from src.poset_core import OrderedSubset, build_poset, identity_function, integer_chain

settings.register_profile("joinmat", max_examples=40, deadline=None)
settings.load_profile("joinmat")


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def diamond():
    """bot < a, b < top with a and b incomparable."""
    return build_poset(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )


@pytest.fixture
def vee():
    """bot below two maximal elements; not a lattice."""
    return build_poset(["bot", "a", "b"], [("bot", "a"), ("bot", "b")])


@pytest.fixture
def d6():
    return divisor_lattice(6)


@pytest.fixture
def d12():
    return divisor_lattice(12)


@pytest.fixture
def chain3():
    """The segment [1, 3] of the integers."""
    return integer_chain(1, 3)


@pytest.fixture
def chain_set(chain3):
    return OrderedSubset.of(chain3, [1, 2, 3])


@pytest.fixture
def identity6(d6):
    return identity_function(d6)


@pytest.fixture
def diamond_file(temp_dir):
    path = temp_dir / "diamond.poset"
    path.write_text(
        "# a four-element lattice\n"
        "elem bot\nelem a\nelem b\nelem top\n"
        "rel bot a\nrel bot b\nrel a top\nrel b top\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def diamond_values_file(temp_dir):
    path = temp_dir / "values.txt"
    path.write_text("bot 1\na 2\nb 3\ntop 4  # the top\n", encoding="utf-8")
    return path
