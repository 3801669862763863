"""
Utility functions for joinmat.

Includes configuration loading and parsing of the CLI literals: rational
numbers, integer and element lists, and function specifications.
"""

import copy
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from src.errors import InputError
from src.poset_core import (
    ElementId,
    FinitePoset,
    PosetFunction,
    constant_function,
    identity_function,
    linear_function,
    parse_element_token,
    to_fraction,
)


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from YAML file, filling gaps from the defaults."""
    if config_path:
        config_file = Path(config_path)
    else:
        # Look for config.yaml in current directory or parent
        config_file = Path('config.yaml')
        if not config_file.exists():
            config_file = Path(__file__).parent.parent / 'config.yaml'

    config = get_default_config()
    if config_file.exists():
        with open(config_file, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise InputError(f"configuration file {config_file} must hold a mapping")
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(config.get(section), dict):
                config[section].update(values)
            else:
                config[section] = values
    elif config_path:
        raise InputError(f"configuration file not found: {config_file}")
    return config


def get_default_config() -> Dict[str, Any]:
    """Return default configuration values."""
    return copy.deepcopy({
        'engine': {
            'cauchy_binet_cap': 1000000,
            'verify_inverse': False,
            'mobius_of_generated': False,
        },
        'verify': {
            'trials': 200,
            'seed': 42,
            'max_elements': 8,
            'max_subset_size': 5,
            'divisor_bound': 360,
            'boolean_rank': 3,
            'numerator_range': 9,
            'denominator_max': 5,
        },
        'logging': {
            'level': 'WARNING',
        },
    })


def parse_rational(text: str):
    """`p/q` or an integer with optional leading `-`; no floating point."""
    return to_fraction(str(text))


def parse_int_list(text: str) -> List[int]:
    """Comma-separated positive decimal integers, e.g. `1,2,3,4,6,12`."""
    values = []
    for token in _split(text):
        if not token.isdigit():
            raise InputError(f"expected a positive integer, got {token!r}")
        value = int(token)
        if value < 1:
            raise InputError(f"expected a positive integer, got {token!r}")
        values.append(value)
    return values


def parse_chain(text: str) -> List[int]:
    """Comma-separated strictly increasing integers (negatives allowed)."""
    values = []
    for token in _split(text):
        try:
            values.append(int(token))
        except ValueError:
            raise InputError(f"expected an integer, got {token!r}") from None
    if any(a >= b for a, b in zip(values, values[1:])):
        raise InputError("chain elements must be strictly increasing")
    return values


def parse_element_list(text: str) -> List[ElementId]:
    return [parse_element_token(token) for token in _split(text)]


def _split(text: str) -> List[str]:
    tokens = [token.strip() for token in str(text).split(',')]
    if not tokens or any(not token for token in tokens):
        raise InputError(f"malformed list {text!r}")
    return tokens


def parse_function(spec: str, poset: FinitePoset) -> PosetFunction:
    """Built-ins `identity`, `constant:<r>`, `linear:t=<r>`, or a values file."""
    spec = spec.strip()
    if spec == 'identity':
        return identity_function(poset)
    if spec.startswith('constant:'):
        return constant_function(poset, parse_rational(spec[len('constant:'):]))
    if spec.startswith('linear:'):
        return linear_function(poset, parse_linear_shift(spec[len('linear:'):]))
    path = Path(spec)
    if path.exists():
        return load_function_file(path)
    raise InputError(f"unknown function {spec!r}; use identity, constant:<r>, linear:t=<r> or a file")


def parse_linear_shift(text: str):
    """Accepts `t=<r>` or a bare rational."""
    text = text.strip()
    if text.startswith('t='):
        text = text[2:]
    return parse_rational(text)


def load_function_file(path: Path) -> PosetFunction:
    """Lines of `<element> <rational>`; blank lines and `#` comments ignored."""
    values: Dict[ElementId, Any] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected '<element> <rational>'")
            element = parse_element_token(parts[0])
            if element in values:
                raise InputError(f"{path}:{lineno}: duplicate value for {element!r}")
            values[element] = parse_rational(parts[1])
    return PosetFunction(values, name=path.stem)
