"""
JSON codecs for tuples, functionals, loops and points.

Complex numbers are written as [re, im] pairs; a bare real number is also
accepted on input. The path "-" means stdin / stdout.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from models.forms import LinearFunctional
from models.geometry import Loop
from models.pencil import MatrixTuple

logger = logging.getLogger(__name__)

STDIO = '-'


def encode_complex(value) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def decode_complex(item) -> complex:
    if isinstance(item, (int, float)):
        return complex(item)
    if isinstance(item, (list, tuple)) and len(item) == 2:
        return complex(float(item[0]), float(item[1]))
    raise ValueError(f"Expected a number or an [re, im] pair, got {item!r}")


def encode_vector(vector) -> List[List[float]]:
    return [encode_complex(c) for c in np.asarray(vector).ravel()]


def decode_vector(items) -> np.ndarray:
    return np.array([decode_complex(c) for c in items], dtype=complex)


def encode_matrix(matrix) -> List[List[List[float]]]:
    return [encode_vector(row) for row in np.asarray(matrix)]


def decode_matrix(rows) -> np.ndarray:
    matrix = np.array([decode_vector(row) for row in rows], dtype=complex)
    if matrix.ndim != 2:
        raise ValueError("Matrix rows have unequal lengths")
    return matrix


def read_json(path: Union[str, Path]) -> Any:
    """Load JSON from a file or from stdin when path is '-'."""
    if str(path) == STDIO:
        return json.load(sys.stdin)
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_json(data: Any, path: Union[str, Path] = STDIO) -> None:
    """Write JSON to a file or to stdout when path is '-'."""
    text = json.dumps(data, indent=2, sort_keys=False)
    if str(path) == STDIO:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text + "\n")
    logger.info(f"Wrote {path}")


def tuple_to_dict(A: MatrixTuple) -> Dict:
    return {
        'k': A.k,
        'n': A.n,
        'label': A.label,
        'matrices': [encode_matrix(m) for m in A.matrices],
    }


def tuple_from_dict(data: Dict) -> MatrixTuple:
    """
    Decode {"k": int, "n": int, "matrices": [...]} and check the declared sizes.
    """
    try:
        matrices = [decode_matrix(m) for m in data['matrices']]
    except KeyError as e:
        raise ValueError(f"Tuple JSON is missing {e}") from e
    A = MatrixTuple.from_matrices(matrices, label=data.get('label', ''))
    if 'k' in data and int(data['k']) != A.k:
        raise ValueError(f"Declared k={data['k']} but matrices are {A.k}x{A.k}")
    if 'n' in data and int(data['n']) != A.n:
        raise ValueError(f"Declared n={data['n']} but there are {A.n_plus_1} matrices")
    return A


def load_tuple(path: Union[str, Path]) -> MatrixTuple:
    return tuple_from_dict(read_json(path))


def load_functional(path: Union[str, Path]) -> LinearFunctional:
    """
    Decode {label, weight} or a shortcut {"kind": "trace" | "normalized_trace", "k": int}.
    """
    data = read_json(path)
    kind = data.get('kind')
    if kind == 'trace':
        return LinearFunctional.full_trace(int(data['k']))
    if kind == 'normalized_trace':
        return LinearFunctional.normalized_trace(int(data['k']))
    if 'diagonal' in data:
        return LinearFunctional.from_diagonal(decode_vector(data['diagonal']), label=data.get('label', ''),
                                              central=bool(data.get('central', False)),
                                              trace=bool(data.get('trace', False)))
    return LinearFunctional(
        decode_matrix(data['weight']),
        label=data.get('label', ''),
        claimed_central=bool(data.get('central', False)),
        claimed_trace=bool(data.get('trace', False)),
    )


def load_loop(path: Union[str, Path]) -> Loop:
    data = read_json(path)
    if 'center' in data:
        data = dict(data, center=encode_vector(decode_vector(data['center'])),
                    direction=encode_vector(decode_vector(data['direction'])))
    if 'vertices' in data:
        data = dict(data, vertices=[encode_vector(decode_vector(v)) for v in data['vertices']])
    return Loop.from_dict(data)
