"""File formats.

Binary matrix (``.skmm``), all little-endian::

    b"SKMM" | version: u16 | n_rows: u64 | n_cols: u64 | row-major float64 payload

CSV matrices are accepted on input when the first line is a
``col_0,col_1,...`` header.
"""

import json
import struct

import numpy as np

from .errors import InvalidArgument

MAGIC = b"SKMM"
VERSION = 1
_HEADER = struct.Struct("<4sHQQ")


def write_matrix(path, matrix):
    matrix = np.asarray(matrix, dtype="<f8")
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if matrix.ndim != 2:
        raise InvalidArgument("only 1-d and 2-d arrays can be written")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, matrix.shape[0], matrix.shape[1]))
        fh.write(np.ascontiguousarray(matrix).tobytes(order="C"))


def _read_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise InvalidArgument(f"{path}: truncated header")
        magic, version, rows, cols = _HEADER.unpack(head)
        if magic != MAGIC:
            raise InvalidArgument(f"{path}: not an SKMM matrix file")
        if version != VERSION:
            raise InvalidArgument(f"{path}: unsupported format version {version}")
        payload = fh.read()
    if len(payload) != rows * cols * 8:
        raise InvalidArgument(f"{path}: payload has {len(payload)} bytes, expected {rows * cols * 8}")
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    if not header or any(h != f"col_{i}" for i, h in enumerate(header)):
        raise InvalidArgument(f"{path}: CSV header must be col_0,col_1,...")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=np.float64)
    if data.shape[1] != len(header):
        raise InvalidArgument(f"{path}: rows do not match the header width")
    return data


def read_matrix(path):
    path = str(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == MAGIC:
        return _read_binary(path)
    return _read_csv(path)


def read_vector(path):
    M = read_matrix(path)
    if M.shape[1] != 1 and M.shape[0] != 1:
        raise InvalidArgument(f"{path}: expected a single column, got shape {M.shape}")
    return M.ravel()


def dump_json(obj, path=None):
    """Canonical JSON: sorted keys, fixed indent, trailing newline."""
    text = json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
