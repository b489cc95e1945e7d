"""
PSVMMAP1 container for a fitted SDRMap.

Layout (little endian, no padding):

    offset  size        field
    0       8           magic b"PSVMMAP1"
    8       8 * 6       int64 version (=1), kernel code (0 gaussian, 1 linear), n, p, k, d
    56      8           float64 kernel gamma
    64      8 * n * p   float64 training points (standardised), row major
    ...     8 * p       float64 column means
    ...     8 * p       float64 column sds
    ...     8 * n * k   float64 Psi, row major
    ...     8 * k       float64 eigenvalues
    ...     8 * k * d   float64 V, row major
    ...     8           int64 flagged (0 / 1)
    ...     8           int64 truncated (0 / 1), set when eigenpairs fell below the floor

The Gram matrix and its centered form are recomputed from the stored training
points on read; every array needed by evaluate_summary is stored bit-exactly.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from errors.errors import SchemaError
from kernel_core.kernel_core import CenteredGram, center_gram, gram
from psvm.psvm import SDRMap
from pydantic_models.models import KernelSpec

logger = logging.getLogger(__name__)

MAGIC = b"PSVMMAP1"
FORMAT_VERSION = 1
KERNEL_CODES = {"gaussian": 0, "linear": 1}
HEADER = struct.Struct("<6qd")


def _as_le(array: np.ndarray) -> bytes:
    return np.ascontiguousarray(array, dtype="<f8").tobytes()


def encode_map(sdr_map: SDRMap) -> bytes:
    n, p = sdr_map.training_points.shape
    header = HEADER.pack(
        FORMAT_VERSION,
        KERNEL_CODES[sdr_map.kernel.kind],
        n,
        p,
        sdr_map.k,
        sdr_map.d,
        sdr_map.kernel.gamma,
    )
    parts = [
        MAGIC,
        header,
        _as_le(sdr_map.training_points),
        _as_le(sdr_map.col_means),
        _as_le(sdr_map.col_sds),
        _as_le(sdr_map.gram.psi),
        _as_le(sdr_map.gram.eigenvalues),
        _as_le(sdr_map.V),
        struct.pack("<2q", int(sdr_map.flagged), int(sdr_map.gram.truncated)),
    ]
    return b"".join(parts)


def decode_map(payload: bytes) -> SDRMap:
    if payload[: len(MAGIC)] != MAGIC:
        raise SchemaError("not a PSVMMAP1 container: bad magic header")
    offset = len(MAGIC)
    if len(payload) < offset + HEADER.size:
        raise SchemaError("PSVMMAP1 container truncated in header")
    version, kernel_code, n, p, k, d, gamma = HEADER.unpack_from(payload, offset)
    offset += HEADER.size
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported PSVMMAP1 version {version}")
    kinds = {code: kind for kind, code in KERNEL_CODES.items()}
    if kernel_code not in kinds:
        raise SchemaError(f"unknown kernel code {kernel_code}")

    expected = offset + 8 * (n * p + 2 * p + n * k + k + k * d) + 16
    if len(payload) != expected:
        raise SchemaError(f"PSVMMAP1 container has {len(payload)} bytes, expected {expected}")

    def take(*shape) -> np.ndarray:
        nonlocal offset
        count = int(np.prod(shape))
        array = np.frombuffer(payload, dtype="<f8", count=count, offset=offset)
        offset += 8 * count
        return array.astype(float).reshape(shape)

    training = take(n, p)
    col_means = take(p)
    col_sds = take(p)
    psi = take(n, k)
    eigenvalues = take(k)
    V = take(k, d)
    flagged, truncated = struct.unpack_from("<2q", payload, offset)

    kernel = KernelSpec(kind=kinds[kernel_code], gamma=gamma)
    K = gram(kernel, training)
    centered = CenteredGram(K=K, S=center_gram(K), eigenvalues=eigenvalues, psi=psi, truncated=bool(truncated))
    return SDRMap(
        kernel=kernel,
        training_points=training,
        col_means=col_means,
        col_sds=col_sds,
        gram=centered,
        V=V,
        flagged=bool(flagged),
    )


def write_map(sdr_map: SDRMap, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_map(sdr_map))
    logger.info(f"Wrote PSVMMAP1 container to {path} (n={sdr_map.n_train}, k={sdr_map.k}, d={sdr_map.d})")
    return path


def read_map(path: Union[str, Path]) -> SDRMap:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"map file {path} does not exist")
    return decode_map(path.read_bytes())
