"""Lagrange and repetition encoding of a chunked dataset over GF(p).

The master splits the data into ``k`` chunks, encodes them into ``n * r``
shards (worker ``i`` holds shards ``(i-1)r+1 .. ir``), workers apply a
polynomial work function to their shards, and any ``K*`` results let the
master recover ``f(X_1), ..., f(X_k)``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .field import (
    DEFAULT_PRIME,
    FieldError,
    is_prime,
    lagrange_basis,
    mod_matmul,
    poly_eval,
)

LAGRANGE = "lagrange"
REPETITION = "repetition"


class CodingError(ValueError):
    pass


class NotDecodable(CodingError):
    pass


def recovery_threshold(n: int, r: int, k: int, deg_f: int) -> int:
    """Smallest number of shard results from which any ``f(X_j)`` is recoverable."""
    if min(n, r, k, deg_f) < 1:
        raise CodingError("n, r, k and deg_f must all be >= 1")
    nr = n * r
    if nr >= k * deg_f - 1:
        return (k - 1) * deg_f + 1
    return nr - nr // k + 1


@dataclass(frozen=True)
class CodingScheme:
    n: int
    r: int
    k: int
    deg_f: int
    p: int
    mode: str
    beta: tuple[int, ...]
    alpha: tuple[int, ...]
    recovery_threshold: int

    @property
    def num_shards(self) -> int:
        return self.n * self.r

    def owner(self, v: int) -> int:
        """Worker (1-based) that stores shard ``v`` (1-based)."""
        return (v - 1) // self.r + 1

    def shard_indices(self, worker: int, load: int) -> list[int]:
        """Shards worker ``worker`` evaluates when assigned ``load`` evaluations."""
        start = (worker - 1) * self.r + 1
        return list(range(start, start + min(load, self.r)))

    def source_chunk(self, v: int) -> int:
        """Repetition mode: 1-based chunk held by shard ``v``."""
        return (v - 1) % self.k + 1


def make_scheme(n: int, r: int, k: int, deg_f: int, p: int = DEFAULT_PRIME) -> CodingScheme:
    """Build the coding scheme with beta_j = j-1 and alpha_v = v-1."""
    K = recovery_threshold(n, r, k, deg_f)
    nr = n * r
    if not is_prime(p):
        raise CodingError(f"modulus {p} is not prime")
    if p <= max(k, nr):
        raise CodingError(f"field too small: need p > max(k, n*r) = {max(k, nr)}, got {p}")
    if K > nr:
        raise CodingError(
            f"recovery threshold {K} exceeds the {nr} stored shards; "
            "the computation can never be decoded"
        )
    mode = LAGRANGE if nr >= k * deg_f - 1 else REPETITION
    return CodingScheme(
        n=n, r=r, k=k, deg_f=deg_f, p=p, mode=mode,
        beta=tuple(range(k)), alpha=tuple(range(nr)),
        recovery_threshold=K,
    )


@dataclass
class Dataset:
    """``k`` chunks of ``chunk_len`` field elements, stored row per chunk."""

    chunks: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        self.chunks = np.asarray(self.chunks, dtype=np.int64)
        if self.chunks.ndim != 2 or self.chunks.shape[1] < 1:
            raise CodingError("dataset must be a 2-D array with chunk_len >= 1")
        if (self.chunks < 0).any() or (self.chunks >= self.p).any():
            raise CodingError("dataset entries must lie in [0, p)")

    @property
    def k(self) -> int:
        return self.chunks.shape[0]

    @property
    def chunk_len(self) -> int:
        return self.chunks.shape[1]

    @classmethod
    def random(cls, k: int, chunk_len: int, rng: np.random.Generator, p: int = DEFAULT_PRIME):
        return cls(rng.integers(0, p, size=(k, chunk_len), dtype=np.int64), p)


@dataclass(frozen=True)
class EncodedShard:
    index: int
    owner: int
    payload: np.ndarray = field(repr=False)


def encoding_matrix(scheme: CodingScheme) -> np.ndarray:
    """(n*r) x k matrix whose row v holds the Lagrange weights of u(alpha_v)."""
    p = scheme.p
    basis = np.array(lagrange_basis(scheme.beta, p), dtype=np.int64)  # k x k, row j = L_j
    powers = np.empty((scheme.num_shards, scheme.k), dtype=np.int64)
    for v, a in enumerate(scheme.alpha):
        acc = 1
        for t in range(scheme.k):
            powers[v, t] = acc
            acc = acc * a % p
    return mod_matmul(powers, basis.T, p)


def encode(data: Dataset, scheme: CodingScheme) -> list[EncodedShard]:
    if data.k != scheme.k:
        raise CodingError(f"scheme expects {scheme.k} chunks, dataset has {data.k}")
    if data.p != scheme.p:
        raise CodingError("dataset and scheme use different moduli")
    if scheme.mode == LAGRANGE:
        payloads = mod_matmul(encoding_matrix(scheme), data.chunks, scheme.p)
    else:
        rows = [scheme.source_chunk(v) - 1 for v in range(1, scheme.num_shards + 1)]
        payloads = data.chunks[rows].copy()
    return [
        EncodedShard(index=v, owner=scheme.owner(v), payload=payloads[v - 1])
        for v in range(1, scheme.num_shards + 1)
    ]


@dataclass(frozen=True)
class WorkFunction:
    """Either ``x -> x . w`` (kind ``linear``) or an elementwise polynomial.

    For ``poly`` the coefficients are lowest degree first and the last one
    must be nonzero.
    """

    kind: str
    weights: tuple[int, ...] = ()
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind == "linear":
            if not self.weights:
                raise CodingError("linear work function needs a weight vector")
        elif self.kind == "poly":
            if len(self.coeffs) < 2 or self.coeffs[-1] == 0:
                raise CodingError("polynomial work function needs degree >= 1")
        else:
            raise CodingError(f"unknown work function kind {self.kind!r}")

    @property
    def degree(self) -> int:
        return 1 if self.kind == "linear" else len(self.coeffs) - 1

    @classmethod
    def linear(cls, weights: Sequence[int]) -> "WorkFunction":
        return cls("linear", weights=tuple(int(w) for w in weights))

    @classmethod
    def polynomial(cls, coeffs: Sequence[int]) -> "WorkFunction":
        return cls("poly", coeffs=tuple(int(c) for c in coeffs))

    @classmethod
    def random(cls, deg: int, chunk_len: int, rng: np.random.Generator, p: int = DEFAULT_PRIME):
        """Fresh work function of the given degree (linear map when deg == 1)."""
        if deg == 1:
            return cls.linear(rng.integers(0, p, size=chunk_len))
        coeffs = list(rng.integers(0, p, size=deg))
        coeffs.append(int(rng.integers(1, p)))
        return cls.polynomial(coeffs)

    def __call__(self, x: np.ndarray, p: int = DEFAULT_PRIME):
        x = np.asarray(x, dtype=np.int64)
        if self.kind == "linear":
            if x.shape[-1] != len(self.weights):
                raise CodingError(
                    f"dimension mismatch: payload {x.shape[-1]}, weights {len(self.weights)}"
                )
            w = np.array(self.weights, dtype=np.int64) % p
            return int(mod_matmul(x.reshape(1, -1), w.reshape(-1, 1), p)[0, 0])
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = (acc * x + c % p) % p
        return acc


def apply_function(f: WorkFunction, shard: EncodedShard, p: int = DEFAULT_PRIME):
    return f(shard.payload, p)


def decode(results: Sequence[tuple[int, object]], scheme: CodingScheme, f: WorkFunction) -> list:
    """Recover ``[f(X_1), ..., f(X_k)]`` from ``(shard index, f(shard))`` pairs."""
    K = scheme.recovery_threshold
    indices = [v for v, _ in results]
    if len(set(indices)) != len(indices):
        raise CodingError("duplicate shard index in results")
    if len(results) < K:
        raise NotDecodable(f"not decodable: {len(results)} results, need {K}")
    if f.degree > scheme.deg_f:
        raise CodingError(f"work function degree {f.degree} exceeds scheme degree {scheme.deg_f}")

    if scheme.mode == REPETITION:
        by_chunk: dict[int, object] = {}
        for v, value in sorted(results, key=lambda t: t[0]):
            by_chunk.setdefault(scheme.source_chunk(v), value)
        assert len(by_chunk) == scheme.k, "pigeonhole violated: a chunk has no received copy"
        return [by_chunk[j] for j in range(1, scheme.k + 1)]

    p = scheme.p
    chosen = sorted(results, key=lambda t: t[0])[:K]
    scalar = np.ndim(chosen[0][1]) == 0
    xs = [scheme.alpha[v - 1] for v, _ in chosen]
    values = np.array([np.atleast_1d(val) for _, val in chosen], dtype=np.int64) % p  # K x c
    basis = np.array(lagrange_basis(xs, p), dtype=np.int64)  # K x K, row v = L_v coeffs
    coeffs = mod_matmul(basis.T, values, p)  # K x c, coefficients of f(u(z))
    at_beta = np.empty((scheme.k, K), dtype=np.int64)
    for j, b in enumerate(scheme.beta):
        acc = 1
        for t in range(K):
            at_beta[j, t] = acc
            acc = acc * b % p
    decoded = mod_matmul(at_beta, coeffs, p)
    if scalar:
        return [int(x) for x in decoded[:, 0]]
    return list(decoded)


def encoded_polynomial_coeffs(data: Dataset, scheme: CodingScheme) -> np.ndarray:
    """Coefficients of u(z), shape (k, chunk_len); row t is the z**t term."""
    basis = np.array(lagrange_basis(scheme.beta, scheme.p), dtype=np.int64)
    return mod_matmul(basis.T, data.chunks, scheme.p)


def evaluate_u(data: Dataset, scheme: CodingScheme, z: int) -> np.ndarray:
    coeffs = encoded_polynomial_coeffs(data, scheme)
    return np.array(
        [poly_eval([int(c) for c in coeffs[:, col]], z, scheme.p) for col in range(data.chunk_len)],
        dtype=np.int64,
    )


# -- dataset files ---------------------------------------------------------
#
# text:   one chunk per line, decimal field elements separated by whitespace;
#         blank lines and lines starting with '#' are ignored.
# binary: magic b"LCCDATA1", then little-endian uint64 k, chunk_len, p,
#         then k * chunk_len little-endian uint64 values in row-major order.

_MAGIC = b"LCCDATA1"


def write_dataset(path, data: Dataset, fmt: str = "text") -> None:
    path = Path(path)
    if fmt == "text":
        lines = [" ".join(str(int(x)) for x in row) for row in data.chunks]
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "binary":
        header = _MAGIC + struct.pack("<QQQ", data.k, data.chunk_len, data.p)
        path.write_bytes(header + data.chunks.astype("<u8").tobytes())
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")


def read_dataset(path, p: int = DEFAULT_PRIME) -> Dataset:
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(_MAGIC):
        k, chunk_len, p_file = struct.unpack_from("<QQQ", raw, len(_MAGIC))
        body = np.frombuffer(raw, dtype="<u8", offset=len(_MAGIC) + 24)
        if body.size != k * chunk_len:
            raise CodingError(f"{path}: expected {k * chunk_len} values, found {body.size}")
        return Dataset(body.astype(np.int64).reshape(k, chunk_len), int(p_file))
    rows = []
    for lineno, line in enumerate(raw.decode().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise CodingError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise CodingError(f"{path}: no chunks")
    if len({len(r) for r in rows}) != 1:
        raise CodingError(f"{path}: chunks have different lengths")
    return Dataset(np.array(rows, dtype=np.int64), p)


__all__ = [
    "CodingError", "CodingScheme", "Dataset", "EncodedShard", "FieldError",
    "LAGRANGE", "NotDecodable", "REPETITION", "WorkFunction", "apply_function",
    "decode", "encode", "encoding_matrix", "make_scheme", "read_dataset",
    "recovery_threshold", "write_dataset",
]
