"""Sparse exact matrices over :class:`RadScalar` and their float conversions."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np

from .scalars import ONE, RadScalar, as_scalar, scalar_to_json

__all__ = ["ExactMatrix", "spectral_norm", "exact_rank", "to_numpy"]


class ExactMatrix:
    """A sparse ``n x m`` matrix; ``entries`` maps ``(i, j)`` to nonzero scalars."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape: tuple[int, int], entries: dict | None = None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.entries = {} if entries is None else {k: v for k, v in entries.items() if v}

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls((n, n), {(i, i): ONE for i in range(n)})

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "ExactMatrix":
        return cls((n, n if m is None else m))

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> "ExactMatrix":
        return cls((n, n), {(i, j): ONE})

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        n, m = len(rows), (len(rows[0]) if rows else 0)
        ent = {}
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                v = as_scalar(v)
                if v:
                    ent[(i, j)] = v
        return cls((n, m), ent)

    def __getitem__(self, ij) -> RadScalar:
        return self.entries.get(ij, RadScalar(0))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ExactMatrix(self.shape, out)

    def __neg__(self):
        return ExactMatrix(self.shape, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = as_scalar(c)
        return ExactMatrix(self.shape, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            rows.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                key = (i, j)
                p = a * b
                s = out.get(key)
                out[key] = p if s is None else s + p
        return ExactMatrix((self.shape[0], other.shape[1]), out)

    def adjoint(self) -> "ExactMatrix":
        return ExactMatrix((self.shape[1], self.shape[0]),
                           {(j, i): v.conj() for (i, j), v in self.entries.items()})

    @property
    def H(self) -> "ExactMatrix":
        return self.adjoint()

    def kron_left_identity(self, n: int) -> "ExactMatrix":
        """``kron(I_n, self)``: ``n`` diagonal copies."""
        a, b = self.shape
        ent = {}
        for c in range(n):
            for (i, j), v in self.entries.items():
                ent[(c * a + i, c * b + j)] = v
        return ExactMatrix((n * a, n * b), ent)

    def kron_right_identity(self, n: int) -> "ExactMatrix":
        """``kron(self, I_n)``."""
        a, b = self.shape
        ent = {}
        for (i, j), v in self.entries.items():
            for c in range(n):
                ent[(i * n + c, j * n + c)] = v
        return ExactMatrix((n * a, n * b), ent)

    def block(self, r0: int, c0: int, nr: int, nc: int) -> "ExactMatrix":
        ent = {(i - r0, j - c0): v for (i, j), v in self.entries.items()
               if r0 <= i < r0 + nr and c0 <= j < c0 + nc}
        return ExactMatrix((nr, nc), ent)

    def place(self, r0: int, c0: int, sub: "ExactMatrix") -> None:
        """Add ``sub`` into this matrix at offset ``(r0, c0)`` in place."""
        for (i, j), v in sub.entries.items():
            k = (r0 + i, c0 + j)
            s = self.entries.get(k)
            s = v if s is None else s + v
            if s:
                self.entries[k] = s
            else:
                self.entries.pop(k, None)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for (i, j), v in self.entries.items():
            out[i, j] = v.to_complex()
        return out

    def rows(self) -> list[list[RadScalar]]:
        n, m = self.shape
        return [[self[(i, j)] for j in range(m)] for i in range(n)]

    def to_json(self) -> list:
        return [[scalar_to_json(v) for v in row] for row in self.rows()]

    def __repr__(self):
        return f"ExactMatrix(shape={self.shape}, nnz={len(self.entries)})"


def to_numpy(M) -> np.ndarray:
    if isinstance(M, ExactMatrix):
        return M.to_numpy()
    return np.asarray(M, dtype=complex)


def spectral_norm(M) -> float:
    """Operator 2-norm via the largest eigenvalue of ``M^H M``."""
    A = to_numpy(M)
    if A.size == 0:
        return 0.0
    gram = A.conj().T @ A
    w = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    return float(np.sqrt(max(w[-1], 0.0)))


def exact_rank(vectors: list[list[RadScalar]]) -> int:
    """Rank over Q(i) of vectors with Gaussian-rational entries, by elimination."""
    rows = []
    for v in vectors:
        row = []
        for x in v:
            x = as_scalar(x)
            if not x.is_gaussian():
                raise ValueError("exact_rank supports Gaussian-rational entries only")
            re, im = x.terms.get(1, (Fraction(0), Fraction(0)))
            row.append(_GaussQ(re, im))
        rows.append(row)
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / p
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class _GaussQ:
    """Minimal Gaussian rational used by :func:`exact_rank`."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=Fraction(0)):
        self.re, self.im = Fraction(re), Fraction(im)

    def __bool__(self):
        return bool(self.re or self.im)

    def __sub__(self, o):
        return _GaussQ(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        n = o.re * o.re + o.im * o.im
        return _GaussQ((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)
