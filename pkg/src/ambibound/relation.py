"""Binary relations with degree statistics, and SNAP-style edge-list parsing.

A :class:`Relation` is an immutable set of directed pairs ``(a, b)``.  Node
ids are arbitrary 64-bit integers; the pairs are kept sorted and
deduplicated in two parallel ``int64`` arrays, and all degree data is derived
from them once at construction.
"""

from __future__ import annotations

import hashlib
import io
import os
from functools import cached_property
from typing import BinaryIO, Iterable, TextIO, Union

import numpy as np

from .errors import EdgeListParseError, EmptyRelationError

Source = Union[str, os.PathLike, bytes, BinaryIO, TextIO]


def _sorted_unique_pairs(left: np.ndarray, right: np.ndarray):
    order = np.lexsort((right, left))
    left = left[order]
    right = right[order]
    if left.size > 1:
        keep = np.empty(left.size, dtype=bool)
        keep[0] = True
        keep[1:] = (left[1:] != left[:-1]) | (right[1:] != right[:-1])
        left = left[keep]
        right = right[keep]
    return left, right


class Relation:
    """An immutable, deduplicated set of ``(left, right)`` node-id pairs.

    Use :meth:`from_pairs` or :meth:`from_arrays` rather than calling the
    constructor with unsorted data.
    """

    def __init__(self, left: np.ndarray, right: np.ndarray):
        left = np.ascontiguousarray(left, dtype=np.int64)
        right = np.ascontiguousarray(right, dtype=np.int64)
        if left.shape != right.shape or left.ndim != 1:
            raise ValueError("left and right must be 1-d arrays of equal length")
        left, right = _sorted_unique_pairs(left, right)
        if left.size == 0:
            raise EmptyRelationError("relation has no pairs")
        for arr in (left, right):
            arr.setflags(write=False)
        self.left = left
        self.right = right

        self.left_nodes, linv, self.left_counts = np.unique(
            left, return_inverse=True, return_counts=True)
        self.right_nodes, rinv, self.right_counts = np.unique(
            right, return_inverse=True, return_counts=True)

        dl = self.left_counts[linv]
        dr = self.right_counts[rinv]
        width = int(dr.max()) + 1
        keys, counts = np.unique(dl * width + dr, return_counts=True)
        self.bideg_left = keys // width
        self.bideg_right = keys % width
        self.bideg_count = counts

        tl, tr = _sorted_unique_pairs(right, left)
        self.symmetric = bool(np.array_equal(tl, left) and np.array_equal(tr, right))

        for arr in (self.left_nodes, self.left_counts, self.right_nodes,
                    self.right_counts, self.bideg_left, self.bideg_right,
                    self.bideg_count):
            arr.setflags(write=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_arrays(cls, left, right) -> "Relation":
        return cls(np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Relation":
        pairs = list(pairs)
        if not pairs:
            raise EmptyRelationError("relation has no pairs")
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1])

    # -- views ------------------------------------------------------------

    def __len__(self) -> int:
        return int(self.left.size)

    def __iter__(self):
        return zip(self.left.tolist(), self.right.tolist())

    def __contains__(self, pair) -> bool:
        a, b = pair
        lo = np.searchsorted(self.left, a, side="left")
        hi = np.searchsorted(self.left, a, side="right")
        if lo == hi:
            return False
        k = lo + np.searchsorted(self.right[lo:hi], b)
        return k < hi and self.right[k] == b

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (np.array_equal(self.left, other.left)
                and np.array_equal(self.right, other.right))

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        return (f"Relation(pairs={len(self)}, left_support={self.left_nodes.size}, "
                f"right_support={self.right_nodes.size}, symmetric={self.symmetric})")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(self)

    @cached_property
    def left_degree(self) -> dict[int, int]:
        return dict(zip(self.left_nodes.tolist(), self.left_counts.tolist()))

    @cached_property
    def right_degree(self) -> dict[int, int]:
        return dict(zip(self.right_nodes.tolist(), self.right_counts.tolist()))

    @cached_property
    def bidegree_histogram(self) -> dict[tuple[int, int], int]:
        return {
            (dl, dr): c
            for dl, dr, c in zip(self.bideg_left.tolist(), self.bideg_right.tolist(),
                                 self.bideg_count.tolist())
        }

    @property
    def max_left_degree(self) -> int:
        return int(self.left_counts.max())

    @property
    def max_right_degree(self) -> int:
        return int(self.right_counts.max())

    @cached_property
    def digest(self) -> str:
        """Stable content hash: identical pair sets give identical digests."""
        h = hashlib.sha256()
        h.update(self.left.astype("<i8").tobytes())
        h.update(self.right.astype("<i8").tobytes())
        return h.hexdigest()

    def transpose(self) -> "Relation":
        return Relation(self.right, self.left)


def relation_from_pairs(pairs: Iterable[tuple[int, int]]) -> Relation:
    return Relation.from_pairs(pairs)


def symmetrize(rel: Relation) -> Relation:
    """Union of ``rel`` with its transpose."""
    if rel.symmetric:
        return rel
    return Relation(np.concatenate([rel.left, rel.right]),
                    np.concatenate([rel.right, rel.left]))


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_edge_list(source: Source, *, symmetrize: bool = False,
                    drop_self_loops: bool = False) -> Relation:
    """Parse a whitespace-separated edge list into a :class:`Relation`.

    ``source`` is a path, raw bytes, or an open file.  Lines starting with
    ``#`` and blank lines are skipped.  Every other line must hold exactly
    two integer tokens.

    Raises:
        EdgeListParseError: on the first malformed line (1-based line number).
        EmptyRelationError: if nothing is left after filtering.
    """
    text = _read_text(source)
    lefts: list[int] = []
    rights: list[int] = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise EdgeListParseError(lineno, line.rstrip("\n"),
                                     f"expected 2 fields, found {len(tokens)}")
        try:
            a = int(tokens[0])
            b = int(tokens[1])
        except ValueError:
            raise EdgeListParseError(lineno, line.rstrip("\n"), "non-integer token") from None
        if not (-(2 ** 63) <= a < 2 ** 63 and -(2 ** 63) <= b < 2 ** 63):
            raise EdgeListParseError(lineno, line.rstrip("\n"), "id outside 64-bit range")
        lefts.append(a)
        rights.append(b)

    left = np.asarray(lefts, dtype=np.int64)
    right = np.asarray(rights, dtype=np.int64)
    if drop_self_loops:
        keep = left != right
        left, right = left[keep], right[keep]
    if left.size == 0:
        raise EmptyRelationError("edge list is empty after filtering")
    if symmetrize:
        left, right = np.concatenate([left, right]), np.concatenate([right, left])
    return Relation(left, right)
