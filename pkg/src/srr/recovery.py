"""Minimal recovery sets of each data object."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .codebook import StorageScheme
from .galois import GF, _reduce

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RecoverySet:
    obj: int
    servers: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.servers)


@dataclass(frozen=True)
class RecoveryCatalog:
    """Per-object recovery sets, each list sorted by size then lexicographically."""

    scheme: StorageScheme
    sets: tuple[tuple[RecoverySet, ...], ...]
    max_size: int | None = None
    objects: tuple[int, ...] = ()  # original object labels; empty means 0..k-1

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def labels(self) -> tuple[int, ...]:
        return self.objects or tuple(range(len(self.sets)))

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def mu(self):
        return self.scheme.mu

    def t(self, i: int) -> int:
        return len(self.sets[i])

    def all_sets(self) -> list[RecoverySet]:
        return [r for per in self.sets for r in per]

    def restrict(self, objects: Sequence[int]) -> "RecoveryCatalog":
        """Slice where every object outside ``objects`` has zero demand.

        Coordinates of the result are re-indexed to ``objects`` in the given order."""
        labels = self.labels
        return RecoveryCatalog(
            self.scheme, tuple(self.sets[i] for i in objects), self.max_size, tuple(labels[i] for i in objects)
        )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "max_size": self.max_size,
            "objects": list(self.labels),
            "sets": [[list(r.servers) for r in per] for per in self.sets],
        }


def _recovers(F: GF, k: int, cols: Sequence[Sequence[int]]) -> list[int] | None:
    """Objects i for which ``cols`` is a minimal recovery set, or None if dependent."""
    s = len(cols)
    # augmented system [G_S | I_k]
    rows = [[c[r] for c in cols] + [1 if r == i else 0 for i in range(k)] for r in range(k)]
    rows, piv = _reduce(F, rows, s)
    if len(piv) < s:
        return None
    out = []
    for i in range(k):
        if any(rows[r][s + i] for r in range(s, k)):
            continue
        if all(rows[r][s + i] for r in range(s)):
            out.append(i)
    return out


def enumerate_recovery_sets(
    s: StorageScheme, max_size: int | None = None, budget: int = DEFAULT_BUDGET
) -> RecoveryCatalog:
    """Exhaustive search over independent subsets by increasing size.

    A set S recovers object i minimally exactly when its columns are linearly
    independent and the unique solution of G_S x = e_i has no zero entry.
    """
    F = s.field
    k, n = s.k, s.n
    cap = k if max_size is None else min(k, max_size)
    found: list[list[RecoverySet]] = [[] for _ in range(k)]
    examined = 0
    for size in range(1, cap + 1):
        for sub in itertools.combinations(range(n), size):
            examined += 1
            if examined > budget:
                raise BudgetExceeded(f"examined more than {budget} subsets")
            objs = _recovers(F, k, [s.columns[j] for j in sub])
            if objs:
                for i in objs:
                    found[i].append(RecoverySet(i, sub))
    return RecoveryCatalog(s, tuple(tuple(per) for per in found), max_size)


def size_profile(cat: RecoveryCatalog, i: int) -> list[int]:
    return sorted(r.size for r in cat.sets[i])


def disjoint_family(cat: RecoveryCatalog, i: int, max_size: int = 2) -> list[RecoverySet]:
    """Greedy pairwise-disjoint subfamily of the sets of size <= max_size."""
    used: set[int] = set()
    out = []
    for r in cat.sets[i]:
        if r.size <= max_size and not used.intersection(r.servers):
            out.append(r)
            used.update(r.servers)
    return out


def catalog_from_json(s: StorageScheme, obj: dict) -> RecoveryCatalog:
    raw = obj["sets"]
    objects = tuple(obj.get("objects") or range(len(raw)))
    sets = tuple(
        tuple(RecoverySet(o, tuple(int(x) for x in r)) for r in per) for o, per in zip(objects, raw)
    )
    if len(objects) != len(sets) or any(not 0 <= o < s.k for o in objects):
        raise ValueError("catalog objects do not match the scheme")
    if objects == tuple(range(s.k)):
        objects = ()
    return RecoveryCatalog(s, sets, obj.get("max_size"), objects)


def servers_of(sets: Iterable[RecoverySet]) -> set[int]:
    out: set[int] = set()
    for r in sets:
        out.update(r.servers)
    return out
