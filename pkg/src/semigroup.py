"""Semigroup membership, scenario classification and the E-set of a curve"""
import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from constants import (
    RATIONAL_DIMENSION,
    TAG_E0_ONLY,
    TAG_E_BOTH,
    TAG_ED_ONLY,
    TAG_IN_I,
    TAG_J,
)
from curve_data import CurveMatrix, Exponent
from errors import BoundExceededError
from settings import Settings, default_settings

logger = logging.getLogger(__name__)

Counts = Tuple[int, ...]


class _LevelCache:
    """S_n for each weight tuple, grown on demand under a lock"""

    def __init__(self):
        self._levels: Dict[Tuple[int, ...], List[FrozenSet[int]]] = {}
        self._lock = threading.Lock()

    def get(self, weights: Tuple[int, ...], n: int) -> FrozenSet[int]:
        with self._lock:
            levels = self._levels.setdefault(weights, [frozenset([0])])
            while len(levels) <= n:
                previous = levels[-1]
                levels.append(frozenset(value + w for value in previous for w in weights))
            return levels[n]

    def clear(self):
        with self._lock:
            self._levels.clear()


_LEVELS = _LevelCache()


def level_set(weights: Sequence[int], n: int) -> FrozenSet[int]:
    """All sums of exactly n entries of weights (repetition allowed)."""
    if n < 0:
        return frozenset()
    return _LEVELS.get(tuple(weights), n)


def compositions(weights: Sequence[int], n: int, target: int) -> Iterator[Counts]:
    """
    Every count vector c >= 0 with sum(c) = n and sum(w*c) = target.

    Branches are pruned against the level sets of the remaining columns, so each
    visited leaf is a solution. Output order is lexicographically descending in c.
    """
    weights = tuple(weights)
    if n < 0 or target not in level_set(weights, n):
        return

    def walk(position: int, remaining: int, rest: int, prefix: Counts) -> Iterator[Counts]:
        if position == len(weights) - 1:
            yield prefix + (remaining,)
            return
        w = weights[position]
        tail = weights[position + 1:]
        for count in range(remaining, -1, -1):
            if rest - count * w in level_set(tail, remaining - count):
                yield from walk(position + 1, remaining - count, rest - count * w, prefix + (count,))

    yield from walk(0, n, target, ())


def find_composition(weights: Sequence[int], n: int, target: int) -> Optional[Counts]:
    """One count vector, picking generators in column order (first feasible column first)."""
    weights = tuple(weights)
    if n < 0 or target not in level_set(weights, n):
        return None
    counts = [0] * len(weights)
    start = 0
    for remaining in range(n, 0, -1):
        for index in range(start, len(weights)):
            if target - weights[index] in level_set(weights[index:], remaining - 1):
                counts[index] += 1
                target -= weights[index]
                start = index
                break
    return tuple(counts)


def in_I(curve: CurveMatrix, alpha: Exponent) -> Optional[Counts]:
    """Witness u in N^(m+2) with A . u = alpha, or None."""
    return find_composition(curve.support, alpha.a1, alpha.a2)


def _ceil_div(numerator: int, denominator: int) -> int:
    return -(-numerator // denominator)


def fd_shift_bound(curve: CurveMatrix, alpha: Exponent) -> int:
    km = curve.ks[-1]
    return max(0, _ceil_div(km * alpha.a1 - alpha.a2, curve.d - km))


def f0_shift_bound(curve: CurveMatrix, alpha: Exponent) -> int:
    return max(0, _ceil_div(alpha.a2, curve.ks[0]) - alpha.a1)


def in_Fd(curve: CurveMatrix, alpha: Exponent) -> Optional[Tuple[Counts, int]]:
    """(v, r) with B . v = alpha + r(1, d), smallest r first, or None."""
    for r in range(fd_shift_bound(curve, alpha) + 1):
        v = find_composition(curve.b_weights, alpha.a1 + r, alpha.a2 + r * curve.d)
        if v is not None:
            return v, r
    return None


def in_F0(curve: CurveMatrix, alpha: Exponent) -> Optional[Tuple[Counts, int]]:
    """(v, r) with C . v = alpha + r(1, 0), smallest r first, or None."""
    for r in range(f0_shift_bound(curve, alpha) + 1):
        v = find_composition(curve.c_weights, alpha.a1 + r, alpha.a2)
        if v is not None:
            return v, r
    return None


@dataclass(frozen=True)
class Classification:
    alpha: Exponent
    tag: str
    witness: Optional[Counts] = None
    f0_witness: Optional[Tuple[Counts, int]] = None
    fd_witness: Optional[Tuple[Counts, int]] = None

    @property
    def in_e_set(self) -> bool:
        return self.tag == TAG_E_BOTH

    def to_json(self) -> Dict[str, object]:
        def shifted(entry):
            if entry is None:
                return None
            v, r = entry
            return {"v": list(v), "r": r}

        return {
            "alpha": self.alpha.to_json(),
            "tag": self.tag,
            "witness": list(self.witness) if self.witness is not None else None,
            "f0": shifted(self.f0_witness),
            "fd": shifted(self.fd_witness),
        }


def classify(curve: CurveMatrix, alpha: Exponent) -> Classification:
    witness = in_I(curve, alpha)
    if witness is not None:
        return Classification(alpha, TAG_IN_I, witness=witness)

    f0 = in_F0(curve, alpha)
    fd = in_Fd(curve, alpha)
    if f0 is not None and fd is not None:
        tag = TAG_E_BOTH
    elif f0 is not None:
        tag = TAG_E0_ONLY
    elif fd is not None:
        tag = TAG_ED_ONLY
    else:
        tag = TAG_J
    return Classification(alpha, tag, f0_witness=f0, fd_witness=fd)


@lru_cache(maxsize=64)
def _e_set(curve: CurveMatrix, cap: int) -> Tuple[Exponent, ...]:
    k1, km = curve.ks[0], curve.ks[-1]
    found: List[Exponent] = []
    for n in range(1, cap + 1):
        reached = level_set(curve.support, n)
        gaps = [a2 for a2 in range(k1 * n + 1, km * n) if a2 not in reached]
        if not gaps:
            logger.debug("E-set of %s certified complete at level %d", curve, n)
            return tuple(sorted(found))
        for a2 in gaps:
            alpha = Exponent(n, a2)
            if in_F0(curve, alpha) is not None and in_Fd(curve, alpha) is not None:
                found.append(alpha)
    raise BoundExceededError(
        f"E-set of {curve} not certified complete within {cap} levels"
    )


def e_set(curve: CurveMatrix, settings: Settings = None) -> List[Exponent]:
    """
    The finite set E(A) of exponents in F_0 and F_d but not in I.

    Levels n = 1, 2, ... are scanned over the window k1*n < a2 < km*n until a
    level whose whole window lies in I; beyond it every window stays covered.

    Raises:
        BoundExceededError: no such level up to e_set_cap_factor * d^2
    """
    settings = settings or default_settings()
    cap = int(settings.e_set_cap_factor) * curve.d ** 2
    return list(_e_set(curve, cap))


def is_cohen_macaulay(curve: CurveMatrix, settings: Settings = None) -> bool:
    return not e_set(curve, settings)


def holonomic_rank(curve: CurveMatrix, alpha: Exponent) -> int:
    """d + 1 on E(A), d elsewhere."""
    return curve.d + 1 if classify(curve, alpha).in_e_set else curve.d


def rational_dim(curve: CurveMatrix, alpha: Exponent) -> int:
    return RATIONAL_DIMENSION[classify(curve, alpha).tag]
