"""Eventually periodic bi-infinite sequences.

A point is written ``^∞(left_period) middle (right_period)^∞`` where
``middle[0]`` sits at coordinate ``offset``.  Construction always
canonicalizes: both periods are the minimal eventual periods in their
phase, and ``middle`` is as short as possible, so equal sequences compare
equal field by field.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Sequence


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _primitive_period(w: tuple[int, ...]) -> int:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w == w[d:] + w[:d]:
            return d
    return n


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    left_period: tuple[int, ...]
    middle: tuple[int, ...]
    right_period: tuple[int, ...]
    offset: int

    def __post_init__(self):
        if not self.left_period or not self.right_period:
            raise ValueError("periods must be nonempty")

    # construction ---------------------------------------------------------

    @classmethod
    def make(cls, left_period: Sequence[int], middle: Sequence[int],
             right_period: Sequence[int], offset: int = 0) -> "EventuallyPeriodicPoint":
        raw = cls(tuple(left_period), tuple(middle), tuple(right_period), offset)
        return raw.canonical()

    @classmethod
    def from_parts(cls, left_period: Sequence[int], left_tail: Sequence[int],
                   right_tail: Sequence[int], right_period: Sequence[int]
                   ) -> "EventuallyPeriodicPoint":
        """``^∞(left_period) left_tail . right_tail (right_period)^∞``;
        the dot marks coordinate 0."""
        return cls.make(left_period, tuple(left_tail) + tuple(right_tail),
                        right_period, -len(left_tail))

    @classmethod
    def constant(cls, a: int) -> "EventuallyPeriodicPoint":
        return cls((a,), (), (a,), 0)

    @classmethod
    def periodic(cls, word: Sequence[int], phase: int = 0) -> "EventuallyPeriodicPoint":
        """The point ``x`` with ``x_i = word[(i - phase) mod len(word)]``."""
        return cls.make(word, (), word, phase)

    # evaluation -----------------------------------------------------------

    def __getitem__(self, i: int) -> int:
        j = i - self.offset
        if j < 0:
            p = len(self.left_period)
            return self.left_period[j % p]
        if j < len(self.middle):
            return self.middle[j]
        p = len(self.right_period)
        return self.right_period[(j - len(self.middle)) % p]

    def window(self, lo: int, hi: int) -> tuple[int, ...]:
        """Values at coordinates ``lo..hi-1``."""
        return tuple(self[i] for i in range(lo, hi))

    @property
    def span(self) -> tuple[int, int]:
        """Coordinates ``[lo, hi)`` outside of which the point is periodic."""
        return self.offset, self.offset + len(self.middle)

    def shift(self, k: int = 1) -> "EventuallyPeriodicPoint":
        """``σ^k``, i.e. ``σ^k(x)_i = x_{i+k}``."""
        return EventuallyPeriodicPoint(self.left_period, self.middle, self.right_period,
                                       self.offset - k)

    def canonical(self) -> "EventuallyPeriodicPoint":
        pl = _primitive_period(self.left_period)
        pr = _primitive_period(self.right_period)
        lo, hi = self.span
        margin = 2 * (pl + pr) + 2
        a, b = lo - margin, hi + margin
        vals = {i: self[i] for i in range(a - pl - pr, b + pl + pr)}

        # globally periodic points get a fixed representation
        if pl == pr and all(vals[i] == vals[i + pr] for i in range(a, b)):
            return EventuallyPeriodicPoint(tuple(vals[i] for i in range(0, pr)), (),
                                           tuple(vals[i] for i in range(0, pr)), 0)
        # least r0 with x_i = x_{i+pr} for i >= r0
        r0 = hi
        while r0 - 1 >= a and vals[r0 - 1] == vals[r0 - 1 + pr]:
            r0 -= 1
        # greatest l0 with x_i = x_{i-pl} for i <= l0
        l0 = lo - 1
        while l0 + 1 < b and vals[l0 + 1] == vals[l0 + 1 - pl]:
            l0 += 1
        start = l0 + 1
        if r0 <= start:
            start = r0
            mid: tuple[int, ...] = ()
        else:
            mid = tuple(vals[i] for i in range(start, r0))
        end = start + len(mid)
        left = tuple(vals[i] for i in range(start - pl, start))
        right = tuple(vals[i] for i in range(end, end + pr))
        return EventuallyPeriodicPoint(left, mid, right, start)

    # display --------------------------------------------------------------

    def format(self, labels: Sequence[str] | None = None) -> str:
        def s(w):
            return " ".join(labels[a] if labels else str(a) for a in w)
        lo, hi = self.span
        # show the origin inside the written part
        lo2, hi2 = min(lo, 0), max(hi, 1)
        pre = self.window(lo2, 0)
        post = self.window(0, hi2)
        lp = tuple(self[i] for i in range(lo2 - len(self.left_period), lo2))
        rp = tuple(self[i] for i in range(hi2, hi2 + len(self.right_period)))
        return f"^∞({s(lp)}) {s(pre)} . {s(post)} ({s(rp)})^∞".replace("  ", " ")

    def __str__(self):
        return self.format()


EVP = EventuallyPeriodicPoint


def _joint_frame(points: Sequence[EVP]) -> tuple[int, int, int, int]:
    lo = min(p.span[0] for p in points)
    hi = max(p.span[1] for p in points)
    pl = pr = 1
    for p in points:
        pl = _lcm(pl, len(p.left_period))
        pr = _lcm(pr, len(p.right_period))
    return lo, hi, pl, pr


def evp_cellwise(op: Callable[..., int], points: Sequence[EVP]) -> EVP:
    """Apply a cellwise operation (a function of one symbol per point)."""
    if not points:
        raise ValueError("need at least one argument point")
    lo, hi, pl, pr = _joint_frame(points)

    def at(i):
        return int(op(*(p[i] for p in points)))

    return EVP.make([at(i) for i in range(lo - pl, lo)], [at(i) for i in range(lo, hi)],
                    [at(i) for i in range(hi, hi + pr)], lo)


def evp_table(table, points: Sequence[EVP]) -> EVP:
    """Cellwise application of an operation table (numpy array or nested lists)."""
    return evp_cellwise(lambda *a: table[tuple(a)] if len(a) != 1 else table[a[0]], points)


def evp_blockmap(local: Callable[[tuple], int], radius: int, points: Sequence[EVP]) -> EVP:
    """Apply a sliding block code to a tuple of points.

    ``local`` receives one window of length ``2*radius+1`` per point and
    returns the output symbol at the window centre.
    """
    lo, hi, pl, pr = _joint_frame(points)
    r = radius

    def at(i):
        return int(local(*(p.window(i - r, i + r + 1) for p in points)))

    # widen so every window inside [lo, hi) only sees the periodic parts beyond
    lo2, hi2 = lo - r - pl, hi + r + pr
    return EVP.make([at(i) for i in range(lo2 - pl, lo2)], [at(i) for i in range(lo2, hi2)],
                    [at(i) for i in range(hi2, hi2 + pr)], lo2)


def evp_compare(x: EVP, y: EVP, leq: Callable[[int, int], bool]) -> str:
    """One of ``'='``, ``'<='``, ``'>='``, ``'incomparable'`` (cellwise order)."""
    lo, hi, pl, pr = _joint_frame([x, y])
    coords = range(lo - pl, hi + pr)
    le = all(leq(x[i], y[i]) for i in coords)
    ge = all(leq(y[i], x[i]) for i in coords)
    if le and ge:
        return "="
    if le:
        return "<="
    if ge:
        return ">="
    return "incomparable"
