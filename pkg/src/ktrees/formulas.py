"""Closed-form refined counts, totals and label statistics.

All binomials use :func:`ktrees.exactmath.binom` (``binom(m, 0) == 1`` for
every m), empty products are 1 and empty sums are 0.  Label counts are
indexed from 1 throughout, matching the label alphabet 1..k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import InvalidParams, UnsupportedBranch
from .exactmath import as_integer, binom, exact_div, rising_factorial
from .trees import LabelComposition, compositions


def _ceil_half(k: int) -> int:
    return (k + 1) // 2


def _comp(comp: LabelComposition | Sequence[int]) -> LabelComposition:
    if isinstance(comp, LabelComposition):
        return comp
    return LabelComposition(len(comp), tuple(comp))


class _Sums:
    """Partial sums of a composition used by every product in the refined formulas.

    ``outer(r)`` = l_1+...+l_{r-1} + l_{k+2-r}+...+l_k (labels strictly outside
    the r-th symmetric pair), ``inner(r)`` = l_1+...+l_r + l_{k+1-r}+...+l_k.
    """

    def __init__(self, comp: LabelComposition):
        self.k = comp.k
        self.l = (0,) + comp.counts
        self.prefix = [0]
        for c in comp.counts:
            self.prefix.append(self.prefix[-1] + c)

    def low(self, a: int) -> int:
        """l_1 + ... + l_a."""
        return self.prefix[max(0, min(a, self.k))]

    def high(self, b: int) -> int:
        """l_b + ... + l_k."""
        b = max(b, 1)
        return 0 if b > self.k else self.prefix[self.k] - self.prefix[b - 1]

    def outer(self, r: int) -> int:
        return self.low(r - 1) + self.high(self.k + 2 - r)

    def inner(self, r: int) -> int:
        return self.low(r) + self.high(self.k + 1 - r)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def _check_root(h: int, k: int):
    if not 1 <= h <= k:
        raise InvalidParams(f"root label {h} outside 1..{k}")


def _single_vertex(h: int | None, comp: LabelComposition) -> int:
    # n == 1: exactly one tree, the single vertex carrying the only label.
    label = comp.counts.index(1) + 1
    return 1 if h is None or h == label else 0


# ---------------------------------------------------------------------------
# k-plane trees

def thm1_root(h: int, comp: LabelComposition | Sequence[int]) -> int:
    """k-plane trees with root label h and the given label counts."""
    comp = _comp(comp)
    k, n = comp.k, comp.n
    _check_root(h, k)
    if n == 1:
        return _single_vertex(h, comp)
    s = _Sums(comp)
    l = s.l
    ck, fk = _ceil_half(k), k // 2
    if h <= ck:
        num = l[h] * _prod(binom(2 * n - 1 - s.outer(r), l[r]) for r in range(1, ck + 1)) \
            * _prod(binom(s.inner(r) - 1, l[k + 1 - r]) for r in range(1, h)) \
            * _prod(binom(s.inner(r), l[k + 1 - r]) for r in range(h, fk + 1))
        return exact_div(num, n * (2 * n - 1))
    num = l[h] * _prod(binom(2 * n - 1 - s.outer(r), l[r]) for r in range(1, k + 2 - h)) \
        * _prod(binom(2 * n - 2 - s.outer(r), l[r]) for r in range(k + 2 - h, ck + 1)) \
        * _prod(binom(s.inner(r) - 1, l[k + 1 - r]) for r in range(1, fk + 1))
    return exact_div(num, (n - 1) * (2 * n - 1))


def thm1_total(comp: LabelComposition | Sequence[int]) -> int:
    comp = _comp(comp)
    k, n = comp.k, comp.n
    if n == 1:
        return 1
    s = _Sums(comp)
    l = s.l
    num = _prod(binom(2 * n - 2 - s.outer(r), l[r]) for r in range(1, _ceil_half(k) + 1)) \
        * _prod(binom(s.inner(r) - 1, l[k + 1 - r]) for r in range(1, k // 2 + 1))
    return exact_div(num, n - 1)


# ---------------------------------------------------------------------------
# k-noncrossing trees

def thm2_root(h: int, comp: LabelComposition | Sequence[int]) -> int:
    """k-noncrossing trees with root label h and the given label counts.

    Each of the two parts is generally fractional; only the difference is an
    integer.
    """
    comp = _comp(comp)
    k, n = comp.k, comp.n
    _check_root(h, k)
    if n == 1:
        return _single_vertex(h, comp)
    s = _Sums(comp)
    l = s.l
    ck, fk = _ceil_half(k), k // 2
    if h <= ck:
        first = Fraction(2 * l[h], (2 * n - 1) * (4 * n - 3)) \
            * _prod(binom(3 * n - 2 - s.outer(r), l[r]) for r in range(1, ck + 1)) \
            * _prod(binom(n - 2 + s.inner(r), l[k + 1 - r]) for r in range(1, h)) \
            * _prod(binom(n - 1 + s.inner(r), l[k + 1 - r]) for r in range(h, fk + 1))
        second = Fraction(l[h], (4 * n - 3) * (3 * n - 2 - s.outer(h))) \
            * _prod(binom(n - 1 + s.inner(r), l[k + 1 - r]) for r in range(1, fk + 1)) \
            * _prod(binom(3 * n - 3 - s.outer(r), l[r]) for r in range(1, h)) \
            * _prod(binom(3 * n - 2 - s.outer(r), l[r]) for r in range(h, ck + 1))
    else:
        first = Fraction(l[h], (n - 1) * (4 * n - 3)) \
            * _prod(binom(n - 2 + s.inner(r), l[k + 1 - r]) for r in range(1, fk + 1)) \
            * _prod(binom(3 * n - 2 - s.outer(r), l[r]) for r in range(1, k + 2 - h)) \
            * _prod(binom(3 * n - 3 - s.outer(r), l[r]) for r in range(k + 2 - h, ck + 1))
        second = Fraction(l[h], (4 * n - 3) * (n - 1 + s.low(k + 1 - h) + s.high(h))) \
            * _prod(binom(3 * n - 3 - s.outer(r), l[r]) for r in range(1, ck + 1)) \
            * _prod(binom(n - 1 + s.inner(r), l[k + 1 - r]) for r in range(1, k + 2 - h)) \
            * _prod(binom(n - 2 + s.inner(r), l[k + 1 - r]) for r in range(k + 2 - h, fk + 1))
    return as_integer(first - second)


def thm2_total(comp: LabelComposition | Sequence[int]) -> int:
    comp = _comp(comp)
    k, n = comp.k, comp.n
    if n == 1:
        return 1
    s = _Sums(comp)
    l = s.l
    ck, fk = _ceil_half(k), k // 2
    first = Fraction(_prod(binom(3 * n - 3 - s.outer(r), l[r]) for r in range(1, ck + 1))
                     * _prod(binom(n - 2 + s.inner(r), l[k + 1 - r]) for r in range(1, fk + 1)),
                     n - 1)
    second = Fraction(_prod(binom(3 * n - 2 - s.outer(r), l[r]) for r in range(1, ck + 1))
                      * _prod(binom(n - 1 + s.inner(r), l[k + 1 - r]) for r in range(1, fk + 1)),
                      2 * n - 1)
    return as_integer(first - second)


# ---------------------------------------------------------------------------
# unrefined totals

def _check_kn(k: int, n: int):
    if k < 1 or n < 1:
        raise InvalidParams("need k >= 1 and n >= 1")


def total_plane(k: int, n: int) -> int:
    _check_kn(k, n)
    if n == 1:
        return k
    return exact_div(k * binom((k + 1) * (n - 1), n - 1), n)


def root_plane(k: int, n: int, h: int) -> int:
    _check_kn(k, n)
    _check_root(h, k)
    if n == 1:
        return 1
    return exact_div((k + 1 - h) * binom((k + 1) * n - h - 1, n - 1), k * n - h + 1)


def total_nc(k: int, n: int) -> int:
    _check_kn(k, n)
    if n == 1:
        return k
    m = 2 * k + 1
    return as_integer(Fraction(binom(m * (n - 1), n), n - 1)
                      - Fraction(binom(m * n - k - 1, n), 2 * n - 1))


def root_nc(k: int, n: int, h: int) -> int:
    _check_kn(k, n)
    _check_root(h, k)
    if n == 1:
        return 1
    return exact_div((k + 1 - h) * binom((2 * k + 1) * n - k - h - 1, n - 1),
                     2 * k * n - k - h + 1)


# ---------------------------------------------------------------------------
# single-label counts

def _check_single(k: int, n: int, h: int, ell: int):
    _check_kn(k, n)
    _check_root(h, k)
    if not 0 <= ell <= n:
        raise InvalidParams(f"label count {ell} outside 0..{n}")


def _single_label_by_summation(total: Callable, k: int, n: int, h: int, ell: int) -> int:
    return sum(total(c) for c in compositions(k, n) if c[h] == ell)


def single_label_plane(k: int, n: int, h: int, ell: int) -> int:
    """k-plane trees with n vertices, exactly ``ell`` of them labelled h."""
    _check_single(k, n, h, ell)
    if n == 1:
        return 1 if ell == 1 else k - 1
    m = n - 1
    if h <= _ceil_half(k):
        num = sum(binom(2 * (h - 1) * m + r - 1, r) * binom(2 * m - r, ell)
                  * binom((k + 1 - 2 * h) * m, n - r - ell) for r in range(n - ell + 1))
    else:
        num = sum(binom(2 * (k + 1 - h) * m, r) * binom(r + ell - 1, ell)
                  * binom((2 * h - k - 1) * m - r - ell, n - r - ell) for r in range(n - ell + 1))
    return exact_div(num, m)


def single_label_nc_printed(k: int, n: int, h: int, ell: int) -> int:
    """Two-sum closed form, available for root-side labels h <= ceil(k/2) only."""
    _check_single(k, n, h, ell)
    if h > _ceil_half(k):
        raise UnsupportedBranch(
            f"no trusted closed form for h={h} > ceil(k/2)={_ceil_half(k)}; "
            "use single_label_nc, which sums refined totals")
    if n == 1:
        return 1 if ell == 1 else k - 1
    a = sum(binom(4 * (h - 1) * (n - 1) + r - 1, r) * binom(3 * n - 3 - r, ell)
            * binom(2 * (k + 1 - 2 * h) * (n - 1), n - r - ell) for r in range(n - ell + 1))
    b = sum(binom(2 * (h - 1) * (2 * n - 1) + r - 1, r) * binom(3 * n - 2 - r, ell)
            * binom((k + 1 - 2 * h) * (2 * n - 1), n - r - ell) for r in range(n - ell + 1))
    return as_integer(Fraction(a, n - 1) - Fraction(b, 2 * n - 1))


def single_label_nc_upper_variant(k: int, n: int, h: int, ell: int,
                                  first_coeff: int, last_offset: int = 0) -> Fraction:
    """Two-sum display for h > ceil(k/2) with its uncertain pieces exposed.

    ``first_coeff * (n-1)`` is the top of the leading binomial of the first sum
    and ``last_offset`` is added to the top of the last binomial of the second
    sum.  Used only to compare candidate readings against the exact count; the
    raw (possibly fractional) value is returned.
    """
    a = sum(binom(first_coeff * (n - 1), r) * binom(n + r + ell - 2, ell)
            * binom((4 * h - 2 * k - 3) * (n - 1) - r - ell, n - r - ell) for r in range(n - ell + 1))
    b = sum(binom(2 * (k + 1 - h) * (2 * n - 1) - n, r) * binom(n + r + ell - 1, ell)
            * binom((2 * h - k - 2) * (2 * n - 1) + n - r - ell + last_offset, n - r - ell)
            for r in range(n - ell + 1))
    return Fraction(a, n - 1) - Fraction(b, 2 * n - 1)


def single_label_nc(k: int, n: int, h: int, ell: int) -> int:
    """k-noncrossing trees with n vertices, exactly ``ell`` of them labelled h."""
    _check_single(k, n, h, ell)
    if h <= _ceil_half(k):
        return single_label_nc_printed(k, n, h, ell)
    return _single_label_by_summation(thm2_total, k, n, h, ell)


# ---------------------------------------------------------------------------
# averages

def avg_plane(k: int, n: int, h: int) -> Fraction:
    _check_kn(k, n)
    _check_root(h, k)
    if n == 1:
        return Fraction(1, k)
    return Fraction(2 * (k + 1 - h) * n, k * (k + 1))


def avg_nc(k: int, n: int, h: int) -> Fraction:
    _check_kn(k, n)
    _check_root(h, k)
    if n == 1:
        return Fraction(1, k)
    ratio = Fraction(rising_factorial(2 * k * n + n - 2 * k, k),
                     rising_factorial(2 * k * n + 1 - 2 * k, k))
    inner = 3 * n - 2 - Fraction(2 * (h - 1) * (n - 1), k) \
        + Fraction(2 * (k + 1 - 2 * h)) / ((2 * k + 1) * (2 - ratio))
    return Fraction(n, (2 * k + 1) * n - (k + 1)) * inner


def avg_nc_asymptotic(k: int, n: int, h: int) -> float:
    """Leading two terms of the large-n expansion of :func:`avg_nc`."""
    slope = (3 * k + 2 - 2 * h) / (k * (2 * k + 1))
    const = (k + 1 - 2 * h) / ((2 * k + 1) ** 2 * (2 * (2 * k / (2 * k + 1)) ** k - 1))
    return slope * n + const


# ---------------------------------------------------------------------------
# moment tables

@dataclass
class MomentTable:
    k: int
    n: int
    means: dict[int, Fraction] = field(default_factory=dict)
    covariances: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    means_by_root: dict[tuple[int, int], Fraction] = field(default_factory=dict)


def _check_table_n(n: int):
    if n < 2:
        raise InvalidParams("moment tables need n >= 2")


def moment_table_plane_k3(n: int) -> MomentTable:
    _check_table_n(n)
    F = Fraction
    a, b = 4 * n - 5, 3 * n - 2
    cov = {
        (1, 1): F(n * (3 * n - 4), 4 * a),
        (1, 2): F(-n, 6),
        (1, 3): F(-n * (n - 2), 12 * a),
        (2, 2): F(2 * n * (4 * n - 3), 9 * b),
        (2, 3): F(-n * (7 * n - 6), 18 * b),
        (3, 3): F(n * (5 * n - 4) * (13 * n - 18), 36 * b * a),
    }
    for (i, j), v in list(cov.items()):
        cov[j, i] = v
    by_root = {
        (1, 1): F(n * n, 2 * n - 1),
        (1, 2): F(n - 1, 3),
        (1, 3): F((n - 1) * (n + 1), 3 * (2 * n - 1)),
        (2, 1): F(n - 1, 2),
        (2, 2): F(n * n + 3 * n - 1, 3 * n),
        (2, 3): F((n - 2) * (n - 1), 6 * n),
        (3, 1): F(n, 2),
        (3, 2): F((n - 2) * (n - 1), 3 * n - 1),
        (3, 3): F(n * n + 5 * n - 4, 2 * (3 * n - 1)),
    }
    means = {h: avg_plane(3, n, h) for h in (1, 2, 3)}
    return MomentTable(3, n, means, dict(sorted(cov.items())), by_root)


def moment_table_nc_k2(n: int) -> MomentTable:
    _check_table_n(n)
    F = Fraction
    var = F(3 * (2 * n - 1) * (4 * n - 3) * (49 * n * n - 100 * n + 44),
            25 * (5 * n - 6) * (7 * n - 5) ** 2)
    cov = {(1, 1): var, (1, 2): -var, (2, 1): -var, (2, 2): var}
    by_root = {
        (1, 1): F(3 * n * n - n - 1, 5 * n - 4),
        (1, 2): F(2 * n * n - 3 * n + 1, 5 * n - 4),
        (2, 1): F(3 * n - 1, 5),
        (2, 2): F(2 * n + 1, 5),
    }
    means = {h: avg_nc(2, n, h) for h in (1, 2)}
    return MomentTable(2, n, means, cov, by_root)


def moments_by_summation(family: str, k: int, n: int) -> MomentTable:
    """Means, covariances and means-by-root from exact sums over compositions."""
    _check_kn(k, n)
    root_fn, total_fn = _family_fns(family)
    comps = list(compositions(k, n))
    weights = [total_fn(c) for c in comps]
    total = sum(weights)
    labels = range(1, k + 1)
    means = {h: Fraction(sum(w * c[h] for c, w in zip(comps, weights)), total) for h in labels}
    cov = {}
    for i in labels:
        for j in labels:
            second = Fraction(sum(w * c[i] * c[j] for c, w in zip(comps, weights)), total)
            cov[i, j] = second - means[i] * means[j]
    by_root = {}
    for r in labels:
        rw = [root_fn(r, c) for c in comps]
        rtotal = sum(rw)
        for i in labels:
            by_root[r, i] = Fraction(sum(w * c[i] for c, w in zip(comps, rw)), rtotal) \
                if rtotal else Fraction(0)
    return MomentTable(k, n, means, cov, by_root)


def _family_fns(family: str):
    if family == "plane":
        return thm1_root, thm1_total
    if family == "noncrossing":
        return thm2_root, thm2_total
    raise InvalidParams(f"unknown family {family!r}")


@lru_cache(maxsize=None)
def root_count_by_summation(family: str, k: int, n: int, h: int) -> int:
    root_fn, _ = _family_fns(family)
    return sum(root_fn(h, c) for c in compositions(k, n))
