"""Certified rank bounds for Aut(A^G) and End(A^G) over finite groups.

Every bound is evaluated exactly as stated, with explicit q=2 vs q>=3
branch selection; the epsilon terms of the cyclic and dihedral formulas
are never estimated, they only set the width of the returned interval.
All provenance strings name the producing formula and its parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, DegreeError, NotDedekindError
from .groups import FiniteGroup, cyclic_group
from .lattice import LatticeStats, SubgroupLattice, enumerate_lattice, lattice_stats

DEFAULT_CHAIN_DEPTH_MAX = 10


@dataclass(frozen=True)
class DivisorStats:
    """Divisor counts of n: total, odd and even."""

    n: int
    d: int
    d_minus: int
    d_plus: int


def divisor_stats(n: int) -> DivisorStats:
    if n < 1:
        raise ValueError("n must be positive")
    divisors = [k for k in range(1, n + 1) if n % k == 0]
    odd = sum(1 for k in divisors if k % 2)
    return DivisorStats(n=n, d=len(divisors), d_minus=odd, d_plus=len(divisors) - odd)


@dataclass(frozen=True)
class RankInterval:
    """A certified [lower, upper] pair with endpoint provenance.

    upper is None for an unbounded interval.  epsilon_slack records how
    much of the width comes from an unevaluated epsilon term.
    """

    lower: int
    upper: int | None
    lower_source: str
    upper_source: str
    epsilon_slack: int | None = None

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError("empty rank interval")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def width(self) -> int | None:
        return None if self.upper is None else self.upper - self.lower

    def contains(self, value: int) -> bool:
        return self.lower <= value and (self.upper is None or value <= self.upper)


def cyclic_rank_interval(n: int, q: int) -> RankInterval:
    """Rank of Aut(A^{Z_n}): exact for n a power of two, an interval otherwise."""
    if n < 2 or q < 2:
        raise ValueError("need n >= 2 and q >= 2")
    if n & (n - 1) == 0:
        k = n.bit_length() - 1
        value = 2 * k if q == 2 else 2 * k + 1
        src = f"cyclic-power-of-two(k={k},q={'2' if q == 2 else '>=3'})"
        return RankInterval(value, value, src, src, epsilon_slack=0)
    ds = divisor_stats(n)
    if q == 2 and n % 2 == 0:
        base = ds.d + ds.d_plus - 1
        branch = "q=2,n-even"
    else:
        base = ds.d + ds.d_plus
        branch = "q=2,n-odd" if q == 2 else "q>=3"
    slack = ds.d - ds.d_plus - 2
    return RankInterval(
        base, base + slack,
        f"cyclic-divisor-formula({branch},n={n},eps=0)",
        f"cyclic-divisor-formula({branch},n={n},eps=d-d_plus-2={slack})",
        epsilon_slack=slack)


def dihedral_rank_interval(n: int, q: int) -> RankInterval:
    """Rank of Aut(A^{D_{2n}}) for the dihedral group of order 2n, n >= 3."""
    if n < 3 or q < 2:
        raise ValueError("need n >= 3 and q >= 2")
    d2 = divisor_stats(2 * n)
    dn = divisor_stats(n)
    if n % 2 == 1 and q == 2:
        base, branch = d2.d_minus + 2 * d2.d_plus - 1, "n-odd,q=2"
    elif n % 2 == 1:
        base, branch = d2.d_minus + 2 * d2.d_plus, "n-odd,q>=3"
    elif q == 2:
        base, branch = d2.d_minus + 2 * d2.d_plus + 2 * dn.d_plus - 1, "n-even,q=2"
    else:
        base, branch = d2.d_minus + 2 * d2.d_plus + 4 * dn.d_plus, "n-even,q>=3"
    slack = d2.d - 2 if q == 2 else d2.d - 1
    return RankInterval(
        base, base + slack,
        f"dihedral-divisor-formula({branch},order={2*n},eps=0)",
        f"dihedral-divisor-formula({branch},order={2*n},eps=max={slack})",
        epsilon_slack=slack)


def dedekind_upper_bound(stats: LatticeStats, rank_g: int, q: int) -> int:
    """(r - r_P - 1)*Rank(G) + 2r - r_2 - 1 for q=2, without the tail for q>=3."""
    if not stats.is_dedekind:
        raise NotDedekindError("Dedekind bound requested for a non-Dedekind group")
    head = (stats.r - stats.r_p - 1) * rank_g
    if q == 2:
        return head + 2 * stats.r - stats.r_at(2) - 1
    return head + 2 * stats.r


def end_relative_rank_upper_bound(stats: LatticeStats, q: int) -> int:
    """Upper bound on how many non-units must be added to the units to span End."""
    base = math.comb(stats.r, 2) + stats.r
    return base - stats.r_at(2) if q == 2 else base


def dedekind_end_upper_bound(stats: LatticeStats, rank_g: int, q: int) -> int:
    """Dedekind Aut bound plus the relative-rank bound = End(A^G) bound."""
    return dedekind_upper_bound(stats, rank_g, q) + end_relative_rank_upper_bound(stats, q)


@dataclass(frozen=True)
class LogUpperBound:
    """A real-valued bound c + e*log2(n) with its exact integer ceiling."""

    value: float
    ceiling: int
    source: str


def general_upper_bound(stats: LatticeStats, group: FiniteGroup, q: int) -> LogUpperBound:
    """(r - r_P - 1)*log2|G| + 2r - r_2 - 1 (q=2) or + 2r (q>=3), any finite G."""
    e = stats.r - stats.r_p - 1
    tail = 2 * stats.r - stats.r_at(2) - 1 if q == 2 else 2 * stats.r
    n = group.order
    value = e * math.log2(n) + tail
    # exact ceiling: smallest t with 2^t >= n^e, via big integers
    power = n ** e
    ceiling = tail + (power - 1).bit_length()
    return LogUpperBound(
        value=value, ceiling=ceiling,
        source=f"log2-upper({'q=2' if q == 2 else 'q>=3'},r={stats.r},"
               f"rP={stats.r_p},order={n})")


def permutation_upper_bound(stats: LatticeStats, degree: int, q: int) -> int:
    """(r - 1)*floor(degree/2) + 2r - r_2 - 1 (q=2) or + 2r (q>=3), degree > 3."""
    if degree <= 3:
        raise DegreeError("permutation bound needs embedding degree > 3")
    head = (stats.r - 1) * (degree // 2)
    if q == 2:
        return head + 2 * stats.r - stats.r_at(2) - 1
    return head + 2 * stats.r


def rank_lower_bound(stats: LatticeStats, q: int) -> int:
    """r - r_2 for q=2, r otherwise."""
    return stats.r - stats.r_at(2) if q == 2 else stats.r


def wreath_factor_rank_bound(lattice: SubgroupLattice, class_id: int, q: int,
                             srank: int | None = None) -> int:
    """Rank bound for one wreath factor (N_G(H)/H) wr S_degree.

    Prime index p gives 1 (p=2, q=2) or 2; otherwise the subgroup-rank
    cap min(SRank(G), floor(log2|G|)) + 2 applies.
    """
    rep = lattice.class_reps[class_id]
    index = lattice.subgroup_index(rep)
    if index > 1 and _is_prime(index):
        return 1 if index == 2 and q == 2 else 2
    log_cap = lattice.group.order.bit_length() - 1
    if srank is None:
        srank = lattice_stats(lattice).srank
    cap = log_cap if srank is None else min(srank, log_cap)
    return cap + 2


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ChainLevel:
    """One quotient in a descending-chain demonstration."""

    label: str
    order: int
    class_count: int
    lower_bound: int
    normal_subgroup_count: int


CHAIN_FAMILIES = {
    # quotients of Z by the chain 2Z > 4Z > ...: G/N_i = C_{2^i}
    "c2pow": lambda i: cyclic_group(2 ** i),
}


def chain_growth_demo(family: str = "c2pow", depth: int = 4, q: int = 2,
                      max_depth: int = DEFAULT_CHAIN_DEPTH_MAX) -> list[ChainLevel]:
    """Lower bounds along a descending chain of finite quotients.

    Checks, level by level, that the quotient has at least i+1 normal
    subgroups and that the running maximum of the lower bounds reaches i,
    which is what forces End(A^G) of the limit group to be non-finitely
    generated.
    """
    if family not in CHAIN_FAMILIES:
        raise ValueError(f"unknown chain family {family!r}")
    if depth < 1 or depth > max_depth:
        raise CapacityError(f"chain depth must be in 1..{max_depth}")
    build = CHAIN_FAMILIES[family]
    levels = []
    running_max = 0
    for i in range(1, depth + 1):
        group = build(i)
        lat = enumerate_lattice(group, max_order=group.order)
        stats = lattice_stats(lat, with_srank=False)
        lower = rank_lower_bound(stats, q)
        normal = sum(1 for c in lat.classes if len(c) == 1)
        assert normal >= i + 1, "chain quotient lost intermediate normal subgroups"
        running_max = max(running_max, lower)
        assert running_max >= i, "chain lower bounds stopped growing"
        levels.append(ChainLevel(label=group.label, order=group.order,
                                 class_count=stats.r, lower_bound=lower,
                                 normal_subgroup_count=normal))
    return levels
