"""Complete subgroup lattices of small finite groups.

Enumeration seeds with all cyclic subgroups and closes under pairwise
join until a fixed point; every subgroup is a join of cyclic ones, so
the result is exhaustive (an independent all-subsets oracle confirms
this in the test suite for orders <= 16).

Subgroups are stored as explicit element sets, listed by nondecreasing
size (ties broken by the sorted member tuple), so the representative of
each conjugacy class - its lexicographically least member set - is
simply the class member that appears first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, CapacityError, NotComparableError
from .groups import (
    DEFAULT_RANK_MAX_SIZE,
    ElementSubset,
    FiniteGroup,
    _closure_members,
    group_rank_bruteforce,
    quotient_group,
)

DEFAULT_LATTICE_MAX_ORDER = 48


def prime_divisors(n: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    return primes


class SubgroupLattice:
    """All subgroups of a group with containment, classes and normalizers."""

    def __init__(self, group: FiniteGroup, members_list: list[frozenset[int]]):
        self.group = group
        n = group.order
        members_list = sorted(members_list, key=lambda s: (len(s), sorted(s)))
        self._members = members_list
        self.subgroups = [ElementSubset(group, m) for m in members_list]
        self.index_of = {m: i for i, m in enumerate(members_list)}
        m = len(members_list)

        # containment: above[i] = indices of subgroups containing subgroup i
        self.above: list[list[int]] = [
            [j for j in range(m) if members_list[i] <= members_list[j]]
            for i in range(m)
        ]

        # conjugation orbits and normalizers
        rows = group._rows()
        inv = group.inverses()
        cmap = [[rows[rows[inv[g]][x]][g] for x in range(n)] for g in range(n)]
        self.normalizers: list[ElementSubset] = []
        conjugates: list[list[int]] = []
        for i, mem in enumerate(members_list):
            norm = []
            images = set()
            for g in range(n):
                img = frozenset(cmap[g][x] for x in mem)
                if img == mem:
                    norm.append(g)
                j = self.index_of.get(img)
                if j is None:
                    raise AssertionError("conjugate of a subgroup missing: enumeration incomplete")
                images.add(j)
            assert len(images) * len(norm) == n, "orbit-stabilizer violated"
            self.normalizers.append(ElementSubset(group, frozenset(norm)))
            conjugates.append(sorted(images))

        # conjugacy classes in list order; first member is the representative
        self.class_of = [-1] * m
        self.classes: list[list[int]] = []
        self.class_reps: list[int] = []
        for i in range(m):
            if self.class_of[i] == -1:
                cid = len(self.classes)
                cls = conjugates[i]
                for j in cls:
                    self.class_of[j] = cid
                self.classes.append(cls)
                self.class_reps.append(cls[0])

        self._mobius_memo: dict[tuple[int, int], int] = {}

        assert members_list[0] == frozenset({0}), "trivial subgroup missing"
        assert members_list[-1] == frozenset(range(n)), "whole group missing"

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._members)

    def members(self, i: int) -> frozenset[int]:
        return self._members[i]

    def subgroup_order(self, i: int) -> int:
        return len(self._members[i])

    def subgroup_index(self, i: int) -> int:
        return self.group.order // len(self._members[i])

    def leq(self, h: int, k: int) -> bool:
        return self._members[h] <= self._members[k]

    def interval_above(self, h: int, k: int) -> list[int]:
        """All L with H <= L <= K."""
        mk = self._members[k]
        return [j for j in self.above[h] if self._members[j] <= mk]

    def mobius(self, h: int, k: int) -> int:
        """Möbius function of the containment order, memoized per lattice."""
        if not self.leq(h, k):
            raise NotComparableError(f"subgroup {h} not contained in {k}")
        key = (h, k)
        memo = self._mobius_memo
        if key not in memo:
            if h == k:
                memo[key] = 1
            else:
                memo[key] = -sum(
                    self.mobius(h, l) for l in self.interval_above(h, k) if l != k)
        return memo[key]

    def is_normal(self, i: int) -> bool:
        return len(self.classes[self.class_of[i]]) == 1

    def class_quotient(self, cid: int) -> FiniteGroup:
        """N_G(H)/H for the representative H of class cid (memoized)."""
        if not hasattr(self, "_quotient_cache"):
            self._quotient_cache: dict[int, FiniteGroup] = {}
        if cid not in self._quotient_cache:
            rep = self.class_reps[cid]
            norm = self.normalizers[rep].members
            sub = self.group.subgroup(norm, label=f"{self.group.label}|N{cid}")
            order = sorted(norm)
            pos = {e: i for i, e in enumerate(order)}
            inside = frozenset(pos[x] for x in self.members(rep))
            quot = quotient_group(sub, ElementSubset(sub, inside))
            quot.label = f"{self.group.label}|N{cid}/H{cid}"
            self._quotient_cache[cid] = quot
        return self._quotient_cache[cid]


def enumerate_lattice(group: FiniteGroup,
                      max_order: int = DEFAULT_LATTICE_MAX_ORDER) -> SubgroupLattice:
    """Every subgroup of `group`, exactly (cyclic seeding + join closure)."""
    n = group.order
    if n > max_order:
        raise CapacityError(
            f"lattice enumeration capped at order {max_order}, got {n}")
    rows = group._rows()
    gens_of: dict[frozenset[int], tuple[int, ...]] = {}
    for g in range(n):
        mem = frozenset(_closure_members(rows, (g,)))
        if mem not in gens_of:
            gens_of[mem] = (g,) if g else ()
    work = list(gens_of.items())
    i = 0
    while i < len(work):
        mem_i, gens_i = work[i]
        for j in range(i):
            mem_j, gens_j = work[j]
            if mem_i <= mem_j or mem_j <= mem_i:
                continue
            gens = gens_i + gens_j
            joined = frozenset(_closure_members(rows, gens))
            if joined not in gens_of:
                gens_of[joined] = gens
                work.append((joined, gens))
        i += 1
    return SubgroupLattice(group, list(gens_of))


def mobius(lattice: SubgroupLattice, h: int, k: int) -> int:
    return lattice.mobius(h, k)


def is_normal(lattice: SubgroupLattice, h: int) -> bool:
    return lattice.is_normal(h)


@dataclass
class LatticeStats:
    """Per-lattice counts consumed by the rank bounds.

    r is the number of conjugacy classes of subgroups; r_by_index maps a
    subgroup index [G:H] to the number of classes at that index; r_p sums
    r_by_index over the primes dividing |G|.  srank is the maximum rank
    over all subgroups, or None when the rank search budget ran out.
    """

    r: int
    r_by_index: dict[int, int]
    r_p: int
    is_dedekind: bool
    length: int
    srank: int | None

    def r_at(self, i: int) -> int:
        return self.r_by_index.get(i, 0)


def lattice_stats(lattice: SubgroupLattice,
                  rank_max_size: int = DEFAULT_RANK_MAX_SIZE,
                  with_srank: bool = True) -> LatticeStats:
    group = lattice.group
    n = group.order
    r = len(lattice.classes)
    r_by_index: dict[int, int] = {}
    for rep in lattice.class_reps:
        idx = lattice.subgroup_index(rep)
        r_by_index[idx] = r_by_index.get(idx, 0) + 1
    r_p = sum(r_by_index.get(p, 0) for p in prime_divisors(n))
    dedekind = all(len(c) == 1 for c in lattice.classes)

    # longest chain: subgroups are listed by size, so a simple DP works
    longest = [0] * len(lattice)
    for i in range(len(lattice)):
        mi = lattice.members(i)
        best = 0
        for j in range(i):
            if len(lattice.members(j)) < len(mi) and lattice.leq(j, i):
                best = max(best, longest[j])
        longest[i] = best + (1 if len(mi) > 1 else 0)
    length = longest[-1]

    srank: int | None = 0
    if with_srank:
        try:
            for rep in lattice.class_reps:
                sub = group.subgroup(lattice.members(rep))
                srank = max(srank, group_rank_bruteforce(sub, max_size=rank_max_size))
        except BudgetExceededError:
            srank = None
    else:
        srank = None

    return LatticeStats(r=r, r_by_index=r_by_index, r_p=r_p,
                        is_dedekind=dedekind, length=length, srank=srank)
