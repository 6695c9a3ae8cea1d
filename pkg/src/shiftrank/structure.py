"""Orbit censuses of the shift action and the structure of Aut(A^G).

For a finite group G acting on configurations x: G -> A by
(g.x)(h) = x(g^-1 h), every orbit is classified by the conjugacy class
of its stabilizer.  Two independent routes compute the per-class orbit
counts:

- the closed form: configurations fixed by a subgroup K are exactly
  those constant on the [G:K] right cosets of K, so Möbius inversion
  over the subgroup lattice counts configurations whose stabilizer is
  exactly H, and dividing by [N_G(H):H] (the number of points per orbit
  whose stabilizer equals H, not merely a conjugate) gives the orbit
  count;
- a brute-force census that enumerates every configuration, computes
  its stabilizer elementwise and groups orbits by scanning codes in
  increasing order.

The first is the production path; the second is the binding oracle.
Matching censuses then instantiate the wreath-product decomposition of
the automorphism group of the full shift, whose exact order the
cellular-automaton oracle must reproduce.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import BudgetExceededError, CapacityError, InexactDivisionError
from .groups import DEFAULT_MAX_ORDER, FiniteGroup, direct_product, wreath_product
from .lattice import SubgroupLattice, enumerate_lattice

DEFAULT_CENSUS_BUDGET = 2 ** 24


@dataclass(frozen=True)
class CensusEntry:
    class_id: int
    index: int              # [G:H] for the class representative H
    orbit_count: int
    quotient: FiniteGroup   # N_G(H)/H


@dataclass(frozen=True)
class OrbitCensus:
    """Orbit counts of the shift action, one entry per subgroup class."""

    group: FiniteGroup
    q: int
    lattice: SubgroupLattice
    entries: tuple[CensusEntry, ...]

    def counts(self) -> list[tuple[int, int, int]]:
        return [(e.class_id, e.index, e.orbit_count) for e in self.entries]

    def entry_for_whole_group(self) -> CensusEntry:
        return next(e for e in self.entries if e.index == 1)

    def __post_init__(self):
        _check_census_invariants(self)


def burnside_orbit_total(group: FiniteGroup, q: int) -> int:
    """(1/|G|) * sum over g of q^(|G|/ord(g)), exactly."""
    n = group.order
    total = sum(q ** (n // o) for o in group.element_orders())
    assert total % n == 0, "Burnside sum not divisible by |G|"
    return total // n


def _check_census_invariants(census: OrbitCensus) -> None:
    n = census.group.order
    q = census.q
    weighted = 0
    for e in census.entries:
        assert e.orbit_count >= 0
        weighted += e.orbit_count * e.index
    assert weighted == q ** n, "orbit sizes do not cover the configuration space"
    assert sum(e.orbit_count for e in census.entries) == burnside_orbit_total(
        census.group, q), "orbit total disagrees with the Burnside count"
    assert census.entry_for_whole_group().orbit_count == q, \
        "constant configurations must give exactly q singleton orbits"
    for e in census.entries:
        if e.orbit_count == 1:
            assert e.index == 2 and q == 2, "orbit count 1 outside the index-2/q=2 case"
        if e.index == 2 and q == 2:
            assert e.orbit_count == 1, "index-2 class at q=2 must have exactly one orbit"
        if q >= 3:
            assert e.orbit_count >= 3, "every class must carry >= 3 orbits when q >= 3"


def orbit_census(lattice: SubgroupLattice, q: int) -> OrbitCensus:
    """Per-class orbit counts via Möbius inversion over the lattice."""
    if q < 2:
        raise ValueError("alphabet size must be >= 2")
    group = lattice.group
    n = group.order
    entries = []
    for cid, rep in enumerate(lattice.class_reps):
        exact_fixed = 0
        for k in lattice.above[rep]:
            exact_fixed += lattice.mobius(rep, k) * q ** lattice.subgroup_index(k)
        norm_index = len(lattice.normalizers[rep]) // lattice.subgroup_order(rep)
        if exact_fixed % norm_index:
            raise InexactDivisionError(
                f"class {cid} of {group.label}: {exact_fixed} not divisible by "
                f"[N:H]={norm_index}")
        entries.append(CensusEntry(
            class_id=cid,
            index=lattice.subgroup_index(rep),
            orbit_count=exact_fixed // norm_index,
            quotient=lattice.class_quotient(cid),
        ))
    return OrbitCensus(group=group, q=q, lattice=lattice, entries=tuple(entries))


def _shift_position_maps(group: FiniteGroup) -> list[list[int]]:
    """perm[g][h] = g^-1 h: the position supplying digit h after shifting by g."""
    rows = group._rows()
    inv = group.inverses()
    return [rows[inv[g]] for g in range(group.order)]


def _census_scan(group, q, lattice, codes):
    """Tally orbit minima with their stabilizer classes over an iterable of codes."""
    n = group.order
    perms = _shift_position_maps(group)
    powers = [q ** i for i in range(n)]
    counts = [0] * len(lattice.classes)
    for x in codes:
        digits = []
        c = x
        for _ in range(n):
            c, d = divmod(c, q)
            digits.append(d)
        is_min = True
        stab = []
        for g in range(n):
            pg = perms[g]
            code = 0
            for h in range(n):
                code += digits[pg[h]] * powers[h]
            if code < x:
                is_min = False
                break
            if code == x:
                stab.append(g)
        if not is_min:
            continue
        sub = lattice.index_of[frozenset(stab)]
        counts[lattice.class_of[sub]] += 1
    return counts


def orbit_census_bruteforce(group: FiniteGroup, q: int,
                            lattice: SubgroupLattice | None = None,
                            budget: int = DEFAULT_CENSUS_BUDGET,
                            threads: int = 1) -> OrbitCensus:
    """Exhaustive orbit census; independent of the Möbius route.

    Configurations are base-q codes (digit i is the value at element i);
    each orbit is counted at its least code.  Shares only the lattice's
    class identification with the formula path.
    """
    if q < 2:
        raise ValueError("alphabet size must be >= 2")
    n = group.order
    total = q ** n
    if total > budget:
        raise BudgetExceededError(
            f"census needs {total} configurations, budget is {budget}")
    if lattice is None:
        lattice = enumerate_lattice(group)
    if threads > 1:
        block = (total + threads - 1) // threads
        ranges = [range(s, min(s + block, total)) for s in range(0, total, block)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(
                lambda r: _census_scan(group, q, lattice, r), ranges))
        counts = [sum(p[c] for p in partials) for c in range(len(lattice.classes))]
    else:
        counts = _census_scan(group, q, lattice, range(total))
    entries = tuple(CensusEntry(
        class_id=cid,
        index=lattice.subgroup_index(rep),
        orbit_count=counts[cid],
        quotient=lattice.class_quotient(cid),
    ) for cid, rep in enumerate(lattice.class_reps))
    return OrbitCensus(group=group, q=q, lattice=lattice, entries=entries)


@dataclass(frozen=True)
class AutDecomposition:
    """Aut(A^G) as a product of wreath factors (N_G(H)/H) wr S_degree."""

    group: FiniteGroup
    q: int
    factors: tuple[tuple[FiniteGroup, int], ...]   # (quotient, degree), class order
    order: int

    def nontrivial_factors(self) -> list[tuple[FiniteGroup, int]]:
        return [(quot, deg) for quot, deg in self.factors if deg >= 1]


def aut_decomposition(census: OrbitCensus) -> AutDecomposition:
    """Instantiate the wreath-product decomposition from an orbit census."""
    factors = tuple((e.quotient, e.orbit_count) for e in census.entries)
    order = 1
    for quot, deg in factors:
        order *= quot.order ** deg * math.factorial(deg)
    return AutDecomposition(group=census.group, q=census.q,
                            factors=factors, order=order)


def realize_aut_group(decomp: AutDecomposition,
                      max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Materialize the decomposition as an explicit Cayley table."""
    if decomp.order > max_order:
        raise CapacityError(
            f"Aut order {decomp.order} exceeds capacity {max_order}")
    parts = [wreath_product(quot, deg, max_order=max_order)
             for quot, deg in decomp.nontrivial_factors()]
    group = parts[0]
    for extra in parts[1:]:
        group = direct_product(group, extra)
    group.label = f"Aut[{decomp.group.label},q={decomp.q}]"
    assert group.order == decomp.order
    return group
