"""Cellular automata on A^G and the exhaustive endomorphism oracle.

A configuration x: G -> A is a base-q code whose digit i is the value at
element i.  The shift action is (g.x)(h) = x(g^-1 h).  A local rule with
memory set S induces tau(x)(g) = rule[(g^-1 . x)|_S]; reading the
restriction at s gives x(g s), so the induced map evaluates the rule on
the pattern (x(g s_0), x(g s_1), ...).  One convention for the action is
fixed here and used everywhere; mixing conventions is the classic bug in
this area, so the projection-rule automaton is pinned by tests to the
code permutation x -> x(. g0).

For finite G a memory set equal to all of G realizes every endomorphism
exactly once, so enumerating all q^(q^|G|) rules is a complete,
duplicate-free census of End(A^G).  Bijective tables are counted with a
vectorized pass; this count is the ground truth the structure-theorem
order must match.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError, ContextMismatchError
from .groups import FiniteGroup

DEFAULT_RULE_BUDGET = 2 ** 20    # max number of local rules to enumerate
DEFAULT_MONOID_LIMIT = 256       # max monoid size for the rank search
_CHUNK = 2 ** 14


@dataclass(frozen=True)
class Configuration:
    """A point of A^G, stored as a base-q code over element positions."""

    group: FiniteGroup
    q: int
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.q ** self.group.order:
            raise ValueError("configuration code out of range")

    def digits(self) -> list[int]:
        out = []
        c = self.code
        for _ in range(self.group.order):
            c, d = divmod(c, self.q)
            out.append(d)
        return out

    @classmethod
    def from_digits(cls, group: FiniteGroup, q: int, digits) -> Configuration:
        code = 0
        for i, d in enumerate(digits):
            code += d * q ** i
        return cls(group, q, code)


def shift(g: int, x: Configuration) -> Configuration:
    """The configuration g.x with (g.x)(h) = x(g^-1 h)."""
    group = x.group
    rows = group._rows()
    ginv_row = rows[group.inv(g)]
    digits = x.digits()
    return Configuration.from_digits(
        group, x.q, [digits[ginv_row[h]] for h in range(group.order)])


@dataclass(frozen=True)
class LocalRule:
    """A memory set S and a total map from A^S patterns to letters."""

    group: FiniteGroup
    q: int
    memory: tuple[int, ...]
    rule: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.memory)) != len(self.memory):
            raise ValueError("memory set has repeated elements")
        if len(self.rule) != self.q ** len(self.memory):
            raise ValueError("rule table must cover every pattern")
        if any(not 0 <= v < self.q for v in self.rule):
            raise ValueError("rule output out of alphabet")

    @classmethod
    def projection(cls, group: FiniteGroup, q: int, element: int) -> LocalRule:
        return cls(group, q, (element,), tuple(range(q)))

    @classmethod
    def constant(cls, group: FiniteGroup, q: int, letter: int) -> LocalRule:
        return cls(group, q, (group.identity,), (letter,) * q)


def apply_rule(rule: LocalRule, x: Configuration) -> Configuration:
    """Evaluate the induced endomorphism pointwise."""
    if (rule.group is not x.group) or rule.q != x.q:
        raise ContextMismatchError("rule and configuration contexts differ")
    group = rule.group
    rows = group._rows()
    q = rule.q
    digits = x.digits()
    out = []
    for g in range(group.order):
        row = rows[g]
        pattern = 0
        for j, s in enumerate(rule.memory):
            pattern += digits[row[s]] * q ** j
        out.append(rule.rule[pattern])
    return Configuration.from_digits(group, q, out)


@lru_cache(maxsize=None)
def _shift_code_table(group: FiniteGroup, q: int) -> list[list[int]]:
    """sc[g][x] = code of g.x, for every group element and configuration code."""
    n = group.order
    rows = group._rows()
    inv = group.inverses()
    powers = [q ** i for i in range(n)]
    total = q ** n
    table = []
    for g in range(n):
        ginv_row = rows[inv[g]]
        col = [0] * total
        for x in range(total):
            digits = []
            c = x
            for _ in range(n):
                c, d = divmod(c, q)
                digits.append(d)
            col[x] = sum(digits[ginv_row[h]] * powers[h] for h in range(n))
        table.append(col)
    return table


class EndomorphismTable:
    """The induced map on configuration codes; equivariance is asserted."""

    __slots__ = ("group", "q", "codes")

    def __init__(self, group: FiniteGroup, q: int, codes, check: bool = True):
        self.group = group
        self.q = q
        self.codes = tuple(int(c) for c in codes)
        if check:
            sc = _shift_code_table(group, q)
            t = self.codes
            for g in range(group.order):
                sg = sc[g]
                for x in range(len(t)):
                    if t[sg[x]] != sg[t[x]]:
                        raise ValueError("table does not commute with the shift")

    def key(self) -> tuple[int, ...]:
        return self.codes

    def is_bijective(self) -> bool:
        return len(set(self.codes)) == len(self.codes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, EndomorphismTable)
                and self.group is other.group and self.q == other.q
                and self.codes == other.codes)

    def __hash__(self) -> int:
        return hash((id(self.group), self.q, self.codes))

    def __repr__(self) -> str:
        return f"EndomorphismTable({self.group.label}, q={self.q}, {self.codes})"


def identity_table(group: FiniteGroup, q: int) -> EndomorphismTable:
    return EndomorphismTable(group, q, range(q ** group.order), check=False)


def compose(t1: EndomorphismTable, t2: EndomorphismTable) -> EndomorphismTable:
    """t1 after t2 (t2 is applied first)."""
    if t1.group is not t2.group or t1.q != t2.q:
        raise ContextMismatchError("cannot compose tables over different contexts")
    return EndomorphismTable(
        t1.group, t1.q, tuple(t1.codes[c] for c in t2.codes), check=False)


def table_from_rule(rule: LocalRule) -> EndomorphismTable:
    """Materialize the induced endomorphism of a local rule."""
    total = rule.q ** rule.group.order
    codes = [apply_rule(rule, Configuration(rule.group, rule.q, x)).code
             for x in range(total)]
    return EndomorphismTable(rule.group, rule.q, codes)


def _rule_count(group: FiniteGroup, q: int) -> int:
    return q ** (q ** group.order)


def enumerate_endomorphisms(group: FiniteGroup, q: int,
                            budget: int = DEFAULT_RULE_BUDGET):
    """Yield the induced table of every local rule with memory set G, once each.

    Distinct rules induce distinct endomorphisms (they disagree on some
    full pattern, hence at the identity on that configuration), so this
    streams all of End(A^G) without deduplication.
    """
    total_rules = _rule_count(group, q)
    if total_rules > budget:
        raise BudgetExceededError(
            f"{total_rules} rules exceed the enumeration budget {budget}")
    n_config = q ** group.order
    sc = _shift_code_table(group, q)
    # output digit at g reads the rule on the code of g^-1 . x
    rows_at = [sc[group.inv(g)] for g in range(group.order)]
    powers = [q ** g for g in range(group.order)]
    for rule_code in range(total_rules):
        rule_digits = []
        c = rule_code
        for _ in range(n_config):
            c, d = divmod(c, q)
            rule_digits.append(d)
        codes = [
            sum(rule_digits[rows_at[g][x]] * powers[g] for g in range(group.order))
            for x in range(n_config)
        ]
        yield EndomorphismTable(group, q, codes)


def count_automorphisms(group: FiniteGroup, q: int,
                        budget: int = DEFAULT_RULE_BUDGET,
                        threads: int = 1) -> int:
    """Number of bijective endomorphism tables, by vectorized enumeration."""
    total_rules = _rule_count(group, q)
    if total_rules > budget:
        raise BudgetExceededError(
            f"{total_rules} rules exceed the enumeration budget {budget}")
    n = group.order
    m = q ** n
    sc = np.array(_shift_code_table(group, q), dtype=np.int64)   # (n, m)
    inv = group.inverses()
    pattern_weights = np.array([q ** i for i in range(m)], dtype=np.int64)
    code_weights = np.array([q ** g for g in range(n)], dtype=np.int64)
    target = np.arange(m, dtype=np.int64)

    def count_block(start: int) -> int:
        stop = min(start + _CHUNK, total_rules)
        rules = np.arange(start, stop, dtype=np.int64)
        digits = (rules[:, None] // pattern_weights[None, :]) % q     # (b, m)
        induced = np.zeros((stop - start, m), dtype=np.int64)
        for g in range(n):
            # output digit at g reads the rule on the code of g^-1 . x
            induced += code_weights[g] * digits[:, sc[inv[g]]]
        # bulk shift-equivariance check for the whole block
        for g in range(n):
            assert np.array_equal(induced[:, sc[g]], sc[g][induced]), \
                "induced table does not commute with the shift"
        return int(np.sum(np.all(np.sort(induced, axis=1) == target, axis=1)))

    starts = range(0, total_rules, _CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(count_block, starts))
    return sum(count_block(s) for s in starts)


def collect_endomorphisms(group: FiniteGroup, q: int,
                          budget: int = DEFAULT_RULE_BUDGET) -> list[EndomorphismTable]:
    return list(enumerate_endomorphisms(group, q, budget=budget))


def unit_group(tables: list[EndomorphismTable]) -> FiniteGroup:
    """The bijective tables as an explicit group (identity listed first)."""
    units = sorted((t for t in tables if t.is_bijective()), key=lambda t: t.codes)
    group, q = tables[0].group, tables[0].q
    ident = identity_table(group, q)
    units.remove(ident)
    units.insert(0, ident)
    index = {t.codes: i for i, t in enumerate(units)}
    k = len(units)
    cay = np.empty((k, k), dtype=np.int32)
    for i, a in enumerate(units):
        for j, b in enumerate(units):
            cay[i, j] = index[compose(a, b).codes]
    return FiniteGroup(cay, f"Units[{group.label},q={q}]", check=True)


@dataclass(frozen=True)
class MonoidRank:
    """Exact rank data for a finite monoid of endomorphism tables."""

    size: int
    rank: int
    unit_count: int
    unit_rank: int
    relative_rank: int


def monoid_rank_bruteforce(tables: list[EndomorphismTable],
                           limit: int = DEFAULT_MONOID_LIMIT) -> MonoidRank:
    """Minimal generating-set sizes by exhaustive increasing-size search.

    Returns the rank of the monoid, of its group of units, and the
    relative rank (fewest non-units that together with all units span
    the whole monoid).  The searches are deliberately shortcut-free.
    """
    if len(tables) > limit:
        raise BudgetExceededError(
            f"monoid has {len(tables)} elements, rank search capped at {limit}")
    group, q = tables[0].group, tables[0].q
    keys = [t.codes for t in tables]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate tables in monoid input")
    index = {k: i for i, k in enumerate(keys)}
    ident = identity_table(group, q).codes
    if ident not in index:
        raise ValueError("monoid input lacks the identity table")
    id_idx = index[ident]
    size = len(tables)

    comp = [[0] * size for _ in range(size)]
    for i, a in enumerate(keys):
        for j, b in enumerate(keys):
            composed = tuple(a[c] for c in b)
            if composed not in index:
                raise ValueError("monoid input not closed under composition")
            comp[i][j] = index[composed]

    def span(seed) -> set[int]:
        seen = {id_idx, *seed}
        work = list(seen)
        while work:
            x = work.pop()
            for y in tuple(seen):
                for z in (comp[x][y], comp[y][x]):
                    if z not in seen:
                        seen.add(z)
                        work.append(z)
        return seen

    def minimal_size(candidates, target) -> int:
        if span(()) >= target:
            return 0
        for k in range(1, len(candidates) + 1):
            for combo in itertools.combinations(candidates, k):
                if span(combo) >= target:
                    return k
        raise AssertionError("search space exhausted without generating")

    units = {i for i, t in enumerate(tables) if t.is_bijective()}
    # a bijective table's inverse permutation must itself be present
    for u in units:
        a = keys[u]
        inv_map = {a[x]: x for x in range(len(a))}
        inv_key = tuple(inv_map[x] for x in range(len(a)))
        if inv_key not in index:
            raise ValueError("unit without inverse in the monoid input")

    everything = set(range(size))
    non_identity = sorted(everything - {id_idx})
    rank = minimal_size(non_identity, everything)
    unit_rank = minimal_size(sorted(units - {id_idx}), units)
    non_units = sorted(everything - units)

    def rel_span(extra) -> set[int]:
        return span(tuple(units) + tuple(extra))

    if rel_span(()) >= everything:
        relative = 0
    else:
        relative = next(
            k for k in range(1, len(non_units) + 1)
            if any(rel_span(c) >= everything
                   for c in itertools.combinations(non_units, k)))

    return MonoidRank(size=size, rank=rank, unit_count=len(units),
                      unit_rank=unit_rank, relative_rank=relative)
