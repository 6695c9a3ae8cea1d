"""Finite groups as explicit Cayley tables.

Conventions used throughout the library:

- Elements are the indices 0..n-1; index 0 is always the identity.
- ``table[a, b]`` is the product a*b.
- Construction order is deterministic per family: cyclic groups list
  powers of the generator, dihedral groups list rotations then
  reflections, direct products list lexicographic pairs (left factor
  major), wreath products list (vector, permutation) pairs with the
  vector major.

Groups here are desk-scale (a few thousand elements at most); a dense
table makes every derived computation a table lookup.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceededError,
    CapacityError,
    NotNormalError,
    NotSubgroupError,
    SpecParseError,
)

DEFAULT_MAX_ORDER = 10080       # construction capacity
DEFAULT_RANK_MAX_SIZE = 3       # exhaustive generating-set search limit
_FULL_ASSOC_LIMIT = 64          # exhaustive associativity check up to here
_ASSOC_SAMPLES = 200_000


class FiniteGroup:
    """A finite group given by its full multiplication table."""

    def __init__(self, table: np.ndarray, label: str, check: bool = True):
        table = np.asarray(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("Cayley table must be square")
        self.table = table
        self.order = int(table.shape[0])
        self.identity = 0
        self.label = label
        self._rows_cache: list[list[int]] | None = None
        self._inverses: list[int] | None = None
        self._orders: list[int] | None = None
        self._class_min_cache: list[int] | None = None
        if check:
            self._validate()

    # -- construction-time validation ------------------------------------

    def _validate(self) -> None:
        t = self.table
        n = self.order
        idx = np.arange(n, dtype=np.int32)
        if t.min() < 0 or t.max() >= n:
            raise ValueError(f"table entries out of range for {self.label}")
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise ValueError(f"index 0 is not the identity in {self.label}")
        if not (np.array_equal(np.sort(t, axis=1), np.tile(idx, (n, 1)))
                and np.array_equal(np.sort(t, axis=0), np.tile(idx, (n, 1)).T)):
            raise ValueError(f"table is not a Latin square in {self.label}")
        if n <= _FULL_ASSOC_LIMIT:
            if not np.array_equal(t[t, :], t[:, t]):
                raise ValueError(f"table is not associative in {self.label}")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise ValueError(f"table failed sampled associativity in {self.label}")

    # -- basic operations --------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def _rows(self) -> list[list[int]]:
        if self._rows_cache is None:
            self._rows_cache = self.table.tolist()
        return self._rows_cache

    def inverses(self) -> list[int]:
        if self._inverses is None:
            inv = [0] * self.order
            rows = self._rows()
            for a in range(self.order):
                inv[a] = rows[a].index(0)
            self._inverses = inv
        return self._inverses

    def inv(self, a: int) -> int:
        return self.inverses()[a]

    def element_orders(self) -> list[int]:
        if self._orders is None:
            rows = self._rows()
            orders = [1] * self.order
            for a in range(1, self.order):
                x, k = a, 1
                while x != 0:
                    x = rows[x][a]
                    k += 1
                orders[a] = k
            self._orders = orders
        return self._orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_cyclic(self) -> bool:
        # independent of the rank search: some element has full order
        return self.order == 1 or max(self.element_orders()) == self.order

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 * x * g."""
        rows = self._rows()
        return rows[rows[self.inv(g)][x]][g]

    def _class_min(self) -> list[int]:
        """Least index in the conjugacy class of each element."""
        if self._class_min_cache is None:
            rows = self._rows()
            inv = self.inverses()
            n = self.order
            cmin = list(range(n))
            for x in range(n):
                m = x
                for g in range(n):
                    y = rows[rows[inv[g]][x]][g]
                    if y < m:
                        m = y
                cmin[x] = m
            self._class_min_cache = cmin
        return self._class_min_cache

    def subgroup(self, members, label: str | None = None) -> FiniteGroup:
        """The subgroup on `members` as a standalone group (reindexed)."""
        elems = sorted(set(members))
        if elems[0] != 0:
            raise NotSubgroupError("subgroup must contain the identity")
        pos = {e: i for i, e in enumerate(elems)}
        rows = self._rows()
        k = len(elems)
        sub = np.empty((k, k), dtype=np.int32)
        for i, a in enumerate(elems):
            row = rows[a]
            for j, b in enumerate(elems):
                p = row[b]
                if p not in pos:
                    raise NotSubgroupError("member set is not closed")
                sub[i, j] = pos[p]
        return FiniteGroup(sub, label or f"{self.label}|sub{k}", check=False)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


@dataclass(frozen=True)
class ElementSubset:
    """A subset of a group's element indices (subgroups, generating sets)."""

    group: FiniteGroup
    members: frozenset[int]

    def __post_init__(self):
        n = self.group.order
        if any(not (0 <= m < n) for m in self.members):
            raise ValueError("subset members out of range")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)


# -- named families ---------------------------------------------------------


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int32), "C1", check=False)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    idx = np.arange(n, dtype=np.int32)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, f"C{n}", check=False)


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group named by its ORDER (rotations first, then reflections)."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and >= 2")
    n = order // 2
    table = np.empty((order, order), dtype=np.int32)
    # element b*n + k is (reflection^b) * (rotation^k)
    for b in (0, 1):
        for k in range(n):
            for c in (0, 1):
                for l in range(n):
                    kk = (l - k) % n if c else (l + k) % n
                    table[b * n + k, c * n + l] = (b ^ c) * n + kk
    return FiniteGroup(table, f"D{order}", check=True)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on permutation tuples in lexicographic order; (p*q)(i) = p(q(i))."""
    perms = list(itertools.permutations(range(n)))
    return FiniteGroup(_perm_table(perms), f"S{n}", check=True)


def alternating_group(n: int) -> FiniteGroup:
    perms = [p for p in itertools.permutations(range(n)) if _perm_sign(p) == 1]
    return FiniteGroup(_perm_table(perms), f"A{n}", check=True)


def _perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _perm_table(perms) -> np.ndarray:
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.empty((m, m), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[t]] for t in range(len(p)))]
    return table


def quaternion_group() -> FiniteGroup:
    """Q8 with elements ordered 1, -1, i, -i, j, -j, k, -k."""
    def mul(a, b):
        sa, ta = a
        sb, tb = b
        if ta == 0:
            return (sa * sb, tb)
        if tb == 0:
            return (sa * sb, ta)
        if ta == tb:
            return (-sa * sb, 0)
        # i*j=k, j*k=i, k*i=j and anticommutativity
        rules = {(1, 2): (1, 3), (2, 1): (-1, 3), (2, 3): (1, 1),
                 (3, 2): (-1, 1), (3, 1): (1, 2), (1, 3): (-1, 2)}
        s, t = rules[(ta, tb)]
        return (s * sa * sb, t)

    elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    index = {e: i for i, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int32)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[mul(a, b)]
    return FiniteGroup(table, "Q8", check=True)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    n1, n2 = g1.order, g2.order
    t1, t2 = g1.table.astype(np.int64), g2.table.astype(np.int64)
    big = np.repeat(np.repeat(t1, n2, axis=0), n2, axis=1) * n2 + np.tile(t2, (n1, n1))
    return FiniteGroup(big, f"{g1.label}x{g2.label}", check=False)


def wreath_product(base: FiniteGroup, degree: int,
                   max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """base wr S_degree over pairs (v, phi): (v;phi)(w;psi) = (v * w^phi; phi psi).

    w^phi permutes coordinates by reading w at phi(t); the permutation
    coordinate composes as "phi first, then psi", which is what makes the
    displayed product associative.
    """
    if degree < 1:
        raise ValueError("wreath degree must be >= 1")
    c = base.order
    perms = list(itertools.permutations(range(degree)))
    fact = len(perms)
    order = c ** degree * fact
    if order > max_order:
        raise CapacityError(
            f"wreath order {order} exceeds capacity {max_order}")
    perm_idx = {p: i for i, p in enumerate(perms)}
    vecs = list(itertools.product(range(c), repeat=degree))
    vec_idx = {v: i for i, v in enumerate(vecs)}
    brows = base._rows()
    table = np.empty((order, order), dtype=np.int32)
    for (vi, v), (pi, phi) in itertools.product(enumerate(vecs), enumerate(perms)):
        a = vi * fact + pi
        row = table[a]
        for (wi, w), (qi, psi) in itertools.product(enumerate(vecs), enumerate(perms)):
            pv = tuple(brows[v[t]][w[phi[t]]] for t in range(degree))
            pp = tuple(psi[phi[t]] for t in range(degree))
            row[wi * fact + qi] = vec_idx[pv] * fact + perm_idx[pp]
    return FiniteGroup(table, f"{base.label}wrS{degree}", check=True)


# -- group-spec grammar ------------------------------------------------------
#
#   atom     := C<n> | D<m> (m even, m >= 6) | S<n> (n <= 5) | A<n> (n <= 5) | Q8
#   factor   := atom | atom "wr" S<a>
#   spec     := factor ("x" factor)*
#
# "wr" binds tighter than "x"; dihedral groups are named by their ORDER.

_ATOM_RE = re.compile(r"^(C|D|S|A)(\d+)$|^Q8$")


def _atom_order(atom: str) -> int:
    m = _ATOM_RE.match(atom)
    if not m:
        raise SpecParseError(f"bad atom {atom!r}")
    if atom == "Q8":
        return 8
    kind, num = m.group(1), int(m.group(2))
    if kind == "C":
        if num < 1:
            raise SpecParseError(f"C<n> needs n >= 1, got {atom!r}")
        return num
    if kind == "D":
        if num % 2 or num < 6:
            raise SpecParseError(f"D<m> needs even m >= 6, got {atom!r}")
        return num
    if num < 1 or num > 5:
        raise SpecParseError(f"{kind}<n> needs 1 <= n <= 5, got {atom!r}")
    return math.factorial(num) if kind == "S" else max(1, math.factorial(num) // 2)


def _build_atom(atom: str) -> FiniteGroup:
    if atom == "Q8":
        return quaternion_group()
    kind, num = atom[0], int(atom[1:])
    if kind == "C":
        return cyclic_group(num)
    if kind == "D":
        return dihedral_group(num)
    if kind == "S":
        return symmetric_group(num)
    return alternating_group(num)


def spec_order(spec: str) -> int:
    """Order of the group a spec string denotes, without building it."""
    total = 1
    for factor in _split_spec(spec):
        if len(factor) == 2:
            atom, deg = factor
            total *= _atom_order(atom) ** deg * math.factorial(deg)
        else:
            total *= _atom_order(factor[0])
    return total


def _split_spec(spec: str) -> list[tuple]:
    if not spec or not re.fullmatch(r"[A-Z0-9a-z]+", spec):
        raise SpecParseError(f"bad group spec {spec!r}")
    factors = []
    for part in spec.split("x"):
        if "wr" in part:
            pieces = part.split("wr")
            if len(pieces) != 2:
                raise SpecParseError(f"nested 'wr' not supported in {part!r}")
            left, right = pieces
            m = re.fullmatch(r"S(\d+)", right)
            if not m:
                raise SpecParseError(f"'wr' right operand must be S<a>, got {right!r}")
            deg = int(m.group(1))
            if deg < 1:
                raise SpecParseError(f"wreath degree must be >= 1 in {part!r}")
            _atom_order(left)  # validates the atom
            factors.append((left, deg))
        else:
            _atom_order(part)
            factors.append((part,))
    return factors


def construct_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build the group a spec string denotes (deterministic table)."""
    factors = _split_spec(spec)
    order = spec_order(spec)
    if order > max_order:
        raise CapacityError(f"order {order} of {spec!r} exceeds capacity {max_order}")
    parts = []
    for factor in factors:
        if len(factor) == 2:
            parts.append(wreath_product(_build_atom(factor[0]), factor[1],
                                        max_order=max_order))
        else:
            parts.append(_build_atom(factor[0]))
    group = parts[0]
    for extra in parts[1:]:
        group = direct_product(group, extra)
    group.label = spec
    return group


def group_from_cayley_file(path: str) -> FiniteGroup:
    """Load a group from a plain-text table: first line n, then n rows."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise SpecParseError(f"empty Cayley file {path!r}")
    try:
        n = int(tokens[0])
        entries = [int(t) for t in tokens[1:]]
    except ValueError as exc:
        raise SpecParseError(f"non-integer token in Cayley file {path!r}") from exc
    if n < 1 or len(entries) != n * n:
        raise SpecParseError(
            f"Cayley file {path!r} declares n={n} but has {len(entries)} entries")
    table = np.array(entries, dtype=np.int32).reshape(n, n)
    try:
        return FiniteGroup(table, f"cayley:{path}", check=True)
    except ValueError as exc:
        raise SpecParseError(f"invalid Cayley table in {path!r}: {exc}") from exc


# -- closure, rank, isomorphism, quotients -----------------------------------


def _closure_members(rows: list[list[int]], gens) -> list[int]:
    """Elements of the submonoid generated by gens (= subgroup, G finite)."""
    n = len(rows)
    seen = bytearray(n)
    seen[0] = 1
    members = [0]
    stack = [0]
    gens = [g for g in gens if g]
    for g in gens:
        if not seen[g]:
            seen[g] = 1
            members.append(g)
            stack.append(g)
    while stack:
        x = stack.pop()
        row = rows[x]
        for g in gens:
            y = row[g]
            if not seen[y]:
                seen[y] = 1
                members.append(y)
                stack.append(y)
    return members


def subgroup_closure(group: FiniteGroup, gens) -> ElementSubset:
    """Smallest subgroup containing `gens` (empty set gives the trivial one)."""
    if isinstance(gens, ElementSubset):
        gens = gens.members
    members = _closure_members(group._rows(), gens)
    assert group.order % len(members) == 0, "Lagrange violated: bad table?"
    return ElementSubset(group, frozenset(members))


def group_rank_bruteforce(group: FiniteGroup,
                          max_size: int = DEFAULT_RANK_MAX_SIZE) -> int:
    """Minimal size of a generating set, by exhaustive increasing-size search.

    The first (least-index) candidate element is restricted to conjugacy-class
    minima: conjugating a generating set by a fixed element yields another
    one of the same size, so some witness always has a class-minimal minimum.
    Raises BudgetExceededError when no set of size <= max_size generates.
    """
    n = group.order
    if n == 1:
        return 0
    rows = group._rows()
    cmin = group._class_min()
    firsts = [x for x in range(1, n) if cmin[x] == x]
    for k in range(1, max_size + 1):
        for first in firsts:
            for rest in itertools.combinations(range(first + 1, n), k - 1):
                if len(_closure_members(rows, (first,) + rest)) == n:
                    return k
    raise BudgetExceededError(
        f"no generating set of size <= {max_size} in {group.label} "
        f"(order {n}); rank search budget exhausted")


def _generating_sequence(group: FiniteGroup) -> list[int]:
    """Greedy deterministic generating sequence (ascending first-new element)."""
    rows = group._rows()
    gens: list[int] = []
    closed = {0}
    for x in range(group.order):
        if x not in closed:
            gens.append(x)
            closed = set(_closure_members(rows, gens))
            if len(closed) == group.order:
                break
    return gens


def _extend_homomorphism(rows1, rows2, gens, images, n):
    """Map <gens> -> <images> by words; None if inconsistent or non-injective."""
    phi = {0: 0}
    members = [0]
    i = 0
    while i < len(members):
        x = members[i]
        i += 1
        fx = phi[x]
        for g, t in zip(gens, images):
            y = rows1[x][g]
            fy = rows2[fx][t]
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                phi[y] = fy
                members.append(y)
    if len(set(phi.values())) != len(phi):
        return None
    return phi


def is_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    """Exact isomorphism test by backtracking over generator images."""
    if g1.order != g2.order:
        return False
    n = g1.order
    if n == 1:
        return True
    ord1, ord2 = g1.element_orders(), g2.element_orders()
    if sorted(ord1) != sorted(ord2):
        return False
    if g1.is_abelian() != g2.is_abelian():
        return False
    rows1, rows2 = g1._rows(), g2._rows()
    gens = _generating_sequence(g1)
    by_order: dict[int, list[int]] = {}
    for x in range(n):
        by_order.setdefault(ord2[x], []).append(x)

    def backtrack(idx: int, images: list[int]) -> bool:
        if idx == len(gens):
            phi = _extend_homomorphism(rows1, rows2, gens, images, n)
            return phi is not None and len(phi) == n
        for t in by_order.get(ord1[gens[idx]], ()):
            trial = images + [t]
            if _extend_homomorphism(rows1, rows2, gens[: idx + 1], trial, n) is None:
                continue
            if backtrack(idx + 1, trial):
                return True
        return False

    return backtrack(0, [])


def is_normal_subset(group: FiniteGroup, members: frozenset[int]) -> bool:
    rows = group._rows()
    inv = group.inverses()
    for g in range(group.order):
        ig = inv[g]
        for h in members:
            if rows[rows[ig][h]][g] not in members:
                return False
    return True


def quotient_group(group: FiniteGroup, normal: ElementSubset) -> FiniteGroup:
    """Coset table of G/N; cosets are listed by ascending minimal element."""
    members = normal.members if isinstance(normal, ElementSubset) else frozenset(normal)
    rows = group._rows()
    closed = frozenset(_closure_members(rows, members))
    if closed != (members | {0}):
        raise NotSubgroupError("quotient by a non-subgroup")
    members = closed
    if not is_normal_subset(group, members):
        raise NotNormalError("quotient by a non-normal subgroup")
    n = group.order
    coset_rep = [-1] * n
    reps: list[int] = []
    for a in range(n):
        if coset_rep[a] == -1:
            # scanning ascending, a is the least element of its coset aN
            for h in members:
                coset_rep[rows[a][h]] = a
            reps.append(a)
    pos = {r: i for i, r in enumerate(reps)}
    k = len(reps)
    qt = np.empty((k, k), dtype=np.int32)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            qt[i, j] = pos[coset_rep[rows[a][b]]]
    return FiniteGroup(qt, f"{group.label}/N{len(members)}", check=True)


def center(group: FiniteGroup) -> ElementSubset:
    rows = group._rows()
    n = group.order
    members = frozenset(
        z for z in range(n) if all(rows[z][g] == rows[g][z] for g in range(n)))
    return ElementSubset(group, members)
