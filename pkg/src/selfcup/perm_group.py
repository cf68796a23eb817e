"""Finite permutation groups, fully enumerated.

Points are 0-based internally.  The text format used on the command line
is 1-based disjoint cycle notation, e.g. ``"(1 2)(3 4), (1 2 3 4 5 6)"``.
Composition is right-to-left: ``(g * h)(x) == g(h(x))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_ORDER_CAP = 10_080


class PermError(ValueError):
    pass


class GroupSizeError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise PermError(f"not a permutation of 0..{n - 1}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles, one_based: bool = False) -> "Perm":
        img = list(range(n))
        seen = set()
        shift = 1 if one_based else 0
        for cyc in cycles:
            pts = [c - shift for c in cyc]
            for pt in pts:
                if not 0 <= pt < n:
                    raise PermError(f"point {pt + shift} out of range for degree {n}")
                if pt in seen:
                    raise PermError(f"point {pt + shift} repeated in cycle notation")
                seen.add(pt)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.n != self.n:
            raise PermError("degree mismatch")
        return Perm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        out, seen = [], set()
        for start in range(self.n):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (self.n - sum(lengths))
        return tuple(sorted(lengths))

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def order(self) -> int:
        from math import lcm

        return lcm(*self.cycle_type()) if self.n else 1

    def to_cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cyc)

    def padded(self, n: int) -> "Perm":
        if n < self.n:
            raise PermError("cannot shrink a permutation")
        return Perm(self.images + tuple(range(self.n, n)))

    def __repr__(self) -> str:
        return f"Perm({self.to_cycle_string()})"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_generators(text: str, n: int) -> list[Perm]:
    """Parse comma-separated 1-based cycle notation into permutations.

    Commas between cycles of different generators split generators;
    ``"(1 2)(3 4), (1 2 3)"`` gives two generators.  Empty text gives none.
    """
    text = text.strip()
    if not text:
        return []
    gens = []
    depth, start = 0, 0
    pieces = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise PermError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            pieces.append(text[start:i])
            start = i + 1
    if depth:
        raise PermError(f"unbalanced parentheses in {text!r}")
    pieces.append(text[start:])
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            raise PermError(f"empty generator in {text!r}")
        leftover = _CYCLE.sub("", piece).strip()
        if leftover:
            raise PermError(f"unexpected text {leftover!r} in generator {piece!r}")
        cycles = []
        for body in _CYCLE.findall(piece):
            toks = [t for t in re.split(r"[\s,]+", body.strip()) if t]
            try:
                cycles.append([int(t) for t in toks])
            except ValueError as exc:
                raise PermError(f"bad point in {piece!r}") from exc
        gens.append(Perm.from_cycles(n, cycles, one_based=True))
    return gens


class PermGroup:
    """A permutation group with all elements listed in lexicographic order."""

    def __init__(self, n: int, generators, order_cap: int = DEFAULT_ORDER_CAP):
        gens = []
        for g in generators:
            if not isinstance(g, Perm):
                g = Perm(tuple(g))
            if g.n != n:
                raise PermError(f"generator {g} has degree {g.n}, expected {n}")
            gens.append(g)
        self.n = n
        self.generators = tuple(gens)
        self.order_cap = order_cap

        ident = Perm.identity(n)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = g * x
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > order_cap:
                            raise GroupSizeError(f"group order exceeds cap {order_cap}")
            frontier = nxt
        self.elements = tuple(sorted(seen))
        self.index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return self.elements[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.index

    def __repr__(self) -> str:
        gens = ", ".join(g.to_cycle_string() for g in self.generators)
        return f"PermGroup(n={self.n}, order={self.order}, gens=[{gens}])"

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[i, j]`` is the index of ``elements[i] * elements[j]``."""
        nel = self.order
        imgs = np.array([g.images for g in self.elements], dtype=np.int64).reshape(nel, self.n)
        # (g*h)(x) = g(h(x))
        prod = imgs[np.arange(nel)[:, None, None], imgs[None, :, :]]
        if self.n**self.n >= 2**62:
            # base-n codes would overflow; fall back to the index dict
            flat = prod.reshape(-1, self.n)
            return np.array([self.index[Perm(tuple(r))] for r in flat.tolist()]).reshape(nel, nel)
        # elements are sorted lexicographically, so base-n codes are sorted too
        weights = self.n ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        codes = imgs @ weights
        table = np.searchsorted(codes, prod @ weights)
        return table

    @cached_property
    def inverse_index(self) -> np.ndarray:
        return np.array([self.index[g.inverse()] for g in self.elements], dtype=np.int64)

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index[g] for g in self.generators)

    @cached_property
    def words(self) -> list[list[int]]:
        """For each element a word in generator positions evaluating to it.

        ``words[i] == [a, b, c]`` means ``elements[i] == gens[a] * gens[b] * gens[c]``.
        """
        out: list[list[int] | None] = [None] * self.order
        out[0] = []
        frontier = [0]
        table = self.mul_table
        gi = self.generator_indices
        while frontier:
            nxt = []
            for x in frontier:
                for a, g in enumerate(gi):
                    y = int(table[g, x])
                    if out[y] is None:
                        out[y] = [a] + out[x]
                        nxt.append(y)
            frontier = nxt
        return out  # type: ignore[return-value]

    def subgroup(self, generators) -> "PermGroup":
        gens = list(generators)
        for g in gens:
            if g not in self.index:
                raise PermError(f"{g} is not an element of the group")
        return PermGroup(self.n, gens, order_cap=self.order_cap)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.n == other.n and all(g in other.index for g in self.elements)

    def conjugate_set(self, elems, by: Perm) -> frozenset:
        inv = by.inverse()
        return frozenset(by * g * inv for g in elems)

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.generators for b in self.generators)

    def padded(self, n: int) -> "PermGroup":
        return PermGroup(n, [g.padded(n) for g in self.generators], order_cap=self.order_cap)


def group_closure(n: int, gens, order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    return PermGroup(n, gens, order_cap=order_cap)


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup(n, [])
    gens = [Perm.from_cycles(n, [list(range(n))]), Perm.from_cycles(n, [[0, 1]])]
    return PermGroup(n, gens)


def cyclic_subgroup_reps(G: PermGroup) -> list[Perm]:
    """One generator for each conjugacy class of cyclic subgroups of G.

    The generator returned is the first element, in the group's canonical
    order, generating a subgroup of that class.
    """
    seen: set[frozenset] = set()
    reps = []
    for g in G.elements:
        cyc = [G.identity]
        x = g
        while not x.is_identity():
            cyc.append(x)
            x = x * g
        sub = frozenset(cyc)
        if sub in seen:
            continue
        reps.append(g)
        for h in G.elements:
            seen.add(G.conjugate_set(sub, h))
    return reps


def subgroup_classes(G: PermGroup, max_order: int | None = None) -> list[PermGroup]:
    """Representatives of the conjugacy classes of subgroups of G.

    Subgroups are grown one generator at a time from the trivial group;
    every subgroup of order at most ``max_order`` arises that way through
    subgroups that are no larger, so pruning at ``max_order`` is exact.
    """
    cap = G.order if max_order is None else max_order
    table = G.mul_table
    nel = G.order

    def close(elems: set[int], g: int) -> frozenset | None:
        els = set(elems)
        if g in els:
            return frozenset(els)
        frontier = list(els) + [g]
        els.add(g)
        gens = [g] + list(elems)
        while frontier:
            nxt = []
            for x in frontier:
                for y in gens:
                    z = int(table[y, x])
                    if z not in els:
                        els.add(z)
                        nxt.append(z)
                        if len(els) > cap:
                            return None
            frontier = nxt
        return frozenset(els)

    conj = [
        [int(table[table[h, x], G.inverse_index[h]]) for x in range(nel)] for h in range(nel)
    ]

    known: set[frozenset] = set()
    reps: list[frozenset] = []

    def register(sub: frozenset) -> bool:
        if sub in known:
            return False
        reps.append(sub)
        for h in range(nel):
            known.add(frozenset(conj[h][x] for x in sub))
        return True

    register(frozenset([0]))
    queue = [frozenset([0])]
    while queue:
        nxt = []
        for sub in queue:
            done = np.zeros(nel, dtype=bool)
            done[list(sub)] = True
            members = np.fromiter(sub, dtype=np.int64)
            for g in range(nel):
                if done[g]:
                    continue
                # <H, g> only depends on the double coset HgH
                done[table[table[members, g][:, None], members[None, :]].ravel()] = True
                new = close(set(sub), g)
                if new is not None and register(new):
                    nxt.append(new)
        queue = nxt
    out = []
    for sub in sorted(reps, key=lambda s: (len(s), sorted(s))):
        elems = [G.elements[i] for i in sorted(sub)]
        out.append(PermGroup(G.n, _small_generating_set(elems, G), order_cap=G.order_cap))
    return out


def _small_generating_set(elems, G: PermGroup) -> list[Perm]:
    target = len(elems)
    gens: list[Perm] = []
    current = {G.identity}
    for g in elems:
        if g in current:
            continue
        gens.append(g)
        current = set(PermGroup(G.n, gens).elements)
        if len(current) == target:
            break
    return gens
