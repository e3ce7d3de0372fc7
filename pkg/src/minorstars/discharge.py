"""Discharging on plane triangulations with minimum degree five.

Every vertex starts with charge ``deg(v) - 6`` (total -12 by Euler's
formula). Two rule systems move charge between vertices:

* ``thm1`` -- rules R1a-R7c, with the weight function :func:`alpha`;
* ``thm2`` -- rules R1-R4c, with :func:`beta`.

All rule guards read the initial degrees only and every instance fires at
once. Charges are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Sequence

from .planegraph import PlaneGraph, is_triangulation
from .starmatch import NeighborClass, classify_neighbor

RuleSet = Literal["thm1", "thm2"]
RULE_SETS: tuple[RuleSet, ...] = ("thm1", "thm2")

F = Fraction


def alpha(k: int) -> Fraction:
    if k < 8:
        raise ValueError(f"alpha is defined for degree >= 8, got {k}")
    if k == 11:
        return F(2, 5)
    if k in (13, 14):
        return F(1, 2)
    return F(k - 6, k)


def beta(k: int) -> Fraction:
    if k < 8:
        raise ValueError(f"beta is defined for degree >= 8, got {k}")
    return F(k - 6, k)


@dataclass(frozen=True)
class Transfer:
    rule: str
    sender: int
    receiver: int
    amount: Fraction
    anchor: tuple[int, ...]
    hub: int | None = None

    def __post_init__(self):
        assert self.amount > 0, self
        assert self.sender != self.receiver, self
        assert len(set(self.anchor)) == len(self.anchor), self

    def key(self):
        return (self.rule, self.sender, self.receiver, self.amount, frozenset(self.anchor))

    def format(self) -> str:
        """``rule sender receiver p/q (anchor...) [hub]`` with 1-based vertices."""
        anchor = " ".join(str(v + 1) for v in self.anchor)
        amount = f"{self.amount.numerator}/{self.amount.denominator}"
        line = f"{self.rule} {self.sender + 1} {self.receiver + 1} {amount} ({anchor})"
        if self.hub is not None:
            line += f" [{self.hub + 1}]"
        return line


@dataclass(frozen=True)
class DischargeResult:
    rule_set: RuleSet
    initial: tuple[Fraction, ...]
    ledger: tuple[Transfer, ...]
    final: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.final, F(0))

    def check_balance(self) -> bool:
        """Recompute final charges from the ledger and compare."""
        acc = list(self.initial)
        for t in self.ledger:
            acc[t.sender] -= t.amount
            acc[t.receiver] += t.amount
        return tuple(acc) == self.final

    def format_ledger(self) -> str:
        return "".join(t.format() + "\n" for t in self.ledger)


def _rule_sort_key(t: Transfer):
    return (t.sender, t.rule, t.receiver, t.anchor, -1 if t.hub is None else t.hub)


def _neighbor_flags(g: PlaneGraph, v: int) -> Iterator[tuple[int, NeighborClass]]:
    for i in range(g.degree(v)):
        yield i, classify_neighbor(g, v, i)


def _window(rot: Sequence[int], i: int, left: int, right: int) -> tuple[int, ...]:
    k = len(rot)
    return tuple(rot[(i + j) % k] for j in range(-left, right + 1))


def _face_rules(g: PlaneGraph, w: int, weight: Fraction, rule: str) -> Iterator[Transfer]:
    deg = g.degrees
    rot = g.rotation[w]
    k = len(rot)
    for i in range(k):
        a, b = rot[i], rot[(i + 1) % k]
        face = (w, a, b)
        if deg[a] == 5 and deg[b] == 5:
            yield Transfer(rule + "a", w, a, weight / 2, face)
            yield Transfer(rule + "a", w, b, weight / 2, face)
        elif deg[a] == 5:
            yield Transfer(rule + "b", w, a, weight, face)
        elif deg[b] == 5:
            yield Transfer(rule + "b", w, b, weight, face)


def _relay_rules(g: PlaneGraph, w: int, direct: Fraction, single: Fraction, double: Fraction) -> Iterator[Transfer]:
    deg = g.degrees
    rot = g.rotation[w]
    k = len(rot)
    for u in rot:
        yield Transfer("R3", w, u, direct, (w, u))
    for i in range(k):
        for step in (1, -1):
            w0, w1, w2 = rot[i], rot[(i + step) % k], rot[(i + 2 * step) % k]
            if deg[w0] < 6 or deg[w1] != 5:
                continue
            anchor = (w, w0, w1, w2)
            if deg[w2] >= 6:
                yield Transfer("R3a", w0, w1, single, anchor, hub=w)
            else:
                yield Transfer("R3b", w0, w1, double, anchor, hub=w)
                yield Transfer("R3b", w0, w2, double, anchor, hub=w)


def _five_alignments(g: PlaneGraph, w: int) -> Iterator[tuple[int, ...]]:
    rot = g.rotation[w]
    for r in range(5):
        yield tuple(rot[(r + j) % 5] for j in range(5))
        yield tuple(rot[(r - j) % 5] for j in range(5))


def _is_twice_weak(g: PlaneGraph, host: int, v: int) -> bool:
    return NeighborClass.TWICE_WEAK in classify_neighbor(g, host, g.position(host, v))


def _thm1_transfers(g: PlaneGraph) -> Iterator[Transfer]:
    deg = g.degrees
    for w in range(g.n):
        k = deg[w]
        rot = g.rotation[w]
        if k == 7:
            for i, fl in _neighbor_flags(g, w):
                if NeighborClass.STRONG in fl:
                    yield Transfer("R1a", w, rot[i], F(1, 3), _window(rot, i, 1, 1))
                elif NeighborClass.NON_STRONG in fl:
                    yield Transfer("R1b", w, rot[i], F(1, 6), _window(rot, i, 1, 1))
        if k >= 8 and k not in (10, 11):
            yield from _face_rules(g, w, alpha(k), "R2")
        if k in (10, 11):
            yield from _relay_rules(g, w, F(2, 5), F(1, 5), F(1, 10))
        if k == 11:
            for i, fl in _neighbor_flags(g, w):
                if NeighborClass.TWICE_WEAK in fl:
                    yield Transfer("R4", w, rot[i], F(1, 10), _window(rot, i, 2, 2))
        if k in (13, 14):
            for i, fl in _neighbor_flags(g, w):
                if NeighborClass.WEAK in fl:
                    yield Transfer("R5", w, rot[i], F(1, 20), _window(rot, i, 1, 1))
        if k == 5:
            for nb in _five_alignments(g, w):
                yield from _thm1_five_rules(g, w, nb)


def _thm1_five_rules(g: PlaneGraph, w: int, nb: tuple[int, ...]) -> Iterator[Transfer]:
    deg = g.degrees
    d = [deg[u] for u in nb]
    anchor = (w,) + nb
    # R6: neighbours w0..w4 with degrees k0, 5, k2, k3, 5
    if d[1] == 5 and d[4] == 5:
        k0, k2, k3 = d[0], d[2], d[3]
        w0 = nb[0]
        if k2 >= 8 and k3 >= 8 and k0 == 13:
            yield Transfer("R6a", w, w0, F(1, 4), anchor)
        if k0 == 11 and _is_twice_weak(g, w0, w):
            if k2 >= 9 and k3 >= 9:
                yield Transfer("R6b", w, w0, F(1, 2), anchor)
            if k2 == 8 and k3 == 8:
                yield Transfer("R6c", w, w0, F(1, 4), anchor)
        if k2 >= 9 and k3 >= 9 and k0 == 7:
            yield Transfer("R6d", w, w0, F(1, 6), anchor)
    # R7: neighbours w1..w5 with degrees k1, 5, 5, k4 on w1..w4
    if d[1] == 5 and d[2] == 5:
        k1, k4 = d[0], d[3]
        anchor = (w,) + nb[:4]
        if k1 >= 12 and k4 >= 16:
            yield Transfer("R7a", w, nb[2], F(1, 8), anchor)
        if k1 >= 12 and k4 in (13, 14, 15):
            yield Transfer("R7b", w, nb[2], F(1, 20), anchor)
        if k1 == 8 and k4 <= 11:
            yield Transfer("R7c", w, nb[1], F(1, 8), anchor)


def _thm2_transfers(g: PlaneGraph) -> Iterator[Transfer]:
    deg = g.degrees
    for w in range(g.n):
        k = deg[w]
        rot = g.rotation[w]
        if k == 7:
            for i, fl in _neighbor_flags(g, w):
                if fl and NeighborClass.WEAK not in fl:
                    yield Transfer("R1", w, rot[i], F(1, 4), _window(rot, i, 1, 1))
        if k >= 8 and k != 9:
            yield from _face_rules(g, w, beta(k), "R2")
        if k == 9:
            yield from _relay_rules(g, w, F(1, 3), F(1, 6), F(1, 12))
        if k == 5:
            for nb in _five_alignments(g, w):
                d = [deg[u] for u in nb]
                if not (d[1] == 5 and d[2] == 5):
                    continue
                k1, k4 = d[0], d[3]
                anchor = (w,) + nb[:4]
                if k1 >= 12 and k4 >= 12:
                    # beta(12) - 1/2 == 0: a zero donation is no transfer
                    for target, kk in ((nb[1], k1), (nb[2], k4)):
                        amount = beta(kk) - F(1, 2)
                        if amount > 0:
                            yield Transfer("R4a", w, target, amount, anchor)
                if k1 == 7 and k4 <= 11:
                    yield Transfer("R4b", w, nb[1], F(1, 4), anchor)
                if k1 == 8 and k4 <= 11:
                    yield Transfer("R4c", w, nb[1], F(1, 8), anchor)


def enumerate_transfers(g: PlaneGraph, rule_set: RuleSet) -> Iterator[Transfer]:
    """Raw rule instances, duplicates from symmetric alignments included."""
    if rule_set == "thm1":
        return _thm1_transfers(g)
    if rule_set == "thm2":
        return _thm2_transfers(g)
    raise ValueError(f"unknown rule set {rule_set!r}")


def dedupe(transfers) -> list[Transfer]:
    """Collapse instances with equal (rule, sender, receiver, amount, anchor set).

    The lexicographically least anchor is kept, so the result does not depend
    on enumeration order.
    """
    best: dict = {}
    for t in transfers:
        key = t.key()
        cur = best.get(key)
        if cur is None or t.anchor < cur.anchor:
            best[key] = t
    return sorted(best.values(), key=_rule_sort_key)


def check_discharge_input(g: PlaneGraph) -> None:
    if g.min_degree < 5:
        raise ValueError(f"discharging needs minimum degree 5, got {g.min_degree}")
    if not is_triangulation(g):
        raise ValueError("discharging needs a triangulation")


def apply_rules(g: PlaneGraph, rule_set: RuleSet) -> DischargeResult:
    check_discharge_input(g)
    initial = tuple(F(d - 6) for d in g.degrees)
    ledger = tuple(dedupe(enumerate_transfers(g, rule_set)))
    delta: dict[int, Fraction] = defaultdict(Fraction)
    for t in ledger:
        delta[t.sender] -= t.amount
        delta[t.receiver] += t.amount
    final = tuple(c + delta[v] for v, c in enumerate(initial))
    return DischargeResult(rule_set, initial, ledger, final)


def flow_to(result: DischargeResult, receiver: int, hub: int | None = None) -> Fraction:
    """Charge received by ``receiver``; with ``hub``, only what the hub sent or funded.

    Relays the hub itself passes on for another hub are attributed to that
    other hub, not to the sender.
    """
    total = F(0)
    for t in result.ledger:
        if t.receiver != receiver:
            continue
        if hub is None or t.hub == hub or (t.sender == hub and t.hub is None):
            total += t.amount
    return total


def negative_vertices(result: DischargeResult) -> list[tuple[int, Fraction]]:
    return [(v, c) for v, c in enumerate(result.final) if c < 0]


def relayed_by(result: DischargeResult, relay: int, hub: int) -> Fraction:
    """What ``relay`` passed on to 5-vertices on behalf of ``hub``."""
    return sum((t.amount for t in result.ledger if t.sender == relay and t.hub == hub), F(0))
