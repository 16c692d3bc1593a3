"""Events: basic, conjunctive, and atomic.

A universe is a finite set of named basic events.  Conjunctive events are
either the false event (bottom), or a set of basic-event names (the empty set
is the true event, top).  Atomic events assign a sign to every basic event of
the universe; they are the possible worlds that probabilistic interpretations
put mass on.

All values here are immutable and interned, so they are safe to share and
cheap to compare.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import AtomSpaceError, UnknownEventError

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_KEYWORDS = ("true", "false")

DEFAULT_ATOM_CAP = 2 ** 22


def validate_name(name: str) -> str:
    if not _NAME_RE.match(name) or name in _KEYWORDS:
        raise ValueError(f"invalid basic-event name: {name!r}")
    return name


@dataclass(frozen=True)
class BasicEvent:
    """A named atomic proposition. Compared and hashed by name."""

    name: str

    def __post_init__(self):
        validate_name(self.name)

    def __str__(self):
        return self.name


class ConjunctiveEvent:
    """Bottom, top, or a conjunction of basic events.

    Conjuncts are kept sorted, so equal events render identically and can be
    used as dictionary keys.  Instances are interned; identity comparison is
    valid after construction through the module factories.
    """

    __slots__ = ("kind", "names", "uid")

    BOTTOM_KIND = "bottom"
    CONJ_KIND = "conjunction"

    def __init__(self, kind: str, names: tuple, uid: int):
        self.kind = kind
        self.names = names
        self.uid = uid

    @property
    def is_bottom(self) -> bool:
        return self.kind == ConjunctiveEvent.BOTTOM_KIND

    @property
    def is_top(self) -> bool:
        return self.kind == ConjunctiveEvent.CONJ_KIND and not self.names

    @property
    def sort_key(self):
        # bottom sorts before every conjunction; conjunctions lexicographically
        if self.is_bottom:
            return (0, ())
        return (1, self.names)

    def __repr__(self):
        return f"<event {self}>"

    def __str__(self):
        if self.is_bottom:
            return "false"
        if not self.names:
            return "true"
        return " ".join(self.names)


_event_intern: dict = {}


def _intern_event(kind: str, names: tuple) -> ConjunctiveEvent:
    key = (kind, names)
    ev = _event_intern.get(key)
    if ev is None:
        ev = ConjunctiveEvent(kind, names, len(_event_intern))
        _event_intern[key] = ev
    return ev


BOTTOM = _intern_event(ConjunctiveEvent.BOTTOM_KIND, ())
TOP = _intern_event(ConjunctiveEvent.CONJ_KIND, ())


def conjunction(names: Iterable[str]) -> ConjunctiveEvent:
    """The conjunction of the given basic-event names (deduplicated, sorted)."""
    ordered = tuple(sorted(set(names)))
    for n in ordered:
        validate_name(n)
    return _intern_event(ConjunctiveEvent.CONJ_KIND, ordered)


def normalize_event(tokens: Sequence[str],
                    universe: "Universe | None" = None) -> ConjunctiveEvent:
    """Build a conjunctive event from a token sequence.

    `false` anywhere makes the whole event bottom, `true` contributes nothing,
    duplicates collapse.  When a universe is given, every identifier must be
    declared in it.
    """
    if not tokens:
        raise ValueError("empty event")
    names = []
    for tok in tokens:
        if tok == "false":
            return BOTTOM
        if tok == "true":
            continue
        validate_name(tok)
        if universe is not None and tok not in universe.index:
            raise UnknownEventError(f"unknown identifier: {tok!r}")
        names.append(tok)
    return conjunction(names)


_conjoin_memo: dict = {}


def conjoin(c: ConjunctiveEvent, d: ConjunctiveEvent) -> ConjunctiveEvent:
    """C and D: union of conjunct sets; bottom absorbing, top neutral."""
    key = (c.uid, d.uid)
    out = _conjoin_memo.get(key)
    if out is not None:
        return out
    if c.is_bottom or d.is_bottom:
        out = BOTTOM
    elif not c.names:
        out = d
    elif not d.names:
        out = c
    else:
        out = conjunction(c.names + d.names)
    _conjoin_memo[key] = out
    return out


class Universe:
    """An ordered (sorted by name) finite set of basic events."""

    __slots__ = ("names", "index", "basics", "_mask_memo")

    def __init__(self, names: Iterable[str]):
        ordered = tuple(sorted(set(names)))
        if not ordered:
            raise ValueError("universe must be nonempty")
        for n in ordered:
            validate_name(n)
        self.names = ordered
        self.index = {n: i for i, n in enumerate(ordered)}
        self.basics = tuple(BasicEvent(n) for n in ordered)
        self._mask_memo: dict = {}

    def __len__(self):
        return len(self.names)

    def __contains__(self, name: str):
        return name in self.index

    def check_event(self, event: ConjunctiveEvent) -> ConjunctiveEvent:
        for n in event.names:
            if n not in self.index:
                raise UnknownEventError(f"event {event} not over this universe: {n!r}")
        return event

    def mask_of(self, event: ConjunctiveEvent) -> Optional[int]:
        """Bitmask of an event's conjuncts; None for bottom."""
        m = self._mask_memo.get(event.uid)
        if m is None and event.uid not in self._mask_memo:
            if event.is_bottom:
                m = None
            else:
                m = 0
                for n in event.names:
                    m |= 1 << self.index[n]
            self._mask_memo[event.uid] = m
        return m


class AtomicEvent:
    """A total sign assignment over a universe (one possible world).

    Internally a bitmask: bit i set means the i-th basic event (in the
    universe's sorted order) is positive.
    """

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: int):
        self.universe = universe
        self.mask = mask

    @staticmethod
    def from_signs(universe: Universe, signs: dict) -> "AtomicEvent":
        if set(signs) != set(universe.names):
            raise ValueError("signs must cover the whole universe")
        mask = 0
        for name, positive in signs.items():
            if positive:
                mask |= 1 << universe.index[name]
        return AtomicEvent(universe, mask)

    def sign(self, name: str) -> bool:
        return bool(self.mask >> self.universe.index[name] & 1)

    @property
    def signs(self) -> dict:
        return {n: self.sign(n) for n in self.universe.names}

    def __eq__(self, other):
        return (isinstance(other, AtomicEvent)
                and self.universe is other.universe and self.mask == other.mask)

    def __hash__(self):
        return hash((id(self.universe), self.mask))

    def __str__(self):
        return "".join(n if self.sign(n) else n + "'" for n in self.universe.names)


def atom_implies(atom: AtomicEvent, event: ConjunctiveEvent) -> bool:
    """True iff the atom makes every conjunct of the event positive.

    Top is implied by every atom, bottom by none.
    """
    mask = atom.universe.mask_of(event)
    if mask is None:
        return False
    return mask & ~atom.mask == 0


def mask_implies(atom_mask: int, event_mask: Optional[int]) -> bool:
    if event_mask is None:
        return False
    return event_mask & ~atom_mask == 0


def enumerate_atoms(universe: Universe,
                    prune=None,
                    cap: int = DEFAULT_ATOM_CAP) -> Iterator[AtomicEvent]:
    """Yield the universe's atoms, restricted to the taxonomy-consistent ones.

    Without `prune` this yields all 2^n sign assignments.  With a taxonomy
    store (anything exposing `.formulas` with lhs/rhs conjunctive events) it
    yields exactly the atoms whose positive set is closed under every rule:
    whenever a rule's left-hand side is fully positive, its right-hand side
    must be positive too and must not be bottom.  The search backtracks over
    sign choices and cuts a branch as soon as a violated rule is detected, in
    particular when a bottom-headed rule's left-hand side is already all
    positive.

    Raises AtomSpaceError once more than `cap` atoms would be yielded.
    """
    for mask in enumerate_atom_masks(universe, prune, cap):
        yield AtomicEvent(universe, mask)


def enumerate_atom_masks(universe: Universe,
                         prune=None,
                         cap: int = DEFAULT_ATOM_CAP) -> Iterator[int]:
    n = len(universe)
    rules = []
    if prune is not None:
        for fm in prune.formulas:
            lhs_mask = universe.mask_of(fm.lhs)
            if lhs_mask is None:  # bottom on the left: vacuous
                continue
            rhs_mask = universe.mask_of(fm.rhs)  # None encodes bottom
            if rhs_mask == 0:  # top on the right: vacuous
                continue
            rules.append((lhs_mask, rhs_mask))

    # rules indexed by the variables whose decision can complete a violation
    triggers = [[] for _ in range(n)]
    for rule in rules:
        lhs_mask, rhs_mask = rule
        watch = lhs_mask | (rhs_mask or 0)
        for i in range(n):
            if watch >> i & 1:
                triggers[i].append(rule)

    # a rule with an empty lhs is active from the start
    for lhs_mask, rhs_mask in rules:
        if lhs_mask == 0 and rhs_mask is None:
            return  # top -> bottom: no consistent atoms at all

    count = 0

    def violated(pos: int, neg: int, rule) -> bool:
        lhs_mask, rhs_mask = rule
        if lhs_mask & ~pos:
            return False  # lhs not (yet) fully positive
        if rhs_mask is None:
            return True  # bottom-headed rule fired
        return bool(rhs_mask & neg)

    # iterative DFS deciding the highest undecided bit, negative branch
    # first, so that masks stream in increasing order
    stack = [(0, 0, 0)]
    while stack:
        depth, pos, neg = stack.pop()
        if depth == n:
            count += 1
            if count > cap:
                raise AtomSpaceError(
                    f"atom space too large: more than {cap} atoms")
            yield pos
            continue
        bit_index = n - 1 - depth
        bit = 1 << bit_index
        # push positive branch first so the negative branch is explored first
        pos2 = pos | bit
        if not any(violated(pos2, neg, r) for r in triggers[bit_index]):
            stack.append((depth + 1, pos2, neg))
        neg2 = neg | bit
        if not any(violated(pos, neg2, r) for r in triggers[bit_index]):
            stack.append((depth + 1, pos, neg2))
