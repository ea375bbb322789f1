"""Universe-bounded subsets, set systems, and their structural transformations.

Everything downstream is built on two value types: :class:`SetMask`, a subset
of ``{1, ..., n}`` packed into a single machine word, and :class:`SetSystem`,
a duplicate-free collection of masks over a declared universe size.  Both are
immutable; every operation in this module is a pure function of its inputs.

Elements are 1-based externally (element ``i`` lives in bit ``i - 1``).  The
universe is capped at 63 elements so any subset fits one word.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

MAX_UNIVERSE = 63


class InternalInvariantError(RuntimeError):
    """A structural guarantee the library relies on failed at runtime.

    Raised when two internally cross-checked computations disagree.  This is
    never a user error: it means a bug (or a falsified structural claim) and
    the message carries enough data to reproduce.
    """


def _validate_universe(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"universe size must be an int, got {n!r}")
    if not 1 <= n <= MAX_UNIVERSE:
        raise ValueError(f"universe size must be in 1..{MAX_UNIVERSE}, got {n}")


@dataclass(frozen=True, repr=False)
class SetMask:
    """A subset of ``{1, ..., n}`` as a bitmask (element ``i`` <-> bit ``i-1``).

    The mask itself does not know its universe; bounds are enforced wherever
    a governing universe size is in scope (:class:`SetSystem`, indexed ops).
    """

    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError(f"mask bits must be non-negative, got {self.bits}")

    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> "SetMask":
        bits = 0
        for e in elements:
            if not 1 <= e <= MAX_UNIVERSE:
                raise ValueError(f"element {e!r} outside 1..{MAX_UNIVERSE}")
            bits |= 1 << (e - 1)
        return cls(bits)

    def elements(self) -> tuple[int, ...]:
        """The members of this subset, ascending, 1-based."""
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length())
            b ^= low
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, element: int) -> bool:
        return element >= 1 and bool(self.bits >> (element - 1) & 1)

    def __or__(self, other: "SetMask") -> "SetMask":
        return SetMask(self.bits | other.bits)

    def __and__(self, other: "SetMask") -> "SetMask":
        return SetMask(self.bits & other.bits)

    def __xor__(self, other: "SetMask") -> "SetMask":
        return SetMask(self.bits ^ other.bits)

    def __sub__(self, other: "SetMask") -> "SetMask":
        return SetMask(self.bits & ~other.bits)

    def issubset(self, other: "SetMask") -> bool:
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "SetMask") -> bool:
        return self.bits & other.bits == 0

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements()) + "}"

    def __repr__(self) -> str:
        return f"SetMask({self})"


EMPTY = SetMask(0)


def _as_mask(value: "SetMask | Iterable[int]") -> SetMask:
    if isinstance(value, SetMask):
        return value
    return SetMask.from_elements(value)


@dataclass(frozen=True)
class SetSystem:
    """A duplicate-free collection of subsets over the universe ``{1..n}``.

    Members are stored sorted ascending by numeric mask value, so equal
    systems compare and serialize identically; the constructor normalizes
    (sorts and deduplicates) whatever iterable it is given.
    """

    n: int
    members: tuple[SetMask, ...] = ()

    def __post_init__(self) -> None:
        _validate_universe(self.n)
        unique = {m.bits: m for m in self.members}
        bound = 1 << self.n
        for bits in unique:
            if bits >= bound:
                raise ValueError(
                    f"member {SetMask(bits)} exceeds universe size {self.n}"
                )
        object.__setattr__(
            self, "members", tuple(unique[b] for b in sorted(unique))
        )

    @classmethod
    def of(cls, n: int, sets: Iterable["SetMask | Iterable[int]"]) -> "SetSystem":
        """Build a system from masks or element iterables, e.g. ``of(3, [[], [2, 3]])``."""
        return cls(n, tuple(_as_mask(s) for s in sets))

    @cached_property
    def member_bits(self) -> tuple[int, ...]:
        return tuple(m.bits for m in self.members)

    @cached_property
    def _bit_set(self) -> frozenset[int]:
        return frozenset(self.member_bits)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SetMask]:
        return iter(self.members)

    def __contains__(self, mask: SetMask) -> bool:
        return mask.bits in self._bit_set

    def __str__(self) -> str:
        return "{" + ", ".join(str(m) for m in self.members) + "}"


@dataclass(frozen=True)
class IntervalQuery:
    """The interval ``[lower, upper]`` in the subset lattice; lower must be contained in upper."""

    lower: SetMask
    upper: SetMask

    def __post_init__(self) -> None:
        if not self.lower.issubset(self.upper):
            raise ValueError(
                f"malformed interval: {self.lower} is not a subset of {self.upper}"
            )


def support(system: SetSystem) -> SetMask:
    """Union of all members; the empty mask for the empty system."""
    bits = 0
    for b in system.member_bits:
        bits |= b
    return SetMask(bits)


def _validate_element(system: SetSystem, i: int) -> int:
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= system.n:
        raise ValueError(f"element index {i!r} outside universe 1..{system.n}")
    return 1 << (i - 1)


def _xor_all(system: SetSystem, flip_bits: int) -> SetSystem:
    return SetSystem(system.n, tuple(SetMask(b ^ flip_bits) for b in system.member_bits))


def bit_flip(system: SetSystem, i: int) -> SetSystem:
    """Toggle element ``i`` in every member.  An involution; preserves cardinality."""
    return _xor_all(system, _validate_element(system, i))


def apply_flips(system: SetSystem, flips: SetMask) -> SetSystem:
    """Toggle every element of ``flips`` in every member (composed bit flips)."""
    if flips.bits >> system.n:
        raise ValueError(f"flip record {flips} exceeds universe size {system.n}")
    return _xor_all(system, flips.bits)


def flip_to_empty(system: SetSystem, target: SetMask) -> tuple[SetSystem, SetMask]:
    """Compose bit flips over all elements of ``target`` so its image is the empty set.

    ``target`` must be a member.  Returns the flipped system together with the
    flip record (the mask that was toggled); applying :func:`apply_flips` with
    the record inverts the transformation exactly.
    """
    if target not in system:
        raise ValueError(f"flip target {target} is not a member of the system")
    return _xor_all(system, target.bits), target


def standard_subdivision(system: SetSystem, i: int) -> tuple[SetSystem, SetSystem]:
    """Split by element ``i``: members avoiding it, and members containing it with ``i`` removed.

    Both parts are declared over the same universe; ``i`` is absent from both
    supports, and the part sizes add up to the size of the input.
    """
    bit = _validate_element(system, i)
    without = tuple(m for m in system.members if not m.bits & bit)
    with_i = tuple(SetMask(m.bits ^ bit) for m in system.members if m.bits & bit)
    return SetSystem(system.n, without), SetSystem(system.n, with_i)


def interval_restrict(system: SetSystem, query: IntervalQuery) -> SetSystem:
    """Members ``F`` with ``query.lower <= F <= query.upper``, same universe."""
    if query.upper.bits >> system.n:
        raise ValueError(f"interval bound {query.upper} exceeds universe size {system.n}")
    lo, hi = query.lower.bits, query.upper.bits
    kept = tuple(m for m in system.members if m.bits & lo == lo and m.bits & ~hi == 0)
    return SetSystem(system.n, kept)


# --- serialization ---------------------------------------------------------
#
# JSON form:  {"n": 4, "sets": [[], [1], [2, 3]]}
# Text form:  first line "n=4"; one set per line, elements space-separated,
#             "-" for the empty set.  Both round-trip bit-exactly.


def _mask_to_list(mask: SetMask) -> list[int]:
    return list(mask.elements())


def _mask_from_list(raw: object, where: str) -> SetMask:
    if not isinstance(raw, list) or any(
        not isinstance(e, int) or isinstance(e, bool) for e in raw
    ):
        raise ValueError(f"{where}: expected a list of ints, got {raw!r}")
    if raw != sorted(raw) or len(set(raw)) != len(raw):
        raise ValueError(f"{where}: elements must be strictly ascending, got {raw!r}")
    return SetMask.from_elements(raw)


def system_to_json(system: SetSystem) -> str:
    return json.dumps(
        {"n": system.n, "sets": [_mask_to_list(m) for m in system.members]}
    )


def system_from_json(text: str) -> SetSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "sets" not in doc:
        raise ValueError('expected an object with fields "n" and "sets"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f'field "n": expected an int, got {n!r}')
    raw_sets = doc["sets"]
    if not isinstance(raw_sets, list):
        raise ValueError(f'field "sets": expected a list, got {raw_sets!r}')
    masks = [_mask_from_list(raw, f"sets[{k}]") for k, raw in enumerate(raw_sets)]
    seen: set[int] = set()
    for k, m in enumerate(masks):
        if m.bits in seen:
            raise ValueError(f"sets[{k}]: duplicate set {m}")
        seen.add(m.bits)
    return SetSystem(n, tuple(masks))


def system_to_text(system: SetSystem) -> str:
    lines = [f"n={system.n}"]
    for m in system.members:
        lines.append(" ".join(str(e) for e in m.elements()) if m.bits else "-")
    return "\n".join(lines) + "\n"


def _parse_mask_line(line: str, where: str) -> SetMask:
    if line == "-":
        return EMPTY
    try:
        elems = [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise ValueError(f"{where}: cannot parse elements from {line!r}") from exc
    if elems != sorted(elems) or len(set(elems)) != len(elems):
        raise ValueError(f"{where}: elements must be strictly ascending in {line!r}")
    return SetMask.from_elements(elems)


def system_from_text(text: str) -> SetSystem:
    lines = [ln.rstrip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or not lines[0].startswith("n="):
        raise ValueError('line 1: expected "n=<int>"')
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise ValueError(f"line 1: cannot parse universe size from {lines[0]!r}") from exc
    masks = []
    seen: set[int] = set()
    for idx, line in enumerate(lines[1:], start=2):
        if not line:
            raise ValueError(f"line {idx}: blank line inside the member list")
        m = _parse_mask_line(line, f"line {idx}")
        if m.bits in seen:
            raise ValueError(f"line {idx}: duplicate set {m}")
        seen.add(m.bits)
        masks.append(m)
    return SetSystem(n, tuple(masks))


def parse_system(text: str) -> SetSystem:
    """Parse either serialization form, sniffing JSON by a leading ``{``."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return system_from_json(text)
    return system_from_text(text)
