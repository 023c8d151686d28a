"""QuickXPlain over an abstract monotone predicate.

Elements are plain non-negative integers. A predicate is any callable that
takes a ``frozenset`` of elements and returns a truthy/falsy value; it is
expected to be monotone with ``p(frozenset()) == 0``, but nothing here
checks that (see :mod:`msmp_kit.verification`).

The two procedures ``qx`` and ``qx_prime`` follow the textbook algorithm line
by line. Line numbers in comments refer to that listing (line 2: global
validity test, line 10: background test, line 12: singleton test, lines
16/17: the two recursive calls, line 18: union of the sub-results).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable, Optional, Sequence, Tuple, Union

Element = int
Predicate = Callable[[FrozenSet[Element]], object]
SplitStrategy = Callable[[int], int]


class QxError(Exception):
    """Base class for errors raised by this package."""


class InstanceError(QxError, ValueError):
    """A problem instance violates its structural invariants."""


class ConfigurationError(QxError):
    """A run was configured inconsistently, e.g. a split strategy out of range."""


class EvaluationError(QxError):
    """The predicate could not be evaluated (solver limit, crash, ...)."""


@dataclass(frozen=True)
class ProblemInstance:
    """An analyzed sequence ``A`` together with a disjoint background ``B``.

    The order of ``analyzed`` matters: splitting is positional.
    """

    analyzed: Tuple[Element, ...]
    background: FrozenSet[Element] = field(default_factory=frozenset)

    def __init__(self, analyzed: Iterable[Element], background: Iterable[Element] = ()):
        analyzed = tuple(analyzed)
        background = frozenset(background)
        for e in analyzed:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise InstanceError(f"element ids must be non-negative ints, got {e!r}")
        for e in background:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise InstanceError(f"element ids must be non-negative ints, got {e!r}")
        if len(set(analyzed)) != len(analyzed):
            raise InstanceError("analyzed set contains duplicate ids")
        overlap = background.intersection(analyzed)
        if overlap:
            raise InstanceError(
                f"analyzed set and background overlap on {sorted(overlap)}"
            )
        object.__setattr__(self, "analyzed", analyzed)
        object.__setattr__(self, "background", background)

    @property
    def analyzed_set(self) -> FrozenSet[Element]:
        return frozenset(self.analyzed)

    @property
    def universe(self) -> FrozenSet[Element]:
        return self.background.union(self.analyzed)


class NoPSet:
    """Outcome when ``p(A | B) == 0``: no subset of ``A`` satisfies the predicate."""

    _instance: Optional["NoPSet"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    found = False
    elements = None

    def __repr__(self):
        return "NO_P_SET"

    def __reduce__(self):
        return (NoPSet, ())


NO_P_SET = NoPSet()


@dataclass(frozen=True)
class MinimalPSet:
    elements: Tuple[Element, ...]
    found = True

    def __init__(self, elements: Iterable[Element]):
        object.__setattr__(self, "elements", tuple(sorted(set(elements))))

    def as_set(self) -> FrozenSet[Element]:
        return frozenset(self.elements)


QxOutcome = Union[MinimalPSet, NoPSet]


# -- split strategies -------------------------------------------------------

def split_half(n: int) -> int:
    """Balanced split, ``ceil(n / 2)``; gives the best worst-case call count."""
    if n < 2:
        raise ConfigurationError(f"cannot split a sequence of length {n}")
    return math.ceil(n / 2)


def split_prefix(n: int) -> int:
    if n < 2:
        raise ConfigurationError(f"cannot split a sequence of length {n}")
    return 1


def split_suffix(n: int) -> int:
    if n < 2:
        raise ConfigurationError(f"cannot split a sequence of length {n}")
    return n - 1


SPLITS = {"half": split_half, "prefix": split_prefix, "suffix": split_suffix}


def get(analyzed: Sequence[Element], i: int, j: int) -> Tuple[Element, ...]:
    """Positions ``i..j`` of ``analyzed``, 1-based and inclusive."""
    if not 1 <= i <= j <= len(analyzed):
        raise IndexError(f"GET({i}, {j}) out of range for length {len(analyzed)}")
    return tuple(analyzed[i - 1:j])


# -- predicate helpers ------------------------------------------------------

def _eval(p: Predicate, xs: FrozenSet[Element]) -> bool:
    try:
        return bool(p(xs))
    except QxError:
        raise
    except Exception as exc:
        raise EvaluationError(f"predicate failed on {sorted(xs)}: {exc}") from exc


def is_p_set(x: Iterable[Element], instance: ProblemInstance, p: Predicate) -> bool:
    x = frozenset(x)
    if not x <= instance.analyzed_set:
        return False
    return _eval(p, x | instance.background)


def is_minimal_p_set(x: Iterable[Element], instance: ProblemInstance, p: Predicate) -> bool:
    """True iff ``x`` is a p-set and dropping any single element breaks it.

    Testing single-element deletions is enough: if some proper subset
    ``x' < x`` were a p-set, then by monotonicity so would be ``x - {e}`` for
    any ``e`` in ``x - x'``.
    """
    x = frozenset(x)
    if not is_p_set(x, instance, p):
        return False
    return not any(_eval(p, (x - {e}) | instance.background) for e in sorted(x))


# -- the algorithm ----------------------------------------------------------

def qx(
    instance: ProblemInstance,
    p: Predicate,
    split: SplitStrategy = split_half,
    trace=None,
) -> QxOutcome:
    """Return a minimal p-set of ``instance`` or :data:`NO_P_SET`.

    ``trace`` is an optional sink (see :class:`msmp_kit.trace.TraceRecorder`)
    receiving every call and predicate evaluation in execution order.
    """
    a, b = instance.analyzed, instance.background
    if trace is not None:
        trace.begin(a, b)
    universe = b.union(a)
    bit = _eval(p, universe)  # line 2
    if trace is not None:
        trace.root_check(universe, bit)
    if not bit:
        outcome, line = NO_P_SET, 3
    elif not a:
        outcome, line = MinimalPSet(()), 5
    else:
        outcome, line = MinimalPSet(_qx_prime(b, a, b, p, split, trace, "line7")), 7
    if trace is not None:
        trace.finish(outcome, line)
    return outcome


def qx_prime(
    c: Iterable[Element],
    instance: ProblemInstance,
    p: Predicate,
    split: SplitStrategy = split_half,
    trace=None,
    site: str = "line7",
) -> FrozenSet[Element]:
    """The recursive procedure, exposed for testing individual calls.

    Callers must supply arguments satisfying the loop invariant
    ``(C != {} or p(B) == 0) and p(A | B) == 1``; otherwise the result is
    unspecified.
    """
    if not instance.analyzed:
        raise InstanceError("qx_prime needs a non-empty analyzed set")
    return _qx_prime(frozenset(c), instance.analyzed, instance.background,
                     p, split, trace, site)


def _qx_prime(c, a, b, p, split, trace, site) -> FrozenSet[Element]:
    if trace is not None:
        trace.enter(site, c, a, b)
    # line 10: p(B) is only evaluated when C is non-empty
    if c:
        bit = _eval(p, b)
        if trace is not None:
            trace.line10(b, bit)
        if bit:
            if trace is not None:
                trace.leave(11, frozenset())
            return frozenset()
    if len(a) == 1:
        result = frozenset(a)
        if trace is not None:
            trace.leave(12, result)
        return result
    n = len(a)
    k = split(n)
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= n - 1:
        raise ConfigurationError(f"split strategy returned k={k!r} for n={n}")
    if trace is not None:
        trace.split(k)
    a1 = get(a, 1, k)
    a2 = get(a, k + 1, n)
    a1_set = frozenset(a1)
    x2 = _qx_prime(a1_set, a2, b | a1_set, p, split, trace, "line16")
    x1 = _qx_prime(x2, a1, b | x2, p, split, trace, "line17")
    result = x1 | x2
    if trace is not None:
        trace.leave(18, result)
    return result
