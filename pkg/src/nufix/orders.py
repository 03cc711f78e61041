"""Coded linear orders, finite embeddings and order combinators.

A coded order is a linear order presented by a decidable three-way
comparison together with a bounded element enumerator.  Everything else
in this package (dilators, term systems, collapses) is parametric in
such orders.  Element codes are plain hashable values; each order owns
the interpretation of its own codes, so codes nest under the
combinators (sums carry a side tag, products are pairs, words are
tuples).
"""

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

LT, EQ, GT = -1, 0, 1


class DecodeError(ValueError):
    """Raised when a value is not a valid element code for an order."""


def sign(n):
    return (n > 0) - (n < 0)


@dataclass(frozen=True)
class CodedOrder:
    """A linear order with decidable comparison and bounded enumeration.

    compare(a, b) returns -1, 0 or +1.  enumerate(budget) returns a
    duplicate-free tuple that grows monotonically with the budget.
    kind is structured metadata used by the text layer to print and
    parse element literals of the built-in orders.
    """

    label: str
    compare: object
    enumerate: object
    kind: tuple = field(default=(), compare=False)

    def lt(self, a, b):
        return self.compare(a, b) < 0

    def le(self, a, b):
        return self.compare(a, b) <= 0

    def sort(self, elems):
        return sorted(elems, key=cmp_to_key(self.compare))

    def sort_unique(self, elems):
        """Sort and drop duplicates (duplicates decided by compare)."""
        out = []
        for e in self.sort(elems):
            if not out or self.compare(out[-1], e) != 0:
                out.append(e)
        return out

    def max(self, elems):
        it = iter(elems)
        best = next(it)
        for e in it:
            if self.compare(best, e) < 0:
                best = e
        return best

    def __repr__(self):
        return f"CodedOrder({self.label})"


@dataclass(frozen=True)
class Embedding:
    """A strictly increasing function from a finite order into a codomain.

    The domain is {0, ..., n-1} with n = len(images); the function maps
    i to images[i].
    """

    images: tuple

    @property
    def domain_size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def rng(self):
        return self.images

    def position(self, x):
        """Inverse lookup by code equality; raises if x is not an image."""
        return self.images.index(x)


def embedding(codomain, images):
    images = tuple(images)
    for a, b in zip(images, images[1:]):
        if codomain.compare(a, b) >= 0:
            raise ValueError(f"images not strictly increasing in {codomain.label}: {images}")
    return Embedding(images)


def increasing_enumeration(order, elems):
    """The strictly increasing embedding whose range is the given finite set."""
    elems = list(elems)
    out = order.sort(elems)
    for a, b in zip(out, out[1:]):
        if order.compare(a, b) == 0:
            raise ValueError(f"duplicate element in enumeration argument: {a!r}")
    return Embedding(tuple(out))


def identity_embedding(order, budgeted_elems):
    return Embedding(tuple(order.sort(budgeted_elems)))


def all_embeddings(n, m):
    """All strictly increasing maps from finite order n into finite order m."""
    return [Embedding(c) for c in combinations(range(m), n)]


def code_size(x):
    """Rough size of a self-describing element code, used for enumeration order."""
    if isinstance(x, tuple):
        return 1 + sum(code_size(y) for y in x)
    if isinstance(x, int):
        return abs(x)
    return 1


def _canonical(order, elems):
    return tuple(sorted(order.sort(elems), key=code_size))


def _int_compare(a, b):
    if not isinstance(a, int) or not isinstance(b, int):
        raise DecodeError(f"expected integer codes, got {a!r}, {b!r}")
    return sign(a - b)


def finite_order(n):
    def enum(budget):
        return tuple(range(n))

    return CodedOrder(label=str(n), compare=_int_compare, enumerate=enum, kind=("finite", n))


def omega_order():
    def enum(budget):
        return tuple(range(budget))

    return CodedOrder(label="w", compare=_int_compare, enumerate=enum, kind=("omega",))


def nu_order(limits, tail):
    """The order of type omega*limits + tail, with elements coded as pairs.

    The pair (k, i) stands for omega*k + i; for k < limits the offset i
    ranges over all naturals, for k = limits it ranges below tail.
    These are the built-in index orders for collapsing systems.
    """

    if limits == 0:
        label = str(tail)
    else:
        base = "w" if limits == 1 else f"w{limits}"
        label = base + (f"+{tail}" if tail else "")

    def check(e):
        if (
            not isinstance(e, tuple)
            or len(e) != 2
            or not all(isinstance(c, int) for c in e)
            or e[0] > limits
            or (e[0] == limits and e[1] >= tail)
            or e[0] < 0
            or e[1] < 0
        ):
            raise DecodeError(f"{e!r} is not an element of {label}")
        return e

    def compare(a, b):
        check(a), check(b)
        return sign((a > b) - (a < b))

    def enum(budget):
        elems = [(k, i) for k in range(limits) for i in range(budget)]
        elems += [(limits, i) for i in range(tail)]
        return _canonical(CodedOrder("", compare, None), elems)

    return CodedOrder(label=label, compare=compare, enumerate=enum, kind=("nu", limits, tail))


def sum_order(X, Y):
    """Disjoint sum: every left element precedes every right element."""

    def compare(a, b):
        ta, tb = a[0], b[0]
        if ta not in ("l", "r") or tb not in ("l", "r"):
            raise DecodeError(f"bad sum codes {a!r}, {b!r}")
        if ta != tb:
            return LT if ta == "l" else GT
        return (X if ta == "l" else Y).compare(a[1], b[1])

    def enum(budget):
        elems = [("l", x) for x in X.enumerate(budget)] + [("r", y) for y in Y.enumerate(budget)]
        return _canonical(CodedOrder("", compare, None), elems)

    return CodedOrder(label=f"({X.label}+{Y.label})", compare=compare, enumerate=enum, kind=("sum", X, Y))


def product_order(X, Y):
    """Lexicographic product: the first coordinate dominates."""

    def compare(a, b):
        c = X.compare(a[0], b[0])
        return c if c else Y.compare(a[1], b[1])

    def enum(budget):
        elems = [(x, y) for x in X.enumerate(budget) for y in Y.enumerate(budget)]
        return _canonical(CodedOrder("", compare, None), elems)

    return CodedOrder(label=f"({X.label}x{Y.label})", compare=compare, enumerate=enum, kind=("product", X, Y))


def word_compare(X, s, t):
    """Lexicographic comparison of words over X with proper prefixes smaller."""
    for a, b in zip(s, t):
        c = X.compare(a, b)
        if c:
            return c
    return sign(len(s) - len(t))


def nonincreasing_words(X, alphabet, max_len):
    """All non-increasing words over the given alphabet up to the length bound."""
    alphabet = X.sort_unique(alphabet)
    out = [()]
    level = [()]
    for _ in range(max_len):
        nxt = []
        for w in level:
            for a in alphabet:
                if not w or X.compare(a, w[-1]) <= 0:
                    nxt.append(w + (a,))
        out.extend(nxt)
        level = nxt
    return out


def word_order(X):
    """Finite non-increasing words over X, ordered lexicographically.

    This is the classic base-omega transform of an order; its elements
    behave like Cantor normal forms with exponents drawn from X.
    """

    def compare(s, t):
        return word_compare(X, s, t)

    def enum(budget):
        words = nonincreasing_words(X, X.enumerate(budget), budget)
        return _canonical(CodedOrder("", compare, None), words)

    return CodedOrder(label=f"w({X.label})", compare=compare, enumerate=enum, kind=("word", X))


def combine_orders(kind, X, Y=None):
    if kind == "sum":
        if Y is None:
            raise ValueError("sum takes two orders")
        return sum_order(X, Y)
    if kind == "product":
        if Y is None:
            raise ValueError("product takes two orders")
        return product_order(X, Y)
    if kind == "word":
        if Y is not None:
            raise ValueError("word takes one order")
        return word_order(X)
    raise ValueError(f"unknown combinator {kind!r}")


def kb_compare(X, s, t):
    """The Kleene-Brouwer order on finite sequences over X.

    A sequence precedes every proper prefix of itself, and sequences
    that first differ at position i compare by their i-th entries.
    """
    for a, b in zip(s, t):
        c = X.compare(a, b)
        if c:
            return c
    return sign(len(t) - len(s))


def all_sequences(alphabet, max_len):
    out = [()]
    level = [()]
    for _ in range(max_len):
        level = [w + (a,) for w in level for a in alphabet]
        out.extend(level)
    return out
