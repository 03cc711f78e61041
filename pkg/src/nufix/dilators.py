"""Coded predilators: traces, normal forms, functorial action, composition.

A predilator is presented by its finitary data: an enumerator for trace
elements (payloads of full support at each arity) and a comparison
oracle over a common finite order.  A general element of D(X) is kept
in normal form as a trace together with the strictly increasing list of
its support points in X; comparison of two such elements is delegated
to the oracle over the union of their supports.  This is the minimal
interface from which the order on D(X) for arbitrary X is forced by
functoriality.
"""

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

from .orders import EQ, GT, LT, Embedding, all_embeddings, finite_order, sign


class LawViolation(RuntimeError):
    """A contract that the surrounding theory guarantees has failed."""


@dataclass(frozen=True)
class Trace:
    """A trace element (arity, payload): a payload of full support."""

    arity: int
    payload: object

    def __repr__(self):
        return f"Tr({self.arity},{self.payload!r})"


@dataclass(frozen=True)
class Elem:
    """An element of D(X) in normal form: trace plus support embedding.

    support is the strictly increasing tuple of X-elements enumerating
    the support; its length equals the trace arity.  Two elements are
    equal exactly if their (trace, support) pairs coincide.
    """

    trace: Trace
    support: tuple

    def __post_init__(self):
        if self.trace.arity != len(self.support):
            raise ValueError(f"arity {self.trace.arity} != |support| {len(self.support)}")

    @property
    def payload(self):
        return self.trace.payload

    def __repr__(self):
        return f"El({self.trace.payload!r}@{list(self.support)})"


class Predilator:
    """Interface for coded predilators.

    compare_at(k, lhs, rhs) compares two normal forms placed into the
    finite order k = {0, ..., k-1}; lhs and rhs are (Trace, positions)
    pairs where positions is the strictly increasing tuple of points in
    k carrying the support.
    """

    name = "?"

    def trace_payloads(self, arity, budget):
        raise NotImplementedError

    def payload_size(self, payload):
        raise NotImplementedError

    def payload_support(self, arity, payload):
        """Support of a payload placed at positions 0..arity-1 (a frozenset)."""
        raise NotImplementedError

    def compare_at(self, k, lhs, rhs):
        raise NotImplementedError

    def payload_str(self, payload):
        raise NotImplementedError

    def traces(self, arity, budget):
        out = []
        for p in self.trace_payloads(arity, budget):
            t = Trace(arity, p)
            if self.payload_support(arity, p) != frozenset(range(arity)):
                raise LawViolation(f"{self.name}: enumerated trace {t} lacks full support")
            out.append(t)
        return out

    def __repr__(self):
        return f"<dilator {self.name}>"


def element_compare(D, X, a, b):
    """Compare two normal-form elements of D(X).

    The supports are merged into a common finite order and the trace
    oracle decides; the result is EQ exactly for identical pairs.
    """
    if a == b:
        return EQ
    union = X.sort_unique(list(a.support) + list(b.support))
    pos = {x: i for i, x in enumerate(union)}
    u = tuple(pos[x] for x in a.support)
    v = tuple(pos[x] for x in b.support)
    return D.compare_at(len(union), (a.trace, u), (b.trace, v))


def as_map(f):
    """Normalize an embedding-like argument to a callable on elements."""
    if isinstance(f, Embedding):
        return lambda x: f.images[x]
    if isinstance(f, dict):
        return lambda x: f[x]
    return f


def apply_embedding(D, f, a, codomain=None):
    """Relabel the support of a normal form through an increasing map."""
    g = as_map(f)
    images = tuple(g(x) for x in a.support)
    if codomain is not None:
        for p, q in zip(images, images[1:]):
            if codomain.compare(p, q) >= 0:
                raise ValueError(f"map not increasing on support {a.support}")
    return Elem(a.trace, images)


def elements_over(D, X, carrier, budget, max_arity=None):
    """All budgeted normal forms of D over a finite carrier of X-elements."""
    carrier = X.sort_unique(carrier)
    top = len(carrier) if max_arity is None else min(max_arity, len(carrier))
    out = []
    for arity in range(top + 1):
        ts = D.traces(arity, budget)
        if not ts:
            continue
        for supp in combinations(carrier, arity):
            for t in ts:
                out.append(Elem(t, supp))
    return out


def element_sort(D, X, elems):
    return sorted(elems, key=cmp_to_key(lambda a, b: element_compare(D, X, a, b)))


# ---------------------------------------------------------------------------
# Built-in predilators


class OmegaDilator(Predilator):
    """Finite non-increasing words, ordered lexicographically.

    The support of a word is the set of its letters; the trace payloads
    at arity n are the onto non-increasing words over {0, ..., n-1}.
    """

    name = "omega"

    def trace_payloads(self, arity, budget):
        if arity > budget:
            return []
        out = []

        def grow(word, maxletter):
            if len(word) <= budget and len(set(word)) == arity:
                out.append(tuple(word))
            if len(word) >= budget:
                return
            for a in range(min(maxletter, arity - 1), -1, -1):
                word.append(a)
                grow(word, a)
                word.pop()

        grow([], arity - 1) if arity else out.append(())
        return sorted(out, key=lambda w: (len(w), w))

    def payload_size(self, payload):
        return len(payload)

    def payload_support(self, arity, payload):
        return frozenset(payload)

    def compare_at(self, k, lhs, rhs):
        (t1, u), (t2, v) = lhs, rhs
        w1 = tuple(u[i] for i in t1.payload)
        w2 = tuple(v[i] for i in t2.payload)
        for a, b in zip(w1, w2):
            if a != b:
                return sign(a - b)
        return sign(len(w1) - len(w2))

    def payload_str(self, payload):
        return "w[" + ",".join(str(i) for i in payload) + "]"

    def word_elem(self, X, word):
        """Normal form of a non-increasing word of X-elements."""
        word = tuple(word)
        for a, b in zip(word, word[1:]):
            if X.compare(b, a) > 0:
                raise ValueError(f"word not non-increasing: {word}")
        supp = X.sort_unique(word)
        pos = {x: i for i, x in enumerate(supp)}
        return Elem(Trace(len(supp), tuple(pos[x] for x in word)), tuple(supp))

    def elem_word(self, elem):
        return tuple(elem.support[i] for i in elem.payload)


class AffineDilator(Predilator):
    """The transform X -> 1 + Y x X for a fixed coded order Y.

    The zero point has empty support; the point 1+(y, x) has support
    {x}.  Payloads are None for zero and the Y-element otherwise.
    """

    name = "affine"

    def __init__(self, Y, y_budget=64):
        self.Y = Y
        self.y_budget = y_budget
        self.name = f"affine({Y.label})"

    def trace_payloads(self, arity, budget):
        if arity == 0:
            return [None]
        if arity == 1:
            return list(self.Y.enumerate(min(budget, self.y_budget)))
        return []

    def payload_size(self, payload):
        return 1

    def payload_support(self, arity, payload):
        return frozenset() if payload is None else frozenset({0})

    def compare_at(self, k, lhs, rhs):
        (t1, u), (t2, v) = lhs, rhs
        if t1.payload is None or t2.payload is None:
            if t1.payload is None and t2.payload is None:
                return EQ
            return LT if t1.payload is None else GT
        c = self.Y.compare(t1.payload, t2.payload)
        return c if c else sign(u[0] - v[0])

    def payload_str(self, payload):
        from .textforms import order_elem_str

        return "o" if payload is None else f"a({order_elem_str(self.Y, payload)})"

    def zero(self):
        return Elem(Trace(0, None), ())

    def point(self, y, x):
        return Elem(Trace(1, y), (x,))


class Composite(Predilator):
    """Composition of predilators as functors.

    An element of (E o D)(X) is an E-element whose support points are
    D-elements of X.  A trace payload at arity n is a pair of the outer
    E-payload and the increasing tuple of distinct inner D-elements
    over the finite order n; the supports of the inner elements must
    cover n.  The X-support is the union of the inner supports.
    """

    def __init__(self, E, D):
        self.E = E
        self.D = D
        self.name = f"({E.name}.{D.name})"

    def trace_payloads(self, arity, budget):
        inner_order = finite_order(arity)
        pool = elements_over(self.D, inner_order, range(arity), budget)
        pool = element_sort(self.D, inner_order, pool)
        pool = [e for e in pool if self.D.payload_size(e.payload) <= budget]
        out = []
        for k in range(0, len(pool) + 1):
            for combo in combinations(pool, k):
                covered = set()
                size = 0
                for e in combo:
                    covered.update(e.support)
                    size += self.D.payload_size(e.payload)
                if covered != set(range(arity)):
                    continue
                for ep in self.E.trace_payloads(k, budget):
                    if self.E.payload_size(ep) + size <= budget:
                        out.append((ep, combo))
        return out

    def payload_size(self, payload):
        ep, inner = payload
        return self.E.payload_size(ep) + sum(self.D.payload_size(e.payload) for e in inner)

    def payload_support(self, arity, payload):
        _, inner = payload
        out = set()
        for e in inner:
            out.update(e.support)
        return frozenset(out)

    def compare_at(self, k, lhs, rhs):
        (t1, u), (t2, v) = lhs, rhs
        X = finite_order(k)
        inner1 = [apply_embedding(self.D, lambda i, u=u: u[i], e) for e in t1.payload[1]]
        inner2 = [apply_embedding(self.D, lambda i, v=v: v[i], e) for e in t2.payload[1]]
        union = []
        for e in element_sort(self.D, X, inner1 + inner2):
            if not union or union[-1] != e:
                union.append(e)
        pos = {e: i for i, e in enumerate(union)}
        lpos = tuple(pos[e] for e in inner1)
        rpos = tuple(pos[e] for e in inner2)
        return self.E.compare_at(len(union), (Trace(len(lpos), t1.payload[0]), lpos), (Trace(len(rpos), t2.payload[0]), rpos))

    def payload_str(self, payload):
        if not isinstance(self.E, OmegaDilator):
            return repr(payload)
        ep, inner = payload
        parts = []
        for i in ep:
            e = inner[i]
            s = self.D.payload_str(e.payload)
            if e.support:
                s += "@[" + ",".join(str(p) for p in e.support) + "]"
            parts.append(s)
        return "w[" + ";".join(parts) + "]"

    def wrap_word(self, X, delems):
        """Build the (omega o D)(X) element with the given word of D-elements."""
        assert isinstance(self.E, OmegaDilator)
        for a, b in zip(delems, delems[1:]):
            if element_compare(self.D, X, b, a) > 0:
                raise ValueError("entries not non-increasing")
        distinct = []
        for e in element_sort(self.D, X, delems):
            if not distinct or distinct[-1] != e:
                distinct.append(e)
        supp = X.sort_unique([x for e in distinct for x in e.support])
        pos = {id_key(x): i for i, x in enumerate(supp)}
        inner = tuple(
            Elem(e.trace, tuple(pos[id_key(x)] for x in e.support)) for e in distinct
        )
        word = tuple(inner.index(Elem(e.trace, tuple(pos[id_key(x)] for x in e.support))) for e in delems)
        return Elem(Trace(len(supp), (word, inner)), tuple(supp))

    def unwrap_word(self, elem):
        """The word of D-elements denoted by an (omega o D)(X) element."""
        assert isinstance(self.E, OmegaDilator)
        word, inner = elem.payload
        out = []
        for i in word:
            e = inner[i]
            out.append(Elem(e.trace, tuple(elem.support[p] for p in e.support)))
        return out


def compose(E, D):
    return Composite(E, D)


def builtin_dilator(name, arg=None):
    """Construct a built-in dilator: omega, affine(Y) or the Veblen functor."""
    if name == "omega":
        return OmegaDilator()
    if name == "affine":
        return AffineDilator(arg)
    if name == "gamma":
        from .gamma import GammaDilator

        return GammaDilator()
    raise ValueError(f"unknown dilator {name!r}")


# ---------------------------------------------------------------------------
# Law checking


@dataclass
class LawReport:
    """Outcome of the bounded predilator law suite."""

    dilator: str
    max_order: int
    budget: int
    checks: int = 0
    violations: list = field(default_factory=list)
    lint_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    @property
    def clean(self):
        return self.ok and not self.lint_violations

    def lines(self):
        yield f"predilator laws: {self.dilator} (orders <= {self.max_order}, budget {self.budget})"
        yield f"  checks run: {self.checks}"
        for v in self.violations:
            yield f"  VIOLATION: {v}"
        for v in self.lint_violations:
            yield f"  lint (monotone in the embedding): {v}"
        if self.ok:
            yield "  all laws hold" + ("" if not self.lint_violations else " (lint findings above)")


def _linear_order_violation(compare, elems, describe):
    """Exhaustive linearity check via rank consistency.

    After sorting, compare must agree with the rank difference on every
    ordered pair; this is equivalent to totality, antisymmetry and
    transitivity on the fragment.
    """
    ranked = sorted(elems, key=cmp_to_key(compare))
    for i, a in enumerate(ranked):
        for j, b in enumerate(ranked):
            c = compare(a, b)
            if c != sign(i - j):
                return f"{describe}: compare({a!r},{b!r}) = {c}, expected {sign(i - j)}"
    return None


def check_predilator_laws(D, max_order=4, budget=6, lint=True):
    """Bounded, exhaustive check of the predilator laws.

    Over all finite orders of size <= max_order, all embeddings between
    them and all elements within the payload budget, this verifies:
    full support of enumerated traces, linearity of each D(k),
    invariance of comparison under relabeling, the functor identity and
    composition laws, naturality of supports, and both inclusions of
    the support condition.  The extra monotonicity property (pointwise
    larger embeddings give pointwise larger functions) is reported as a
    lint, since it can fail for genuine predilators.
    """
    rep = LawReport(D.name, max_order, budget)
    orders = {m: finite_order(m) for m in range(max_order + 1)}
    elems = {}
    for m in range(max_order + 1):
        try:
            elems[m] = element_sort(D, orders[m], elements_over(D, orders[m], range(m), budget))
        except LawViolation as e:
            rep.violations.append(str(e))
            return rep

    for m in range(max_order + 1):
        X = orders[m]
        bad = _linear_order_violation(
            lambda a, b: element_compare(D, X, a, b), elems[m], f"D({m}) linearity"
        )
        rep.checks += len(elems[m]) ** 2
        if bad:
            rep.violations.append(bad)
            return rep
        ident = Embedding(tuple(range(m)))
        for a in elems[m]:
            rep.checks += 1
            if apply_embedding(D, ident, a) != a:
                rep.violations.append(f"identity law fails at {a!r}")
                return rep

    for m in range(max_order + 1):
        for k in range(m, max_order + 1):
            X, Y = orders[m], orders[k]
            for f in all_embeddings(m, k):
                mapped = [apply_embedding(D, f, a) for a in elems[m]]
                for a, fa in zip(elems[m], mapped):
                    rep.checks += 1
                    if frozenset(fa.support) != frozenset(f.images[x] for x in a.support):
                        rep.violations.append(f"naturality of supp fails at {a!r} through {f.images}")
                        return rep
                for (a, fa) in zip(elems[m], mapped):
                    for (b, fb) in zip(elems[m], mapped):
                        rep.checks += 1
                        if element_compare(D, X, a, b) != element_compare(D, Y, fa, fb):
                            rep.violations.append(
                                f"comparison not invariant under relabeling {f.images}: {a!r} vs {b!r}"
                            )
                            return rep
                image = set(mapped)
                cover = {b for b in elems[k] if set(b.support) <= set(f.images)}
                rep.checks += 1
                if image != cover:
                    rep.violations.append(
                        f"support condition fails for embedding {f.images}: "
                        f"range has {len(image)} elements, support-bounded set has {len(cover)}"
                    )
                    return rep

    for m in range(max_order + 1):
        for k in range(m, max_order + 1):
            for l in range(k, max_order + 1):
                for f in all_embeddings(m, k):
                    for g in all_embeddings(k, l):
                        gf = Embedding(tuple(g.images[i] for i in f.images))
                        for a in elems[m]:
                            rep.checks += 1
                            two = apply_embedding(D, g, apply_embedding(D, f, a))
                            one = apply_embedding(D, gf, a)
                            if one != two:
                                rep.violations.append(
                                    f"composition law fails at {a!r} through {f.images} then {g.images}"
                                )
                                return rep

    if lint:
        found = _monotonicity_lint(D, orders, elems, max_order, rep)
        if found:
            rep.lint_violations.append(found)

    return rep


def _monotonicity_lint(D, orders, elems, max_order, rep):
    """Girard's extra condition: f <= g pointwise gives D(f) <= D(g).

    Automatic for dilators but not for predilators, so a finding here
    is advisory rather than a law violation.
    """
    for m in range(max_order + 1):
        for k in range(max_order + 1):
            Y = orders[k]
            embs = all_embeddings(m, k)
            for f in embs:
                for g in embs:
                    if f == g or any(x > y for x, y in zip(f.images, g.images)):
                        continue
                    for a in elems[m]:
                        rep.checks += 1
                        fa = apply_embedding(D, f, a)
                        ga = apply_embedding(D, g, a)
                        if element_compare(D, Y, fa, ga) > 0:
                            return f"pointwise {f.images} <= {g.images} but {fa!r} > {ga!r}"
    return None
