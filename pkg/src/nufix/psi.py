"""Collapsing term systems: the free tower and its collapsed suborder.

For an index order nu and a coded dilator D, the free system consists
of terms carrying an index, a finite set of subterms and a trace of D
whose arity matches the subterm count.  Comparison reduces to the
dilator oracle over the union of the subterm sets and is decided by
recursion on a node measure.  The collapsed suborder keeps exactly the
terms whose collected lower data stays below the term's own value; its
defining map into nu x D(X) is an order embedding with a computable
partial inverse.
"""

from dataclasses import dataclass
from functools import cmp_to_key

from .orders import EQ, CodedOrder, sign
from .dilators import Elem, LawViolation, Trace, element_compare


class BudgetExhausted(RuntimeError):
    """An enumeration could not produce the requested count within caps."""


class PsiTerm:
    """A term psi_alpha(children, trace); children are sorted and distinct."""

    __slots__ = ("alpha", "children", "trace", "_hash")

    def __init__(self, alpha, children, trace):
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "children", tuple(children))
        object.__setattr__(self, "trace", trace)
        object.__setattr__(self, "_hash", hash(("psi", alpha, self.children, trace)))

    def __eq__(self, other):
        return (
            type(other) is PsiTerm
            and self._hash == other._hash
            and self.alpha == other.alpha
            and self.children == other.children
            and self.trace == other.trace
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"psi[{self.alpha}]({list(self.children)};{self.trace.payload!r})"


_L_CACHE = {}


def psi_l_measure(t):
    """Node measure: one plus twice the measures of the subterms."""
    try:
        return _L_CACHE[t]
    except KeyError:
        value = 1 + sum(2 * psi_l_measure(r) for r in t.children)
        _L_CACHE[t] = value
        return value


@dataclass(frozen=True)
class Caps:
    """Enumeration caps: node measure, trace payload size, index budget."""

    max_l: int = 9
    max_payload: int = 6
    nu_budget: int = 6


class PsiSystem:
    """A collapsing term system for a fixed index order and dilator."""

    def __init__(self, nu, dilator, caps=Caps()):
        self.nu = nu
        self.D = dilator
        self.caps = caps
        self._cmp = {}
        self._member = {}
        self._gplus = {}
        self._closure = None
        self.label = f"psi[{nu.label}]({dilator.name})"
        self.order = CodedOrder(
            label=self.label + "+",
            compare=self.compare,
            enumerate=lambda budget: tuple(self.enumerate(budget)),
        )

    # -- construction -------------------------------------------------

    def term(self, alpha, children, trace):
        """Validated term constructor; children get sorted, the trace is checked."""
        self.nu.compare(alpha, alpha)
        if not isinstance(trace, Trace):
            raise TypeError("trace required")
        kids = list(children)
        if len(kids) != trace.arity:
            raise ValueError(f"{len(kids)} children vs trace arity {trace.arity}")
        if self.D.payload_support(trace.arity, trace.payload) != frozenset(range(trace.arity)):
            raise ValueError(f"payload {trace.payload!r} lacks full support at arity {trace.arity}")
        kids.sort(key=cmp_to_key(self.compare))
        for a, b in zip(kids, kids[1:]):
            if self.compare(a, b) == 0:
                raise ValueError("children must be distinct")
        return PsiTerm(alpha, kids, trace)

    # -- order --------------------------------------------------------

    def compare(self, s, t):
        """Total comparison on the free system.

        Indices compare first; on equal indices the dilator oracle
        decides over the union of the subterm sets.
        """
        if s is t or s == t:
            return EQ
        small = psi_l_measure(s) + psi_l_measure(t) <= 10
        if small:
            key = (s, t)
            hit = self._cmp.get(key)
            if hit is not None:
                return hit
        c = self.nu.compare(s.alpha, t.alpha)
        if c == 0:
            c = element_compare(self.D, self.order, self.value_of(s), self.value_of(t))
        if small:
            self._cmp[key] = c
            self._cmp[(t, s)] = -c
        return c

    def value_of(self, t):
        """The D-element over the free system denoted by a term's data."""
        return Elem(t.trace, t.children)

    # -- the collapsed suborder ----------------------------------------

    def g_plus(self, gamma, t):
        """Collected values with index at least gamma, by structural recursion."""
        key = (gamma, t)
        hit = self._gplus.get(key)
        if hit is not None:
            return hit
        if self.nu.compare(t.alpha, gamma) < 0:
            out = ()
        else:
            acc = [self.value_of(t)]
            for r in t.children:
                acc.extend(self.g_plus(gamma, r))
            seen = []
            for e in acc:
                if e not in seen:
                    seen.append(e)
            out = tuple(seen)
        self._gplus[key] = out
        return out

    def member(self, t):
        """Whether a term belongs to the collapsed suborder."""
        hit = self._member.get(t)
        if hit is not None:
            return hit
        ok = all(self.member(r) for r in t.children)
        if ok:
            tau = self.value_of(t)
            for r in t.children:
                for e in self.g_plus(t.alpha, r):
                    if element_compare(self.D, self.order, e, tau) >= 0:
                        ok = False
                        break
                if not ok:
                    break
        self._member[t] = ok
        return ok

    def pi(self, t):
        """The collapse: index and D-element of a member term."""
        if not self.member(t):
            raise LawViolation(f"{t!r} is not in the collapsed suborder")
        return (t.alpha, self.value_of(t))

    def psi_inverse(self, alpha, tau):
        """Partial inverse of the collapse; None when out of range."""
        for r in tau.support:
            if not self.member(r):
                raise ValueError(f"support point {r!r} is not a member")
        candidate = PsiTerm(alpha, tau.support, tau.trace)
        return candidate if self.member(candidate) else None

    # -- enumeration ----------------------------------------------------

    def closure(self):
        """Deterministic candidate pool under the configured caps.

        Children are drawn from previously produced members, so the pool
        contains every member reachable within the caps plus the one-step
        non-members above them.  The result is independent of any count.
        """
        if self._closure is not None:
            return self._closure
        caps = self.caps
        alphas = list(self.nu.enumerate(caps.nu_budget))
        payloads = {}

        def traces_for(k):
            if k not in payloads:
                payloads[k] = self.D.traces(k, caps.max_payload)
            return payloads[k]

        # arities with traces are downward closed for all shipped dilators,
        # so probing can stop at the first empty one
        weight_cap = (caps.max_l - 1) // 2
        max_size = 0
        for k in range(1, weight_cap + 1):
            if not traces_for(k):
                break
            max_size = k
        produced = []
        members = []
        seen = set()
        while True:
            pool = sorted(members, key=cmp_to_key(self.compare))
            fresh = []
            for kids in self._subsets(pool, weight_cap, max_size):
                for tr in traces_for(len(kids)):
                    for alpha in alphas:
                        cand = PsiTerm(alpha, kids, tr)
                        if cand in seen:
                            continue
                        seen.add(cand)
                        ok = self.member(cand)
                        produced.append((cand, ok))
                        if ok:
                            fresh.append(cand)
            if not fresh:
                break
            members.extend(fresh)
        produced.sort(key=cmp_to_key(lambda a, b: self._closure_key(a, b)))
        self._closure = produced
        return produced

    def _closure_key(self, a, b):
        c = sign(psi_l_measure(a[0]) - psi_l_measure(b[0]))
        return c if c else self.compare(a[0], b[0])

    def _subsets(self, pool, weight_left, max_size):
        """Strictly increasing subsets of the member pool within the measure budget.

        max_size prunes sizes for which the dilator has no traces at all.
        """
        out = [()]

        def grow(prefix, start, left):
            if len(prefix) >= max_size:
                return
            for i in range(start, len(pool)):
                t = pool[i]
                w = psi_l_measure(t)
                if w > left:
                    continue
                prefix.append(t)
                out.append(tuple(prefix))
                grow(prefix, i + 1, left - w)
                prefix.pop()

        grow([], 0, weight_left)
        return out

    def members(self):
        """All members in the closure, sorted by the term order."""
        ms = [t for (t, ok) in self.closure() if ok]
        ms.sort(key=cmp_to_key(self.compare))
        return ms

    def enumerate(self, count):
        """First `count` members of the capped closure in increasing order."""
        ms = self.members()
        if len(ms) < count:
            raise BudgetExhausted(
                f"{self.label}: only {len(ms)} members within caps {self.caps}, wanted {count}"
            )
        return ms[:count]

    def handle(self):
        return CollapseHandle(
            label=self.label,
            order=CodedOrder(
                label=self.label,
                compare=self.compare,
                enumerate=lambda budget: tuple(self.enumerate(budget)),
            ),
            nu=self.nu,
            dilator=self.D,
            pi=self.pi,
            psi_inv=self.psi_inverse,
        )


@dataclass(frozen=True)
class CollapseHandle:
    """A collapse presented abstractly: order, embedding, partial inverse.

    The subterm relation (children) is read off the support of the
    D-component; the G and E collectors below recurse along it.
    """

    label: str
    order: CodedOrder
    nu: CodedOrder
    dilator: object
    pi: object
    psi_inv: object

    def children(self, t):
        return self.pi(t)[1].support

    def g_d(self, gamma, t):
        """Values of index at least gamma reachable from a point."""
        alpha, tau = self.pi(t)
        if self.nu.compare(alpha, gamma) < 0:
            return ()
        out = [tau]
        for e in self.g(gamma, tau):
            if e not in out:
                out.append(e)
        return tuple(out)

    def g(self, gamma, tau):
        """Union of the point collectors over the support of a D-element."""
        out = []
        for s in tau.support:
            for e in self.g_d(gamma, s):
                if e not in out:
                    out.append(e)
        return tuple(out)

    def in_segment(self, alpha, t):
        """Whether the point collapses with index at most alpha."""
        return self.nu.compare(self.pi(t)[0], alpha) <= 0

    def e_d(self, alpha, t):
        """Trace of a point inside the initial segment of index alpha."""
        if self.in_segment(alpha, t):
            return (t,)
        _, tau = self.pi(t)
        return self.e(alpha, tau)

    def e(self, alpha, tau):
        out = []
        for s in tau.support:
            for r in self.e_d(alpha, s):
                if r not in out:
                    out.append(r)
        return tuple(out)


@dataclass
class RangeReport:
    """Outcome of checking the defining range equation on a sample grid."""

    label: str
    checked: int = 0
    mismatches: list = None

    def __post_init__(self):
        if self.mismatches is None:
            self.mismatches = []

    @property
    def ok(self):
        return not self.mismatches

    def lines(self):
        yield f"range equation on {self.label}: {self.checked} pairs"
        for m in self.mismatches:
            yield f"  MISMATCH: {m}"
        if self.ok:
            yield "  inverse defined exactly on the low-data side"


def check_range_condition(handle, samples):
    """Verify both directions of the defining range equation.

    For each pair (alpha, tau) the partial inverse must be defined
    exactly when every collected value sits strictly below tau; on
    defined pairs the collapse must return the pair itself.
    """
    rep = RangeReport(handle.label)
    D, X = handle.dilator, handle.order
    for alpha, tau in samples:
        rep.checked += 1
        t = handle.psi_inv(alpha, tau)
        low = all(element_compare(D, X, e, tau) < 0 for e in handle.g(alpha, tau))
        if (t is not None) != low:
            rep.mismatches.append(
                f"alpha={alpha!r} tau={tau!r}: inverse {'defined' if t is not None else 'undefined'}"
                f" but condition {'holds' if low else 'fails'}"
            )
            continue
        if t is not None:
            back = handle.pi(t)
            if back[0] != alpha or back[1] != tau:
                rep.mismatches.append(f"round trip fails at alpha={alpha!r} tau={tau!r}: {back!r}")
    return rep
