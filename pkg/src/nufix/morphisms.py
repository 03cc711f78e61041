"""Bridges between collapses: unique embeddings, the explicit word
collapse, and the two-way connection with Bachmann-Howard style maps.

Between any two collapses over comparable index orders there is exactly
one embedding making the collapse squares commute; it is computed here
by recursion along the subterm relation, memoized over finite closed
approximations.  The word order over a base Y carries an explicit
collapse for the affine transform 1 + Y x X, which serves as an
independent oracle.  Finally, a collapse of a word-composed dilator
yields a Bachmann-Howard map for the inner dilator, and such a map can
be folded back into a collapse on a generated suborder.
"""

from dataclasses import dataclass, field

from .orders import CodedOrder, nu_order, word_order
from .dilators import (
    AffineDilator,
    Composite,
    Elem,
    LawViolation,
    OmegaDilator,
    element_compare,
)
from .psi import CollapseHandle


def initial_embedding(I, src, dst, pts):
    """The unique square-commuting embedding between two collapses.

    I maps indices of the source into indices of the destination and
    must be increasing on the probed values.  The embedding value at a
    point is forced: collapse, push the support through the embedding
    recursively, and invert on the destination.  Returns a dict holding
    the computed values on pts and their subterm closures.
    """
    imap = I if callable(I) else (lambda a: I[a])
    memo = {}

    def f(t):
        if t in memo:
            return memo[t]
        alpha, tau = src.pi(t)
        mapped = Elem(tau.trace, tuple(f(s) for s in tau.support))
        value = dst.psi_inv(imap(alpha), mapped)
        if value is None:
            raise LawViolation(
                f"destination inverse undefined at index {imap(alpha)!r} for image of {t!r}"
            )
        memo[t] = value
        return value

    for t in pts:
        f(t)
    return memo


def check_commuting_square(I, src, dst, fmap):
    """Verify the collapse square at every computed point."""
    imap = I if callable(I) else (lambda a: I[a])
    bad = []
    for t, ft in fmap.items():
        alpha, tau = src.pi(t)
        want = (imap(alpha), Elem(tau.trace, tuple(fmap[s] for s in tau.support)))
        got = dst.pi(ft)
        if got != want:
            bad.append(f"square fails at {t!r}: {got!r} vs {want!r}")
    return bad


def omega_one_collapse(Y):
    """The explicit collapse of the affine transform on words over Y.

    The empty word collapses to the zero point; a word collapses to the
    pair of its head and its tail.  The inverse glues a head onto a
    tail word exactly when the head dominates the tail's head.
    """
    X = word_order(Y)
    D = AffineDilator(Y)
    one = nu_order(0, 1)
    zero_idx = (0, 0)

    def pi(w):
        if not isinstance(w, tuple):
            raise ValueError(f"not a word: {w!r}")
        if w == ():
            return (zero_idx, D.zero())
        return (zero_idx, D.point(w[0], w[1:]))

    def psi_inv(alpha, tau):
        if alpha != zero_idx:
            return None
        if tau.payload is None:
            return ()
        head, tail = tau.payload, tau.support[0]
        if tail == () or Y.compare(tail[0], head) <= 0:
            return (head,) + tail
        return None

    return CollapseHandle(
        label=f"w({Y.label})-collapse",
        order=X,
        nu=one,
        dilator=D,
        pi=pi,
        psi_inv=psi_inv,
    )


# ---------------------------------------------------------------------------
# Bachmann-Howard maps


@dataclass
class BHCollapse:
    """A Bachmann-Howard style map for a dilator over a fixed order.

    theta maps elements of D(Z) into Z.  Clause one: smaller elements
    with supports below the target value map below.  Clause two: the
    support of an element sits below its own value.
    """

    order: CodedOrder
    dilator: object
    theta: object
    graph: dict = field(default_factory=dict)

    def value(self, sigma):
        if sigma not in self.graph:
            self.graph[sigma] = self.theta(sigma)
        return self.graph[sigma]

    def inverse(self):
        inv = {}
        for sigma, t in self.graph.items():
            inv[t] = sigma
        return inv


def sigma_plus(handle, sigma):
    """Extend an inner element to a word that the collapse can invert.

    Collect the values reachable from a singleton word, take their
    maximum, cut the maximum word where its entries drop below the
    element, and append the element itself.
    """
    E = handle.dilator
    if not isinstance(E, Composite) or not isinstance(E.E, OmegaDilator):
        raise TypeError("handle must collapse a word-composed dilator")
    D, X = E.D, handle.order
    singleton = E.wrap_word(X, [sigma])
    candidates = [E.wrap_word(X, [])] + list(handle.g(index_zero(handle), singleton))
    star = candidates[0]
    for c in candidates[1:]:
        if element_compare(E, X, star, c) < 0:
            star = c
    entries = E.unwrap_word(star)
    cut = len(entries)
    for i, e in enumerate(entries):
        if element_compare(D, X, e, sigma) < 0:
            cut = i
            break
    return E.wrap_word(X, entries[:cut] + [sigma])


def index_zero(handle):
    return handle.nu.enumerate(1)[0]


def bh_theta(handle):
    """Fold a collapse of a word-composed dilator into a Bachmann-Howard map."""
    E = handle.dilator

    def theta(sigma):
        plus = sigma_plus(handle, sigma)
        t = handle.psi_inv(index_zero(handle), plus)
        if t is None:
            raise LawViolation(f"inverse undefined on extension of {sigma!r}")
        return t

    return BHCollapse(order=handle.order, dilator=E.D, theta=theta)


@dataclass
class BHReport:
    label: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        yield f"Bachmann-Howard clauses on {self.label}: {self.checked} checks"
        for v in self.violations:
            yield f"  VIOLATION: {v}"
        if self.ok:
            yield "  both clauses hold"


def check_bh_collapse(bh, elems):
    """Check both clauses on every pair (and point) from the sample."""
    rep = BHReport("theta")
    D, Z = bh.dilator, bh.order
    values = {sigma: bh.value(sigma) for sigma in elems}
    for sigma in elems:
        rep.checked += 1
        for r in sigma.support:
            if Z.compare(r, values[sigma]) >= 0:
                rep.violations.append(f"support of {sigma!r} not below its value")
                break
    for sigma in elems:
        for tau in elems:
            if element_compare(D, Z, sigma, tau) >= 0:
                continue
            rep.checked += 1
            if all(Z.compare(r, values[tau]) < 0 for r in sigma.support):
                if Z.compare(values[sigma], values[tau]) >= 0:
                    rep.violations.append(
                        f"{sigma!r} < {tau!r} with support below the target value, "
                        f"but values compare {values[sigma]!r} >= {values[tau]!r}"
                    )
    return rep


@dataclass
class SuborderReport:
    complete: bool
    carrier: list
    skipped: list

    def lines(self):
        yield f"generated suborder: {len(self.carrier)} points" + (
            "" if self.complete else f" (partial: {len(self.skipped)} unresolved)"
        )


def bh_to_one_collapse(bh, rounds=16):
    """Recover a collapse on the suborder a Bachmann-Howard map generates.

    Works on the probed part of the map: a value belongs to the
    candidate set when its collected lower data stays strictly below
    its preimage, and the suborder keeps the candidates all of whose
    subterm values also made it in.  Saturation runs for a bounded
    number of rounds and reports incompleteness instead of claiming a
    minimal suborder.
    """
    D, Z = bh.dilator, bh.order
    inv = bh.inverse()
    skipped = []

    g_memo = {}

    def g_of(sigma):
        if sigma in g_memo:
            return g_memo[sigma]
        out = []
        for s in sigma.support:
            if s not in inv:
                raise KeyError(s)
            rho = inv[s]
            for e in [rho] + list(g_of(rho)):
                if e not in out:
                    out.append(e)
        g_memo[sigma] = tuple(out)
        return tuple(out)

    candidates = {}
    for sigma, t in bh.graph.items():
        try:
            low = all(element_compare(D, Z, e, sigma) < 0 for e in g_of(sigma))
        except KeyError:
            skipped.append(t)
            continue
        if low:
            candidates[t] = sigma

    carrier = dict(candidates)
    for _ in range(rounds):
        drop = [t for t, sigma in carrier.items() if any(s not in carrier for s in sigma.support)]
        if not drop:
            break
        for t in drop:
            del carrier[t]
    complete = all(all(s in carrier for s in sigma.support) for sigma in carrier.values())

    points = Z.sort(carrier.keys())
    zero_idx = (0, 0)

    def pi(t):
        return (zero_idx, carrier[t])

    def psi_inv(alpha, tau):
        if alpha != zero_idx:
            return None
        t = bh.value(tau)
        return t if t in carrier and carrier[t] == tau else None

    handle = CollapseHandle(
        label="generated-suborder",
        order=CodedOrder(
            label="generated-suborder",
            compare=Z.compare,
            enumerate=lambda budget: tuple(points[:budget]),
        ),
        nu=nu_order(0, 1),
        dilator=D,
        pi=pi,
        psi_inv=psi_inv,
    )
    return handle, SuborderReport(complete=complete and not skipped, carrier=points, skipped=skipped)
