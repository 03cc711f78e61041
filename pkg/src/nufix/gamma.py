"""The binary Veblen term order over a coded base order.

Terms denote ordinals below the X-th strongly critical ordinal: zero,
strongly critical generators indexed by X, proper binary Veblen values,
and finite non-increasing sums of principal terms.  Membership and
comparison are decided by one simultaneous structural recursion; the
recursion measure counts the internal nodes of a term.

Terms are plain immutable syntax trees.  The relaxed (unchecked) trees
double as the pre-term class: `member` decides whether such a tree is a
genuine term, and the checked constructors `pv` and `seq` validate
eagerly so that equality of terms can stay syntactic.
"""

from functools import cmp_to_key

from .orders import EQ, GT, LT, finite_order, sign
from .dilators import Predilator


class GammaTerm:
    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash

    def __ne__(self, other):
        return not self.__eq__(other)


class Zero(GammaTerm):
    __slots__ = ()

    def __init__(self):
        object.__setattr__(self, "_hash", hash(("gamma0",)))

    __hash__ = GammaTerm.__hash__

    def __eq__(self, other):
        return type(other) is Zero

    def __repr__(self):
        return "0"


class Sc(GammaTerm):
    """A strongly critical generator for a base point."""

    __slots__ = ("x",)

    def __init__(self, x):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "_hash", hash(("gammaS", x)))

    __hash__ = GammaTerm.__hash__

    def __eq__(self, other):
        return type(other) is Sc and self.x == other.x

    def __repr__(self):
        return f"G({self.x})"


class Pv(GammaTerm):
    """A proper binary Veblen value (not a fixed point of its own row)."""

    __slots__ = ("s", "t")

    def __init__(self, s, t):
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "_hash", hash(("gammaP", s, t)))

    __hash__ = GammaTerm.__hash__

    def __eq__(self, other):
        return type(other) is Pv and self.s == other.s and self.t == other.t

    def __repr__(self):
        return f"pv({self.s!r},{self.t!r})"


class Seq(GammaTerm):
    """A sum of at least two principal terms, non-increasing."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if len(entries) < 2:
            raise ValueError("sums need at least two entries")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", hash(("gammaQ",) + entries))

    __hash__ = GammaTerm.__hash__

    def __eq__(self, other):
        return type(other) is Seq and self.entries == other.entries

    def __repr__(self):
        return "<" + ",".join(map(repr, self.entries)) + ">"


ZERO = Zero()

# all finite orders share integer comparison, so one stands for all of
# them where only comparisons matter
_INT_ORDER = finite_order(1 << 30)


def is_sc(t):
    return type(t) is Sc


def is_principal(t):
    return type(t) in (Sc, Pv)


def h_value(t):
    """The critical bound of a term: itself for generators, the first
    argument for proper Veblen values, zero otherwise."""
    if type(t) is Sc:
        return t
    if type(t) is Pv:
        return t.s
    return ZERO


_L_CACHE = {}


def l_measure(t):
    """Number of internal nodes; the joint recursion measure."""
    try:
        return _L_CACHE[t]
    except KeyError:
        if type(t) in (Zero, Sc):
            value = 0
        elif type(t) is Pv:
            value = l_measure(t.s) + l_measure(t.t) + 1
        else:
            value = sum(l_measure(e) for e in t.entries) + 1
        _L_CACHE[t] = value
        return value


def node_size(t):
    """Total node count, leaves included.  Unlike the recursion measure,
    this bounds width as well as depth, so size-capped sets are finite."""
    if type(t) in (Zero, Sc):
        return 1
    if type(t) is Pv:
        return node_size(t.s) + node_size(t.t) + 1
    return sum(node_size(e) for e in t.entries) + 1


def as_word(t):
    """Every term is a possibly empty non-increasing word of principals."""
    if type(t) is Zero:
        return ()
    if type(t) is Seq:
        return t.entries
    return (t,)


def from_word(entries):
    entries = tuple(entries)
    if not entries:
        return ZERO
    if len(entries) == 1:
        return entries[0]
    return Seq(entries)


_CMP_CACHE = {}
_CMP_CACHE_MAX_L = 6


def gamma_compare(X, s, t):
    if s == t:
        return EQ
    small = l_measure(s) + l_measure(t) <= _CMP_CACHE_MAX_L
    if small:
        key = (id(X), s, t)
        hit = _CMP_CACHE.get(key)
        if hit is not None:
            return hit
    c = LT if _less(X, s, t) else GT
    if small:
        _CMP_CACHE[key] = c
        _CMP_CACHE[(id(X), t, s)] = -c
    return c


def gamma_le(X, s, t):
    return s == t or gamma_compare(X, s, t) < 0


def _lt(X, s, t):
    return gamma_compare(X, s, t) < 0


def _less(X, s, t):
    """Decide the strict order; recursion descends along the node measure.

    The case split follows the target term.  Below a generator, a
    proper value is smaller when both arguments are; below a proper
    value pv(a,b), a generator must sit below an argument, and another
    proper value pv(c,d) is smaller in exactly three situations:
    the first arguments decrease and d stays below the target, the
    first arguments agree and the second arguments decrease, or the
    whole term already sits weakly below b.  Sums compare entrywise
    with proper prefixes smaller.
    """
    ts, tt = type(s), type(t)
    if tt is Zero:
        return False
    if tt is Sc:
        if ts is Zero:
            return True
        if ts is Sc:
            return X.compare(s.x, t.x) < 0
        if ts is Pv:
            return _lt(X, s.s, t) and _lt(X, s.t, t)
        return _lt(X, s.entries[0], t)
    if tt is Pv:
        if ts is Zero:
            return True
        if ts is Sc:
            return gamma_le(X, s, t.s) or gamma_le(X, s, t.t)
        if ts is Seq:
            return _lt(X, s.entries[0], t)
        if _lt(X, s.s, t.s) and _lt(X, s.t, t):
            return True
        if s.s == t.s and _lt(X, s.t, t.t):
            return True
        return gamma_le(X, s, t.t)
    sw, tw = as_word(s), as_word(t)
    for a, b in zip(sw, tw):
        if a != b:
            return _lt(X, a, b)
    return len(sw) < len(tw)


def is_gamma_member(X, t):
    """Decide whether a relaxed tree satisfies all side conditions."""
    ty = type(t)
    if ty in (Zero, Sc):
        return True
    if ty is Pv:
        return (
            is_gamma_member(X, t.s)
            and is_gamma_member(X, t.t)
            and gamma_le(X, h_value(t.t), t.s)
            and (t.t != ZERO or not is_sc(t.s))
        )
    if ty is Seq:
        if len(t.entries) < 2:
            return False
        for e in t.entries:
            if not is_principal(e) or not is_gamma_member(X, e):
                return False
        for a, b in zip(t.entries, t.entries[1:]):
            if not gamma_le(X, b, a):
                return False
        return True
    raise TypeError(f"not a term tree: {t!r}")


def pv(X, s, t):
    """Checked constructor for a proper Veblen value."""
    if not gamma_le(X, h_value(t), s):
        raise ValueError(f"critical bound of {t!r} exceeds {s!r}")
    if t == ZERO and is_sc(s):
        raise ValueError(f"{s!r} is already the value at zero")
    return Pv(s, t)


def seq(X, entries):
    """Checked constructor for a sum."""
    entries = tuple(entries)
    if len(entries) == 0:
        return ZERO
    if len(entries) == 1:
        if not is_principal(entries[0]):
            raise ValueError("single entry must be principal")
        return entries[0]
    for e in entries:
        if not is_principal(e):
            raise ValueError(f"sum entry {e!r} is not principal")
    for a, b in zip(entries, entries[1:]):
        if not gamma_le(X, b, a):
            raise ValueError(f"sum entries increase: {a!r} then {b!r}")
    return Seq(entries)


def gamma_support(t):
    ty = type(t)
    if ty is Zero:
        return frozenset()
    if ty is Sc:
        return frozenset({t.x})
    if ty is Pv:
        return gamma_support(t.s) | gamma_support(t.t)
    out = frozenset()
    for e in t.entries:
        out |= gamma_support(e)
    return out


def gamma_map(f, t):
    """Rename base points through an increasing map; structure is kept."""
    if not callable(f):
        g = f.__getitem__
    else:
        g = f
    return _map(g, t)


def _map(g, t):
    ty = type(t)
    if ty is Zero:
        return t
    if ty is Sc:
        return Sc(g(t.x))
    if ty is Pv:
        return Pv(_map(g, t.s), _map(g, t.t))
    return Seq(tuple(_map(g, e) for e in t.entries))


def gamma_embed(x):
    return Sc(x)


def veblen_phi(X, s, t):
    """The total binary Veblen function on terms."""
    if _less(X, s, h_value(t)):
        return t
    if is_sc(s) and t == ZERO:
        return s
    return Pv(s, t)


def gamma_add(X, s, t):
    """Sum of terms: concatenation with absorption of small leading entries."""
    sw, tw = as_word(s), as_word(t)
    if not tw:
        return s
    if not sw:
        return t
    if gamma_le(X, tw[0], sw[-1]):
        return from_word(sw + tw)
    i = next(i for i in range(len(sw)) if _less(X, sw[i], tw[0]))
    return from_word(sw[:i] + tw)


def nat(n):
    """The n-th finite term: an n-fold sum of the least principal term."""
    if n == 0:
        return ZERO
    one = Pv(ZERO, ZERO)
    if n == 1:
        return one
    return Seq((one,) * n)


def nat_value(t):
    """Inverse of nat where defined, else None."""
    one = Pv(ZERO, ZERO)
    if t == ZERO:
        return 0
    w = as_word(t)
    if all(e == one for e in w):
        return len(w)
    return None


def omega_times(X, t):
    """Multiply by the first infinite ordinal, entry by entry."""
    ty = type(t)
    if ty is Zero or ty is Sc:
        return t
    if ty is Pv:
        if t.s == ZERO:
            return Pv(ZERO, gamma_add(X, nat(1), t.t))
        return t
    return Seq(tuple(omega_times(X, e) for e in t.entries))


def gamma_fragment(X, max_l, points=None, max_width=4):
    """All members over the given base points with measure at most max_l
    and sums of at most max_width entries.

    The width cap is necessary for finiteness: generators have measure
    zero, so arbitrarily long sums of generators share the measure of a
    short one.  Returned in a deterministic order, grouped by measure.
    points defaults to the full carrier of a finite base order.
    """
    if points is None:
        points = list(X.enumerate(max_l + 1))
    by_level = {0: [ZERO] + [Sc(x) for x in points]}
    principals = {0: [Sc(x) for x in points]}
    for level in range(1, max_l + 1):
        terms = []
        pvs = []
        for la in range(level):
            lb = level - 1 - la
            for s in by_level[la]:
                for t in by_level[lb]:
                    if gamma_le(X, h_value(t), s) and (t != ZERO or not is_sc(s)):
                        p = Pv(s, t)
                        terms.append(p)
                        pvs.append(p)
        pool = []
        for lv in range(level):
            pool.extend(principals[lv])
        pool.sort(key=cmp_to_key(lambda a, b: gamma_compare(X, a, b)), reverse=True)

        def grow(prefix, start, left):
            # entries cost their own measure, the sum node costs one; only
            # sums landing exactly on this level are new here
            if len(prefix) >= 2 and left == 0:
                terms.append(Seq(tuple(prefix)))
            if len(prefix) >= max_width:
                return
            for i in range(start, len(pool)):
                e = pool[i]
                le = l_measure(e)
                if le > left:
                    continue
                if prefix and not gamma_le(X, e, prefix[-1]):
                    continue
                prefix.append(e)
                grow(prefix, i, left - le)
                prefix.pop()

        grow([], 0, level - 1)
        by_level[level] = terms
        principals[level] = pvs
    out = []
    for level in range(max_l + 1):
        out.extend(by_level[level])
    return out


def gamma_size_fragment(X, max_size, points=None):
    """All members over the given base points with node count at most
    max_size, in a deterministic order grouped by size."""
    if points is None:
        points = list(X.enumerate(max_size + 1))
    by_size = {1: [ZERO] + [Sc(x) for x in points]}
    principal_pool = [Sc(x) for x in points]
    for size in range(2, max_size + 1):
        terms = []
        for la in range(1, size - 1):
            lb = size - 1 - la
            for s in by_size.get(la, ()):
                for t in by_size.get(lb, ()):
                    if gamma_le(X, h_value(t), s) and (t != ZERO or not is_sc(s)):
                        terms.append(Pv(s, t))
        pool = sorted(
            principal_pool, key=cmp_to_key(lambda a, b: gamma_compare(X, a, b)), reverse=True
        )

        def grow(prefix, start, left):
            if len(prefix) >= 2 and left == 0:
                terms.append(Seq(tuple(prefix)))
            for i in range(start, len(pool)):
                e = pool[i]
                se = node_size(e)
                if se > left:
                    continue
                if prefix and not gamma_le(X, e, prefix[-1]):
                    continue
                prefix.append(e)
                grow(prefix, i, left - se)
                prefix.pop()

        grow([], 0, size - 1)
        by_size[size] = terms
        principal_pool = principal_pool + [t for t in terms if is_principal(t)]
    out = []
    for size in range(1, max_size + 1):
        out.extend(by_size.get(size, ()))
    return out


class GammaDilator(Predilator):
    """The Veblen order as a coded predilator.

    Trace payloads at arity n are the full-support members over the
    finite order n; the payload size counts all nodes, which keeps
    budgeted trace sets finite (the recursion measure does not, since
    generators weigh nothing).
    """

    name = "gamma"

    def __init__(self):
        self._frag_cache = {}
        self._map_cache = {}
        self._pair_cache = {}

    def _fragment(self, n, budget):
        key = (n, budget)
        if key not in self._frag_cache:
            self._frag_cache[key] = gamma_size_fragment(finite_order(n), budget)
        return self._frag_cache[key]

    def trace_payloads(self, arity, budget):
        full = frozenset(range(arity))
        return [t for t in self._fragment(arity, budget) if gamma_support(t) == full]

    def payload_size(self, payload):
        return node_size(payload)

    def payload_support(self, arity, payload):
        return gamma_support(payload)

    def _mapped(self, payload, positions):
        key = (payload, positions)
        hit = self._map_cache.get(key)
        if hit is None:
            hit = _map(positions.__getitem__, payload)
            self._map_cache[key] = hit
        return hit

    def compare_at(self, k, lhs, rhs):
        # base points are integers in every finite order, so the result
        # does not depend on k and mapped pairs can be cached globally
        (t1, u), (t2, v) = lhs, rhs
        a = self._mapped(t1.payload, u)
        b = self._mapped(t2.payload, v)
        if a == b:
            return 0
        key = (a, b)
        hit = self._pair_cache.get(key)
        if hit is None:
            hit = gamma_compare(_INT_ORDER, a, b)
            self._pair_cache[key] = hit
            self._pair_cache[(b, a)] = -hit
        return hit

    def payload_str(self, payload):
        from .textforms import gamma_term_str

        return gamma_term_str(payload, var_names=True)
