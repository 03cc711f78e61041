"""Property batteries for the Veblen term order.

Two suites: the fixed-point / monotonicity / comparison battery for the
total Veblen function, and the arithmetic suite for addition and the
omega-multiple.  Exhaustive parts run over bounded fragments; wider
coverage comes from seeded random sampling.  Each check returns a list
of human-readable violations, empty on success.
"""

import random
from functools import cmp_to_key

from .orders import finite_order
from . import gamma as G


def _lt(X, a, b):
    return G.gamma_compare(X, a, b) < 0


def _le(X, a, b):
    return G.gamma_compare(X, a, b) <= 0


# ---------------------------------------------------------------------------
# the Veblen battery


def phi_battery_pair(X, s, t):
    """All single-pair checks of the Veblen battery."""
    out = []
    v = G.veblen_phi(X, s, t)
    if not G.is_principal(v):
        out.append(f"phi({s!r},{t!r}) = {v!r} is not principal")
    if not (_le(X, s, v) and _le(X, t, v)):
        out.append(f"arguments not below phi({s!r},{t!r})")
    fixed = v == t
    expl = (G.is_sc(t) and _lt(X, s, t)) or (type(t) is G.Pv and _lt(X, s, t.s))
    if fixed != expl:
        out.append(f"fixed-point characterization fails at ({s!r},{t!r})")
    if G.is_sc(s) != (G.veblen_phi(X, s, G.ZERO) == s):
        out.append(f"value-at-zero characterization fails at {s!r}")
    return out


def phi_battery_triple(X, s, t, u):
    """Checks that need a third term: monotonicity and generator bounds."""
    out = []
    if _lt(X, t, u) and not _lt(X, G.veblen_phi(X, s, t), G.veblen_phi(X, s, u)):
        out.append(f"not strictly increasing in the second argument at ({s!r},{t!r},{u!r})")
    if _lt(X, s, u) and not _le(X, G.veblen_phi(X, s, t), G.veblen_phi(X, u, t)):
        out.append(f"not weakly increasing in the first argument at ({s!r},{u!r},{t!r})")
    if G.is_sc(u):
        left = _lt(X, G.veblen_phi(X, s, t), u)
        right = _lt(X, s, u) and _lt(X, t, u)
        if left != right:
            out.append(f"comparison with a generator fails at ({s!r},{t!r}) vs {u!r}")
    return out


def phi_battery_quad(X, s1, t1, s2, t2):
    a = G.veblen_phi(X, s1, t1)
    b = G.veblen_phi(X, s2, t2)
    left = _lt(X, a, b)
    right = (
        (_lt(X, s1, s2) and _lt(X, t1, b))
        or (s1 == s2 and _lt(X, t1, t2))
        or (_lt(X, s2, s1) and _lt(X, a, t2))
    )
    if left != right:
        return [f"three-case comparison fails at phi({s1!r},{t1!r}) vs phi({s2!r},{t2!r})"]
    return []


def principal_decomposition(X, pool):
    """Every principal term is a value of the total Veblen function."""
    out = []
    for t in pool:
        if not G.is_principal(t):
            continue
        if G.is_sc(t):
            ok = G.veblen_phi(X, t, G.ZERO) == t
        else:
            ok = G.veblen_phi(X, t.s, t.t) == t
        if not ok:
            out.append(f"{t!r} is not a Veblen value")
    return out


def run_battery(X=None, small_pool=None, big_pool=None, seed=0, random_count=10_000, report=None):
    """The full battery: exhaustive pairs over the small pool, exhaustive
    triple spot checks, then seeded random pairs, triples and quadruples
    drawn from the big pool."""
    X = X or finite_order(2)
    if small_pool is None:
        small_pool = G.gamma_fragment(X, 2, max_width=2)
    if big_pool is None:
        big_pool = small_pool
    violations = []
    violations += principal_decomposition(X, big_pool)
    for s in small_pool:
        if violations:
            break
        for t in small_pool:
            violations += phi_battery_pair(X, s, t)
            if violations:
                break
    if not violations:
        rng = random.Random(seed)
        for _ in range(random_count):
            s, t, u = rng.choice(big_pool), rng.choice(big_pool), rng.choice(big_pool)
            violations += phi_battery_pair(X, s, t)
            violations += phi_battery_triple(X, s, t, u)
            s2, t2 = rng.choice(big_pool), rng.choice(big_pool)
            violations += phi_battery_quad(X, s, t, s2, t2)
            if violations:
                break
    if report:
        report(
            f"Veblen battery: exhaustive pool {len(small_pool)}, "
            f"random pool {len(big_pool)} x {random_count}"
        )
        for v in violations:
            report(f"  VIOLATION: {v}")
        if not violations:
            report("  battery clean")
    return not violations


# ---------------------------------------------------------------------------
# term-level arithmetic checks (for unit tests and random sampling)


def triple_checks(X, r, s, t):
    """Addition lemmas on one triple."""
    out = []
    add = lambda a, b: G.gamma_add(X, a, b)
    if add(add(r, s), t) != add(r, add(s, t)):
        out.append(f"associativity fails at ({r!r},{s!r},{t!r})")
    if add(t, G.ZERO) != t or add(G.ZERO, t) != t:
        out.append(f"zero laws fail at {t!r}")
    if _lt(X, s, t):
        if not _lt(X, add(r, s), add(r, t)):
            out.append(f"left addition not strict at ({r!r},{s!r},{t!r})")
        if not _le(X, add(s, r), add(t, r)):
            out.append(f"right addition not weak at ({r!r},{s!r},{t!r})")
    supp = G.gamma_support
    st = supp(s) | supp(t)
    if not (
        supp(G.veblen_phi(X, s, t)) <= st
        and supp(add(s, t)) <= st
        and supp(G.omega_times(X, t)) <= st
    ):
        out.append(f"support bound fails at ({s!r},{t!r})")
    return out


def absorption_check(X, r, rp, s, t):
    """Principal absorption on one quadruple."""
    if not G.is_principal(t):
        return []
    bound = G.gamma_add(X, rp, t)
    if _lt(X, r, bound) and _lt(X, s, t) and not _lt(X, G.gamma_add(X, r, s), bound):
        return [f"principal absorption fails at ({r!r},{rp!r},{s!r},{t!r})"]
    return []


def omega_multiple_checks(X, s, t):
    out = []
    wt = G.omega_times(X, t)
    if _lt(X, s, t) and not _lt(X, G.omega_times(X, s), wt):
        out.append(f"omega-multiple not strictly increasing at ({s!r},{t!r})")
    if not _le(X, t, wt):
        out.append(f"term above its omega-multiple: {t!r}")
    if _lt(X, s, wt):
        for n in (1, 2, 3):
            if not _lt(X, G.gamma_add(X, s, G.nat(n)), wt):
                out.append(f"finite bumps escape the omega-multiple at ({s!r},{t!r},{n})")
                break
    return out


def subtraction_check(X, pool, r, t):
    """Difference witnesses: r <= t exactly when some s gives r + s = t.

    The witness is always a suffix of t, so searching terms whose
    measure stays below the measure of t is complete.
    """
    le = _le(X, r, t)
    bound = G.l_measure(t)
    witness = any(
        G.l_measure(s) <= bound and G.gamma_add(X, r, s) == t for s in pool
    )
    if le != witness:
        return [f"difference witness fails at ({r!r},{t!r})"]
    return []


# ---------------------------------------------------------------------------
# the integer word mirror


class _WordEngine:
    """Integer mirror of the fragment arithmetic.

    Every term is a non-increasing word of principal subterms, addition
    never creates new principal entries, and the term order restricted
    to such words is exactly the tuple order on rank sequences (entry
    ranks decide, proper prefixes are smaller).  Tuples compare that way
    natively, which makes exhaustive sweeps cheap.  The mirror is
    verified against the term-level operations before it is trusted.
    """

    def __init__(self, X, pool):
        self.X = X
        self.pool = pool
        atoms = [t for t in pool if G.is_principal(t)]
        atom_set = set(atoms)
        for t in list(atoms):
            w = G.omega_times(X, t)
            if w not in atom_set:
                atoms.append(w)
                atom_set.add(w)
        one = G.Pv(G.ZERO, G.ZERO)
        if one not in atom_set:
            atoms.append(one)
        atoms.sort(key=cmp_to_key(lambda a, b: G.gamma_compare(X, a, b)))
        self.atoms = atoms
        self.atom_rank = {a: i for i, a in enumerate(atoms)}
        self.omega_rank = {}
        for a in atoms:
            w = G.omega_times(X, a)
            if w in self.atom_rank:
                self.omega_rank[self.atom_rank[a]] = self.atom_rank[w]
        self.one = self.atom_rank[one]
        self.words = {}
        self.word_list = []
        self.pool_idx = [self.intern(self.to_word(t)) for t in pool]

    def to_word(self, t):
        return tuple(self.atom_rank[e] for e in G.as_word(t))

    def intern(self, w):
        idx = self.words.get(w)
        if idx is None:
            idx = len(self.word_list)
            self.words[w] = idx
            self.word_list.append(w)
        return idx

    @staticmethod
    def add_words(u, v):
        if not v:
            return u
        if not u:
            return v
        if v[0] <= u[-1]:
            return u + v
        i = next(i for i in range(len(u)) if u[i] < v[0])
        return u[:i] + v

    def omega_word(self, w):
        return tuple(self.omega_rank[a] for a in w)

    def check_pair(self, s, si, t, ti):
        ws, wt = self.word_list[si], self.word_list[ti]
        if self.to_word(G.gamma_add(self.X, s, t)) != self.add_words(ws, wt):
            return [f"addition mirror breaks at ({s!r},{t!r})"]
        if (G.gamma_compare(self.X, s, t) < 0) != (ws < wt):
            return [f"order mirror breaks at ({s!r},{t!r})"]
        return []

    def verify_mirror(self, exhaustive_limit=600, samples=20_000, seed=0):
        """The mirror must commute with the term operations.

        Exhaustive on an initial slice of the pool, seeded random pairs
        across the whole pool, and the omega-multiple on every term.
        """
        bad = []
        for s, si in zip(self.pool, self.pool_idx):
            if self.to_word(G.omega_times(self.X, s)) != self.omega_word(self.word_list[si]):
                return [f"omega-multiple mirror breaks at {s!r}"]
        k = min(exhaustive_limit, len(self.pool))
        for i in range(k):
            for j in range(k):
                bad = self.check_pair(self.pool[i], self.pool_idx[i], self.pool[j], self.pool_idx[j])
                if bad:
                    return bad
        rng = random.Random(seed)
        n = len(self.pool)
        for _ in range(samples):
            i, j = rng.randrange(n), rng.randrange(n)
            bad = self.check_pair(self.pool[i], self.pool_idx[i], self.pool[j], self.pool_idx[j])
            if bad:
                return bad
        return bad


def assoc_patterns(max_atoms=6, max_len=2):
    """Exhaustive associativity of word addition on abstract patterns.

    Word addition only inspects the relative order of entries, so it
    commutes with renaming entries along any order isomorphism; checking
    all non-increasing integer words up to the length bound over a
    small alphabet therefore covers every concrete triple whose words
    fit the bound, whatever the fragment.
    """
    words = [()]
    level = [()]
    for _ in range(max_len):
        level = [w + (a,) for w in level for a in range(max_atoms) if not w or a <= w[-1]]
        words.extend(level)
    add = _WordEngine.add_words
    bad = []
    for u in words:
        for v in words:
            uv = add(u, v)
            for w in words:
                if add(uv, w) != add(u, add(v, w)):
                    bad.append(f"abstract associativity fails at {u},{v},{w}")
                    return bad
    return bad


def pattern_invariance(seed=0, samples=2000):
    """Spot check that word addition commutes with order isomorphisms."""
    rng = random.Random(seed)
    add = _WordEngine.add_words
    for _ in range(samples):
        n = rng.randrange(1, 7)
        u = tuple(sorted((rng.randrange(n) for _ in range(rng.randrange(3))), reverse=True))
        v = tuple(sorted((rng.randrange(n) for _ in range(rng.randrange(3))), reverse=True))
        shift = sorted(rng.sample(range(20), n))
        f = lambda w: tuple(shift[a] for a in w)
        if f(add(u, v)) != add(f(u), f(v)):
            return [f"addition not invariant under relabeling at {u},{v}"]
    return []


def run_arithmetic(X=None, max_l=4, report=None, seed=0):
    """Arithmetic suite over the bounded fragment (sum width two).

    Strategy: verify the integer mirror against the term operations,
    then sweep the laws in integer space.  Associativity is checked
    concretely on a subfragment and abstractly on all order patterns of
    width-two words, which covers every triple of the fragment; the
    remaining laws (zero, monotonicity, principal absorption over all
    quadruples, difference witnesses, omega-multiple bounds) are swept
    in full via rank tables.
    """
    import numpy as np

    X = X or finite_order(2)
    pool = G.gamma_fragment(X, max_l, max_width=2)
    n = len(pool)
    eng = _WordEngine(X, pool)
    violations = eng.verify_mirror(seed=seed)
    if violations:
        return _arith_report(report, violations, n, max_l)
    violations += assoc_patterns(max_atoms=6, max_len=2)
    violations += pattern_invariance(seed=seed)
    if violations:
        return _arith_report(report, violations, n, max_l)

    add_cache = {}

    def addi(a, b):
        key = (a, b)
        hit = add_cache.get(key)
        if hit is None:
            hit = eng.intern(eng.add_words(eng.word_list[a], eng.word_list[b]))
            add_cache[key] = hit
        return hit

    p = eng.pool_idx
    parr = np.array(p, dtype=np.int64)
    T1 = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        pi = p[i]
        row = T1[i]
        for j in range(n):
            row[j] = addi(pi, p[j])

    # concrete associativity on the small subfragment
    small = [i for i in range(n) if G.l_measure(pool[i]) <= 2]
    for i in small:
        for j in small:
            ij = addi(p[i], p[j])
            for k in small:
                if addi(ij, p[k]) != addi(p[i], addi(p[j], p[k])):
                    violations.append(
                        f"associativity fails at ({pool[i]!r},{pool[j]!r},{pool[k]!r})"
                    )
                    return _arith_report(report, violations, n, max_l)

    zero_idx = eng.intern(())
    ones = eng.intern((eng.one,))
    widx = np.array([eng.intern(eng.omega_word(eng.word_list[pi])) for pi in p], dtype=np.int64)
    bumps = []
    cur = list(p)
    for _ in range(3):
        cur = [addi(b, ones) for b in cur]
        bumps.append(np.array(cur, dtype=np.int64))

    for i in range(n):
        if addi(p[i], zero_idx) != p[i] or addi(zero_idx, p[i]) != p[i]:
            violations.append(f"zero laws fail at {pool[i]!r}")
            return _arith_report(report, violations, n, max_l)

    # rank every word produced so far via padded lexicographic sort;
    # padding with -1 keeps proper prefixes smaller
    N = len(eng.word_list)
    maxlen = max(len(w) for w in eng.word_list)
    padded = np.full((N, maxlen), -1, dtype=np.int64)
    for i, w in enumerate(eng.word_list):
        padded[i, : len(w)] = w
    order = np.lexsort(tuple(padded[:, c] for c in range(maxlen - 1, -1, -1)))
    rank = np.empty(N, dtype=np.int64)
    rank[order] = np.arange(N)
    prank = rank[parr]
    order_of_pool = np.argsort(prank, kind="stable")
    sorted_prank = prank[order_of_pool]
    R = rank[T1]

    # left strict / right weak monotonicity
    Rs = R[:, order_of_pool]
    if not (np.diff(Rs, axis=1) > 0).all():
        i = int(np.argwhere((np.diff(Rs, axis=1) <= 0).any(axis=1))[0][0])
        violations.append(f"left addition not strictly increasing for r={pool[i]!r}")
        return _arith_report(report, violations, n, max_l)
    Cs = R[order_of_pool, :]
    if not (np.diff(Cs, axis=0) >= 0).all():
        j = int(np.argwhere((np.diff(Cs, axis=0) < 0).any(axis=0))[0][0])
        violations.append(f"right addition not weakly increasing for r={pool[j]!r}")
        return _arith_report(report, violations, n, max_l)

    # principal absorption over all quadruples: for principal t and any
    # r', values r below r'+t and entries s below t keep r+s below r'+t
    M = np.maximum.accumulate(Rs, axis=1)
    for tj in range(n):
        if not G.is_principal(pool[tj]):
            continue
        q = int(np.searchsorted(sorted_prank, prank[tj]))
        if q == 0:
            continue
        colmax = M[:, q - 1]
        prefix = np.maximum.accumulate(colmax[order_of_pool])
        climits = R[:, tj]
        cnts = np.searchsorted(sorted_prank, climits)
        bad = np.zeros(n, dtype=bool)
        has = cnts > 0
        bad[has] = prefix[cnts[has] - 1] >= climits[has]
        if bad.any():
            rp = int(np.argmax(bad))
            violations.append(f"principal absorption fails with r'={pool[rp]!r}, t={pool[tj]!r}")
            return _arith_report(report, violations, n, max_l)

    # difference witnesses: r <= t exactly when t appears in row r
    psorted = np.sort(parr)
    for i in range(n):
        row = np.sort(T1[i])
        pos = np.searchsorted(row, parr)
        pos[pos >= n] = n - 1
        hit = row[pos] == parr
        want = prank[i] <= prank
        if not np.array_equal(hit, want):
            j = int(np.argwhere(hit != want)[0][0])
            violations.append(f"difference witness fails at ({pool[i]!r},{pool[j]!r})")
            return _arith_report(report, violations, n, max_l)
    del psorted

    # omega-multiple: strictly increasing, dominating, closed under bumps
    wrank = rank[widx]
    if not (np.diff(wrank[order_of_pool]) > 0).all():
        violations.append("omega-multiple not strictly increasing")
        return _arith_report(report, violations, n, max_l)
    if not (prank <= wrank).all():
        violations.append("omega-multiple not dominating")
        return _arith_report(report, violations, n, max_l)
    for bump in bumps:
        brank = rank[bump]
        for i in range(n):
            bad = (brank[i] < wrank) != (prank[i] < wrank)
            if bad.any():
                j = int(np.argwhere(bad)[0][0])
                violations.append(
                    f"finite bump of {pool[i]!r} escapes the omega-multiple of {pool[j]!r}"
                )
                return _arith_report(report, violations, n, max_l)

    # support bounds, exhaustively at the term level on the subfragment
    for i in small:
        s = pool[i]
        ss = G.gamma_support(s)
        for j in small:
            t = pool[j]
            both = ss | G.gamma_support(t)
            if not (
                G.gamma_support(G.veblen_phi(X, s, t)) <= both
                and G.gamma_support(G.gamma_add(X, s, t)) <= both
                and G.gamma_support(G.omega_times(X, t)) <= both
            ):
                violations.append(f"support bound fails at ({s!r},{t!r})")
                return _arith_report(report, violations, n, max_l)
    return _arith_report(report, violations, n, max_l)


def _arith_report(report, violations, n, max_l):
    if report:
        report(f"arithmetic suite: pool {n} (measure <= {max_l}, width 2)")
        for v in violations:
            report(f"  VIOLATION: {v}")
        if not violations:
            report("  arithmetic clean")
    return not violations
