"""Command-line front end.

Subcommands: compare, member, enumerate, laws, range-check,
crosscheck-omega, bridge-bh, embed, export.  Exit codes: 0 success,
1 law violation, 2 usage error, 3 budget exhaustion.  Default
enumeration caps come from NUFIX_MAX_L, NUFIX_MAX_PAYLOAD and
NUFIX_NU_BUDGET when set.
"""

import argparse
import os
import sys

from .orders import EQ, finite_order
from .dilators import check_predilator_laws, element_compare
from .psi import BudgetExhausted, Caps, PsiSystem, check_range_condition, psi_l_measure
from .morphisms import (
    bh_theta,
    bh_to_one_collapse,
    check_bh_collapse,
    check_commuting_square,
    initial_embedding,
    omega_one_collapse,
)
from . import textforms as tf

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def env_caps():
    return Caps(
        max_l=int(os.environ.get("NUFIX_MAX_L", "9")),
        max_payload=int(os.environ.get("NUFIX_MAX_PAYLOAD", "6")),
        nu_budget=int(os.environ.get("NUFIX_NU_BUDGET", "6")),
    )


def caps_from(args):
    base = env_caps()
    return Caps(
        max_l=args.max_l if args.max_l is not None else base.max_l,
        max_payload=args.max_payload if args.max_payload is not None else base.max_payload,
        nu_budget=args.nu_budget if args.nu_budget is not None else base.nu_budget,
    )


def add_caps_flags(p):
    p.add_argument("--max-l", type=int, default=None, help="node measure cap")
    p.add_argument("--max-payload", type=int, default=None, help="trace payload size cap")
    p.add_argument("--nu-budget", type=int, default=None, help="index enumeration budget")


def add_system_flag(p):
    p.add_argument("--system", required=True, help='e.g. "nu=w+1,dil=omega"')


def get_system(args):
    return tf.parse_system_spec(args.system, caps_from(args))


def cmd_compare(args):
    if args.grammar == "psi":
        sys_ = get_system(args)
        a = tf.parse_term("psi", args.left, sys_)
        b = tf.parse_term("psi", args.right, sys_)
        c = sys_.compare(a, b)
    elif args.grammar == "gamma":
        X = finite_order(args.x_size)
        a = tf.parse_term("gamma", args.left, X)
        b = tf.parse_term("gamma", args.right, X)
        from .gamma import gamma_compare

        c = gamma_compare(X, a, b)
    else:
        from .orders import omega_order, word_compare

        a = tf.parse_term("word", args.left)
        b = tf.parse_term("word", args.right)
        c = word_compare(omega_order(), a, b)
    print({-1: "LT", 0: "EQ", 1: "GT"}[c])
    return EXIT_OK


def cmd_member(args):
    sys_ = get_system(args)
    t = tf.parse_term("psi", args.term, sys_)
    print("true" if sys_.member(t) else "false")
    return EXIT_OK


def fragment_records(sys_, count):
    """Records for the first members of the capped closure, in an order
    where every child precedes its parent."""
    closure = sys_.closure()
    records = []
    seen_members = 0
    for term, ok in closure:
        records.append((term, ok))
        if ok:
            seen_members += 1
            if seen_members == count:
                break
    if seen_members < count:
        raise BudgetExhausted(f"only {seen_members} members within caps, wanted {count}")
    index = {}
    lines = []
    for i, (term, ok) in enumerate(records):
        index[term] = i
        kids = ",".join(str(index[r]) for r in term.children)
        lines.append(
            f"{i}\t{tf.psi_term_str(sys_, term)}\t{tf.order_elem_str(sys_.nu, term.alpha)}"
            f"\t{kids}\t{'true' if ok else 'false'}"
        )
    return lines


def cmd_enumerate(args):
    sys_ = get_system(args)
    for t in sys_.enumerate(args.count):
        print(tf.psi_term_str(sys_, t))
    return EXIT_OK


def cmd_export(args):
    sys_ = get_system(args)
    lines = fragment_records(sys_, args.count)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")
    print(f"wrote {len(lines)} records to {args.out}")
    return EXIT_OK


def cmd_laws(args):
    D = tf.parse_dilator_spec(args.dilator)
    rep = check_predilator_laws(D, max_order=args.max_order, budget=args.budget, lint=not args.no_lint)
    for line in rep.lines():
        print(line)
    if args.dilator.startswith("gamma") and args.gamma_battery:
        from .gamma_props import run_battery

        ok = run_battery(seed=args.seed, random_count=args.random_count, report=print)
        if not ok:
            return EXIT_VIOLATION
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_range_check(args):
    sys_ = get_system(args)
    handle = sys_.handle()
    members = sys_.enumerate(args.count)
    grid = []
    alphas = list(sys_.nu.enumerate(min(4, caps_from(args).nu_budget)))
    for t in members:
        _, tau = sys_.pi(t)
        for alpha in alphas:
            grid.append((alpha, tau))
    rep = check_range_condition(handle, grid)
    for line in rep.lines():
        print(line)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_crosscheck_omega(args):
    from .dilators import AffineDilator

    Y = finite_order(args.y_size)
    word_handle = omega_one_collapse(Y)
    sys_ = PsiSystem(
        word_handle.nu,
        AffineDilator(Y),
        Caps(max_l=args.max_l or 2 ** 11 - 1, max_payload=3, nu_budget=1),
    )
    psi_handle = sys_.handle()
    terms = sys_.enumerate(args.count)
    ident = lambda a: a
    fwd = initial_embedding(ident, psi_handle, word_handle, terms)
    words = [w for w in word_handle.order.enumerate(args.word_budget)][: args.count]
    back = initial_embedding(ident, word_handle, psi_handle, words)
    bad = check_commuting_square(ident, psi_handle, word_handle, fwd)
    bad += check_commuting_square(ident, word_handle, psi_handle, back)
    for t in terms:
        w = fwd[t]
        if w in back and back[w] != t:
            bad.append(f"round trip fails at {t!r}")
    hits = {fwd[t] for t in terms}
    missing = [w for w in words if len(w) <= 3 and w not in hits]
    if missing:
        bad.append(f"words of length <= 3 not hit: {missing}")
    print(f"crosscheck on {len(terms)} terms / {len(words)} words")
    for b in bad:
        print(f"  VIOLATION: {b}")
    if not bad:
        print("  isomorphism confirmed on the fragment")
    return EXIT_OK if not bad else EXIT_VIOLATION


def bridge_bh_run(y_size, count, max_l=5):
    """Build the collapse of the word-composed affine dilator, fold it
    into a Bachmann-Howard map, and round-trip back to a collapse.

    Returns (clause report, suborder report, range report, sample size).
    """
    from .dilators import AffineDilator, OmegaDilator, compose
    from .orders import nu_order

    Y = finite_order(y_size)
    D = AffineDilator(Y)
    E = compose(OmegaDilator(), D)
    sys_ = PsiSystem(nu_order(0, 1), E, Caps(max_l=max_l, max_payload=4, nu_budget=1))
    handle = sys_.handle()
    ys = list(Y.enumerate(64))
    need = (count - 1 + len(ys) - 1) // len(ys)
    members = sys_.enumerate(need)
    pool = [D.zero()] + [D.point(y, t) for t in members for y in ys]
    pool = pool[:count]
    bh = bh_theta(handle)
    for sigma in pool:
        bh.value(sigma)
    rep = check_bh_collapse(bh, pool)
    sub, subrep = bh_to_one_collapse(bh)
    carrier = set(subrep.carrier)
    grid = [((0, 0), sigma) for sigma in pool if all(s in carrier for s in sigma.support)]
    rrep = check_range_condition(sub, grid)
    return rep, subrep, rrep, len(pool)


def cmd_bridge_bh(args):
    rep, subrep, rrep, n = bridge_bh_run(args.y_size, args.count, args.max_l or 5)
    print(f"theta computed on {n} elements")
    for line in rep.lines():
        print(line)
    for line in subrep.lines():
        print(line)
    for line in rrep.lines():
        print(line)
    return EXIT_OK if rep.ok and rrep.ok else EXIT_VIOLATION


def cmd_embed(args):
    src = tf.parse_system_spec(args.src, caps_from(args))
    dst = tf.parse_system_spec(args.dst, caps_from(args))
    ident = lambda a: a
    terms = src.enumerate(args.count)
    fmap = initial_embedding(ident, src.handle(), dst.handle(), terms)
    bad = check_commuting_square(ident, src.handle(), dst.handle(), fmap)
    for i, s in enumerate(terms):
        for t in terms[i + 1 :]:
            if dst.compare(fmap[s], fmap[t]) >= 0:
                bad.append(f"order not preserved at {s!r} vs {t!r}")
    print(f"embedding computed on {len(fmap)} points")
    for b in bad:
        print(f"  VIOLATION: {b}")
    if not bad:
        print("  strictly increasing; square commutes at every point")
    return EXIT_OK if not bad else EXIT_VIOLATION


def build_parser():
    p = argparse.ArgumentParser(prog="nufix", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compare", help="compare two terms")
    add_system_flag(c)
    c.add_argument("--grammar", choices=["psi", "gamma", "word"], default="psi")
    c.add_argument("--x-size", type=int, default=2)
    add_caps_flags(c)
    c.add_argument("left")
    c.add_argument("right")
    c.set_defaults(fn=cmd_compare)

    c = sub.add_parser("member", help="decide membership in the collapsed suborder")
    add_system_flag(c)
    add_caps_flags(c)
    c.add_argument("term")
    c.set_defaults(fn=cmd_member)

    c = sub.add_parser("enumerate", help="list members in increasing order")
    add_system_flag(c)
    add_caps_flags(c)
    c.add_argument("--count", type=int, default=20)
    c.set_defaults(fn=cmd_enumerate)

    c = sub.add_parser("export", help="write a fragment file")
    add_system_flag(c)
    add_caps_flags(c)
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_export)

    c = sub.add_parser("laws", help="run the predilator law suite")
    c.add_argument("--dilator", required=True)
    c.add_argument("--max-order", type=int, default=4)
    c.add_argument("--budget", type=int, default=6)
    c.add_argument("--no-lint", action="store_true")
    c.add_argument("--gamma-battery", action="store_true", help="also run the Veblen property battery")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--random-count", type=int, default=1000)
    c.set_defaults(fn=cmd_laws)

    c = sub.add_parser("range-check", help="check the defining range equation on a grid")
    add_system_flag(c)
    add_caps_flags(c)
    c.add_argument("--count", type=int, default=50)
    c.set_defaults(fn=cmd_range_check)

    c = sub.add_parser("crosscheck-omega", help="collapse of words vs the generic construction")
    c.add_argument("--y-size", type=int, default=3)
    c.add_argument("--count", type=int, default=200)
    c.add_argument("--word-budget", type=int, default=9)
    c.add_argument("--max-l", type=int, default=None)
    c.set_defaults(fn=cmd_crosscheck_omega)

    c = sub.add_parser("bridge-bh", help="Bachmann-Howard map from a word-composed collapse")
    c.add_argument("--y-size", type=int, default=2)
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--max-l", type=int, default=None)
    c.set_defaults(fn=cmd_bridge_bh)

    c = sub.add_parser("embed", help="unique embedding between two systems")
    c.add_argument("--src", required=True)
    c.add_argument("--dst", required=True)
    c.add_argument("--count", type=int, default=50)
    add_caps_flags(c)
    c.set_defaults(fn=cmd_embed)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (tf.ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
