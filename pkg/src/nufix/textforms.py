"""Textual forms: element literals, term grammars, printing.

One grammar family covers everything the command line touches.  Veblen
terms read `0`, `G(x0)`, `pv(s,t)`, `<t1,...,tn>`, with evaluated
sugars `phi(s,t)`, `add(s,t)`, `w*(t)` and `n:k`.  Collapsing terms
read `p[<idx>]({t1,...,tk}; <payload>)` where the payload follows the
owning dilator: words `w[1,0]` over positions, affine `o` or `a(y)`,
Veblen payloads over variables `x0...`, and word-composed payloads
`w[p@[i,...];...]`.  Printing is canonical and parsing inverts it.
"""

from .orders import finite_order, nu_order
from .dilators import AffineDilator, Composite, Elem, OmegaDilator, Trace, builtin_dilator
from . import gamma as G


class ParseError(ValueError):
    def __init__(self, text, pos, expected):
        self.pos = pos
        self.expected = expected
        super().__init__(f"at position {pos}: expected {expected} in {text!r}")


class Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, lit):
        self.skip_ws()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit):
        if not self.take(lit):
            raise ParseError(self.text, self.pos, repr(lit))

    def number(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(self.text, self.pos, "a number")
        return int(self.text[start : self.pos])

    def done(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError(self.text, self.pos, "end of input")


# ---------------------------------------------------------------------------
# element literals of built-in orders


def order_elem_str(order, e):
    kind = order.kind
    if kind and kind[0] in ("finite", "omega"):
        return str(e)
    if kind and kind[0] == "nu":
        k, i = e
        if k == 0:
            return str(i)
        base = "w" if k == 1 else f"w{k}"
        return base + (f"+{i}" if i else "")
    return repr(e)


def parse_order_elem(order, sc):
    kind = order.kind
    if kind and kind[0] in ("finite", "omega"):
        n = sc.number()
        if kind[0] == "finite" and n >= kind[1]:
            raise ParseError(sc.text, sc.pos, f"an element below {kind[1]}")
        return n
    if kind and kind[0] == "nu":
        limits, tail = kind[1], kind[2]
        if sc.take("w"):
            k = 1
            if sc.peek().isdigit():
                k = sc.number()
            i = sc.number() if sc.take("+") else 0
            e = (k, i)
        else:
            e = (0, sc.number())
        order.compare(e, e)
        return e
    raise ParseError(sc.text, sc.pos, f"a literal for {order.label}")


# ---------------------------------------------------------------------------
# Veblen terms


def gamma_term_str(t, var_names=False):
    ty = type(t)
    if ty is G.Zero:
        return "0"
    n = G.nat_value(t)
    if n is not None and n >= 2:
        return f"n:{n}"
    if ty is G.Sc:
        return f"G(x{t.x})" if var_names else f"G({t.x})"
    if ty is G.Pv:
        return f"pv({gamma_term_str(t.s, var_names)},{gamma_term_str(t.t, var_names)})"
    return "<" + ",".join(gamma_term_str(e, var_names) for e in t.entries) + ">"


def parse_gamma(sc, X, var_names=False, check=True):
    t = _gamma_node(sc, X, var_names)
    if check and not G.is_gamma_member(X, t):
        raise ParseError(sc.text, sc.pos, f"a valid term ({t!r} breaks a side condition)")
    return t


def _gamma_node(sc, X, var_names):
    if sc.take("n:"):
        return G.nat(sc.number())
    if sc.take("0"):
        return G.ZERO
    if sc.take("G("):
        if var_names:
            sc.expect("x")
        x = parse_order_elem(X, sc) if not var_names else sc.number()
        sc.expect(")")
        return G.Sc(x)
    if sc.take("pv("):
        s = _gamma_node(sc, X, var_names)
        sc.expect(",")
        t = _gamma_node(sc, X, var_names)
        sc.expect(")")
        return G.Pv(s, t)
    if sc.take("phi("):
        s = _gamma_node(sc, X, var_names)
        sc.expect(",")
        t = _gamma_node(sc, X, var_names)
        sc.expect(")")
        return G.veblen_phi(X, s, t)
    if sc.take("add("):
        s = _gamma_node(sc, X, var_names)
        sc.expect(",")
        t = _gamma_node(sc, X, var_names)
        sc.expect(")")
        return G.gamma_add(X, s, t)
    if sc.take("w*("):
        t = _gamma_node(sc, X, var_names)
        sc.expect(")")
        return G.omega_times(X, t)
    if sc.take("<"):
        entries = [_gamma_node(sc, X, var_names)]
        while sc.take(","):
            entries.append(_gamma_node(sc, X, var_names))
        sc.expect(">")
        if len(entries) < 2:
            raise ParseError(sc.text, sc.pos, "at least two sum entries")
        return G.Seq(tuple(entries))
    raise ParseError(sc.text, sc.pos, "a term")


# ---------------------------------------------------------------------------
# dilator payloads


def payload_str(D, payload):
    return D.payload_str(payload)


def parse_payload(sc, D, arity):
    """Parse a trace payload in the owning dilator's syntax."""
    if isinstance(D, Composite):
        return _parse_composite_payload(sc, D, arity)
    if isinstance(D, OmegaDilator):
        sc.expect("w[")
        word = []
        if not sc.take("]"):
            word.append(sc.number())
            while sc.take(","):
                word.append(sc.number())
            sc.expect("]")
        return tuple(word)
    if isinstance(D, AffineDilator):
        if sc.take("o"):
            return None
        sc.expect("a(")
        y = parse_order_elem(D.Y, sc)
        sc.expect(")")
        return y
    from .gamma import GammaDilator

    if isinstance(D, GammaDilator):
        return parse_gamma(sc, finite_order(arity), var_names=True)
    raise ParseError(sc.text, sc.pos, f"a payload for {D.name}")


def _parse_composite_payload(sc, D, arity):
    sc.expect("w[")
    entries = []
    if not sc.take("]"):
        entries.append(_parse_composite_entry(sc, D, arity))
        while sc.take(";"):
            entries.append(_parse_composite_entry(sc, D, arity))
        sc.expect("]")
    inner_order = finite_order(arity)
    try:
        elem = D.wrap_word(inner_order, entries)
    except ValueError as e:
        raise ParseError(sc.text, sc.pos, f"a well-formed word payload ({e})")
    if set(elem.support) != set(range(arity)):
        raise ParseError(sc.text, sc.pos, f"full support over {arity} positions")
    return elem.payload


def _parse_composite_entry(sc, D, arity):
    inner_payload = parse_payload(sc, D.D, arity)
    positions = []
    if sc.take("@["):
        positions.append(sc.number())
        while sc.take(","):
            positions.append(sc.number())
        sc.expect("]")
    inner_arity = len(positions)
    if D.D.payload_support(inner_arity, inner_payload) != frozenset(range(inner_arity)):
        raise ParseError(sc.text, sc.pos, "an inner payload of full support")
    return Elem(Trace(inner_arity, inner_payload), tuple(positions))


# ---------------------------------------------------------------------------
# collapsing terms


def psi_term_str(sys, t):
    kids = ",".join(psi_term_str(sys, r) for r in t.children)
    return f"p[{order_elem_str(sys.nu, t.alpha)}]({{{kids}}}; {sys.D.payload_str(t.trace.payload)})"


def parse_psi(sc, sys):
    sc.expect("p[")
    alpha = parse_order_elem(sys.nu, sc)
    sc.expect("]")
    sc.expect("(")
    sc.expect("{")
    kids = []
    if not sc.take("}"):
        kids.append(parse_psi(sc, sys))
        while sc.take(","):
            kids.append(parse_psi(sc, sys))
        sc.expect("}")
    sc.expect(";")
    payload = parse_payload(sc, sys.D, len(kids))
    sc.expect(")")
    try:
        return sys.term(alpha, kids, Trace(len(kids), payload))
    except ValueError as e:
        raise ParseError(sc.text, sc.pos, f"a well-formed term ({e})")


# ---------------------------------------------------------------------------
# words


def word_str(w):
    return "w[" + ",".join(str(i) for i in w) + "]"


def parse_word(sc):
    sc.expect("w[")
    word = []
    if not sc.take("]"):
        word.append(sc.number())
        while sc.take(","):
            word.append(sc.number())
        sc.expect("]")
    return tuple(word)


# ---------------------------------------------------------------------------
# entry points


def parse_term(grammar, text, context=None):
    """Parse a term in one of the shipped grammars.

    grammar "gamma" needs a base order as context, "psi" a system,
    "word" nothing.  The returned value is validated.
    """
    sc = Scanner(text)
    if grammar == "gamma":
        t = parse_gamma(sc, context, var_names=True)
    elif grammar == "psi":
        t = parse_psi(sc, context)
    elif grammar == "word":
        t = parse_word(sc)
    else:
        raise ValueError(f"unknown grammar {grammar!r}")
    sc.done()
    return t


def print_term(grammar, term, context=None):
    if grammar == "gamma":
        return gamma_term_str(term, var_names=True)
    if grammar == "psi":
        return psi_term_str(context, term)
    if grammar == "word":
        return word_str(term)
    raise ValueError(f"unknown grammar {grammar!r}")


# ---------------------------------------------------------------------------
# system specifications


def parse_dilator_spec(text):
    """Parse a dilator spec: omega, affine:<n>, gamma[:<n>], compose(a,b)."""
    text = text.strip()
    if text.startswith("compose(") and text.endswith(")"):
        inner = text[len("compose(") : -1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                left, right = inner[:i], inner[i + 1 :]
                return Composite(parse_dilator_spec(left), parse_dilator_spec(right))
        raise ValueError(f"bad compose spec {text!r}")
    name, _, arg = text.partition(":")
    if name == "omega":
        return builtin_dilator("omega")
    if name == "affine":
        if not arg:
            raise ValueError("affine needs a base size, e.g. affine:2")
        return builtin_dilator("affine", finite_order(int(arg)))
    if name == "gamma":
        return builtin_dilator("gamma")
    raise ValueError(f"unknown dilator spec {text!r}")


def parse_nu_spec(text):
    """Parse an index-order spec: a decimal, w, w+k, w2, w2+k."""
    text = text.strip()
    if text.isdigit():
        return nu_order(0, int(text))
    if text.startswith("w"):
        rest = text[1:]
        limits = 1
        if rest and rest[0].isdigit():
            i = 0
            while i < len(rest) and rest[i].isdigit():
                i += 1
            limits = int(rest[:i])
            rest = rest[i:]
        tail = 0
        if rest.startswith("+"):
            tail = int(rest[1:])
        elif rest:
            raise ValueError(f"bad index order {text!r}")
        return nu_order(limits, tail)
    raise ValueError(f"bad index order {text!r}")


def parse_system_spec(text, caps=None):
    """Parse "nu=...,dil=..." into a collapsing system."""
    from .psi import Caps, PsiSystem

    nu = None
    dil = None
    depth = 0
    parts = []
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    for part in parts:
        key, _, value = part.partition("=")
        key = key.strip()
        if key == "nu":
            nu = parse_nu_spec(value)
        elif key == "dil":
            dil = parse_dilator_spec(value)
        else:
            raise ValueError(f"unknown system key {key!r}")
    if nu is None or dil is None:
        raise ValueError("system spec needs nu= and dil=")
    return PsiSystem(nu, dil, caps or Caps())
