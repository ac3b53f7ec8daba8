"""String diagrams between 1-morphism words, encoded as slice words.

A word is a tuple of letters (dir, color) with dir = +1 for an upward strand
(an E letter) and -1 for a downward one (an F letter), written left to right;
the region to the right of all strands carries the ambient weight.

Slices, one elementary event per slice, bottom to top:

    ('dot', p)               a dot on the strand at position p
    ('x', p)                 a crossing of strands p, p+1 (any orientations)
    ('cup', p, c, ori)       a cup inserted at position p creating the pair
                             (E_c, F_c) for ori='EF' or (F_c, E_c) for 'FE'
    ('cap', p)               a cap closing strands p, p+1 (must be E/F or F/E
                             of one color)
    ('bub', p, c, cw, raw)   a closed c-colored bubble floating between
                             strands p-1 and p, clockwise if cw, with `raw`
                             dots (raw may be negative: a formal fake bubble)

Degrees follow the generator table: dots 2, same-orientation crossings
-(alpha_i, alpha_j), mixed crossings 0, cups and caps 1 -+ bar(mu)_i at their
region mu, bubbles twice their offset.
"""

from __future__ import annotations

from fractions import Fraction

from . import roots
from .roots import Weight

UP, DOWN = 1, -1


class DiagramError(ValueError):
    pass


def letter_str(letter):
    d, c = letter
    return ("E%d" if d == UP else "F%d") % c


def apply_slice(word, sl, n):
    """The word above a slice, validating local consistency."""
    kind = sl[0]
    if kind == 'dot':
        p = sl[1]
        if not 0 <= p < len(word):
            raise DiagramError(f"dot position {p} out of range")
        return word
    if kind == 'x':
        p = sl[1]
        if not 0 <= p < len(word) - 1:
            raise DiagramError(f"crossing position {p} out of range")
        return word[:p] + (word[p + 1], word[p]) + word[p + 2:]
    if kind == 'cup':
        _, p, c, ori = sl
        if not 0 <= p <= len(word):
            raise DiagramError(f"cup position {p} out of range")
        pair = ((UP, c), (DOWN, c)) if ori == 'EF' else ((DOWN, c), (UP, c))
        return word[:p] + pair + word[p:]
    if kind == 'cap':
        p = sl[1]
        if not 0 <= p < len(word) - 1:
            raise DiagramError(f"cap position {p} out of range")
        (d1, c1), (d2, c2) = word[p], word[p + 1]
        if c1 != c2 or d1 == d2:
            raise DiagramError(f"cap on incompatible letters {word[p]},{word[p+1]}")
        return word[:p] + word[p + 2:]
    if kind == 'bub':
        p = sl[1]
        if not 0 <= p <= len(word):
            raise DiagramError(f"bubble position {p} out of range")
        return word
    raise DiagramError(f"unknown slice {sl!r}")


def word_seq(bot, slices, n):
    """Words at every height, bottom to top."""
    out = [tuple(bot)]
    w = out[0]
    for sl in slices:
        w = apply_slice(w, sl, n)
        out.append(w)
    return out


def region(word, lam: Weight, p: int) -> Weight:
    """Weight of the region between strands p-1 and p (p = len(word) is the
    rightmost region, equal to lam)."""
    n = len(lam)
    w = list(lam)
    for j in range(p, len(word)):
        d, c = word[j]
        a = roots.simple_root(c, n)
        for k in range(n):
            w[k] += d * a[k]
    return tuple(w)


def bubble_offset(word, lam, sl) -> int:
    """Star-notation offset of a 'bub' slice from its raw dot count."""
    _, p, c, cw, raw = sl
    mu = region(word, lam, p)
    b = roots.bar_i(mu, c)
    return raw - b + 1 if cw else raw + b + 1


class Diagram:
    """Immutable slice-word diagram; hashable; validates on construction."""

    __slots__ = ("bot", "lam", "slices", "top", "_hash")

    def __init__(self, bot, lam: Weight, slices=()):
        self.bot = tuple(bot)
        self.lam = tuple(lam)
        self.slices = tuple(tuple(s) for s in slices)
        w = self.bot
        n = len(self.lam)
        for sl in self.slices:
            w = apply_slice(w, sl, n)
        self.top = w
        self._hash = hash((self.bot, self.lam, self.slices))

    def __eq__(self, other):
        return (self.bot, self.lam, self.slices) == (other.bot, other.lam, other.slices)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Diagram({'.'.join(map(letter_str, self.bot)) or '1'}@{list(self.lam)}; {list(self.slices)})"

    def words(self):
        return word_seq(self.bot, self.slices, len(self.lam))

    def degree(self) -> int:
        return degree(self.bot, self.lam, self.slices)


def degree(bot, lam, slices) -> int:
    n = len(lam)
    w = tuple(bot)
    total = 0
    for sl in slices:
        kind = sl[0]
        if kind == 'dot':
            total += 2
        elif kind == 'x':
            p = sl[1]
            (d1, c1), (d2, c2) = w[p], w[p + 1]
            if d1 == d2:
                total -= roots.pairing(c1, c2, n)
        elif kind == 'cup':
            _, p, c, ori = sl
            mu = region(w, lam, p)
            total += 1 - roots.bar_i(mu, c) if ori == 'EF' else 1 + roots.bar_i(mu, c)
        elif kind == 'cap':
            p = sl[1]
            d1, c = w[p]
            mu = region(w, lam, p + 2)
            # EF-cap when the left strand is upward
            total += 1 - roots.bar_i(mu, c) if d1 == UP else 1 + roots.bar_i(mu, c)
        elif kind == 'bub':
            total += 2 * bubble_offset(w, lam, sl)
        w = apply_slice(w, sl, n)
    return total


# ---------------------------------------------------------------------------
# Linear combinations


class Mor2:
    """Rational linear combination of diagrams with a common boundary."""

    __slots__ = ("bot", "top", "lam", "terms")

    def __init__(self, bot, top, lam, terms=None):
        self.bot = tuple(bot)
        self.top = tuple(top)
        self.lam = tuple(lam)
        self.terms = {}
        if terms:
            for d, c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                if d.bot != self.bot or d.top != self.top or d.lam != self.lam:
                    raise DiagramError("diagram boundary mismatch in Mor2")
                self.terms[d] = c

    @staticmethod
    def from_diagram(d: Diagram, coeff=1) -> "Mor2":
        return Mor2(d.bot, d.top, d.lam, {d: Fraction(coeff)})

    @staticmethod
    def identity(word, lam) -> "Mor2":
        d = Diagram(word, lam, ())
        return Mor2.from_diagram(d)

    @staticmethod
    def zero(bot, top, lam) -> "Mor2":
        return Mor2(bot, top, lam, {})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if (self.bot, self.top, self.lam) != (other.bot, other.top, other.lam):
            raise DiagramError("boundary mismatch in addition")
        t = dict(self.terms)
        for d, c in other.terms.items():
            s = t.get(d, Fraction(0)) + c
            if s:
                t[d] = s
            else:
                t.pop(d, None)
        return Mor2(self.bot, self.top, self.lam, t)

    def __neg__(self):
        return Mor2(self.bot, self.top, self.lam,
                    {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "Mor2":
        k = Fraction(k)
        return Mor2(self.bot, self.top, self.lam,
                    {d: c * k for d, c in self.terms.items()} if k else {})

    def degree(self):
        degs = {d.degree() for d in self.terms}
        if len(degs) > 1:
            raise DiagramError(f"inhomogeneous morphism: degrees {degs}")
        return degs.pop() if degs else None


def compose_v(f: Mor2, g: Mor2) -> Mor2:
    """f after g (g at the bottom)."""
    if g.top != f.bot or g.lam != f.lam:
        raise DiagramError("vertical composition boundary mismatch")
    terms = {}
    for dg, cg in g.terms.items():
        for df, cf in f.terms.items():
            d = Diagram(dg.bot, dg.lam, dg.slices + df.slices)
            c = terms.get(d, Fraction(0)) + cg * cf
            if c:
                terms[d] = c
            else:
                terms.pop(d, None)
    return Mor2(g.bot, f.top, g.lam, terms)


def shift_slices(slices, offset):
    return tuple((s[0], s[1] + offset) + tuple(s[2:]) for s in slices)


def compose_h(f: Mor2, g: Mor2) -> Mor2:
    """Horizontal juxtaposition with f drawn to the left of g.

    The rightmost region of f must match the leftmost region of g's words."""
    n = len(g.lam)
    left_of_g = region(g.bot, g.lam, 0)
    if tuple(f.lam) != left_of_g:
        raise DiagramError("horizontal composition region mismatch")
    terms = {}
    width = len(f.bot)
    for dg, cg in g.terms.items():
        for df, cf in f.terms.items():
            slices = shift_slices(dg.slices, width) + df.slices
            d = Diagram(df.bot + dg.bot, dg.lam, slices)
            c = terms.get(d, Fraction(0)) + cg * cf
            if c:
                terms[d] = c
    return Mor2(f.bot + g.bot, f.top + g.top, g.lam, terms)


# ---------------------------------------------------------------------------
# Macros for the non-minimal generators


def macro_cross(word, p) -> tuple:
    """Slices implementing the crossing of strands p, p+1 using only upward
    crossings, cups and caps; the rotation composites fixed once."""
    (d1, c1), (d2, c2) = word[p], word[p + 1]
    if d1 == UP and d2 == UP:
        return (('x', p),)
    if d1 == UP and d2 == DOWN:
        # E_i F_j -> F_j E_i
        return (('cup', p, c2, 'FE'), ('x', p + 1), ('cap', p + 2))
    if d1 == DOWN and d2 == UP:
        # F_i E_j -> E_j F_i
        return (('cup', p + 2, c1, 'EF'), ('x', p + 1), ('cap', p))
    # F_i F_j -> F_j F_i
    return (('cup', p + 2, c1, 'EF'), ('cup', p + 3, c2, 'EF'),
            ('x', p + 2), ('cap', p + 1), ('cap', p))


def macro_dot(word, p) -> tuple:
    """A dot on the strand at p; on downward strands via rotation."""
    d, c = word[p]
    if d == UP:
        return (('dot', p),)
    return (('cup', p + 1, c, 'EF'), ('dot', p + 1), ('cap', p))


def cross_mor(word, lam, p, minimal=True) -> Mor2:
    slices = macro_cross(word, p) if minimal else (('x', p),)
    return Mor2.from_diagram(Diagram(word, lam, slices))


# ---------------------------------------------------------------------------
# Textual serialization


def dumps(d: Diagram) -> str:
    lines = ["lambda " + ",".join(map(str, d.lam)),
             "bottom " + (" ".join(letter_str(l) for l in d.bot) or "-")]
    for sl in d.slices:
        kind = sl[0]
        if kind == 'dot':
            lines.append(f"slice {sl[1]} dot")
        elif kind == 'x':
            lines.append(f"slice {sl[1]} x")
        elif kind == 'cup':
            lines.append(f"slice {sl[1]} cup {sl[2]} {sl[3]}")
        elif kind == 'cap':
            lines.append(f"slice {sl[1]} cap")
        elif kind == 'bub':
            lines.append(f"slice {sl[1]} bub {sl[2]} {'cw' if sl[3] else 'ccw'} {sl[4]}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Diagram:
    lam = None
    bot = None
    slices = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "lambda":
            lam = tuple(int(x) for x in parts[1].split(","))
        elif parts[0] == "bottom":
            bot = ()
            if parts[1:] != ["-"]:
                for tok in parts[1:]:
                    d = UP if tok[0] == "E" else DOWN
                    bot += ((d, int(tok[1:])),)
        elif parts[0] == "slice":
            p = int(parts[1])
            kind = parts[2]
            if kind == 'dot':
                slices.append(('dot', p))
            elif kind == 'x':
                slices.append(('x', p))
            elif kind == 'cup':
                slices.append(('cup', p, int(parts[3]), parts[4]))
            elif kind == 'cap':
                slices.append(('cap', p))
            elif kind == 'bub':
                slices.append(('bub', p, int(parts[3]), parts[4] == 'cw', int(parts[5])))
            else:
                raise DiagramError(f"bad slice line: {line}")
        else:
            raise DiagramError(f"bad line: {line}")
    if lam is None or bot is None:
        raise DiagramError("missing header lines")
    return Diagram(bot, lam, slices)
