"""Instantiated defining and derived relations of the diagrammatic calculus.

Each builder returns a list of (name, lhs, rhs) triples of Mor2 at the given
weight; the verification suites check lhs == rhs under the engine.  Sideways
and downward crossings appear as primitive crossing slices (the engine
identifies them with their rotation composites, which is itself part of the
KM2/KM3 checks)."""

from __future__ import annotations

from fractions import Fraction

from . import roots
from .diagram import UP, DOWN, Diagram, Mor2, region
from .rewrite import Engine


def _mor(bot, lam, slices, coeff=1):
    return Mor2.from_diagram(Diagram(bot, lam, slices), coeff)


def _zero_like(m: Mor2) -> Mor2:
    return Mor2.zero(m.bot, m.top, m.lam)


def km1(eng: Engine, i: int, lam):
    out = []
    for d, tag in ((UP, "up"), (DOWN, "down")):
        bot = ((d, i),)
        ident = _mor(bot, lam, ())
        if d == UP:
            z1 = _mor(bot, lam, (('cup', 1, i, 'FE'), ('cap', 0)))
            z2 = _mor(bot, lam, (('cup', 0, i, 'EF'), ('cap', 1)))
        else:
            z1 = _mor(bot, lam, (('cup', 1, i, 'EF'), ('cap', 0)))
            z2 = _mor(bot, lam, (('cup', 0, i, 'FE'), ('cap', 1)))
        out.append((f"KM1({tag},i={i})a", z1, ident))
        out.append((f"KM1({tag},i={i})b", z2, ident))
    return out


def km2(eng: Engine, i: int, lam):
    bot = ((DOWN, i),)
    prim = _mor(bot, lam, (('dot', 0),))
    right = _mor(bot, lam, (('cup', 1, i, 'EF'), ('dot', 1), ('cap', 0)))
    left = _mor(bot, lam, (('cup', 0, i, 'FE'), ('dot', 1), ('cap', 1)))
    return [(f"KM2(i={i})r", right, prim), (f"KM2(i={i})l", left, prim)]


def km3(eng: Engine, i: int, j: int, lam):
    from .diagram import macro_cross
    out = []
    pats = [((UP, i), (DOWN, j), "EF"), ((DOWN, i), (UP, j), "FE"),
            ((DOWN, i), (DOWN, j), "dd")]
    for l1, l2, tag in pats:
        bot = (l1, l2)
        prim = _mor(bot, lam, (('x', 0),))
        mac = _mor(bot, lam, macro_cross(bot, 0))
        out.append((f"KM3({tag},i={i},j={j})", prim, mac))
    # the two double rotations of the downward crossing agree
    bot = ((DOWN, i), (DOWN, j))
    alt = _mor(bot, lam, (('cup', 0, j, 'FE'), ('cup', 1, i, 'FE'),
                          ('x', 2), ('cap', 3), ('cap', 2)))
    out.append((f"KM3(dd-left,i={i},j={j})", _mor(bot, lam, (('x', 0),)), alt))
    return out


def km4(eng: Engine, i: int, j: int, lam, down=False):
    from .diagram import macro_cross
    d = DOWN if down else UP
    bot = ((d, i), (d, j))
    if down:
        # build both crossings from their rotation composites so the check
        # does not consult the rotated quadratic rule itself
        m1 = macro_cross(bot, 0)
        top1 = ((d, j), (d, i))
        m2 = macro_cross(top1, 0)
        from .diagram import Diagram
        lhs = _mor(bot, lam, m1 + m2)
    else:
        lhs = _mor(bot, lam, (('x', 0), ('x', 0)))
    if i == j:
        rhs = _zero_like(lhs)
    elif eng.pairing(i, j) == 0:
        rhs = _mor(bot, lam, ())
    else:
        e = eng.eps(i, j)
        rhs = _mor(bot, lam, (('dot', 0),), e) + _mor(bot, lam, (('dot', 1),), -e)
    tag = "down," if down else ""
    return [(f"KM4({tag}i={i},j={j})", lhs, rhs)]


def km5(eng: Engine, i: int, j: int, lam, down=False):
    d = DOWN if down else UP
    bot = ((d, i), (d, j))
    t1 = _mor(bot, lam, (('dot', 0), ('x', 0)))
    t2 = _mor(bot, lam, (('x', 0), ('dot', 1)))
    t3 = _mor(bot, lam, (('x', 0), ('dot', 0)))
    t4 = _mor(bot, lam, (('dot', 1), ('x', 0)))
    if i == j:
        rhs = _mor(bot, lam, ())
    else:
        rhs = Mor2.zero(bot, t1.top, lam)
    if down:
        # the rotated nilHecke relation has the corrections on the other side
        t1, t2, t3, t4 = t2, t1, t4, t3
    tag = "down," if down else ""
    return [(f"KM5({tag}i={i},j={j})a", t1 - t2, rhs),
            (f"KM5({tag}i={i},j={j})b", t3 - t4, rhs)]


def km6(eng: Engine, i: int, j: int, k: int, lam, down=False):
    d = DOWN if down else UP
    bot = ((d, i), (d, j), (d, k))
    lhs = _mor(bot, lam, (('x', 0), ('x', 1), ('x', 0))) - \
        _mor(bot, lam, (('x', 1), ('x', 0), ('x', 1)))
    if i == k and eng.pairing(i, j) == -1:
        coeff = eng.eps(i, j)
        if down:
            coeff = -coeff
        rhs = _mor(bot, lam, (), coeff)
    else:
        rhs = _zero_like(lhs)
    tag = "down," if down else ""
    return [(f"KM6({tag}i={i},j={j},k={k})", lhs, rhs)]


def km7(eng: Engine, i: int, j: int, lam):
    out = []
    # R2b: endomorphism of F_i E_j
    bot = ((DOWN, i), (UP, j))
    lhs = _mor(bot, lam, (('x', 0), ('x', 0)))
    rhs = _mor(bot, lam, ())
    if i == j:
        b = roots.bar_i(lam, i)
        total = -b - 1
        for a in range(0, max(total + 1, 0)):
            for bb in range(0, total + 1 - a):
                c = total - a - bb
                sl = (('dot', 0),) * a + (('cap', 0),) + \
                     (('bub', 0, i, True, b - 1 + c),) + \
                     (('cup', 0, i, 'FE'),) + (('dot', 0),) * bb
                rhs = rhs + _mor(bot, lam, sl, -1)
    out.append((f"KM7(FE,i={i},j={j})", lhs, rhs))
    # R2c: endomorphism of E_i F_j
    bot = ((UP, i), (DOWN, j))
    lhs = _mor(bot, lam, (('x', 0), ('x', 0)))
    rhs = _mor(bot, lam, ())
    if i == j:
        b = roots.bar_i(lam, i)
        total = b - 1
        for a in range(0, max(total + 1, 0)):
            for bb in range(0, total + 1 - a):
                c = total - a - bb
                sl = (('dot', 0),) * a + (('cap', 0),) + \
                     (('bub', 0, i, False, -b - 1 + c),) + \
                     (('cup', 0, i, 'EF'),) + (('dot', 0),) * bb
                rhs = rhs + _mor(bot, lam, sl, -1)
    out.append((f"KM7(EF,i={i},j={j})", lhs, rhs))
    return out


def km8(eng: Engine, i: int, lam, mmin=-2):
    out = []
    b = roots.bar_i(lam, i)
    for m in range(mmin, 1):
        for cw in (True, False):
            raw = b - 1 + m if cw else -b - 1 + m
            lhs = _mor((), lam, (('bub', 0, i, cw, raw),))
            if m < 0:
                rhs = _zero_like(lhs)
            else:
                e = lam[i % eng.n]
                rhs = _mor((), lam, (), (-1) ** (e if cw else e - 1))
            out.append((f"KM8({'cw' if cw else 'ccw'},i={i},m={m})", lhs, rhs))
    return out


def km9(eng: Engine, i: int, lam, degree=4):
    out = []
    b = roots.bar_i(lam, i)
    for m in range(0, degree + 1):
        lhs = Mor2.zero((), (), lam)
        for r in range(0, m + 1):
            sl = (('bub', 0, i, False, -b - 1 + r),
                  ('bub', 0, i, True, b - 1 + (m - r)))
            lhs = lhs + _mor((), lam, sl)
        rhs = _mor((), lam, (), -1) if m == 0 else _zero_like(lhs)
        out.append((f"KM9(i={i},m={m})", lhs, rhs))
    return out


def curl(eng: Engine, i: int, lam, m: int):
    out = []
    b = roots.bar_i(lam, i)
    bot = ((UP, i),)
    # right curl with m dots on the loop
    lhs = _mor(bot, lam, (('cup', 1, i, 'EF'),) + (('dot', 1),) * m +
               (('x', 0), ('cap', 1)))
    rhs = Mor2.zero(bot, bot, lam)
    for a in range(0, max(m - b + 1, 0)):
        bb = m - b - a
        sl = (('dot', 0),) * a + (('bub', 1, i, True, b - 1 + bb),)
        rhs = rhs + _mor(bot, lam, sl, -1)
    out.append((f"Curl(right,i={i},m={m})", lhs, rhs))
    # left curl with m dots; the bubbles land in the left region
    lamL = roots.add(lam, roots.simple_root(i, eng.n))
    bL = roots.bar_i(lamL, i)
    lhs = _mor(bot, lam, (('cup', 0, i, 'FE'),) + (('dot', 0),) * m +
               (('x', 1), ('cap', 0)))
    rhs = Mor2.zero(bot, bot, lam)
    for a in range(0, max(m + bL + 1, 0)):
        bb = m + bL - a
        sl = (('bub', 0, i, False, -bL - 1 + bb),) + (('dot', 0),) * a
        rhs = rhs + _mor(bot, lam, sl)
    out.append((f"Curl(left,i={i},m={m})", lhs, rhs))
    return out


def bubble_slides(eng: Engine, i: int, j: int, lam, m: int):
    """The four slide families: a bubble of color i crosses a transparent
    strand of color j; stated here left-to-right over an upward strand and
    right-to-left over a downward one."""
    out = []
    lamR = lam
    for d, tag in ((UP, "up"), (DOWN, "down")):
        bot = ((d, j),)
        nuL = region(bot, lam, 0)
        for cw, fam in ((False, "A"), (True, "B")):
            bL = roots.bar_i(nuL, i)
            raw = bL - 1 + m if cw else -bL - 1 + m
            lhs = _mor(bot, lam, (('bub', 0, i, cw, raw),))
            bR = roots.bar_i(lam, i)

            def bub(off):
                r = off + bR - 1 if cw else off - bR - 1
                return ('bub', 1, i, cw, r)

            rhs = Mor2.zero(bot, bot, lam)
            pair = eng.pairing(i, j)
            if i == j:
                series = (d == UP and cw) or (d == DOWN and not cw)
                if series:
                    for a in range(0, m + 1):
                        rhs = rhs + _mor(bot, lam,
                                         (('dot', 0),) * a + (bub(m - a),),
                                         -(a + 1))
                else:
                    rhs = rhs + _mor(bot, lam, (('dot', 0), ('dot', 0), bub(m - 2)), -1)
                    rhs = rhs + _mor(bot, lam, (('dot', 0), bub(m - 1)), 2)
                    rhs = rhs + _mor(bot, lam, (bub(m),), -1)
            elif pair == -1:
                e = eng.eps(i, j)
                series = (d == UP and not cw) or (d == DOWN and cw)
                if series:
                    for a in range(0, m + 1):
                        rhs = rhs + _mor(bot, lam,
                                         (('dot', 0),) * a + (bub(m - a),), e)
                else:
                    rhs = rhs + _mor(bot, lam, (('dot', 0), bub(m - 1)), -e)
                    rhs = rhs + _mor(bot, lam, (bub(m),), e)
            else:
                rhs = rhs + _mor(bot, lam, (bub(m),))
            out.append((f"BubbleSlide{fam}({tag},i={i},j={j},m={m})", lhs, rhs))
    return out


def r3b(eng: Engine, i: int, j: int, k: int, lam):
    bot = ((UP, i), (DOWN, j), (UP, k))
    lhs = _mor(bot, lam, (('x', 0), ('x', 1), ('x', 0))) - \
        _mor(bot, lam, (('x', 1), ('x', 0), ('x', 1)))
    rhs = Mor2.zero(bot, lhs.top, lam)
    if i == j == k:
        b = roots.bar_i(lam, i)
        mid = roots.add(lam, roots.simple_root(i, eng.n))
        bmid = roots.bar_i(mid, i)
        for a in range(0, max(b + 1, 0)):
            for bb in range(0, b + 1 - a):
                for c in range(0, b + 1 - a - bb):
                    dd = b - a - bb - c
                    sl = (('dot', 0),) * a + (('cap', 0),) + \
                         (('bub', 0, i, False, -bmid - 1 + dd),) + \
                         (('dot', 0),) * c + \
                         (('cup', 0, i, 'EF'),) + (('dot', 0),) * bb
                    rhs = rhs + _mor(bot, lam, sl)
        total = -b - 2
        for a in range(0, max(total + 1, 0)):
            for bb in range(0, total + 1 - a):
                for c in range(0, total + 1 - a - bb):
                    dd = total - a - bb - c
                    sl = (('dot', 0),) * c + \
                         (('dot', 1),) * a + (('cap', 1),) + \
                         (('bub', 1, i, True, b - 1 + dd),) + \
                         (('cup', 1, i, 'FE'),) + (('dot', 1),) * bb
                    rhs = rhs + _mor(bot, lam, sl)
    return [(f"R3b(i={i},j={j},k={k})", lhs, rhs)]


def all_km_relations(eng: Engine, lam, derived=True):
    """Every relation instance at one weight, colors over the ambient."""
    cols = eng.colors()
    out = []
    for i in cols:
        out += km1(eng, i, lam)
        out += km2(eng, i, lam)
        out += km8(eng, i, lam)
        out += km9(eng, i, lam, degree=3)
    for i in cols:
        for j in cols:
            out += km3(eng, i, j, lam)
            out += km4(eng, i, j, lam)
            out += km4(eng, i, j, lam, down=True)
            out += km5(eng, i, j, lam)
            out += km5(eng, i, j, lam, down=True)
            out += km7(eng, i, j, lam)
    for i in cols:
        for j in cols:
            for k in cols:
                out += km6(eng, i, j, k, lam)
    if derived:
        for i in cols:
            out += curl(eng, i, lam, 0)
            out += curl(eng, i, lam, 1)
            for j in cols:
                out += bubble_slides(eng, i, j, lam, 1)
                out += bubble_slides(eng, i, j, lam, 2)
        for i in cols:
            for j in cols:
                for k in cols:
                    if i == k:
                        out += r3b(eng, i, j, k, lam)
    return out


def rewrite_suite(eng: Engine, lams, derived=True, progress=None):
    rows = []
    for lam in lams:
        for name, lhs, rhs in all_km_relations(eng, lam, derived=derived):
            ok = eng.equals(lhs, rhs)
            rows.append({"relation": name, "lambda": list(lam), "pass": bool(ok)})
            if progress and not ok:
                progress(name, lam)
    return rows
