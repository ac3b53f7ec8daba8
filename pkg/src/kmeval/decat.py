"""The decategorified layer: idempotented quantum algebras as word algebras,
the evaluation homomorphism, the omega involution, the alternating-sum
expansion, and a tensor-power matrix oracle for the defining relations.

Words are written left to right with the rightmost letter acting first on
1_lambda, so E_i E_j 1_lam means E_i 1_{lam+alpha_j} . E_j 1_lam.
"""

from __future__ import annotations

from itertools import product

from .scalar import LaurentQ, quantum_integer
from . import roots
from .roots import Weight, simple_root, neg

E, F = 1, -1


class UWord:
    """A monomial X_{c_1} ... X_{c_k} 1_lam with X in {E, F}."""

    __slots__ = ("lam", "letters", "_hash")

    def __init__(self, lam: Weight, letters=()):
        self.lam = tuple(lam)
        self.letters = tuple(letters)
        self._hash = hash((self.lam, self.letters))

    def __eq__(self, other):
        return self.lam == other.lam and self.letters == other.letters

    def __hash__(self):
        return self._hash

    @property
    def n(self):
        return len(self.lam)

    def target(self) -> Weight:
        w = self.lam
        for d, c in self.letters:
            a = simple_root(c, len(w))
            w = tuple(x + d * y for x, y in zip(w, a))
        return w

    def __repr__(self):
        s = "".join(("E%d" if d == E else "F%d") % c for d, c in self.letters)
        return (s or "1") + "_" + str(list(self.lam))


class UElem:
    """Finite Laurent-linear combination of UWords with common source and
    target weights."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[w] = c

    @staticmethod
    def unit(lam: Weight) -> "UElem":
        return UElem({UWord(lam): LaurentQ.from_int(1)})

    @staticmethod
    def word(lam: Weight, letters, coeff=1) -> "UElem":
        c = coeff if isinstance(coeff, LaurentQ) else LaurentQ.from_int(coeff)
        return UElem({UWord(lam, letters): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, UElem) and self.terms == other.terms

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, LaurentQ()) + c
            if s:
                t[w] = s
            else:
                t.pop(w, None)
        return UElem(t)

    def __neg__(self):
        return UElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "UElem":
        if isinstance(k, int):
            k = LaurentQ.from_int(k)
        return UElem({w: c * k for w, c in self.terms.items()})

    def __mul__(self, other: "UElem") -> "UElem":
        """Concatenation product; terms whose weights mismatch vanish."""
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if w1.lam != w2.target():
                    continue
                w = UWord(w2.lam, w1.letters + w2.letters)
                c = out.get(w, LaurentQ()) + c1 * c2
                if c:
                    out[w] = c
                else:
                    out.pop(w, None)
        return UElem(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{w}" for w, c in sorted(
            self.terms.items(), key=lambda kv: repr(kv[0])))


def q_commutator(x: UElem, y: UElem, qexp: int) -> UElem:
    """[x, y]_{q^e} = xy - q^e yx."""
    return x * y - (y * x).scale(LaurentQ.q_power(qexp))


def gen(d: int, i: int, lam: Weight) -> UElem:
    return UElem.word(lam, ((d, i),))


def ev_generator(d: int, i: int, lam: Weight, t: int) -> UElem:
    """Image of E_i 1_lam / F_i 1_lam under the evaluation homomorphism into
    the finite-type subalgebra; the identity except on the affine index n."""
    n = len(lam)
    if n < 3:
        raise ValueError("evaluation map needs n >= 3")
    if i != n:
        return gen(d, i, lam)
    s = lam[0] + lam[n - 1] + t - 1
    if d == E:
        return _nested_f(lam, n).scale(LaurentQ.q_power(s))
    return _nested_e(lam, n).scale(LaurentQ.q_power(-s))


def _right_weight(lam: Weight, colors_applied) -> Weight:
    w = lam
    for d, c in colors_applied:
        w = tuple(x + d * y for x, y in zip(w, simple_root(c, len(w))))
    return w


def _nested_f(lam: Weight, n: int) -> UElem:
    """[...[[F_1,F_2]_q,F_3]_q...,F_{n-1}]_q 1_lam in the free word algebra."""

    def build(k: int, mu: Weight) -> UElem:
        if k == 1:
            return gen(F, 1, mu)
        # [x, F_k]_q 1_mu = x F_k 1_mu - q F_k x 1_mu
        x_at = build(k - 1, tuple(a - b for a, b in zip(mu, simple_root(k, n))))
        first = x_at * gen(F, k, mu)
        x_here = build(k - 1, mu)
        second = gen(F, k, _target_of(x_here)) * x_here
        return first - second.scale(LaurentQ.q_power(1))

    return build(n - 1, lam)


def _nested_e(lam: Weight, n: int) -> UElem:
    """[E_{n-1}, [E_{n-2}, [... [E_2, E_1]_{q^{-1}} ...]_{q^{-1}}]_{q^{-1}} 1_lam."""

    def build(k: int, mu: Weight) -> UElem:
        if k == 1:
            return gen(E, 1, mu)
        # [E_k, x]_{q^{-1}} = E_k x - q^{-1} x E_k
        x_here = build(k - 1, mu)
        ek_shift = gen(E, k, _target_of(x_here))
        first = ek_shift * x_here
        ek = gen(E, k, mu)
        x_at = build(k - 1, tuple(a + b for a, b in zip(mu, simple_root(k, n))))
        second = x_at * ek
        return first - second.scale(LaurentQ.q_power(-1))

    return build(n - 1, lam)


def _target_of(x: UElem) -> Weight:
    w = next(iter(x.terms))
    return w.target()


def expand_alternating(d: int, lam: Weight, t: int) -> UElem:
    """The alternating-sum form of the evaluation image of E_n/F_n:
    a signed sum over xi in {0,1}^{n-2} of the words E_xi / F_xi."""
    n = len(lam)
    if n < 3:
        raise ValueError("needs n >= 3")
    s = lam[0] + lam[n - 1] + t - 1
    out = UElem()
    for xi in product((0, 1), repeat=n - 2):
        size = sum(xi)
        if d == E:
            # F_xi = F_{n-1}^{xi_{n-2}} ... F_2^{xi_1} F_1 F_2^{1-xi_1} ... F_{n-1}^{1-xi_{n-2}}
            left = [k + 2 for k in reversed(range(n - 2)) if xi[k]]
            right = [k + 2 for k in range(n - 2) if not xi[k]]
            letters = tuple((F, c) for c in left) + ((F, 1),) + tuple((F, c) for c in right)
            coeff = LaurentQ.q_power(s + size, (-1) ** size)
        else:
            # E_xi = E_{n-1}^{1-xi_{n-2}} ... E_2^{1-xi_1} E_1 E_2^{xi_1} ... E_{n-1}^{xi_{n-2}}
            left = [k + 2 for k in reversed(range(n - 2)) if not xi[k]]
            right = [k + 2 for k in range(n - 2) if xi[k]]
            letters = tuple((E, c) for c in left) + ((E, 1),) + tuple((E, c) for c in right)
            coeff = LaurentQ.q_power(-s - size, (-1) ** size)
        out = out + UElem.word(lam, letters, coeff)
    return out


def ev_elem(x: UElem, t: int) -> UElem:
    """Extend the evaluation map multiplicatively over words."""
    out = UElem()
    for w, c in x.terms.items():
        mu = w.lam
        images = []
        for d, col in reversed(w.letters):
            images.append(ev_generator(d, col, mu, t))
            mu = _right_weight(mu, [(d, col)])
        prod = UElem.unit(w.lam)
        for img in images:
            prod = img * prod
        out = out + prod.scale(c)
    return out


def omega(x: UElem) -> UElem:
    """The linear involution swapping E and F and negating weights."""
    out = {}
    for w, c in x.terms.items():
        w2 = UWord(neg(w.lam), tuple((-d, col) for d, col in w.letters))
        out[w2] = out.get(w2, LaurentQ()) + c
    return UElem(out)


# ---------------------------------------------------------------------------
# Tensor-power oracle


def _weight_basis(lam: Weight, N: int):
    """Basis tuples of V^{otimes N} of content lam (n parts)."""
    n = len(lam)
    if any(a < 0 for a in lam) or sum(lam) != N:
        return []
    out = []

    def rec(prefix, remaining):
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        for j in range(1, n + 1):
            if remaining[j - 1]:
                remaining[j - 1] -= 1
                prefix.append(j)
                rec(prefix, remaining)
                prefix.pop()
                remaining[j - 1] += 1

    rec([], list(lam))
    return out


def _eps_pair(j: int, i: int) -> int:
    """(epsilon_j, alpha_i) for the finite root alpha_i = e_i - e_{i+1}."""
    if j == i:
        return 1
    if j == i + 1:
        return -1
    return 0


def _apply_letter(d: int, i: int, vec):
    """Act by E_i or F_i (finite index) on a dict basis-tuple -> LaurentQ."""
    out = {}
    for tup, c in vec.items():
        N = len(tup)
        for k in range(N):
            if d == E and tup[k] == i + 1:
                e = sum(_eps_pair(tup[l], i) for l in range(k + 1, N))
                new = tup[:k] + (i,) + tup[k + 1:]
                coeff = c * LaurentQ.q_power(e)
            elif d == F and tup[k] == i:
                e = -sum(_eps_pair(tup[l], i) for l in range(k))
                new = tup[:k] + (i + 1,) + tup[k + 1:]
                coeff = c * LaurentQ.q_power(e)
            else:
                continue
            s = out.get(new, LaurentQ()) + coeff
            if s:
                out[new] = s
            else:
                out.pop(new, None)
    return out


def rep_matrix(x: UElem, N: int):
    """Matrix of x on the source-weight space of V^{otimes N}.

    Returns (rows, cols, entries) with entries a dict (r, c) -> LaurentQ;
    empty weight spaces give zero-dimensional matrices.
    """
    if not x.terms:
        return ([], [], {})
    src = next(iter(x.terms)).lam
    tgt = next(iter(x.terms)).target()
    cols = _weight_basis(src, N)
    rows = _weight_basis(tgt, N)
    row_index = {b: r for r, b in enumerate(rows)}
    entries = {}
    for ci, b in enumerate(cols):
        acc = {}
        for w, c in x.terms.items():
            vec = {b: LaurentQ.from_int(1)}
            for d, col in reversed(w.letters):
                if col >= len(src):
                    raise ValueError("tensor oracle only covers finite indices")
                vec = _apply_letter(d, col, vec)
                if not vec:
                    break
            for tup, v in vec.items():
                s = acc.get(tup, LaurentQ()) + v * c
                if s:
                    acc[tup] = s
                else:
                    acc.pop(tup, None)
        for tup, v in acc.items():
            entries[(row_index[tup], ci)] = v
    return (rows, cols, entries)


def rep_is_zero(x: UElem, N: int) -> bool:
    return not rep_matrix(x, N)[2]


# ---------------------------------------------------------------------------
# Relation instantiation and verification


def relation_elements(lam: Weight, n: int, affine: bool = True):
    """Yield (name, UElem) for every defining relation of the idempotented
    algebra instantiated at lam: LHS - RHS as an element."""
    idx = range(1, n + 1) if affine else range(1, n)
    for i in idx:
        for j in idx:
            # E_i F_j - F_j E_i - delta_ij [bar(lam)_i]
            x = gen(E, i, _right_weight(lam, [(F, j)])) * gen(F, j, lam)
            y = gen(F, j, _right_weight(lam, [(E, i)])) * gen(E, i, lam)
            rel = x - y
            if i == j:
                rel = rel - UElem.unit(lam).scale(quantum_integer(roots.bar_i(lam, i)))
            yield (f"commutator(i={i},j={j})", rel)
    for i in idx:
        for j in idx:
            if i == j:
                continue
            dot = roots.pairing(i, j, n, affine)
            if dot == 0:
                for d in (E, F):
                    a = gen(d, i, _right_weight(lam, [(d, j)])) * gen(d, j, lam)
                    b = gen(d, j, _right_weight(lam, [(d, i)])) * gen(d, i, lam)
                    yield (f"{'EF'[d == F]}commute(i={i},j={j})", a - b)
            elif dot == -1:
                for d in (E, F):
                    def w(colors):
                        mu = lam
                        elems = []
                        for c in reversed(colors):
                            elems.append(gen(d, c, mu))
                            mu = _right_weight(mu, [(d, c)])
                        prod = None
                        for e in elems:
                            prod = e if prod is None else e * prod
                        return prod

                    rel = w([i, i, j]) + w([j, i, i]) - w([i, j, i]).scale(quantum_integer(2))
                    yield (f"{'serreE' if d == E else 'serreF'}(i={i},j={j})", rel)


def verify_decat_relations(lams, t: int, N_max: int, n: int = 3):
    """Check that ev-images of all defining relations act by zero on the
    tensor-power oracle.  Returns a list of report rows."""
    rows = []
    for lam in lams:
        for name, rel in relation_elements(lam, n, affine=True):
            img = ev_elem(rel, t)
            for N in range(0, N_max + 1):
                ok = rep_is_zero(img, N) if img else True
                rows.append({"relation": name, "lambda": list(lam), "N": N,
                             "t": t, "pass": bool(ok)})
    return rows


def self_test_oracle(N_max: int = 4, n: int = 3):
    """The gl_n relations must hold exactly in the representation before the
    oracle is trusted on evaluation images."""
    rows = []
    for N in range(0, N_max + 1):
        for lam in product(range(N + 1), repeat=n):
            if sum(lam) != N:
                continue
            for name, rel in relation_elements(lam, n, affine=False):
                ok = rep_is_zero(rel, N) if rel else True
                rows.append({"relation": name, "lambda": list(lam), "N": N,
                             "pass": bool(ok)})
    return rows
