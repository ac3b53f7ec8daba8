from itertools import product

from kmeval import decat, roots
from kmeval.decat import (E, F, UElem, UWord, ev_generator, ev_elem, expand_alternating,
                          gen, omega, rep_matrix, rep_is_zero, relation_elements,
                          self_test_oracle, verify_decat_relations)
from kmeval.scalar import LaurentQ


def test_simple_roots():
    assert roots.simple_root(1, 3) == (1, -1, 0)
    assert roots.simple_root(3, 3) == (-1, 0, 1)
    total = (0, 0, 0)
    for i in (1, 2, 3):
        total = roots.add(total, roots.simple_root(i, 3))
    assert total == (0, 0, 0)


def test_bar():
    assert roots.bar((0, 0, 0)) == (0, 0, 0)
    assert roots.bar((2, 1, -1)) == (1, 2, -3)
    assert roots.bar((1, 1, 1)) == (0, 0, 0)
    # linearity of bar along root translation
    for i in (1, 2, 3):
        a = roots.simple_root(i, 3)
        d0 = None
        for lam in [(0, 0, 0), (1, -2, 3), (5, 5, 5)]:
            d = roots.sub(roots.bar(roots.add(lam, a)), roots.bar(lam))
            if d0 is None:
                d0 = d
            assert d == d0


def test_pairing():
    assert roots.pairing(1, 1, 3) == 2
    assert roots.pairing(1, 3, 3) == -1
    assert roots.pairing(1, 3, 4) == 0
    assert roots.pairing(1, 2, 3, affine=False) == -1


def test_weight_bookkeeping():
    w = UWord((0, 0, 0), ((E, 1), (E, 2)))
    assert w.target() == roots.add(roots.add((0, 0, 0), roots.simple_root(2, 3)),
                                   roots.simple_root(1, 3))
    # mismatched weights multiply to zero
    a = gen(E, 1, (0, 0, 0))
    b = gen(E, 2, (5, 0, 0))
    assert not (a * b)


def test_ev_generator_n3():
    lam = (0, 0, 0)
    img = ev_generator(E, 3, lam, t=1)   # S = 0
    expected = (UElem.word(lam, ((F, 1), (F, 2))) -
                UElem.word(lam, ((F, 2), (F, 1)), LaurentQ.q_power(1)))
    assert img == expected

    img_f = ev_generator(F, 3, lam, t=1)
    expected_f = (UElem.word(lam, ((E, 2), (E, 1))) -
                  UElem.word(lam, ((E, 1), (E, 2)), LaurentQ.q_power(-1)))
    assert img_f == expected_f

    assert ev_generator(E, 1, lam, t=1) == gen(E, 1, lam)


def test_ev_prefactor():
    lam = (2, 0, -1)
    t = -2
    s = lam[0] + lam[2] + t - 1
    img = ev_generator(E, 3, lam, t)
    w = UWord(lam, ((F, 1), (F, 2)))
    assert img.terms[w] == LaurentQ.q_power(s)


def test_alternating_sum_small():
    lam = (0, 0, 0)
    assert expand_alternating(E, lam, 1) == ev_generator(E, 3, lam, 1)
    lam4 = (1, 0, 0, -1)
    out = expand_alternating(E, lam4, 0)
    assert len(out.terms) == 4


def test_alternating_equals_nested_commutator():
    # Lemma: the nested q-commutator expansion equals the alternating
    # xi-sum coefficientwise in the free word algebra, n = 3..6.
    for n in range(3, 7):
        lam = tuple(range(n))
        for t in (-1, 0, 2):
            for d in (E, F):
                assert expand_alternating(d, lam, t) == ev_generator(d, n, lam, t), (n, t, d)


def test_omega():
    lam = (1, 0, 0)
    x = gen(E, 1, lam)
    y = omega(x)
    assert y == UElem.word((-1, 0, 0), ((F, 1),))
    assert omega(y) == x
    z = UElem.word((2, -1, 0), ((E, 2), (F, 1)), LaurentQ.q_power(1))
    oz = omega(z)
    assert oz == UElem.word((-2, 1, 0), ((F, 2), (E, 1)), LaurentQ.q_power(1))


def test_omega_fixes_relation_set():
    # omega maps relation elements at lam to relation elements at -lam
    lam = (1, 0, -1)
    names = {}
    for name, rel in relation_elements(lam, 3):
        names[name] = omega(rel)
    targets = dict(relation_elements((-1, 0, 1), 3))
    # the omega image of the EF commutator at lam matches the FE data at -lam
    # up to sign conventions; here we just check omega images are again in
    # the span of relations by verifying they vanish in the oracle.
    for name, img in names.items():
        for N in range(0, 3):
            if any(c >= 3 for _, c in
                   [l for w in img.terms for l in w.letters]):
                continue
            assert rep_is_zero(img, N), name


def test_rep_matrix_basics():
    lam = (1, 0, 0)
    one = UElem.unit(lam)
    rows, cols, entries = rep_matrix(one, 1)
    assert len(rows) == len(cols) == 1
    assert entries == {(0, 0): LaurentQ.from_int(1)}

    x = gen(E, 1, (0, 1, 0))
    rows, cols, entries = rep_matrix(x, 1)
    assert len(rows) == len(cols) == 1
    assert entries == {(0, 0): LaurentQ.from_int(1)}


def test_rep_commutator_zero_weight():
    lam = (1, 1, 0)
    x = gen(E, 1, roots.sub(lam, roots.simple_root(1, 3))) * gen(F, 1, lam)
    y = gen(F, 1, roots.add(lam, roots.simple_root(1, 3))) * gen(E, 1, lam)
    rel = x - y  # [bar lam_1] = [0] = 0
    assert rep_is_zero(rel, 2)


def test_oracle_self_test():
    rows = self_test_oracle(N_max=4, n=3)
    assert rows and all(r["pass"] for r in rows)


def test_verify_decat_relations_samples():
    lams = [(1, 1, 0), (2, 1, 0), (1, 0, 1), (0, 0, 0)]
    rows = verify_decat_relations(lams, t=0, N_max=2, n=3)
    assert rows and all(r["pass"] for r in rows)
    rows = verify_decat_relations([(2, 1, 0)], t=1, N_max=3, n=3)
    assert rows and all(r["pass"] for r in rows)
