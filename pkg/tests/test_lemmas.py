import pytest

from rank2chev import lemmas


def test_case1_p3_unit_exponents():
    # exact solution set at q1 = q2 = 1: z = 2, c = c1/2
    r = lemmas.check_poly_lemma(1, 3, z_max=30)
    assert r.ok
    # reconstruct the q1 = q2 = 1 slice by brute force and compare
    found = set()
    for z in range(1, 31):
        for c in (1, 2):
            for c1 in (1, 2):
                lhs = {k: c * v % 3 for k, v in lemmas._lhs_terms(z, 3).items()}
                lhs = {k: v for k, v in lhs.items() if v}
                if lhs == {(1, 1): c1}:
                    found.add((z, c, c1))
    assert found == {(2, 2, 1), (2, 1, 2)}  # c = c1 * inverse(2) = 2*c1


def test_case1_p2_no_solutions():
    r = lemmas.check_poly_lemma(1, 2, z_max=60)
    assert r.ok and r.solutions == 0


def test_case2_p5_unique():
    # q1 = 1: z = 3 and c = c1/3 uniquely (exhaustive scan)
    r = lemmas.check_poly_lemma(2, 5, z_max=200)
    assert r.ok
    inv3 = pow(3, 3, 5)
    for z in range(1, 201):
        for c in range(1, 5):
            for c1 in range(1, 5):
                lhs = {k: c * v % 5 for k, v in lemmas._lhs_terms(z, 5).items()}
                lhs = {k: v for k, v in lhs.items() if v}
                rhs = {(1, 2): c1, (2, 1): c1}
                if lhs == rhs:
                    assert z == 3 and c == c1 * inv3 % 5


@pytest.mark.parametrize("case", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_poly_lemma_set_equality(case, p):
    r = lemmas.check_poly_lemma(case, p, z_max=120)
    assert r.ok, (r.extra[:3], r.missing[:3])


def test_case6_trichotomy_has_cancelling_solutions():
    r = lemmas.check_poly_lemma(6, 3, z_max=40)
    assert r.ok and r.solutions > 0


def test_ppower_examples():
    assert (2 ** (2 + 2) - 1) // 3 == 5  # f = 2: not a power of 2
    r = lemmas.check_ppower_lemma(1, 2, f_max=20)
    assert r.ok
    r = lemmas.check_ppower_lemma(3, 3, f_max=20)
    assert r.ok and r.solutions == 20  # (3^f+1)/2 is always integral
    assert (3 * 5 + 1) // 2 == 8
    r = lemmas.check_ppower_lemma(5, 5, f_max=20)
    assert r.ok


@pytest.mark.parametrize("expr", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_ppower_lemma_all(expr, p):
    r = lemmas.check_ppower_lemma(expr, p, f_max=20, m_max=64)
    assert r.ok, r.extra


def test_ppower_non_integral_values_skipped():
    # (p^f + 1)/2 is never integral at p = 2
    r = lemmas.check_ppower_lemma(3, 2, f_max=20)
    assert r.ok and r.solutions == 0
