import random
from fractions import Fraction

import pytest

from padr.exactnum import ExactScalar as E, LaurentRF, sqrt_prime
from padr.plocal import (
    GL3Vector,
    PadicChar,
    PeriodicFn,
    SchwartzFn,
    adjoint_modified,
    depletion_normal_form,
    depletion_pipeline,
    euler_modified,
    fourier_transform,
    gamma_gl_pair,
    gauss_sum,
    gauss_sum_twisted,
    gl2_up_oracle,
    l_gl_pair,
    phi_prime_chi,
    pstab_ratio,
    realize_grades,
    schwartz_theta,
    subgroup_index,
    tate_factors,
    tate_integral,
    theta_p_level,
    thm81_two_route,
    up_eigenvalues,
    vp_frac,
    w_operator,
    whittaker_gl3_torus,
    zeta_two_route,
)
from padr.plocal import _gamma_gl3_twist


def ramified_chars(p, c, limit=None):
    m = (p - 1) * p ** (c - 1)
    out = []
    for e in range(1, m):
        if c >= 2 and e % p == 0:
            continue
        out.append(PadicChar(p, 1, c, e))
    return out[:limit] if limit else out


def unram(p, u):
    return PadicChar.unramified(p, Fraction(u))


class TestPadicChar:
    def test_trivial(self):
        chi = unram(5, 1)
        assert chi.is_trivial()
        assert chi(Fraction(7, 3)) == E.one()
        assert gauss_sum(chi) == E.one()

    def test_multiplicativity(self):
        chi = PadicChar(5, Fraction(2), 1, 1)
        for x, y in [(2, 3), (Fraction(7, 5), 4), (Fraction(1, 5), Fraction(2, 25))]:
            assert chi(Fraction(x) * Fraction(y)) == chi(x) * chi(y)

    def test_group_law_and_inverse(self):
        a = PadicChar(5, Fraction(2), 1, 1)
        b = PadicChar(5, Fraction(3), 2, 3)
        ab = a * b
        for x in (2, 3, Fraction(7, 25)):
            assert ab(x) == a(x) * b(x)
            assert (a * a.inverse())(x) == E.one()

    def test_conductor_reduction(self):
        # an exponent divisible by p at level 2 really lives at level 1
        chi = PadicChar.from_parts(5, 1, 2, 5)
        assert chi.c == 1 and chi.e == 1

    def test_sign_at_minus_one(self):
        chi = PadicChar(5, 1, 1, 2)  # quadratic
        assert chi.at_minus_one() == E.one()
        chi = PadicChar(7, 1, 1, 3)  # quadratic, 7 = 3 mod 4
        assert chi.at_minus_one() == -E.one()


class TestGaussSum:
    def test_quadratic_square(self):
        chi = PadicChar(5, 1, 1, 2)
        g = gauss_sum(chi)
        assert g * g == E.rational(5)

    @pytest.mark.parametrize("p,c", [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)])
    def test_product_identity(self, p, c):
        for chi in ramified_chars(p, c, limit=4):
            lhs = gauss_sum(chi) * gauss_sum(chi.inverse())
            assert lhs == E.rational(p ** c) * chi.at_minus_one()

    def test_twisted_identity(self):
        chi = PadicChar(5, 1, 1, 1)
        g = gauss_sum(chi.inverse())
        for y in (1, 2, 3, 4, 6):
            want = chi(-y).inverse() * g
            assert gauss_sum_twisted(chi.inverse(), y) == want
        for y in (0, 5, 10):
            assert gauss_sum_twisted(chi.inverse(), y).is_zero() or y == 0 and \
                gauss_sum_twisted(chi.inverse(), y) == -E.one()

    def test_twist_by_nonunit_vanishes(self):
        chi = PadicChar(3, 1, 2, 1)
        assert gauss_sum_twisted(chi.inverse(), 3).is_zero()


class TestTateFactors:
    def test_unramified_shape(self):
        chi = unram(3, 2)
        L, eps, gamma = tate_factors(chi)
        one = LaurentRF.one()
        assert L == one / (one - LaurentRF.monomial(2, 1))
        assert eps == E.one()
        dual = one / (one - LaurentRF.monomial(Fraction(1, 6), -1))
        assert gamma == dual / L

    def test_ramified_shape(self):
        chi = PadicChar(5, Fraction(3), 1, 1)
        L, eps, gamma = tate_factors(chi)
        assert L == LaurentRF.one()
        assert eps.qgrade == -1
        root = chi.u * gauss_sum(chi)
        assert gamma == LaurentRF.monomial(root, 1)

    @pytest.mark.parametrize("p", [3, 5])
    def test_central_reflection(self, p):
        # gamma(1/2, chi, psi) gamma(1/2, chi^(-1), psi^(-1)) = 1
        x_half = sqrt_prime(p).inverse()
        chars = [unram(p, Fraction(2, 3)), PadicChar(p, Fraction(3), 1, 1)]
        for chi in chars:
            g1 = tate_factors(chi)[2].evaluate(x_half)
            g2 = tate_factors(chi.inverse(), psi_inverse=True)[2].evaluate(x_half)
            assert g1 * g2 == E.one()


class TestSchwartzFn:
    def test_canonical_merge(self):
        p = 3
        fine = SchwartzFn(p, [(a, 1, 2) for a in range(3)])
        assert fine == SchwartzFn.indicator(p, 0, 0, 2)

    def test_evaluate(self):
        f = SchwartzFn.unit_indicator(5)
        assert f.evaluate(2) == E.one()
        assert f.evaluate(5).is_zero()
        assert f.evaluate(Fraction(1, 5)).is_zero()

    def test_translate_dilate(self):
        f = SchwartzFn.indicator(3, 1, 2)
        assert f.translate(1) == SchwartzFn.indicator(3, 0, 2)
        assert f.dilate(3) == SchwartzFn.indicator(3, Fraction(1, 3), 1)


class TestFourier:
    def test_unit_ball_self_dual(self):
        f = SchwartzFn.indicator(3)
        assert fourier_transform(f) == f

    def test_small_ball(self):
        got = fourier_transform(SchwartzFn.indicator(3, 0, 1))
        assert got == SchwartzFn.indicator(3, 0, -1, Fraction(1, 3))

    def test_double_transform_reflects(self):
        f = SchwartzFn.indicator(5, 1, 1)
        assert fourier_transform(fourier_transform(f)) == \
            SchwartzFn.indicator(5, -1, 1)

    def test_inversion_random(self):
        rng = random.Random(2)
        for _ in range(8):
            p = rng.choice([3, 5])
            f = SchwartzFn(p, [(Fraction(rng.randint(-4, 4), p), rng.randint(-1, 1),
                                rng.randint(-2, 2)) for _ in range(2)])
            assert fourier_transform(fourier_transform(f)) == f.dilate(-1)


class TestTateIntegral:
    def test_unit_ball_gives_L(self):
        chi = unram(5, 3)
        assert tate_integral(SchwartzFn.indicator(5), chi) == tate_factors(chi)[0]

    def test_units_give_one(self):
        chi = unram(5, 3)
        assert tate_integral(SchwartzFn.unit_indicator(5), chi) == LaurentRF.one()

    def test_ramified_kills_units_unless_matched(self):
        chi = PadicChar(5, 1, 1, 1)
        assert tate_integral(SchwartzFn.unit_indicator(5), chi) == LaurentRF.zero()

    def test_functional_equation_random(self):
        rng = random.Random(4)
        done = 0
        while done < 20:
            p = rng.choice([3, 5, 7])
            phi = SchwartzFn(p, [(Fraction(rng.randint(-6, 6), p ** rng.randint(0, 1)),
                                  rng.randint(-1, 2), rng.randint(-3, 3))
                                 for _ in range(rng.randint(1, 3))])
            if phi.is_zero():
                continue
            if rng.random() < 0.5:
                chi = unram(p, Fraction(rng.randint(1, 5), rng.randint(1, 5)))
            else:
                chi = PadicChar(p, Fraction(rng.randint(1, 4)), 1,
                                rng.randint(1, p - 2))
            lhs = tate_integral(fourier_transform(phi), chi.inverse()) \
                .subst_X(Fraction(1, p), -1)
            assert lhs == tate_factors(chi)[2] * tate_integral(phi, chi)
            done += 1


class TestThetaOperators:
    def test_intertwining_theta_p(self):
        for p in (3, 5):
            chars = [unram(p, 1)] + ramified_chars(p, 1, 2) + ramified_chars(p, 2, 1)
            phi = PeriodicFn.delta(p, 1, 2) + PeriodicFn.delta(p, 0, 0).scale(2)
            hat = fourier_transform(phi.to_schwartz())
            for chi in chars:
                lhs = fourier_transform(schwartz_theta(phi, chi, "theta_p").to_schwartz())
                phi_chi = SchwartzFn.from_char_on_units(chi)
                for y in range(p ** 2 + 2):
                    assert lhs.evaluate(y) == phi_chi.evaluate(-y) * hat.evaluate(y)

    def test_intertwining_theta_pc(self):
        for p in (3, 5):
            chars = [unram(p, 1)] + ramified_chars(p, 1, 1)
            phi = PeriodicFn.delta(p, 1, 1)
            hat = fourier_transform(phi.to_schwartz())
            for chi in chars:
                lhs = fourier_transform(schwartz_theta(phi, chi, "theta_pc").to_schwartz())
                pphi = phi_prime_chi(chi)
                for y in range(p ** 2 + 2):
                    assert lhs.evaluate(y) == pphi.evaluate(-y) * hat.evaluate(y)

    def test_level_independence(self):
        for p, c, e in [(3, 0, 0), (3, 1, 1), (5, 1, 2), (3, 2, 1)]:
            chi = PadicChar(p, 1, c, e)
            phi = SchwartzFn(p, [(Fraction(1), 1, 1), (Fraction(1, p), 0, 2)])
            base = schwartz_theta(phi, chi, "theta_p")
            for n in range(max(1, c), max(1, c) + 2):
                assert theta_p_level(phi, chi, n) == base

    def test_w_operator_on_unit_ball(self):
        p = 5
        for ell in (1, 2, 3):
            got = w_operator(SchwartzFn.indicator(p), ell)
            assert got == SchwartzFn.indicator(p, 0, -ell, Fraction(1, p ** ell))

    def test_w_operator_idempotent_in_level(self):
        p = 3
        one_o = SchwartzFn.indicator(p)
        assert w_operator(w_operator(one_o, 1), 2) == w_operator(one_o, 2)


class TestDepletionPipeline:
    @pytest.mark.parametrize("ram", [False, True])
    def test_normal_form(self, ram):
        p = 3
        chars = tuple(unram(p, u) for u in (2, 1, 3))
        if ram:
            chi, chip = PadicChar(p, 1, 1, 1), PadicChar(p, 1, 1, 1)
        else:
            chi, chip = unram(p, 1), unram(p, 1)
        h = GL3Vector.ordinary(p, chars)
        got, pref = depletion_pipeline(h, chi, chip, 2)
        want = depletion_normal_form(p, chars, chi, chip, 2)
        assert got == want
        n_prime = max(1, chip.c)
        assert pref == chars[2].u ** (-n_prime) * gauss_sum(chip.inverse())

    def test_whittaker_ordinary(self):
        p = 3
        chars = tuple(unram(p, u) for u in (2, 1, 3))
        h = GL3Vector.ordinary(p, chars)
        assert whittaker_gl3_torus(h, 1, 1) == chars[2].at_minus_one()
        # support: vanishes once b leaves the support of the transform
        assert whittaker_gl3_torus(h, 1, Fraction(1, p)).is_zero()


class TestZetaTwoRoutes:
    def sigma_cases(self, p):
        return [
            (unram(p, 5), unram(p, Fraction(1, 2))),
            (PadicChar(p, Fraction(5), 1, 1), unram(p, Fraction(1, 2))),
            (unram(p, 5), PadicChar(p, Fraction(1, 2), 1, 1)),
            (PadicChar(p, Fraction(5), 1, 1), PadicChar(p, Fraction(1, 2), 1, 1)),
        ]

    @pytest.mark.parametrize("p", [3, 5])
    def test_closed_form_matches_shells(self, p):
        chars = tuple(unram(p, u) for u in (2, 1, 3))
        h = GL3Vector.ordinary(p, chars)
        for sigma in self.sigma_cases(p):
            nu, rho, mu = chars
            chi = (nu * sigma[0].inverse()).restrict_units()
            chip = (mu * sigma[1].inverse()).restrict_units()
            hd, _ = depletion_pipeline(h, chi, chip, 3)
            route_A, route_B = zeta_two_route(hd, sigma, 3 + max(1, chip.c))
            assert route_A == route_B

    @pytest.mark.parametrize("p,ell", [(3, 3), (3, 4), (5, 3)])
    def test_central_value_two_route(self, p, ell):
        chars = tuple(unram(p, u) for u in (2, 1, 3))
        for sigma in [self.sigma_cases(p)[0], self.sigma_cases(p)[3]]:
            lhs2, rhs2 = thm81_two_route(chars, sigma, ell)
            assert lhs2 == rhs2


class TestEulerFactors:
    @pytest.mark.parametrize("p", [3, 5])
    def test_euler_cross_check(self, p):
        chars = tuple(unram(p, u) for u in (2, 1, 3))
        x_half = sqrt_prime(p).inverse()
        for sigma in [(unram(p, 5), unram(p, Fraction(1, 2))),
                      (PadicChar(p, Fraction(5), 1, 1),
                       PadicChar(p, Fraction(1, 2), 1, 1))]:
            got = euler_modified(chars, sigma)
            gGL = gamma_gl_pair(chars, sigma, x_half)
            Lv = l_gl_pair(chars, sigma, x_half)
            A = _gamma_gl3_twist(chars, sigma[0]).evaluate(x_half)
            C = tate_factors(chars[2] * sigma[1].inverse())[2].evaluate(x_half)
            assert got == gGL / (Lv * C * C * A * A)

    def test_adjoint_value(self):
        sigma = (unram(5, 3), unram(5, Fraction(1, 3)))
        assert adjoint_modified(sigma) == E.rational(Fraction(32, 5))

    def test_index(self):
        assert subgroup_index(3, 2, 5) == 27
        assert subgroup_index(3, 0, 2) == 12

    def test_pstab_growth(self):
        p = 5
        sigma = (unram(p, 3), unram(p, Fraction(1, 3)))
        r3 = realize_grades(pstab_ratio(sigma, 3), p)
        r4 = realize_grades(pstab_ratio(sigma, 4), p)
        assert r4 / r3 == sqrt_prime(p) * sigma[1].u / E.rational(p)


class TestUpEigenvalues:
    def test_alpha_example(self):
        chars = tuple(unram(5, u) for u in (2, 7, 11))
        ev = up_eigenvalues(chars, 3, 1, "alpha")
        assert realize_grades(ev, 5) == E.rational(Fraction(5, 2))

    def test_beta_example(self):
        chars = (unram(5, 7), unram(5, 3))
        ev = up_eigenvalues(chars, 2, 1, "beta")
        assert ev == E.rational(3, qgrade=1)

    def test_gl2_oracle_matches_formula(self):
        for p in (3, 5):
            for u in (3, Fraction(1, 2)):
                chars = (unram(p, 7), unram(p, u))
                ev = up_eigenvalues(chars, 2, 1, "beta")
                got = gl2_up_oracle(SchwartzFn.indicator(p), chars)
                assert got == realize_grades(ev, p)

    def test_alpha_beta_compatibility(self):
        # beta_j is alpha_{n-j} divided by the central uniformizer, so the
        # eigenvalues differ by the central character value at p
        chars = tuple(unram(5, u) for u in (2, 7, 11))
        n = 3
        central = E.one()
        for ch in chars:
            central = central * ch.u
        for j in (1, 2):
            lhs = up_eigenvalues(chars, n, j, "beta")
            rhs = up_eigenvalues(chars, n, n - j, "alpha") * central
            assert lhs == rhs
