"""Velocity averaging: weight normalization, scheme validity, convergence."""

import pytest

from lambda_spectra import QuadratureDivergence, QuadratureSpec, doppler_average
from lambda_spectra.units import mhz

from oracles import doppler_average_trapezoid

KU = mhz(250)


def two_level(gamma):
    return lambda d: 1j / (gamma - 1j * d)


class TestBasics:
    def test_constant_integrand_is_exact(self):
        for spec in (QuadratureSpec(), QuadratureSpec("trapezoid", 501)):
            avg = doppler_average(lambda d: 0.7 - 0.2j, mhz(100), KU, spec)
            assert avg == pytest.approx(0.7 - 0.2j, abs=1e-12)

    def test_ku_zero_bypasses(self):
        chi = two_level(mhz(3))
        assert doppler_average(chi, mhz(7), 0.0) == chi(mhz(7))

    def test_linearity(self):
        c1, c2 = two_level(mhz(200)), two_level(mhz(400))
        a, b = 2.3, -0.7 + 0.4j
        lhs = doppler_average(lambda d: a * c1(d) + b * c2(d), mhz(50), KU)
        rhs = (a * doppler_average(c1, mhz(50), KU)
               + b * doppler_average(c2, mhz(50), KU))
        assert lhs == pytest.approx(rhs, abs=1e-12 * abs(rhs))

    def test_parity(self):
        # symmetric two-level absorption stays even in Delta
        chi = two_level(mhz(153))
        for dl in (mhz(30), mhz(170)):
            p = doppler_average(chi, dl, KU)
            m = doppler_average(chi, -dl, KU)
            assert p.imag == pytest.approx(m.imag, rel=1e-12)
            assert p.real == pytest.approx(-m.real, rel=1e-12)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(node_count=4)
        with pytest.raises(ValueError):
            QuadratureSpec("trapezoid", 64, truncation=2.0)
        with pytest.raises(ValueError):
            QuadratureSpec("simpson")


class TestAccuracy:
    def test_gauss_hermite_pressure_broadened(self):
        # integrand width >= half the node spacing: converged; oracle is a
        # 1e5-point truncated trapezoid
        for gamma, tol in ((mhz(153), 1e-5), (mhz(453), 1e-9)):
            chi = two_level(gamma)
            for dl in (0.0, KU):
                ref = doppler_average_trapezoid(chi, dl, KU)
                gh = doppler_average(chi, dl, KU, QuadratureSpec(node_count=64))
                assert abs(gh - ref) / abs(ref) < tol

    def test_gauss_hermite_fails_on_narrow_lorentzian(self):
        # bare 3 MHz linewidth under a 250 MHz Doppler width: 64 nodes
        # cannot resolve the integrand; the average is badly wrong and the
        # refinement check catches it
        chi = two_level(mhz(3))
        ref = doppler_average_trapezoid(chi, 0.0, KU)
        gh = doppler_average(chi, 0.0, KU, QuadratureSpec(node_count=64))
        assert abs(gh - ref) / abs(ref) > 0.1
        with pytest.raises(QuadratureDivergence):
            doppler_average(chi, 0.0, KU,
                            QuadratureSpec(node_count=64, refine=True))

    def test_trapezoid_handles_narrow_lorentzian(self):
        chi = two_level(mhz(3))
        for dl in (0.0, mhz(500)):
            ref = doppler_average_trapezoid(chi, dl, KU)
            tr = doppler_average(chi, dl, KU,
                                 QuadratureSpec("trapezoid", 4001, refine=True))
            assert abs(tr - ref) / abs(ref) < 1e-4

    def test_refinement_convergence_factor(self):
        # smooth-but-not-trivial integrand: each node doubling must shrink
        # the trapezoid error by at least 4x until the floating-point floor
        chi = two_level(mhz(40))
        ref = doppler_average_trapezoid(chi, 0.0, KU, n=400_001)
        errs = []
        for n in (33, 65, 129, 257):
            val = doppler_average(chi, 0.0, KU, QuadratureSpec("trapezoid", n))
            errs.append(abs(val - ref) / abs(ref))
        for coarse, fine in zip(errs, errs[1:]):
            if coarse < 1e-13:
                break
            assert coarse / fine > 4.0
