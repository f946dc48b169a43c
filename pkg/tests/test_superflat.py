"""Tilted Gaussian mixture and its flatness certificate."""

import dataclasses
import io
import math

import mpmath
import pytest

from gausdisk.errors import CertificateViolation, ConfigError
from gausdisk.precision import PComplex, PReal, exp, pi_value, sqrt
from gausdisk.superflat import (
    SuperflatMixture,
    build_superflat,
    density_derivative,
    flatness_certificate,
    mixture_density,
    superflat_to_csv,
)


class TestBuild:
    def test_small_width_rejected(self):
        with pytest.raises(ConfigError):
            build_superflat(3.5)

    def test_a4_structure(self):
        mix = build_superflat(4, 256)
        assert mix.k == 2
        assert [float(x) for x in mix.locations] == [-1.0, 1.0]
        # equal source weights stay equal after tilting
        assert mix.weights[0] == mix.weights[1]
        assert abs(mix.weights[0] - PReal("0.5", 256)) <= PReal(2, 256) ** -250

    def test_a4_tilt_total_is_sqrt_e(self):
        mix = build_superflat(4, 256)
        want = exp(PReal("0.5", 256))
        assert abs(mix.tilt_total - want) <= PReal(2, 256) ** -250

    def test_weights_renormalized(self):
        mix = build_superflat(7, 320)
        total = mix.weights[0]
        for w in mix.weights[1:]:
            total = total + w
        assert abs(total - 1) <= PReal(2, 320) ** -300

    def test_tilting_flattens_weight_profile(self):
        mix = build_superflat(8, 512)
        source = [float(w) for w in mix.rule.weights]
        tilted = [float(v) for v in mix.weights]
        # the rule's outer weights are tiny; tilting lifts them
        assert source[0] < tilted[0]
        assert max(tilted) / min(tilted) < max(source) / min(source)

    def test_default_bits_follow_policy(self):
        from gausdisk.precision import working_bits

        mix = build_superflat(5)
        assert mix.bits == working_bits(5.0, 2.0)


class TestDensity:
    def test_value_at_origin_for_a4(self):
        mix = build_superflat(4, 256)
        # two atoms at +-1 with tilted weight 1/2 each
        phi1 = exp(PReal(-0.5, 256)) / sqrt(2 * pi_value(256))
        assert abs(mixture_density(mix, PReal(0, 256)) - phi1) <= PReal(2, 256) ** -240

    def test_against_mpmath_sum(self):
        mix = build_superflat(6, 256)
        with mpmath.workdps(40):
            for zf in (-1.3, 0.2, 2.0):
                ref = mpmath.mpf(0)
                for x, v in zip(mix.locations, mix.weights):
                    ref += mpmath.mpf(float(v)) * mpmath.npdf(
                        mpmath.mpf(zf) - mpmath.mpf(float(x))
                    )
                got = mixture_density(mix, PReal(zf, 256))
                assert float(got) == pytest.approx(float(ref), rel=1e-13)

    def test_odd_derivatives_vanish_at_origin(self):
        mix = build_superflat(4, 256)
        for n in (1, 3, 5):
            assert float(abs(density_derivative(mix, PReal(0, 256), n))) < 1e-70

    def test_derivative_matches_central_difference(self):
        mix = build_superflat(4, 512)
        z0 = PReal("0.3", 512)
        h = PReal(2, 512) ** -40
        for n in (1, 2):
            plus = density_derivative(mix, z0 + h, n - 1)
            minus = density_derivative(mix, z0 - h, n - 1)
            numeric = (plus - minus) / (2 * h)
            exact = density_derivative(mix, z0, n)
            assert abs(numeric - exact) <= PReal(2, 512) ** -75

    def test_complex_argument(self):
        mix = build_superflat(4, 224)
        z = PComplex(0.5, 1.0, bits=224)
        val = mixture_density(mix, z)
        # conjugate symmetry of a real-coefficient entire function
        conj = mixture_density(mix, z.conjugate())
        assert abs(val.conjugate() - conj) <= PReal(2, 224) ** -200

    def test_rejects_bad_order(self):
        mix = build_superflat(4, 128)
        with pytest.raises(ConfigError):
            density_derivative(mix, PReal(0, 128), -1)


class TestTransformIdentity:
    def test_identity_on_random_points(self):
        import random

        rng = random.Random(20240817)
        mix = build_superflat(6, 320)
        source = mix.source_measure()
        scale = sqrt(2 * pi_value(320)) * mix.tilt_total
        for _ in range(10):
            z = PComplex(rng.uniform(-2, 2), rng.uniform(-2, 2), bits=320)
            lhs = scale * mixture_density(mix, z)
            rhs = source.laplace(z) * exp(-(z * z) / 2)
            assert abs(lhs - rhs) <= PReal(2, 320) ** -280


class TestCertificate:
    def test_a4_certificate(self):
        mix = build_superflat(4)
        cert = flatness_certificate(mix, n_samples=128)
        assert cert.passed
        assert float(cert.eps2) == pytest.approx(4.07493232, abs=1e-7)
        assert cert.identity_checks == 16
        assert len(cert.derivative_bounds) == 8
        assert len(cert.direct_sups) == 4
        assert all(r <= 1 + cert.slack for r in cert.ratios)

    def test_a6_certificate_flatter(self):
        cert4 = flatness_certificate(build_superflat(4), n_samples=96)
        cert6 = flatness_certificate(build_superflat(6), n_samples=96)
        assert float(cert6.eps2) == pytest.approx(9.832382e-2, rel=1e-5)
        assert float(cert6.eps2) < float(cert4.eps2)

    def test_bounds_grow_factorially(self):
        cert = flatness_certificate(build_superflat(4), n_samples=64)
        eps = float(cert.eps2)
        for n, bound in enumerate(cert.derivative_bounds, start=1):
            assert float(bound) == pytest.approx(math.factorial(n) * eps, rel=1e-12)

    def test_tampered_mixture_fails_identity_check(self):
        mix = build_superflat(4, 256)
        bad = dataclasses.replace(mix, tilt_total=mix.tilt_total * 2)
        with pytest.raises(CertificateViolation):
            flatness_certificate(bad, n_samples=32)

    def test_rejects_non_mixture(self):
        with pytest.raises(ConfigError):
            flatness_certificate("mixture")


class TestCsv:
    def test_deterministic_and_tagged(self):
        mix = build_superflat(5, 200)
        buf1, buf2 = io.StringIO(), io.StringIO()
        superflat_to_csv(mix, buf1)
        superflat_to_csv(build_superflat(5, 200), buf2)
        assert buf1.getvalue() == buf2.getvalue()
        text = buf1.getvalue()
        assert text.startswith("# a=5\n# k=4\n# tilt_total=")
        assert "location,weight" in text
        body = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert len(body) == 1 + mix.k
        for line in body[1:]:
            loc_tag, weight_tag = line.split(",")
            PReal.parse(loc_tag)
            PReal.parse(weight_tag)
