"""Filter identities, cascade tables, and point evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from wavedens.wavelet_basis import build_filter, cascade_tables

ALL_FILTERS = [("daubechies", N) for N in range(1, 11)] + [
    ("symmlet", N) for N in range(2, 11)
]


def _quad(values: np.ndarray, depth: int) -> float:
    """Left-endpoint Riemann sum on the table grid.

    phi vanishes at both support ends for N >= 2 (so this equals the
    trapezoid rule) and is right-continuous at the jumps of the Haar case
    (where the trapezoid rule would smear the step).
    """
    return float(values[:-1].sum()) / 2**depth


class TestFilters:
    @pytest.mark.parametrize("family,N", ALL_FILTERS)
    def test_qmf_identities(self, family, N):
        """Taps sum to sqrt(2) and are orthonormal to their even shifts."""
        h = build_filter(family, N).low_pass
        assert len(h) == 2 * N
        assert abs(h.sum() - math.sqrt(2)) < 1e-10
        for ell in range(N):
            target = 1.0 if ell == 0 else 0.0
            assert abs(h[: len(h) - 2 * ell] @ h[2 * ell:] - target) < 1e-10

    @pytest.mark.parametrize("family,N", ALL_FILTERS)
    def test_high_pass_orthogonality(self, family, N):
        """The mirror filter g_m = (-1)^m h_{1-m} is orthogonal to h."""
        h = build_filter(family, N).low_pass
        L = len(h)
        g = np.array([(-1) ** m * h[1 - m] if 0 <= 1 - m < L else 0.0
                      for m in range(2 - L, 2)])
        for ell in range(-N + 1, N):
            acc = sum(h[m] * g[m - 2 * ell - (2 - L)]
                      for m in range(L) if 0 <= m - 2 * ell - (2 - L) < L)
            assert abs(acc) < 1e-10

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError, match="unsupported filter"):
            build_filter("coiflet", 3)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            build_filter("daubechies", 11)
        with pytest.raises(ValueError):
            build_filter("symmlet", 1)


class TestCascadeTables:
    def test_depth_floor(self):
        with pytest.raises(ValueError, match="depth"):
            cascade_tables(build_filter("symmlet", 8), depth=3)

    @pytest.mark.parametrize("family,N", [("daubechies", 1), ("daubechies", 4),
                                          ("symmlet", 8)])
    def test_quadrature(self, family, N):
        """Tables integrate to 1 (phi) and 0 (psi) at depth 12."""
        t = cascade_tables(build_filter(family, N), depth=12)
        assert abs(_quad(t.phi_values, 12) - 1.0) < 1e-6
        assert abs(_quad(t.psi_values, 12)) < 1e-6

    @pytest.mark.parametrize("family,N", [("daubechies", 1), ("daubechies", 4),
                                          ("symmlet", 8)])
    def test_orthonormality(self, family, N):
        """Integer-shift inner products reproduce the orthonormality relations."""
        t = cascade_tables(build_filter(family, N), depth=12)
        step = 2**12
        h = 1.0 / step
        for table_a, table_b in ((t.phi_values, t.phi_values),
                                 (t.psi_values, t.psi_values),
                                 (t.phi_values, t.psi_values)):
            for shift in range(0, 2 * N - 1):
                prod = table_a[shift * step:] @ table_b[: len(table_b) - shift * step]
                want = 1.0 if shift == 0 and table_a is table_b else 0.0
                # phi-psi overlap at shift 0 must also vanish
                if table_a is t.phi_values and table_b is t.psi_values:
                    want = 0.0
                assert abs(prod * h - want) < 1e-4, (family, N, shift)

    @pytest.mark.parametrize("family,N", [("daubechies", 1), ("daubechies", 4),
                                          ("symmlet", 8)])
    def test_partition_of_unity(self, family, N):
        """sum_k phi(x - k) = 1 on dyadic points away from nothing: everywhere."""
        t = cascade_tables(build_filter(family, N), depth=10)
        step = 2**10
        width = 2 * N - 1
        # evaluate the sum on one period [0, 1): translate k shifts by k*step
        acc = np.zeros(step)
        for k in range(width):
            acc += t.phi_values[k * step:(k + 1) * step]
        assert_allclose(acc, 1.0, atol=1e-5)

    def test_refinement_relation(self):
        """phi(x) = sqrt(2) sum_m h_m phi(2x - m) holds exactly on the table."""
        filt = build_filter("symmlet", 8)
        t = cascade_tables(filt, depth=8)
        step = 2**8
        x_idx = np.arange(0, len(t.phi_values), 2)  # points where 2x stays on-grid
        lhs = t.phi_values[x_idx]
        rhs = np.zeros(len(x_idx))
        for m, hm in enumerate(filt.low_pass):
            src = 2 * x_idx - m * step
            ok = (src >= 0) & (src < len(t.phi_values))
            rhs[ok] += hm * t.phi_values[src[ok]]
        assert_allclose(lhs, math.sqrt(2) * rhs, atol=1e-12)


class TestEval:
    def test_matches_table_on_grid(self, sym8_tables):
        """eval at exact dyadic points reproduces the stored tables."""
        t = sym8_tables
        N = t.vanishing_moments
        grid = t.sample_grid("psi")
        assert_allclose(t.eval("psi", 0, 0, grid), t.psi_values, rtol=0, atol=0)
        phi_grid = t.sample_grid("phi") - (N - 1)  # centered argument
        assert_allclose(t.eval("phi", 0, 0, phi_grid), t.phi_values, rtol=0, atol=0)

    def test_scaling_and_shift(self, sym8_tables):
        """phi_{j,k}(x) = 2^{j/2} phi_{0,0}(2^j x - k) at snapped points."""
        t = sym8_tables
        x = np.linspace(-2.0, 3.0, 257)
        for j, k in ((0, 0), (2, 3), (5, -4)):
            direct = t.eval("phi", j, k, x)
            base = t.eval("phi", 0, 0, 2.0**j * x - k)
            assert_allclose(direct, 2.0 ** (j / 2) * base, rtol=0, atol=1e-12)

    def test_zero_outside_support(self, sym8_tables):
        N = sym8_tables.vanishing_moments
        assert sym8_tables.eval("phi", 0, 0, float(N) + 1e-9) == 0.0
        assert sym8_tables.eval("psi", 0, 0, float(1 - N) - 1e-9) == 0.0

    def test_bad_kind(self, sym8_tables):
        with pytest.raises(ValueError, match="kind"):
            sym8_tables.eval("theta", 0, 0, 0.5)

    def test_haar_values(self, haar_tables):
        """Haar phi is the half-open indicator of [0, 1).

        Integer points come straight from the eigenvector and are exact;
        interior dyadic points pick up one ulp from the sqrt(2)*h products
        of the cascade.
        """
        assert haar_tables.eval("phi", 0, 0, 0.0) == 1.0
        assert haar_tables.eval("phi", 0, 0, 1.0) == 0.0
        assert abs(haar_tables.eval("phi", 0, 0, 0.999) - 1.0) < 1e-12
        assert abs(haar_tables.eval("psi", 0, 0, 0.25) - 1.0) < 1e-12
        assert abs(haar_tables.eval("psi", 0, 0, 0.75) + 1.0) < 1e-12

    @given(j=st.integers(min_value=0, max_value=8),
           k=st.integers(min_value=-10, max_value=10),
           x=st.floats(min_value=-5, max_value=5, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_support_property(self, j, k, x):
        """eval is zero whenever 2^j x - k falls outside [1-N, N]."""
        t = _SHARED_SYM8
        u = 2.0**j * x - k
        N = t.vanishing_moments
        if u < 1 - N - 2.0**-9 or u > N + 2.0**-9:
            assert t.eval("psi", j, k, x) == 0.0

    def test_k_range_covers_support(self, sym8_tables):
        lo_k, hi_k = sym8_tables.k_range(3, 0.0, 1.0)
        x = np.linspace(0.0, 1.0, 101)
        for k in (lo_k - 1, hi_k + 1):
            assert np.all(sym8_tables.eval("psi", 3, k, x) == 0.0)


_SHARED_SYM8 = cascade_tables(build_filter("symmlet", 8), depth=10)
