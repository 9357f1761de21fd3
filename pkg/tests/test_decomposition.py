import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from paretokit.core import ContractError
from paretokit.decomposition import METHODS, decompose

positive = st.floats(0.05, 5)
coord = st.floats(0, 10)


class TestExamples:
    def test_weighted_sum(self):
        assert decompose([0.5, 0.5], [0.5, 0.5], method="weighted_sum") == 0.5

    def test_tchebysheff(self):
        assert decompose([0.2, 0.6], [1, 1], [0, 0], method="tchebysheff") == 0.6

    def test_pbi_on_ray(self):
        assert decompose([1, 1], [1, 1], [0, 0], method="pbi", theta=5) == pytest.approx(np.sqrt(2), abs=1e-15)

    def test_pbi_off_ray(self):
        assert decompose([1, 1], [1, 0], [0, 0], method="pbi", theta=5) == pytest.approx(6.0, abs=1e-15)

    def test_aasf(self):
        assert decompose([0.2, 0.6], [1, 1], [0, 0], method="aasf", rho=1e-4) == pytest.approx(0.60008, abs=1e-15)

    def test_matrix_input(self):
        out = decompose([[0.2, 0.6], [0.4, 0.4]], [1, 1], method="asf")
        np.testing.assert_allclose(out, [0.6, 0.4])


class TestErrors:
    @pytest.mark.parametrize("method", ["asf", "aasf"])
    def test_zero_weight_rejected(self, method):
        with pytest.raises(ContractError):
            decompose([1, 1], [1, 0], method=method)

    @pytest.mark.parametrize("method", METHODS)
    def test_all_zero_weights(self, method):
        with pytest.raises(ContractError):
            decompose([1, 1], [0, 0], method=method)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractError):
            decompose([1, 1, 1], [1, 1])

    def test_unknown_method(self):
        with pytest.raises(ContractError):
            decompose([1, 1], [1, 1], method="penalty")


class TestProperties:
    @pytest.mark.parametrize("method", METHODS)
    @given(z=arrays(float, 3, elements=coord), w=arrays(float, 3, elements=positive))
    def test_zero_at_ideal(self, method, z, w):
        f = np.zeros(3) if method == "weighted_sum" else z
        assert decompose(f, w, z, method=method) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("method", ["weighted_sum", "tchebysheff", "asf", "aasf"])
    @given(
        z=arrays(float, 3, elements=coord),
        gap=arrays(float, 3, elements=coord),
        step=arrays(float, 3, elements=st.floats(0, 3)),
        w=arrays(float, 3, elements=positive),
    )
    def test_monotone_under_dominance(self, method, z, gap, step, w):
        assume(step.max() > 1e-6)
        better = z + gap
        worse = better + step
        a = decompose(better, w, z, method=method)
        b = decompose(worse, w, z, method=method)
        assert a <= b + 1e-12
        if method == "aasf":
            assert a < b

    @given(t=st.floats(0, 10), w=arrays(float, 3, elements=positive), z=arrays(float, 3, elements=coord))
    def test_pbi_ray_has_no_penalty(self, t, w, z):
        f = z + t * w
        value = decompose(f, w, z, method="pbi", theta=5)
        assert value == pytest.approx(t * np.linalg.norm(w), rel=1e-9, abs=1e-9)

    @given(
        f=arrays(float, 4, elements=coord),
        z=arrays(float, 4, elements=coord),
        w=arrays(float, 4, elements=positive),
    )
    def test_tchebysheff_is_lp_limit(self, f, z, w):
        terms = w * np.abs(f - z)
        assume(np.max(terms) > 0 and np.sum(terms == terms.max()) == 1)
        lp = np.sum(terms**64) ** (1 / 64)
        assert decompose(f, w, z, method="tchebysheff") == pytest.approx(terms.max())
        assert lp == pytest.approx(terms.max(), rel=0.03)
