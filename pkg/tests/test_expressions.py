import math

import numpy as np
import pytest

from randers.errors import InvalidParameterError
from randers.expressions import compile_expression


def test_arithmetic_and_precedence():
    f = compile_expression("1 + 2*3 - 4/8")
    assert f(0.0, 0.0) == pytest.approx(6.5)
    g = compile_expression("2^3^2")  # right-associative power
    assert g(0.0, 0.0) == 512.0
    h = compile_expression("-r^2")   # unary minus binds looser than power
    assert h(3.0, 0.0) == -9.0


def test_variables_and_functions():
    f = compile_expression("r / sqrt(mu^2 * r^2 + 1)")
    assert f(1.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    g = compile_expression("sin(r) * cos(r)")
    assert g(0.7, 0.0) == pytest.approx(math.sin(0.7) * math.cos(0.7))


def test_vectorized_evaluation():
    f = compile_expression("r - r^5/20")
    rr = np.linspace(0.0, 1.5, 7)
    np.testing.assert_allclose(f(rr, 0.5), rr - rr**5 / 20.0, rtol=1e-15)


def test_scientific_notation_numbers():
    f = compile_expression("1.5e-3 + r")
    assert f(1.0, 0.0) == pytest.approx(1.0015)


@pytest.mark.parametrize("bad", [
    "", "r +", "foo(r)", "r $ 2", "tan(r)", "(r", "r)", "x + 1",
])
def test_rejects_bad_expressions(bad):
    with pytest.raises(InvalidParameterError):
        compile_expression(bad)
