import mpmath
import pytest

mpmath.mp.dps = 30


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


@pytest.fixture
def close():
    def check(a, b, tol):
        assert rel(a, b) <= tol, f"{a} vs {b}: rel {rel(a, b):.3e} > {tol}"
    return check
