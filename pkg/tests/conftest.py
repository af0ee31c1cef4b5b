import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mixedvol.lattice_geometry import RationalPolytope

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example, HealthCheck.filter_too_much]
)
settings.register_profile("ci", max_examples=15, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rationals(max_num=4, denoms=(1, 2, 3)):
    return st.builds(Fraction, st.integers(0, max_num), st.sampled_from(denoms))


@st.composite
def polytopes(draw, dim=None, max_points=None, full=True):
    d = draw(st.sampled_from((1, 2, 3))) if dim is None else dim
    hi = max_points or (3 if d == 1 else 5)
    extra = draw(st.lists(st.tuples(*[rationals()] * d), min_size=0, max_size=hi - d - 1))
    if not full:
        return RationalPolytope(extra or [(0,) * d], dim=d)
    # a small corner simplex keeps the body full-dimensional
    base = draw(st.tuples(*[rationals(2)] * d))
    step = draw(rationals(2, (1, 2)).filter(lambda x: x > 0))
    corner = [base] + [tuple(x + (step if j == i else 0) for j, x in enumerate(base)) for i in range(d)]
    return RationalPolytope(corner + extra, dim=d)


@st.composite
def polytope_families(draw, size):
    d = draw(st.sampled_from((1, 2, 3)))
    return d, [draw(polytopes(dim=d, max_points=4 if d == 3 else None)) for _ in range(size)]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
