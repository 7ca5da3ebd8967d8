from fractions import Fraction

from hypothesis import settings, strategies as st

from pseudoiso.cohomology import CurveCycle, DivisorClass

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_ints = st.integers(min_value=-6, max_value=6).map(Fraction)


def divisors(n: int = 4, entries=rationals):
    return st.tuples(entries, st.tuples(*[entries] * n)).map(lambda ab: DivisorClass(*ab))


def curves(n: int = 4, entries=rationals):
    return st.tuples(entries, st.tuples(*[entries] * n)).map(lambda cd: CurveCycle(*cd))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
