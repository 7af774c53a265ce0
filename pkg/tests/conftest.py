import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from omegaterms.terms import Power, Term

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

letters = st.sampled_from("ab")

atoms = st.recursive(
    letters,
    lambda inner: st.lists(inner, min_size=1, max_size=3).map(lambda xs: Power(Term(tuple(xs)))),
    max_leaves=6,
)


def terms(max_length=12, min_rank=0):
    return (
        st.lists(atoms, min_size=1, max_size=4)
        .map(lambda xs: Term(tuple(xs)))
        .filter(lambda t: t.length <= max_length and t.rank >= min_rank)
    )


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
