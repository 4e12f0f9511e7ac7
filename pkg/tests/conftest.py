import os

from hypothesis import HealthCheck, settings, strategies as st

from cycpres.words import Word, reduce

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE_RESULTS: dict = {}


def letters(rank, max_len=12):
    return st.lists(st.tuples(st.integers(0, rank - 1), st.sampled_from((1, -1))), max_size=max_len)


def words(rank, max_len=12):
    return letters(rank, max_len).map(lambda ls: reduce(ls, rank))


def nonempty_words(rank, max_len=12):
    return words(rank, max_len).filter(bool)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
