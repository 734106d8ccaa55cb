import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from freikalk.words import Word

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def letters(rank, max_len):
    return st.lists(
        st.integers(-rank, rank).filter(lambda a: a != 0), min_size=0, max_size=max_len
    )


def words(rank=3, max_len=12):
    return letters(rank, max_len).map(Word.from_letters)


def random_word(rng, rank, max_len):
    n = rng.randint(0, max_len)
    return Word.from_letters([rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE = []  # (number, passed, detail) filled in by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}")
