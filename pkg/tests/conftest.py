from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kproj.scalar import Scalar, euler_phi

settings.register_profile("kproj", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kproj")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, order: int = 1):
    coords = draw(st.lists(small_fractions, min_size=euler_phi(order), max_size=euler_phi(order)))
    return Scalar(coords, order)


def rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


# criterion number -> (status, description, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, desc, detail = ACCEPTANCE[n]
        line = f"criterion {n:2d}: {status}  {desc}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
