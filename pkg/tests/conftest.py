from fractions import Fraction

import pytest

from assouadproj.ifs import IFS1D, IFS2D, Angle, Similarity1D, Similarity2D


def sierpinski(c=Fraction(1, 4)) -> IFS2D:
    return IFS2D(tuple(Similarity2D(c, Angle(), False, t)
                       for t in ((0, 0), (0, 1 - c), (1 - c, 0))))


def dense_pair(rho=Fraction(1, 3), alpha=1.0) -> IFS2D:
    rot = Angle.irrational_radians(alpha)
    return IFS2D((Similarity2D(rho, rot, False, (0, 0)), Similarity2D(rho, rot, False, (1, 0))))


def line_ifs(*maps) -> IFS1D:
    return IFS1D(tuple(Similarity1D(Fraction(r), Fraction(t)) for r, t in maps))


@pytest.fixture
def f_quarter() -> IFS2D:
    return sierpinski()


@pytest.fixture
def dense() -> IFS2D:
    return dense_pair()


@pytest.fixture
def cantor() -> IFS1D:
    return line_ifs(("1/4", 0), ("1/4", "3/4"))


@pytest.fixture
def segment() -> IFS1D:
    return line_ifs(("1/2", 0), ("1/2", "1/2"))


from hypothesis import settings  # noqa: E402

# Seeded harness: every law runs at least 200 generated cases, reproducibly.
settings.register_profile("seeded", max_examples=200, deadline=None, derandomize=True, print_blob=True)
settings.load_profile("seeded")
