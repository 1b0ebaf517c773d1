import pathlib

import pytest

from prime_oracle.numtheory import primes_up_to

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def primes_2e6():
    """Primes to 2e6: enough for the million-threshold diagnostics plus the
    next prime after any stage checkpoint."""
    return primes_up_to(2_000_000)


@pytest.fixture(scope="session")
def primes_small():
    return primes_up_to(10_000)


@pytest.fixture(scope="session")
def candidate_exponent_file():
    return DATA_DIR / "candidate_exponents.txt"
