import math

import pytest

from ppra.arith import psi_prefix, sieve_lambda


def lambda_by_trial_division(n):
    """Von Mangoldt value by factoring n directly."""
    if n < 2:
        return 0.0
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
        p += 1
    return math.log(n)


@pytest.fixture(scope="session")
def small_table():
    return sieve_lambda(10**4)


@pytest.fixture(scope="session")
def small_psi(small_table):
    return psi_prefix(small_table)
