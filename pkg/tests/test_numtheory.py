import pytest

from lnc.numtheory import (
    divisors,
    factorize,
    is_prime,
    is_prime_power,
    mersenne_is_prime,
    multiplicative_order,
    primes_below,
)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}
    for n in range(2, 32):
        assert is_prime(n) == (n in primes)
    assert not is_prime(1)
    assert not is_prime(0)


def test_is_prime_known_large():
    assert is_prime(2**19 - 1)  # 524287
    assert is_prime(2**31 - 1)
    assert not is_prime(2**23 - 1)  # 47 * 178481
    assert is_prime(2**61 - 1)


def test_primes_below():
    assert primes_below(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_below(2) == []


def test_factorize_complete():
    fac, complete = factorize(2**9 - 1)
    assert complete and fac == {7: 1, 73: 1}
    fac, complete = factorize(9999360)
    assert complete
    n = 1
    for p, e in fac.items():
        assert is_prime(p)
        n *= p**e
    assert n == 9999360


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(2**19 - 1) == [1, 2**19 - 1]


def test_multiplicative_order():
    # ord_p(2) values quoted for small primes: 3->2, 5->4, 7->3, 11->10, 13->12, 17->8, 19->18, 23->11
    expected = {3: 2, 5: 4, 7: 3, 11: 10, 13: 12, 17: 8, 19: 18, 23: 11}
    for p, o in expected.items():
        assert multiplicative_order(2, p) == o


def test_is_prime_power():
    assert is_prime_power(8) == (2, 3)
    assert is_prime_power(9) == (3, 2)
    assert is_prime_power(7) == (7, 1)
    assert is_prime_power(12) is None
    assert is_prime_power(1) is None


def test_mersenne_table():
    assert mersenne_is_prime(13)
    assert mersenne_is_prime(17)
    assert not mersenne_is_prime(4)
    assert not mersenne_is_prime(9)
    assert not mersenne_is_prime(11)  # 2047 = 23 * 89
    with pytest.raises(ValueError):
        mersenne_is_prime(131)
