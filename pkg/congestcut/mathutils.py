"""Small integer routines shared by the simulator and the algorithms.

Every asymptotic quantity of the algorithm (word size, the square-root
thresholds of the decomposition, the polylogarithmic repetition counts) is
instantiated through these helpers, so that all modules round the same way.
"""

from math import ceil, isqrt, log2

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


def ceil_log2(x: int) -> int:
    """Smallest k such that 2**k >= x.

    Args:
        x: a positive integer

    Returns:
        ceil(log2(x)), 0 for x == 1

    >>> ceil_log2(1), ceil_log2(2), ceil_log2(5), ceil_log2(8)
    (0, 1, 3, 3)
    """
    if x < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {x}")
    return (x - 1).bit_length()


def word_bits(n: int) -> int:
    """Bits of one message word for an n-vertex network: ceil(log2(n+1)).

    >>> word_bits(1), word_bits(7), word_bits(8)
    (1, 3, 4)
    """
    return max(1, ceil_log2(n + 1))


def ceil_sqrt(x: int) -> int:
    """Smallest s such that s*s >= x.

    >>> ceil_sqrt(9), ceil_sqrt(10), ceil_sqrt(1)
    (3, 4, 1)
    """
    if x <= 0:
        return 0
    s = isqrt(x)
    return s if s * s == x else s + 1


def log2_power(n: int, p: float) -> int:
    """ceil((log2 n) ** p), at least 1.

    Args:
        n: problem size
        p: exponent

    Returns:
        the rounded polylogarithm

    >>> log2_power(16, 2)
    16
    >>> log2_power(1, 2)
    1
    """
    if n <= 1:
        return 1
    return max(1, ceil(log2(n) ** p - 1e-9))


def log_words(x: int, bits: int) -> int:
    """Number of words of `bits` bits needed to carry the integer x.

    The sign, if any, takes one extra bit. Zero still occupies one word.

    >>> log_words(0, 4), log_words(15, 4), log_words(16, 4), log_words(-15, 4)
    (1, 1, 2, 2)
    """
    width = abs(x).bit_length() + (1 if x < 0 else 0)
    return max(1, -(-width // bits))
