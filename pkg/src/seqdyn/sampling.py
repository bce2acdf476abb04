"""Seeded random rational sampling for verification checks.

The PRNG is Python's ``random.Random`` (Mersenne Twister MT19937) driven
by an explicit integer seed; the seed is recorded in every report, so all
sampled checks replay bit-exactly.  Seeds are mandatory wherever sampling
happens — there is no implicit entropy anywhere in the library.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence

from .seqspace import Domain, FiniteSeq

RNG_NAME = "MT19937"

NUMERATOR_BOUND = 9
DENOMINATOR_BOUND = 9


def make_rng(seed: int) -> random.Random:
    return random.Random(int(seed))


def sample_rational(rng: random.Random, allow_zero: bool = True) -> Fraction:
    num = rng.randint(-NUMERATOR_BOUND, NUMERATOR_BOUND)
    if not allow_zero:
        while num == 0:
            num = rng.randint(-NUMERATOR_BOUND, NUMERATOR_BOUND)
    den = rng.randint(1, DENOMINATOR_BOUND)
    return Fraction(num, den)


def sample_coefficients(rng: random.Random, count: int,
                        unit_index: Optional[int] = None) -> List[Fraction]:
    """Random coefficient vector, optionally pinning one entry to exactly 1."""
    coeffs = [sample_rational(rng) for _ in range(count)]
    if unit_index is not None:
        coeffs[unit_index] = Fraction(1)
    return coeffs


def sample_vector(rng: random.Random, indices: Sequence[int],
                  domain: Domain = Domain.UNILATERAL,
                  ensure_nonzero: bool = False) -> FiniteSeq:
    entries = {k: sample_rational(rng) for k in indices}
    vec = FiniteSeq(entries, domain)
    if ensure_nonzero and vec.is_zero() and indices:
        k = rng.choice(list(indices))
        entries[k] = sample_rational(rng, allow_zero=False)
        vec = FiniteSeq(entries, domain)
    return vec
