# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Low power abelian groups.

The low power abelian group of order n is the direct sum of one cyclic group
of prime order per prime factor of n, counted with multiplicity. Such groups
are closed under direct sums and subgroups, and two of them are isomorphic
exactly when their orders agree, so a sorted multiset of primes is all the
bookkeeping needed.

Example Usage:
>>> lowpower(12)
LowPowerGroup(primes=(2, 2, 3))
>>> lp_quotient(lowpower(12), lowpower(4)).order
3
"""

from collections import Counter, namedtuple
import math

from sympy import factorint, isprime

from .errors import PreconditionError


class NotDivisible(PreconditionError):
    """raised if a low power quotient is asked for a non-subgroup"""

    def __init__(self, dividend, divisor):
        super().__init__(
            "L(%d) is not a subgroup of L(%d)" % (divisor.order, dividend.order)
        )
        self.dividend = dividend
        self.divisor = divisor


class LowPowerGroup(namedtuple("LowPowerGroup", ["primes"])):
    """direct sum of C_p over a sorted multiset of primes"""

    __slots__ = ()

    def __new__(cls, primes=()):
        primes = tuple(sorted(int(p) for p in primes))
        for p in primes:
            if not isprime(p):
                raise PreconditionError("%d is not a prime" % p)
        return super().__new__(cls, primes)

    @property
    def order(self):
        return math.prod(self.primes) if self.primes else 1

    def is_trivial(self):
        return not self.primes

    def to_json(self):
        return {"order": self.order, "primes": list(self.primes)}


TRIVIAL = LowPowerGroup(())


def lowpower(n):
    """
    the low power abelian group of order n

    Raises
    ------
    PreconditionError
        if n is not a positive integer.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise PreconditionError("low power groups need a positive integer order, got %r" % n)
    primes = []
    for prime, count in sorted(factorint(int(n)).items()):
        primes.extend([prime] * count)
    return LowPowerGroup(primes)


def lp_sum(*groups):
    """direct sum, the union of the prime multisets"""
    primes = []
    for group in groups:
        primes.extend(group.primes)
    return LowPowerGroup(primes)


def lp_quotient(a, b):
    """
    a / b, the multiset difference

    Raises
    ------
    NotDivisible
        unless b's multiset is contained in a's.
    """
    remaining = Counter(a.primes)
    remaining.subtract(b.primes)
    if any(count < 0 for count in remaining.values()):
        raise NotDivisible(a, b)
    return LowPowerGroup(remaining.elements())


def lp_iso(a, b):
    """isomorphism of low power groups is equality of orders"""
    return a.order == b.order


def lp_difference(a, b):
    """
    primes in excess on either side

    Returns
    -------
    onlyA, onlyB : tuple of int
        sorted multisets; both empty iff a and b are isomorphic.
    """
    left, right = Counter(a.primes), Counter(b.primes)
    return tuple(sorted((left - right).elements())), tuple(sorted((right - left).elements()))
