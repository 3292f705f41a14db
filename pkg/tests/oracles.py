"""Brute-force reference implementations.

Nothing here imports the package. Everything works on plain tuples with
``Fraction`` arithmetic and recomputes from scratch, trading speed for
obviousness.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product


def share(d, theta, profile, i):
    """Utility of 0-based player ``i``."""
    slot = profile[i]
    rivals = sum(Fraction(theta[k]) for k in range(len(profile)) if profile[k] == slot)
    return Fraction(d[slot - 1]) * Fraction(theta[i]) / rivals


def moved(profile, i, slot):
    p = list(profile)
    p[i] = slot
    return tuple(p)


def profitable_moves(d, theta, profile):
    """Every ``(player, slot, gain)`` with positive gain, players 0-based."""
    out = []
    for i in range(len(profile)):
        here = share(d, theta, profile, i)
        for j in range(1, len(d) + 1):
            if j != profile[i]:
                gain = share(d, theta, moved(profile, i, j), i) - here
                if gain > 0:
                    out.append((i, j, gain))
    return out


def is_nash(d, theta, profile):
    return not profitable_moves(d, theta, profile)


def nash_set(d, theta):
    return [p for p in product(range(1, len(d) + 1), repeat=len(theta)) if is_nash(d, theta, p)]


def counts(profile, m):
    return tuple(sum(1 for a in profile if a == j) for j in range(1, m + 1))


def backward_induction(d, theta, order, prefix=None):
    """Equilibrium outcome of the sequential game, carrying full profiles.

    ``order`` lists 1-based players; each picks the slot maximizing its own
    final share, lowest slot on ties.
    """
    n = len(theta)
    prefix = prefix or {}
    if len(prefix) == n:
        return tuple(prefix[i] for i in range(1, n + 1))
    mover = order[len(prefix)]
    best = best_value = None
    for j in range(1, len(d) + 1):
        outcome = backward_induction(d, theta, order, {**prefix, mover: j})
        v = share(d, theta, outcome, mover - 1)
        if best_value is None or v > best_value:
            best, best_value = outcome, v
    return best


def subset_sum_split(weights):
    """Can the weights be split into two groups of equal total? (all subsets)"""
    total = sum(weights)
    idx = range(len(weights))
    return any(
        2 * sum(weights[k] for k in chosen) == total
        for r in range(len(weights) + 1)
        for chosen in combinations(idx, r)
    )


def studio_payoff(d, studios, joint, i):
    total = Fraction(0)
    for s, films in enumerate(studios):
        if s != i:
            continue
        for f, theta in enumerate(films):
            slot = joint[s][f]
            load = sum(
                Fraction(t)
                for s2, films2 in enumerate(studios)
                for f2, t in enumerate(films2)
                if joint[s2][f2] == slot
            )
            total += Fraction(d[slot - 1]) * Fraction(theta) / load
    return total


def studio_best_response(d, studios, joint, i):
    """Lexicographically first optimal placement of 0-based studio ``i``."""
    best = best_value = None
    for slots in product(range(1, len(d) + 1), repeat=len(studios[i])):
        trial = list(joint)
        trial[i] = slots
        v = studio_payoff(d, studios, trial, i)
        if best_value is None or v > best_value:
            best, best_value = slots, v
    return best, best_value


def carry_share(d, theta, profile, i):
    """Release-slot plus next-slot earnings; a film is live in r and r+1."""
    m = len(d)
    r = profile[i]
    total = Fraction(0)
    for slot in (r, r + 1):
        if slot > m:
            continue
        live = sum(Fraction(theta[k]) for k in range(len(profile)) if profile[k] in (slot, slot - 1))
        total += Fraction(d[slot - 1]) * Fraction(theta[i]) / live
    return total


def carry_profitable_moves(d, theta, profile):
    out = []
    for i in range(len(profile)):
        here = carry_share(d, theta, profile, i)
        for j in range(1, len(d) + 1):
            if j != profile[i] and carry_share(d, theta, moved(profile, i, j), i) > here:
                out.append((i, j))
    return out


def carry_potential(d, profile):
    """Sum over slots of d_j times the harmonic number of its live count."""
    phi = Fraction(0)
    for j in range(1, len(d) + 1):
        live = sum(1 for a in profile if a in (j, j - 1))
        phi += Fraction(d[j - 1]) * sum(Fraction(1, k) for k in range(1, live + 1))
    return phi


def random_game(rng: random.Random, n_max=6, m_max=4, homogeneous=False, hi=20):
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    d = tuple(rng.randint(1, hi) for _ in range(m))
    theta = (1,) * n if homogeneous else tuple(rng.randint(1, hi) for _ in range(n))
    return d, theta
