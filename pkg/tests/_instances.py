"""Seeded random instances shared by the unit and acceptance suites."""

from random import Random

from okounkov import linalg
from okounkov.geomcore import LinearSubspace
from okounkov.semigroup import GradedSemigroup


def subspace_instances(count, seed=7):
    """(Γ, L) pairs with L spanned by an interior point of Σ(Γ) and random
    {-1, 0, 1} vectors.  Every instance is yielded; callers skip those whose
    hypotheses fail."""
    rng = Random(seed)
    made = 0
    while made < count:
        n = rng.choice([2, 3, 3, 4])
        gens = [tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(rng.randint(n, n + 2))]
        gens = [g for g in gens if any(g)]
        if not gens or linalg.rank(gens) < n:
            continue
        w = [sum(x[i] for x in gens) for i in range(n)]
        k = rng.randint(1, n - 1)
        basis = [w] + [[rng.randint(-1, 1) for _ in range(n)] for _ in range(k - 1)]
        if linalg.rank(basis) < k:
            continue
        made += 1
        yield GradedSemigroup(n - 1, 1, generators=gens), LinearSubspace.span(basis, n)
