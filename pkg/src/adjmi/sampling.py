"""Random instance generators for property tests and benchmarks."""


from adjmi.boolean import BooleanFunction
from adjmi.core import JointDistribution


def random_joint(rng, nx, ny, density=0.6):
    """Joint with a random support in which every row and column has an entry.

    ``density`` is the probability of keeping each cell before the row and
    column repairs; kept cells get Exponential(1) weights.
    """
    mask = rng.random((nx, ny)) < density
    for x in range(nx):
        if not mask[x].any():
            mask[x, rng.integers(ny)] = True
    for y in range(ny):
        if not mask[:, y].any():
            mask[rng.integers(nx), y] = True
    w = rng.exponential(size=(nx, ny)) * mask
    return JointDistribution(w / w.sum())


def random_boolean(rng, n):
    return BooleanFunction(n, rng.choice([-1.0, 1.0], size=1 << n))
