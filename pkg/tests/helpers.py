"""Independent oracles used by the test suite.

These deliberately avoid the code paths they check: the tree is built as an
explicit adjacency structure, dominance sets are enumerated by brute force,
and spherical values on the tree come from the radial three-term recursion.
"""

from __future__ import annotations

from fractions import Fraction

from buildingwave.rootsys import Coweight, RootDatum


def build_regular_tree(q: int, radius: int) -> list[list[int]]:
    """Adjacency lists of the (q+1)-regular tree out to the given radius."""
    adjacency: list[list[int]] = [[]]
    depth = [0]
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for node in frontier:
            for _ in range(q + 1 - len(adjacency[node])):
                child = len(adjacency)
                adjacency.append([node])
                depth.append(depth[node] + 1)
                adjacency[node].append(child)
                nxt.append(child)
        frontier = nxt
    return adjacency


def tree_sphere_sizes(q: int, radius: int) -> list[int]:
    """Exhaustive sphere counts |{y : d(o, y) = m}| via breadth-first search."""
    adjacency = build_regular_tree(q, radius)
    dist = {0: 0}
    frontier = [0]
    counts = [0] * (radius + 1)
    counts[0] = 1
    while frontier:
        nxt = []
        for node in frontier:
            for nb in adjacency[node]:
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    if dist[nb] <= radius:
                        counts[dist[nb]] += 1
                        nxt.append(nb)
        frontier = nxt
    return counts


def tree_spherical_recursion(q: int, gamma: complex, radius: int) -> list[complex]:
    """Radial eigenfunction of the nearest-neighbour averaging operator.

    phi(0) = 1, phi(1) = gamma, and for n >= 1
    (q+1) gamma phi(n) = phi(n-1) + q phi(n+1).
    """
    phi = [1.0 + 0j, complex(gamma)]
    for _ in range(1, radius):
        phi.append(((q + 1) * gamma * phi[-1] - phi[-2]) / q)
    return phi[: radius + 1]


def tree_wave_closed_form(q: int, k: int, m: int) -> float:
    """Frozen closed form of the rank-one radial wave value for k >= 1."""
    if m > k or (k - m) % 2:
        return 0.0
    if k == m:
        return q ** (-m / 2)
    return q ** (-m / 2) * (1 - q) * q ** (-(k - m) / 2)


def _rho_tilde_pairing(d: RootDatum, lam: Coweight) -> Fraction:
    vec = d.coweight_vector(lam)
    return sum((a * b for a, b in zip(vec, d.rho_tilde)), Fraction(0))


def brute_dominant_below(d: RootDatum, lam: Coweight) -> set[tuple[int, ...]]:
    """All dominant mu <= lam by direct search over coroot combinations.

    Every simple coroot pairs to 1 with the half-sum of positive roots, so a
    dominant difference cannot use more than <lam, rho_tilde> coroots total.
    """
    budget = int(_rho_tilde_pairing(d, lam))
    simple_coroot_cw = [d.coroot_cw_coords[d.simple_positions[i]] for i in range(d.rank)]
    found: set[tuple[int, ...]] = set()

    def rec(i: int, remaining: tuple[int, ...], left: int):
        if i == d.rank:
            if all(c >= 0 for c in remaining):
                found.add(remaining)
            return
        vec = simple_coroot_cw[i]
        for b in range(left + 1):
            rec(
                i + 1,
                tuple(x - b * y for x, y in zip(remaining, vec)),
                left - b,
            )

    rec(0, lam.coords, budget)
    return found


def brute_coroot_partitions(d: RootDatum, coords: tuple[int, ...]) -> int:
    """Count solutions of sum j_alpha coroot_alpha = coords by box search."""
    vectors = d.coroot_coords
    count = 0

    def rec(i: int, rem: tuple[int, ...]):
        nonlocal count
        if i == len(vectors):
            if all(x == 0 for x in rem):
                count += 1
            return
        vec = vectors[i]
        cap = min((rem[k] // vec[k] for k in range(d.rank) if vec[k]))
        for j in range(cap + 1):
            rec(i + 1, tuple(rem[k] - j * vec[k] for k in range(d.rank)))

    rec(0, coords)
    return count
