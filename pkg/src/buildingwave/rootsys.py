"""Exact realizations of irreducible reduced root systems and their finite Weyl groups.

Roots, coroots, coweights and Weyl matrices are kept in exact rational
arithmetic (``fractions.Fraction``); the analytic layers read float mirrors
built lazily with numpy.  Lattice elements travel as integer coordinate
tuples: coweights in the fundamental-coweight basis, coroot vectors in the
simple-coroot basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]

# Full enumeration of W is refused above this order unless explicitly allowed
# (keeps E7/E8 out of casual paths; verification targets rank <= 4).
WEYL_ORDER_LIMIT = 10**6

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RootSystemError(ValueError):
    """Inadmissible Cartan data or an operation outside its domain."""


# --------------------------------------------------------------------------
# Cartan types
# --------------------------------------------------------------------------

_RANK_RANGE = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


def _weyl_order(family: str, rank: int) -> int:
    if family == "A":
        return math.factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * math.factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[rank]
    if family == "F":
        return 1152
    return 12  # G2


def _positive_count(family: str, rank: int) -> int:
    if family == "A":
        return rank * (rank + 1) // 2
    if family in ("B", "C"):
        return rank * rank
    if family == "D":
        return rank * (rank - 1)
    if family == "E":
        return {6: 36, 7: 63, 8: 120}[rank]
    if family == "F":
        return 24
    return 6  # G2


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        rng = _RANK_RANGE.get(self.family)
        if rng is None:
            raise RootSystemError(f"unknown family {self.family!r}")
        lo, hi = rng
        if self.rank < lo or (hi is not None and self.rank > hi):
            raise RootSystemError(f"rank {self.rank} out of range for family {self.family}")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse compact names like ``A2``, ``G2``, ``C3``."""
        text = text.strip().upper()
        if len(text) < 2 or not text[0].isalpha():
            raise RootSystemError(f"cannot parse Cartan type {text!r}")
        try:
            return cls(text[0], int(text[1:]))
        except ValueError as exc:
            raise RootSystemError(f"cannot parse Cartan type {text!r}") from exc

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


# --------------------------------------------------------------------------
# Lattice element wrappers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Coweight:
    """Element of the coweight lattice P, stored in the dual basis."""

    coords: tuple[int, ...]

    @property
    def dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def height(self) -> int:
        """Coordinate sum; on the dominant cone this is the natural size."""
        return sum(self.coords)

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Coweight") -> "Coweight":
        return Coweight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k: int) -> "Coweight":
        return Coweight(tuple(k * c for c in self.coords))


@dataclass(frozen=True)
class CorootVector:
    """Element of the coroot lattice Q, stored in the simple-coroot basis."""

    coords: tuple[int, ...]

    @property
    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def height(self) -> int:
        return sum(self.coords)


def cw(*coords: int) -> Coweight:
    return Coweight(tuple(int(c) for c in coords))


# --------------------------------------------------------------------------
# Exact linear algebra helpers
# --------------------------------------------------------------------------

def _dot(x: Iterable[Fraction], y: Iterable[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), _ZERO)


def _mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(_dot(row, v) for row in m)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _identity(n: int) -> Matrix:
    return tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))


def _invert(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(m)
    aug = [list(row) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise RootSystemError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = _ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# --------------------------------------------------------------------------
# Weyl group elements
# --------------------------------------------------------------------------

@dataclass(eq=False)
class WeylElement:
    """One element of W: exact matrix, lexicographically least reduced word."""

    matrix: Matrix
    word: tuple[int, ...]  # simple-reflection indices, 0-based
    length: int
    index: int
    perm: tuple[int, ...]  # action on the combined (+/-) root list


# --------------------------------------------------------------------------
# Ambient realizations (standard Euclidean constructions, identity Gram)
# --------------------------------------------------------------------------

def _simple_root_vectors(t: CartanType) -> tuple[int, list[list[Fraction]]]:
    f, r = t.family, t.rank
    F = Fraction

    def e(i: int, dim: int, c: Fraction = _ONE) -> list[Fraction]:
        v = [_ZERO] * dim
        v[i] = c
        return v

    def diff(i: int, j: int, dim: int) -> list[Fraction]:
        v = [_ZERO] * dim
        v[i], v[j] = _ONE, -_ONE
        return v

    if f == "A":
        dim = r + 1
        return dim, [diff(i, i + 1, dim) for i in range(r)]
    if f == "B":
        return r, [diff(i, i + 1, r) for i in range(r - 1)] + [e(r - 1, r)]
    if f == "C":
        return r, [diff(i, i + 1, r) for i in range(r - 1)] + [e(r - 1, r, F(2))]
    if f == "D":
        last = [_ZERO] * r
        last[r - 2], last[r - 1] = _ONE, _ONE
        return r, [diff(i, i + 1, r) for i in range(r - 1)] + [last]
    if f == "G":
        return 3, [
            [F(1), F(-1), _ZERO],
            [F(-2), F(1), F(1)],
        ]
    if f == "F":
        h = F(1, 2)
        return 4, [
            [_ZERO, _ONE, -_ONE, _ZERO],
            [_ZERO, _ZERO, _ONE, -_ONE],
            [_ZERO, _ZERO, _ZERO, _ONE],
            [h, -h, -h, -h],
        ]
    # E6/E7/E8, Bourbaki realization inside R^8.
    h = F(1, 2)
    alpha1 = [h, -h, -h, -h, -h, -h, -h, h]
    alpha2 = [_ONE, _ONE, _ZERO, _ZERO, _ZERO, _ZERO, _ZERO, _ZERO]
    rest = [diff(i + 1, i, 8) for i in range(1, 7)]  # e_{i+1} - e_i
    chain = [alpha1, alpha2] + rest
    return 8, chain[:r]


def _coroot(alpha: Vector) -> Vector:
    nn = _dot(alpha, alpha)
    return tuple(2 * a / nn for a in alpha)


def _reflection_matrix(alpha: Vector, coroot: Vector, dim: int) -> Matrix:
    return tuple(
        tuple((_ONE if a == b else _ZERO) - coroot[a] * alpha[b] for b in range(dim))
        for a in range(dim)
    )


# --------------------------------------------------------------------------
# Root datum
# --------------------------------------------------------------------------

@dataclass(eq=False)
class RootDatum:
    cartan_type: CartanType
    ambient_dim: int
    gram: Matrix
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    all_roots: tuple[Vector, ...]  # positives then matching negatives
    root_coords: tuple[tuple[int, ...], ...]  # simple-root coordinates
    coroot_coords: tuple[tuple[int, ...], ...]  # simple-coroot coordinates
    coroot_cw_coords: tuple[tuple[int, ...], ...]  # coweight-basis coords of each coroot
    heights: tuple[int, ...]
    coroot_heights: tuple[int, ...]
    highest_index: int
    marks: tuple[int, ...]
    fundamental_coweights: tuple[Vector, ...]
    rho: Vector
    rho_tilde: Vector
    h: int
    cartan_matrix: tuple[tuple[int, ...], ...]  # <alpha_i, coroot_j>
    dual_denominator: int
    dual_numerators: tuple[tuple[int, ...], ...]  # cartan^{-1} * dual_denominator
    weyl: tuple[WeylElement, ...]
    w0: int
    simple_reflection_indices: tuple[int, ...]
    simple_positions: tuple[int, ...]  # index of alpha_i within positive_roots
    simple_orbit_ids: tuple[int, ...]
    root_orbit_ids: tuple[int, ...]
    _index_by_perm: dict = field(default_factory=dict, repr=False)
    _orbit_cache: dict = field(default_factory=dict, repr=False)
    _cw_action: dict = field(default_factory=dict, repr=False)
    _np_cache: dict = field(default_factory=dict, repr=False)

    # -- basic queries ------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    @property
    def weyl_order(self) -> int:
        return len(self.weyl)

    @property
    def highest_root(self) -> Vector:
        return self.positive_roots[self.highest_index]

    def pair(self, x: Iterable[Fraction], y: Iterable[Fraction]) -> Fraction:
        x, y = tuple(x), tuple(y)
        if len(x) != self.ambient_dim or len(y) != self.ambient_dim:
            raise RootSystemError("dimension mismatch")
        return _dot(x, y)

    def coweight_vector(self, lam: Coweight) -> Vector:
        acc = [_ZERO] * self.ambient_dim
        for c, vec in zip(lam.coords, self.fundamental_coweights):
            if c:
                for a in range(self.ambient_dim):
                    acc[a] += c * vec[a]
        return tuple(acc)

    def vector_coords(self, v: Vector) -> tuple[Fraction, ...]:
        """Coweight-basis coordinates <v, alpha_i> of an ambient vector."""
        return tuple(_dot(v, alpha) for alpha in self.simple_roots)

    def pairing_with_root(self, lam: Coweight, root_index: int) -> int:
        """<lam, alpha> for a positive root, via its simple-root coordinates."""
        return sum(n * c for n, c in zip(self.root_coords[root_index], lam.coords))

    # -- integer Weyl action on coweight coordinates -------------------------

    def _coweight_action_matrix(self, w_index: int) -> tuple[tuple[int, ...], ...]:
        cached = self._cw_action.get(w_index)
        if cached is None:
            w = self.weyl[w_index]
            cols = []
            for vec in self.fundamental_coweights:
                image = _mat_vec(w.matrix, vec)
                col = tuple(int(_dot(image, alpha)) for alpha in self.simple_roots)
                cols.append(col)
            cached = tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))
            self._cw_action[w_index] = cached
        return cached

    def act_coweight(self, w_index: int, lam: Coweight) -> Coweight:
        m = self._coweight_action_matrix(w_index)
        return Coweight(tuple(sum(m[i][j] * lam.coords[j] for j in range(self.rank)) for i in range(self.rank)))

    def reflect_coweight(self, i: int, coords: tuple[int, ...]) -> tuple[int, ...]:
        ci = coords[i]
        if ci == 0:
            return coords
        col = tuple(self.cartan_matrix[j][i] for j in range(self.rank))
        return tuple(c - ci * col[j] for j, c in enumerate(coords))

    def dominant_coords(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        cur = coords
        while True:
            for i, c in enumerate(cur):
                if c < 0:
                    cur = self.reflect_coweight(i, cur)
                    break
            else:
                return cur

    # -- numpy mirrors -------------------------------------------------------

    def _np(self, key: str) -> np.ndarray:
        arr = self._np_cache.get(key)
        if arr is None:
            source = {
                "simple": self.simple_roots,
                "positive": self.positive_roots,
                "coroots": self.coroots,
                "coweights": self.fundamental_coweights,
            }
            if key in source:
                arr = np.array([[float(x) for x in v] for v in source[key]])
            elif key == "rho":
                arr = np.array([float(x) for x in self.rho])
            elif key == "rho_tilde":
                arr = np.array([float(x) for x in self.rho_tilde])
            elif key == "weyl":
                arr = np.array(
                    [[[float(x) for x in row] for row in w.matrix] for w in self.weyl]
                )
            else:
                raise KeyError(key)
            self._np_cache[key] = arr
        return arr

    @property
    def simple_np(self) -> np.ndarray:
        return self._np("simple")

    @property
    def positive_np(self) -> np.ndarray:
        return self._np("positive")

    @property
    def coroots_np(self) -> np.ndarray:
        return self._np("coroots")

    @property
    def coweights_np(self) -> np.ndarray:
        return self._np("coweights")

    @property
    def rho_np(self) -> np.ndarray:
        return self._np("rho")

    @property
    def rho_tilde_np(self) -> np.ndarray:
        return self._np("rho_tilde")

    @property
    def weyl_np(self) -> np.ndarray:
        return self._np("weyl")

    def coweight_np(self, lam: Coweight) -> np.ndarray:
        return np.asarray(lam.coords, dtype=float) @ self.coweights_np

    def orbit_np(self, lam: Coweight) -> np.ndarray:
        """Ambient float vectors of the W-orbit, in sorted coordinate order."""
        key = ("orbit_np", lam.coords)
        arr = self._np_cache.get(key)
        if arr is None:
            pts = orbit(self, lam)
            arr = np.array(pts, dtype=float) @ self.coweights_np
            self._np_cache[key] = arr
        return arr

    # -- group structure ------------------------------------------------------

    def element_index(self, matrix: Matrix) -> int:
        perm = _root_permutation(self.all_roots, matrix)
        try:
            return self._index_by_perm[perm]
        except KeyError:
            raise RootSystemError("matrix is not a Weyl element") from None

    def compose(self, i: int, j: int) -> int:
        """Index of w_i . w_j."""
        return self.element_index(_mat_mul(self.weyl[i].matrix, self.weyl[j].matrix))

    def inverse(self, i: int) -> int:
        m = self.weyl[i].matrix
        return self.element_index(tuple(zip(*m)))


def _root_permutation(all_roots: tuple[Vector, ...], matrix: Matrix) -> tuple[int, ...]:
    index = {v: k for k, v in enumerate(all_roots)}
    return tuple(index[_mat_vec(matrix, v)] for v in all_roots)


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------

def build_root_system(t: CartanType, *, allow_large: bool = False) -> RootDatum:
    """Realize a reduced irreducible root system with fully enumerated Weyl group.

    Raises ``RootSystemError`` for inadmissible types, and refuses Weyl groups
    of order above ``WEYL_ORDER_LIMIT`` unless ``allow_large`` is set.
    """
    expected_order = _weyl_order(t.family, t.rank)
    if expected_order > WEYL_ORDER_LIMIT and not allow_large:
        raise RootSystemError(
            f"|W({t})| = {expected_order} exceeds the enumeration guard; "
            "pass allow_large=True to override"
        )

    dim, simple_lists = _simple_root_vectors(t)
    simple = tuple(tuple(v) for v in simple_lists)
    r = t.rank

    simple_coroots = tuple(_coroot(a) for a in simple)
    gens = tuple(_reflection_matrix(a, ac, dim) for a, ac in zip(simple, simple_coroots))

    # Closure of the simple roots under simple reflections gives all of Phi.
    roots: set[Vector] = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for g in gens:
            image = _mat_vec(g, beta)
            if image not in roots:
                roots.add(image)
                frontier.append(image)

    gram_simple = tuple(tuple(_dot(a, b) for b in simple) for a in simple)
    gram_inv = _invert(gram_simple)

    def simple_coords(beta: Vector) -> tuple[int, ...]:
        pairings = tuple(_dot(beta, a) for a in simple)
        coords = _mat_vec(gram_inv, pairings)
        out = []
        for c in coords:
            if c.denominator != 1:
                raise RootSystemError("non-integral root coordinate")
            out.append(int(c))
        return tuple(out)

    decorated = []
    for beta in roots:
        coords = simple_coords(beta)
        if all(c >= 0 for c in coords):
            decorated.append((sum(coords), coords, beta))
        elif not all(c <= 0 for c in coords):
            raise RootSystemError("root with mixed-sign coordinates")
    decorated.sort(key=lambda item: (item[0], item[1]))
    if len(decorated) != _positive_count(t.family, t.rank):
        raise RootSystemError("positive root count mismatch")

    positive = tuple(item[2] for item in decorated)
    root_coords = tuple(item[1] for item in decorated)
    heights = tuple(item[0] for item in decorated)
    coroots = tuple(_coroot(b) for b in positive)
    all_roots = positive + tuple(tuple(-x for x in b) for b in positive)

    highest_index = len(positive) - 1
    marks = root_coords[highest_index]

    # Coweights: dual basis to the simple roots inside span(Phi).
    coweights = tuple(
        tuple(
            sum((gram_inv[k][i] * simple[k][a] for k in range(r)), _ZERO)
            for a in range(dim)
        )
        for i in range(r)
    )
    rho = tuple(sum((lam[a] for lam in coweights), _ZERO) for a in range(dim))
    rho_tilde = tuple(sum((b[a] for b in positive), _ZERO) / 2 for a in range(dim))

    cartan = tuple(
        tuple(int(2 * _dot(simple[i], simple[j]) / _dot(simple[j], simple[j])) for j in range(r))
        for i in range(r)
    )
    cartan_frac = tuple(tuple(Fraction(x) for x in row) for row in cartan)
    cartan_inv = _invert(cartan_frac)
    denom = 1
    for row in cartan_inv:
        for x in row:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    dual_numerators = tuple(tuple(int(x * denom) for x in row) for row in cartan_inv)

    def coroot_basis_coords(vec: Vector) -> tuple[int, ...]:
        cw_coords = tuple(_dot(vec, a) for a in simple)
        out = []
        for i in range(r):
            num = sum(dual_numerators[i][j] * cw_coords[j] for j in range(r))
            if num % denom:
                raise RootSystemError("non-integral coroot coordinate")
            out.append(int(num // denom))
        return tuple(out)

    coroot_coords = tuple(coroot_basis_coords(c) for c in coroots)
    coroot_heights = tuple(sum(c) for c in coroot_coords)
    coroot_cw = tuple(tuple(int(_dot(c, a)) for a in simple) for c in coroots)
    h = sum(coroot_heights)

    weyl, w0, index_by_perm = _enumerate_weyl(all_roots, gens, dim, expected_order)

    positive_index = {v: k for k, v in enumerate(positive)}
    simple_positions = tuple(positive_index[a] for a in simple)
    gen_indices = tuple(
        index_by_perm[_root_permutation(all_roots, g)] for g in gens
    )

    simple_orbit_ids, root_orbit_ids = _root_orbits(all_roots, gens, len(positive), simple_positions)

    return RootDatum(
        cartan_type=t,
        ambient_dim=dim,
        gram=_identity(dim),
        simple_roots=simple,
        positive_roots=positive,
        coroots=coroots,
        all_roots=all_roots,
        root_coords=root_coords,
        coroot_coords=coroot_coords,
        coroot_cw_coords=coroot_cw,
        heights=heights,
        coroot_heights=coroot_heights,
        highest_index=highest_index,
        marks=marks,
        fundamental_coweights=coweights,
        rho=rho,
        rho_tilde=rho_tilde,
        h=h,
        cartan_matrix=cartan,
        dual_denominator=denom,
        dual_numerators=dual_numerators,
        weyl=weyl,
        w0=w0,
        simple_reflection_indices=gen_indices,
        simple_positions=simple_positions,
        simple_orbit_ids=simple_orbit_ids,
        root_orbit_ids=root_orbit_ids,
        _index_by_perm=index_by_perm,
    )


def _enumerate_weyl(
    all_roots: tuple[Vector, ...],
    gens: tuple[Matrix, ...],
    dim: int,
    expected_order: int,
):
    """Breadth-first closure with lexicographically least reduced words.

    Levels are processed in word-lex order, so the first word reaching an
    element is its lex-least reduced word (prefixes of lex-least words are
    lex-least).
    """
    gen_perms = [_root_permutation(all_roots, g) for g in gens]
    identity = _identity(dim)
    id_perm = tuple(range(len(all_roots)))

    elements: list[WeylElement] = [WeylElement(identity, (), 0, 0, id_perm)]
    index_by_perm = {id_perm: 0}
    level = [0]
    length = 0
    while level:
        length += 1
        nxt = []
        for idx in level:
            el = elements[idx]
            for i, g in enumerate(gens):
                perm = tuple(el.perm[p] for p in gen_perms[i])
                if perm in index_by_perm:
                    continue
                matrix = _mat_mul(el.matrix, g)
                new = WeylElement(matrix, el.word + (i,), length, len(elements), perm)
                index_by_perm[perm] = new.index
                elements.append(new)
                nxt.append(new.index)
        level = nxt
    if len(elements) != expected_order:
        raise RootSystemError("Weyl enumeration did not close at the expected order")
    w0 = max(elements, key=lambda e: e.length).index
    return tuple(elements), w0, index_by_perm


def _root_orbits(all_roots, gens, n_positive, simple_positions):
    parent = list(range(len(all_roots)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gen_perms = [_root_permutation(all_roots, g) for g in gens]
    for perm in gen_perms:
        for a, b in enumerate(perm):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    # Also fold each negative root onto its positive mate (same W-orbit since
    # -alpha = s_alpha(alpha)).
    for k in range(n_positive):
        ra, rb = find(k), find(k + n_positive)
        if ra != rb:
            parent[ra] = rb
    labels: dict[int, int] = {}
    ids = []
    for k in range(len(all_roots)):
        root = find(k)
        ids.append(labels.setdefault(root, len(labels)))
    positive_ids = tuple(ids[:n_positive])
    simple_ids = tuple(positive_ids[k] for k in simple_positions)
    return simple_ids, positive_ids


@lru_cache(maxsize=None)
def root_system(name: str, *, allow_large: bool = False) -> RootDatum:
    """Cached convenience constructor: ``root_system("A2")``."""
    return build_root_system(CartanType.parse(name), allow_large=allow_large)


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------

def pairing(d: RootDatum, x: Iterable[Fraction], y: Iterable[Fraction]) -> Fraction:
    return d.pair(x, y)


def dominant_representative(d: RootDatum, v: Vector) -> tuple[Vector, WeylElement]:
    """Dominant W-image of an ambient vector together with a witness w, v+ = w.v."""
    current = tuple(v)
    matrix = _identity(d.ambient_dim)
    steps = 0
    while True:
        for i, alpha in enumerate(d.simple_roots):
            if _dot(current, alpha) < 0:
                g = d.weyl[d.simple_reflection_indices[i]].matrix
                current = _mat_vec(g, current)
                matrix = _mat_mul(g, matrix)
                steps += 1
                break
        else:
            return current, d.weyl[d.element_index(matrix)]
        if steps > len(d.positive_roots) * d.weyl_order + 1:
            raise RootSystemError("dominant reduction failed to terminate")


def orbit(d: RootDatum, lam: Coweight) -> tuple[tuple[int, ...], ...]:
    """The W-orbit of a coweight as sorted integer coordinate tuples."""
    cached = d._orbit_cache.get(lam.coords)
    if cached is not None:
        return cached
    seen = {lam.coords}
    stack = [lam.coords]
    while stack:
        cur = stack.pop()
        for i in range(d.rank):
            img = d.reflect_coweight(i, cur)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    result = tuple(sorted(seen))
    d._orbit_cache[lam.coords] = result
    return result


def stabilizer_size(d: RootDatum, lam: Coweight) -> int:
    return d.weyl_order // len(orbit(d, lam))


def stabilizer_indices(d: RootDatum, lam: Coweight) -> tuple[int, ...]:
    return tuple(i for i in range(d.weyl_order) if d.act_coweight(i, lam) == lam)


def coroot_coordinates_int(d: RootDatum, coords: tuple[int, ...]) -> tuple[int, ...] | None:
    """Simple-coroot coordinates of a coweight (integer path), or None if outside Q."""
    denom = d.dual_denominator
    out = []
    for row in d.dual_numerators:
        n = sum(a * c for a, c in zip(row, coords))
        if n % denom:
            return None
        out.append(n // denom)
    return tuple(out)


def coroot_coordinates(d: RootDatum, diff: Coweight) -> tuple[Fraction, ...] | None:
    """Simple-coroot coordinates of a coweight difference, or None if non-integral."""
    ints = coroot_coordinates_int(d, diff.coords)
    if ints is None:
        return None
    return tuple(Fraction(n) for n in ints)


def dominance_leq(d: RootDatum, mu: Coweight, lam: Coweight) -> bool:
    """mu <= lam in dominance order: lam - mu a nonnegative integer coroot sum."""
    coords = coroot_coordinates_int(d, tuple(a - b for a, b in zip(lam.coords, mu.coords)))
    return coords is not None and all(c >= 0 for c in coords)


def dominance_leq_cone(d: RootDatum, mu: Coweight, lam: Coweight) -> bool:
    """Cone version: lam - mu a nonnegative rational coroot combination."""
    diff = lam - mu
    nums = [
        sum(d.dual_numerators[i][j] * diff.coords[j] for j in range(d.rank))
        for i in range(d.rank)
    ]
    return all(n >= 0 for n in nums)


def enumerate_dominant_below(d: RootDatum, lam: Coweight) -> list[Coweight]:
    """All dominant mu with mu <= lam, by saturated breadth-first descent."""
    if not lam.dominant:
        raise RootSystemError("enumerate_dominant_below requires a dominant coweight")
    seen = {lam.coords}
    queue = [lam.coords]
    while queue:
        cur = queue.pop()
        for cw_coords in d.coroot_cw_coords:
            cand = tuple(c - a for c, a in zip(cur, cw_coords))
            dom = d.dominant_coords(cand)
            if dom in seen:
                continue
            if dominance_leq(d, Coweight(dom), lam):
                seen.add(dom)
                queue.append(dom)
    return [Coweight(c) for c in sorted(seen)]


def star(d: RootDatum, lam: Coweight) -> Coweight:
    """The contragredient involution -w0.lam."""
    image = d.act_coweight(d.w0, lam)
    return Coweight(tuple(-c for c in image.coords))


def weyl_length_by_inversions(d: RootDatum, w_index: int) -> int:
    """Number of positive roots sent negative; equals word length."""
    n = len(d.positive_roots)
    perm = d.weyl[w_index].perm
    return sum(1 for k in range(n) if perm[k] >= n)


def inversion_root_indices(d: RootDatum, w_index: int) -> tuple[int, ...]:
    n = len(d.positive_roots)
    perm = d.weyl[w_index].perm
    return tuple(k for k in range(n) if perm[k] >= n)


def datum_summary(d: RootDatum) -> dict:
    """JSON-ready summary used by the ``info`` CLI subcommand (rootsys-v1)."""

    def frac(v):
        return [str(x) for x in v]

    return {
        "schema": "rootsys-v1",
        "cartan_type": str(d.cartan_type),
        "rank": d.rank,
        "ambient_dim": d.ambient_dim,
        "weyl_order": d.weyl_order,
        "positive_root_count": len(d.positive_roots),
        "h": d.h,
        "marks": list(d.marks),
        "simple_roots": [frac(v) for v in d.simple_roots],
        "positive_roots": [frac(v) for v in d.positive_roots],
        "positive_root_coords": [list(c) for c in d.root_coords],
        "coroots": [frac(v) for v in d.coroots],
        "coroot_heights": list(d.coroot_heights),
        "fundamental_coweights": [frac(v) for v in d.fundamental_coweights],
        "rho": frac(d.rho),
        "rho_coords": [1] * d.rank,
        "w0_word": list(d.weyl[d.w0].word),
        "simple_orbit_ids": list(d.simple_orbit_ids),
    }
