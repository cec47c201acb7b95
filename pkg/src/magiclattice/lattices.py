"""Lattice data and exact shell enumeration for E8, BW16 and E6.

A shell is the full set of lattice vectors of a given square norm.  The
enumerator runs a depth-first branch-and-bound over the coefficient
lattice using an exact LDL^T decomposition of the Gram matrix; after
clearing denominators every bound test is integer arithmetic, so no
solution can be lost to rounding.  A brute-force box scan over the
coordinate bounds is provided as an independent cross-check.

E8 and BW16 live in R^8 and R^16 with half-integer coordinates; their
ambient vectors are stored doubled (scale 2) so that every coordinate is
an integer.  E6 lives in C^3 over the Eisenstein integers and is
enumerated through its rational 6-dimensional real form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .exact import EisensteinInt, THETA

DEFAULT_NODE_BUDGET = 10**10
CACHE_ENV_VAR = "MAGICLATTICE_CACHE"
_CACHE_MAGIC = "#magiclattice-shell v1"


class EnumerationBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, visited: int) -> None:
        super().__init__(
            f"shell enumeration exceeded the node budget: "
            f"visited {visited} nodes, budget {budget}"
        )
        self.budget = budget
        self.visited = visited


class ShellCacheError(RuntimeError):
    """Raised when a cached shell file is malformed or inconsistent."""


# ---------------------------------------------------------------------------
# generator matrices


def _e8_generator() -> list[list[Fraction]]:
    rows = [[Fraction(0)] * 8 for _ in range(8)]
    for k in range(6):
        rows[k][k] = Fraction(1)
        rows[k][k + 1] = Fraction(-1)
    rows[6] = [Fraction(-1, 2)] * 6 + [Fraction(1, 2), Fraction(1, 2)]
    rows[7][5] = Fraction(1)
    rows[7][6] = Fraction(1)
    return rows


_BW16_DOUBLED = (
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (0, 2, 0, 0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 2, 0, 0),
    (0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 2, 0),
    (0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2),
    (0, 0, 0, 0, 2, 0, 0, 2, 0, 0, 0, 0, 0, 2, 2, 0),
    (0, 0, 0, 0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 2, 0, 2),
    (0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 2, 2),
    (0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 2, 0, 2, 2, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 2, 0, 2, 0, 2),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4),
)


def _bw16_generator() -> list[list[Fraction]]:
    return [[Fraction(x, 2) for x in row] for row in _BW16_DOUBLED]


# E6 complex generator over Z[omega]; rows are basis vectors of the lattice.
E6_GENERATOR: tuple[tuple[EisensteinInt, ...], ...] = (
    (THETA, EisensteinInt(0), EisensteinInt(0)),
    (EisensteinInt(0), THETA, EisensteinInt(0)),
    (EisensteinInt(1), EisensteinInt(1), EisensteinInt(1)),
)


# ---------------------------------------------------------------------------
# small exact matrix helpers


def _mat_mul_t(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    return [[sum(m[i][k] * m[j][k] for k in range(len(m[i]))) for j in range(n)] for i in range(n)]


def _mat_inverse(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _ldl(g: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """g = L D L^T with unit lower-triangular L; requires g positive definite."""
    n = len(g)
    d = [Fraction(0)] * n
    lo = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        d[j] = g[j][j] - sum(lo[j][k] * lo[j][k] * d[k] for k in range(j))
        if d[j] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        lo[j][j] = Fraction(1)
        for i in range(j + 1, n):
            lo[i][j] = (g[i][j] - sum(lo[i][k] * lo[j][k] * d[k] for k in range(j))) / d[j]
    return d, lo


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


# ---------------------------------------------------------------------------
# lattice specification


@dataclass(frozen=True)
class LatticeSpec:
    name: str
    ring: str  # "gaussian" or "eisenstein"
    complex_dim: int
    real_dim: int
    coeff_dim: int
    scale: int  # ambient coordinates are stored times this factor
    known_counts: dict[int, int]
    gram: tuple[tuple[Fraction, ...], ...]  # coefficient-space Gram matrix
    gram_inv_diag: tuple[Fraction, ...]
    scaled_generator: Optional[tuple[tuple[int, ...], ...]]  # scale*M, E8/BW16
    scaled_generator_inv: Optional[tuple[tuple[Fraction, ...], ...]]

    def __repr__(self) -> str:  # pragma: no cover
        return f"LatticeSpec({self.name})"


def _e6_real_gram() -> list[list[Fraction]]:
    # Quadratic form on the 6 integer coefficients (a1, a2, a3, b1, b2, b3)
    # of beta = a + omega*b, obtained by polarization of the exact norm
    # |beta M|^2.  Entries come out in (1/2)Z.
    def norm_of(coeffs: Sequence[int]) -> int:
        beta = [EisensteinInt(coeffs[k], coeffs[3 + k]) for k in range(3)]
        total = 0
        for col in range(3):
            amb = EisensteinInt(0)
            for row in range(3):
                amb = amb + beta[row] * E6_GENERATOR[row][col]
            total += amb.norm()
        return total

    basis = [[int(i == j) for j in range(6)] for i in range(6)]
    diag = [norm_of(basis[i]) for i in range(6)]
    g = [[Fraction(0)] * 6 for _ in range(6)]
    for i in range(6):
        g[i][i] = Fraction(diag[i])
        for j in range(i + 1, 6):
            both = [basis[i][k] + basis[j][k] for k in range(6)]
            g[i][j] = g[j][i] = Fraction(norm_of(both) - diag[i] - diag[j], 2)
    return g


_LATTICE_CACHE: dict[str, LatticeSpec] = {}


def build_lattice(name: str) -> LatticeSpec:
    """Construct the exact lattice data for "E8", "BW16" or "E6"."""
    key = name.upper()
    if key in _LATTICE_CACHE:
        return _LATTICE_CACHE[key]

    if key == "E8":
        gen = _e8_generator()
        gram = _mat_mul_t(gen)
        scale = 2
        counts = {2: 240, 4: 2160, 6: 6720, 8: 17520}
        ring, cdim, rdim = "gaussian", 4, 8
    elif key == "BW16":
        gen = _bw16_generator()
        gram = _mat_mul_t(gen)
        scale = 2
        counts = {4: 4320, 6: 61440, 8: 522720, 10: 2211840}
        ring, cdim, rdim = "gaussian", 8, 16
    elif key == "E6":
        gen = None
        gram = _e6_real_gram()
        scale = 1
        counts = {3: 72, 6: 270, 9: 720, 12: 936, 15: 2160}
        ring, cdim, rdim = "eisenstein", 3, 6
    else:
        raise ValueError(f"unknown lattice {name!r}; expected E8, BW16 or E6")

    inv = _mat_inverse(gram)
    diag = tuple(inv[i][i] for i in range(len(inv)))
    if gen is not None:
        scaled = tuple(tuple(int(x * scale) for x in row) for row in gen)
        for row, frac_row in zip(scaled, gen):
            assert all(Fraction(s) == f * scale for s, f in zip(row, frac_row))
        scaled_inv = tuple(tuple(r) for r in _mat_inverse([[Fraction(x) for x in row] for row in scaled]))
    else:
        scaled = None
        scaled_inv = None

    spec = LatticeSpec(
        name=key,
        ring=ring,
        complex_dim=cdim,
        real_dim=rdim,
        coeff_dim=len(gram),
        scale=scale,
        known_counts=counts,
        gram=tuple(tuple(row) for row in gram),
        gram_inv_diag=diag,
        scaled_generator=scaled,
        scaled_generator_inv=scaled_inv,
    )
    _LATTICE_CACHE[key] = spec
    return spec


def coordinate_bounds(lattice: LatticeSpec, norm: int) -> tuple[int, ...]:
    """Largest possible |a_i| on the shell of the given square norm,
    floor(sqrt(norm * (G^-1)_ii)) per coefficient."""
    if norm <= 0:
        raise ValueError("shell norm must be positive")
    out = []
    for d in lattice.gram_inv_diag:
        val = Fraction(norm) * d
        out.append(isqrt(val.numerator // val.denominator))
    return tuple(out)


# ---------------------------------------------------------------------------
# shell container


@dataclass(frozen=True)
class ShellVector:
    """One lattice vector: integer coefficients and its ambient row.

    For E8/BW16 the ambient row holds the 8/16 real coordinates times the
    lattice scale.  For E6 it holds (a, b) integer pairs of the three
    Eisenstein ambient coordinates, flattened to 6 integers.
    """

    coeffs: tuple[int, ...]
    ambient: tuple[int, ...]

    def eisenstein_components(self) -> tuple[EisensteinInt, ...]:
        row = self.ambient
        return tuple(EisensteinInt(row[2 * k], row[2 * k + 1]) for k in range(len(row) // 2))


@dataclass(frozen=True)
class Shell:
    lattice: LatticeSpec
    norm: int
    vectors: tuple[ShellVector, ...]

    @property
    def count(self) -> int:
        return len(self.vectors)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Shell({self.lattice.name}, norm={self.norm}, count={self.count})"


@dataclass(frozen=True)
class ThetaCheckResult:
    ok: bool
    checked: bool
    expected: Optional[int]
    actual: int


def theta_check(shell: Shell) -> ThetaCheckResult:
    """Compare the shell size against the tabulated vector count.

    Unknown norms are reported as unchecked rather than failed.
    """
    expected = shell.lattice.known_counts.get(shell.norm)
    if expected is None:
        return ThetaCheckResult(ok=True, checked=False, expected=None, actual=shell.count)
    return ThetaCheckResult(
        ok=(shell.count == expected), checked=True, expected=expected, actual=shell.count
    )


# ---------------------------------------------------------------------------
# branch-and-bound enumeration


def _integer_form(lattice: LatticeSpec) -> tuple[tuple[int, ...], list, list[int], list[int], int]:
    """Integerized LDL data in a pruned-friendly coordinate order.

    Returns (order, lam, mus, weights, lam_common) where order[pos] is the
    original coefficient index at DFS position pos (position 0 is solved
    innermost), and for each position j:

        lam[j]     list of (pos, coef) pairs with pos > j
        mus[j]     positive integer
        weights[j] positive integer

    such that common * Q(a) == sum_j weights[j] * t_j^2 with
    t_j = mus[j]*x_j + sum_{(i,c) in lam[j]} c*x_i over DFS coordinates x.
    """
    n = lattice.coeff_dim
    # Decide coordinates with small bounds at the outermost (last) levels.
    order = sorted(range(n), key=lambda i: (-lattice.gram_inv_diag[i], i))
    g = [[lattice.gram[order[p]][order[q]] for q in range(n)] for p in range(n)]
    d, lo = _ldl(g)

    mus: list[int] = []
    lam: list[list[tuple[int, int]]] = []
    weights_frac: list[Fraction] = []
    for j in range(n):
        denoms = [lo[i][j].denominator for i in range(j + 1, n)]
        mu = _lcm(denoms) if denoms else 1
        mus.append(mu)
        lam.append(
            [
                (i, int(lo[i][j] * mu))
                for i in range(j + 1, n)
                if lo[i][j] != 0
            ]
        )
        weights_frac.append(d[j] / (mu * mu))
    common = _lcm(w.denominator for w in weights_frac)
    weights = [int(w * common) for w in weights_frac]
    return tuple(order), lam, mus, weights, common


_FORM_CACHE: dict[str, tuple] = {}


def _form_for(lattice: LatticeSpec) -> tuple:
    if lattice.name not in _FORM_CACHE:
        _FORM_CACHE[lattice.name] = _integer_form(lattice)
    return _FORM_CACHE[lattice.name]


def _dfs_enumerate(
    lattice: LatticeSpec,
    norm: int,
    node_budget: int,
    outer_range: Optional[tuple[int, int]] = None,
) -> tuple[list[tuple[int, ...]], int]:
    """All coefficient vectors of the given norm, plus the node count.

    If outer_range is given, only outermost DFS values lo <= x <= hi are
    explored (used to partition work across processes); the symmetric
    negatives of found vectors are still emitted.
    """
    order, lam, mus, weights, common = _form_for(lattice)
    n = lattice.coeff_dim
    target = common * norm
    xs = [0] * n
    found: list[tuple[int, ...]] = []
    visited = 0

    lam0 = lam[0]
    mu0 = mus[0]
    w0 = weights[0]

    def descend(level: int, remaining: int, zero_prefix: bool) -> None:
        nonlocal visited
        if level == 0:
            visited += 1
            if remaining % w0:
                return
            q = remaining // w0
            r = isqrt(q)
            if r * r != q:
                return
            sigma = 0
            for i, c in lam0:
                sigma += c * xs[i]
            for t in ((r,) if r == 0 else (r, -r)):
                num = t - sigma
                if num % mu0:
                    continue
                x0 = num // mu0
                if zero_prefix and x0 <= 0:
                    continue
                xs[0] = x0
                vec = [0] * n
                for pos in range(n):
                    vec[order[pos]] = xs[pos]
                found.append(tuple(vec))
            return
        w = weights[level]
        mu = mus[level]
        sigma = 0
        for i, c in lam[level]:
            sigma += c * xs[i]
        s = isqrt(remaining // w)
        lo = -((s + sigma) // mu)
        hi = (s - sigma) // mu
        if zero_prefix and lo < 0:
            lo = 0
        if level == n - 1 and outer_range is not None:
            lo = max(lo, outer_range[0])
            hi = min(hi, outer_range[1])
        visited += hi - lo + 1 if hi >= lo else 0
        if visited > node_budget:
            raise EnumerationBudgetExceeded(node_budget, visited)
        for x in range(lo, hi + 1):
            t = mu * x + sigma
            xs[level] = x
            descend(level - 1, remaining - w * t * t, zero_prefix and x == 0)

    descend(n - 1, target, True)
    # Each vector found has its leading DFS coordinate positive; the shell
    # is symmetric under negation.
    full = found + [tuple(-x for x in v) for v in found]
    return full, visited


def _worker_enumerate(args: tuple) -> tuple[list[tuple[int, ...]], int]:
    name, norm, budget, rng = args
    return _dfs_enumerate(build_lattice(name), norm, budget, rng)


def _ambient_row(lattice: LatticeSpec, coeffs: tuple[int, ...]) -> tuple[int, ...]:
    if lattice.scaled_generator is not None:
        gen = lattice.scaled_generator
        n = lattice.coeff_dim
        return tuple(
            sum(coeffs[i] * gen[i][k] for i in range(n)) for k in range(lattice.real_dim)
        )
    beta = [EisensteinInt(coeffs[k], coeffs[3 + k]) for k in range(3)]
    row: list[int] = []
    for col in range(3):
        amb = EisensteinInt(0)
        for r in range(3):
            amb = amb + beta[r] * E6_GENERATOR[r][col]
        row.extend(amb.coords())
    return tuple(row)


def _row_norm_scaled(lattice: LatticeSpec, row: tuple[int, ...]) -> int:
    """Square norm of an ambient row times scale**2 (exact integer)."""
    if lattice.ring == "gaussian":
        return sum(x * x for x in row)
    return sum(
        EisensteinInt(row[2 * k], row[2 * k + 1]).norm() for k in range(len(row) // 2)
    )


def enumerate_shell(
    lattice: LatticeSpec,
    norm: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> Shell:
    """Enumerate every lattice vector of the given square norm.

    The search is exhaustive: the LDL-based bound test is carried out in
    integer arithmetic after clearing denominators, so pruning is exact.
    Vectors are returned sorted lexicographically by coefficients.  Raises
    EnumerationBudgetExceeded if more than node_budget branch nodes are
    visited.
    """
    if norm <= 0:
        raise ValueError("shell norm must be positive")
    if threads < 1:
        raise ValueError("threads must be >= 1")

    if threads == 1:
        coeff_vectors, _ = _dfs_enumerate(lattice, norm, node_budget)
    else:
        bound = coordinate_bounds(lattice, norm)
        order, *_ = _form_for(lattice)
        outer_bound = bound[order[-1]]
        # Leading-positive convention restricts the outermost value to >= 0.
        edges = np.linspace(0, outer_bound + 1, threads + 1, dtype=int)
        ranges = [
            (int(edges[k]), int(edges[k + 1]) - 1)
            for k in range(threads)
            if edges[k] <= edges[k + 1] - 1
        ]
        from concurrent.futures import ProcessPoolExecutor

        coeff_vectors = []
        total_nodes = 0
        with ProcessPoolExecutor(max_workers=threads) as pool:
            tasks = [(lattice.name, norm, node_budget, rng) for rng in ranges]
            for part, nodes in pool.map(_worker_enumerate, tasks):
                coeff_vectors.extend(part)
                total_nodes += nodes
        if total_nodes > node_budget:
            raise EnumerationBudgetExceeded(node_budget, total_nodes)

    coeff_vectors.sort()
    scale_sq = lattice.scale * lattice.scale
    vectors = []
    for coeffs in coeff_vectors:
        row = _ambient_row(lattice, coeffs)
        if _row_norm_scaled(lattice, row) != norm * scale_sq:
            raise AssertionError(f"enumerated vector {coeffs} fails the norm check")
        vectors.append(ShellVector(coeffs=coeffs, ambient=row))
    return Shell(lattice=lattice, norm=norm, vectors=tuple(vectors))


# ---------------------------------------------------------------------------
# independent brute-force oracle


def naive_box_enumerate(
    lattice: LatticeSpec, norm: int, block_limit: int = 1 << 21
) -> list[tuple[int, ...]]:
    """Scan the full coordinate-bound box for solutions of a G a^T = norm.

    Exhaustive by construction and independent of the branch-and-bound
    pruning; quadratic-form values are evaluated in (vectorized) integer
    arithmetic.  Intended for cross-checks on small shells.
    """
    bounds = coordinate_bounds(lattice, norm)
    n = lattice.coeff_dim
    denom = _lcm(x.denominator for row in lattice.gram for x in row)
    gi = np.array(
        [[int(x * denom) for x in row] for row in lattice.gram], dtype=np.int64
    )
    target = denom * norm

    # Split coordinates into an outer python loop and an inner numpy grid.
    widths = [2 * b + 1 for b in bounds]
    split = n
    size = 1
    while split > 0 and size * widths[split - 1] <= block_limit:
        split -= 1
        size *= widths[split]
    inner_axes = list(range(split, n))
    inner_ranges = [np.arange(-bounds[i], bounds[i] + 1, dtype=np.int64) for i in inner_axes]
    if inner_axes:
        mesh = np.meshgrid(*inner_ranges, indexing="ij")
        inner = np.stack([m.reshape(-1) for m in mesh], axis=1)
    else:
        inner = np.zeros((1, 0), dtype=np.int64)

    g_in = gi[split:, split:]
    g_cross = gi[:split, split:]
    g_out = gi[:split, :split]
    q_in = np.einsum("ij,jk,ik->i", inner, g_in, inner) if inner_axes else np.zeros(1, dtype=np.int64)
    cross = inner @ g_cross.T if split else None

    out: list[tuple[int, ...]] = []
    outer_iter = product(*[range(-bounds[i], bounds[i] + 1) for i in range(split)])
    for head in outer_iter:
        if split:
            u = np.array(head, dtype=np.int64)
            q = q_in + 2 * (cross @ u) + int(u @ g_out @ u)
        else:
            q = q_in
        hits = np.nonzero(q == target)[0]
        for idx in hits:
            out.append(tuple(head) + tuple(int(v) for v in inner[idx]))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# E6 coefficient recovery


def solve_eisenstein_coefficients(
    components: Sequence[EisensteinInt],
) -> Optional[tuple[EisensteinInt, EisensteinInt, EisensteinInt]]:
    """Solve beta * M = c over Z[omega] for the E6 generator M.

    Returns the coefficient triple, or None when c is not a lattice point
    (the division by theta fails).
    """
    if len(components) != 3:
        raise ValueError("expected three Eisenstein components")
    c1, c2, c3 = components
    beta3 = c3
    rem1 = c1 - beta3
    rem2 = c2 - beta3
    # division by theta: z / theta = -z * theta / 3
    out = [None, None]
    for slot, rem in enumerate((rem1, rem2)):
        prod = -(rem * THETA)
        if prod.a % 3 or prod.b % 3:
            return None
        out[slot] = EisensteinInt(prod.a // 3, prod.b // 3)
    return (out[0], out[1], beta3)


def _coeffs_from_row(lattice: LatticeSpec, row: tuple[int, ...]) -> tuple[int, ...]:
    """Recover integer coefficients from an ambient row; raises
    ShellCacheError when the row is not a lattice point."""
    if lattice.scaled_generator_inv is not None:
        coeffs = []
        inv = lattice.scaled_generator_inv
        n = lattice.coeff_dim
        for i in range(n):
            val = sum(Fraction(row[k]) * inv[k][i] for k in range(n))
            if val.denominator != 1:
                raise ShellCacheError(f"row {row} is not a {lattice.name} lattice point")
            coeffs.append(int(val))
        return tuple(coeffs)
    comps = tuple(EisensteinInt(row[2 * k], row[2 * k + 1]) for k in range(3))
    beta = solve_eisenstein_coefficients(comps)
    if beta is None:
        raise ShellCacheError(f"row {row} is not an E6 lattice point")
    return tuple(b.a for b in beta) + tuple(b.b for b in beta)


# ---------------------------------------------------------------------------
# shell cache


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "magiclattice"


def shell_cache_path(cache_dir: Path, lattice: LatticeSpec, norm: int) -> Path:
    return Path(cache_dir) / f"{lattice.name}_norm{norm}.shell"


def save_shell(shell: Shell, path: Path) -> None:
    """Write a shell to its cache file (header plus sorted ambient rows)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = sorted(v.ambient for v in shell.vectors)
    lines = [
        f"{_CACHE_MAGIC} lattice={shell.lattice.name} norm={shell.norm} "
        f"scale={shell.lattice.scale} count={len(rows)}"
    ]
    lines.extend(" ".join(str(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def load_shell(lattice: LatticeSpec, norm: int, path: Path) -> Shell:
    """Load and fully re-validate a cached shell."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ShellCacheError(f"cannot read shell cache {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise ShellCacheError(f"{path}: empty cache file")
    header = lines[0].split()
    magic = " ".join(header[:2])
    if magic != _CACHE_MAGIC:
        raise ShellCacheError(f"{path}: bad header {lines[0]!r}")
    fields = dict(part.split("=", 1) for part in header[2:])
    if fields.get("lattice") != lattice.name or int(fields.get("norm", -1)) != norm:
        raise ShellCacheError(
            f"{path}: header is for {fields.get('lattice')} norm {fields.get('norm')}, "
            f"requested {lattice.name} norm {norm}"
        )
    if int(fields.get("scale", -1)) != lattice.scale:
        raise ShellCacheError(f"{path}: scale mismatch")
    declared = int(fields.get("count", -1))
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != declared:
        raise ShellCacheError(
            f"{path}: header declares {declared} vectors, file has {len(body)}"
        )
    width = lattice.real_dim
    scale_sq = lattice.scale * lattice.scale
    if lattice.scaled_generator_inv is not None and body:
        vectors = _validate_rows_gaussian(lattice, path, body, norm * scale_sq)
    else:
        vectors = []
        for line in body:
            row = tuple(int(tok) for tok in line.split())
            if len(row) != width:
                raise ShellCacheError(f"{path}: row {line!r} has wrong width")
            if _row_norm_scaled(lattice, row) != norm * scale_sq:
                raise ShellCacheError(f"{path}: row {line!r} has wrong norm")
            coeffs = _coeffs_from_row(lattice, row)
            vectors.append(ShellVector(coeffs=coeffs, ambient=row))
    vectors.sort(key=lambda v: v.coeffs)
    return Shell(lattice=lattice, norm=norm, vectors=tuple(vectors))


def _validate_rows_gaussian(
    lattice: LatticeSpec, path: Path, body: list[str], scaled_norm: int
) -> list[ShellVector]:
    """Vectorized version of the per-row validation for E8/BW16 caches.

    Equivalent to _coeffs_from_row on every line: coordinates and the
    integerized generator inverse are small, so the int64 matmul is exact
    (bounds asserted before use)."""
    width = lattice.real_dim
    try:
        flat = np.fromiter(
            (int(tok) for line in body for tok in line.split()),
            dtype=np.int64,
        )
    except (ValueError, OverflowError) as exc:
        raise ShellCacheError(f"{path}: malformed row ({exc})") from exc
    if flat.size != len(body) * width:
        for line in body:
            if len(line.split()) != width:
                raise ShellCacheError(f"{path}: row {line!r} has wrong width")
        raise ShellCacheError(f"{path}: malformed rows")
    rows = flat.reshape(len(body), width)
    norms = (rows * rows).sum(axis=1)
    if not (norms == scaled_norm).all():
        bad = int(np.argmin(norms == scaled_norm))
        raise ShellCacheError(f"{path}: row {body[bad]!r} has wrong norm")

    inv = lattice.scaled_generator_inv
    denom = 1
    for inv_row in inv:
        for x in inv_row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    inv_int = np.array(
        [[int(x * denom) for x in inv_row] for inv_row in inv], dtype=np.int64
    )
    assert np.abs(rows).max() < 2**20 and np.abs(inv_int).max() < 2**20
    coeff_num = rows @ inv_int
    rem = coeff_num % denom
    if rem.any():
        bad = int(np.argmax(rem.any(axis=1)))
        raise ShellCacheError(f"{path}: row {body[bad]!r} is not a {lattice.name} lattice point")
    coeffs = coeff_num // denom
    return [
        ShellVector(coeffs=tuple(c), ambient=tuple(a))
        for c, a in zip(coeffs.tolist(), rows.tolist())
    ]


def ensure_shell(
    lattice: LatticeSpec,
    norm: int,
    cache_dir: Optional[Path] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> Shell:
    """Load the shell from cache, or enumerate it and populate the cache."""
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = shell_cache_path(cache, lattice, norm)
    if path.exists():
        return load_shell(lattice, norm, path)
    shell = enumerate_shell(lattice, norm, node_budget=node_budget, threads=threads)
    save_shell(shell, path)
    return shell
