"""
Growth series of (p,q)-tilings: closed forms, coefficient recurrence,
growth rate and the vertex-type transfer matrix.
"""
from typing import List, Tuple

import numpy as np
import sympy
from sympy import Matrix, Rational

from .exceptions import NumericError, OutOfDepthError, ParameterError
from .models import GrowthRate, RationalSeries, TilingParams
from .tiling import Layering, TilingGraph

SURFACE_KINDS = ("4n-gon", "4n+2-gon")
# isolating-interval width below float64 resolution for roots under 16
FLOAT_WIDTH = Rational(1, 10 ** 17)


def growth_series(params: TilingParams) -> RationalSeries:
    """
    Closed form of f(x) = sum N_td(n) x^n.

    Args:
        params: Hyperbolic (p, q)

    Returns:
        RationalSeries with ascending integer coefficients
    """
    p, q = params.p, params.q
    if params.q_even:
        h = q // 2
        numerator = [1] + [2] * (h - 1) + [1]
        denominator = [1] + [-(p - 2)] * (h - 1) + [1]
    else:
        mid = (q - 1) // 2
        numerator = [1] + [2] * (q - 2) + [1]
        denominator = [1] + [-(p - 2)] * (q - 2) + [1]
        numerator[mid] = 4
        denominator[mid] = -(p - 4)
    return RationalSeries(tuple(numerator), tuple(denominator))


def series_coefficients(s: RationalSeries, n: int) -> List[int]:
    """Exact coefficients c_0..c_n of numerator / denominator"""
    if n < 0:
        raise ParameterError(f"number of terms must be >= 0, got {n}")
    num, den = s.numerator, s.denominator
    coeffs: List[int] = []
    for k in range(n + 1):
        c = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            c -= den[j] * coeffs[k - j]
        coeffs.append(c)
    return coeffs


def tiling_growth_rate(params: TilingParams, tol: float = 1e-12) -> GrowthRate:
    """
    Largest real root of the degree-reversed denominator.

    The root is isolated exactly with sympy and its isolating interval refined
    below tol and below FLOAT_WIDTH, so alpha, the interval midpoint, is the
    float64 nearest the root up to one rounding.

    Raises:
        ParameterError: If tol is not positive
        NumericError: If no real root above 1 is isolated
    """
    if not tol > 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    x = sympy.Symbol("x")
    den = growth_series(params).denominator
    # sympy reads coefficient lists highest degree first, which reverses den
    poly = sympy.Poly(list(den), x)
    try:
        intervals = poly.intervals(eps=min(Rational(repr(tol)), FLOAT_WIDTH))
    except Exception as e:
        raise NumericError(f"root isolation failed for {params}: {e}") from e
    if not intervals:
        raise NumericError(f"no real root found for {params}")
    (lo, hi), _ = max(intervals, key=lambda item: item[0][1])
    if hi <= 1:
        raise NumericError(f"largest real root of {params} does not exceed 1")
    return GrowthRate(alpha=float((lo + hi) / 2), precision=float(hi - lo))


def type_matrix(params: TilingParams) -> Matrix:
    """
    Transfer matrix between vertex types of consecutive distance layers.

    Entry (i, j) counts type-(j+1) cells generated per type-(i+1) cell; the
    half entries are kept exact.
    """
    p, q = params.p, params.q
    if q == 4:
        return Matrix([[p - 3, 1], [p - 4, 1]])
    if q == 3:
        return Matrix([[p - 5, 1], [p - 6, 1]])
    n = q // 2 if params.q_even else q - 1
    special = None if params.q_even else (q - 1) // 2
    rows = []
    for i in range(1, n + 1):
        row = [Rational(0)] * n
        if i == 1:
            row[0], row[1] = p - 3, 2
        elif i == n:
            row[0], row[1] = p - 4, 2
        else:
            row[0] = p - 4 if i == special else p - 3
            row[1] += 1
            if i == n - 1:
                row[n - 1] += Rational(1, 2)
            else:
                row[i] += 1
        rows.append(row)
    return Matrix(rows)


def type_counts(params: TilingParams, n: int) -> Tuple[int, ...]:
    """Type vector T_n from T_1 = (p, 0, ..., 0) and T_{k+1} = T_k M"""
    if n < 1:
        raise ParameterError(f"type counts start at distance 1, got {n}")
    m = type_matrix(params)
    row = Matrix([[params.p] + [0] * (m.shape[0] - 1)])
    for _ in range(n - 1):
        row = row * m
    values = list(row)
    if any(not Rational(v).is_integer for v in values):
        raise NumericError(f"non-integral type counts {values} at distance {n}")
    return tuple(int(v) for v in values)


def type_matrix_spectral_radius(
    params: TilingParams, max_iter: int = 100000, tol: float = 1e-12, seed: int = 0
) -> float:
    """
    Dominant eigenvalue of the type matrix by power iteration.

    Raises:
        NumericError: If the residual does not drop below tol within max_iter
    """
    a = np.array(type_matrix(params).tolist(), dtype=float)
    rng = np.random.default_rng(seed)
    x = np.abs(rng.normal(size=a.shape[0])) + 1.0
    x = x / np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = a @ x
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            raise NumericError(f"power iteration collapsed for {params}")
        lam = float(x @ y)
        if np.linalg.norm(y - lam * x) < tol * max(1.0, abs(lam)):
            return lam
        x = y / y_norm
    raise NumericError(
        f"power iteration for {params} did not converge in {max_iter} steps (last {lam})"
    )


def simulate_vertex_types(g: TilingGraph, n: int) -> Tuple[int, ...]:
    """
    Type counts of the tiles at distance n measured on a generated tiling.

    A tile's type is the largest drop n - min over the vertices it touches,
    where min is the smallest tile distance around that vertex; for odd q a
    vertex whose minimum is shared by two tiles adds (q-1)/2.

    Raises:
        ParameterError: If g is not tile-layered or n < 1
        OutOfDepthError: If the vertices around layer n are not all closed
    """
    if g.layering is not Layering.TILES:
        raise ParameterError("vertex types are measured on a tile-layered tiling")
    if n < 1:
        raise ParameterError(f"type counts start at distance 1, got {n}")
    q = g.q
    if n + q // 2 > g.depth:
        raise OutOfDepthError(f"types at distance {n} need depth >= {n + q // 2}")
    size = q // 2 if g.params.q_even else q - 1
    counts = [0] * size
    for t in g.tiles_at(n):
        best = 0
        for v in g.tile_vertices(t):
            around = g.vertex_tiles[v]
            if any(a is None for a in around):
                raise OutOfDepthError(f"vertex {v} of tile {t} is not closed")
            dists = [g.tile_distance[a] for a in around]
            low = min(dists)
            kind = n - low
            if not g.params.q_even and dists.count(low) > 1:
                kind += (q - 1) // 2
            best = max(best, kind)
        counts[best - 1] += 1
    return tuple(counts)


def surface_growth_series(n: int, kind: str) -> RationalSeries:
    """
    Growth series of the tiling unfolded from a glued regular polygon surface.

    Args:
        n: Surface parameter, >= 1
        kind: "4n-gon" for (4n, 4n) or "4n+2-gon" for (4n+2, 2n+1)

    Raises:
        ParameterError: On unknown kind or when the parameters are not hyperbolic
    """
    if kind not in SURFACE_KINDS:
        raise ParameterError(f"kind must be one of {SURFACE_KINDS}, got {kind!r}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if kind == "4n-gon":
        return growth_series(TilingParams(4 * n, 4 * n))
    return growth_series(TilingParams(4 * n + 2, 2 * n + 1))
