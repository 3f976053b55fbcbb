"""
Growth rates of languages given by finitely many forbidden words.

A language is turned into its de Bruijn transfer graph on factor-free words
of length m-1; walks in the graph are the allowed words and the Perron
eigenvalue of its adjacency matrix is the growth rate.
"""
from dataclasses import dataclass, field
from itertools import product
from math import fsum
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np
import scipy.sparse as sp

from .exceptions import NumericError, ParameterError
from .growth import tiling_growth_rate
from .models import BoundsReport, ComplexityRange, Rule, TilingParams, Word
from .words import adjacent, alternation_threshold

DEFAULT_TOLERANCE = 1e-12
DEFAULT_POWER_ITER_CAP = 1000000

# Parameter sets of the published tables
TABLE1_PARAMS: Tuple[Tuple[int, int], ...] = (
    (3, 8), (4, 6), (4, 8), (5, 4), (5, 6), (5, 8), (6, 4), (6, 6),
    (6, 8), (7, 4), (7, 6), (7, 8), (8, 4), (8, 6), (8, 8),
)
TABLE3_PARAMS: Tuple[Tuple[int, int], ...] = (
    (3, 7), (3, 9), (4, 5), (4, 7), (4, 9), (5, 5), (5, 7), (5, 9),
    (6, 5), (6, 7), (6, 9), (7, 3), (7, 5), (7, 7),
)


@dataclass(frozen=True)
class ForbiddenLanguage:
    p: int
    forbidden: FrozenSet[Word]
    max_len: int

    def __post_init__(self) -> None:
        if not self.forbidden:
            raise ParameterError("a forbidden-word language needs at least one word")
        if self.max_len != max(len(w) for w in self.forbidden):
            raise ParameterError("max_len must be the longest forbidden word length")

    def allows(self, word: Word) -> bool:
        """True when no factor of word is forbidden"""
        lengths = {len(f) for f in self.forbidden}
        for k in lengths:
            for i in range(len(word) - k + 1):
                if word[i:i + k] in self.forbidden:
                    return False
        return True


@dataclass
class DeBruijnGraph:
    language: ForbiddenLanguage
    vertices: List[Word]
    index: Dict[Word, int]
    graph: nx.DiGraph = field(repr=False)
    matrix: sp.csr_matrix = field(repr=False)

    def has_edge(self, u: Word, v: Word) -> bool:
        if u not in self.index or v not in self.index:
            return False
        return self.graph.has_edge(self.index[u], self.index[v])


def forbidden_set(params: TilingParams, rule: Rule) -> ForbiddenLanguage:
    """
    Every repeated letter kk plus every alternation of the rule's threshold
    length, over all ordered pairs of cyclically adjacent letters.

    Raises:
        ParameterError: If the rule does not match q's parity
    """
    p = params.p
    length = alternation_threshold(params, rule)
    words = {(k, k) for k in range(1, p + 1)}
    for a in range(1, p + 1):
        for b in range(1, p + 1):
            if adjacent(a, b, p):
                words.add(tuple(a if i % 2 == 0 else b for i in range(length)))
    return ForbiddenLanguage(p, frozenset(words), max(2, length))


def debruijn(f: ForbiddenLanguage) -> DeBruijnGraph:
    """
    Transfer graph on factor-free words of length m-1, in lexicographic order.

    u -> v is an edge when v is u shifted by one letter and the length-m
    amalgamation of the two is not forbidden.
    """
    m = f.max_len
    if m < 2:
        raise ParameterError(f"de Bruijn graph needs forbidden words of length >= 2, got {m}")
    alphabet = range(1, f.p + 1)
    vertices = [w for w in product(alphabet, repeat=m - 1) if f.allows(w)]
    index = {w: i for i, w in enumerate(vertices)}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(vertices)))
    rows: List[int] = []
    cols: List[int] = []
    for i, u in enumerate(vertices):
        for c in alphabet:
            j = index.get(u[1:] + (c,))
            if j is None or (u + (c,)) in f.forbidden:
                continue
            graph.add_edge(i, j)
            rows.append(i)
            cols.append(j)
    n = len(vertices)
    matrix = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return DeBruijnGraph(f, vertices, index, graph, matrix)


def perron_rate(
    g: DeBruijnGraph,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_POWER_ITER_CAP,
) -> float:
    """
    Spectral radius of the transfer matrix.

    Each non-trivial strongly connected component is iterated with A + I,
    which is primitive there, until the Collatz-Wielandt bounds meet within
    tol. The left vector is iterated alongside, and the rate is read off the
    two-sided Rayleigh quotient, whose error is the square of the vectors'
    error; it is accurate to float64 rounding. An empty graph has rate 0.

    Raises:
        NumericError: If a component does not converge within max_iter steps
    """
    if not tol > 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    best = 0.0
    for component in nx.strongly_connected_components(g.graph):
        nodes = sorted(component)
        if len(nodes) == 1 and not g.graph.has_edge(nodes[0], nodes[0]):
            continue
        sub = g.matrix[nodes][:, nodes] + sp.identity(len(nodes), format="csr")
        sub_t = sub.T.tocsr()
        x = np.ones(len(nodes))
        w = np.ones(len(nodes))
        for _ in range(max_iter):
            y = sub @ x
            ratios = y / x
            lo, hi = float(ratios.min()), float(ratios.max())
            if hi - lo < tol:
                rate = fsum(w * y) / fsum(w * x) - 1
                best = max(best, min(max(rate, lo - 1), hi - 1))
                break
            x = y / y.max()
            w = sub_t @ w
            w = w / w.max()
        else:
            raise NumericError(
                f"power iteration on a {len(nodes)}-vertex component did not converge "
                f"in {max_iter} steps"
            )
    return best


def language_rate(
    params: TilingParams,
    rule: Rule,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_POWER_ITER_CAP,
) -> float:
    return perron_rate(debruijn(forbidden_set(params, rule)), tol, max_iter)


def complexity_report(
    params: TilingParams,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_POWER_ITER_CAP,
) -> BoundsReport:
    """
    Growth-rate bounds of the billiard language.

    For even q only alpha is reported; it is the exact rate. For odd q the
    report carries the lower-language rate (at least 1), alpha raised to
    (q-1)/(q+1), alpha and the upper-language rate.
    """
    alpha = tiling_growth_rate(params, tol).alpha
    if params.q_even:
        return BoundsReport(params.p, params.q, alpha)
    q = params.q
    ell = max(language_rate(params, Rule.O_LOWER, tol, max_iter), 1.0)
    u = language_rate(params, Rule.O_UPPER, tol, max_iter)
    return BoundsReport(
        params.p, params.q, alpha,
        ell=ell, alpha_pow=alpha ** ((q - 1) / (q + 1)), u=u,
    )


def complexity_range(
    params: TilingParams,
    tol: float = DEFAULT_TOLERANCE,
    report: Optional[BoundsReport] = None,
) -> ComplexityRange:
    """Lower and upper bound on the billiard language growth rate"""
    report = report or complexity_report(params, tol)
    if params.q_even:
        return ComplexityRange(params.p, params.q, report.alpha, False, report.alpha)
    from_language = report.ell > report.alpha_pow
    lower = report.ell if from_language else report.alpha_pow
    return ComplexityRange(params.p, params.q, lower, from_language, report.alpha)


def word_count(f: ForbiddenLanguage, n: int, g: Optional[DeBruijnGraph] = None) -> int:
    """Exact number of allowed words of length n"""
    if n < 0:
        raise ParameterError(f"length must be >= 0, got {n}")
    m = f.max_len
    if n < m - 1:
        return sum(1 for w in product(range(1, f.p + 1), repeat=n) if f.allows(w))
    g = g or debruijn(f)
    counts = [1] * len(g.vertices)
    for _ in range(n - (m - 1)):
        nxt = [0] * len(counts)
        for i, j in g.graph.edges:
            nxt[j] += counts[i]
        counts = nxt
    return sum(counts)
