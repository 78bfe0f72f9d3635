"""Closed-form density guarantees for vertex neighborhoods.

Sampling a vertex with probability proportional to its wedge count makes
the neighborhood edge-density a random variable with mean ``C_g``. The
functions here evaluate tail and variance bounds on that variable, the
power-law (exponent 2) bound on the probability of sampling a low-degree
vertex, and the resulting existence guarantee for a large, dense
neighborhood.

All arithmetic is double precision with natural logarithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DegreeStats, Graph, degree_stats

__all__ = [
    "BoundDomainError",
    "PowerLawModel",
    "BoundReport",
    "WitnessReport",
    "markov_upper_bound",
    "lower_tail_bound",
    "variance_bound",
    "delta_ratio",
    "eta",
    "beta_max",
    "neighborhood_guarantee",
    "harmonic_sum",
    "small_degree_probability_closed_form",
    "small_degree_probability_of_sequence",
    "exact_small_degree_probability",
    "synth_degree_sequence",
    "fit_power_law_slope",
    "alpha_sweep",
    "beta_sweep",
    "degree_bound_profile",
    "neighborhood_guarantee_witness",
]


class BoundDomainError(ValueError):
    """A bound was evaluated outside the range where it holds."""


@dataclass(frozen=True)
class PowerLawModel:
    """Degree counts ``n_d = c * n * d**-gamma`` for ``d_min <= d <= d_max``.

    When ``c`` is omitted it is chosen so the counts sum to ``n``. Only
    ``gamma == 2`` has closed-form bounds.
    """

    d_min: int
    d_max: int
    n: int
    gamma: float = 2.0
    c: float | None = None

    @property
    def normalization(self) -> float:
        if self.c is not None:
            return self.c
        return 1.0 / sum(d ** -self.gamma for d in range(self.d_min, self.d_max + 1))

    def expected_count(self, d: int) -> float:
        return self.normalization * self.n * d ** -self.gamma


@dataclass(frozen=True)
class BoundReport:
    c_g: float
    alpha: float
    beta: float
    d_min: int
    d_max: int
    delta: float
    eta: float
    beta_max: float | None
    markov_upper: float | None
    lower_tail: float | None
    variance_upper: float
    size_guarantee: float
    density_guarantee: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class WitnessReport:
    beta: float
    size_guarantee: float
    density_guarantee: float
    found: bool
    witness: int | None
    witness_degree: int | None
    witness_density: float | None
    candidates: int  # vertices meeting the size guarantee


def markov_upper_bound(c_g: float, alpha: float) -> float:
    """Upper bound ``C_g / alpha`` on Pr[neighborhood density >= alpha]."""
    if not 0.0 <= c_g <= 1.0:
        raise BoundDomainError(f"C_g={c_g} outside [0, 1]")
    if not 0.0 < alpha <= 1.0:
        raise BoundDomainError(f"alpha={alpha} outside (0, 1]")
    if alpha <= c_g:
        raise BoundDomainError(f"Markov bound needs alpha > C_g (alpha={alpha}, C_g={c_g})")
    return min(1.0, c_g / alpha)


def lower_tail_bound(c_g: float, alpha: float) -> float:
    """Lower bound ``(C_g - alpha) / (1 - alpha)`` on Pr[density >= alpha]."""
    if not 0.0 <= c_g <= 1.0:
        raise BoundDomainError(f"C_g={c_g} outside [0, 1]")
    if alpha >= 1.0:
        raise BoundDomainError("lower tail bound undefined at alpha = 1")
    if not 0.0 <= alpha < c_g:
        raise BoundDomainError(f"lower tail bound needs 0 <= alpha < C_g (alpha={alpha}, C_g={c_g})")
    return min(1.0, max(0.0, (c_g - alpha) / (1.0 - alpha)))


def variance_bound(c_g: float) -> float:
    if not 0.0 <= c_g <= 1.0:
        raise BoundDomainError(f"C_g={c_g} outside [0, 1]")
    return c_g * (1.0 - c_g)


def delta_ratio(d_min: int) -> float:
    if d_min < 2:
        raise BoundDomainError("d_min must be at least 2")
    return d_min / (d_min - 1)


def _check_degrees(d_min: int, d_max: int) -> None:
    if d_min < 2:
        raise BoundDomainError(f"d_min={d_min} must be at least 2")
    if d_max <= d_min:
        raise BoundDomainError(f"d_max={d_max} must exceed d_min={d_min}")


def _eta(d_min: int, d_max: int, beta: float) -> float:
    return (beta * d_max - math.log(beta)) / (d_max - math.log(d_min / (d_min - 1)))


def eta(d_min: int, d_max: int, beta: float) -> float:
    """Bound on the wedge mass of vertices with degree at most ``beta * d_max``."""
    _check_degrees(d_min, d_max)
    lo = d_min / d_max
    if not lo < beta < 1.0:
        raise BoundDomainError(f"beta={beta} outside ({lo}, 1)")
    return _eta(d_min, d_max, beta)


def beta_max(c_g: float, d_min: int, d_max: int, tol: float = 1e-9) -> float | None:
    """Largest ``beta`` with ``eta(beta) < C_g``, found by bisection.

    ``eta`` is increasing on the admissible interval (its derivative
    ``d_max - 1/beta`` is positive for ``beta > 1/d_max``). Returns ``None``
    when no admissible ``beta`` satisfies the condition.
    """
    _check_degrees(d_min, d_max)
    lo, hi = d_min / d_max, 1.0
    if _eta(d_min, d_max, lo) >= c_g:
        return None
    # eta(1) > 1 >= C_g, so the root lies strictly inside (lo, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _eta(d_min, d_max, mid) < c_g:
            lo = mid
        else:
            hi = mid
    return lo


def neighborhood_guarantee(
    c_g: float, d_min: int, d_max: int, beta: float, alpha: float | None = None
) -> BoundReport:
    """Guaranteed size and density of some vertex neighborhood.

    A neighborhood with at least ``beta * d_max`` vertices and density at
    least ``(C_g - eta) / (1 - eta)`` exists whenever ``eta < C_g``. The tail
    bounds are evaluated at ``alpha`` (defaults to the density guarantee)
    where they are defined, otherwise reported as ``None``.
    """
    e = eta(d_min, d_max, beta)
    if e >= c_g:
        bmax = beta_max(c_g, d_min, d_max)
        raise BoundDomainError(
            f"eta={e:.6g} >= C_g={c_g:.6g}: no guarantee for beta={beta}; "
            f"admissible beta range is ({d_min / d_max:.6g}, {bmax if bmax is not None else 'empty'})"
        )
    density = (c_g - e) / (1.0 - e)
    a = density if alpha is None else alpha
    markov = markov_upper_bound(c_g, a) if c_g < a <= 1.0 else None
    lower = lower_tail_bound(c_g, a) if 0.0 <= a < c_g else None
    return BoundReport(
        c_g=c_g,
        alpha=a,
        beta=beta,
        d_min=d_min,
        d_max=d_max,
        delta=delta_ratio(d_min),
        eta=e,
        beta_max=beta_max(c_g, d_min, d_max),
        markov_upper=markov,
        lower_tail=lower,
        variance_upper=variance_bound(c_g),
        size_guarantee=beta * d_max,
        density_guarantee=density,
    )


def harmonic_sum(lo: int, hi: int) -> float:
    """``sum(1/k for k in lo..hi)``, compensated."""
    return math.fsum(1.0 / k for k in range(lo, hi + 1))


def small_degree_probability_closed_form(d_min: int, d_max: int, beta: float) -> float:
    """Wedge mass of degrees ``<= beta * d_max`` under an exact exponent-2 law.

    With no missing degrees the normalization cancels and the mass is
    ``(|D'| - H(D')) / (|D| - H(D))``, ``H`` being the harmonic sum over the
    degree range.
    """
    _check_degrees(d_min, d_max)
    d_bar = math.floor(beta * d_max)
    if d_bar < d_min:
        return 0.0
    d_bar = min(d_bar, d_max)
    num = (d_bar - d_min + 1) - harmonic_sum(d_min, d_bar)
    den = (d_max - d_min + 1) - harmonic_sum(d_min, d_max)
    return num / den


def small_degree_probability_of_sequence(degrees, beta: float) -> float:
    """Wedge mass of vertices with ``d_min <= d <= beta * d_max`` in a degree sequence."""
    deg = np.asarray(degrees, dtype=np.int64)
    if not np.any(deg >= 2):
        raise BoundDomainError("no vertex of degree >= 2")
    d_min = int(deg[deg >= 2].min())
    d_max = int(deg.max())
    wedges = deg * (deg - 1) // 2
    sel = (deg >= d_min) & (deg <= beta * d_max)
    return int(wedges[sel].sum()) / int(wedges.sum())


def exact_small_degree_probability(g: Graph, beta: float) -> float:
    """Probability that a wedge-weighted random vertex has degree in ``[d_min, beta * d_max]``."""
    if not 0.0 < beta <= 1.0:
        raise BoundDomainError(f"beta={beta} outside (0, 1]")
    return small_degree_probability_of_sequence(g.degrees, beta)


def synth_degree_sequence(model: PowerLawModel) -> np.ndarray:
    """Degree multiset with ``max(1, round(n_d))`` vertices of each degree.

    Every degree in ``[d_min, d_max]`` is present at least once.
    """
    _check_degrees(model.d_min, model.d_max)
    if round(model.expected_count(model.d_max)) < 1:
        raise BoundDomainError(
            f"n={model.n} too small: expected count at d_max={model.d_max} rounds to 0"
        )
    degrees = np.arange(model.d_min, model.d_max + 1)
    counts = [max(1, round(model.expected_count(int(d)))) for d in degrees]
    return np.repeat(degrees, counts)


def fit_power_law_slope(stats: DegreeStats) -> float | None:
    """Least-squares slope of ``log n_d`` against ``log d`` over degrees >= d_min."""
    if len(stats.unique_degrees) < 2:
        return None
    d = np.asarray(stats.unique_degrees, dtype=float)
    counts = np.asarray([stats.histogram[int(k)] for k in stats.unique_degrees], dtype=float)
    slope, _ = np.polyfit(np.log(d), np.log(counts), 1)
    return float(slope)


def alpha_sweep(c_g: float, alphas) -> list[dict]:
    """Tail bounds over a grid of thresholds; undefined entries are ``None``."""
    rows = []
    for a in alphas:
        a = float(a)
        rows.append(
            {
                "alpha": a,
                "markov_upper": markov_upper_bound(c_g, a) if c_g < a <= 1.0 else None,
                "lower_tail": lower_tail_bound(c_g, a) if 0.0 <= a < c_g else None,
            }
        )
    return rows


def beta_sweep(c_g: float, d_min: int, d_max: int, betas) -> list[dict]:
    """Guarantees over a grid of ``beta``; rows with ``eta >= C_g`` are skipped."""
    rows = []
    for b in betas:
        b = float(b)
        e = eta(d_min, d_max, b)
        if e >= c_g:
            continue
        rows.append(
            {
                "beta": b,
                "eta": e,
                "size_guarantee": b * d_max,
                "density_guarantee": (c_g - e) / (1.0 - e),
            }
        )
    if not rows:
        raise BoundDomainError(
            f"eta >= C_g for every requested beta; admissible range is "
            f"({d_min / d_max:.6g}, {beta_max(c_g, d_min, d_max)})"
        )
    return rows


def degree_bound_profile(g: Graph, vm, c_g: float, beta_lo: float = 0.05) -> list[dict]:
    """Guarantee versus best actual neighborhood density, per unique degree.

    Covers degrees ``d`` with ``beta = d / d_max`` in ``[beta_lo, beta_max)``.
    """
    from .metrics import ndp

    stats = degree_stats(g)
    if stats.d_min is None or stats.d_max <= stats.d_min:
        raise BoundDomainError("graph needs at least two distinct degrees >= 2")
    bmax = beta_max(c_g, stats.d_min, stats.d_max)
    if bmax is None:
        return []
    rows = []
    for entry in ndp(g, vm).entries:
        b = entry.degree / stats.d_max
        if not (beta_lo <= b < bmax) or b <= stats.d_min / stats.d_max or b >= 1.0:
            continue
        e = _eta(stats.d_min, stats.d_max, b)
        guarantee = (c_g - e) / (1.0 - e)
        rows.append(
            {
                "degree": entry.degree,
                "beta": b,
                "eta": e,
                "density_guarantee": guarantee,
                "max_density": entry.max_density,
                "violates": entry.max_density < guarantee,
            }
        )
    return rows


def neighborhood_guarantee_witness(g: Graph, vm, c_g: float, beta: float) -> WitnessReport:
    """Look for a neighborhood meeting the size and density guarantee.

    Among vertices of degree ``>= beta * d_max`` the densest neighborhood is
    reported (lowest id on ties), whether or not it meets the guarantee.
    """
    stats = degree_stats(g)
    if stats.d_min is None:
        raise BoundDomainError("no vertex of degree >= 2")
    rep = neighborhood_guarantee(c_g, stats.d_min, stats.d_max, beta)
    big = np.flatnonzero(vm.degree >= rep.size_guarantee)
    if len(big) == 0:
        return WitnessReport(beta, rep.size_guarantee, rep.density_guarantee, False, None, None, None, 0)
    best = int(big[np.argmax(vm.local_cc[big])])
    dens = float(vm.local_cc[best])
    return WitnessReport(
        beta=beta,
        size_guarantee=rep.size_guarantee,
        density_guarantee=rep.density_guarantee,
        found=dens >= rep.density_guarantee,
        witness=best,
        witness_degree=int(vm.degree[best]),
        witness_density=dens,
        candidates=len(big),
    )
