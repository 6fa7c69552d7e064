"""Heralded second-order correlation estimators.

The direct estimator uses measured triple coincidences,

    g2 = (n_is1s2 * n_i) / (n_is1 * n_is2),

where the common acquisition duration cancels exactly; the count arithmetic
is done in exact rationals before the final float conversion.  The
accidentals-only estimator assumes every triple is a true two-fold plus an
accidental in the remaining arm,

    g2 = R_i * dt * (R_s1 / R_is1 + R_s2 / R_is2),

with ``dt`` the coincidence window.  Errors treat each raw count as an
independent Poisson variable and propagate to first order; the covariance
between nested counts (e.g. n_i and n_is1) is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .coincidence import CoincidenceSpec, CountSummary, summarize
from .errors import InsufficientDataError
from .timetags import TagStream

DIRECT = "direct"
ACCIDENTAL = "accidental"


@dataclass(frozen=True)
class G2Estimate:
    value: float
    std_err: float
    method: str
    # Set when no triple was observed: the value 0 is then a floor, not a
    # measurement, and carries no meaningful error bar.
    insufficient_triples: bool = False


@dataclass(frozen=True)
class G2Curve:
    step_ps: int
    points: list  # [(tau_ps, G2Estimate), ...] with strictly increasing tau

    def __post_init__(self):
        taus = [tau for tau, _ in self.points]
        if any(b - a != self.step_ps for a, b in zip(taus, taus[1:])):
            raise ValueError("delay-scan points must be evenly spaced")

    def minimum(self):
        return min(self.points, key=lambda p: p[1].value)


def _require_twofolds(c: CountSummary) -> None:
    if c.n_is1 == 0 or c.n_is2 == 0:
        raise InsufficientDataError(
            f"undefined estimate: two-fold counts n_is1={c.n_is1}, n_is2={c.n_is2}"
        )


def g2_direct(c: CountSummary) -> G2Estimate:
    """Triple-coincidence estimator; zero exactly when no triple was seen."""
    _require_twofolds(c)
    if c.n_is1s2 == 0:
        return G2Estimate(0.0, 0.0, DIRECT, insufficient_triples=True)
    value = Fraction(c.n_is1s2 * c.n_i, c.n_is1 * c.n_is2)
    rel_var = 1 / c.n_is1s2 + 1 / c.n_i + 1 / c.n_is1 + 1 / c.n_is2
    g = float(value)
    return G2Estimate(g, g * math.sqrt(rel_var), DIRECT)


def g2_accidental(c: CountSummary, window_ps: int) -> G2Estimate:
    """Accidentals-only estimator; linear in the window width."""
    _require_twofolds(c)
    a1 = Fraction(c.n_s1, c.n_is1)
    a2 = Fraction(c.n_s2, c.n_is2)
    value = Fraction(c.n_i * window_ps, c.duration_ps) * (a1 + a2)
    var_a = float(a1) ** 2 * (1 / c.n_s1 + 1 / c.n_is1) if c.n_s1 else 0.0
    var_a += float(a2) ** 2 * (1 / c.n_s2 + 1 / c.n_is2) if c.n_s2 else 0.0
    rel_var = 1 / c.n_i + var_a / float(a1 + a2) ** 2
    g = float(value)
    return G2Estimate(g, g * math.sqrt(rel_var), ACCIDENTAL)


def g2_delay_scan(
    stream: TagStream,
    base_spec: CoincidenceSpec,
    step_ps: int = 500,
    n_steps_each_side: int = 10,
) -> G2Curve:
    """Direct g2 versus an extra electronic delay on the second signal arm."""
    points = []
    for k in range(-n_steps_each_side, n_steps_each_side + 1):
        tau = k * step_ps
        spec = replace(base_spec, delay_s2_ps=base_spec.delay_s2_ps + tau)
        points.append((tau, g2_direct(summarize(stream, spec))))
    return G2Curve(step_ps, points)
