"""Exact time derivatives of oscillatory terms (c0 + c1*t) * trig(w*(t+shift)).

The closed-form solutions and symmetry-group flows are finite sums of such
terms, so repeated analytic differentiation gives exact phase states without
any symbolic machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import PhaseState


@dataclass(frozen=True)
class TrigTerm:
    c0: float
    c1: float
    omega: float
    shift: float = 0.0
    cosine: bool = False

    def value(self, t: float) -> float:
        arg = self.omega * (t + self.shift)
        trig = math.cos(arg) if self.cosine else math.sin(arg)
        return (self.c0 + self.c1 * t) * trig


def d_dt(terms: list[TrigTerm]) -> list[TrigTerm]:
    """Differentiate a term list once with respect to t."""
    out = []
    for u in terms:
        if u.c1 != 0.0:
            out.append(TrigTerm(u.c1, 0.0, u.omega, u.shift, u.cosine))
        # trig' : sin -> +cos, cos -> -sin
        sign = -1.0 if u.cosine else 1.0
        out.append(TrigTerm(sign * u.omega * u.c0, sign * u.omega * u.c1,
                            u.omega, u.shift, not u.cosine))
    return out


def eval_terms(terms: list[TrigTerm], t: float) -> float:
    return sum(u.value(t) for u in terms)


def phase_state(terms: list[TrigTerm], t: float) -> PhaseState:
    """Evaluate q and its first three exact derivatives at time t."""
    values = []
    current = terms
    for _ in range(4):
        values.append(eval_terms(current, t))
        current = d_dt(current)
    return PhaseState(*values)
