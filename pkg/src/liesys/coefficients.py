"""Time-dependent frequency profiles omega(t).

All systems in a coupled run share one profile. Profiles are frozen
dataclasses; ``omega_sq(t)`` is the hot path called from every vector field.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class Constant:
    omega0: float

    def omega_sq(self, t):
        return self.omega0 * self.omega0

    def to_dict(self):
        return {"kind": "constant", "omega0": self.omega0}


@dataclass(frozen=True)
class Chirp:
    """omega(t) = a + b*t."""

    a: float
    b: float

    def omega_sq(self, t):
        w = self.a + self.b * t
        return w * w

    def to_dict(self):
        return {"kind": "chirp", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Sinusoidal:
    """omega^2(t) = a + b*cos(c*t + phase).

    ``phase = -pi/2`` turns the cosine into a sine.
    """

    a: float
    b: float
    c: float
    phase: float = 0.0

    def __post_init__(self):
        if self.a - abs(self.b) < 0:
            raise ConfigurationError(
                f"sinusoidal profile needs a - |b| >= 0, got a={self.a}, b={self.b}",
                "coefficients.Sinusoidal",
            )

    def omega_sq(self, t):
        return self.a + self.b * math.cos(self.c * t + self.phase)

    def to_dict(self):
        return {"kind": "sinusoidal", "a": self.a, "b": self.b, "c": self.c,
                "phase": self.phase}


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear omega(t) through ``(t, omega)`` samples.

    Interpolation is done on omega, not omega^2.
    """

    samples: tuple
    _ts: tuple = field(init=False, repr=False, compare=False)
    _ws: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((float(t), float(w)) for t, w in self.samples)
        if len(pts) < 2:
            raise ConfigurationError("tabulated profile needs at least two samples",
                                     "coefficients.Tabulated")
        ts = tuple(p[0] for p in pts)
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ConfigurationError("tabulated sample times must be strictly increasing",
                                     "coefficients.Tabulated")
        object.__setattr__(self, "samples", pts)
        object.__setattr__(self, "_ts", ts)
        object.__setattr__(self, "_ws", tuple(p[1] for p in pts))

    def omega_value(self, t):
        ts, ws = self._ts, self._ws
        if not ts[0] <= t <= ts[-1]:
            raise DomainError(f"t={t} outside tabulated range [{ts[0]}, {ts[-1]}]",
                              "coefficients.omega_sq_at")
        i = bisect_right(ts, t) - 1
        if ts[i] == t:
            return ws[i]
        s = (t - ts[i]) / (ts[i + 1] - ts[i])
        return ws[i] + s * (ws[i + 1] - ws[i])

    def omega_sq(self, t):
        w = self.omega_value(t)
        return w * w

    def to_dict(self):
        return {"kind": "tabulated", "samples": [list(p) for p in self.samples]}


OmegaProfile = Constant | Chirp | Sinusoidal | Tabulated


def omega_sq_at(profile, t):
    """Evaluate omega^2(t)."""
    return profile.omega_sq(t)


def omega_at(profile, t):
    """Evaluate omega(t) >= 0 as the square root of omega^2(t)."""
    return math.sqrt(profile.omega_sq(t))


def profile_from_dict(d):
    """Build a profile from its tagged-object form, e.g. ``{"kind": "constant", "omega0": 1}``."""
    try:
        kind = d["kind"]
    except (KeyError, TypeError):
        raise ConfigurationError("omega profile needs a 'kind' field", "coefficients.profile_from_dict")
    try:
        if kind == "constant":
            return Constant(float(d["omega0"]))
        if kind == "chirp":
            return Chirp(float(d["a"]), float(d["b"]))
        if kind == "sinusoidal":
            return Sinusoidal(float(d["a"]), float(d["b"]), float(d["c"]),
                              float(d.get("phase", 0.0)))
        if kind == "tabulated":
            return Tabulated(tuple(tuple(p) for p in d["samples"]))
    except KeyError as exc:
        raise ConfigurationError(f"omega profile '{kind}' is missing field {exc}",
                                 "coefficients.profile_from_dict")
    raise ConfigurationError(f"unknown omega profile kind '{kind}'", "coefficients.profile_from_dict")
