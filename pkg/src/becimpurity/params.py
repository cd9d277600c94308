"""Physical inputs in reduced units and the derived scales everyone consumes.

Conventions: hbar = 1 throughout. With the default construction (every field
equal to 1) the sound speed is 1, so momenta read in units of m*c and energies
in units of m*c**2; all documented example numbers assume that normalization.
All containers are frozen after construction and safe to share across workers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, ParameterDomainError

__all__ = [
    "SystemParams",
    "DerivedQuantities",
    "derive",
    "born_scattering_length",
    "renormalized_coupling",
]


@dataclass(frozen=True)
class DerivedQuantities:
    """Secondary scales computed once from a SystemParams."""

    c: float      # speed of sound, sqrt(n*U0/m)
    q_c: float    # critical impurity momentum, M*c
    m_r: float    # impurity-boson reduced mass
    a_s: float    # boson-boson Born scattering length, m*U0/(4*pi)


@dataclass(frozen=True)
class SystemParams:
    """All physical inputs of the model.

    m, M, n, U0 must be positive (a repulsive condensate with a real sound
    speed). The impurity-boson interaction may be given either as the bare
    coupling ``g`` or as the s-wave scattering length ``a``; whichever is
    omitted is derived to first Born order, g = 2*pi*a/m_r. When both are
    supplied they are kept independent (the rate formulas use g, the
    renormalized energy formulas use a) and a warning is emitted if they
    disagree grossly.
    """

    m: float = 1.0
    M: float = 1.0
    n: float = 1.0
    U0: float = 1.0
    g: float | None = None
    a: float | None = None

    def __post_init__(self):
        for name in ("m", "M", "n", "U0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)) or value <= 0:
                raise ParameterDomainError(f"{name} must be positive and finite, got {value!r}")
        for name in ("g", "a"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ParameterDomainError(f"{name} must be finite, got {value!r}")
        if self.g is None and self.a is None:
            raise ParameterDomainError("set at least one of g (bare coupling) or a (scattering length)")
        m_r = 1.0 / (1.0 / self.m + 1.0 / self.M)
        if self.g is None:
            object.__setattr__(self, "g", 2.0 * math.pi * self.a / m_r)
        elif self.a is None:
            object.__setattr__(self, "a", self.g * m_r / (2.0 * math.pi))
        elif self.g != 0.0:
            born = 2.0 * math.pi * self.a / m_r
            if abs(self.g - born) / abs(self.g) > 0.5:
                warnings.warn(
                    f"g={self.g} and a={self.a} disagree with the Born relation "
                    f"g = 2*pi*a/m_r = {born}; keeping both as given",
                    stacklevel=2,
                )

    def derived(self) -> DerivedQuantities:
        return derive(self)


def derive(params: SystemParams) -> DerivedQuantities:
    """Compute the derived scales; pure and deterministic."""
    c = math.sqrt(params.n * params.U0 / params.m)
    return DerivedQuantities(
        c=c,
        q_c=params.M * c,
        m_r=1.0 / (1.0 / params.m + 1.0 / params.M),
        a_s=born_scattering_length(params.U0, params.m),
    )


def born_scattering_length(U0: float, m: float) -> float:
    """Boson-boson scattering length to first Born order, m*U0/(4*pi)."""
    if not (math.isfinite(U0) and math.isfinite(m)):
        raise ParameterDomainError("U0 and m must be finite")
    return m * U0 / (4.0 * math.pi)


def renormalized_coupling(a: float, m_r: float, cutoff: float) -> float:
    """Cutoff-regularized impurity-boson coupling to second order in a.

    Returns (2*pi*a/m_r) * (1 + (2*a/pi)*cutoff): the first Born value plus
    the counterterm that cancels the linear large-momentum divergence of the
    second-order energy. Affine in the cutoff by construction.
    """
    if not math.isfinite(a):
        raise ParameterDomainError(f"a must be finite, got {a!r}")
    if not (math.isfinite(m_r) and m_r > 0):
        raise ParameterDomainError(f"m_r must be positive and finite, got {m_r!r}")
    if not math.isfinite(cutoff) or cutoff < 0:
        raise DomainError(f"cutoff must be nonnegative, got {cutoff!r}")
    return (2.0 * math.pi * a / m_r) * (1.0 + (2.0 * a / math.pi) * cutoff)
