"""Central potentials: built-in catalog and a small composable form.

A potential is a sum of terms ``c * r**p * exp(-a*r**2 - b*r)``, an optional
screened-Coulomb term ``(q/r) * erf(mu*r)``, and an optional Eckart well kept
in closed form.  ``tail_Z`` records the Coulomb strength of the ``Z/r`` tail
for scattering.  All quantities are in the internal units ``hbar = M = 1``;
``energy_unit`` is the conversion factor back to the user's energy unit (MeV
for the alpha-alpha potential) and is metadata only.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .specfun import erf

__all__ = ["PotentialSpec", "builtin", "evaluate", "from_json", "to_json"]

# hbar^2/M in MeV fm^2 for the alpha-alpha system
_ALPHA_ALPHA_UNIT = 20.736


@dataclasses.dataclass(frozen=True)
class PotentialSpec:
    """Immutable description of a central potential.

    Attributes
    ----------
    label : str
    terms : tuple of (c, p, a, b)
        Each term contributes ``c * r**p * exp(-a*r**2 - b*r)``.
    coulomb_erf : (q, mu) or None
        Screened Coulomb term ``(q/r) * erf(mu*r)``.
    tail_Z : float
        Strength of the ``Z/r`` tail (0 for a neutral potential).
    eckart : (b, c) or None
        Eckart well ``-4 b^2 beta e^{-2br} / (1 + beta e^{-2br})^2`` with
        ``beta = (b - c)/(b + c)``, kept in closed form.
    energy_unit : float
        Energy conversion factor for reporting; not serialized.
    """

    label: str
    terms: tuple = ()
    coulomb_erf: tuple | None = None
    tail_Z: float = 0.0
    eckart: tuple | None = None
    energy_unit: float = 1.0

    def __post_init__(self):
        cleaned = []
        for term in self.terms:
            c, p, a, b = (float(v) for v in term)
            if p <= -2.0:
                raise ValueError("term power must exceed -2 (less singular than 1/r^2)")
            if a < 0.0 or (a == 0.0 and b < 0.0):
                raise ValueError("term must not grow exponentially")
            cleaned.append((c, p, a, b))
        object.__setattr__(self, "terms", tuple(cleaned))
        if self.coulomb_erf is not None:
            q, mu = (float(v) for v in self.coulomb_erf)
            if mu <= 0.0:
                raise ValueError("erf range parameter must be positive")
            object.__setattr__(self, "coulomb_erf", (q, mu))
        object.__setattr__(self, "tail_Z", float(self.tail_Z))
        if self.eckart is not None:
            b, c = (float(v) for v in self.eckart)
            if b <= abs(c):
                raise ValueError("Eckart well requires b > |c|")
            object.__setattr__(self, "eckart", (b, c))
        object.__setattr__(self, "energy_unit", float(self.energy_unit))


def evaluate(spec, r):
    """Potential value at radius ``r > 0`` (scalar or array)."""
    rs = np.asarray(r, dtype=float)
    scalar = rs.ndim == 0
    rr = np.atleast_1d(rs)
    if np.any(rr <= 0.0) or not np.all(np.isfinite(rr)):
        raise ValueError("r must be positive and finite")
    total = np.zeros_like(rr)
    for c, p, a, b in spec.terms:
        total += c * rr**p * np.exp(-a * rr**2 - b * rr)
    if spec.coulomb_erf is not None:
        q, mu = spec.coulomb_erf
        total += q * erf(mu * rr) / rr
    if spec.eckart is not None:
        b, c = spec.eckart
        beta = (b - c) / (b + c)
        damp = np.exp(-2.0 * b * rr)
        total += -4.0 * b**2 * beta * damp / (1.0 + beta * damp) ** 2
    if scalar:
        return float(total[0])
    return total.reshape(rs.shape)


def coulomb_tail(spec, r):
    """The ``Z/r`` tail of the potential (0 for neutral systems)."""
    return spec.tail_Z / np.asarray(r, dtype=float)


def builtin(name, **params):
    """Construct one of the catalogued potentials.

    Parameters
    ----------
    name : str
        One of ``harmonic``, ``coulomb``, ``eckart``, ``buck_alpha_alpha``.
    **params
        ``Z`` for coulomb (default -1); ``b``, ``c`` for eckart
        (default 2, -1).
    """
    if name == "harmonic":
        if params:
            raise ValueError(f"unknown parameters: {sorted(params)}")
        return PotentialSpec(label="harmonic", terms=((0.5, 2.0, 0.0, 0.0),))
    if name == "coulomb":
        Z = float(params.pop("Z", -1.0))
        if params:
            raise ValueError(f"unknown parameters: {sorted(params)}")
        return PotentialSpec(label="coulomb", terms=((Z, -1.0, 0.0, 0.0),), tail_Z=Z)
    if name == "eckart":
        b = float(params.pop("b", 2.0))
        c = float(params.pop("c", -1.0))
        if params:
            raise ValueError(f"unknown parameters: {sorted(params)}")
        return PotentialSpec(label=f"eckart(b={b:g},c={c:g})", eckart=(b, c))
    if name == "buck_alpha_alpha":
        if params:
            raise ValueError(f"unknown parameters: {sorted(params)}")
        u = _ALPHA_ALPHA_UNIT
        return PotentialSpec(
            label="buck_alpha_alpha",
            terms=((-122.6225 / u, 0.0, 0.22, 0.0),),
            coulomb_erf=(4.0 * 1.44 / u, 0.75),
            tail_Z=4.0 * 1.44 / u,
            energy_unit=u,
        )
    raise ValueError(f"unknown potential: {name!r}")


def to_json(spec):
    """Serialize a spec to the JSON form (energy_unit is metadata, omitted)."""
    doc = {"label": spec.label, "terms": [
        {"c": c, "p": p, "a": a, "b": b} for c, p, a, b in spec.terms
    ], "tailZ": spec.tail_Z}
    if spec.coulomb_erf is not None:
        doc["coulombErf"] = {"q": spec.coulomb_erf[0], "mu": spec.coulomb_erf[1]}
    if spec.eckart is not None:
        doc["eckart"] = {"b": spec.eckart[0], "c": spec.eckart[1]}
    return json.dumps(doc, indent=2, sort_keys=True)


def from_json(text):
    """Parse the JSON form produced by ``to_json``."""
    doc = json.loads(text)
    terms = tuple((t["c"], t["p"], t.get("a", 0.0), t.get("b", 0.0)) for t in doc.get("terms", ()))
    erf_term = None
    if "coulombErf" in doc:
        erf_term = (doc["coulombErf"]["q"], doc["coulombErf"]["mu"])
    eck = None
    if "eckart" in doc:
        eck = (doc["eckart"]["b"], doc["eckart"]["c"])
    return PotentialSpec(
        label=doc.get("label", "user"),
        terms=terms,
        coulomb_erf=erf_term,
        tail_Z=doc.get("tailZ", 0.0),
        eckart=eck,
    )
