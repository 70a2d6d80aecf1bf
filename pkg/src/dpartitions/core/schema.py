# stdlib
from typing import Any, Dict, List, Tuple

# third party
import mpmath
from pydantic import BaseModel, validator


def format_real(value: Any, digits: int = 30) -> str:
    """Deterministic decimal rendering of an mpmath number (or int)."""
    if isinstance(value, int):
        return str(value)
    return mpmath.nstr(mpmath.mpf(value), digits, strip_zeros=False)


class CongruenceClass(BaseModel):
    """
    The residue class of parts counted by D_{r,t}(n): parts m with m = r (mod t).

    Constructor Args:
        r: int
            Representative, 0 < r <= t. r = t selects the multiples of t.
        t: int
            Modulus, t >= 1.
    """

    r: int
    t: int

    class Config:
        frozen = True

    @validator("t")
    def _validate_t(cls: Any, t: int, values: Dict) -> int:
        if t < 1:
            raise ValueError(f"Invalid modulus t = {t}")
        r = values.get("r")
        if r is not None and not (0 < r <= t):
            raise ValueError(f"Invalid class: need 0 < r <= t, got r = {r}, t = {t}")
        return t

    def ratio(self) -> Tuple[int, int]:
        return self.r, self.t

    def contains(self, part: int) -> bool:
        return part % self.t == self.r % self.t

    def __str__(self) -> str:
        return f"({self.r},{self.t})"


class MainTermValue(BaseModel):
    n: int
    cls: CongruenceClass
    value: Any
    terms_used: int

    class Config:
        arbitrary_types_allowed = True

    @validator("terms_used")
    def _validate_terms(cls: Any, v: int) -> int:
        if v not in (1, 2):
            raise ValueError(f"terms_used must be 1 or 2, got {v}")
        return v


class VValue(BaseModel):
    """One evaluation of the contour integral V_s(n) with its absolute uncertainty."""

    s: int
    n: int
    value: Any
    abs_uncertainty: Any
    route: str

    class Config:
        arbitrary_types_allowed = True

    @validator("route")
    def _validate_route(cls: Any, v: str) -> str:
        if v not in ("quadrature", "bessel"):
            raise ValueError(f"Unknown route {v}")
        return v

    @validator("abs_uncertainty")
    def _validate_uncertainty(cls: Any, v: Any) -> Any:
        if v < 0:
            raise ValueError("abs_uncertainty must be non-negative")
        return v

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "value": format_real(self.value),
            "abs_uncertainty": format_real(self.abs_uncertainty, 6),
            "route": self.route,
        }


class EffectiveReport(BaseModel):
    cls: CongruenceClass
    n: int
    d_exact: int
    m_value: Any
    m_uncertainty: Any
    err_bound: Any
    precision: int

    class Config:
        arbitrary_types_allowed = True

    def deviation(self) -> Any:
        return abs(mpmath.mpf(self.d_exact) - self.m_value) + self.m_uncertainty

    @property
    def passed(self) -> bool:
        return bool(self.deviation() <= self.err_bound)

    def to_dict(self) -> dict:
        return {
            "r": self.cls.r,
            "t": self.cls.t,
            "n": self.n,
            "d_exact": str(self.d_exact),
            "m_value": format_real(self.m_value),
            "m_uncertainty": format_real(self.m_uncertainty, 6),
            "err_bound": format_real(self.err_bound, 12),
            "pass": self.passed,
        }


class InequalityReport(BaseModel):
    t: int
    n_t: int
    scan_limit_used: int
    stability_window: int
    counterexamples: List[Tuple[int, int, int]]
    exhaustive_to: int

    @validator("n_t")
    def _validate_nt(cls: Any, v: int, values: Dict) -> int:
        t = values.get("t")
        if t is not None and 3 * v <= 400 * t * t:
            raise ValueError(f"n_t = {v} must exceed 400t^2/3 for t = {t}")
        return v

    @validator("counterexamples")
    def _validate_triples(cls: Any, v: List, values: Dict) -> List:
        t = values.get("t")
        for r, s, n in v:
            if t is not None and not (0 < r < s <= t):
                raise ValueError(f"Invalid counterexample triple {(r, s, n)}")
        return v

    @property
    def full_reproduction(self) -> bool:
        return self.exhaustive_to >= self.n_t

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "n_t": self.n_t,
            "scan_limit_used": self.scan_limit_used,
            "stability_window": self.stability_window,
            "exhaustive_to": self.exhaustive_to,
            "full_reproduction": self.full_reproduction,
            "counterexamples": [list(c) for c in self.counterexamples],
        }


class OutputEnvelope(BaseModel):
    """Machine-readable wrapper around every CLI result."""

    command: str
    parameters: Dict[str, Any]
    precision_bits: int
    results: Any
    warnings: List[str] = []
    version: str = ""


class ArcCheck(BaseModel):
    """One evaluation of an arc inequality: |lhs| < rhs at the sample point z."""

    name: str
    z: Any
    lhs: Any
    rhs: Any
    holds: bool
    flags: List[str] = []

    class Config:
        arbitrary_types_allowed = True

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "z_re": format_real(self.z.real, 12),
            "z_im": format_real(self.z.imag, 12),
            "lhs": format_real(self.lhs, 12),
            "rhs": format_real(self.rhs, 12),
            "holds": self.holds,
            "flags": list(self.flags),
        }
