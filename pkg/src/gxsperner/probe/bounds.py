"""Evaluators for the closed-form upper bounds, kept in the log domain."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from ..lattice import binomial

PRECISION_DPS = 50


@dataclass(frozen=True)
class LogReal:
    """A positive real stored as its natural logarithm."""

    log: mpmath.mpf

    def mantissa_exponent(self, digits: int = 12) -> tuple[float, int]:
        with mpmath.workdps(PRECISION_DPS):
            log10 = self.log / mpmath.log(10)
            exponent = int(mpmath.floor(log10))
            mantissa = float(mpmath.power(10, log10 - exponent))
        if mantissa >= 10:  # rounding at the boundary
            mantissa, exponent = mantissa / 10, exponent + 1
        return round(mantissa, digits), exponent

    def value(self) -> mpmath.mpf:
        with mpmath.workdps(PRECISION_DPS):
            return mpmath.exp(self.log)

    def render(self) -> str:
        m, e = self.mantissa_exponent()
        return f"{m}e{e}"

    def to_json(self) -> dict:
        return {"log": mpmath.nstr(self.log, 30), "approx": self.render()}


def fr_bound(t: int, l: int) -> LogReal:
    """``max{(1 - 1/1600)^t, exp(-l^2 / (16 t))} * 4^t`` for ``0 <= l <= t/3``."""
    if t <= 0 or not (0 <= l and 3 * l <= t):
        raise ValueError(f"bound not applicable: need 0 <= l <= t/3, got t={t}, l={l}")
    with mpmath.workdps(PRECISION_DPS):
        flat = t * mpmath.log(1 - mpmath.mpf(1) / 1600)
        gauss = -mpmath.mpf(l) ** 2 / (16 * t)
        return LogReal(+(max(flat, gauss) + t * mpmath.log(4)))


def fr_brute(s: int, l: int) -> int:
    """Largest ``|A| |B|`` over ``A, B ⊆ P[s]`` with ``|a ∩ b| != l`` throughout.

    For a fixed ``A`` the best ``B`` is every set compatible with all of ``A``,
    so it suffices to enumerate the ``2^(2^s)`` choices of ``A``.
    """
    if not 0 <= s <= 4:
        raise ValueError("brute force supports s <= 4 only")
    nv = 1 << s
    clash = [0] * nv
    for a in range(nv):
        for b in range(nv):
            if (a & b).bit_count() == l:
                clash[a] |= 1 << b
    everything = (1 << nv) - 1
    blocked = [0] * (1 << nv)
    best = 0
    for fam in range(1, 1 << nv):
        top = fam.bit_length() - 1
        blocked[fam] = blocked[fam ^ (1 << top)] | clash[top]
        value = fam.bit_count() * (everything & ~blocked[fam]).bit_count()
        if value > best:
            best = value
    return best


@dataclass(frozen=True)
class BoundValue:
    selector: str
    log_value: mpmath.mpf
    vacuous: bool
    exact: int | None = None

    def to_json(self) -> dict:
        out = {"selector": self.selector, "log": mpmath.nstr(self.log_value, 30),
               "approx": LogReal(self.log_value).render(), "vacuous": self.vacuous}
        if self.exact is not None:
            out["value"] = str(self.exact)
        return out


def paper_bounds(selector: str, n: int, p: int = 0, q: int = 1, w: int | None = None) -> BoundValue:
    """Right-hand sides of the three main bounds.

    ``thm1``: ``(q - p) binom(n, floor(n/2))``; ``thm2``: ``w + 2^200 2^n / n^(2/3)``;
    ``thm3``: ``100 exp(120 sqrt(log n)) 2^n / sqrt(n)``.  ``vacuous`` is set
    when the value is at least ``2^n``.
    """
    with mpmath.workdps(PRECISION_DPS):
        log2n = n * mpmath.log(2)
        if selector == "thm1":
            if q <= p:
                raise ValueError("need q > p")
            exact = (q - p) * binomial(n, n // 2)
            return BoundValue(selector, mpmath.log(exact), exact >= 2 ** n, exact)
        if selector == "thm2":
            if w is None:
                raise ValueError("thm2 needs the weight w")
            # log(w + 2^(200+n) / n^(2/3)), via log(2^n) + log(w / 2^n + 2^200 / n^(2/3))
            tail = mpmath.power(2, 200) / mpmath.power(n, mpmath.mpf(2) / 3)
            rel = tail + mpmath.mpf(w) / mpmath.power(2, n)
            log_value = log2n + mpmath.log(rel)
            return BoundValue(selector, +log_value, rel >= 1)
        if selector == "thm3":
            logn = mpmath.log(n)
            excess = mpmath.log(100) + 120 * mpmath.sqrt(logn) - logn / 2
            return BoundValue(selector, +(log2n + excess), excess >= 0)
    raise ValueError(f"unknown selector {selector!r}")
