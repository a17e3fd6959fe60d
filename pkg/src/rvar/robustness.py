"""Sensitivity of orthant risk measures to point contamination.

Each sensitivity function reports the first-order response of a measure
when the conditional law of the free coordinate (given the fixed one) is
mixed with a point mass at z.  VaR and RVaR targets have bounded, piecewise
responses; the TVaR target grows linearly in z and is unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dependence import BivariateModel
from .errors import DomainError, ZeroDensityError
from .marginals import LevelRange, is_divergent
from .orthant import _joint_cdf, _margins, lower_rvar, lower_tvar, lower_var, upper_rvar, upper_var

_DENSITY_H_REL = 1e-6
_DENSITY_FLOOR = 1e-12


def _cond_lower_cdf(b, fixed_index, x_fixed, y, a_fixed):
    return _joint_cdf(b, fixed_index, x_fixed, y) / a_fixed


def _cond_upper_cdf(b, fixed_index, x_fixed, y, a_fixed):
    _, free_m = _margins(b, fixed_index)
    joint = _joint_cdf(b, fixed_index, x_fixed, y)
    return (free_m.cdf(y) - joint) / (1.0 - a_fixed)


def _central_density(cdf1, y, scale, lo_support):
    h = _DENSITY_H_REL * scale
    lo = y - h
    if lo < lo_support:
        dens = (cdf1(y + h) - cdf1(y)) / h
    else:
        dens = (cdf1(y + h) - cdf1(lo)) / (2.0 * h)
    if dens < _DENSITY_FLOOR:
        raise ZeroDensityError(
            f"conditional density ~{dens:.3g} at y={y:.6g} is numerically zero"
        )
    return dens


def _lower_var_parts(b, alpha, x_fixed, fixed_index):
    fixed_m, free_m = _margins(b, fixed_index)
    a_fixed = fixed_m.cdf(x_fixed)
    lv = lower_var(b, alpha, x_fixed, fixed_index)
    dens = _central_density(
        lambda y: _cond_lower_cdf(b, fixed_index, x_fixed, y, a_fixed),
        lv,
        free_m.typical_scale,
        free_m.support()[0],
    )
    return a_fixed, lv, dens


def sens_lower_var(b: BivariateModel, alpha: float, x_fixed: float, z: float, fixed_index: int = 1) -> float:
    a_fixed, lv, dens = _lower_var_parts(b, alpha, x_fixed, fixed_index)
    if z < lv:
        return -(a_fixed - alpha) / (dens * a_fixed)
    if z > lv:
        return alpha / (dens * a_fixed)
    return 0.0


def _upper_var_parts(b, alpha, x_fixed, fixed_index):
    fixed_m, free_m = _margins(b, fixed_index)
    a_fixed = fixed_m.cdf(x_fixed)
    uv = upper_var(b, alpha, x_fixed, fixed_index)
    dens = _central_density(
        lambda y: _cond_upper_cdf(b, fixed_index, x_fixed, y, a_fixed),
        uv,
        free_m.typical_scale,
        free_m.support()[0],
    )
    return a_fixed, uv, dens


def sens_upper_var(b: BivariateModel, alpha: float, x_fixed: float, z: float, fixed_index: int = 1) -> float:
    a_fixed, uv, dens = _upper_var_parts(b, alpha, x_fixed, fixed_index)
    if z < uv:
        return -(1.0 - alpha) / (dens * (1.0 - a_fixed))
    if z > uv:
        return (alpha - a_fixed) / (dens * (1.0 - a_fixed))
    return 0.0


def _lower_rvar_parts(b, levels, x_fixed, fixed_index):
    a1, a2 = levels.alpha1, levels.alpha2
    if a2 >= 1.0:
        raise DomainError("alpha2 must be below 1 here; use the tvar sensitivity")
    fixed_m, free_m = _margins(b, fixed_index)
    a_fixed = fixed_m.cdf(x_fixed)
    q2 = free_m.quantile(a2)
    b_top = _joint_cdf(b, fixed_index, x_fixed, q2)
    lv = lower_var(b, a1, x_fixed, fixed_index)
    measure = lower_rvar(b, levels, x_fixed, fixed_index)
    return a_fixed, b_top, lv, q2, measure


def _eval_sens_lower_rvar(parts, a1, z):
    a_fixed, b_top, lv, q2, measure = parts
    width = b_top - a1
    if z < lv:
        raw = ((a_fixed - a1) * lv - (a_fixed - b_top) * q2) / width
    elif z <= q2:
        raw = (z * a_fixed - a1 * lv - (a_fixed - b_top) * q2) / width
    else:
        raw = (b_top * q2 - a1 * lv) / width
    return raw - measure


def sens_lower_rvar(b: BivariateModel, levels: LevelRange, x_fixed: float, z: float, fixed_index: int = 1) -> float:
    parts = _lower_rvar_parts(b, levels, x_fixed, fixed_index)
    return _eval_sens_lower_rvar(parts, levels.alpha1, z)


def _upper_rvar_parts(b, levels, x_fixed, fixed_index):
    a1, a2 = levels.alpha1, levels.alpha2
    if a2 >= 1.0:
        raise DomainError("alpha2 must be below 1 for the upper rvar sensitivity")
    fixed_m, free_m = _margins(b, fixed_index)
    a_fixed = fixed_m.cdf(x_fixed)
    if a1 <= 0.0:
        c_bot = a_fixed
        q1 = free_m.support()[0]
        if not math.isfinite(q1):
            raise DomainError("alpha1 = 0 needs a free margin bounded below")
    else:
        q1 = free_m.quantile(a1)
        c_bot = a_fixed + (1.0 - a_fixed) * _cond_upper_cdf(b, fixed_index, x_fixed, q1, a_fixed)
    uv2 = upper_var(b, a2, x_fixed, fixed_index)
    measure = upper_rvar(b, levels, x_fixed, fixed_index)
    return a_fixed, c_bot, q1, uv2, measure


def _eval_sens_upper_rvar(parts, a2, z):
    a_fixed, c_bot, q1, uv2, measure = parts
    width = a2 - c_bot
    if z < q1:
        raw = ((1.0 - c_bot) * q1 - (1.0 - a2) * uv2) / width
    elif z <= uv2:
        raw = (z * (1.0 - a_fixed) - (c_bot - a_fixed) * q1 - (1.0 - a2) * uv2) / width
    else:
        raw = ((a2 - a_fixed) * uv2 - (c_bot - a_fixed) * q1) / width
    return raw - measure


def sens_upper_rvar(b: BivariateModel, levels: LevelRange, x_fixed: float, z: float, fixed_index: int = 1) -> float:
    parts = _upper_rvar_parts(b, levels, x_fixed, fixed_index)
    return _eval_sens_upper_rvar(parts, levels.alpha2, z)


def _lower_tvar_parts(b, alpha, x_fixed, fixed_index):
    fixed_m, _ = _margins(b, fixed_index)
    a_fixed = fixed_m.cdf(x_fixed)
    lv = lower_var(b, alpha, x_fixed, fixed_index)
    measure = lower_tvar(b, alpha, x_fixed, fixed_index)
    if is_divergent(measure):
        raise DomainError("lower tvar diverges for this model; sensitivity undefined")
    return a_fixed, lv, measure


def _eval_sens_lower_tvar(parts, alpha, z):
    a_fixed, lv, measure = parts
    if z < lv:
        return lv - measure
    return (z * a_fixed - alpha * lv) / (a_fixed - alpha) - measure


def sens_lower_tvar(b: BivariateModel, alpha: float, x_fixed: float, z: float, fixed_index: int = 1) -> float:
    parts = _lower_tvar_parts(b, alpha, x_fixed, fixed_index)
    return _eval_sens_lower_tvar(parts, alpha, z)


@dataclass(frozen=True)
class SensitivityProfile:
    target: str
    z_grid: np.ndarray
    values: np.ndarray
    bounded: bool
    sup_abs: float
    breakpoints: tuple


_TARGETS = ("lower_var", "upper_var", "lower_rvar", "upper_rvar", "lower_tvar")


def branch_label(target: str, z: float, breakpoints: tuple) -> str:
    """Name the piece of the sensitivity curve a given z falls on."""
    if target in ("lower_var", "upper_var"):
        (bp,) = breakpoints
        if z < bp:
            return "below"
        if z > bp:
            return "above"
        return "at"
    if target in ("lower_rvar", "upper_rvar"):
        left, right = breakpoints
        if z < left:
            return "below"
        if z > right:
            return "above"
        return "middle"
    (bp,) = breakpoints
    return "below" if z < bp else "above"


def sensitivity_profile(
    b: BivariateModel,
    target: str,
    x_fixed: float,
    alpha: float | None = None,
    levels: LevelRange | None = None,
    z_grid=None,
    fixed_index: int = 1,
) -> SensitivityProfile:
    """Evaluate a sensitivity curve on a z grid with its worst-case size.

    VaR targets need ``alpha``; RVaR targets need ``levels``; the TVaR
    target needs ``alpha`` (the upper level is 1 by definition).
    """
    if target not in _TARGETS:
        raise DomainError(f"unknown sensitivity target {target!r}")
    _, free_m = _margins(b, fixed_index)
    if target == "lower_var":
        if alpha is None:
            raise DomainError("lower_var sensitivity needs alpha")
        a_fixed, lv, dens = _lower_var_parts(b, alpha, x_fixed, fixed_index)
        breakpoints = (lv,)
        left = -(a_fixed - alpha) / (dens * a_fixed)
        right = alpha / (dens * a_fixed)
        evaluate = lambda z: left if z < lv else (right if z > lv else 0.0)
        bounded, sup_abs = True, max(abs(left), abs(right))
    elif target == "upper_var":
        if alpha is None:
            raise DomainError("upper_var sensitivity needs alpha")
        a_fixed, uv, dens = _upper_var_parts(b, alpha, x_fixed, fixed_index)
        breakpoints = (uv,)
        left = -(1.0 - alpha) / (dens * (1.0 - a_fixed))
        right = (alpha - a_fixed) / (dens * (1.0 - a_fixed))
        evaluate = lambda z: left if z < uv else (right if z > uv else 0.0)
        bounded, sup_abs = True, max(abs(left), abs(right))
    elif target == "lower_rvar":
        if levels is None:
            raise DomainError("lower_rvar sensitivity needs levels")
        parts = _lower_rvar_parts(b, levels, x_fixed, fixed_index)
        breakpoints = (parts[2], parts[3])
        evaluate = lambda z: _eval_sens_lower_rvar(parts, levels.alpha1, z)
        lo_val = evaluate(breakpoints[0] - 1.0)
        hi_val = evaluate(breakpoints[1] + 1.0)
        bounded, sup_abs = True, max(abs(lo_val), abs(hi_val))
    elif target == "upper_rvar":
        if levels is None:
            raise DomainError("upper_rvar sensitivity needs levels")
        parts = _upper_rvar_parts(b, levels, x_fixed, fixed_index)
        breakpoints = (parts[2], parts[3])
        evaluate = lambda z: _eval_sens_upper_rvar(parts, levels.alpha2, z)
        lo_val = evaluate(breakpoints[0] - 1.0)
        hi_val = evaluate(breakpoints[1] + 1.0)
        bounded, sup_abs = True, max(abs(lo_val), abs(hi_val))
    else:
        if alpha is None:
            raise DomainError("lower_tvar sensitivity needs alpha")
        parts = _lower_tvar_parts(b, alpha, x_fixed, fixed_index)
        breakpoints = (parts[1],)
        evaluate = lambda z: _eval_sens_lower_tvar(parts, alpha, z)
        bounded, sup_abs = False, math.inf
    if z_grid is None:
        lo = min(breakpoints) - 3.0 * free_m.typical_scale
        hi = max(breakpoints) + 3.0 * free_m.typical_scale
        z_grid = np.linspace(lo, hi, 101)
    z_grid = np.asarray(z_grid, dtype=float)
    values = np.array([evaluate(float(z)) for z in z_grid])
    return SensitivityProfile(
        target=target,
        z_grid=z_grid,
        values=values,
        bounded=bounded,
        sup_abs=sup_abs,
        breakpoints=breakpoints,
    )
