"""Spherical quadrature and integral moduli of continuity.

For a step size ``h`` the modulus averages the directional norms over the
unit sphere,

    omega_{p,m,q}(h) = (int_{S^{d-1}} ||Delta_{h y}^m f||_p^q dS_y)^{1/q},

and ``q = inf`` takes the supremum of ``||Delta_y^m f||_p`` over ``|y| <= h``.
On the line the sphere is the two-point set ``{+1, -1}`` with unit weights.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_gegenbauer

from .differences import SnapWarning, as_order, delta_many
from .errors import DomainError
from .field import _check_p, sphere_area
from .profiles import DecayProfile, as_grid

__all__ = [
    "SphereRule",
    "ResolutionWarning",
    "sphere_rule",
    "default_rule",
    "omega",
    "omega_sup",
    "omega_sup_many",
    "omega_profile",
]

DEFAULT_ORDER = {2: 64, 3: 24}


class ResolutionWarning(UserWarning):
    """A doubled sphere rule moved a modulus by more than the self-check tolerance."""


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Nodes ``y_i`` on ``S^{d-1}`` and positive weights summing to its area."""

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int = 0

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1, self.dim)
        weights = np.array(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.size:
            raise DomainError("one weight per node is required")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.weights.size

    def integrate(self, values) -> float:
        """``sum_i w_i values_i`` in a fixed order."""
        return float(np.dot(self.weights, values))

    def refined(self) -> "SphereRule":
        """The same family of rule at twice the order."""
        return sphere_rule(self.dim, 2 * max(self.order, 1))

    @property
    def symmetric(self) -> bool:
        """Whether ``-y`` is a node with the same weight whenever ``y`` is."""
        return not (self.dim == 2 and len(self) % 2)

    def half(self) -> "SphereRule":
        """Nodes with ``y`` and ``-y`` merged, for integrands even in ``y``."""
        if not self.symmetric:
            return self
        keep = np.zeros(len(self), dtype=bool)
        nodes = self.nodes
        for i, y in enumerate(nodes):
            nz = np.flatnonzero(np.abs(y) > 1e-12)
            keep[i] = y[nz[0]] > 0
        return SphereRule(self.dim, nodes[keep], 2 * self.weights[keep], self.order)


@lru_cache(maxsize=64)
def _rule_arrays(d: int, order: int):
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        phi = 2 * math.pi * np.arange(order) / order
        return np.column_stack([np.cos(phi), np.sin(phi)]), np.full(order, 2 * math.pi / order)
    # S^{d-1} as u * e_1 + sqrt(1 - u^2) * S^{d-2}, with weight (1 - u^2)^{(d-3)/2} du
    u, wu = roots_gegenbauer(order, 0.5 * (d - 2))
    sub_order = 2 * order if d == 3 else order
    sub_nodes, sub_w = _rule_arrays(d - 1, sub_order)
    s = np.sqrt(1.0 - u * u)
    nodes = np.concatenate([np.column_stack([np.full(len(sub_w), ui), si * sub_nodes]) for ui, si in zip(u, s)])
    weights = np.concatenate([wi * sub_w for wi in wu])
    return nodes, weights


def sphere_rule(d: int, order: int | None = None) -> SphereRule:
    """Quadrature rule on ``S^{d-1}``.

    ``d = 1`` gives ``{+1, -1}`` with unit weights and ``d = 2`` gives
    ``order`` equispaced points. For ``d >= 3`` the polar cosine is
    integrated by Gauss quadrature with ``order`` nodes (Gauss-Legendre when
    ``d = 3``), times a rule on ``S^{d-2}``; on ``S^2`` the azimuth uses
    ``2 * order`` equispaced points.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")
    d = int(d)
    if order is None:
        order = DEFAULT_ORDER.get(d, 12)
    if int(order) != order or order < 1:
        raise DomainError(f"rule order must be a positive integer, got {order}")
    nodes, weights = _rule_arrays(d, int(order))
    return SphereRule(d, nodes, weights, int(order))


def default_rule(d: int) -> SphereRule:
    return sphere_rule(d)


def _check_rule(field, rule):
    if rule is None:
        return default_rule(field.grid.dim)
    if rule.dim != field.grid.dim:
        raise DomainError(f"rule is on S^{rule.dim - 1} but the field lives in dimension {field.grid.dim}")
    return rule


def _even_in_y(p: float, order) -> bool:
    # ||Delta_{-y}^m f||_p = ||Delta_y^m f||_p for integer m, and for any m when p = 2
    return p == 2.0 or order.is_integer


def _snap_note(field, h: float, p: float, order, method: str):
    if _spatial(p, order, method) and h < 4 * field.grid.spacing:
        warnings.warn(
            f"step {h:.3g} is below four grid spacings; snapped directions dominate the modulus",
            SnapWarning,
            stacklevel=3,
        )


def omega(field, p: float, order, q: float, h: float, rule: SphereRule | None = None, method: str = "auto") -> float:
    """Integral modulus ``(sum_i w_i ||Delta_{h y_i}^m f||_p^q)^{1/q}``.

    ``field`` may be a :class:`~fourier_moduli.field.SampledField` or a
    :class:`~fourier_moduli.field.Spectrum`. For ``p = 2`` the norms are
    computed in frequency space. ``q = inf`` is delegated to
    :func:`omega_sup`.
    """
    p = _check_p(p)
    order = as_order(order)
    q = float(q)
    if math.isnan(q) or q < 1:
        raise DomainError(f"q must lie in [1, inf], got {q}")
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    if math.isinf(q):
        return omega_sup(field, p, order, h, rule=rule, method=method)
    rule = _check_rule(field, rule)
    _snap_note(field, h, p, order, method)
    if _even_in_y(p, order) and field.grid.dim > 1:
        rule = rule.half()
    vals = delta_many(field, h * rule.nodes, p, order, method)
    return rule.integrate(vals**q) ** (1.0 / q)


def _spatial(p: float, order, method: str) -> bool:
    return method == "spatial" or (method == "auto" and p != 2.0 and order.is_integer)


def _radial_lattice(field, h_min: float, h_max: float, per_octave: int, spatial: bool) -> np.ndarray:
    """Radii ``s * 2^(j / K)`` between ``h_min`` and ``h_max``, ``s`` one grid spacing.

    Spatial steps snap to the grid, so there ``j >= 0``; exact spectral steps
    may go below one spacing. All lattices are cut from the same set of radii
    and are therefore nested.
    """
    s = field.grid.spacing
    lo = 0 if spatial else min(0, int(math.floor(per_octave * math.log2(h_min / s) + 1e-9)))
    hi = int(math.floor(per_octave * math.log2(h_max / s) + 1e-9))
    return s * 2.0 ** (np.arange(lo, max(lo, hi) + 1) / per_octave)


def omega_sup_many(
    field,
    p: float,
    order,
    hs,
    search_grid_size: int = 16,
    rule: SphereRule | None = None,
    method: str = "auto",
) -> np.ndarray:
    """:func:`omega_sup` for several step sizes sharing one search lattice."""
    p = _check_p(p)
    order = as_order(order)
    hs = np.atleast_1d(np.asarray(hs, dtype=float))
    if (hs <= 0).any():
        raise DomainError("step sizes must be positive")
    if int(search_grid_size) != search_grid_size or search_grid_size < 1:
        raise DomainError(f"search_grid_size must be a positive integer, got {search_grid_size}")
    rule = _check_rule(field, rule)
    if _even_in_y(p, order) and field.grid.dim > 1:
        rule = rule.half()
    radii = _radial_lattice(field, float(hs.min()), float(hs.max()), int(search_grid_size), _spatial(p, order, method))
    steps = (radii[:, None, None] * rule.nodes[None, :, :]).reshape(-1, field.grid.dim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SnapWarning)
        vals = delta_many(field, steps, p, order, method).reshape(len(radii), len(rule))
    running = np.maximum.accumulate(vals.max(axis=1))
    # below the lattice the smallest radius is used
    idx = np.searchsorted(radii, hs * (1 + 1e-12), side="right") - 1
    return running[np.maximum(idx, 0)]


def omega_sup(
    field,
    p: float,
    order,
    h: float,
    search_grid_size: int = 16,
    rule: SphereRule | None = None,
    method: str = "auto",
) -> float:
    """``sup_{|y| <= h} ||Delta_y^m f||_p`` over a nested search lattice.

    Radii are ``s * 2^(j / K)`` with ``s`` one grid spacing and
    ``K = search_grid_size``, crossed with the directions of ``rule``. The
    lattice for a larger ``h`` contains the one for a smaller ``h``, so the
    result is nondecreasing in ``h``. Grid-snapped (spatial) steps start at
    one spacing, and for ``h`` below it the value there is returned.
    """
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    return float(omega_sup_many(field, p, order, [h], search_grid_size, rule, method)[0])


def omega_profile(
    field,
    p: float,
    order,
    q: float,
    h_grid,
    rule: SphereRule | None = None,
    method: str = "auto",
    self_check: bool = True,
    rtol: float = 1e-8,
    max_refinements: int = 2,
    search_grid_size: int = 16,
) -> DecayProfile:
    """Moduli at every step size of ``h_grid`` as a profile with role ``epsilon``.

    With ``self_check`` the sphere rule is doubled at the largest step until
    the modulus moves by less than ``rtol``; if ``max_refinements`` doublings
    do not get there the profile is still returned, with a note and a
    :class:`ResolutionWarning`. The check is skipped for ``d = 1`` (the rule
    is exact), for ``q = inf`` and for grid-snapped spatial steps.
    """
    hs = np.sort(as_grid(h_grid))
    if (hs <= 0).any():
        raise DomainError("step sizes must be positive")
    q = float(q)
    notes = []
    if math.isinf(q):
        vals = omega_sup_many(field, p, order, hs, search_grid_size, rule, method)
        notes.append(f"sup over radii s*2^(j/{search_grid_size}), s = grid spacing")
        return DecayProfile(hs, vals, "epsilon", notes)
    rule = _check_rule(field, rule)
    p = _check_p(p)
    order = as_order(order)
    spatial = _spatial(p, order, method)
    if self_check and field.grid.dim > 1 and not spatial:
        top = hs[-1]
        base = omega(field, p, order, q, top, rule, method)
        for _ in range(max_refinements + 1):
            finer = rule.refined()
            val = omega(field, p, order, q, top, finer, method)
            change = abs(val - base) / max(abs(val), 1e-300)
            if change < rtol or val == base:
                break
            rule, base = finer, val
        else:
            msg = f"sphere rule order {rule.order}: doubling still moves omega by {change:.2e}"
            warnings.warn(msg, ResolutionWarning, stacklevel=2)
            notes.append(msg)
        notes.append(f"sphere rule order {rule.order} ({len(rule)} nodes)")
    vals = [omega(field, p, order, q, h, rule, method) for h in hs]
    return DecayProfile(hs, vals, "epsilon", notes)
