"""The seminorms p_{K,l} (sup over a compact sub-box) and μ_{q,l} (weighted sup)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from genfunc.errors import PreconditionViolated
from genfunc.grid.box import Box, SubBox
from genfunc.grid.derivatives import MAX_ORDER, Scheme, multi_indices, partial
from genfunc.grid.function import GridFunction

MAX_WEIGHT = 12


def all_multi_indices(dim: int, l: int) -> list[tuple[int, ...]]:
    """Every α with |α| ≤ l, grouped by order."""
    return [alpha for order in range(l + 1) for alpha in multi_indices(dim, order)]


@lru_cache(maxsize=16)
def weight(box: Box, q: int) -> np.ndarray:
    """(1 + |x|)^q on the box nodes."""
    w = (1.0 + box.radius()) ** q
    w.setflags(write=False)
    return w


def _clipped(mag: np.ndarray, floor: float) -> np.ndarray:
    # samples below floor·peak are roundoff from differentiating near-zero data
    top = float(mag.max()) if mag.size else 0.0
    if top == 0.0:
        return mag
    return np.where(mag < floor * top, 0.0, mag)


def _check_order(l: int) -> None:
    if not 0 <= l <= MAX_ORDER:
        raise PreconditionViolated(f"derivative order {l} outside 0..{MAX_ORDER}")


def seminorm_orders(
    g: GridFunction,
    K: SubBox,
    L: int,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
    cache: bool = True,
) -> np.ndarray:
    """p_{K,0}(g), ..., p_{K,L}(g) in one pass over the multi-indices."""
    _check_order(L)
    window = g.box.index_slices(K)
    per_order = np.zeros(L + 1)
    for order in range(L + 1):
        for alpha in multi_indices(g.box.dim, order):
            mag = _clipped(partial(g, alpha, scheme, cache=cache), floor)
            per_order[order] = max(per_order[order], float(mag[window].max()))
    return np.maximum.accumulate(per_order)


def seminorm_p(
    g: GridFunction,
    K: SubBox,
    l: int,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
) -> float:
    """p_{K,l}(g) = max over nodes in K and |α| ≤ l of |∂^α g|."""
    return float(seminorm_orders(g, K, l, scheme, floor)[l])


def seminorm_table(
    g: GridFunction,
    Q: int,
    L: int,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
) -> np.ndarray:
    """μ_{q,l}(g) for (q, l) ∈ [0..Q]×[0..L], rows q."""
    _check_order(L)
    if not 0 <= Q <= MAX_WEIGHT:
        raise PreconditionViolated(f"weight order {Q} outside 0..{MAX_WEIGHT}")
    table = np.zeros((Q + 1, L + 1))
    for order in range(L + 1):
        for alpha in multi_indices(g.box.dim, order):
            mag = _clipped(partial(g, alpha, scheme), floor)
            for q in range(Q + 1):
                table[q, order] = max(table[q, order], float(np.max(weight(g.box, q) * mag)))
    return np.maximum.accumulate(table, axis=1)


def seminorm_mu(
    g: GridFunction,
    q: int,
    l: int,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
) -> float:
    """μ_{q,l}(g) = sup over the box of (1+|x|)^q·|∂^α g|, maximized over |α| ≤ l."""
    return float(seminorm_table(g, q, l, scheme, floor)[q, l])


def window_sups(
    g: GridFunction,
    windows: list[SubBox],
    L: int,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
) -> np.ndarray:
    """p_{W,l}(g) for every window W and l ≤ L; shape (len(windows), L+1).

    Derivatives are computed once per α for all windows and not cached on
    the frame.
    """
    _check_order(L)
    slices = [g.box.index_slices(w) for w in windows]
    out = np.zeros((len(windows), L + 1))
    for order in range(L + 1):
        for alpha in multi_indices(g.box.dim, order):
            mag = _clipped(partial(g, alpha, scheme, cache=False), floor)
            for i, window in enumerate(slices):
                out[i, order] = max(out[i, order], float(mag[window].max()))
    return np.maximum.accumulate(out, axis=1)
