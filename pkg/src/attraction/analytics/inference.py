"""Popularity inference and best-response rates over a slot panel.

Slot 1 fixes the scale: its new films' popularities are their shares of the
new-film takings there. In each later slot, new films are priced against the
old films still showing, whose popularity decays by ``gamma`` per slot of
age::

    theta_i = B_ik / sum_{j old} B_jk * sum_{j old} gamma**age_j * theta_j

The best-response rate then asks, for each film and each shift ``x``, whether
moving its release ``x`` slots (nobody else moving) would have earned less
than ``tolerance_factor`` times what it actually took in its release slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from attraction.analytics.slots import Slot, SlotPanel
from attraction.errors import AnchoringError

DEFAULT_GAMMA = 0.8


@dataclass(frozen=True)
class InferredGame:
    """Per-slot demands and per-film popularity, scaled so slot 1 sums to 1.

    ``skipped`` lists films that earned nothing in their release slot and so
    have no inferable popularity.
    """

    demands: tuple[float, ...]
    theta: dict[str, float] = field(hash=False)
    gamma: float = DEFAULT_GAMMA
    skipped: tuple[str, ...] = ()


def infer_popularity(panel: SlotPanel, gamma: float = DEFAULT_GAMMA) -> InferredGame:
    """Infer film popularity slot by slot.

    Raises:
        AnchoringError: if a slot after the first has new films but no old
            film of known popularity, or slot 1 has no new films.
        ValueError: if ``gamma`` is outside ``(0, 1]``.
    """
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if not panel.slots:
        return InferredGame((), {}, gamma)
    theta: dict[str, float] = {}
    skipped = []
    for slot in panel.slots:
        new = {m: b for m, b in slot.new.items() if b > 0}
        skipped.extend(m for m, b in slot.new.items() if b <= 0)
        if not new:
            if slot.index == 1:
                raise AnchoringError(1)
            continue
        if slot.index == 1:
            scale = 1.0 / sum(new.values())
        else:
            old = [(b, age, theta[m]) for m, (b, age) in slot.old.items() if m in theta and b > 0]
            if not old:
                raise AnchoringError(slot.index)
            weight = sum(gamma**age * t for _, age, t in old)
            scale = weight / sum(b for b, _, _ in old)
        for m, b in new.items():
            theta[m] = b * scale
    return InferredGame(tuple(s.demand for s in panel.slots), theta, gamma, tuple(skipped))


def competing_weight(slot: Slot, ig: InferredGame, exclude: str) -> float:
    """Popularity a film would meet on entering ``slot``, itself excluded."""
    weight = sum(ig.theta[m] for m in slot.new if m != exclude and m in ig.theta)
    weight += sum(
        ig.gamma**age * ig.theta[m]
        for m, (_, age) in slot.old.items()
        if m != exclude and m in ig.theta
    )
    return weight


def counterfactual_box_office(ig: InferredGame, panel: SlotPanel, movie: str, slot: int) -> float:
    theta = ig.theta[movie]
    target = panel.slot(slot)
    return target.demand * theta / (theta + competing_weight(target, ig, movie))


@dataclass(frozen=True)
class BestResponseReport:
    """Best-response rate per shift.

    ``rates[x]`` is ``None`` when no film can be shifted by ``x`` inside the
    panel. ``verdicts[(movie, x)]`` is True when the actual slot beat the
    shifted one; pairs whose target falls outside the panel are absent.
    """

    rates: dict[int, float | None]
    verdicts: dict[tuple[str, int], bool] = field(hash=False)
    tolerance_factor: float = 1.1


def best_response_rate(
    ig: InferredGame,
    panel: SlotPanel,
    max_shift: int = 4,
    tolerance_factor: float = 1.1,
) -> BestResponseReport:
    films = [
        m
        for m in sorted(ig.theta)
        if m not in panel.carried_in and panel.slot(panel.release_slot[m]).new.get(m, 0) > 0
    ]
    shifts = [x for x in range(-max_shift, max_shift + 1) if x]
    rates: dict[int, float | None] = {}
    verdicts: dict[tuple[str, int], bool] = {}
    for x in shifts:
        best = total = 0.0
        for m in films:
            r = panel.release_slot[m]
            if not 1 <= r + x <= len(panel):
                continue
            actual = panel.slot(r).new[m]
            ok = counterfactual_box_office(ig, panel, m, r + x) < tolerance_factor * actual
            verdicts[(m, x)] = ok
            total += actual
            if ok:
                best += actual
        rates[x] = best / total if total else None
    return BestResponseReport(rates, verdicts, tolerance_factor)
