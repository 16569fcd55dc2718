"""Altitude loss of fixed-bank turns between straight glide segments.

Turns are circular arcs in the airmass frame flown at the stall speed for
the banked load factor; the altitude cost is the arc loss plus the signed
kinetic-energy exchange from the ground-speed change across the turn.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .aero import AircraftModel, Wind, airmass_heading

OPTIMAL_BANK = math.pi / 4


@dataclass(frozen=True)
class TurnCorrection:
    at_waypoint: tuple
    delta_psi_air: float    # rad, airmass-frame heading change
    bank: float
    arc_loss: float         # m, >= 0
    energy_term: float      # m, signed
    total: float
    radius: float           # m, airmass-frame turn radius


def turn_loss(model: AircraftModel, delta_psi_air: float, bank: float,
              v_g_before: float, v_g_after: float,
              at_waypoint=(0.0, 0.0)) -> TurnCorrection:
    """Altitude cost of a heading change flown at V_stall(n(bank))."""
    if not 0 < bank < math.pi / 2:
        raise ValueError("bank must be in (0, pi/2)")
    n = 1.0 / math.cos(bank)
    v_stall1 = model.v_stall(1.0)
    arc = (2 * model.k_sr / model.g
           * (v_stall1 ** 4 + model.v0 ** 4) / math.sin(2 * bank)
           * abs(delta_psi_air))
    energy = (v_g_after ** 2 - v_g_before ** 2) / (2 * model.g)
    v_turn = model.v_stall(n)
    radius = v_turn ** 2 / (model.g * math.tan(bank))
    return TurnCorrection(at_waypoint=at_waypoint,
                          delta_psi_air=delta_psi_air, bank=bank,
                          arc_loss=arc, energy_term=energy,
                          total=arc + energy, radius=radius)


def turn_loss_rate(model: AircraftModel, v_air: float, bank: float) -> float:
    """Altitude lost per radian of airmass heading change at airspeed V."""
    if not 0 < bank < math.pi / 2:
        raise ValueError("bank must be in (0, pi/2)")
    return (2 * model.k_sr / model.g
            * (v_air ** 4 * math.cos(bank) ** 2 + model.v0 ** 4)
            / math.sin(2 * bank))


def optimal_bank(constraint_max_bank: float = math.pi / 2 - 1e-9) -> float:
    if not 0 < constraint_max_bank < math.pi / 2:
        raise ValueError("bank constraint must be in (0, pi/2)")
    return min(OPTIMAL_BANK, constraint_max_bank)


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = (a + math.pi) % (2 * math.pi) - math.pi
    return math.pi if a == -math.pi else a


def segment_turn_corrections(model: AircraftModel, wind: Wind, segments,
                             bank: float = OPTIMAL_BANK) -> list:
    """Corrections at each interior waypoint of a straight-segment chain.

    `segments` is a sequence with .end, .heading_g and .v_ground fields.
    Heading changes are measured in the airmass frame via the wind triangle.
    """
    corrections = []
    for before, after in zip(segments, segments[1:]):
        psi0 = airmass_heading(before.heading_g, before.v_ground, wind)
        psi1 = airmass_heading(after.heading_g, after.v_ground, wind)
        dpsi = wrap_angle(psi1 - psi0)
        corrections.append(turn_loss(model, dpsi, bank,
                                     before.v_ground, after.v_ground,
                                     at_waypoint=before.end))
    return corrections
