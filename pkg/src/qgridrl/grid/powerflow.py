"""DC power flow with island handling.

Each connected component of in-service lines is balanced on its own:
generators are dispatched pro rata to capacity to meet the island demand, and
when capacity falls short every load in the island is curtailed by the same
fraction. Islands with no generation are shed entirely. Angles are solved
from the reduced susceptance matrix with the island reference at angle 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .spec import GridSpec


@dataclass
class PowerFlowResult:
    angles: np.ndarray          # rad
    flows: np.ndarray           # MW, from -> to; 0 for out-of-service lines
    injections: np.ndarray      # MW, dispatch - served load per bus
    dispatch: np.ndarray        # MW
    served: np.ndarray          # MW
    demand: np.ndarray          # MW
    components: np.ndarray      # island label per bus
    shed_islands: List[int]     # labels of islands that lost all load

    @property
    def unserved(self) -> float:
        return float(self.demand.sum() - self.served.sum())

    @property
    def unserved_fraction(self) -> float:
        total = self.demand.sum()
        return 0.0 if total <= 0 else self.unserved / total


def susceptance_matrix(n_buses: int, f: np.ndarray, t: np.ndarray, b: np.ndarray) -> np.ndarray:
    bmat = np.zeros((n_buses, n_buses))
    np.add.at(bmat, (f, f), b)
    np.add.at(bmat, (t, t), b)
    np.add.at(bmat, (f, t), -b)
    np.add.at(bmat, (t, f), -b)
    return bmat


def solve_dc_power_flow(spec: GridSpec, in_service: np.ndarray,
                        demand: Optional[np.ndarray] = None) -> PowerFlowResult:
    """Solve ``B' theta = P`` on every island.

    ``demand`` defaults to the nominal bus loads (MW).
    """
    in_service = np.asarray(in_service, dtype=bool)
    demand = spec.loads if demand is None else np.asarray(demand, dtype=float)
    capacity = spec.generation
    n = spec.n_buses
    f_all, t_all = spec.line_ends()
    b_all = spec.susceptances
    _, labels = connected_components(spec.adjacency(in_service), directed=False)

    angles = np.zeros(n)
    dispatch = np.zeros(n)
    served = np.zeros(n)
    shed = []
    slack = spec.slack_index
    for comp in np.unique(labels):
        buses = np.flatnonzero(labels == comp)
        d, g = demand[buses].sum(), capacity[buses].sum()
        if d > 0 and g <= 0:
            shed.append(int(comp))
            continue
        if d > 0:
            served[buses] = demand[buses] * min(1.0, g / d)
        if g > 0:
            dispatch[buses] = capacity[buses] * min(1.0, d / g)
        if len(buses) == 1:
            continue
        if slack in buses:
            ref = slack
        else:
            ref = buses[np.argmax(capacity[buses] > 0)]
        mask = in_service & (labels[f_all] == comp)
        local = {bus: k for k, bus in enumerate(buses)}
        f = np.array([local[i] for i in f_all[mask]])
        t = np.array([local[i] for i in t_all[mask]])
        bmat = susceptance_matrix(len(buses), f, t, b_all[mask])
        keep = np.array([bus != ref for bus in buses])
        p = (dispatch[buses] - served[buses]) / spec.base_mva
        try:
            theta = np.linalg.solve(bmat[np.ix_(keep, keep)], p[keep])
        except np.linalg.LinAlgError:
            served[buses] = 0.0
            dispatch[buses] = 0.0
            shed.append(int(comp))
            continue
        angles[buses[keep]] = theta

    flows = np.where(in_service, b_all * (angles[f_all] - angles[t_all]) * spec.base_mva, 0.0)
    return PowerFlowResult(angles, flows, dispatch - served, dispatch, served,
                           demand.copy(), labels, shed)


def bus_balance(spec: GridSpec, result: PowerFlowResult) -> np.ndarray:
    """Per-bus mismatch between scheduled injection and net line outflow (MW)."""
    f, t = spec.line_ends()
    outflow = np.zeros(spec.n_buses)
    np.add.at(outflow, f, result.flows)
    np.add.at(outflow, t, -result.flows)
    return result.injections - outflow
