"""Single-hyperedge location through group testing.

Learning one arity-k hyperedge with detection queries is group testing with
k defectives: a pool ``S`` becomes the detection query ``bundle \\ S`` and the
answer ``r`` is read back as ``1 - r``, which is 1 exactly when ``S`` hits the
hidden edge. Pools here are Bernoulli with COMP elimination on the group
side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError


def location_inclusion(k: int) -> float:
    """Pool inclusion rate making a pool miss all k defectives w.p. 1/2."""
    return 1.0 - 2.0 ** (-1.0 / k)


@dataclass(frozen=True, eq=False)
class GroupTestInstance:
    universe: np.ndarray  # local item i -> global vertex id
    pools: np.ndarray  # (t_loc, len(universe)) bool
    k_defectives: int

    def __post_init__(self) -> None:
        universe = np.asarray(self.universe, dtype=np.int64)
        pools = np.asarray(self.pools, dtype=bool).reshape(-1, universe.size)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "pools", pools)


def to_detection_query(bundle: np.ndarray, pool: np.ndarray) -> np.ndarray:
    """The detection query ``bundle \\ pool``; vertices outside the bundle stay out.

    Both arguments are boolean masks of the same trailing length; ``pool`` may
    carry leading dimensions to convert many pools at once.
    """
    bundle = np.asarray(bundle, dtype=bool)
    pool = np.asarray(pool, dtype=bool)
    if pool.shape[-1] != bundle.shape[-1]:
        raise ContractError("pool and bundle masks differ in length")
    if np.any(pool & ~bundle):
        raise ContractError("pool is not contained in the bundle")
    return bundle & ~pool


def make_pools(bundle_size: int, t_loc: int, rho_loc: float, rng: np.random.Generator) -> np.ndarray:
    if t_loc < 1:
        raise ContractError("t_loc must be >= 1")
    if not 0.0 < rho_loc < 1.0:
        raise ContractError("rho_loc must lie in (0, 1)")
    return rng.random((t_loc, bundle_size)) < rho_loc


def gt_decode(instance: GroupTestInstance, outcomes: np.ndarray) -> tuple[int, ...] | None:
    """COMP elimination with a consistency check; ``None`` when the items are not pinned down.

    Returns sorted local item indices of exactly ``k_defectives`` survivors.
    """
    outcomes = np.asarray(outcomes, dtype=bool)
    pools = instance.pools
    if outcomes.shape != (pools.shape[0],):
        raise ContractError("outcomes not aligned with pools")
    eliminated = pools[~outcomes].any(axis=0)
    survivors = np.flatnonzero(~eliminated)
    if survivors.size != instance.k_defectives:
        return None
    if not pools[outcomes][:, survivors].any(axis=1).all():
        return None
    return tuple(int(i) for i in survivors)


def locate(bundle, pools: np.ndarray, answers: np.ndarray, k: int) -> tuple[int, ...] | None:
    """Recover the bundle's unique hyperedge from its location-query answers.

    ``bundle`` is either the sorted global vertex ids or a boolean mask over
    all vertices; ``pools`` are over bundle-local items.
    """
    bundle = np.asarray(bundle)
    universe = np.flatnonzero(bundle) if bundle.dtype == bool else bundle.astype(np.int64)
    inst = GroupTestInstance(universe, pools, k)
    items = gt_decode(inst, ~np.asarray(answers, dtype=bool))
    if items is None:
        return None
    return tuple(sorted(int(universe[i]) for i in items))
