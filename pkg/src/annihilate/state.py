"""Graph topologies, particle configurations, and annihilation mechanics.

This is the reference engine: every rule of the dynamics is written out
once, readably, in Python.  The jitted kernels in ``_kernels`` implement
the same mechanics with the same random-draw order; the two are held
together by lockstep-equivalence tests.

Walk semantics
--------------
* Star: a particle at a leaf moves to the core (no randomness); a particle
  at the core moves to a uniformly chosen leaf.
* Complete graph: a sampled particle relocates to a uniformly chosen
  vertex among all 2n, so with probability 1/2n it redraws its own site
  and the step is a no-op.  This is the convention under which the
  closed-form extinction laws are exact (stage collision probabilities
  (2i-1)/2n, r/2n, i/2n); "move to a uniform other vertex" would make
  them (2i-1)/(2n-1) etc. and break the distributional identities.

Annihilation partner: when a mover lands on a site holding several
opposite-color particles, the removed resident is the most recently
arrived one (head of the site's intrusive list).  Within a color,
particles are exchangeable, so this choice is law-irrelevant; it is fixed
so that replays are deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .seeding import SplitMix64

RED = 0
BLUE = 1
NO_COLOR = -1


class TopologyKind(Enum):
    COMPLETE = "complete"
    STAR = "star"


class SystemKind(Enum):
    ONE_TYPE = "one"
    TWO_TYPE = "two"


class Coloring(Enum):
    RANDOM_BALANCED = "random_balanced"
    ALTERNATING = "alternating"


@dataclass(frozen=True)
class Topology:
    """Complete graph on 2n vertices, or star with 2n leaves plus a core.

    Sites are numbered 0..2n-1 (vertices / leaves); on the star the core
    is site 2n.
    """

    kind: TopologyKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def num_sites(self) -> int:
        return 2 * self.n + (1 if self.kind is TopologyKind.STAR else 0)

    @property
    def core(self) -> int:
        if self.kind is not TopologyKind.STAR:
            raise ValueError("only the star has a core")
        return 2 * self.n

    def neighbors(self, site: int) -> list[int]:
        """Neighbor set of the underlying simple graph (no self-loops)."""
        if not 0 <= site < self.num_sites:
            raise ValueError("site out of range")
        if self.kind is TopologyKind.COMPLETE:
            return [v for v in range(2 * self.n) if v != site]
        if site == self.core:
            return list(range(2 * self.n))
        return [self.core]


def complete(n: int) -> Topology:
    return Topology(TopologyKind.COMPLETE, n)


def star(n: int) -> Topology:
    return Topology(TopologyKind.STAR, n)


class ParticleHandle(NamedTuple):
    """Reference to a live particle: (color, registry slot)."""

    color: int
    slot: int


@dataclass
class StepOutcome:
    moved_to: int
    collided: bool
    core_departure_without_collision: bool


class Configuration:
    """Per-site occupancy plus per-color registries with O(1) pick/remove.

    Invariants (checked by :meth:`check_invariants`):
    * each site hosts particles of at most one color;
    * two-type: red_count == blue_count at all times;
    * one-type: every site count <= 1;
    * site counts sum to the registry sizes.

    Internals: ``pos[c][k]`` is the site of slot ``k`` of color ``c``;
    slots at the same site form an intrusive doubly-linked list rooted at
    ``head[site]``, which makes "delete an arbitrary resident here" O(1)
    alongside swap-removal from the registry.
    """

    def __init__(self, topology: Topology, system_kind: SystemKind):
        self.topology = topology
        self.system_kind = system_kind
        n = topology.n
        cap = 2 * n  # one-type puts all 2n particles in registry 0
        nsites = topology.num_sites
        self.pos = np.full((2, cap), -1, np.int64)
        self.nxt = np.full((2, cap), -1, np.int64)
        self.prv = np.full((2, cap), -1, np.int64)
        self.cnt = [0, 0]
        self.head = np.full(nsites, -1, np.int64)
        self.site_count = np.zeros(nsites, np.int64)
        self.site_color = np.full(nsites, NO_COLOR, np.int64)
        self.max_occupancy_seen = 0

    # -- registry surgery ------------------------------------------------

    def _detach(self, c: int, k: int) -> None:
        s = self.pos[c, k]
        pk, nk = self.prv[c, k], self.nxt[c, k]
        if pk == -1:
            self.head[s] = nk
        else:
            self.nxt[c, pk] = nk
        if nk != -1:
            self.prv[c, nk] = pk
        self.site_count[s] -= 1
        if self.site_count[s] == 0:
            self.site_color[s] = NO_COLOR

    def _attach(self, c: int, k: int, site: int) -> None:
        self.pos[c, k] = site
        h = self.head[site]
        self.nxt[c, k] = h
        self.prv[c, k] = -1
        if h != -1:
            self.prv[c, h] = k
        self.head[site] = k
        self.site_color[site] = c
        self.site_count[site] += 1
        if self.site_count[site] > self.max_occupancy_seen:
            self.max_occupancy_seen = int(self.site_count[site])

    def _swap_remove(self, c: int, k: int) -> None:
        """Remove an already-detached slot, keeping the registry compact."""
        last = self.cnt[c] - 1
        if k != last:
            self.pos[c, k] = self.pos[c, last]
            self.nxt[c, k] = self.nxt[c, last]
            self.prv[c, k] = self.prv[c, last]
            pl = self.prv[c, k]
            if pl == -1:
                self.head[self.pos[c, k]] = k
            else:
                self.nxt[c, pl] = k
            nl = self.nxt[c, k]
            if nl != -1:
                self.prv[c, nl] = k
        self.cnt[c] = last

    def _place(self, c: int, site: int) -> None:
        k = self.cnt[c]
        self.cnt[c] = k + 1
        self._attach(c, k, site)

    # -- views -----------------------------------------------------------

    @property
    def red_count(self) -> int:
        return self.cnt[RED]

    @property
    def blue_count(self) -> int:
        return self.cnt[BLUE]

    @property
    def particle_count(self) -> int:
        return self.cnt[RED] + self.cnt[BLUE]

    @property
    def core_count(self) -> int:
        return int(self.site_count[self.topology.core])

    def handle_site(self, handle: ParticleHandle) -> int:
        if not 0 <= handle.slot < self.cnt[handle.color]:
            raise ValueError("stale particle handle")
        return int(self.pos[handle.color, handle.slot])

    def positions(self, color: int) -> np.ndarray:
        """Sites of all live particles of a color (registry order)."""
        return self.pos[color, : self.cnt[color]].copy()

    def site_occupancy(self) -> dict[int, tuple[int, int]]:
        """site -> (color, count) for occupied sites."""
        occ = {}
        for s in range(self.topology.num_sites):
            if self.site_count[s] > 0:
                occ[s] = (int(self.site_color[s]), int(self.site_count[s]))
        return occ

    def check_invariants(self) -> None:
        per_site = np.zeros(self.topology.num_sites, np.int64)
        for c in (RED, BLUE):
            for k in range(self.cnt[c]):
                s = self.pos[c, k]
                per_site[s] += 1
                assert self.site_color[s] == c, "site hosts mixed colors"
        assert np.array_equal(per_site, self.site_count), "registry/site mismatch"
        assert per_site.sum() == self.particle_count
        if self.system_kind is SystemKind.TWO_TYPE:
            assert self.red_count == self.blue_count, "color balance broken"
        else:
            assert per_site.max(initial=0) <= 1, "one-type multi-occupancy"


def new_configuration(
    topology: Topology,
    system_kind: SystemKind,
    coloring: Coloring,
    rng: SplitMix64,
) -> Configuration:
    """Initial condition: one particle per vertex (complete) or per leaf (star).

    Two-type systems get exactly n red and n blue particles.  Alternating
    colors by site-index parity (even red, odd blue); RandomBalanced draws
    a uniform balanced assignment via Fisher-Yates on the color vector.
    """
    config = Configuration(topology, system_kind)
    n = topology.n
    if system_kind is SystemKind.ONE_TYPE:
        for s in range(2 * n):
            config._place(RED, s)
        return config
    colors = [RED if s % 2 == 0 else BLUE for s in range(2 * n)]
    if coloring is Coloring.RANDOM_BALANCED:
        rng.shuffle(colors)
    for s in range(2 * n):
        config._place(colors[s], s)
    return config


def sample_mover(config: Configuration, p: float, rng: SplitMix64) -> ParticleHandle:
    """Pick the particle that moves this step.

    One-type: uniform over all particles.  Two-type: blue with probability
    p, else red, then uniform within the color.  The empty system is a
    caller bug (stop at extinction).
    """
    if config.particle_count == 0:
        raise ValueError("cannot sample from an empty system")
    if config.system_kind is SystemKind.ONE_TYPE:
        return ParticleHandle(RED, rng.below(config.cnt[RED]))
    color = BLUE if rng.u01() < p else RED
    return ParticleHandle(color, rng.below(config.cnt[color]))


def move_and_resolve(
    config: Configuration, particle: ParticleHandle, rng: SplitMix64
) -> StepOutcome:
    """Move one particle one step and resolve any annihilation.

    Collision rule: if the destination hosts at least one particle the
    mover can annihilate with (any particle one-type, opposite color
    two-type), the mover and exactly one resident are removed.
    """
    c, k = particle.color, particle.slot
    if not 0 <= k < config.cnt[c]:
        raise ValueError("stale particle handle")
    topo = config.topology
    s0 = int(config.pos[c, k])
    if topo.kind is TopologyKind.STAR:
        from_core = s0 == topo.core
        dest = rng.below(2 * topo.n) if from_core else topo.core
    else:
        from_core = False
        dest = rng.below(2 * topo.n)
        if dest == s0:
            return StepOutcome(moved_to=s0, collided=False,
                               core_departure_without_collision=False)
    one_type = config.system_kind is SystemKind.ONE_TYPE
    collided = config.site_count[dest] > 0 and (
        one_type or config.site_color[dest] != c
    )
    if collided:
        resident_color = int(config.site_color[dest])
        j = int(config.head[dest])
        config._detach(c, k)
        config._detach(resident_color, j)
        if resident_color == c:  # one-type: remove higher slot first
            hi, lo = max(k, j), min(k, j)
            config._swap_remove(c, hi)
            config._swap_remove(c, lo)
        else:
            config._swap_remove(c, k)
            config._swap_remove(resident_color, j)
    else:
        config._detach(c, k)
        config._attach(c, k, dest)
    return StepOutcome(
        moved_to=dest,
        collided=bool(collided),
        core_departure_without_collision=from_core and not collided,
    )
