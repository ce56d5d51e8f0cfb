"""Ball averages of torus rotations along growing generating-set powers.

A lattice Z^d acts on the d-torus by coordinatewise irrational rotation:
element g moves the point p to p + (g_1 t_1, ..., g_d t_d) mod 1.  Averaging
an observable over the exact word balls U^n of a finite generating set gives
a mean-ergodic sequence; because the ball sizes here satisfy polynomial
sphere decay, consecutive averages A_n and A_(n+1) differ by O(n^-delta)
times the sup norm, so the whole sequence converges rather than just a
subsequence.

`ergodic_trace` computes the averages incrementally from a
`ProductSequence`'s birth map, touching every group element exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .products import ProductSequence

__all__ = [
    "TorusAction",
    "GOLDEN_ANGLES",
    "OBSERVABLES",
    "observable",
    "ErgodicTrace",
    "ergodic_trace",
]

Point = tuple[float, ...]

# Rotation numbers with well-behaved continued fractions, so the empirical
# averages settle at a visible rate: (sqrt(5)-1)/2 and sqrt(2)-1.
GOLDEN_ANGLES: Point = ((math.sqrt(5.0) - 1.0) / 2.0, math.sqrt(2.0) - 1.0)


@dataclass(frozen=True)
class TorusAction:
    """Coordinatewise rotation action of Z^d on the d-torus [0,1)^d."""

    angles: Point

    @property
    def dimension(self) -> int:
        return len(self.angles)

    def move(self, element: tuple[int, ...], point: Point) -> Point:
        if len(element) != len(self.angles) or len(point) != len(self.angles):
            raise ValueError("element and point must match the action dimension")
        return tuple(
            (p + g * t) % 1.0 for p, g, t in zip(point, element, self.angles)
        )


def _box_sixteenth(point: Point) -> float:
    return 1.0 if point[0] < 0.25 and point[1] < 0.25 else 0.0


# name -> (observable on the 2-torus, its integral against Lebesgue measure)
OBSERVABLES: Mapping[str, tuple[Callable[[Point], float], float]] = {
    "one": (lambda p: 1.0, 1.0),
    "cos_x": (lambda p: math.cos(2.0 * math.pi * p[0]), 0.0),
    "cos_y": (lambda p: math.cos(2.0 * math.pi * p[1]), 0.0),
    "cos_mix": (
        lambda p: math.cos(2.0 * math.pi * p[0]) * math.cos(2.0 * math.pi * p[1]),
        0.0,
    ),
    "box": (_box_sixteenth, 1.0 / 16.0),
}


def observable(name: str) -> tuple[Callable[[Point], float], float]:
    """Look up a named observable and its exact space mean."""
    try:
        return OBSERVABLES[name]
    except KeyError:
        known = ", ".join(sorted(OBSERVABLES))
        raise KeyError(f"unknown observable {name!r}; known: {known}") from None


@dataclass(frozen=True)
class ErgodicTrace:
    """Averages A_n = (1/|U^n|) sum over g in U^n of f(g . p), for n = 0..N."""

    observable: str
    start: Point
    space_mean: float
    averages: tuple[float, ...]

    @property
    def steps(self) -> int:
        return len(self.averages) - 1

    @property
    def errors(self) -> tuple[float, ...]:
        return tuple(abs(a - self.space_mean) for a in self.averages)

    @property
    def final_error(self) -> float:
        return self.errors[-1]

    def envelope(self, tail: int = 10) -> float:
        """Worst deviation from the space mean over the last `tail` averages."""
        if tail < 1:
            raise ValueError("tail must be positive")
        return max(self.errors[-tail:])


def ergodic_trace(
    action: TorusAction,
    sequence: ProductSequence,
    name: str,
    start: Point,
    n_max: int | None = None,
) -> ErgodicTrace:
    """Average a named observable over the element sets of a product sequence.

    The sequence's birth map is replayed level by level, so the total work is
    one observable evaluation per distinct group element.
    """
    f, mean = observable(name)
    if n_max is None:
        n_max = sequence.steps
    if n_max > sequence.steps:
        raise ValueError(
            f"n_max={n_max} exceeds the {sequence.steps} expanded steps"
        )
    by_level: list[list[tuple[int, ...]]] = [[] for _ in range(n_max + 1)]
    for element, born in sequence.birth.items():
        if born <= n_max:
            by_level[born].append(element)
    running = 0.0
    count = 0
    averages: list[float] = []
    for n in range(n_max + 1):
        for element in by_level[n]:
            running += f(action.move(element, start))
            count += 1
        if count != sequence.sizes[n]:
            raise AssertionError(
                f"birth map inconsistent at step {n}: {count} != {sequence.sizes[n]}"
            )
        averages.append(running / count)
    return ErgodicTrace(
        observable=name, start=start, space_mean=mean, averages=tuple(averages)
    )
