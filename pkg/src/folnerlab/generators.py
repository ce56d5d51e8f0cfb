"""Graph constructions: word-metric balls, stretched tree chains, stairway strip.

Four families, all returned as unit-edge graphs with named basepoints:

lattice_graph / heisenberg_graph
    The radius-R word ball in Z^d or H3(Z) with respect to a symmetrized
    generating set.  Vertices are group elements discovered layer by layer
    from the identity (each layer sorted, so indexing is deterministic);
    edges join elements differing by one generator.  Because every geodesic
    word keeps its prefixes inside the ball, graph distance from the
    basepoint "origin" equals word length for every vertex.

stretched_tree_chain
    Blocks G'_1 .. G'_N glued in a row.  Block n is a depth-n tree with
    branching `valence` whose generation-k edges are subdivided into
    stretch^(n-k) unit edges, doubled by gluing a mirror copy along the last
    generation.  The two roots of block n are basepoints r_n and rp_n, and
    rp_n is identified with r_(n+1).  With (stretch, valence) = (2, 3) the
    root-to-leaf distance in block n is 2^n - 1 and ball volumes grow
    polynomially with exponent log 3 / log 2 while annuli at the roots stay
    proportionally large; with (3, 2) growth is linear but spheres at
    well-placed centers periodically reach size 2^n.

stairway_strip
    Grid discretization of the closed 1-neighborhood of a planar curve that
    starts at the origin and runs through half-circles of radius 2^k (k <= K)
    centered at the origin, joined by straight runs along the x-axis.  The
    interesting metric here is the ambient one: `norm_profile` counts points
    by Euclidean norm from the origin, where growth is linear but the ring
    (2^k, 2^k + 1] contains an entire half-circle of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceededError
from .groups import Element, GroupModel, check_generates, heisenberg_model, zd_model
from .space import Graph, VolumeProfile

__all__ = [
    "CayleyBall",
    "TreeChainSpec",
    "StairwayStrip",
    "lattice_graph",
    "heisenberg_graph",
    "cayley_ball",
    "stretched_tree_chain",
    "stairway_strip",
    "norm_profile",
    "DEFAULT_VERTEX_BUDGET",
]

DEFAULT_VERTEX_BUDGET = 2_000_000


@dataclass(frozen=True)
class CayleyBall:
    """A word ball realized as a graph, keeping the vertex -> element table."""

    graph: Graph
    elements: tuple[Element, ...]

    @property
    def index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}


def cayley_ball(
    model: GroupModel,
    generating_set: Sequence[Element],
    radius: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> CayleyBall:
    """Word ball of `radius` in `model` for the symmetrized generating set.

    The generating set is symmetrized (closed under inversion, identity
    dropped) before building edges; one-sided product sets are the business
    of the `products` module, not of graph realizations.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    steps = model.symmetrize(generating_set)
    check_generates(model, steps)
    seen: set[Element] = {model.identity}
    layers: list[list[Element]] = [[model.identity]]
    for _ in range(radius):
        frontier: set[Element] = set()
        for g in layers[-1]:
            for s in steps:
                h = model.multiply(g, s)
                if h not in seen:
                    frontier.add(h)
        if not frontier:
            break
        seen |= frontier
        if len(seen) > vertex_budget:
            raise BudgetExceededError("cayley_ball", len(seen), vertex_budget)
        layers.append(sorted(frontier))
    # Vertex index = position in (layer, sorted-within-layer) order, so the
    # numbering is deterministic and layer r is exactly the word sphere r.
    elements: list[Element] = []
    for layer in layers:
        elements.extend(layer)
    index = {g: i for i, g in enumerate(elements)}
    edges = set()
    for g, i in index.items():
        for s in steps:
            j = index.get(model.multiply(g, s))
            if j is not None and i < j:
                edges.add((i, j))
    graph = Graph.from_edges(len(elements), sorted(edges), {"origin": 0})
    return CayleyBall(graph=graph, elements=tuple(elements))


def lattice_graph(
    d: int,
    generating_set: Sequence[Element] | str = "standard",
    radius: int = 8,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> CayleyBall:
    """Word ball in Z^d.  `generating_set` is a named set or explicit tuples."""
    model = zd_model(d)
    if isinstance(generating_set, str):
        generating_set = model.generating_set(generating_set)
    return cayley_ball(model, generating_set, radius, vertex_budget)


def heisenberg_graph(
    generating_set: Sequence[Element] | str = "standard",
    radius: int = 8,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> CayleyBall:
    """Word ball in the discrete Heisenberg group."""
    model = heisenberg_model()
    if isinstance(generating_set, str):
        generating_set = model.generating_set(generating_set)
    return cayley_ball(model, generating_set, radius, vertex_budget)


@dataclass(frozen=True)
class TreeChainSpec:
    """Parameters of a stretched tree chain.

    stretch >= 2 scales edge lengths (generation-k edges of block n have
    length stretch^(n-k)), valence >= 2 is the branching, blocks >= 1 the
    number of doubled blocks glued in a row.
    """

    stretch: int
    valence: int
    blocks: int

    def __post_init__(self) -> None:
        if self.stretch < 2 or self.valence < 2 or self.blocks < 1:
            raise ValueError("need stretch >= 2, valence >= 2, blocks >= 1")

    def block_depth(self, n: int) -> int:
        """Root-to-leaf distance in block n: sum of stretch^(n-k), k = 1..n."""
        a = self.stretch
        return (a**n - 1) // (a - 1)


def stretched_tree_chain(
    spec: TreeChainSpec, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> Graph:
    """Build the chained, doubled, stretched trees described in the module docs.

    Basepoints: r_n and rp_n are the two roots of block n (rp_n == r_(n+1)
    after gluing), and leaf_n is the shared last-generation vertex of block n
    with the all-zeros child address.
    """
    a, b, blocks = spec.stretch, spec.valence, spec.blocks
    adj: list[list[int]] = []
    basepoints: dict[str, int] = {}

    def new_vertex() -> int:
        adj.append([])
        if len(adj) > vertex_budget:
            raise BudgetExceededError("stretched_tree_chain", len(adj), vertex_budget)
        return len(adj) - 1

    def add_edge(u: int, v: int) -> None:
        adj[u].append(v)
        adj[v].append(u)

    def add_path(u: int, v: int, length: int) -> None:
        """Connect u to v through length-1 fresh intermediate vertices."""
        prev = u
        for _ in range(length - 1):
            w = new_vertex()
            add_edge(prev, w)
            prev = w
        add_edge(prev, v)

    def grow_tree(root: int, n: int, leaves: dict[tuple[int, ...], int] | None):
        """Depth-n stretched tree below `root`.

        When `leaves` maps addresses to existing vertices (the mirror copy),
        last-generation vertices are shared instead of created; otherwise the
        address -> vertex map of the new leaves is returned.
        """
        created: dict[tuple[int, ...], int] = {}
        level = {(): root}
        for k in range(1, n + 1):
            next_level: dict[tuple[int, ...], int] = {}
            for addr, parent in sorted(level.items()):
                for c in range(b):
                    child_addr = addr + (c,)
                    if k == n and leaves is not None:
                        child = leaves[child_addr]
                    else:
                        child = new_vertex()
                    add_path(parent, child, a ** (n - k))
                    next_level[child_addr] = child
            level = next_level
        created.update(level)
        return created

    prev_far_root: int | None = None
    for n in range(1, blocks + 1):
        root = prev_far_root if prev_far_root is not None else new_vertex()
        leaves = grow_tree(root, n, None)
        far_root = new_vertex()
        grow_tree(far_root, n, leaves)
        basepoints[f"r_{n}"] = root
        basepoints[f"rp_{n}"] = far_root
        basepoints[f"leaf_{n}"] = leaves[(0,) * n]
        prev_far_root = far_root

    graph = Graph(
        adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adj),
        basepoints=basepoints,
    )
    graph.validate()
    return graph


@dataclass(frozen=True)
class StairwayStrip:
    """Discretized strip: graph plus integer coordinates per vertex."""

    graph: Graph
    points: tuple[tuple[int, int], ...]


def _raster_half_circle(radius: int, upper: bool) -> list[tuple[int, int]]:
    """Midpoint-circle raster of one half (y >= 0 or y <= 0) of a circle at 0."""
    pts = set()
    x, y, err = radius, 0, 1 - radius
    while x >= y:
        for px, py in (
            (x, y), (y, x), (-y, x), (-x, y),
            (-x, -y), (-y, -x), (y, -x), (x, -y),
        ):
            if (py >= 0) == upper or py == 0:
                pts.add((px, py))
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return sorted(pts)


def stairway_strip(
    levels: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> StairwayStrip:
    """Closed 1-neighborhood of the stairway curve, as a grid graph.

    The curve: from the origin straight to (2, 0); then for k = 1..levels an
    alternating half-circle of radius 2^k centered at the origin (upper for
    odd k, lower for even k) followed by a straight run along the x-axis out
    to the next radius.  Vertices are all grid points at Chebyshev distance
    <= 1 from a rasterized curve point; edges join grid 4-neighbors.  The
    basepoint "origin" is (0, 0).
    """
    if levels < 2:
        raise ValueError("need at least two levels")
    curve: set[tuple[int, int]] = set()
    for k in range(1, levels + 1):
        r, upper = 2**k, k % 2 == 1
        curve.update(_raster_half_circle(r, upper))
        # Straight run from this half-circle's exit to the next one's entry.
        # Odd k exits at (-r, 0) and the next (lower) circle starts at
        # (-2r, 0); even k exits at (r, 0) heading for (2r, 0).
        sign = -1 if upper else 1
        curve.update((sign * t, 0) for t in range(r, 2 * r + 1))
    curve.update((t, 0) for t in range(0, 3))  # lead-in from the origin

    cells = set()
    for px, py in curve:
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                cells.add((px + dx, py + dy))
    if len(cells) > vertex_budget:
        raise BudgetExceededError("stairway_strip", len(cells), vertex_budget)
    points = sorted(cells)
    index = {p: i for i, p in enumerate(points)}
    edges = []
    for (px, py), i in index.items():
        for q in ((px + 1, py), (px, py + 1)):
            j = index.get(q)
            if j is not None:
                edges.append((i, j))
    graph = Graph.from_edges(len(points), edges, {"origin": index[(0, 0)]})
    return StairwayStrip(graph=graph, points=tuple(points))


def norm_profile(strip: StairwayStrip, depth: int) -> VolumeProfile:
    """Volume profile of the strip under the ambient Euclidean norm.

    ball[r] counts vertices with |v|_2 <= r.  This is the subspace metric
    from the plane, the one in which the strip's spheres spike: the whole
    half-circle of scale 2^k lands in the ring (2^k, 2^k + 1].  The graph
    metric would instead see a thick path here and no spikes.
    """
    origin = strip.graph.basepoints["origin"]
    counts = [0] * (depth + 1)
    for x, y in strip.points:
        # smallest integer r with x^2 + y^2 <= r^2
        r = math.isqrt(x * x + y * y)
        if r * r < x * x + y * y:
            r += 1
        if r <= depth:
            counts[r] += 1
    ball = []
    total = 0
    for r in range(depth + 1):
        total += counts[r]
        ball.append(total)
    return VolumeProfile(center=origin, ball=tuple(ball))
