"""Exact product-set dynamics: |U^n|, varying factors, Folner ratios.

Everything here works with hash sets of encoded group elements, so all sizes
and ratios are exact.  Products are one-sided (N_{n+1} = N_n * U_{n+1});
sets are never symmetrized.  The identity is adjoined to every factor before
multiplying; that makes the sequence of products nondecreasing, and the flag
`identity_adjoined` records whether any factor actually lacked it.

With the identity present, expanding only the newest elements of N_n by the
next factor is exhaustive, so the cost per step is proportional to the
frontier, not the whole set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceededError
from .groups import Element, GroupModel, check_generates

__all__ = [
    "ProductSequence",
    "product_powers",
    "varying_products",
    "folner_ratios",
    "regularity_constant",
    "generating_containment",
    "product_with_powers",
    "shell_inclusion_check",
    "DEFAULT_ELEMENT_BUDGET",
]

DEFAULT_ELEMENT_BUDGET = 5_000_000


@dataclass(frozen=True)
class ProductSequence:
    """Products N_0 = {1}, N_n = U_1 * ... * U_n (identity adjoined to factors).

    `birth[g]` is the first n with g in N_n, which encodes every N_n at once:
    N_n = {g : birth[g] <= n}.  `sizes[n] = |N_n|`.
    """

    model: GroupModel
    factor_labels: tuple[str, ...]
    sizes: tuple[int, ...]
    birth: dict[Element, int]
    identity_adjoined: bool

    @property
    def steps(self) -> int:
        return len(self.sizes) - 1

    def element_set(self, n: int) -> frozenset[Element]:
        if not 0 <= n <= self.steps:
            raise ValueError(f"step {n} outside computed range 0..{self.steps}")
        return frozenset(g for g, b in self.birth.items() if b <= n)

    def frontier(self, n: int) -> frozenset[Element]:
        """Elements first reached at step n: N_n minus N_(n-1)."""
        if not 0 <= n <= self.steps:
            raise ValueError(f"step {n} outside computed range 0..{self.steps}")
        return frozenset(g for g, b in self.birth.items() if b == n)


def _normalize_factor(
    model: GroupModel, factor: Iterable[Element]
) -> tuple[tuple[Element, ...], bool]:
    elems = set(factor)
    adjoined = model.identity not in elems
    elems.add(model.identity)
    return tuple(sorted(elems)), adjoined


def _expand(
    model: GroupModel,
    factors: Sequence[Iterable[Element]],
    labels: Sequence[str],
    element_budget: int,
) -> ProductSequence:
    birth: dict[Element, int] = {model.identity: 0}
    frontier: list[Element] = [model.identity]
    sizes = [1]
    adjoined_any = False
    for n, factor in enumerate(factors, start=1):
        steps, adjoined = _normalize_factor(model, factor)
        adjoined_any = adjoined_any or adjoined
        new: list[Element] = []
        for g in frontier:
            for s in steps:
                h = model.multiply(g, s)
                if h not in birth:
                    birth[h] = n
                    new.append(h)
        if len(birth) > element_budget:
            raise BudgetExceededError("product expansion", len(birth), element_budget)
        frontier = new
        sizes.append(len(birth))
    return ProductSequence(
        model=model,
        factor_labels=tuple(labels),
        sizes=tuple(sizes),
        birth=birth,
        identity_adjoined=adjoined_any,
    )


def product_powers(
    model: GroupModel,
    generating_set: Sequence[Element] | str,
    n_max: int,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> ProductSequence:
    """Powers U, U^2, ..., U^n_max of a single factor, exactly."""
    if isinstance(generating_set, str):
        label = generating_set
        generating_set = model.generating_set(generating_set)
    else:
        label = "custom"
    check_generates(model, generating_set)
    return _expand(
        model, [generating_set] * n_max, [label] * n_max, element_budget
    )


def varying_products(
    model: GroupModel,
    factors: Sequence[Sequence[Element]],
    inner: Sequence[Element],
    outer: Sequence[Element],
    labels: Sequence[str] | None = None,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> ProductSequence:
    """Products of varying factors pinched between two certified sets.

    Every factor must contain `inner` and be contained in `outer`
    (inner generates); violations name the offending factor.  This is the
    sandwich that makes the product sequence behave like powers of a fixed
    set for growth purposes.
    """
    check_generates(model, inner)
    inner_set, outer_set = set(inner), set(outer)
    if not inner_set <= outer_set:
        raise ValueError("inner certificate set must lie inside the outer one")
    for i, factor in enumerate(factors):
        fset = set(factor)
        missing = inner_set - fset
        if missing:
            raise ValueError(
                f"factor {i} is missing certified elements {sorted(missing)}"
            )
        excess = fset - outer_set
        if excess:
            raise ValueError(
                f"factor {i} exceeds the outer certificate by {sorted(excess)}"
            )
    if labels is None:
        labels = [f"factor_{i}" for i in range(len(factors))]
    return _expand(model, factors, labels, element_budget)


def folner_ratios(sequence: ProductSequence) -> tuple[Fraction, ...]:
    """Exact boundary ratios (|N_(n+1)| - |N_n|) / |N_n| for n = 0..steps-1."""
    sizes = sequence.sizes
    return tuple(
        Fraction(sizes[n + 1] - sizes[n], sizes[n]) for n in range(len(sizes) - 1)
    )


def regularity_constant(
    sequence: ProductSequence,
    n: int,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> Fraction:
    """Exact |N_n^-1 N_n| / |N_n|.

    Quadratic in |N_n|; guarded by the element budget.  For symmetric powers
    this equals |U^(2n)| / |U^n|, which unit tests use as an independent
    cross-check.
    """
    model = sequence.model
    elements = sequence.element_set(n)
    if len(elements) ** 2 > element_budget:
        raise BudgetExceededError(
            "regularity product", len(elements) ** 2, element_budget
        )
    inverses = [model.invert(g) for g in elements]
    out = {model.multiply(a, b) for a in inverses for b in elements}
    return Fraction(len(out), len(elements))


def generating_containment(
    model: GroupModel,
    generating_set: Sequence[Element],
    targets: Sequence[Element],
    m_max: int = 64,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> int:
    """Smallest m with targets contained in U^m (identity adjoined), else raise.

    This is the effective version of "any finite set is swallowed by some
    power of a generating set": a direct nested-ball search.
    """
    steps, _ = _normalize_factor(model, generating_set)
    missing = set(targets)
    reached = {model.identity}
    missing -= reached
    if not missing:
        return 0
    frontier = [model.identity]
    for m in range(1, m_max + 1):
        new = []
        for g in frontier:
            for s in steps:
                h = model.multiply(g, s)
                if h not in reached:
                    reached.add(h)
                    new.append(h)
        if len(reached) > element_budget:
            raise BudgetExceededError("containment search", len(reached), element_budget)
        missing -= set(new)
        if not missing:
            return m
        frontier = new
    raise ValueError(
        f"targets {sorted(missing)} not contained in U^{m_max}; "
        "increase m_max or check generation"
    )


def product_with_powers(
    model: GroupModel,
    base: Iterable[Element],
    generating_set: Sequence[Element],
    m: int,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> frozenset[Element]:
    """The set base * U^m with the identity adjoined to U, via m expansions."""
    steps, _ = _normalize_factor(model, generating_set)
    current = set(base)
    frontier = list(current)
    for _ in range(m):
        new = []
        for g in frontier:
            for s in steps:
                h = model.multiply(g, s)
                if h not in current:
                    current.add(h)
                    new.append(h)
        if len(current) > element_budget:
            raise BudgetExceededError("set product", len(current), element_budget)
        frontier = new
    return frozenset(current)


def shell_inclusion_check(
    model: GroupModel,
    generating_set: Sequence[Element],
    n: int,
    k: int,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> tuple[bool, bool]:
    """Exact word-shell sandwich at width k around radius n.

    With N_m the m-th power of the (identity-adjoined) generating set,
    C_{a,b} = N_b minus N_a, and h = n - k/2:

        forward:   C_{n, n+k}  is contained in  C_{h, h+1} * U^(2k)
        backward:  C_{h, h+1} * U^(k/4)  is contained in  C_{n-k, n}

    Both follow from cutting geodesic words at length h + 1; this function
    checks them by enumeration.  Needs k divisible by 4 and k <= n.
    """
    if k < 4 or k % 4 != 0:
        raise ValueError("width k must be a positive multiple of 4")
    if k > n:
        raise ValueError("width k must not exceed the radius n")
    seq = product_powers(model, generating_set, n + k, element_budget)
    h = n - k // 2

    def shell(a: int, b: int) -> frozenset[Element]:
        return frozenset(g for g, born in seq.birth.items() if a < born <= b)

    middle = shell(h, h + 1)
    forward = shell(n, n + k) <= product_with_powers(
        model, middle, generating_set, 2 * k, element_budget
    )
    backward = product_with_powers(
        model, middle, generating_set, k // 4, element_budget
    ) <= shell(n - k, n)
    return forward, backward
