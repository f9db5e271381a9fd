"""Named built-in solutions covering the bijective / non-bijective,
right non-degenerate / degenerate and involutive / non-involutive splits."""

from __future__ import annotations

from functools import lru_cache

from .solution import Solution, enumerate_solutions, validate_solution


def flip(n: int) -> Solution:
    ident = [list(range(n)) for _ in range(n)]
    return validate_solution(n, ident, ident)


def permutation_solution(f, g) -> Solution:
    """r(x, y) = (f(y), g(x)); a solution exactly when f and g commute."""
    n = len(f)
    sigma = [list(f) for _ in range(n)]
    gamma = [list(g) for _ in range(n)]
    return validate_solution(n, sigma, gamma)


def right_collapse(n: int) -> Solution:
    """r(x, y) = (y, y)."""
    return validate_solution(n, [list(range(n))] * n, [[y] * n for y in range(n)])


_CYCLE = (1, 2, 0)
_CYCLE_INV = (2, 0, 1)
_SWAP3 = (1, 0, 2)
_ID3 = (0, 1, 2)


@lru_cache(maxsize=None)
def catalog() -> tuple[tuple[str, Solution], ...]:
    entries = [
        ("T2", flip(2)),
        ("P2", permutation_solution((1, 0), (1, 0))),
        ("RD2", right_collapse(2)),
        ("T3", flip(3)),
        ("P3-swap", permutation_solution(_SWAP3, _SWAP3)),
        ("P3-cycle", permutation_solution(_CYCLE, _CYCLE)),
        ("P3-cycle-inv", permutation_solution(_CYCLE, _CYCLE_INV)),
        ("P3-cycle-id", permutation_solution(_CYCLE, _ID3)),
    ]
    for i, s in enumerate(enumerate_solutions(2, left_nondegenerate=True)):
        entries.append((f"L2-{i:02d}", s))
    names = [name for name, _ in entries]
    assert len(set(names)) == len(names)
    return tuple(entries)


def catalog_names() -> list[str]:
    return [name for name, _ in catalog()]


def get(name: str) -> Solution:
    for key, s in catalog():
        if key == name:
            return s
    raise KeyError(name)
