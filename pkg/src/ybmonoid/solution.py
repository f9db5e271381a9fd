"""Finite set-theoretic solutions of the Yang-Baxter equation.

A solution on ``X = {0, ..., n-1}`` is stored as two tables::

    sigma[x][y] = sigma_x(y)
    gamma[y][x] = gamma_y(x)

so that ``r(x, y) = (sigma[x][y], gamma[y][x])``.  The YBE is taken in braid
form ``r12 r23 r12 = r23 r12 r23``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .errors import (
    InputError,
    NotASolution,
    NotLeftNondegenerate,
    OutOfRangeEntry,
    SearchSpaceTooLarge,
    ShapeMismatch,
)

MAX_ENUMERATION_SIZE = 3


@dataclass(frozen=True)
class Solution:
    n: int
    sigma: tuple[tuple[int, ...], ...]
    gamma: tuple[tuple[int, ...], ...]

    def r(self, x: int, y: int) -> tuple[int, int]:
        return self.sigma[x][y], self.gamma[y][x]

    @cached_property
    def is_ybe(self) -> bool:
        return not braid_violations(self, first_only=True)

    @cached_property
    def is_left_nondegenerate(self) -> bool:
        return all(_is_perm(row, self.n) for row in self.sigma)

    @cached_property
    def sigma_inverse(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_left_nondegenerate:
            raise NotLeftNondegenerate("some sigma_x is not a bijection")
        inv = []
        for row in self.sigma:
            out = [0] * self.n
            for y, v in enumerate(row):
                out[v] = y
            inv.append(tuple(out))
        return tuple(inv)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": [list(row) for row in self.sigma],
            "gamma": [list(row) for row in self.gamma],
        }

    def __str__(self) -> str:
        return f"Solution(n={self.n}, sigma={_fmt(self.sigma)}, gamma={_fmt(self.gamma)})"


@dataclass(frozen=True)
class SolutionProfile:
    is_ybe: bool
    left_nondegenerate: bool
    right_nondegenerate: bool
    bijective: bool
    involutive: bool
    irretractable: bool

    def to_dict(self) -> dict:
        return {
            "is_ybe": self.is_ybe,
            "left_nondegenerate": self.left_nondegenerate,
            "right_nondegenerate": self.right_nondegenerate,
            "bijective": self.bijective,
            "involutive": self.involutive,
            "irretractable": self.irretractable,
        }


def _fmt(table) -> str:
    return "[" + ",".join("[" + ",".join(map(str, row)) + "]" for row in table) + "]"


def _is_perm(row, n: int) -> bool:
    return sorted(row) == list(range(n))


def _ingest_table(name: str, table, n: int) -> tuple[tuple[int, ...], ...]:
    if not isinstance(table, (list, tuple)) or len(table) != n:
        raise ShapeMismatch(f"{name} must have {n} rows")
    rows = []
    for i, row in enumerate(table):
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise ShapeMismatch(f"{name} row {i} must have {n} entries")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InputError(f"{name}[{i}][{j}] is not an integer: {v!r}")
            if not 0 <= v < n:
                raise OutOfRangeEntry(f"{name}[{i}][{j}] = {v} not in 0..{n - 1}")
        rows.append(tuple(int(v) for v in row))
    return tuple(rows)


def validate_solution(n: int, sigma, gamma) -> Solution:
    """Ingest the two tables into a :class:`Solution`.

    Shape and range are enforced here. The YBE is not: its status is
    recorded on ``Solution.is_ybe`` and can be inspected with
    :func:`check_ybe`.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    s = Solution(n, _ingest_table("sigma", sigma, n), _ingest_table("gamma", gamma, n))
    s.is_ybe  # noqa: B018 - evaluate and cache
    return s


def _braid_sides(s: Solution, x: int, y: int, z: int):
    sig, gam = s.sigma, s.gamma
    # r12 r23 r12
    a1, b1 = sig[x][y], gam[y][x]
    b2, c2 = sig[b1][z], gam[z][b1]
    a3, b3 = sig[a1][b2], gam[b2][a1]
    lhs = (a3, b3, c2)
    # r23 r12 r23
    q1, c1 = sig[y][z], gam[z][y]
    p2, q2 = sig[x][q1], gam[q1][x]
    q3, c3 = sig[q2][c1], gam[c1][q2]
    rhs = (p2, q3, c3)
    return lhs, rhs


def braid_violations(s: Solution, first_only: bool = False) -> list[tuple[int, int, int]]:
    bad = []
    for x, y, z in itertools.product(range(s.n), repeat=3):
        lhs, rhs = _braid_sides(s, x, y, z)
        if lhs != rhs:
            bad.append((x, y, z))
            if first_only:
                break
    return bad


def check_ybe(s: Solution) -> tuple[bool, list[tuple[int, int, int]]]:
    """Return ``(ok, violating_triples)`` for the braid relation on ``X^3``."""
    bad = braid_violations(s)
    return not bad, bad


def profile(s: Solution) -> SolutionProfile:
    ok, bad = check_ybe(s)
    if not ok:
        raise NotASolution(f"braid relation fails on {len(bad)} triples, first {bad[0]}")
    n = s.n
    pairs = list(itertools.product(range(n), repeat=2))
    images = [s.r(x, y) for x, y in pairs]
    bijective = len(set(images)) == len(pairs)
    involutive = all(s.r(*s.r(x, y)) == (x, y) for x, y in pairs)
    # gamma_x as a row: gamma[x] is the map t -> gamma_x(t)
    irretractable = all(
        not (s.sigma[x] == s.sigma[y] and s.gamma[x] == s.gamma[y])
        for x, y in itertools.combinations(range(n), 2)
    )
    return SolutionProfile(
        is_ybe=True,
        left_nondegenerate=s.is_left_nondegenerate,
        right_nondegenerate=all(_is_perm(row, n) for row in s.gamma),
        bijective=bijective,
        involutive=involutive,
        irretractable=irretractable,
    )


def derived_left_solution(s: Solution) -> Solution:
    """r'(x, y) = (y, sigma_y gamma_{sigma_x^{-1}(y)}(x))."""
    if not s.is_left_nondegenerate:
        raise NotLeftNondegenerate("derived solution needs every sigma_x bijective")
    n = s.n
    inv = s.sigma_inverse
    sigma = [list(range(n)) for _ in range(n)]
    gamma = [[s.sigma[y][s.gamma[inv[x][y]][x]] for x in range(n)] for y in range(n)]
    d = validate_solution(n, sigma, gamma)
    if not d.is_ybe:
        raise NotASolution(f"derived solution of {s} fails the braid relation")
    return d


# -- enumeration --------------------------------------------------------------


def _vector_braid_ok(S: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Braid check for one sigma table against a stack of gamma tables.

    ``S`` has shape (n, n); ``G`` has shape (K, n, n).  Returns a bool mask of
    length K.
    """
    K, n, _ = G.shape
    x, y, z = (a.ravel() for a in np.meshgrid(*(np.arange(n),) * 3, indexing="ij"))
    k = np.arange(K)[:, None]
    a1 = S[x, y][None, :]
    b1 = G[:, y, x]
    b2 = S[b1, z[None, :]]
    c2 = G[k, z[None, :], b1]
    a3 = S[np.broadcast_to(a1, b2.shape), b2]
    b3 = G[k, b2, a1]
    q1 = S[y, z][None, :]
    c1 = G[:, z, y]
    p2 = S[x, S[y, z]][None, :]
    q2 = G[k, q1, x[None, :]]
    q3 = S[q2, c1]
    c3 = G[k, c1, q2]
    ok = (a3 == p2) & (b3 == q3) & (c2 == c3)
    return ok.all(axis=1)


def _gamma_candidates(S: np.ndarray, n: int) -> list[list[int]]:
    # first braid component: sigma_{sigma_x(y)} sigma_{gamma_y(x)} = sigma_x sigma_y
    cands = []
    for y in range(n):
        for x in range(n):
            target = S[x][S[y]]
            left = S[S[x][y]]
            cands.append([t for t in range(n) if np.array_equal(left[S[t]], target)])
    return cands


def _solutions_for_sigma(sigma_rows: tuple[tuple[int, ...], ...], n: int) -> Iterator[Solution]:
    S = np.array(sigma_rows, dtype=np.intp)
    cands = _gamma_candidates(S, n)
    if any(not c for c in cands):
        return
    flat = np.array(list(itertools.product(*cands)), dtype=np.intp)
    G = flat.reshape(-1, n, n)
    mask = _vector_braid_ok(S, G)
    for row in flat[mask]:
        gamma = tuple(tuple(int(v) for v in row[i * n:(i + 1) * n]) for i in range(n))
        yield Solution(n, sigma_rows, gamma)


def enumerate_solutions(
    n: int,
    predicate: Callable[[SolutionProfile], bool] | None = None,
    *,
    left_nondegenerate: bool = False,
) -> Iterator[Solution]:
    """Yield every solution on ``{0..n-1}`` in lexicographic (sigma, gamma) order.

    With ``left_nondegenerate=True`` the sigma rows are restricted to
    permutations before the search, which is what makes ``n = 3`` feasible.
    ``predicate`` is applied to each solution's profile afterwards.
    """
    if n < 1:
        raise InputError("n must be positive")
    if n > MAX_ENUMERATION_SIZE:
        raise SearchSpaceTooLarge(f"exhaustive search is capped at n={MAX_ENUMERATION_SIZE}")
    if left_nondegenerate:
        rows = list(itertools.permutations(range(n)))
    else:
        rows = list(itertools.product(range(n), repeat=n))
    for sigma_rows in itertools.product(rows, repeat=n):
        for s in _solutions_for_sigma(sigma_rows, n):
            if predicate is None or predicate(profile(s)):
                yield s


# -- file format --------------------------------------------------------------

_KEYS = {"n", "sigma", "gamma"}


def solution_from_dict(data) -> Solution:
    if not isinstance(data, dict):
        raise InputError("solution document must be a JSON object")
    keys = set(data)
    if keys != _KEYS:
        extra, missing = sorted(keys - _KEYS), sorted(_KEYS - keys)
        raise InputError(f"bad solution keys: extra={extra} missing={missing}")
    return validate_solution(data["n"], data["sigma"], data["gamma"])


def load_solution(path: str | Path) -> Solution:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return solution_from_dict(data)


def dump_solution(s: Solution, path: str | Path | None = None) -> str:
    text = json.dumps(s.to_dict(), sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
