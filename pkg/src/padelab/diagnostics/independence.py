"""Polynomial independence of a system at a finite truncation."""
from __future__ import annotations

from dataclasses import dataclass

from ..linalg import kernel_basis, rank
from ..poly import Polynomial
from ..scalar import Backend, QQi, half_tol, to_mpc
from ..series import CombinationSpec, SeriesSystem, combine


@dataclass(frozen=True)
class IndependenceVerdict:
    """``independent`` means: independent at truncation ``N`` (a necessary condition only)."""

    independent: bool
    N: int
    first_row: int
    rank: int
    witness: tuple | None      # multipliers (p_1, ..., p_d) when dependent

    def summary(self) -> dict:
        wit = None
        if self.witness is not None:
            wit = [[str(c) for c in p.coeffs] for p in self.witness]
        return {"independent_at_truncation": self.independent, "N": self.N, "first_row": self.first_row,
                "rank": self.rank, "witness": wit}


def _columns(system: SeriesSystem) -> list[tuple[int, int]]:
    return [(k, i) for k, mk in enumerate(system.multi_index) for i in range(mk)]


def polynomial_independence(system: SeriesSystem, N: int, slack: int | None = None) -> IndependenceVerdict:
    """Test whether some ``sum p_k f_k`` (``deg p_k < m_k``) is a polynomial.

    The coefficient map of ``(p_1..p_d)`` is restricted to Taylor indices in
    ``(max m_k + slack, N]``; a nontrivial kernel gives a witness whose
    combination has vanishing coefficients there. ``slack`` defaults to
    ``N // 2 - max m_k``, which allows polynomial parts of degree up to ``N // 2``.
    """
    size = system.size
    if N < 2 * size + 20:
        raise ValueError(f"need N >= 2|m| + 20 = {2 * size + 20}")
    for f in system.components:
        if not f.available(N):
            raise ValueError(f"{f!r}: coefficients through {N} are required")
    mmax = max(system.multi_index)
    if slack is None:
        slack = N // 2 - mmax
    first = mmax + slack + 1
    cols = _columns(system)
    rows = [[system.components[k].coeff(j - i) for k, i in cols] for j in range(first, N + 1)]
    backend = system.backend
    r = rank(rows, len(cols), backend)
    if r == len(cols):
        return IndependenceVerdict(True, N, first, r, None)
    vec = kernel_basis(rows, len(cols), backend)[0]
    lead = next(c for c in vec if (c if backend == Backend.EXACT else abs(c) > half_tol()))
    vec = [c / lead for c in vec]
    polys = []
    for k, mk in enumerate(system.multi_index):
        polys.append(Polynomial(tuple(vec[j] for j, (kk, _) in enumerate(cols) if kk == k), backend))
    return IndependenceVerdict(False, N, first, r, tuple(polys))


def verify_witness(system: SeriesSystem, witness: tuple, first: int, N: int) -> bool:
    """Coefficients ``first..N`` of the witness combination vanish."""
    g = combine(system, CombinationSpec(tuple(witness)))
    if system.backend == Backend.EXACT:
        return all(not g.coeff(j) for j in range(first, N + 1))
    scale = max(abs(to_mpc(f.coeff(j))) for f in system.components for j in range(first, N + 1)) or 1
    return all(abs(to_mpc(g.coeff(j))) <= half_tol() * scale for j in range(first, N + 1))
