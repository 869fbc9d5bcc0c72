"""Zero trajectories of denominators along a row, and their classification."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from ..poly import RootSet
from .rates import RateEstimate, rate_estimate

MARGIN = 0.05
ATTRACT_TOL = 1e-2
MATCH_FACTOR = 0.25


@dataclass
class Cluster:
    limit: complex
    lam: int
    members: dict            # n -> list of root locations
    rate: RateEstimate

    def count(self, n: int) -> int:
        return len(self.members.get(n, ()))


@dataclass
class TrajectorySet:
    ns: list
    roots: dict              # n -> list of complex (multiplicity expanded)
    clusters: list
    unmatched: list          # (n, z)
    threshold: float

    def summary(self) -> dict:
        return {"n_range": [self.ns[0], self.ns[-1]], "threshold": self.threshold,
                "unmatched": len(self.unmatched),
                "clusters": [{"limit": [c.limit.real, c.limit.imag], "lambda": c.lam,
                              "rate": c.rate.summary() if c.rate is not None else None}
                             for c in self.clusters]}


def _root_points(rec) -> tuple[int, list]:
    if isinstance(rec, tuple):
        n, rs = rec
    else:
        n, rs = rec.n, rec.roots
    pts = rs.points() if isinstance(rs, RootSet) else list(rs)
    return n, [complex(z) for z in pts]


def _separation(pts: list) -> float:
    distinct: list = []
    for z in pts:
        if all(abs(z - w) > 1e-8 * max(1, abs(w)) for w in distinct):
            distinct.append(z)
    if len(distinct) < 2:
        return math.inf
    return min(abs(a - b) for i, a in enumerate(distinct) for b in distinct[i + 1:])


def track_zeros(records: Sequence, threshold: float | None = None, limits: Sequence | None = None,
                window: int | None = None, match_factor: float = MATCH_FACTOR) -> TrajectorySet:
    """Link roots of consecutive records into trajectories and cluster their endpoints.

    ``records`` are approximant records (anything with ``n`` and ``roots``) or
    ``(n, roots)`` pairs, ordered by ``n``. Roots are linked greedily on sorted
    pairwise distances, up to ``threshold`` (default: ``match_factor`` times the
    minimum separation of the final roots). Trajectories reaching the last record form
    the clusters; ``limits`` overrides the estimated cluster locations.
    """
    if len(records) < 10:
        raise ValueError("track_zeros needs at least 10 records")
    data = [_root_points(r) for r in records]
    ns = [n for n, _ in data]
    final = data[-1][1]
    if threshold is None:
        sep = _separation(list(limits) if limits else final)
        threshold = match_factor * (sep if math.isfinite(sep) else max([1.0] + [abs(z) for z in final]))

    trajs: list[dict] = []
    active: list[int] = []
    for n, pts in data:
        pairs = sorted(
            (abs(trajs[t][max(trajs[t])] - z), t, j) for t in active for j, z in enumerate(pts)
        )
        used_t, used_p = set(), set()
        for dist, t, j in pairs:
            if dist > threshold:
                break
            if t in used_t or j in used_p:
                continue
            trajs[t][n] = pts[j]
            used_t.add(t)
            used_p.add(j)
        next_active = sorted(used_t)
        for j, z in enumerate(pts):
            if j not in used_p:
                trajs.append({n: z})
                next_active.append(len(trajs) - 1)
        active = next_active

    last = ns[-1]
    finishing = [t for t in range(len(trajs)) if last in trajs[t]]
    groups: list[list[int]] = []
    for t in finishing:
        end = trajs[t][last]
        for g in groups:
            if abs(trajs[g[0]][last] - end) <= threshold:
                g.append(t)
                break
        else:
            groups.append([t])

    clusters = []
    in_cluster = set()
    for g in groups:
        if limits:
            end = sum(trajs[t][last] for t in g) / len(g)
            limit = min((complex(z) for z in limits), key=lambda z: abs(z - end))
        else:
            limit = sum(trajs[t][last] for t in g) / len(g)
        members: dict[int, list] = {}
        for t in g:
            in_cluster.add(t)
            for n, z in trajs[t].items():
                members.setdefault(n, []).append(z)
        dists = [(n, max(abs(z - limit) for z in members[n])) for n in ns if n in members]
        if not limits:
            dists = dists[:-1]
        clusters.append(Cluster(limit, len(g), members, rate_estimate(dists, window)))
    clusters.sort(key=lambda c: (c.limit.real, c.limit.imag))
    unmatched = sorted(
        ((n, z) for t, tr in enumerate(trajs) if t not in in_cluster for n, z in tr.items()),
        key=lambda item: (item[0], item[1].real, item[1].imag),
    )
    return TrajectorySet(ns, dict(data), clusters, unmatched, threshold)


@dataclass(frozen=True)
class SingularityEntry:
    location: complex
    kind: str                # pole | boundary_singularity | qstar_attracted | undecided
    order: int | None
    evidence: dict

    def summary(self) -> dict:
        return {"location": [self.location.real, self.location.imag], "kind": self.kind,
                "order": self.order, "evidence": self.evidence}


@dataclass(frozen=True)
class SingularityReport:
    entries: tuple
    R_star: float
    margin: float
    notes: tuple = ()

    def kinds(self) -> list[str]:
        return [e.kind for e in self.entries]

    def summary(self) -> dict:
        return {"R_star": self.R_star, "margin": self.margin, "entries": [e.summary() for e in self.entries],
                "notes": list(self.notes)}


def qstar_distances(zeta: complex, telescopes: Sequence, indices: Sequence[int] | None = None) -> list[tuple]:
    """``(n, dist(zeta, zeros of q*_n))`` over nondegenerate telescopes (``inf`` when q* is constant)."""
    wanted = None if indices is None else set(indices)
    out = []
    for t in telescopes:
        if t.degenerate or (wanted is not None and t.n not in wanted):
            continue
        zs = t.q_star_roots
        out.append((t.n, min((abs(zeta - complex(z)) for z in zs), default=math.inf)))
    return out


def classify(traj: TrajectorySet, R_star: float, contact: Sequence[int] | None = None,
             telescopes: Sequence | None = None, m: int | None = None, m_star: int | None = None,
             margin: float = MARGIN, attract_tol: float = ATTRACT_TOL,
             n_range: tuple | None = None) -> SingularityReport:
    """Sort each cluster into q*-attracted, pole, boundary singularity or undecided.

    The q* test uses the median of ``dist(zeta, zeros of q*_n)`` over contact
    indices inside ``n_range`` (default: the upper half of the telescope range).
    """
    if m is not None and m_star is not None and m > m_star and telescopes is None:
        raise ValueError("telescope data are required when m > m_star")
    notes = []
    idx = None
    if telescopes:
        tn = [t.n for t in telescopes]
        lo, hi = n_range if n_range else (tn[0] + (tn[-1] - tn[0]) // 2, tn[-1])
        pool = contact if contact is not None else tn
        idx = [n for n in pool if lo <= n <= hi]
        if contact is not None:
            notes.append("q* attraction is measured on the finite hull-contact set; the limit statement "
                         "concerns infinite index sequences")
    entries = []
    for c in traj.clusters:
        zeta = c.limit
        ev = {"lambda": c.lam, "rate_fit": c.rate.fit_estimate, "rate_tail": c.rate.tail_estimate,
              "R_star": R_star, "modulus": abs(zeta)}
        med = math.inf
        if telescopes and idx:
            d = [v for _, v in qstar_distances(zeta, telescopes, idx)]
            if d:
                med = statistics.median(d)
        ev["qstar_median_distance"] = med if math.isfinite(med) else None
        r = abs(zeta)
        if med <= attract_tol:
            kind, order = "qstar_attracted", None
        elif r < R_star * (1 - margin):
            kind, order = "pole", c.lam
        elif abs(r - R_star) <= margin * R_star:
            kind, order = "boundary_singularity", None
        else:
            kind, order = "undecided", None
        entries.append(SingularityEntry(zeta, kind, order, ev))
    entries.sort(key=lambda e: (e.location.real, e.location.imag))
    return SingularityReport(tuple(entries), R_star, margin, tuple(notes))
