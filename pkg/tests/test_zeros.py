import pytest

from padelab.approx import HPComponent, PadeRow, hermite_pade, incomplete_row, pade, telescope_row
from padelab.diagnostics import classify, estimate_R_star, regularize, track_zeros
from padelab.series import SeriesSystem, add, catalog_entire, catalog_log_branch, catalog_rational


def four_pole():
    f1 = catalog_rational([(1, 1, 1), (3, 1, 1)])
    f2 = catalog_rational([(2, 1, 1), (4, 1, 1)])
    return SeriesSystem((f1, f2), (1, 1))


class TestTracking:
    def test_single_pole_plus_entire(self):
        f = add(catalog_rational([(1, 1, 1)]), catalog_entire())
        traj = track_zeros([pade(f, n, 1) for n in range(2, 26)])
        assert len(traj.clusters) == 1
        c = traj.clusters[0]
        assert abs(c.limit - 1) < 1e-10 and c.lam == 1
        assert c.rate.superexponential or c.rate.fit_estimate < 0.2

    def test_system_clusters(self):
        s = four_pole()
        traj = track_zeros([hermite_pade(s, n) for n in range(10, 40)])
        locs = sorted(round(c.limit.real, 6) for c in traj.clusters)
        assert locs == [1.0, 2.0]
        assert all(c.lam == 1 for c in traj.clusters)

    def test_rational_recovered(self):
        f = catalog_rational([(1, 1, 1), (2, 1, 1)])
        traj = track_zeros([pade(f, n, 2) for n in range(3, 15)])
        assert sorted(c.limit.real for c in traj.clusters) == [1.0, 2.0]
        assert not traj.unmatched

    def test_every_root_accounted_for(self):
        f = add(catalog_rational([(1, 1, 1)]), catalog_log_branch(2))
        recs = [pade(f, n, 2) for n in range(10, 25)]
        traj = track_zeros(recs)
        for n in traj.ns:
            in_clusters = sum(c.count(n) for c in traj.clusters)
            unmatched = sum(1 for k, _ in traj.unmatched if k == n)
            assert in_clusters + unmatched == len(traj.roots[n])

    def test_too_few(self):
        f = catalog_entire()
        with pytest.raises(ValueError):
            track_zeros([pade(f, n, 1) for n in range(2, 6)])


class TestClassify:
    def test_three_pole_row(self):
        f = catalog_rational([(1, 1, 1), (2, 1, 1), (4, 1, 1)])
        recs = incomplete_row(f, range(10, 41), 2, 2, PadeRow(2))
        tels = telescope_row(recs)
        rstar = estimate_R_star(tels).fit
        assert abs(rstar - 4) < 0.3
        rep = classify(track_zeros(recs), rstar, telescopes=tels, m=2, m_star=2)
        got = sorted((round(e.location.real, 2), e.kind, e.order) for e in rep.entries)
        assert got == [(1.0, "pole", 1), (2.0, "pole", 1)]
        for e in rep.entries:
            assert abs(e.location - round(e.location.real)) < 1e-2

    def test_qstar_attraction(self):
        recs = incomplete_row(None, range(20, 49), 2, 1, HPComponent(four_pole(), 1))
        tels = telescope_row(recs)
        reg = regularize([t.A for t in tels], n_offset=tels[0].n, radius=3)
        rep = classify(track_zeros(recs), 3.0, reg.contact, tels, 2, 1)
        kinds = {round(e.location.real, 3): e.kind for e in rep.entries}
        assert kinds == {1.0: "pole", 2.0: "qstar_attracted"}

    def test_missing_telescopes(self):
        recs = incomplete_row(None, range(20, 32), 2, 1, HPComponent(four_pole(), 1))
        with pytest.raises(ValueError):
            classify(track_zeros(recs), 3.0, m=2, m_star=1)

    def test_boundary(self):
        f = add(catalog_rational([(1, 1, 1)]), catalog_log_branch(2))
        recs = incomplete_row(f, range(30, 61), 2, 2, PadeRow(2))
        rep = classify(track_zeros(recs), f.radius(1), telescopes=telescope_row(recs), m=2, m_star=2)
        kinds = sorted((e.kind, e.order) for e in rep.entries)
        assert kinds == [("boundary_singularity", None), ("pole", 1)]
        bd = next(e for e in rep.entries if e.kind == "boundary_singularity")
        assert abs(bd.location - 2) < 0.15
