import sievelab.verify as verify_mod
from sievelab.verify import run_verify


def test_quick_suite_passes():
    results = run_verify(quick=True)
    assert all(r.ok for r in results), [(r.name, r.detail) for r in results if not r.ok]


def test_mutation_is_caught(monkeypatch):
    # an injected off-by-one in the oracle must trip the dual-path check
    real = verify_mod.brute_force_max_close_count

    def broken(family, n, *a, **kw):
        return real(family, n, *a, **kw) + 1

    monkeypatch.setattr(verify_mod, "brute_force_max_close_count", broken)
    results = {r.name: r for r in run_verify(quick=True)}
    r = results["m-three-paths"]
    assert not r.ok
    assert "mismatch" in r.detail


def test_crash_reported_not_raised(monkeypatch):
    def boom(quick):
        raise RuntimeError("exploded")

    monkeypatch.setattr(verify_mod, "ALL_CHECKS", [boom])
    results = run_verify()
    assert len(results) == 1 and not results[0].ok
    assert "exploded" in results[0].detail
