from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sievelab.errors import InvalidArgumentError
from sievelab.farey import enumerate_family, max_close_count, min_spacing
from sievelab.gram import delta_star_dense_oracle
from sievelab.partition import (
    assembly_to_json,
    build_partition,
    covering_bound,
    dyadic_assembly,
    verify_partition,
)


def _spacing_ok(cls, n):
    # exhaustive exact pairwise check, including wraparound
    vals = sorted(p.value for p in cls)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            d = vals[j] - vals[i]
            d = min(d, 1 - d)
            if d * n < 1:
                return False
    return True


@pytest.mark.parametrize(
    "k,q_min,q_max,n",
    [(2, 2, 4, 16), (2, 4, 8, 256), (2, 3, 6, 100), (3, 2, 4, 64), (3, 3, 6, 729)],
)
def test_partition_certified_and_spaced(k, q_min, q_max, n):
    fam = enumerate_family(k, q_min, q_max)
    part = build_partition(fam, n)
    cert = verify_partition(part)
    assert cert.ok, cert.failures
    # independent exhaustive spacing check, not the verifier's adjacency scan
    for cls in part.classes:
        assert _spacing_ok(cls, n)
    # classes partition the family
    assert sum(len(c) for c in part.classes) == len(fam)
    assert part.repetitions <= max_close_count(fam, n).max_close_count


@settings(max_examples=30, deadline=None)
@given(
    k=st.integers(2, 3),
    q_min=st.integers(2, 5),
    span=st.integers(0, 3),
    n=st.integers(1, 4000),
)
def test_partition_certificate_property(k, q_min, span, n):
    fam = enumerate_family(k, q_min, q_min + span)
    part = build_partition(fam, n)
    cert = verify_partition(part)
    assert cert.ok, cert.failures
    assert part.repetitions <= max_close_count(fam, n).max_close_count


def test_partition_deterministic():
    fam = enumerate_family(2, 2, 5)
    a = build_partition(fam, 64)
    b = build_partition(fam, 64)
    assert [[(p.a, p.q) for p in c] for c in a.classes] == [
        [(p.a, p.q) for p in c] for c in b.classes
    ]


def test_covering_bound_dominates_delta_star():
    for k, q_min, q_max, n in ((2, 2, 4, 16), (2, 3, 5, 81), (3, 2, 3, 64)):
        fam = enumerate_family(k, q_min, q_max)
        part = build_partition(fam, n)
        assert covering_bound(part) >= delta_star_dense_oracle(fam, n) * (1 - 1e-9)


def test_covering_bound_refuses_broken_partition():
    fam = enumerate_family(2, 2, 4)
    part = build_partition(fam, 16)
    part.classes[0] = part.classes[0] + part.classes[1]  # duplicate points
    with pytest.raises(InvalidArgumentError):
        covering_bound(part)


def test_verifier_catches_spacing_violation():
    fam = enumerate_family(2, 2, 4)
    # n = 1 demands gaps >= 1, impossible for two circle points in one class
    from sievelab.partition import SpacedPartition

    bad = SpacedPartition(family=fam, n=1, classes=[list(fam.points)], repetitions=1)
    cert = verify_partition(bad)
    assert not cert.ok
    assert any(kind == "spacing" for kind, _ in cert.failures)


def test_singleton_and_empty_families():
    fam = enumerate_family(2, 1, 1)
    part = build_partition(fam, 10)
    assert verify_partition(part).ok
    assert len(part.classes) == 1 and part.repetitions == 1


def test_dyadic_assembly_blocks_cover_range():
    blocks = dyadic_assembly(2, 8, 64, enumerate_family)
    covered = []
    for b in blocks:
        covered.extend(range(b.q_lo, b.q_hi + 1))
        assert verify_partition(b.partition).ok
        m = max_close_count(b.partition.family, 64).max_close_count
        assert b.partition.repetitions <= m
    assert covered == list(range(1, 9))


def test_assembly_json_schema():
    blocks = dyadic_assembly(2, 4, 16, enumerate_family)
    out = assembly_to_json(blocks, 16)
    assert set(out) == {"n", "blocks", "covering_bound"}
    assert out["n"] == 16
    for blk in out["blocks"]:
        assert set(blk) == {"q_lo", "q_hi", "classes", "repetitions"}
    assert out["covering_bound"] == sum(2 * 16 * b["classes"] for b in out["blocks"])


def test_invalid_n_rejected():
    fam = enumerate_family(2, 2, 4)
    with pytest.raises(InvalidArgumentError):
        build_partition(fam, 0)
