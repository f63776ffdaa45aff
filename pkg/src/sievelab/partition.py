"""Certified partition of a Farey family into 1/n-spaced classes.

The construction follows the covering argument: chop the circle into
subintervals, sweep repeatedly, and per sweep pull at most one point per
interval into a small number of fresh classes, never putting two points
closer than 1/n into the same class (exact check, wraparound included).

Intervals have width 1/2n rather than 1/n: points sharing an interval are
then pairwise inside the strict 1/2n window, so the occupancy of every
interval -- and hence the number of sweeps -- is bounded by the clustering
statistic M(n, family).  That inequality is the certified content; the
price is up to four classes per sweep instead of three.

Each class being 1/n-spaced, the sharp classical large sieve bounds its
energy by (n + N) * sum |a_n|^2, so with n = N the whole family satisfies
Delta* <= 2 N * (number of classes): the covering bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidArgumentError
from .farey import FareyFamily, max_close_count


@dataclass
class SpacedPartition:
    family: FareyFamily
    n: int
    classes: list  # list of lists of FareyPoint, each 1/n-spaced
    repetitions: int  # number of sweeps


@dataclass
class PartitionCertificate:
    ok: bool
    failures: list = field(default_factory=list)  # (kind, detail) strings

    def first_failure(self):
        return self.failures[0] if self.failures else None


def build_partition(family: FareyFamily, n: int) -> SpacedPartition:
    """Greedy interval-sweep partition; deterministic (smallest value first)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if len(family) == 0:
        return SpacedPartition(family=family, n=n, classes=[], repetitions=0)
    D, s = family.scaled()
    width_count = 2 * n
    buckets: dict[int, list] = {}
    for i, si in enumerate(s):  # s ascending, so bucket lists stay ascending
        buckets.setdefault((si * width_count) // D, []).append(i)
    occupied = sorted(buckets)
    max_occ = max(len(buckets[j]) for j in occupied)
    classes = []
    for sweep in range(max_occ):
        picks = [buckets[j][sweep] for j in occupied if len(buckets[j]) > sweep]
        sweep_classes: list[list] = []
        for i in picks:
            placed = None
            for cls in sweep_classes:
                # members ascend; only the last (linear side) and the first
                # (wraparound) can be within 1/n of the new pick
                gap_last = s[i] - s[cls[-1]]
                gap_wrap = D - (s[i] - s[cls[0]])
                if min(gap_last, gap_wrap) * n >= D:
                    placed = cls
                    break
            if placed is None:
                sweep_classes.append([i])
            else:
                placed.append(i)
        classes.extend(sweep_classes)
    pts = family.points
    return SpacedPartition(
        family=family,
        n=n,
        classes=[[pts[i] for i in cls] for cls in classes],
        repetitions=max_occ,
    )


def verify_partition(p: SpacedPartition) -> PartitionCertificate:
    """Exact replay of the three invariants: partition, spacing, sweep bound."""
    failures = []
    D, s = p.family.scaled() if len(p.family) else (1, [])
    key = {(pt.a, pt.q): i for i, pt in enumerate(p.family.points)}
    seen = set()
    for cls in p.classes:
        for pt in cls:
            kq = (pt.a, pt.q)
            if kq not in key:
                failures.append(("partition", f"point {pt.a}/{pt.q}^{pt.k} not in family"))
            elif kq in seen:
                failures.append(("partition", f"point {pt.a}/{pt.q}^{pt.k} assigned twice"))
            seen.add(kq)
    if len(seen) != len(p.family):
        failures.append(
            ("partition", f"classes cover {len(seen)} of {len(p.family)} points")
        )
    for ci, cls in enumerate(p.classes):
        idx = sorted(key[(pt.a, pt.q)] for pt in cls if (pt.a, pt.q) in key)
        for u, v in zip(idx, idx[1:] + idx[:1]):
            if u == v:
                continue
            gap = (s[v] - s[u]) % D
            gap = min(gap, D - gap)
            if gap * p.n < D:
                failures.append(
                    (
                        "spacing",
                        f"class {ci}: {p.family.points[u].a}/{p.family.points[u].q}^{p.family.points[u].k}"
                        f" and {p.family.points[v].a}/{p.family.points[v].q}^{p.family.points[v].k}"
                        f" are {gap}/{D} < 1/{p.n} apart",
                    )
                )
                break
    if len(p.family) > 0:
        m_value = max_close_count(p.family, p.n).max_close_count
        if p.repetitions > m_value:
            failures.append(
                ("sweeps", f"repetitions {p.repetitions} exceed M = {m_value}")
            )
    return PartitionCertificate(ok=not failures, failures=failures)


def covering_bound(p: SpacedPartition, certificate: PartitionCertificate | None = None) -> float:
    """2 n (number of classes); a proof-backed upper bound for Delta* at N = n."""
    cert = certificate or verify_partition(p)
    if not cert.ok:
        raise InvalidArgumentError(f"partition failed verification: {cert.first_failure()}")
    return float(2 * p.n * len(p.classes))


@dataclass
class DyadicBlock:
    q_lo: int
    q_hi: int
    partition: SpacedPartition


def dyadic_assembly(k: int, Q: int, n: int, enumerate_family, budgets=None) -> list:
    """Per-block partitions for q <= Q over blocks (Q/2^(j+1), Q/2^j].

    Blocks are partitioned independently and unioned, mirroring the dyadic
    split of the q-range; the union is not re-spaced.
    """
    blocks = []
    hi = Q
    while hi >= 1:
        lo = hi // 2
        q_lo, q_hi = lo + 1, hi
        if q_lo <= q_hi:
            fam = (
                enumerate_family(k, q_lo, q_hi)
                if budgets is None
                else enumerate_family(k, q_lo, q_hi, budgets)
            )
            if len(fam):
                blocks.append(DyadicBlock(q_lo, q_hi, build_partition(fam, n)))
        hi = lo
    blocks.reverse()
    return blocks


def assembly_to_json(blocks: list, n: int) -> dict:
    total = sum(2 * n * len(b.partition.classes) for b in blocks)
    return {
        "n": n,
        "blocks": [
            {
                "q_lo": b.q_lo,
                "q_hi": b.q_hi,
                "classes": len(b.partition.classes),
                "repetitions": b.partition.repetitions,
            }
            for b in blocks
        ],
        "covering_bound": float(total),
    }


__all__ = [
    "SpacedPartition",
    "PartitionCertificate",
    "DyadicBlock",
    "build_partition",
    "verify_partition",
    "covering_bound",
    "dyadic_assembly",
    "assembly_to_json",
]
