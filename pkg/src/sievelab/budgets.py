"""Resource budgets for the heavy kernels.

Every knob can be overridden by an environment variable (SIEVELAB_<NAME>)
or by a ``key = value`` config file passed to the CLI.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass
class Budgets:
    max_family: int = 200_000        # predicted family cardinality
    max_pairwise: int = 30_000_000   # |S|^2 for the brute-force oracle
    max_box_width: int = 10_000_000  # H in box counting
    max_dense: int = 400             # dense eigensolver cutoff
    power_tol: float = 1e-8          # power-iteration residual target
    power_max_iters: int = 20_000

    @classmethod
    def from_env(cls, base: "Budgets | None" = None) -> "Budgets":
        b = base or cls()
        kw = {}
        for f in fields(cls):
            raw = os.environ.get("SIEVELAB_" + f.name.upper())
            if raw is not None:
                kw[f.name] = _coerce(raw, getattr(b, f.name))
        if not kw:
            return b
        d = {f.name: getattr(b, f.name) for f in fields(cls)}
        d.update(kw)
        return cls(**d)


def _coerce(raw: str, like):
    return type(like)(float(raw)) if isinstance(like, int) else float(raw)


DEFAULT = Budgets.from_env()
