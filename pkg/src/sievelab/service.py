"""HTTP facade over the core modules.

Every CLI command is a thin client of one of these endpoints; the app is
normally mounted in-process (ASGI transport), but serves identically over
a socket.  Error taxonomy: invalid-argument -> 422, resource-limit -> 413,
convergence -> 500, each with a structured {kind, message} detail.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import bounds as bnd
from .budgets import Budgets
from .congruence import BoxSpec, PolySpec, count_box_solutions
from .errors import InvalidArgumentError, SieveLabError
from .exactmath import parse_rational, rational_str
from .farey import enumerate_family, family_csv_rows, max_close_count, min_spacing
from .gram import delta_star
from .partition import assembly_to_json, dyadic_assembly
from .survey import SurveyConfig, rows_to_csv, run_survey
from .verify import run_verify

app = FastAPI(title="sievelab", version="0.1.0")

_STATUS = {"invalid-argument": 422, "resource-limit": 413, "convergence": 500}


@app.exception_handler(SieveLabError)
async def _sievelab_error(request: Request, exc: SieveLabError):
    return JSONResponse(
        status_code=_STATUS.get(exc.kind, 500),
        content={"detail": {"kind": exc.kind, "message": str(exc)}},
    )


class BudgetOverrides(BaseModel):
    max_family: int | None = None
    max_pairwise: int | None = None
    max_box_width: int | None = None
    max_dense: int | None = None
    power_tol: float | None = None
    power_max_iters: int | None = None

    def resolve(self) -> Budgets:
        base = Budgets.from_env()
        given = {k: v for k, v in self.model_dump().items() if v is not None}
        return replace(base, **given) if given else base


class FamilyRequest(BaseModel):
    k: int
    qmin: int
    qmax: int
    budgets: BudgetOverrides = Field(default_factory=BudgetOverrides)


class EnumerateResponse(BaseModel):
    k: int
    q_min: int
    q_max: int
    size: int
    points: list[dict]


@app.post("/enumerate", response_model=EnumerateResponse)
def enumerate_endpoint(req: FamilyRequest):
    fam = enumerate_family(req.k, req.qmin, req.qmax, req.budgets.resolve())
    return EnumerateResponse(
        k=req.k,
        q_min=req.qmin,
        q_max=req.qmax,
        size=len(fam),
        points=list(family_csv_rows(fam)),
    )


class MnqRequest(FamilyRequest):
    n: int


class MnqResponse(BaseModel):
    k: int
    q_min: int
    q_max: int
    n: int
    family_size: int
    min_gap: str
    m_value: int
    argmax: dict


@app.post("/mnq", response_model=MnqResponse)
def mnq_endpoint(req: MnqRequest):
    fam = enumerate_family(req.k, req.qmin, req.qmax, req.budgets.resolve())
    rep = max_close_count(fam, req.n).to_json()
    return MnqResponse(
        k=req.k,
        q_min=req.qmin,
        q_max=req.qmax,
        n=req.n,
        family_size=len(fam),
        **rep,
    )


class BoxCountRequest(BaseModel):
    coefficients: list[int]  # ascending degree
    modulus: int
    K: int = 0
    H: int
    L: int = 0
    R: int
    legacy_j: bool = False
    budgets: BudgetOverrides = Field(default_factory=BudgetOverrides)


class BoxCountResponse(BaseModel):
    k: int
    m: int
    H: int
    R: int
    K: int
    L: int
    count: int
    bound: float
    ratio: float


@app.post("/boxcount", response_model=BoxCountResponse)
def boxcount_endpoint(req: BoxCountRequest):
    poly = PolySpec(coefficients=tuple(req.coefficients), modulus=req.modulus)
    box = BoxSpec(K=req.K, H=req.H, L=req.L, R=req.R)
    result = count_box_solutions(poly, box, legacy_j=req.legacy_j, budgets=req.budgets.resolve())
    return BoxCountResponse(
        k=poly.degree,
        m=req.modulus,
        H=req.H,
        R=req.R,
        K=req.K,
        L=req.L,
        count=result.count,
        bound=result.bound_value,
        ratio=result.ratio,
    )


class DeltaStarRequest(FamilyRequest):
    n: int
    offset: int = 0  # M: coefficients live on M+1 .. M+N
    tol: float | None = None
    max_iters: int | None = None


class DeltaStarResponse(BaseModel):
    k: int
    q_min: int
    q_max: int
    N: int
    M: int
    family_size: int
    delta_star: float
    residual: float
    iterations: int
    min_spacing: str


@app.post("/delta-star", response_model=DeltaStarResponse)
def delta_star_endpoint(req: DeltaStarRequest):
    budgets = req.budgets.resolve()
    fam = enumerate_family(req.k, req.qmin, req.qmax, budgets)
    est = delta_star(
        fam, req.n, M=req.offset, tol=req.tol, max_iters=req.max_iters, budgets=budgets
    )
    gap = rational_str(min_spacing(fam)) if len(fam) >= 2 else "1/1"
    return DeltaStarResponse(
        k=req.k,
        q_min=req.qmin,
        q_max=req.qmax,
        N=req.n,
        M=req.offset,
        family_size=len(fam),
        delta_star=est.value,
        residual=est.residual,
        iterations=est.iterations,
        min_spacing=gap,
    )


class BoundsRequest(BaseModel):
    ids: list[str] | None = None  # default: whole catalog
    k: int
    Q: float
    N: float
    eps: float = 0.0
    theta: str | None = None  # optional "p/q"; adds exact exponents


class BoundRow(BaseModel):
    id: str
    value: float
    in_range: bool | None = None
    exponent: str | None = None


@app.post("/bounds", response_model=list[BoundRow])
def bounds_endpoint(req: BoundsRequest):
    ids = [bnd.BoundId(i) for i in req.ids] if req.ids else list(bnd.BoundId)
    theta = parse_rational(req.theta) if req.theta else None
    rows = []
    for i in ids:
        bv = bnd.evaluate(i, req.k, req.Q, req.N, req.eps)
        exp = rational_str(bnd.exponent(i, req.k, theta)) if theta is not None else None
        rows.append(BoundRow(id=i.value, value=bv.value, in_range=bv.in_range, exponent=exp))
    return rows


class CrossoverRequest(BaseModel):
    a: str
    b: str
    k: int


class CrossoverResponse(BaseModel):
    identical: bool
    crossings: list[str]
    signs: list[dict]


@app.post("/crossover", response_model=CrossoverResponse)
def crossover_endpoint(req: CrossoverRequest):
    res = bnd.crossover(bnd.BoundId(req.a), bnd.BoundId(req.b), req.k)
    return CrossoverResponse(
        identical=res.identical,
        crossings=[rational_str(Fraction(c)) for c in res.crossings],
        signs=[
            {"theta_lo": rational_str(lo), "theta_hi": rational_str(hi), "sign": sg}
            for lo, hi, sg in res.signs
        ],
    )


class RegimeMapRequest(BaseModel):
    k: int
    ids: list[str] | None = None


class RegimeRow(BaseModel):
    k: int
    theta_lo: str
    theta_hi: str
    winner_id: str
    exponent_expression: str


@app.post("/regime-map", response_model=list[RegimeRow])
def regime_map_endpoint(req: RegimeMapRequest):
    ids = [bnd.BoundId(i) for i in req.ids] if req.ids else None
    return [
        RegimeRow(
            k=req.k,
            theta_lo=rational_str(seg.theta_lo),
            theta_hi=rational_str(seg.theta_hi),
            winner_id=seg.winner.value,
            exponent_expression=seg.exponent_expression,
        )
        for seg in bnd.regime_map(req.k, ids=ids)
    ]


class PartitionRequest(BaseModel):
    k: int
    Q: int  # dyadic assembly over q <= Q
    n: int
    budgets: BudgetOverrides = Field(default_factory=BudgetOverrides)


@app.post("/partition")
def partition_endpoint(req: PartitionRequest):
    blocks = dyadic_assembly(
        req.k, req.Q, req.n, enumerate_family, budgets=req.budgets.resolve()
    )
    return assembly_to_json(blocks, req.n)


class SurveyRequest(BaseModel):
    grid: list[list[str]] | None = None  # [k, Q, theta "p/q"] triples
    eps: float = 0.0
    bounds: list[str] | None = None
    tol: float | None = None
    max_iters: int | None = None
    workers: int = 1
    seed: int = 0
    budgets: BudgetOverrides = Field(default_factory=BudgetOverrides)


class SurveyResponse(BaseModel):
    rows: list[dict]
    csv: str


@app.post("/survey", response_model=SurveyResponse)
def survey_endpoint(req: SurveyRequest):
    kw = {}
    if req.grid is not None:
        kw["grid"] = [(int(k), int(Q), parse_rational(t)) for k, Q, t in req.grid]
    if req.bounds is not None:
        kw["bound_ids"] = [bnd.BoundId(b).value for b in req.bounds]
    cfg = SurveyConfig(
        eps=req.eps,
        tol=req.tol,
        max_iters=req.max_iters,
        workers=req.workers,
        seed=req.seed,
        budgets=req.budgets.resolve(),
        **kw,
    )
    rows = run_survey(cfg)
    if all(row["status"] != "ok" for row in rows):
        raise InvalidArgumentError("every survey row failed")
    return SurveyResponse(rows=rows, csv=rows_to_csv(rows, cfg.bound_ids))


class VerifyRequest(BaseModel):
    quick: bool = False


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[dict]


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    results = run_verify(quick=req.quick)
    return VerifyResponse(
        passed=all(r.ok for r in results),
        checks=[{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results],
    )


@app.get("/health")
def health():
    return {"status": "ok"}


__all__ = ["app"]
