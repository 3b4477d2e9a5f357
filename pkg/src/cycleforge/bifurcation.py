"""Small-amplitude limit-cycle counts from first-order Lyapunov analysis.

Given a center family with parameters mu and a perturbation with small
parameters Lambda (plus a trace-breaking parameter alpha), the pipeline
computes the linear parts of the Lyapunov quantities in Lambda, finds the
rank k of that matrix over the rational functions in mu, reparametrizes so
the first k-1 quantities become coordinates, and extracts the functions
f_0, f_1, ... whose simple zeros certify k + l small-amplitude limit
cycles around the analyzed singularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .fields import VectorField
from .lyapunov import linear_parts_in, lyapunov_quantities, normalize_at
from .poly import MultiPoly, format_poly, parse_poly
from .resultants import multivariate_gcd, normalize_unit
from .roots import (
    IsolatingInterval,
    RootLocation,
    poly_to_coeffs,
    real_roots,
    sign_at_root,
)
from .scalars import is_zero, scalar_sign

_LINE = {"P": "4*x^2 - 1", "Q": "4*y^2 - 1"}


# -- rational functions of the center parameters ---------------------------------


@dataclass(frozen=True)
class RatFunc:
    """num/den with MultiPoly parts, kept in lowest terms with a
    canonical (primitive, positive-leading) denominator."""

    num: MultiPoly
    den: MultiPoly

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __str__(self) -> str:
        if self.den == MultiPoly.const(1, self.den.variables):
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def ratfunc(num: MultiPoly, den: Optional[MultiPoly] = None) -> RatFunc:
    if den is None:
        den = MultiPoly.const(1, num.variables)
    num, den = MultiPoly._align(num, den)
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    one = MultiPoly.const(1, num.variables)
    if num.is_zero():
        return RatFunc(num, one)
    if not den.is_constant():
        g = multivariate_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
    nd = normalize_unit(den)
    c = den.leading()[1] / nd.leading()[1]
    if c != 1:
        inv = c.inverse() if hasattr(c, "inverse") else Fraction(1) / c
        num = num * inv
    return RatFunc(num, nd)


def _rf_add(a: RatFunc, b: RatFunc) -> RatFunc:
    return ratfunc(a.num * b.den + b.num * a.den, a.den * b.den)


def _rf_mul_poly(a: RatFunc, p: MultiPoly) -> RatFunc:
    return ratfunc(a.num * p, a.den)


# -- polynomial matrix helpers ----------------------------------------------------


def _poly_det(rows: list) -> MultiPoly:
    """Determinant by cofactor expansion (division-free; sizes here are tiny)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return rows[0][0]
    total = None
    for c in range(n):
        if rows[0][c].is_zero():
            continue
        minor = [[rows[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        term = rows[0][c] * _poly_det(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return MultiPoly.zero(rows[0][0].variables)
    return total


def _poly_rank(rows: list, record_pivots: Optional[list] = None) -> int:
    """Rank over the fraction field, by fraction-free elimination."""
    if not rows:
        return 0
    mat = [list(r) for r in rows]
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if not mat[r][c].is_zero():
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(rank + 1, len(mat)):
            if mat[r][c].is_zero():
                continue
            mat[r] = [
                mat[r][j] * mat[rank][c] - mat[rank][j] * mat[r][c]
                for j in range(ncols)
            ]
        if record_pivots is not None:
            record_pivots.append(c)
        rank += 1
    return rank


# -- perturbation setup ------------------------------------------------------------


@dataclass
class PerturbationSetup:
    """A center family plus an invariance-preserving perturbation.

    `field` carries all symbols; setting alpha and every Lambda symbol to
    zero recovers `base` exactly.  `point` is the singularity around which
    cycles are counted.
    """

    base: VectorField
    field: VectorField
    mu_symbols: tuple
    lambda_symbols: tuple
    alpha_symbol: str = "alpha"
    point: tuple = (Fraction(0), Fraction(0))


def build_perturbation(
    base: VectorField,
    terms: Sequence[tuple],
    alpha_symbol: str = "alpha",
    point: Sequence = (Fraction(0), Fraction(0)),
) -> PerturbationSetup:
    """Attach perturbation terms to a center family.

    Each term is (target, symbol, expression): `symbol * expression` is
    added to component P or Q.  The expression must be divisible by the
    line factor of its target (4x^2-1 for P, 4y^2-1 for Q) so the invariant
    lines survive the perturbation; offending terms are rejected by name.
    Symbols other than `alpha_symbol` become the small parameters Lambda,
    in order of first appearance.
    """
    mu_symbols = base.parameters
    new_syms: list = []
    for target, sym, expr in terms:
        if target not in ("P", "Q"):
            raise ValueError(f"unknown target {target!r}")
        if sym not in new_syms and sym not in mu_symbols:
            new_syms.append(sym)
    variables = ("x", "y") + mu_symbols + tuple(new_syms)
    df = MultiPoly.zero(variables)
    dg = MultiPoly.zero(variables)
    for target, sym, expr in terms:
        p = parse_poly(expr, variables) if isinstance(expr, str) else expr.with_variables(variables)
        line = parse_poly(_LINE[target], variables)
        inner = p.exact_div(line)
        if inner is None:
            raise ValueError(
                f"perturbation term {sym}*({expr}) does not keep "
                f"{_LINE[target]} invariant"
            )
        addition = MultiPoly.var(sym, variables) * inner
        if target == "P":
            df = df + addition
        else:
            dg = dg + addition
    fld = VectorField(base.f.with_variables(variables) + df,
                      base.g.with_variables(variables) + dg)
    zero_bind = {s: Fraction(0) for s in new_syms}
    if zero_bind:
        back_f = fld.f.evaluate(zero_bind).with_variables(base.variables)
        back_g = fld.g.evaluate(zero_bind).with_variables(base.variables)
        if back_f != base.f or back_g != base.g:
            raise AssertionError("perturbed field does not reduce to the base")
    lam = tuple(s for s in new_syms if s != alpha_symbol)
    return PerturbationSetup(
        base=base,
        field=fld,
        mu_symbols=mu_symbols,
        lambda_symbols=lam,
        alpha_symbol=alpha_symbol,
        point=tuple(Fraction(c) for c in point),
    )


# -- canned perturbation setups ------------------------------------------------------


def p7_setup() -> PerturbationSetup:
    from .fields import p7_base

    return build_perturbation(
        p7_base(),
        [
            ("P", "alpha", "-(4*x^2 - 1)*y"),
            ("P", "a", "(4*x^2 - 1)*y^2"),
            ("Q", "alpha", "(4*y^2 - 1)*x"),
            ("Q", "b", "(4*y^2 - 1)*x*y"),
        ],
    )


def p8_setup() -> PerturbationSetup:
    from .fields import p8_base

    return build_perturbation(
        p8_base(),
        [
            ("P", "alpha", "-(4*x^2 - 1)*y"),
            ("P", "a1", "(4*x^2 - 1)*x*y"),
            ("P", "a2", "(4*x^2 - 1)*y^2"),
            ("Q", "alpha", "(4*y^2 - 1)*x"),
            ("Q", "b1", "(4*y^2 - 1)*x^2"),
            ("Q", "b2", "(4*y^2 - 1)*x*y"),
        ],
    )


def p9_setup() -> PerturbationSetup:
    vs = ("x", "y", "mu")
    base = VectorField(
        parse_poly("x*y", vs),
        parse_poly("1 - 16*x^2 + mu*y^2", vs),
    )
    return build_perturbation(
        base,
        [
            ("P", "lam", "(4*x^2 - 1)*y^2"),
            ("Q", "alpha", "-4*(4*y^2 - 1)*x*y"),
        ],
        point=(Fraction(1, 4), Fraction(0)),
    )


CANNED_SETUPS = {"P7": p7_setup, "P8": p8_setup, "P9b": p9_setup, "P9c": p9_setup}


# -- analysis -----------------------------------------------------------------------


@dataclass
class GGTReport:
    """Certificate of a first-order cycle-bifurcation count.

    verdict is ("k_plus_ell_cycles", count) when every hypothesis checked
    out, else ("conditions_fail", reason).
    """

    k: int
    l: Optional[int]
    M: list  # p x k matrix of RatFunc (reparametrization of Lambda)
    g_coeffs: list  # rows k.. of the transformed matrix, columns < k
    f_funcs: list  # RatFunc f_0, f_1, ...
    mu0: Optional[RootLocation]
    candidates: list
    verdict: tuple
    point: tuple
    symmetric: bool
    mu_symbol: Optional[str]
    linear_matrix: list = field(default_factory=list)
    quantities: list = field(default_factory=list)

    def to_json(self) -> dict:
        def loc(r):
            if r is None:
                return None
            if isinstance(r, IsolatingInterval):
                return {"interval": [str(r.lo), str(r.hi)]}
            return {"exact": str(r)}

        out = {
            "k": self.k,
            "l": self.l,
            "mu0": loc(self.mu0),
            "f": [str(f) for f in self.f_funcs],
            "M": [[[format_poly(e.num), format_poly(e.den)] for e in row]
                  for row in self.M],
            "g": [[str(e) for e in row] for row in self.g_coeffs],
            "candidates": [
                {"mu0": loc(c["mu0"]), "l": c["l"], "valid": c["valid"],
                 "reason": c.get("reason")}
                for c in self.candidates
            ],
            "point": [str(c) for c in self.point],
            "symmetric": self.symmetric,
        }
        if self.verdict[0] == "k_plus_ell_cycles":
            out["verdict"] = {"kind": self.verdict[0], "count": self.verdict[1]}
        else:
            out["verdict"] = {"kind": self.verdict[0], "reason": self.verdict[1]}
        return out


def _fail(k, point, symmetric, reason, **extra) -> GGTReport:
    return GGTReport(
        k=k, l=None, M=extra.get("M", []), g_coeffs=extra.get("g", []),
        f_funcs=extra.get("f", []), mu0=None, candidates=[],
        verdict=("conditions_fail", reason), point=point,
        symmetric=symmetric, mu_symbol=extra.get("mu_symbol"),
        linear_matrix=extra.get("A", []), quantities=extra.get("quantities", []),
    )


def _sign_on(f: MultiPoly, defining: MultiPoly, root: RootLocation, var: str) -> int:
    f, defining = MultiPoly._align(f, defining)
    return sign_at_root(f, defining, root, var)


def ggt_analyze(setup: PerturbationSetup, N: Optional[int] = None) -> GGTReport:
    """Run the first-order bifurcation pipeline around `setup.point`.

    With alpha = 0, computes N Lyapunov quantities linearized in Lambda,
    the rank k of their gradient matrix over the rational functions of mu,
    the reparametrization M, the functions f_i, and the admissible simple
    zeros mu0 of f_0 with f_1(mu0) != 0, certifying k + 1 cycles there.
    """
    p = len(setup.lambda_symbols)
    symmetric = setup.field.is_even_symmetric()
    point = setup.point
    if p == 0:
        return _fail(0, point, symmetric, "no perturbation parameters")
    if N is None:
        N = max(p + 1, 3)
    vs = tuple(v for v in setup.field.variables if v != setup.alpha_symbol)
    P0 = setup.field.P.evaluate({setup.alpha_symbol: Fraction(0)}).with_variables(vs)
    Q0 = setup.field.Q.evaluate({setup.alpha_symbol: Fraction(0)}).with_variables(vs)
    nf = normalize_at(P0, Q0, point)
    rep = lyapunov_quantities(
        nf.p, nf.q, N,
        jet=(setup.lambda_symbols, 1),
        quantity_scale=nf.quantity_scale,
    )
    A = linear_parts_in(rep, setup.lambda_symbols)
    rest_vars = A[0][0].variables if A else ()
    k = _poly_rank(A)
    common = dict(A=A, quantities=rep.quantities)
    if k == 0:
        return _fail(0, point, symmetric, "all linear parts vanish identically", **common)
    if N < k + 1:
        return _fail(k, point, symmetric,
                     f"need at least {k + 1} quantities, computed {N}", **common)
    if p != k:
        return _fail(k, point, symmetric,
                     f"kernel dimension {p - k + 1} of the leading rows is not 1",
                     **common)
    B = A[: k - 1]
    pivots: list = []
    if B and _poly_rank(B, record_pivots=pivots) != k - 1:
        return _fail(k, point, symmetric,
                     "leading rows of the linear-part matrix are dependent", **common)

    one = MultiPoly.const(1, rest_vars)
    # kernel direction of the leading rows, by signed maximal minors
    if k == 1:
        m_polys = [one]
    else:
        m_polys = []
        for c in range(p):
            minor = [[B[r][cc] for cc in range(p) if cc != c] for r in range(k - 1)]
            d = _poly_det(minor)
            m_polys.append(-d if c % 2 else d)
        for r in range(k - 1):
            chk = MultiPoly.zero(rest_vars)
            for c in range(p):
                chk = chk + B[r][c] * m_polys[c]
            if not chk.is_zero():
                raise AssertionError("kernel vector verification failed")
    last = max(c for c in range(p) if not m_polys[c].is_zero())
    m = [ratfunc(m_polys[c], m_polys[last]) for c in range(p)]

    # reparametrization matrix: columns 0..k-2 invert the pivot submatrix,
    # the last column is the kernel direction
    zero_rf = ratfunc(MultiPoly.zero(rest_vars))
    M = [[zero_rf for _ in range(k)] for _ in range(p)]
    if k > 1:
        sub = [[B[r][c] for c in pivots] for r in range(k - 1)]
        det = _poly_det(sub)
        if det.is_zero():
            return _fail(k, point, symmetric, "pivot submatrix is singular", **common)
        for j in range(k - 1):
            for r in range(k - 1):
                minor = [
                    [sub[rr][cc] for cc in range(k - 1) if cc != r]
                    for rr in range(k - 1) if rr != j
                ]
                cof = _poly_det(minor) if k - 1 > 1 else one
                if (r + j) % 2:
                    cof = -cof
                M[pivots[r]][j] = ratfunc(cof, det)
    for c in range(p):
        M[c][k - 1] = m[c]

    # transformed matrix T = A * M; rows below the identity block carry g and f
    T = [
        [
            _reduce_sum([_rf_mul_poly(M[c][j], A[r][c]) for c in range(p)])
            for j in range(k)
        ]
        for r in range(len(A))
    ]
    for j in range(k - 1):
        for i in range(k):
            want_one = i == j
            ok = T[j][i].is_one() if want_one else T[j][i].is_zero()
            if not ok:
                return _fail(k, point, symmetric,
                             f"post-reparametrization row {j + 1} is not the "
                             f"{j + 1}-th coordinate projection",
                             M=M, **common)
    f_funcs = [T[k - 1 + i][k - 1] for i in range(len(A) - k + 1)]
    g_coeffs = [[T[k - 1 + i][j] for j in range(k - 1)] for i in range(len(A) - k + 1)]
    common.update(M=M, f=f_funcs, g=g_coeffs)

    if len(rest_vars) != 1:
        return _fail(k, point, symmetric,
                     "zero location needs exactly one center parameter", **common)
    mu = rest_vars[0]
    f0 = f_funcs[0]
    if f0.is_zero():
        return _fail(k, point, symmetric, "f_0 vanishes identically", **common)
    coeffs = poly_to_coeffs(f0.num, mu)
    roots = real_roots(coeffs) if len(coeffs) > 1 else []
    f0d = f0.num.diff(mu)
    dens = [e.den for row in M for e in row if not e.den.is_constant()]
    dens.extend(f.den for f in f_funcs if not f.den.is_constant())

    candidates = []
    chosen = None
    for r in roots:
        cand = {"mu0": r, "l": None, "valid": False}
        bad_den = next(
            (d for d in dens if _sign_on(d, f0.num, r, mu) == 0), None
        )
        if bad_den is not None:
            cand["reason"] = (
                f"denominator {format_poly(bad_den)} vanishes at the candidate"
            )
            candidates.append(cand)
            continue
        if _sign_on(f0d, f0.num, r, mu) == 0:
            cand["reason"] = "zero of f_0 is not simple"
            candidates.append(cand)
            continue
        ell = None
        for i in range(1, len(f_funcs)):
            s = _sign_on(f_funcs[i].num, f0.num, r, mu)
            if s != 0:
                ell = i
                break
        if ell is None:
            cand["reason"] = "no later f is nonzero at the candidate"
        elif ell > 1:
            cand["reason"] = (
                f"f_1..f_{ell - 1} also vanish; rank-{ell} transversality "
                "is impossible with one center parameter"
            )
            cand["l"] = ell
        else:
            cand["l"] = 1
            cand["valid"] = True
            if chosen is None:
                chosen = cand
        candidates.append(cand)

    if chosen is None:
        return _fail(k, point, symmetric,
                     "no admissible simple zero of f_0 found",
                     **common) if not candidates else GGTReport(
            k=k, l=None, M=M, g_coeffs=g_coeffs, f_funcs=f_funcs, mu0=None,
            candidates=candidates,
            verdict=("conditions_fail", candidates[0].get("reason", "no valid candidate")),
            point=point, symmetric=symmetric, mu_symbol=mu,
            linear_matrix=A, quantities=rep.quantities,
        )
    ell = chosen["l"]
    return GGTReport(
        k=k, l=ell, M=M, g_coeffs=g_coeffs, f_funcs=f_funcs,
        mu0=chosen["mu0"], candidates=candidates,
        verdict=("k_plus_ell_cycles", k + ell),
        point=point, symmetric=symmetric, mu_symbol=mu,
        linear_matrix=A, quantities=rep.quantities,
    )


def _reduce_sum(items: list) -> RatFunc:
    total = items[0]
    for it in items[1:]:
        total = _rf_add(total, it)
    return total


def hopf_order_one(
    setup: Union[PerturbationSetup, VectorField],
    mu_binding: Optional[dict] = None,
    point: Optional[Sequence] = None,
) -> str:
    """Classical one-cycle criterion: nonvanishing first quantity.

    Binds the given parameters (alpha forced to 0 for a PerturbationSetup)
    and evaluates L_1 at the singularity; "one_cycle" when it is nonzero
    as a polynomial in whatever symbols remain, else "none".
    """
    binding = dict(mu_binding or {})
    if isinstance(setup, PerturbationSetup):
        fld = setup.field
        binding.setdefault(setup.alpha_symbol, Fraction(0))
        if point is None:
            point = setup.point
    else:
        fld = setup
        if point is None:
            point = (Fraction(0), Fraction(0))
    binding = {k: v for k, v in binding.items() if k in fld.variables}
    vs = tuple(v for v in fld.variables if v not in binding)
    P0 = fld.P.evaluate(binding).with_variables(vs)
    Q0 = fld.Q.evaluate(binding).with_variables(vs)
    nf = normalize_at(P0, Q0, point)
    rep = lyapunov_quantities(nf.p, nf.q, 1, quantity_scale=nf.quantity_scale)
    return "none" if rep.quantities[0].is_zero() else "one_cycle"


def mirror_count(report: GGTReport, symmetry: str = "odd_symmetry") -> int:
    """Total cycle count across symmetric nests.

    Under the symmetry (x, y, t) -> (-x, -y, -t) a nest away from the
    origin has a mirror image, doubling the certified count; a nest at the
    origin is its own image.
    """
    if report.verdict[0] != "k_plus_ell_cycles":
        raise ValueError("report carries no certified cycle count")
    count = report.verdict[1]
    if symmetry == "none":
        return count
    if symmetry != "odd_symmetry":
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if not report.symmetric:
        raise ValueError("the analyzed family is not symmetric under "
                         "(x, y, t) -> (-x, -y, -t)")
    if all(c == 0 for c in report.point):
        return count
    return 2 * count
