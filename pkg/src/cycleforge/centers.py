"""Center certificates: reversibility, Darboux integrating factors,
separability.

A linear center that is reversible about a line through it, or admits a
local integrating factor, or has separated variables, is a true center.
The certificates here are exact polynomial identities, re-verifiable
independently of how they were found.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .fields import VectorField
from .linalg import ExactMatrix, solve_linear_exact
from .poly import MultiPoly, format_poly
from .scalars import is_zero

REVERSIBILITY_LINES = ("x=0", "y=0", "y=x", "y=-x")


def _swap_sub(field: VectorField, sx, sy):
    """Substitute (x, y) -> (sx, sy) in both components."""
    return field.P.substitute({"x": sx, "y": sy}), field.Q.substitute(
        {"x": sx, "y": sy}
    )


def reversibility(field: VectorField) -> list:
    """All axes/diagonals about which the field is reversible.

    The four candidate involutions are reflection in x=0, y=0, y=x and
    y=-x; each has an exact polynomial criterion on (P, Q).
    """
    xv = MultiPoly.var("x", field.variables)
    yv = MultiPoly.var("y", field.variables)
    P, Q = field.P, field.Q
    lines = []
    pm, qm = _swap_sub(field, -xv, yv)
    if P == pm and Q == -qm:
        lines.append("x=0")
    pm, qm = _swap_sub(field, xv, -yv)
    if P == -pm and Q == qm:
        lines.append("y=0")
    pm, qm = _swap_sub(field, yv, xv)
    if P == -qm and Q == -pm:
        lines.append("y=x")
    pm, qm = _swap_sub(field, -yv, -xv)
    if P == qm and Q == pm:
        lines.append("y=-x")
    return lines


def cofactor(field: VectorField, F: MultiPoly) -> Optional[MultiPoly]:
    """K with P*F_x + Q*F_y = K*F, or None when F is not invariant."""
    if F.is_zero():
        raise ValueError("zero curve")
    F = F.with_variables(field.variables)
    lie = field.P * F.diff("x") + field.Q * F.diff("y")
    return lie.exact_div(F)


def divergence(field: VectorField) -> MultiPoly:
    return field.P.diff("x") + field.Q.diff("y")


@dataclass
class CenterCertificate:
    kind: str  # "reversible" | "darboux" | "separable" | "none"
    line: Optional[str] = None
    factors: Optional[list] = None  # [(MultiPoly, Fraction exponent)]
    witness: Optional[str] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.line is not None:
            out["line"] = self.line
        if self.factors is not None:
            out["factors"] = [
                {"curve": format_poly(F), "exponent": str(lam)}
                for F, lam in self.factors
            ]
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def darboux_search(
    field: VectorField, curves: Sequence[MultiPoly]
) -> Optional[CenterCertificate]:
    """Integrating factor of the form prod curve_i^lambda_i.

    Solves div(X) + sum lambda_i * K_i = 0 exactly for rational exponents,
    where K_i is the cofactor of curve i; curves that are not invariant are
    discarded.  Returns None when no combination works.
    """
    if not curves:
        raise ValueError("no candidate curves")
    kept = []
    cofs = []
    for F in curves:
        K = cofactor(field, F)
        if K is not None:
            kept.append(F.with_variables(field.variables))
            cofs.append(K)
    if not kept:
        return None
    div = divergence(field)
    # coefficient-wise linear system over all monomials appearing anywhere
    mono = set(div.terms)
    for K in cofs:
        mono.update(K.terms)
    mono = sorted(mono)
    A = ExactMatrix(
        [[K.terms.get(m, Fraction(0)) for K in cofs] for m in mono]
    )
    b = [-div.terms.get(m, Fraction(0)) for m in mono]
    sol = solve_linear_exact(A, b)
    if sol.kind == "inconsistent":
        return None
    lams = [Fraction(v) if not isinstance(v, Fraction) else v for v in sol.solution]
    residual = div
    for K, lam in zip(cofs, lams):
        residual = residual + K * lam
    if not residual.is_zero():
        return None
    factors = [(F, lam) for F, lam in zip(kept, lams)]
    return CenterCertificate(
        kind="darboux",
        factors=factors,
        witness="div(X) + sum(lambda_i * K_i) = 0",
    )


def _separates(p: MultiPoly) -> bool:
    """True when p = u(x)*v(y) exactly, parameters allowed in either part.

    Writing p = sum_{i,j} c_ij * x^i y^j with c_ij polynomial in the
    parameters, p separates for every parameter value iff the coefficient
    matrix (c_ij) has rank one, i.e. every 2x2 minor vanishes identically.
    """
    if p.is_zero():
        return True
    xi = p.variables.index("x")
    yi = p.variables.index("y")
    entries: dict = {}
    for e, c in p.terms.items():
        rest = list(e)
        rest[xi] = 0
        rest[yi] = 0
        cell = entries.setdefault((e[xi], e[yi]), {})
        cell[tuple(rest)] = c
    rows = sorted({i for i, _ in entries})
    cols = sorted({j for _, j in entries})
    zero = MultiPoly.zero(p.variables)
    table = [
        [
            MultiPoly(p.variables, entries.get((i, j), {}))
            for j in cols
        ]
        for i in rows
    ]
    for r1 in range(len(rows)):
        for r2 in range(r1 + 1, len(rows)):
            for c1 in range(len(cols)):
                for c2 in range(c1 + 1, len(cols)):
                    minor = (
                        table[r1][c1] * table[r2][c2]
                        - table[r1][c2] * table[r2][c1]
                    )
                    if not minor.is_zero():
                        return False
    return True


def separable_check(field: VectorField) -> bool:
    """True iff P = f(x)g(y) and Q = h(x)k(y) exactly.

    Parameter symbols may appear in any factor; only the (x, y) structure
    must separate.
    """
    return _separates(field.P) and _separates(field.Q)


DEFAULT_CURVES = ("4*x^2 - 1", "4*y^2 - 1")


def certify(
    field: VectorField, extra_curves: Sequence[MultiPoly] = ()
) -> CenterCertificate:
    """First certificate found: reversibility, then a Darboux integrating
    factor over the two invariant lines squared plus any caller-supplied
    curves, then separability."""
    lines = reversibility(field)
    if lines:
        return CenterCertificate(
            kind="reversible", line=lines[0], witness=",".join(lines)
        )
    from .poly import parse_poly

    curves = [parse_poly(s, field.variables) for s in DEFAULT_CURVES]
    curves.extend(extra_curves)
    cert = darboux_search(field, curves)
    if cert is not None:
        return cert
    if separable_check(field):
        return CenterCertificate(kind="separable", witness="P and Q split as u(x)*v(y)")
    return CenterCertificate(kind="none")
