"""First-order cycle-bifurcation pipeline."""

import random
from fractions import Fraction

import pytest

from cycleforge import bifurcation
from cycleforge.bifurcation import (
    build_perturbation,
    ggt_analyze,
    hopf_order_one,
    mirror_count,
    p7_setup,
    p8_setup,
    p9_setup,
    ratfunc,
)
from cycleforge.fields import VectorField
from cycleforge.poly import MultiPoly, parse_poly


def test_build_perturbation_rejects_line_breaking_terms():
    base = VectorField(parse_poly("y", ("x", "y")), parse_poly("-x", ("x", "y")))
    with pytest.raises(ValueError, match="lam"):
        build_perturbation(base, [("P", "lam", "x*y")])


def test_build_perturbation_reduces_to_base():
    setup = p7_setup()
    zeros = {s: Fraction(0) for s in setup.lambda_symbols}
    zeros[setup.alpha_symbol] = Fraction(0)
    bound_f = setup.field.f.evaluate(zeros)
    bound_g = setup.field.g.evaluate(zeros)
    assert bound_f == setup.base.f.with_variables(bound_f.variables)
    assert bound_g == setup.base.g.with_variables(bound_g.variables)


def test_ratfunc_reduces_common_factors():
    num = parse_poly("(mu + 1)*(mu - 2)")
    den = parse_poly("(mu + 1)*(mu + 3)", num.variables)
    r = ratfunc(num, den)
    assert r.num.degree_in("mu") == 1 and r.den.degree_in("mu") == 1
    # cross-multiplied identity with the originals
    assert r.num * den == r.den * num


def test_rank_matches_random_specialization():
    rep = ggt_analyze(p8_setup())
    A = rep.linear_matrix
    rng = random.Random(5)
    for _ in range(3):
        mu = Fraction(rng.randint(3, 40), rng.randint(1, 7))
        rows = [[e.eval_scalar({"mu": mu}) if not e.is_constant()
                 else e.constant_value() for e in row] for row in A]
        # plain Gaussian elimination rank over Q
        rank = 0
        m = [list(r) for r in rows]
        ncols = len(m[0])
        r = 0
        for c in range(ncols):
            pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            for i in range(len(m)):
                if i != r and m[i][c] != 0:
                    f = m[i][c] / m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
        rank = r
        assert rank == rep.k


def test_invalid_candidates_report_reasons():
    rep = ggt_analyze(p8_setup())
    invalid = [c for c in rep.candidates if not c["valid"]]
    assert invalid and all(c.get("reason") for c in invalid)
    assert {c["mu0"] for c in invalid} == {Fraction(-2), Fraction(0), Fraction(2)}


def test_mirror_count_requires_symmetry():
    rep = ggt_analyze(p7_setup())  # not an even-symmetric family
    assert rep.verdict[0] == "k_plus_ell_cycles"
    with pytest.raises(ValueError):
        mirror_count(rep)
    assert mirror_count(rep, symmetry="none") == rep.verdict[1]


def test_mirror_count_requires_certificate():
    rep = ggt_analyze(p9_setup(), N=1)  # too few quantities: k+1 rows needed
    if rep.verdict[0] == "k_plus_ell_cycles":
        pytest.skip("single-quantity run unexpectedly certified")
    with pytest.raises(ValueError):
        mirror_count(rep)


def test_hopf_on_plain_field():
    # unperturbed symmetric family at mu=0 has a center: no cycle
    setup = p9_setup()
    binding = {"mu": Fraction(0), "lam": Fraction(0)}
    assert hopf_order_one(setup.base, binding,
                          point=(Fraction(1, 4), Fraction(0))) == "none"
    # with the cross term switched on the first quantity is nonzero
    assert hopf_order_one(setup, {"mu": Fraction(0)}) == "one_cycle"


def test_report_json_round_trips():
    import json
    rep = ggt_analyze(p7_setup())
    text = json.dumps(rep.to_json())
    data = json.loads(text)
    assert data["verdict"] == {"kind": "k_plus_ell_cycles", "count": 3}
    assert data["k"] == 2 and data["l"] == 1
