"""Bulk identity checks over the exact oracle, serialized as a JSON-ready report."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .exact import (
    QVector,
    binomial_row,
    cos_sign_of_turns,
    fraction_str,
    rational_rotation_cluster_count,
    shift_diff_norm_sq_exact,
    shift_diff_norm_sq_expanded,
    shift_inner_exact,
    shift_iterate_exact,
    shift_norm_sq_exact,
    shift_step_exact,
    shift_step_numerators,
    stirling_ratio,
)
from .fejer import iterate
from .operators import RightShiftAveraged

SAMPLE_NS = (0, 1, 2, 10)


@dataclass
class IdentityResult:
    name: str
    max_n: int
    passed: bool
    first_failure: int | None = None
    samples: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def check_shift_identities(max_n: int = 200) -> list[IdentityResult]:
    """The five shift-example identities for ``n = 0..max_n``, plus closed-form/iterate agreement.

    Every "direct" value is an exact sparse dot product of iterates produced by
    applying ``1/2 Id + 1/2 R`` exactly; the closed forms come from binomials.
    """
    names = ["norm_sq", "inner", "diff_norm_sq", "orthogonality", "strict_decrease", "closed_form_iterate"]
    failures = {name: None for name in names}
    samples = {name: {} for name in names}

    def fail(name, n):
        if failures[name] is None:
            failures[name] = n

    x = QVector({1: 1})
    for n in range(max_n + 1):
        x_next = shift_step_exact(x)
        diff = x - x_next
        norm_sq = x.norm_sq()
        inner = x.dot(x_next)
        diff_sq = diff.norm_sq()
        orth = x_next.dot(diff)

        if norm_sq != shift_norm_sq_exact(n):
            fail("norm_sq", n)
        if inner != shift_inner_exact(n):
            fail("inner", n)
        if not (diff_sq == shift_diff_norm_sq_exact(n) == shift_diff_norm_sq_expanded(n)):
            fail("diff_norm_sq", n)
        if orth != 0:
            fail("orthogonality", n)
        if not x_next.norm_sq() < norm_sq:
            fail("strict_decrease", n)
        if x != shift_iterate_exact(n) or len(x) != n + 1:
            fail("closed_form_iterate", n)
        if n in SAMPLE_NS:
            samples["norm_sq"][str(n)] = fraction_str(norm_sq)
            samples["inner"][str(n)] = fraction_str(inner)
            samples["diff_norm_sq"][str(n)] = fraction_str(diff_sq)
            samples["orthogonality"][str(n)] = fraction_str(orth)
        x = x_next

    return [IdentityResult(name, max_n, failures[name] is None, failures[name], samples[name]) for name in names]


def check_vandermonde(limit: int = 50) -> IdentityResult:
    """``C(m+n, r) = sum_k C(m, k) C(n, r-k)`` for all ``0 <= m, n, r <= limit``."""
    rows = [binomial_row(i) for i in range(2 * limit + 1)]

    def c(i, j):
        return rows[i][j] if 0 <= j <= i else 0

    for m in range(limit + 1):
        for n in range(limit + 1):
            for r in range(limit + 1):
                rhs = sum(c(m, k) * c(n, r - k) for k in range(max(0, r - n), min(r, m) + 1))
                if c(m + n, r) != rhs:
                    return IdentityResult("vandermonde", limit, False, first_failure=m, detail={"m": m, "n": n, "r": r})
    return IdentityResult("vandermonde", limit, True)


def check_stirling(points=((100, 2e-3), (10_000, 2e-5))) -> IdentityResult:
    detail = {}
    ok = True
    for n, tol in points:
        ratio = stirling_ratio(n)
        detail[str(n)] = {"ratio": ratio, "abs_err": abs(ratio - 1.0), "tol": tol}
        ok = ok and abs(ratio - 1.0) <= tol
    return IdentityResult("stirling_ratio", max(n for n, _ in points), ok, detail=detail)


def check_weak_proxy(max_n: int = 1000, ks=(1, 2, 3, 4, 5), threshold: Fraction = Fraction(1, 10**6)) -> IdentityResult:
    """Fixed coordinates of both normalized sequences vanish while the norm stays exactly 1.

    Comparisons are done on squares with integers, so "below ``threshold``" is exact.
    For each ``k`` the detail records the first ``n`` after which the coordinate
    stays below ``threshold`` through ``max_n``.
    """
    thr_sq = threshold * threshold
    below_x = {k: [] for k in ks}
    below_d = {k: [] for k in ks}
    unit_ok = True
    diff_ok = True
    central = 1
    for n in range(max_n + 1):
        if n:
            central = central * (2 * n - 1) * (2 * n) // (n * n)
        row = binomial_row(n)
        if sum(c * c for c in row) != central:
            unit_ok = False
        nums = shift_step_numerators(n)
        total = sum(c * c for c in nums)
        # ||x_n - x_{n+1}||^2 = ||x_n||^2 / (2(n+1)), scaled by 4^{n+1}
        if total * 2 * (n + 1) != 4 * central:
            diff_ok = False
        for k in ks:
            ck = row[k - 1] if k - 1 <= n else 0
            below_x[k].append(ck * ck * thr_sq.denominator < thr_sq.numerator * central)
            dk = nums[k - 1] if k - 1 < len(nums) else 0
            below_d[k].append(dk * dk * thr_sq.denominator < thr_sq.numerator * total)

    # exact unit norm of the final step direction, coordinate by coordinate
    nums = shift_step_numerators(max_n)
    total = sum(c * c for c in nums)
    step_unit = sum((Fraction(c * c, total) for c in nums), Fraction(0)) == 1

    def settle(flags):
        if not flags[-1]:
            return None
        n = len(flags) - 1
        while n > 0 and flags[n - 1]:
            n -= 1
        return n

    detail = {
        "threshold": fraction_str(threshold),
        "normalized_iterate_unit_norm": unit_ok,
        "step_norm_closed_form": diff_ok,
        "normalized_step_unit_norm": step_unit,
        "iterate_below_from": {str(k): settle(below_x[k]) for k in ks},
        "step_below_from": {str(k): settle(below_d[k]) for k in ks},
    }
    passed = (
        unit_ok and diff_ok and step_unit
        and all(below_x[k][-1] for k in ks)
        and all(below_d[k][-1] for k in ks)
    )
    return IdentityResult("weak_not_strong", max_n, passed, detail=detail)


def check_rotation_counts(cases=((1, 5), (1, 12), (1, 3), (2, 6)), bound_l: int = 24) -> IdentityResult:
    """Exact cluster counts for the listed cases and the bounds ``<= 2l`` (``<= l`` if cos > 0)."""
    detail = {"cases": {}}
    for k, l in cases:
        rc = rational_rotation_cluster_count(k, l)
        detail["cases"][f"{k}/{l}"] = {
            "count": rc.count,
            "period": rc.period,
            "cos_sign": rc.cos_sign,
            "angles": [fraction_str(a) for a in rc.angles],
        }
    bounds_ok = True
    for l in range(1, bound_l + 1):
        for k in range(0, 2 * l + 1):
            if cos_sign_of_turns(Fraction(k, l)) == 0:
                continue
            rc = rational_rotation_cluster_count(k, l)
            limit = l if rc.cos_sign > 0 else 2 * l
            if rc.count > limit:
                bounds_ok = False
    detail["bounds_checked_up_to_l"] = bound_l
    return IdentityResult("rotation_cluster_counts", bound_l, bounds_ok, detail=detail)


def check_float_consistency(max_n: int = 60, tol: float = 1e-12) -> IdentityResult:
    """The float right-shift trace matches the exact iterates coordinatewise."""
    dim = max_n + 2
    x0 = np.zeros(dim)
    x0[0] = 1.0
    trace = iterate(RightShiftAveraged(dim), x0, max_n, stop_tol=0.0)
    worst = 0.0
    for n in range(max_n + 1):
        worst = max(worst, float(np.max(np.abs(trace.points[n] - shift_iterate_exact(n).to_array(dim)))))
    return IdentityResult("float_exact_consistency", max_n, worst <= tol, detail={"max_abs_diff": worst, "tol": tol})


def oracle_report(max_n: int = 200) -> dict:
    """Run every exact check and return a JSON-serializable report."""
    results = check_shift_identities(max_n)
    results += [
        check_vandermonde(50),
        check_stirling(),
        check_weak_proxy(1000),
        check_rotation_counts(),
        check_float_consistency(60),
    ]
    return {
        "max_n": max_n,
        "identities": [r.to_json() for r in results],
        "pass": all(r.passed for r in results),
    }

