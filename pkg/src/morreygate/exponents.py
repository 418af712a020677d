"""Exponent validators: the only way suites obtain an ExponentTuple.

Each validator checks the hypotheses of one inequality, derives the dependent
exponents, and records the power of lambda that each side picks up under
g -> g(lambda x). Equal powers make the LHS/RHS ratio dilation invariant.
"""

from __future__ import annotations

import math

from morreygate.errors import ExponentError, HypothesisError
from morreygate.models import ExponentTuple, TheoremTag

IDENTITY_TOLERANCE = 1e-12


def _require(condition: bool, relation: str, **values: float) -> None:
    if not condition:
        detail = ", ".join(f"{k}={v:g}" for k, v in values.items())
        raise HypothesisError(relation, f"hypothesis violated: {relation} ({detail})")


def _require_morrey_pair(p: float, q: float, name_p: str, name_q: str, *, strict: bool = True) -> None:
    low = f"1 < {name_p}" if strict else f"1 <= {name_p}"
    relation = f"{low} <= {name_q} < inf"
    ok = (p > 1 if strict else p >= 1) and p <= q and math.isfinite(q)
    _require(ok, relation, **{name_p: p, name_q: q})


def _require_dimension(n: int) -> None:
    _require(n in (1, 2, 3), "n in {1, 2, 3}", n=n)


def _finish(
    tag: TheoremTag,
    n: int | None,
    values: dict[str, float],
    lhs: float | None,
    rhs: float | None,
    flags: list[str] | None = None,
) -> ExponentTuple:
    if lhs is not None and rhs is not None and abs(lhs - rhs) > IDENTITY_TOLERANCE * max(1.0, abs(lhs)):
        raise ExponentError(f"{tag.value}: dilation exponents disagree ({lhs!r} vs {rhs!r})")
    return ExponentTuple(
        theorem_tag=tag,
        n=n,
        values=values,
        lhs_dilation_exponent=lhs,
        rhs_dilation_exponent=rhs,
        flags=flags or [],
    )


def validate_iu_bound(p: float, q: float, n: int) -> ExponentTuple:
    _require_dimension(n)
    _require_morrey_pair(p, q, "p", "q")
    return _finish(TheoremTag.IU_BOUND, n, {"p": p, "q": q}, -n / q, -n / q)


def validate_interpolation(
    p0: float,
    q0: float,
    p1: float,
    q1: float,
    theta: float,
    *,
    alpha: float = 0.0,
    n: int | None = None,
) -> ExponentTuple:
    """1/p = (1-theta)/p0 + theta/p1 and 1/q = (1-theta)/q0 + theta/q1."""
    _require_morrey_pair(p0, q0, "p0", "q0")
    _require_morrey_pair(p1, q1, "p1", "q1")
    _require(0.0 <= theta <= 1.0, "0 <= theta <= 1", theta=theta)
    _require(alpha >= 0.0, "alpha >= 0", alpha=alpha)

    flags: list[str] = []
    if theta == 0.0:
        p, q = p0, q0
        flags.append("endpoint-theta-0")
    elif theta == 1.0:
        p, q = p1, q1
        flags.append("endpoint-theta-1")
    else:
        p = 1.0 / ((1.0 - theta) / p0 + theta / p1)
        q = 1.0 / ((1.0 - theta) / q0 + theta / q1)
    _require(1.0 < p <= q, "1 < p <= q", p=p, q=q)

    lhs = rhs = None
    if n is not None:
        _require_dimension(n)
        lhs = alpha * theta - n / q
        rhs = (1.0 - theta) * (-n / q0) + theta * (alpha - n / q1)
    values = {"p0": p0, "q0": q0, "p1": p1, "q1": q1, "theta": theta, "alpha": alpha, "p": p, "q": q}
    return _finish(TheoremTag.INTERPOLATION, n, values, lhs, rhs, flags)


def validate_olsen(p: float, q: float, alpha: float, n: int) -> ExponentTuple:
    """u = n p/(alpha q), v = n/alpha, 1/s = 1/p - alpha q/(n p), s/t = p/q."""
    _require_dimension(n)
    _require(0.0 < alpha < n, "0 < alpha < n", alpha=alpha, n=n)
    _require(1.0 < p <= q < n / alpha, "1 < p <= q < n/alpha", p=p, q=q, alpha=alpha)
    u = n * p / (alpha * q)
    v = n / alpha
    s = 1.0 / (1.0 / p - alpha * q / (n * p))
    t = s * q / p
    _require(u <= v, "u <= v", u=u, v=v)
    _require(s <= t, "s <= t", s=s, t=t)
    values = {"p": p, "q": q, "alpha": alpha, "u": u, "v": v, "s": s, "t": t}
    return _finish(TheoremTag.OLSEN, n, values, -n / q, -n / q)


def validate_hardy(p: float, q: float, alpha: float, n: int) -> ExponentTuple:
    """Hardy in M^p_q with 0 < alpha < n/q; also the weak-route exponents v = n/alpha and 1/t = 1/q - alpha/n."""
    _require_dimension(n)
    _require_morrey_pair(p, q, "p", "q")
    _require(0.0 < alpha < n / q, "0 < alpha < n/q", alpha=alpha, q=q, n=n)
    olsen = validate_olsen(p, q, alpha, n)
    t = 1.0 / (1.0 / q - alpha / n)
    values = {"p": p, "q": q, "alpha": alpha, "u": olsen["u"], "v": olsen["v"], "t": t}
    return _finish(TheoremTag.HARDY, n, values, alpha - n / q, alpha - n / q)


def _product_exponent(beta: float, gamma: float, a: float, b: float) -> float:
    """x with (beta+gamma)/x = beta/a + gamma/b."""
    return (beta + gamma) / (beta / a + gamma / b)


def validate_heisenberg_small(
    p: float,
    q: float,
    p2: float,
    q2: float,
    beta: float,
    gamma: float,
    n: int,
) -> ExponentTuple:
    """(beta+gamma)/p0 = beta/p + gamma/p2, same for q0; needs 0 < gamma < n/q."""
    _require_dimension(n)
    _require_morrey_pair(p, q, "p", "q")
    _require_morrey_pair(p2, q2, "p2", "q2", strict=False)
    _require(beta > 0.0, "beta > 0", beta=beta)
    _require(0.0 < gamma < n / q, "0 < gamma < n/q", gamma=gamma, q=q, n=n)
    p0 = _product_exponent(beta, gamma, p, p2)
    q0 = _product_exponent(beta, gamma, q, q2)
    weight = gamma / (beta + gamma)
    lhs = -n / q0
    rhs = weight * (-beta - n / q2) + (1.0 - weight) * (gamma - n / q)
    flags = ["endpoint-p2-one"] if p2 == 1.0 else []
    values = {"p": p, "q": q, "p2": p2, "q2": q2, "beta": beta, "gamma": gamma, "p0": p0, "q0": q0}
    return _finish(TheoremTag.HEISENBERG_SMALL, n, values, lhs, rhs, flags)


def validate_heisenberg(
    p1: float,
    q1: float,
    p2: float,
    q2: float,
    beta: float,
    delta: float,
    n: int,
) -> ExponentTuple:
    """(beta+delta)/p0 = beta/p1 + delta/p2, same for q0; delta is unrestricted."""
    _require_dimension(n)
    _require_morrey_pair(p1, q1, "p1", "q1")
    _require_morrey_pair(p2, q2, "p2", "q2", strict=False)
    _require(beta > 0.0, "beta > 0", beta=beta)
    _require(delta > 0.0, "delta > 0", delta=delta)
    p0 = _product_exponent(beta, delta, p1, p2)
    q0 = _product_exponent(beta, delta, q1, q2)
    weight = delta / (beta + delta)
    lhs = -n / q0
    rhs = weight * (-beta - n / q2) + (1.0 - weight) * (delta - n / q1)
    flags = []
    if p2 == 1.0:
        flags.append("endpoint-p2-one")
    if delta >= n / q1:
        flags.append("interpolation-route")
    values = {"p1": p1, "q1": q1, "p2": p2, "q2": q2, "beta": beta, "delta": delta, "p0": p0, "q0": q0}
    return _finish(TheoremTag.HEISENBERG_GENERAL, n, values, lhs, rhs, flags)


def interpolation_route(tup: ExponentTuple) -> dict[str, float]:
    """theta, gamma = delta theta and the intermediate (p, q) for a large-delta tuple.

    theta is half the largest value keeping both theta < n/(delta q1) and gamma < n/q,
    where 1/q = (1-theta)/q0 + theta/q1.
    """
    if tup.theorem_tag != TheoremTag.HEISENBERG_GENERAL or tup.n is None:
        raise ExponentError("interpolation route needs a validated heisenberg-general tuple")
    n = tup.n
    delta, q0, q1, p0, p1 = tup["delta"], tup["q0"], tup["q1"], tup["p0"], tup["p1"]
    limit = n / (delta * q1)
    slack = delta + n / q0 - n / q1
    if slack > 0:
        limit = min(limit, (n / q0) / slack)
    theta = 0.5 * min(limit, 1.0)
    p = 1.0 / ((1.0 - theta) / p0 + theta / p1)
    q = 1.0 / ((1.0 - theta) / q0 + theta / q1)
    gamma = delta * theta
    _require(gamma < n / q, "0 < gamma < n/q", gamma=gamma, q=q, n=n)
    return {"theta": theta, "gamma": gamma, "p": p, "q": q}


def dilation_exponents(tup: ExponentTuple) -> tuple[float, float]:
    if tup.lhs_dilation_exponent is None or tup.rhs_dilation_exponent is None:
        raise ExponentError(f"{tup.theorem_tag.value} tuple carries no dimension; dilation exponents undefined")
    return tup.lhs_dilation_exponent, tup.rhs_dilation_exponent
