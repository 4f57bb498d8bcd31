"""Trace-weighted Schatten norms, duality pairing, positivity, disjointness.

The norm of x is tau(|x|^p)^(1/p), computed from the singular values per
block with the trace weights; p = inf is the plain operator norm.  Exponents
below 1 occur internally as quasi-norms (needed by the column/row formulas
for p < 2) and are not accepted on the public boundary.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    DEFAULT_CONFIG,
    DomainError,
    Element,
    StructuralError,
    ToleranceConfig,
    hermitian_part,
    is_selfadjoint,
)


def singular_values(x: Element) -> list[np.ndarray]:
    return [np.linalg.svd(b, compute_uv=False) for b in x.blocks]


def schatten_quasi(x: Element, p: float) -> float:
    """tau(|x|^p)^(1/p) for any p > 0, or the operator norm for p = inf.

    Internal entry point: does not reject quasi-norm exponents p < 1.
    """
    if p == np.inf:
        return x.sup_norm()
    if not p > 0:
        raise DomainError("exponent must be positive")
    total = 0.0
    for (_, w), s in zip(x.algebra.blocks, singular_values(x)):
        total += w * float(np.sum(s**p))
    return total ** (1.0 / p)


def lp_norm(x: Element, p: float) -> float:
    """The p-norm of x for p in [1, inf]."""
    if p != np.inf and p < 1:
        raise DomainError("lp_norm requires p >= 1 (quasi-norms are internal only)")
    return schatten_quasi(x, p)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return np.inf
    if p == np.inf:
        return 1.0
    return p / (p - 1.0)


def duality_pair(a: Element, b: Element) -> complex:
    """Bilinear pairing <a, b> = tau(a b); satisfies |tau(ab)| <= |a|_p |b|_p'."""
    if a.algebra != b.algebra:
        raise StructuralError("pairing needs elements of one algebra")
    return complex((a * b).trace())


def hs_inner(a: Element, b: Element) -> complex:
    """Hilbertian inner product tau(a* b) (the p = 2 geometry)."""
    if a.algebra != b.algebra:
        raise StructuralError("inner product needs elements of one algebra")
    return complex((a.H * b).trace())


def is_positive(x: Element, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """Self-adjoint with spectrum above -algebraic_tol * operator norm."""
    scale = x.sup_norm()
    if scale == 0.0:
        return True
    if not is_selfadjoint(x, cfg):
        return False
    lowest = min(
        float(np.linalg.eigvalsh(b).min()) for b in hermitian_part(x).blocks
    )
    return lowest >= -cfg.algebraic_tol * scale


def disjoint(a: Element, b: Element, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """Whether a* b and a b* both vanish, relative to the factor norms.

    The scaling by |a| |b| (operator norms) keeps the test meaningful for
    tiny elements; an absolute threshold would classify everything small as
    disjoint.
    """
    if a.algebra != b.algebra:
        raise StructuralError("disjointness needs elements of one algebra")
    na, nb = a.sup_norm(), b.sup_norm()
    if na == 0.0 or nb == 0.0:
        return True
    cross = max((a.H * b).sup_norm(), (a * b.H).sup_norm())
    return cross <= cfg.algebraic_tol * na * nb
