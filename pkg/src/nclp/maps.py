"""Linear maps between trace-weighted block algebras.

A map is stored as a dense complex matrix over the coordinate bases of the
block spaces (row-major within each block, blocks concatenated), together
with the exponent p giving its norm semantics.  The module provides
application, trace-duality adjoints, norm enclosures, the positivity
hierarchy (positive / 2-positive / completely positive via component Choi
matrices), amplification, and a library of constructors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .algebra import (
    DEFAULT_CONFIG,
    AlgebraDescriptor,
    DomainError,
    Element,
    StructuralError,
    ToleranceConfig,
    amplify,
    basis,
    diagonal_algebra,
    identity,
    matrix_algebra,
    matrix_unit,
    polar_support,
    zero_element,
)
from .lp import conjugate_exponent, is_positive, lp_norm
from .sampling import ginibre, rng_from, wishart
from .sequences import NormInterval


def vec(x: Element) -> np.ndarray:
    return np.concatenate([b.reshape(-1) for b in x.blocks])


def unvec(algebra: AlgebraDescriptor, v: np.ndarray) -> Element:
    if v.shape != (algebra.coord_dim,):
        raise StructuralError("coordinate vector has wrong length")
    blocks, pos = [], 0
    for d in algebra.dims:
        blocks.append(v[pos : pos + d * d].reshape(d, d))
        pos += d * d
    return Element(algebra, blocks)


def coord_weights(algebra: AlgebraDescriptor) -> np.ndarray:
    """Trace weight attached to each coordinate (w_k repeated d_k^2 times)."""
    return np.concatenate(
        [np.full(d * d, w) for d, w in algebra.blocks]
    )


@lru_cache(maxsize=64)
def _pairing_matrix(algebra: AlgebraDescriptor) -> np.ndarray:
    """K with tau(x y) = vec(x)^T K vec(y); a weighted transposition."""
    D = algebra.coord_dim
    K = np.zeros((D, D))
    pos = 0
    for d, w in algebra.blocks:
        for i in range(d):
            for j in range(d):
                K[pos + i * d + j, pos + j * d + i] = w
        pos += d * d
    return K


@dataclass
class LinearMap:
    """T: L^p(domain) -> L^p(codomain), given by its coordinate action."""

    domain: AlgebraDescriptor
    codomain: AlgebraDescriptor
    action: np.ndarray
    p: float = 2.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.action = np.asarray(self.action, dtype=complex)
        want = (self.codomain.coord_dim, self.domain.coord_dim)
        if self.action.shape != want:
            raise StructuralError(
                f"action shape {self.action.shape} does not match {want}"
            )

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.domain:
            raise StructuralError("element is not in the domain of the map")
        return unvec(self.codomain, self.action @ vec(x))

    def __repr__(self) -> str:
        kind = self.meta.get("kind", "linear")
        return f"LinearMap({kind}: {self.domain!r} -> {self.codomain!r}, p={self.p:g})"


def apply_map(T: LinearMap, x: Element) -> Element:
    return T(x)


def map_from_function(
    domain: AlgebraDescriptor,
    codomain: AlgebraDescriptor,
    fn: Callable[[Element], Element],
    p: float = 2.0,
    meta: Optional[dict] = None,
) -> LinearMap:
    cols = [vec(fn(e)) for e in basis(domain)]
    return LinearMap(domain, codomain, np.array(cols).T, p, dict(meta or {}))


def identity_map(algebra: AlgebraDescriptor, p: float = 2.0) -> LinearMap:
    return LinearMap(
        algebra,
        algebra,
        np.eye(algebra.coord_dim),
        p,
        {"kind": "identity", "positive": True, "cp": True, "isometry_all_p": True},
    )


def compose(S: LinearMap, T: LinearMap) -> LinearMap:
    if T.codomain != S.domain:
        raise StructuralError("composition domains do not match")
    return LinearMap(T.domain, S.codomain, S.action @ T.action, T.p)


def scale_map(T: LinearMap, c: float) -> LinearMap:
    meta = dict(T.meta)
    meta.pop("isometry_all_p", None)
    if c < 0:
        meta.pop("positive", None)
        meta.pop("cp", None)
    return LinearMap(T.domain, T.codomain, c * T.action, T.p, meta)


def add_maps(S: LinearMap, T: LinearMap) -> LinearMap:
    if S.domain != T.domain or S.codomain != T.codomain:
        raise StructuralError("sum needs maps with equal domain and codomain")
    meta = {}
    if S.meta.get("positive") and T.meta.get("positive"):
        meta["positive"] = True
    if S.meta.get("cp") and T.meta.get("cp"):
        meta["cp"] = True
    return LinearMap(S.domain, S.codomain, S.action + T.action, T.p, meta)


def adjoint_map(T: LinearMap, p: Optional[float] = None) -> LinearMap:
    """The trace-duality adjoint: tau(T(x) y) = tau(x T*(y)) for all x, y.

    The pairing is bilinear (no conjugation), so the adjoint action is
    K_dom^{-1} A^T K_cod.  The returned map carries the conjugate exponent.
    """
    p = T.p if p is None else p
    K_dom = _pairing_matrix(T.domain)
    K_cod = _pairing_matrix(T.codomain)
    A_star = np.linalg.solve(K_dom, T.action.T @ K_cod)
    meta = {"kind": "adjoint", "of": T.meta.get("kind")}
    if T.meta.get("cp"):
        meta["cp"] = True
        meta["positive"] = True
    elif T.meta.get("positive"):
        meta["positive"] = True
    return LinearMap(T.codomain, T.domain, A_star, conjugate_exponent(p), meta)


# ---------------------------------------------------------------------------
# Norm enclosure
# ---------------------------------------------------------------------------


def _weighted_action(T: LinearMap) -> np.ndarray:
    wd = np.sqrt(coord_weights(T.domain))
    wc = np.sqrt(coord_weights(T.codomain))
    return (T.action * wc[:, None]) / wd[None, :]


def _norming_dual(y: Element, p: float, cfg: ToleranceConfig) -> Element:
    """z with tau(z y) = |y|_p and |z|_{p'} = 1 (zero if y is zero)."""
    ny = lp_norm(y, p)
    if ny == 0:
        return zero_element(y.algebra)
    if p == np.inf:
        # rank-one at the top singular pair, weight-normalized
        best = (0, 0.0)
        svds = [np.linalg.svd(b) for b in y.blocks]
        for k, (_, s, _) in enumerate(svds):
            if s.size and s[0] > best[1]:
                best = (k, float(s[0]))
        k = best[0]
        U, _, Vh = svds[k]
        blocks = [np.zeros((d, d), dtype=complex) for d in y.algebra.dims]
        w_k = y.algebra.blocks[k][1]
        blocks[k] = np.outer(Vh[0].conj(), U[:, 0].conj()) / w_k
        return Element(y.algebra, blocks)
    u, m, _ = polar_support(y, cfg)
    if p == 1:
        return u.H
    from .algebra import apply_spectral

    power = apply_spectral(m, lambda v: np.clip(v, 0.0, None) ** (p - 1.0), cfg)
    return (1.0 / ny ** (p - 1.0)) * (power * u.H)


def _boyd_ascent(
    T: LinearMap, p: float, cfg: ToleranceConfig, iters: int, x0: Element
) -> tuple[float, Optional[Element]]:
    """Nonlinear power iteration for the p -> p ratio; every step yields a
    valid lower bound, and the best (value, argument) pair is returned."""
    T_adj = adjoint_map(T, p)
    pprime = conjugate_exponent(p)
    best, arg = 0.0, None
    x = x0
    nx = lp_norm(x, p)
    if nx == 0:
        return 0.0, None
    x = (1.0 / nx) * x
    for _ in range(iters):
        y = T(x)
        ny = lp_norm(y, p)
        if ny > best:
            best, arg = ny, x
        if ny <= 1e-300:
            break
        z = _norming_dual(y, p, cfg)
        w = T_adj(z)
        nw = lp_norm(w, pprime)
        if nw <= 1e-300:
            break
        x_new = _norming_dual(w, pprime, cfg)
        if lp_norm(x_new, p) <= 1e-300:
            break
        x = (1.0 / lp_norm(x_new, p)) * x_new
    return best, arg


def op_norm(
    T: LinearMap,
    p: Optional[float] = None,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
    positive_certified: Optional[bool] = None,
    samples: int = 6,
    iters: int = 30,
) -> NormInterval:
    """Enclosure of the L^p -> L^p operator norm.

    p = 2 is exact (largest singular value in the trace-weighted inner
    products).  Otherwise the lower endpoint is the best sampled ratio
    improved by nonlinear power iterations; a certified upper endpoint
    exists for positivity-preserving maps (exact at p = 1 and p = inf via
    the unit evaluations, interpolated in between) and for constructors
    that are isometric at every exponent.  Without such structure the upper
    endpoint is infinite.
    """
    p = T.p if p is None else p
    if p != np.inf and p < 1:
        raise DomainError("op_norm needs p >= 1")
    if positive_certified is None:
        positive_certified = bool(T.meta.get("positive") or T.meta.get("cp"))

    if p == 2:
        s = float(np.linalg.norm(_weighted_action(T), 2))
        return NormInterval(s, s, True, meta={"method": "weighted_svd"})

    if T.meta.get("isometry_all_p"):
        return NormInterval(1.0, 1.0, True, meta={"method": "constructor_isometry"})

    lower = 0.0
    starts = [identity(T.domain)]
    rng = rng_from(cfg.seed, 8000)
    for k in range(samples):
        if k % 2 == 0:
            starts.append(
                Element(T.domain, [ginibre(rng, d) for d in T.domain.dims])
            )
        else:
            starts.append(
                Element(T.domain, [wishart(rng, d) for d in T.domain.dims])
            )
    for x0 in starts:
        lower = max(lower, _boyd_ascent(T, p, cfg, iters, x0)[0])

    # crude but certified: factor through p = 2 and interpolate.
    # |x|_2 <= |x|_1 / sqrt(w_min) and |y|_1 <= sqrt(tau(1)) |y|_2 give a
    # 1 -> 1 bound; the symmetric estimate handles inf -> inf; any finite
    # dimensional operator interpolates between its endpoint bounds.
    n2 = float(np.linalg.norm(_weighted_action(T), 2))
    wmin_dom = min(w for _, w in T.domain.blocks)
    wmin_cod = min(w for _, w in T.codomain.blocks)
    crude1 = np.sqrt(T.codomain.trace_of_identity / wmin_dom) * n2
    crude_inf = np.sqrt(T.domain.trace_of_identity / wmin_cod) * n2
    if p == 1:
        upper, method = crude1, "crude_factorization"
    elif p == np.inf:
        upper, method = crude_inf, "crude_factorization"
    else:
        upper = crude1 ** (1.0 / p) * crude_inf ** (1.0 - 1.0 / p)
        method = "crude_interpolation"

    if positive_certified:
        n1 = lp_norm(adjoint_map(T, 1)(identity(T.codomain)), np.inf)
        ninf = lp_norm(T(identity(T.domain)), np.inf)
        if p == 1:
            pos_upper = n1
        elif p == np.inf:
            pos_upper = ninf
        else:
            pos_upper = n1 ** (1.0 / p) * ninf ** (1.0 - 1.0 / p)
        if pos_upper < upper:
            upper = pos_upper
            method = "positive_unit" if p in (1, np.inf) else "positive_interpolation"
    certified = upper < np.inf and (upper - lower) <= cfg.opt_tol * max(upper, 1e-300)
    lower = min(lower, upper)
    return NormInterval(lower, float(upper), certified, meta={"method": method})


# ---------------------------------------------------------------------------
# Positivity hierarchy
# ---------------------------------------------------------------------------

CERTIFIED = "certified"
FALSIFIED = "falsified"
UNDETERMINED = "undetermined"


@dataclass
class PositivityVerdict:
    status: str
    witness: Optional[Element] = None
    evidence: dict = field(default_factory=dict)


def choi_components(T: LinearMap) -> list[list[np.ndarray]]:
    """Choi matrices of the block components T_lk: M_{d_k} -> M_{c_l}.

    The map is completely positive exactly when every component matrix is
    positive semidefinite; direct sums split complete positivity blockwise.
    """
    comps = []
    for l, c in enumerate(T.codomain.dims):
        row = []
        for k, d in enumerate(T.domain.dims):
            C = np.zeros((d * c, d * c), dtype=complex)
            for i in range(d):
                for j in range(d):
                    img = T(matrix_unit(T.domain, k, i, j)).blocks[l]
                    C[i * c : (i + 1) * c, j * c : (j + 1) * c] = img
            row.append(C)
        comps.append(row)
    return comps


def is_completely_positive(
    T: LinearMap, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> tuple[bool, float]:
    """Exact Choi criterion; returns (verdict, smallest component eigenvalue)."""
    worst = np.inf
    for row in choi_components(T):
        for C in row:
            H = 0.5 * (C + C.conj().T)
            herm_defect = float(np.linalg.norm(C - H, 2))
            lo = float(np.linalg.eigvalsh(H).min()) if C.size else 0.0
            scale = max(float(np.linalg.norm(H, 2)), 1.0)
            if herm_defect > cfg.algebraic_tol * scale:
                lo = -herm_defect
            worst = min(worst, lo)
    scale = max(abs(worst), 1.0)
    return worst >= -cfg.algebraic_tol * scale, float(worst)


def _positive_samples(algebra, rng, count):
    out = []
    for k, d in enumerate(algebra.dims):
        psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        blocks = [np.zeros((dd, dd), dtype=complex) for dd in algebra.dims]
        blocks[k] = np.outer(psi, psi.conj())
        out.append(Element(algebra, blocks))
    for _ in range(count):
        out.append(Element(algebra, [wishart(rng, d) for d in algebra.dims]))
    return out


def _entangled_samples(base, n, rng, count):
    """Rank-one positives of M_n(base) that straddle the grid, including the
    identity-correlated vectors that detect non 2-positive maps."""
    amp = amplify(base, n)
    out = []
    for k, d in enumerate(base.dims):
        if d < 2:
            continue
        psi = np.zeros(n * d, dtype=complex)
        for r in range(min(n, d)):
            psi[r * d + r] = 1.0
        blocks = [np.zeros((n * dd, n * dd), dtype=complex) for dd in base.dims]
        blocks[k] = np.outer(psi, psi.conj()) / max(np.linalg.norm(psi) ** 2, 1)
        out.append(Element(amp, blocks))
    for _ in range(count):
        blocks = []
        for dd in base.dims:
            psi = rng.standard_normal(n * dd) + 1j * rng.standard_normal(n * dd)
            blocks.append(np.outer(psi, psi.conj()))
        out.append(Element(amp, blocks))
    return out


def _min_output_eig(T: LinearMap, x: Element) -> float:
    y = T(x)
    h = 0.5 * (y + y.H)
    lo = min(float(np.linalg.eigvalsh(b).min()) for b in h.blocks)
    defect = (y - h).sup_norm()
    return min(lo, -defect) if defect > 0 else lo


def positivity_tests(
    T: LinearMap,
    level: str,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
    samples: int = 48,
) -> PositivityVerdict:
    """Positivity verdicts at the requested level.

    Sampling can only falsify; "certified" requires a proof: the Choi
    criterion (complete positivity, which dominates the lower levels) or
    constructor provenance.  A clean sampling run without such a proof is
    reported undetermined with the trial count as confidence.
    """
    if level not in ("positive", "two_positive", "completely_positive"):
        raise DomainError(f"unknown positivity level {level!r}")

    cp_ok, cp_eig = is_completely_positive(T, cfg)
    if level == "completely_positive":
        if cp_ok:
            return PositivityVerdict(CERTIFIED, evidence={"choi_min_eig": cp_eig})
        return PositivityVerdict(FALSIFIED, evidence={"choi_min_eig": cp_eig})

    if cp_ok:
        return PositivityVerdict(
            CERTIFIED, evidence={"route": "choi", "choi_min_eig": cp_eig}
        )

    rng = rng_from(cfg.seed, 8100 if level == "positive" else 8200)
    if level == "positive":
        probe, inputs = T, _positive_samples(T.domain, rng, samples)
    else:
        probe = amplified_map(T, 2)
        inputs = _entangled_samples(T.domain, 2, rng, samples)

    floor = -cfg.algebraic_tol
    worst = np.inf
    for x in inputs:
        lo = _min_output_eig(probe, x)
        scale = max(probe(x).sup_norm(), 1.0)
        worst = min(worst, lo / scale)
        if lo < floor * scale:
            return PositivityVerdict(
                FALSIFIED, witness=x, evidence={"min_eig": lo, "level": level}
            )

    if T.meta.get("positive") and level == "positive":
        return PositivityVerdict(
            CERTIFIED, evidence={"route": "provenance", "trials": len(inputs)}
        )
    if T.meta.get("two_positive") and level == "two_positive":
        return PositivityVerdict(
            CERTIFIED, evidence={"route": "provenance", "trials": len(inputs)}
        )
    return PositivityVerdict(
        UNDETERMINED, evidence={"trials": len(inputs), "worst_relative_eig": worst}
    )


# ---------------------------------------------------------------------------
# Amplification
# ---------------------------------------------------------------------------


def amplified_map(T: LinearMap, n: int) -> LinearMap:
    """I (x) T acting entrywise on n x n operator matrices."""
    if n < 1:
        raise StructuralError("amplification order must be >= 1")
    if n == 1:
        return LinearMap(T.domain, T.codomain, T.action.copy(), T.p, dict(T.meta))
    dom, cod = T.domain, T.codomain
    dom_amp, cod_amp = amplify(dom, n), amplify(cod, n)
    A = np.zeros((cod_amp.coord_dim, dom_amp.coord_dim), dtype=complex)

    dom_off = np.cumsum([0] + [(n * d) ** 2 for d in dom.dims])
    cod_off = np.cumsum([0] + [(n * c) ** 2 for c in cod.dims])
    small_dom_off = np.cumsum([0] + [d * d for d in dom.dims])
    small_cod_off = np.cumsum([0] + [c * c for c in cod.dims])

    for k, d in enumerate(dom.dims):
        for a in range(d):
            for b in range(d):
                col_small = T.action[:, small_dom_off[k] + a * d + b]
                for r in range(n):
                    for c in range(n):
                        I = r * d + a
                        J = c * d + b
                        col_big = dom_off[k] + I * (n * d) + J
                        for l, cdim in enumerate(cod.dims):
                            sub = col_small[
                                small_cod_off[l] : small_cod_off[l + 1]
                            ].reshape(cdim, cdim)
                            rows = (
                                cod_off[l]
                                + (r * cdim + np.arange(cdim))[:, None] * (n * cdim)
                                + (c * cdim + np.arange(cdim))[None, :]
                            )
                            A[rows.reshape(-1), col_big] = sub.reshape(-1)
    meta = {"kind": "amplified", "of": T.meta.get("kind"), "order": n}
    # complete positivity survives amplification; plain positivity and
    # every-exponent isometry do not (the partial transpose is the standard
    # counterexample for both), so neither flag is carried over
    if T.meta.get("cp"):
        meta["cp"] = True
        meta["positive"] = True
    return LinearMap(dom_amp, cod_amp, A, T.p, meta)


# ---------------------------------------------------------------------------
# Constructor library
# ---------------------------------------------------------------------------


def transpose_map(algebra: AlgebraDescriptor, p: float = 2.0) -> LinearMap:
    """Blockwise transposition; positive, separating, isometric at every p,
    but not 2-positive on blocks of dimension >= 2."""
    return map_from_function(
        algebra,
        algebra,
        lambda x: Element(x.algebra, [b.T for b in x.blocks]),
        p,
        {"kind": "transpose", "positive": True, "isometry_all_p": True,
         "separating": True},
    )


def unitary_conjugation(u: Element, p: float = 2.0) -> LinearMap:
    uu = u * u.H
    d = (uu - identity(u.algebra)).sup_norm()
    if d > 1e-9:
        raise StructuralError("conjugation needs a unitary element")
    return map_from_function(
        u.algebra,
        u.algebra,
        lambda x: u * x * u.H,
        p,
        {"kind": "unitary_conjugation", "positive": True, "cp": True,
         "two_positive": True, "isometry_all_p": True, "separating": True},
    )


def rotation_mixing(theta: float, p: float = 2.0) -> LinearMap:
    """Unitary of the Hilbert space L^2(M_2) rotating the span of the (1,1)
    and (1,2) matrix units into each other and fixing the complement.  For
    generic angles it sends disjoint pairs to non-disjoint pairs."""
    alg = matrix_algebra(2, 1.0)
    c, s = np.cos(theta), np.sin(theta)
    A = np.eye(4, dtype=complex)
    A[0, 0], A[0, 1] = c, -s
    A[1, 0], A[1, 1] = s, c
    return LinearMap(alg, alg, A, p, {"kind": "rotation_mixing", "theta": theta})


def commutative_matrix(
    entries: np.ndarray,
    dom_weights,
    cod_weights,
    p: float = 2.0,
) -> LinearMap:
    entries = np.asarray(entries, dtype=complex)
    dom = diagonal_algebra(dom_weights)
    cod = diagonal_algebra(cod_weights)
    if entries.shape != (cod.coord_dim, dom.coord_dim):
        raise StructuralError("matrix shape does not match the weights")
    meta = {"kind": "commutative"}
    if np.all(entries.real >= 0) and np.all(np.abs(entries.imag) == 0):
        meta["positive"] = True
        meta["cp"] = True
    return LinearMap(dom, cod, entries, p, meta)


def depolarizing(algebra: AlgebraDescriptor, lam: float, p: float = 2.0) -> LinearMap:
    """(1 - lam) x + lam tau(x) 1 / tau(1): completely positive, unital,
    trace preserving, contractive at every exponent for 0 <= lam <= 1."""
    if not (0.0 <= lam <= 1.0):
        raise StructuralError("mixing parameter must lie in [0, 1]")
    tau1 = algebra.trace_of_identity
    one = identity(algebra)
    return map_from_function(
        algebra,
        algebra,
        lambda x: (1.0 - lam) * x + (lam * complex(x.trace()) / tau1) * one,
        p,
        {"kind": "depolarizing", "positive": True, "cp": True, "lam": lam},
    )


def kraus_map(vs: list[Element], p: float = 2.0, transposed: bool = False) -> LinearMap:
    """x -> sum_i v_i x v_i* (or v_i tx v_i* when transposed), completely
    positive (resp. completely copositive) by construction."""
    if not vs:
        raise StructuralError("need at least one Kraus element")
    alg = vs[0].algebra

    def fn(x: Element) -> Element:
        src = Element(x.algebra, [b.T for b in x.blocks]) if transposed else x
        out = zero_element(alg)
        for v in vs:
            out = out + v * src * v.H
        return out

    meta = {"kind": "kraus", "positive": True}
    if transposed:
        meta["co_cp"] = True
        meta["kind"] = "kraus_transposed"
    else:
        meta["cp"] = True
    return map_from_function(alg, alg, fn, p, meta)


def jordan_direct_sum(
    domain: AlgebraDescriptor,
    parts: list[tuple[int, str]],
    weights=None,
    p: float = 2.0,
) -> LinearMap:
    """J(x) = (+)_i phi_i(x_{k_i}) with phi_i the identity ('hom') or the
    transpose ('anti') of the chosen source block; a normal Jordan
    homomorphism into the direct sum of the matching matrix blocks."""
    if not parts:
        raise StructuralError("need at least one part")
    dims = domain.dims
    cod_blocks = []
    for i, (k, kind) in enumerate(parts):
        if not (0 <= k < len(dims)):
            raise StructuralError(f"part {i}: no source block {k}")
        if kind not in ("hom", "anti"):
            raise StructuralError(f"part {i}: kind must be 'hom' or 'anti'")
        w = 1.0 if weights is None else float(weights[i])
        cod_blocks.append((dims[k], w))
    cod = AlgebraDescriptor(tuple(cod_blocks))

    def fn(x: Element) -> Element:
        out = []
        for i, (k, kind) in enumerate(parts):
            blk = x.blocks[k]
            out.append(blk.T if kind == "anti" else blk.copy())
        return Element(cod, out)

    return map_from_function(domain, cod, fn, p, {"kind": "jordan_direct_sum",
                                                  "parts": tuple(parts),
                                                  "positive": True,
                                                  "separating": True})


def star_homomorphism(domain, parts_blocks, weights=None, p: float = 2.0) -> LinearMap:
    return jordan_direct_sum(domain, [(k, "hom") for k in parts_blocks], weights, p)


def anti_star_homomorphism(domain, parts_blocks, weights=None, p: float = 2.0) -> LinearMap:
    return jordan_direct_sum(domain, [(k, "anti") for k in parts_blocks], weights, p)


def left_multiplication(a: Element, p: float = 2.0) -> LinearMap:
    return map_from_function(a.algebra, a.algebra, lambda x: a * x, p,
                             {"kind": "left_multiplication"})


def convex_combination(T1: LinearMap, T2: LinearMap, t: float) -> LinearMap:
    """t T1 + (1 - t) T2, remembering the parts so certification can bound
    the mixture by certifying each part separately."""
    if not (0.0 <= t <= 1.0):
        raise StructuralError("mixing weight must lie in [0, 1]")
    T = add_maps(scale_map(T1, t), scale_map(T2, 1.0 - t))
    T.meta["kind"] = "convex_combination"
    T.meta["convex_parts"] = (t, T1, T2)
    return T


def yeadon_synthetic(
    w: Element,
    B: Element,
    J: LinearMap,
    p: float = 2.0,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> LinearMap:
    """x -> w B J(x), validating the factorization data:

    (b) w is a partial isometry with w* w = J(1) = s(B),
    (c) B is positive and commutes with the range of J on a basis.

    (a), the factorization identity itself, holds by construction here.
    Violations raise StructuralError naming the failed condition.
    """
    N = J.codomain
    if w.algebra != N or B.algebra != N:
        raise StructuralError("w and B must live in the codomain of J")
    tol = cfg.algebraic_tol * max(w.sup_norm(), 1.0)
    ww = w.H * w
    if (w * ww - w).sup_norm() > 10 * tol:
        raise StructuralError("condition (b) fails: w is not a partial isometry")
    if not is_positive(B, cfg):
        raise StructuralError("condition (c) fails: B is not positive")
    sB = polar_support(B, cfg)[2]
    J1 = J(identity(J.domain))
    scale = max(1.0, B.sup_norm())
    if (ww - J1).sup_norm() > 1e-7 * scale or (J1 - sB).sup_norm() > 1e-7 * scale:
        raise StructuralError("condition (b) fails: w*w, J(1), s(B) disagree")
    for e in basis(J.domain):
        img = J(e)
        if (B * img - img * B).sup_norm() > 1e-7 * scale * max(img.sup_norm(), 1.0):
            raise StructuralError("condition (c) fails: B does not commute with J range")
    wB = w * B
    T = map_from_function(
        J.domain,
        N,
        lambda x: wB * J(x),
        p,
        {"kind": "yeadon_synthetic", "separating": True},
    )
    T.meta["w"], T.meta["B"], T.meta["J"] = w, B, J
    # a separating map built from a projection w is positive
    if (w - w.H).sup_norm() <= tol and is_positive(w, cfg):
        T.meta["positive"] = True
    return T


def make_example(kind: str, **params) -> LinearMap:
    """Uniform constructor entry point used by the CLI."""
    p = float(params.pop("p", 2.0))
    if kind == "transpose":
        alg = params.pop("algebra", matrix_algebra(int(params.pop("dim", 2))))
        return transpose_map(alg, p)
    if kind == "identity":
        alg = params.pop("algebra", matrix_algebra(int(params.pop("dim", 2))))
        return identity_map(alg, p)
    if kind == "rotation":
        return rotation_mixing(float(params.pop("theta", np.pi / 4)), p)
    if kind == "depolarizing":
        alg = params.pop("algebra", matrix_algebra(int(params.pop("dim", 2))))
        return depolarizing(alg, float(params.pop("lam", 0.5)), p)
    if kind == "unitary_conjugation":
        u = params.pop("u")
        return unitary_conjugation(u, p)
    if kind == "yeadon_synthetic":
        return yeadon_synthetic(params.pop("w"), params.pop("B"), params.pop("J"), p)
    if kind == "star_homomorphism":
        return star_homomorphism(params.pop("domain"), params.pop("blocks"), params.pop("weights", None), p)
    if kind == "anti_star_homomorphism":
        return anti_star_homomorphism(params.pop("domain"), params.pop("blocks"), params.pop("weights", None), p)
    if kind == "jordan_direct_sum":
        return jordan_direct_sum(params.pop("domain"), params.pop("parts"), params.pop("weights", None), p)
    if kind == "commutative":
        return commutative_matrix(params.pop("entries"), params.pop("dom_weights"), params.pop("cod_weights"), p)
    raise DomainError(f"unknown example kind {kind!r}")
