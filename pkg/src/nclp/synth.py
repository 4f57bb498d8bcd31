"""Structured random instances: factorizable maps, isometry batteries,
completely positive contractions, positive non-2-positive mixtures.

These generators carry provenance in the map metadata, which the
certification routes treat as trusted constructor knowledge.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    Element,
    identity,
    matrix_algebra,
)
from .maps import (
    LinearMap,
    add_maps,
    commutative_matrix,
    depolarizing,
    kraus_map,
    map_from_function,
    rotation_mixing,
    scale_map,
    unitary_conjugation,
    yeadon_synthetic,
)
from .sampling import ginibre, haar_unitary, random_algebra, random_unitary


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for m in mats:
        d = m.shape[0]
        out[pos : pos + d, pos : pos + d] = m
        pos += d
    return out


def _jordan_from_layout(
    domain: AlgebraDescriptor,
    layout: list[tuple[list[tuple[int, str]], int]],
    weights: list[float],
    unitaries: list[np.ndarray],
    p: float,
) -> LinearMap:
    """J(x) = (+)_l u_l ( (+)_i phi_i(x_{k_i}) (+) 0_dead ) u_l*.

    layout[l] = (parts, dead): the parts stacked inside codomain block l and
    the dimension of its dead corner (outside the range of J).
    """
    dims = domain.dims
    cod_blocks = []
    for (parts, dead), w in zip(layout, weights):
        size = sum(dims[k] for k, _ in parts) + dead
        cod_blocks.append((size, w))
    cod = AlgebraDescriptor(tuple(cod_blocks))

    def fn(x: Element) -> Element:
        out = []
        for l, (parts, dead) in enumerate(layout):
            mats = []
            for k, kind in parts:
                blk = x.blocks[k]
                mats.append(blk.T if kind == "anti" else blk)
            if dead:
                mats.append(np.zeros((dead, dead), dtype=complex))
            big = _block_diag(mats) if mats else np.zeros((dead, dead), dtype=complex)
            u = unitaries[l]
            out.append(u @ big @ u.conj().T)
        return Element(cod, out)

    return map_from_function(
        domain, cod, fn, p,
        {"kind": "jordan_layout", "layout": tuple((tuple(ps), dd) for ps, dd in layout),
         "positive": True, "separating": True},
    )


def _random_layout(
    rng: np.random.Generator, domain: AlgebraDescriptor
) -> tuple[list[tuple[list[tuple[int, str]], int]], list[float], list[np.ndarray]]:
    """Draw a parts layout, codomain weights and conjugating unitaries."""
    n_dom = len(domain.dims)
    n_parts = int(rng.integers(1, 4))
    part_specs = [
        (int(rng.integers(0, n_dom)), "anti" if rng.random() < 0.5 else "hom")
        for _ in range(n_parts)
    ]
    n_cod = int(rng.integers(1, 3))
    buckets: list[list[tuple[int, str]]] = [[] for _ in range(n_cod)]
    for spec in part_specs:
        buckets[int(rng.integers(0, n_cod))].append(spec)
    layout = []
    for parts in buckets:
        dead = int(rng.integers(1, 3)) if (rng.random() < 0.3 or not parts) else 0
        layout.append((parts, dead))
    weights = [float(rng.uniform(0.5, 2.0)) for _ in range(n_cod)]
    unitaries = []
    for parts, dead in layout:
        size = sum(domain.dims[k] for k, _ in parts) + dead
        unitaries.append(haar_unitary(rng, size))
    return layout, weights, unitaries


def random_jordan_map(
    rng: np.random.Generator, p: float = 2.0, domain: AlgebraDescriptor | None = None
) -> LinearMap:
    """Random Jordan homomorphism mixing plain and transposed copies of the
    domain blocks, conjugated by Haar unitaries, with optional dead corners."""
    if domain is None:
        domain = random_algebra(rng, max_blocks=2, max_dim=3)
    layout, weights, unitaries = _random_layout(rng, domain)
    return _jordan_from_layout(domain, layout, weights, unitaries, p)


def random_yeadon_map(
    rng: np.random.Generator,
    p: float = 2.0,
    positive_w: bool | None = None,
) -> tuple[LinearMap, Element, Element, LinearMap]:
    """T = w B J(.) with random valid data; returns (T, w, B, J).

    B is constant on each part (it must commute with the range) with scales
    in [0.4, 2.0]; w is either the range projection itself (giving a
    positive map) or a random unitary times it.
    """
    domain = random_algebra(rng, max_blocks=2, max_dim=3)
    layout, weights, unitaries = _random_layout(rng, domain)
    J = _jordan_from_layout(domain, layout, weights, unitaries, p)
    cod = J.codomain
    dims = domain.dims
    b_blocks, e_blocks = [], []
    for parts, dead in layout:
        scales: list[float] = []
        for k, _ in parts:
            scales.extend([float(rng.uniform(0.4, 2.0))] * dims[k])
        scales.extend([0.0] * dead)
        arr = np.array(scales, dtype=complex)
        b_blocks.append(np.diag(arr))
        e_blocks.append(np.diag((arr != 0).astype(complex)))
    B = Element(cod, [u @ b @ u.conj().T for u, b in zip(unitaries, b_blocks)])
    e = Element(cod, [u @ m @ u.conj().T for u, m in zip(unitaries, e_blocks)])
    if positive_w is None:
        positive_w = bool(rng.random() < 0.4)
    if positive_w:
        w = e
    else:
        w = random_unitary(cod, rng) * e
    T = yeadon_synthetic(w, B, J, p)
    return T, w, B, J


def random_cp_contraction(
    algebra: AlgebraDescriptor, p: float, rng: np.random.Generator
) -> LinearMap:
    """Kraus map normalized to be doubly substochastic, hence a completely
    positive contraction at every exponent."""
    n_ops = int(rng.integers(1, 4))
    vs = [Element(algebra, [ginibre(rng, d) for d in algebra.dims]) for _ in range(n_ops)]
    T = kraus_map(vs, p)
    one = identity(algebra)
    lam = max(T(one).sup_norm(), 0.0)
    from .maps import adjoint_map

    lam = max(lam, adjoint_map(T, 1)(identity(algebra)).sup_norm())
    if lam <= 0:
        return depolarizing(algebra, 0.5, p)
    T = scale_map(T, 1.0 / lam)
    T.meta["cp"] = True
    T.meta["positive"] = True
    T.meta["kind"] = "cp_contraction"
    if rng.random() < 0.3:
        T = add_maps(scale_map(T, 0.5), scale_map(depolarizing(algebra, 0.5, p), 0.5))
        T.meta["kind"] = "cp_contraction"
    return T


def random_positive_map(
    algebra: AlgebraDescriptor, p: float, rng: np.random.Generator
) -> LinearMap:
    """Positive but generically not 2-positive: a mixture of a Kraus map and
    a transposed Kraus map, with a random overall scale."""
    k1 = kraus_map(
        [Element(algebra, [ginibre(rng, d) for d in algebra.dims])], p
    )
    k2 = kraus_map(
        [Element(algebra, [ginibre(rng, d) for d in algebra.dims])], p, transposed=True
    )
    t = float(rng.uniform(0.25, 0.75))
    T = add_maps(scale_map(k1, t), scale_map(k2, 1.0 - t))
    T = scale_map(T, float(rng.uniform(0.5, 1.5)))
    T.meta["positive"] = True
    T.meta["kind"] = "positive_mixture"
    return T


def random_l2_isometry(rng: np.random.Generator, index: int) -> LinearMap:
    """Battery of L^2 isometries: unitary conjugations, one-sided unitary
    multiplications, block embeddings, balanced twisted embeddings (all of
    which factor), and rotation mixings (which do not)."""
    kind = index % 5
    if kind == 0:
        alg = matrix_algebra(2 + index % 2)
        return unitary_conjugation(random_unitary(alg, rng), 2.0)
    if kind == 1:
        alg = matrix_algebra(2)
        u = random_unitary(alg, rng)
        return map_from_function(alg, alg, lambda x: u * x, 2.0,
                                 {"kind": "left_unitary", "separating": True})
    if kind == 2:
        d = 2 + index % 2
        w = float(rng.uniform(0.5, 2.0))
        dom = matrix_algebra(d, w)
        cod = AlgebraDescriptor(((d, w), (int(rng.integers(1, 3)), float(rng.uniform(0.5, 2.0)))))

        def embed(x: Element) -> Element:
            return Element(cod, [x.blocks[0].copy(), np.zeros((cod.dims[1], cod.dims[1]))])

        J = map_from_function(dom, cod, embed, 2.0, {"kind": "block_embedding",
                                                     "positive": True,
                                                     "separating": True})
        e = J(identity(dom))
        return yeadon_synthetic(e, e, J, 2.0)
    if kind == 3:
        w = float(rng.uniform(0.5, 2.0))
        dom = matrix_algebra(2, w)
        cod = AlgebraDescriptor(((2, w), (2, w)))

        def twist(x: Element) -> Element:
            return Element(cod, [x.blocks[0].copy(), x.blocks[0].T.copy()])

        J = map_from_function(dom, cod, twist, 2.0, {"kind": "hom_anti_embedding",
                                                     "positive": True,
                                                     "separating": True})
        one = identity(cod)
        B = (1.0 / np.sqrt(2.0)) * one
        return yeadon_synthetic(one, B, J, 2.0)
    theta = float(rng.uniform(0.4, np.pi - 0.4))
    return rotation_mixing(theta, 2.0)


def random_commutative_map(
    rng: np.random.Generator, n_dom: int = 3, n_cod: int = 3, p: float = 2.0
) -> LinearMap:
    entries = ginibre(rng, max(n_dom, n_cod))[:n_cod, :n_dom]
    dom_w = [float(rng.uniform(0.5, 2.0)) for _ in range(n_dom)]
    cod_w = [float(rng.uniform(0.5, 2.0)) for _ in range(n_cod)]
    return commutative_matrix(entries, dom_w, cod_w, p)
