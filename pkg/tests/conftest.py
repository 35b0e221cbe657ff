"""Shared helpers: small seeded module corpus used across the test suite."""

import numpy as np
import pytest

from exttate.extalg import Algebra, ExtElement, random_element
from exttate.efree import FreeEModule, GradedMap, vectorize_coker
from exttate.smod import PolyRing, SPresentation, parse_poly, slice_presentation
from exttate import paramspace


def quotient_by(alg, elems):
    """E/(elems) as a VectorizedModule."""
    tgt = FreeEModule(alg, (0,))
    src = FreeEModule(alg, tuple(e.degree for e in elems))
    ent = {(0, c): e for c, e in enumerate(elems)}
    return vectorize_coker(GradedMap(src, tgt, ent))


def residue_field(alg):
    return quotient_by(alg, [ExtElement.variable(alg, i) for i in range(alg.nvars)])


def random_presentation_module(rng, n, p=32003, max_rels=3):
    """coker of a small random homogeneous matrix with generators in
    degrees 0 (and sometimes 1), relations in degrees -1..-(n+1)."""
    alg = Algebra(n, p)
    tgt_degs = (0,) if rng.random() < 0.7 else (0, 1)
    nrel = int(rng.integers(1, max_rels + 1))
    src_degs = []
    entries = {}
    for c in range(nrel):
        r = int(rng.integers(0, len(tgt_degs)))
        d = -int(rng.integers(1, n + 2))
        src_degs.append(d + tgt_degs[r])
        el = random_element(alg, d, rng)
        if not el.is_zero:
            entries[(r, c)] = el
    f = GradedMap(FreeEModule(alg, tuple(src_degs)), FreeEModule(alg, tgt_degs), entries)
    return vectorize_coker(f)


def random_typed_module(rng, n, p=32003):
    pool = [((1,), (1,)), ((1,), (2,)), ((2,), (1,)), ((2,), (2,)), ((1, 1), (1, 1))]
    b, bp = pool[int(rng.integers(0, len(pool)))]
    tvec = paramspace.TypeVectors(b, bp)
    x = paramspace.sample(tvec, n, rng, p=p)
    return vectorize_coker(x.phi.dual())


def module_corpus(count, seed, nmax=4, p=32003):
    """Deterministic list of small nonzero modules over varied n <= nmax."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    out = []
    while len(out) < count:
        n = int(rng.integers(1, nmax + 1))
        if n == nmax and rng.random() < 0.5:
            n -= 1
        if rng.random() < 0.5:
            m = random_presentation_module(rng, n, p=p)
        else:
            m = random_typed_module(rng, n, p=p)
        if not m.is_zero:
            out.append(m)
    return out


def sliced_corpus(p=32003):
    """Named S-side modules wide enough for the Tate windows in the tests."""
    out = []
    r1 = PolyRing(1, p)
    r2 = PolyRing(2, p)
    r3 = PolyRing(3, p)
    out.append(("P1 structure", slice_presentation(SPresentation.free_module(r1), (0, 7))))
    out.append(("P2 structure", slice_presentation(SPresentation.free_module(r2), (0, 7))))
    out.append(("plane conic", slice_presentation(
        SPresentation.quotient(r2, [parse_poly(r2, "x0*x1 - x2^2")]), (0, 8))))
    out.append(("plane cubic", slice_presentation(
        SPresentation.quotient(r2, [parse_poly(r2, "x0^3 + x1^3 + x2^3")]), (0, 8))))
    out.append(("two points P1", slice_presentation(
        SPresentation.quotient(r1, [parse_poly(r1, "x0^2 - x1^2")]), (0, 7))))
    out.append(("quadric P3", slice_presentation(
        SPresentation.quotient(r3, [parse_poly(r3, "x0*x1 - x2*x3")]), (0, 8))))
    out.append(("twisted line", slice_presentation(
        SPresentation.quotient(r2, [parse_poly(r2, "x0"), parse_poly(r2, "x1^2")]), (0, 8))))
    return out


@pytest.fixture(scope="session")
def small_corpus():
    return module_corpus(30, seed=2024)
