"""Truncated operators: exact matrices, characteristic polynomials and the
factorization of their spectra through the polynomial family.

The truncation of the operator to the subtree below x is the symmetric
matrix coupling each vertex to itself (beta), to its parent and children
(the child's lambda).  Its characteristic polynomial is computed by an
exact cofactor recursion over the tree, which is independent of the
family recursion and serves as the oracle for the spectral factorization:

    char(z)  =  up_poly[x] * prod_t  [ prod_c up_poly[c] ] / self_poly[t]

(all factors monic, t ranging over the internal vertices, c over the
children of t).  Eigenvalue counting against rational thresholds is done
two ways: Sturm counts on the characteristic polynomial, and an O(n)
congruence diagonalization along the tree that scales to truncations far
beyond the reach of polynomial chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SolveError
from .exactmath import (ONE, Poly, RootSet, count_real_roots,
                        isolate_real_roots, poly_gcd,
                        square_free_decomposition)
from .treecore import TreeTruncation
from .treepoly import PolyFamily, family


@dataclass(frozen=True)
class TruncatedOperator:
    """Exact symmetric matrix of the truncation below `anchor`."""

    tree: TreeTruncation
    anchor: int
    vertices: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]


def truncated_operator(tree: TreeTruncation, at: int | None = None) -> TruncatedOperator:
    anchor = tree.top if at is None else at
    order = tree.descendants(anchor)
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for v in order:
        i = pos[v]
        mat[i][i] = tree.beta[v]
        for c in tree.children[v]:
            j = pos[c]
            mat[i][j] = mat[j][i] = tree.lam[c]
    return TruncatedOperator(tree, anchor,
                             tuple(order), tuple(tuple(row) for row in mat))


def char_poly(tree: TreeTruncation, at: int | None = None) -> Poly:
    """det(zI - J_x), monic, by the vertex-deletion recursion on the tree."""
    anchor = tree.top if at is None else at
    phi: dict[int, Poly] = {}        # char poly of the subtree at v
    phi_open: dict[int, Poly] = {}   # char poly of the subtree minus v
    for v in tree._post_order(anchor):
        kids = tree.children[v]
        prod = ONE
        for c in kids:
            prod = prod * phi[c]
        phi_open[v] = prod
        head = Poly([-tree.beta[v], 1]) * prod
        if kids:
            # prefix/suffix products of the sibling char polys
            pre = [ONE]
            for c in kids:
                pre.append(pre[-1] * phi[c])
            suf = [ONE]
            for c in reversed(kids):
                suf.append(suf[-1] * phi[c])
            suf.reverse()
            for i, c in enumerate(kids):
                head = head - (tree.lam[c] ** 2) * (phi_open[c] * pre[i] * suf[i + 1])
        phi[v] = head
    return phi[anchor]


# ---------------------------------------------------------------------
# spectrum through the family
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class SharedRootFactor:
    """Roots shared among the children of one vertex, with the multiplicity
    they contribute to the truncated spectrum."""

    vertex: str
    factor: Poly
    roots: RootSet


@dataclass(frozen=True)
class SpectralDescription:
    top_roots: RootSet
    shared: tuple[SharedRootFactor, ...]


def _shared_factor(fam: PolyFamily, v: int) -> Poly:
    """prod_c monic(up_poly[c]) / self_poly[v]; trivial when nothing is shared."""
    prod = ONE
    for c in fam.tree.children[v]:
        prod = prod * fam.up_poly[c].monic()
    return prod.exact_div(fam.self_poly[v])


def spectral_description(fam: PolyFamily, width=None) -> SpectralDescription:
    """The spectrum of the truncation at the family's anchor: the roots of
    the anchor's up-polynomial (all simple), plus, per internal vertex, the
    roots its children share; a root covered n times by the children's
    polynomials contributes n - 1 extra eigenvalues."""
    t = fam.tree
    shared = []
    for v in sorted(fam.vertices()):
        if not t.children[v]:
            continue
        f = _shared_factor(fam, v)
        if f.degree >= 1:
            shared.append(SharedRootFactor(
                t.ids[v], f, isolate_real_roots(f, width)))
    return SpectralDescription(
        top_roots=isolate_real_roots(fam.up_poly[fam.anchor], width),
        shared=tuple(shared))


def verify_spectral_identity(fam: PolyFamily) -> bool:
    """Exact check that the characteristic polynomial of the truncation
    equals the monic up-polynomial at the anchor times all shared-root
    factors.  DivisionError from the factor assembly would falsify the
    identity; plain inequality returns False."""
    t = fam.tree
    rhs = fam.up_poly[fam.anchor].monic()
    for v in fam.vertices():
        if t.children[v]:
            rhs = rhs * _shared_factor(fam, v)
    lhs = char_poly(t, fam.anchor).monic()
    return lhs == rhs


def count_negative_eigenvalues(tree: TreeTruncation, at: int | None = None) -> int:
    """Number of eigenvalues of the truncation in (-inf, 0), with
    multiplicity, via Sturm counts on the characteristic polynomial."""
    p = char_poly(tree, at)
    total = 0
    # strip eigenvalue 0 so the interval stays open at the right end
    while p(Fraction(0)) == 0:
        p = p.exact_div(Poly([0, 1]))
    for g, mult in square_free_decomposition(p):
        if g.degree >= 1:
            total += mult * count_real_roots(g, None, Fraction(0))
    return total


# ---------------------------------------------------------------------
# congruence diagonalization along the tree
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class Inertia:
    below: int
    at: int
    above: int


def tree_inertia(tree: TreeTruncation, sigma: Fraction,
                 at: int | None = None) -> Inertia:
    """Inertia of (J_x - sigma I) by leaf-to-root congruence elimination.

    A zero pivot at a child pairs it with its parent into a 2x2 block of
    inertia (+1, -1); the parent's remaining couplings are annihilated by
    the child's row, so later siblings and the grandparent see it removed.
    Counts are exact: `below`/`at`/`above` are the numbers of eigenvalues
    of the truncation below, at, and above sigma.
    """
    anchor = tree.top if at is None else at
    sigma = Fraction(sigma)
    d = {v: tree.beta[v] - sigma for v in tree.descendants(anchor)}
    paired: set[int] = set()  # vertices consumed by a zero-pivot pair
    pos = neg = zero = 0

    def classify(x: Fraction):
        nonlocal pos, neg, zero
        if x > 0:
            pos += 1
        elif x < 0:
            neg += 1
        else:
            zero += 1

    for v in tree._post_order(anchor):
        if v in paired:
            continue  # counted with the child that zeroed out
        if v == anchor:
            classify(d[v])
            continue
        u = tree.parent[v]
        if u in paired:
            # the pairing annihilated the edge upward; v closes a component
            classify(d[v])
        elif d[v] != 0:
            classify(d[v])
            d[u] -= tree.lam[v] ** 2 / d[v]
        else:
            pos += 1
            neg += 1
            paired.add(u)
    return Inertia(below=neg, at=zero, above=pos)


def eigenvalues_outside(tree: TreeTruncation, lo: Fraction, hi: Fraction,
                        at: int | None = None) -> int:
    """Eigenvalue count (with multiplicity) outside the closed interval."""
    return (tree_inertia(tree, Fraction(lo), at).below
            + tree_inertia(tree, Fraction(hi), at).above)


# ---------------------------------------------------------------------
# exact linear solves along the tree
# ---------------------------------------------------------------------


def tree_solve(tree: TreeTruncation, diag: dict[int, Fraction],
               offdiag: dict[int, Fraction], rhs: dict[int, Fraction],
               at: int | None = None) -> dict[int, Fraction]:
    """Solve M f = rhs where M has the tree's adjacency pattern below `at`:
    M[v][v] = diag[v] and M[v][parent v] = offdiag[v].

    Elimination runs leaves-to-root with no fill-in; a zero pivot raises
    SolveError (all systems solved in this package are positive definite,
    so a singular pivot means a violated precondition).
    """
    anchor = tree.top if at is None else at
    order = tree._post_order(anchor)
    d = {v: Fraction(diag[v]) for v in order}
    b = {v: Fraction(rhs.get(v, Fraction(0))) for v in order}
    for v in order:
        if v == anchor:
            continue
        if d[v] == 0:
            raise SolveError(f"zero pivot at vertex {tree.ids[v]!r}")
        u = tree.parent[v]
        w = Fraction(offdiag[v])
        d[u] -= w * w / d[v]
        b[u] -= w * b[v] / d[v]
    if d[anchor] == 0:
        raise SolveError(f"zero pivot at vertex {tree.ids[anchor]!r}")
    x = {anchor: b[anchor] / d[anchor]}
    for v in reversed(order):
        if v == anchor:
            continue
        x[v] = (b[v] - Fraction(offdiag[v]) * x[tree.parent[v]]) / d[v]
    return x


# ---------------------------------------------------------------------
# eigenvector witnesses for shared roots
# ---------------------------------------------------------------------


@dataclass
class WitnessCheck:
    vertex: str
    pair: tuple[str, str]
    factor: Poly
    ok: bool


def eigenvector_witness_report(fam: PolyFamily) -> list[WitnessCheck]:
    """For every pair of siblings sharing roots, verify the explicit
    eigenvector identity symbolically, modulo the (square-free) shared
    factor g: the candidate vector has polynomial entries

        u(t) =  lam_{c2} * self_poly[c2] * P(c1, t)   on the c1 subtree,
        u(t) = -lam_{c1} * self_poly[c1] * P(c2, t)   on the c2 subtree,

    and (J - z) u must vanish identically in the quotient ring mod g, which
    proves J u = r u exactly for every root r of g, rational or not.
    """
    t = fam.tree
    out: list[WitnessCheck] = []
    for v in sorted(fam.vertices()):
        kids = t.children[v]
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                c1, c2 = kids[i], kids[j]
                g = poly_gcd(fam.up_poly[c1], fam.up_poly[c2])
                if g.degree == 0:
                    continue
                ok = _witness_holds(fam, v, c1, c2, g)
                out.append(WitnessCheck(t.ids[v], (t.ids[c1], t.ids[c2]), g, ok))
    return out


def _witness_holds(fam: PolyFamily, v: int, c1: int, c2: int, g: Poly) -> bool:
    t = fam.tree
    u: dict[int, Poly] = {}
    s1 = t.lam[c2] * fam.self_poly[c2]
    s2 = t.lam[c1] * fam.self_poly[c1]
    for w in t.descendants(c1):
        u[w] = s1 * fam.entry(c1, w)
    for w in t.descendants(c2):
        u[w] = -1 * (s2 * fam.entry(c2, w))
    # the residual vanishes identically away from the support's neighborhood
    relevant = set(u)
    for w in list(relevant):
        if t.parent[w] is not None:
            relevant.add(t.parent[w])
        relevant.update(t.children[w])
    anchor_set = set(t.descendants(fam.anchor))
    zero = Poly()
    zpoly = Poly([0, 1])
    for w in relevant & anchor_set:
        uw = u.get(w, zero)
        acc = zpoly * uw - t.beta[w] * uw
        p = t.parent[w]
        if p is not None and w != fam.anchor:
            acc = acc - t.lam[w] * u.get(p, zero)
        for c in t.children[w]:
            acc = acc - t.lam[c] * u.get(c, zero)
        if not (acc % g).is_zero:
            return False
    return True
