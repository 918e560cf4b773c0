"""The polynomial family attached to the subtrees of a truncation.

For a vertex v let `self_poly[v]` be the polynomial giving the value of
the (unique up to scale) eigen-solution at v itself, normalized monic,
and `up_poly[v]` the value one step above v.  At a childless vertex

    self_poly[v] = 1,        up_poly[v] = (z - beta_v) / lambda_v,

and at an internal vertex the family is assembled bottom-up: self_poly[v]
is the monic least common multiple of the children's up-polynomials, the
value at a deeper vertex t transfers through a child c as

    P(v, t) = self_poly[v] * P(c, t) / up_poly[c]       (exact division),

and up_poly[v] comes from the eigen-equation at v,

    lambda_v * up_poly[v] = (z - beta_v) * self_poly[v]
                            - sum_c lambda_c * P(v, c).

Every stored polynomial has rational coefficients; every division above
must be remainder-free, and a DivisionError out of this module means a
broken invariant, not a data-dependent condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnknownVertexError
from .exactmath import (ONE, Poly, RootSet, has_only_real_simple_roots,
                        isolate_real_roots, poly_lcm_many, strict_interlace)
from .treecore import TreeTruncation


class PolyFamily:
    """All family polynomials over the subtree below a chosen vertex."""

    __slots__ = ("tree", "anchor", "self_poly", "up_poly", "_entries")

    def __init__(self, tree: TreeTruncation, anchor: int | None = None):
        self.tree = tree
        self.anchor = tree.top if anchor is None else anchor
        if not 0 <= self.anchor < tree.size:
            raise UnknownVertexError(self.anchor)
        self.self_poly: dict[int, Poly] = {}
        self.up_poly: dict[int, Poly] = {}
        self._entries: dict[tuple[int, int], Poly] = {}
        self._build()

    def _build(self):
        t = self.tree
        # hash-cons structurally identical subtrees so homogeneous regions
        # cost one polynomial computation per distinct shape
        sig: dict[int, int] = {}
        intern: dict[tuple, int] = {}
        memo: dict[int, tuple[Poly, Poly]] = {}
        for v in t._post_order(self.anchor):
            kids = t.children[v]
            key = (t.beta[v], t.lam[v], tuple(sig[c] for c in kids))
            s = intern.setdefault(key, len(intern))
            sig[v] = s
            if s in memo:
                self.self_poly[v], self.up_poly[v] = memo[s]
                continue
            if not kids:
                self.self_poly[v] = ONE
                self.up_poly[v] = Poly([-t.beta[v], 1]) * (Fraction(1) / t.lam[v])
                memo[s] = (self.self_poly[v], self.up_poly[v])
                continue
            lcm = poly_lcm_many([self.up_poly[c] for c in kids])
            self.self_poly[v] = lcm
            acc = Poly([-t.beta[v], 1]) * lcm
            for c in kids:
                up_c = self.up_poly[c]
                if lcm == up_c.monic():  # frequent: identical siblings
                    transfer = self.self_poly[c] * (Fraction(1) / up_c.leading())
                else:
                    transfer = (lcm * self.self_poly[c]).exact_div(up_c)
                self._entries[(v, c)] = transfer
                acc = acc - t.lam[c] * transfer
            self.up_poly[v] = acc * (Fraction(1) / t.lam[v])
            memo[s] = (self.self_poly[v], self.up_poly[v])

    def vertices(self):
        return self.self_poly.keys()

    def entry(self, v: int, t: int | None) -> Poly:
        """P(v, t) for t in the closed subtree below v, or t = None for the
        value one level above v."""
        if t is None or t == self.tree.parent[v]:
            return self.up_poly[v]
        if t == v:
            return self.self_poly[v]
        key = (v, t)
        if key in self._entries:
            return self._entries[key]
        # find the child of v whose subtree holds t
        w = t
        while w is not None and self.tree.parent[w] != v:
            w = self.tree.parent[w]
        if w is None:
            raise UnknownVertexError(
                f"{self.tree.ids[t]} is not below {self.tree.ids[v]}")
        p = (self.self_poly[v] * self.entry(w, t)).exact_div(self.up_poly[w])
        self._entries[key] = p
        return p


def family(tree: TreeTruncation, at: int | None = None) -> PolyFamily:
    """Build the polynomial family anchored at `at` (default: the top)."""
    return PolyFamily(tree, at)


# ---------------------------------------------------------------------
# structural reports
# ---------------------------------------------------------------------


@dataclass
class VertexCheck:
    vertex: str
    ok: bool
    detail: str = ""


@dataclass
class FamilyReport:
    checks: list[VertexCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[VertexCheck]:
        return [c for c in self.checks if not c.ok]


def interlacing_report(fam: PolyFamily) -> FamilyReport:
    """Per vertex: both family polynomials have only real simple roots,
    their degrees differ by one, and the roots strictly interlace."""
    rep = FamilyReport()
    t = fam.tree
    for v in sorted(fam.vertices()):
        name = t.ids[v]
        p_self, p_up = fam.self_poly[v], fam.up_poly[v]
        if p_up.degree != p_self.degree + 1:
            rep.checks.append(VertexCheck(name, False, "degree law violated"))
            continue
        if not has_only_real_simple_roots(p_self):
            rep.checks.append(VertexCheck(name, False,
                                          "self polynomial roots not real simple"))
            continue
        if not has_only_real_simple_roots(p_up):
            rep.checks.append(VertexCheck(name, False,
                                          "up polynomial roots not real simple"))
            continue
        if not strict_interlace(p_up, p_self):
            rep.checks.append(VertexCheck(name, False, "interlacing fails"))
            continue
        rep.checks.append(VertexCheck(name, True))
    return rep


def divisibility_report(fam: PolyFamily) -> FamilyReport:
    """Exact-division check P(c, t) | P(v, t) for every child c of every v
    and every t in the closed subtree below c."""
    rep = FamilyReport()
    t = fam.tree
    for v in sorted(fam.vertices()):
        name = t.ids[v]
        bad = None
        for c in t.children[v]:
            for s in t.descendants(c) + [v]:
                target = None if s == v else s
                big = fam.entry(v, s)
                small = fam.entry(c, target) if target is not None else fam.up_poly[c]
                q, r = divmod(big, small)
                if not r.is_zero:
                    bad = (c, s)
                    break
            if bad:
                break
        if bad:
            rep.checks.append(VertexCheck(
                name, False,
                f"P({t.ids[bad[0]]}, {t.ids[bad[1]]}) does not divide "
                f"P({name}, {t.ids[bad[1]]})"))
        else:
            rep.checks.append(VertexCheck(name, True))
    return rep


def degree_law_report(fam: PolyFamily) -> FamilyReport:
    """deg up_poly = deg self_poly + 1 and the leading coefficient of the
    up-polynomial equals 1/lambda at every vertex."""
    rep = FamilyReport()
    t = fam.tree
    for v in sorted(fam.vertices()):
        name = t.ids[v]
        ok = (fam.up_poly[v].degree == fam.self_poly[v].degree + 1
              and fam.up_poly[v].leading() == Fraction(1) / t.lam[v]
              and fam.self_poly[v].leading() == 1)
        rep.checks.append(VertexCheck(name, ok, "" if ok else "degree/leading law"))
    return rep


def family_roots(fam: PolyFamily, v: int, width=None) -> tuple[RootSet, RootSet]:
    """Isolated roots of (self_poly[v], up_poly[v])."""
    return (isolate_real_roots(fam.self_poly[v], width),
            isolate_real_roots(fam.up_poly[v], width))
