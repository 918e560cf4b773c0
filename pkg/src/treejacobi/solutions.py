"""Eigen-solution fields on truncations at exact spectral parameters.

The eigen-equation at an interior vertex v (all neighbors present) reads

    z f(v) = lambda_v f(v') + beta_v f(v) + sum_{c child} lambda_c f(c),

with no child sum at level 0.  For nonreal z the solution below a vertex
is unique up to scale and never vanishes; its values on a side subtree
hanging off a distinguished path are proportional to the polynomial
family of that subtree evaluated at z.  This module constructs the
normalized solution/associated-solution pair along a path, measures
norm growth, decides solution-space dimensions by exact elimination, and
attempts the same propagation at real spectral values, where it can hit
a genuine obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import ValidationError
from .exactmath import GaussianRational, I
from .treecore import PathSelection, TreeTruncation, default_path
from .treepoly import family

_ZERO = GaussianRational(Fraction(0), Fraction(0))
_ONE = GaussianRational(Fraction(1), Fraction(0))


@dataclass
class SolutionField:
    """Values of a (partial) eigen-solution; equations asserted on
    `satisfied_at` only."""

    tree: TreeTruncation
    z: GaussianRational
    values: dict[int, GaussianRational]
    satisfied_at: frozenset[int]
    path: PathSelection | None = None

    def value(self, v: int) -> GaussianRational:
        return self.values[v]

    def residual(self, v: int) -> GaussianRational:
        """z f(v) minus the operator row at v; v must not be the top."""
        t = self.tree
        p = t.parent[v]
        if p is None:
            raise ValidationError(
                f"no eigen-equation at the top vertex {t.ids[v]!r}")
        acc = self.z * self.values[v] - t.beta[v] * self.values[v]
        acc = acc - t.lam[v] * self.values[p]
        for c in t.children[v]:
            acc = acc - t.lam[c] * self.values[c]
        return acc

    def verify(self) -> bool:
        return all(not self.residual(v) for v in self.satisfied_at)

    def nonvanishing(self) -> bool:
        return all(bool(self.values[v]) for v in self.values)

    def norm2(self) -> Fraction:
        """Exact squared l2 norm over all stored values."""
        return sum((w.abs2() for w in self.values.values()), Fraction(0))


@dataclass(frozen=True)
class SideReduction:
    """Effective diagonal correction a side subtree adds to the path
    recurrence: sum over side children y of lambda_y * P(y,y)(z)/P(y,x)(z)."""

    vertex: str
    value: GaussianRational


@dataclass
class SolutionPair:
    v: SolutionField
    u: SolutionField
    path: PathSelection
    side: tuple[SideReduction, ...]

    def __iter__(self):
        return iter((self.v, self.u))


def _side_relative_values(tree: TreeTruncation, y: int, z,
                          ratio_cache: dict | None = None
                          ) -> dict[int, GaussianRational]:
    """Values of the family row below side child y at z, normalized so the
    attachment vertex (y's parent) carries value 1.  Requires the
    up-polynomials below y not to vanish at z (guaranteed off the real
    axis).  `ratio_cache` memoizes per-vertex ratios across structurally
    identical subtrees."""
    fam = family(tree, y)
    cache = {} if ratio_cache is None else ratio_cache

    def ratio(w: int) -> GaussianRational:
        key = (fam.self_poly[w].coeffs, fam.up_poly[w].coeffs)
        hit = cache.get(key)
        if hit is None:
            den = _gr(fam.up_poly[w](z))
            if not den:
                raise ValidationError(
                    f"family denominator vanishes at {tree.ids[w]!r}")
            hit = _gr(fam.self_poly[w](z)) / den
            cache[key] = hit
        return hit

    rel = {y: ratio(y)}
    for w in tree.descendants(y):
        if w != y:
            rel[w] = rel[tree.parent[w]] * ratio(w)
    return rel


def _gr(x) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational.of(x)


def solve_pair(tree: TreeTruncation, path: PathSelection,
               z: GaussianRational) -> SolutionPair:
    """The solution (v, with v(x_0) = 1) and the associated solution (u,
    with u(x_0) = 0, u(x_1) = 1/lambda_{x_0}) along the given path at a
    nonreal z.  Both satisfy the eigen-equation at every interior vertex;
    u skips x_0 by construction.  The path must start on level 0 and end
    at the top of the truncation."""
    z = _gr(z)
    if z.im == 0:
        raise ValueError("solve_pair needs a nonreal z; use propagate_real")
    if tree.level[path[0]] != 0:
        raise ValidationError("path must start at a level-0 vertex")
    if not path.reaches_top():
        raise ValidationError("path must reach the top of the truncation")
    vv: dict[int, GaussianRational] = {path[0]: _ONE}
    uu: dict[int, GaussianRational] = {path[0]: _ZERO}
    side_rows: list[SideReduction] = []
    ratio_cache: dict = {}
    if len(path) > 1:
        lam0 = tree.lam[path[0]]
        vv[path[1]] = (z - tree.beta[path[0]]) / lam0
        uu[path[1]] = _gr(Fraction(1) / lam0)
    for k in range(1, len(path)):
        xk = path[k]
        below = path[k - 1]
        side_sum = _ZERO
        for y in tree.children[xk]:
            if y == below:
                continue
            rel = _side_relative_values(tree, y, z, ratio_cache)
            side_sum = side_sum + tree.lam[y] * rel[y]
            for w, rw in rel.items():
                vv[w] = vv[xk] * rw
                uu[w] = uu[xk] * rw
        side_rows.append(SideReduction(tree.ids[xk], side_sum))
        if k + 1 < len(path):
            lam_k = tree.lam[xk]
            head_v = (z - tree.beta[xk]) * vv[xk] - side_sum * vv[xk]
            head_u = (z - tree.beta[xk]) * uu[xk] - side_sum * uu[xk]
            vv[path[k + 1]] = (head_v - tree.lam[below] * vv[below]) / lam_k
            uu[path[k + 1]] = (head_u - tree.lam[below] * uu[below]) / lam_k
    interior = frozenset(tree.interior())
    v_field = SolutionField(tree, z, vv, interior, path)
    u_field = SolutionField(tree, z, uu, interior - {path[0]}, path)
    return SolutionPair(v_field, u_field, path, tuple(side_rows))


def wronskian(v: SolutionField, u: SolutionField, n: int) -> GaussianRational:
    """v(x_n) u(x_{n+1}) - u(x_n) v(x_{n+1}); equals 1/lambda_{x_n} for a
    pair produced by solve_pair."""
    if v.path is None or u.path is None or v.path.vertices != u.path.vertices:
        raise ValidationError("wronskian needs two fields sharing one path")
    xs = v.path.vertices
    if not 0 <= n < len(xs) - 1:
        raise ValueError(f"path has no step {n}")
    a, b = xs[n], xs[n + 1]
    return v.values[a] * u.values[b] - u.values[a] * v.values[b]


# ---------------------------------------------------------------------
# solution-space dimension by exact elimination
# ---------------------------------------------------------------------


def _eliminate(rows: list[list], ncols: int) -> int:
    """Rank of an exact matrix over Fraction or GaussianRational."""
    rank = 0
    work = [r[:] for r in rows]
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        head = work[rank][col]
        for i in range(rank + 1, len(work)):
            if work[i][col]:
                f = work[i][col] / head
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def _solve_affine(rows: list[list], rhs: list, ncols: int, zero):
    """Particular solution of rows*x = rhs (free variables set to zero),
    or None when the system is inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        head = aug[r][col]
        aug[r] = [a / head for a in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols]:
            return None
    x = [zero] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][ncols]
    return x


def _equation_row(tree: TreeTruncation, w: int, pos: dict[int, int], z,
                  zero) -> list:
    """Coefficient row of the eigen-equation at w over the field of `zero`."""
    row = [zero] * len(pos)
    row[pos[w]] = zero + z - tree.beta[w]
    row[pos[tree.parent[w]]] = row[pos[tree.parent[w]]] - tree.lam[w]
    for c in tree.children[w]:
        row[pos[c]] = row[pos[c]] - tree.lam[c]
    return row


def uniqueness_dimension(tree: TreeTruncation, x: int,
                         z: GaussianRational) -> int:
    """Dimension of the space of fields on the subtree below x satisfying
    the eigen-equation at every vertex except x itself (cut vertices carry
    no equation).  Equals 1 for every nonreal z."""
    z = _gr(z)
    order = tree.descendants(x)
    pos = {v: i for i, v in enumerate(order)}
    rows = [_equation_row(tree, w, pos, z, _ZERO)
            for w in order if w != x and w not in tree.cut]
    return len(order) - _eliminate(rows, len(order))


# ---------------------------------------------------------------------
# rotated positivity along a path (symmetric matrices, z = i)
# ---------------------------------------------------------------------

_IPOW = (GaussianRational(Fraction(1), Fraction(0)), I,
         GaussianRational(Fraction(-1), Fraction(0)),
         GaussianRational(Fraction(0), Fraction(-1)))


@dataclass
class RotatedPositivityReport:
    ok: bool
    rotated: dict[str, Fraction]
    vertex_failures: list[str]
    step_rows: list[dict]


def rotated_positivity_report(tree: TreeTruncation,
                              path: PathSelection) -> RotatedPositivityReport:
    """For a matrix with zero diagonal, the solution at z = i rotated by
    i^(-level) is real and strictly positive, and along the path

        lam_{x_n} vt(x_{n+1}) - lam_{x_{n-1}} vt(x_{n-1})
            = vt(x_n) + sum_side lam_y vt(y) > 0.

    All comparisons exact; raises ValueError when some beta is nonzero."""
    if any(tree.beta[v] != 0 for v in range(tree.size)):
        raise ValueError("rotated positivity needs an all-zero diagonal")
    pair = solve_pair(tree, path, I)
    rotated: dict[int, GaussianRational] = {
        v: pair.v.values[v] * _IPOW[(-tree.level[v]) % 4]
        for v in pair.v.values}
    failures = [tree.ids[v] for v, w in rotated.items()
                if w.im != 0 or w.re <= 0]
    steps = []
    ok = not failures
    xs = path.vertices
    for n in range(1, len(xs) - 1):
        lhs = (tree.lam[xs[n]] * rotated[xs[n + 1]]
               - tree.lam[xs[n - 1]] * rotated[xs[n - 1]])
        rhs = rotated[xs[n]]
        for y in tree.children[xs[n]]:
            if y != xs[n - 1]:
                rhs = rhs + tree.lam[y] * rotated[y]
        step_ok = (lhs == rhs) and lhs.im == 0 and lhs.re > 0
        ok = ok and step_ok
        steps.append({"n": n, "ok": step_ok,
                      "growth": lhs.re if lhs.im == 0 else None})
    return RotatedPositivityReport(
        ok=ok,
        rotated={tree.ids[v]: w.re for v, w in rotated.items()},
        vertex_failures=failures,
        step_rows=steps)


# ---------------------------------------------------------------------
# propagation at real spectral values
# ---------------------------------------------------------------------


@dataclass
class PropagationResult:
    """Outcome of attempting a normalized solution at a real value.

    Exactly one of `field`/`obstruction` is set.  An obstruction means the
    full linear system (eigen-equation at every interior vertex plus the
    normalization f(x_0) = 1) is exactly infeasible; the named vertex is
    where the path walk first failed."""

    field: SolutionField | None
    obstruction: int | None
    obstruction_id: str | None
    free_choices: tuple[str, ...] = ()

    @property
    def obstructed(self) -> bool:
        return self.obstruction is not None


def propagate_real(tree: TreeTruncation, x: int, r: Fraction) -> PropagationResult:
    """Attempt the path-and-side-ratio propagation at real z = r on the
    subtree below x, normalized to 1 at the path's level-0 start.

    Side subtrees are filled with multiples of their family rows
    evaluated at r.  A side attachment whose denominator vanishes while
    the path value is nonzero blocks the walk; infeasibility is then
    confirmed (or refuted) by exact elimination on the full system, so a
    reported obstruction is a proof, not a heuristic."""
    r = Fraction(r)
    path = default_path(tree, top=x)
    f: dict[int, Fraction] = {path[0]: Fraction(1)}
    free: list[str] = []
    blocked: int | None = None
    if len(path) > 1:
        f[path[1]] = (r - tree.beta[path[0]]) / tree.lam[path[0]]
    for k in range(1, len(path)):
        xk = path[k]
        below = path[k - 1]
        side_sum = Fraction(0)
        for y in tree.children[xk]:
            if y == below:
                continue
            fam = family(tree, y)
            den = fam.up_poly[y](r)
            if den == 0:
                if f[xk] != 0:
                    blocked = y
                    break
                free.append(tree.ids[y])
                for w in tree.descendants(y):
                    f[w] = Fraction(0)
                continue
            scale = f[xk] / den
            for w in tree.descendants(y):
                f[w] = scale * fam.entry(y, w)(r)
            side_sum += tree.lam[y] * f[y]
        if blocked is not None:
            break
        if k + 1 < len(path):
            f[path[k + 1]] = ((r - tree.beta[xk]) * f[xk]
                              - tree.lam[below] * f[below]
                              - side_sum) / tree.lam[xk]
    if blocked is None:
        return PropagationResult(_real_field(tree, x, r, f), None, None,
                                 tuple(free))
    # decide feasibility exactly on the full system
    order = tree.descendants(x)
    pos = {v: i for i, v in enumerate(order)}
    rows = [_equation_row(tree, w, pos, r, Fraction(0))
            for w in order if w != x and w not in tree.cut]
    norm_row = [Fraction(0)] * len(order)
    norm_row[pos[path[0]]] = Fraction(1)
    rows.append(norm_row)
    rhs = [Fraction(0)] * (len(rows) - 1) + [Fraction(1)]
    sol = _solve_affine(rows, rhs, len(order), Fraction(0))
    if sol is None:
        return PropagationResult(None, blocked, tree.ids[blocked], tuple(free))
    values = {v: sol[pos[v]] for v in order}
    return PropagationResult(_real_field(tree, x, r, values), None, None,
                             tuple(free))


def _real_field(tree: TreeTruncation, x: int, r: Fraction,
                values: dict[int, Fraction]) -> SolutionField:
    sub = set(tree.descendants(x))
    satisfied = frozenset(v for v in tree.interior() if v in sub and v != x)
    fld = SolutionField(
        tree, GaussianRational(r, Fraction(0)),
        {v: GaussianRational(val, Fraction(0)) for v, val in values.items()},
        satisfied)
    if not fld.verify():
        raise ValidationError("real propagation produced a nonzero residual")
    return fld


# ---------------------------------------------------------------------
# norm growth profiles
# ---------------------------------------------------------------------


@dataclass
class GrowthRow:
    depth: int
    size: int
    norm2: Fraction
    carleman_sum: Fraction


@dataclass
class GrowthProfile:
    """Norm and reciprocal-weight profile over increasing truncation depth.

    Finite-depth indicator only: nothing here decides square-summability
    or essential selfadjointness on the infinite tree."""

    rows: list[GrowthRow]
    strictly_increasing: bool
    bounded_by_one: bool
    carleman_divergent_trend: bool
    indicator = ("finite-depth indicator; infinite-tree conclusions are "
                 "not decided by truncations")


def growth_profile(make_tree: Callable[[int], TreeTruncation],
                   z: GaussianRational,
                   depths: Iterable[int]) -> GrowthProfile:
    """Solve at each depth and tabulate the exact squared norm of the
    normalized solution plus the partial sums of 1/lambda along the path."""
    rows = []
    for depth in depths:
        tree = make_tree(depth)
        path = default_path(tree)
        pair = solve_pair(tree, path, z)
        carleman = sum((Fraction(1) / tree.lam[v] for v in path.vertices),
                       Fraction(0))
        rows.append(GrowthRow(depth, tree.size, pair.v.norm2(), carleman))
    increasing = all(a.norm2 < b.norm2 for a, b in zip(rows, rows[1:]))
    bounded = all(row.norm2 <= 1 for row in rows)
    carleman_up = all(a.carleman_sum < b.carleman_sum
                      for a, b in zip(rows, rows[1:]))
    return GrowthProfile(rows, increasing, bounded, carleman_up)
