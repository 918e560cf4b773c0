"""Executable versions of the explicit matrix constructions.

Four builders, each returning the finished truncation together with the
exact evidence its defining property demands:

* ``build_small_norm_pair``          -- an inductive choice of weights at
  z = i keeping the solution's squared norm below 1 - 2^(-n) at every
  stage (the finite shadow of a non-essentially-selfadjoint matrix);
* ``build_path_perturbed_homogeneous`` -- a norm-bounded homogeneous
  matrix plus a degenerate path perturbation whose classical part is
  indeterminate;
* ``build_pendant_path``             -- a path with pendant vertices whose
  coupling weights satisfy mu^2 = 1 + beta^2, reducing the solve at z = i
  to a classical recursion with flipped diagonal;
* ``build_real_obstruction``         -- a matrix whose eigen-equation at
  the real value 0 admits no field normalized at the path origin.

Positivity certificates: ``check_positivity_certificate`` verifies the
pointwise certificate inequality, and ``construct_positivity_certificate``
produces an exact equality-mode certificate for a positive-definite
truncation by Schur-reducing the side subtrees onto the path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classical1d import (ClassicalJacobi, classical,
                          positivity_sign_vector, pq_square_sum,
                          recurrence_values)
from .errors import ConstructionError, PositivityError, SolveError
from .exactmath import GaussianRational, I
from .solutions import (PropagationResult, SolutionField, SolutionPair,
                        propagate_real, solve_pair)
from .spectra import tree_inertia, tree_solve, eigenvalues_outside
from .treecore import (PathSelection, TreeTruncation, decorated_path_tree,
                       default_path, homogeneous_tree)
from .treepoly import family

# ---------------------------------------------------------------------
# positivity certificates
# ---------------------------------------------------------------------


@dataclass
class PositivityCertificate:
    tree: TreeTruncation
    m: dict[int, Fraction]
    mode: str  # "inequality" | "equality"

    def as_strings(self) -> dict[str, str]:
        from .exactmath import format_rational
        return {self.tree.ids[v]: format_rational(x) for v, x in self.m.items()}


@dataclass
class PositivityVerdict:
    ok: bool
    equality_everywhere: bool
    failures: list[dict]
    alphas: dict[str, Fraction]
    gammas: dict[str, Fraction]
    negative_eigenvalues: int | None


def check_positivity_certificate(tree: TreeTruncation,
                                 m: dict[int, Fraction]) -> PositivityVerdict:
    """Check the pointwise certificate inequality

        beta_v m(v) >= lambda_v m(parent v) + sum_c lambda_c m(c)

    at every non-top vertex, and its truncated form (no parent term) at
    the top.  Success makes the truncation positive semidefinite, which is
    additionally certified by an exact eigenvalue count at zero."""
    m = {v: Fraction(m[v]) for v in range(tree.size)}
    if any(x <= 0 for x in m.values()):
        raise ValueError("certificate function m must be positive everywhere")
    failures = []
    equality = True
    alphas: dict[str, Fraction] = {}
    gammas: dict[str, Fraction] = {}
    for v in range(tree.size):
        lhs = tree.beta[v] * m[v]
        rhs = sum((tree.lam[c] * m[c] for c in tree.children[v]), Fraction(0))
        p = tree.parent[v]
        if p is not None:
            rhs += tree.lam[v] * m[p]
            alphas[tree.ids[v]] = tree.lam[v] * m[v] / m[p]
            gammas[tree.ids[v]] = tree.lam[v] * m[p] / m[v]
        if lhs < rhs:
            failures.append({"vertex": tree.ids[v], "lhs": lhs, "rhs": rhs})
        elif lhs != rhs and p is not None:
            equality = False  # equality mode concerns the non-top vertices
    if failures:
        return PositivityVerdict(False, False, failures, alphas, gammas, None)
    inertia = tree_inertia(tree, Fraction(0))
    if inertia.below != 0:
        raise PositivityError(
            "certificate inequality held yet negative eigenvalues exist; "
            "this cannot happen for a valid certificate and indicates a bug")
    return PositivityVerdict(True, equality, [], alphas, gammas, inertia.below)


def unit_certificate(tree: TreeTruncation) -> dict[int, Fraction]:
    return {v: Fraction(1) for v in range(tree.size)}


def _side_roots(tree: TreeTruncation, path: PathSelection, k: int) -> list[int]:
    below = path[k - 1] if k >= 1 else None
    return [c for c in tree.children[path[k]] if c != below]


def _side_mass(tree: TreeTruncation, s: int) -> Fraction:
    """lambda_s^2 * (M_s^{-1})_{ss} where M_s is the sign-flipped block of
    the subtree at s (diagonal beta, off-diagonal -lambda): the exact
    Schur-complement mass the side subtree pushes onto the path."""
    order = tree.descendants(s)
    diag = {v: tree.beta[v] for v in order}
    off = {v: -tree.lam[v] for v in order}
    w = tree_solve(tree, diag, off, {s: Fraction(1)}, at=s)
    return tree.lam[s] ** 2 * w[s]


def _side_equality_values(tree: TreeTruncation, s: int,
                          attach: Fraction) -> dict[int, Fraction]:
    """Solve the equality system on the subtree at s given the path value
    `attach` above it: beta_v m(v) = lambda_v m(parent) + sum_c lambda_c m(c)
    for every v in the subtree."""
    order = tree.descendants(s)
    diag = {v: tree.beta[v] for v in order}
    off = {v: -tree.lam[v] for v in order}
    return tree_solve(tree, diag, off, {s: tree.lam[s] * attach}, at=s)


@dataclass
class CertificateConstruction:
    certificate: PositivityCertificate
    reduced_diagonal: list[Fraction]
    side_mass: list[Fraction]
    regularized_side_mass: list[Fraction]
    regularized_m: dict[int, Fraction]


def construct_positivity_certificate(tree: TreeTruncation,
                                     path: PathSelection | None = None,
                                     n_reg: int = 1) -> CertificateConstruction:
    """Produce a positive function m with exact equality

        beta_v m(v) = lambda_v m(parent v) + sum_c lambda_c m(c)

    at every non-top vertex of a positive-semidefinite truncation.

    Every side subtree hanging off the path is Schur-reduced exactly onto
    its path vertex; the reduced path matrix (diagonal beta - side mass)
    is positive definite whenever the truncation is, its alternating-sign
    first-kind values at 0 give the path part of m, and solving the side
    blocks back against those path values gives the rest.  The
    regularized resolvent column (1/n_reg I - sign-flipped J)^{-1} delta
    at the path origin is also computed, as a strictly positive witness
    and a cross-check on the side masses."""
    if path is None:
        path = default_path(tree)
    if not path.reaches_top():
        raise ValueError("certificate construction needs a path to the top")
    inertia = tree_inertia(tree, Fraction(0))
    if inertia.below != 0:
        raise PositivityError(
            f"truncation has {inertia.below} negative eigenvalues; "
            f"no positivity certificate exists")
    if n_reg < 1:
        raise ValueError("n_reg must be a positive integer")
    # regularized witness (positive by M-matrix structure of the system)
    eps = Fraction(1, n_reg)
    try:
        f_reg = tree_solve(tree,
                           {v: eps + tree.beta[v] for v in range(tree.size)},
                           {v: -tree.lam[v] for v in range(tree.size)},
                           {path[0]: Fraction(1)})
    except SolveError as exc:
        raise SolveError(
            f"regularized system singular at n_reg={n_reg}; "
            f"choose a larger n_reg") from exc
    if any(x <= 0 for x in f_reg.values()):
        raise PositivityError("regularized witness failed strict positivity")
    m_reg = {v: x / f_reg[path[0]] for v, x in f_reg.items()}
    # exact side masses and the regularized ones they must approximate
    masses: list[Fraction] = []
    masses_reg: list[Fraction] = []
    for k in range(len(path)):
        total = Fraction(0)
        total_reg = Fraction(0)
        for s in _side_roots(tree, path, k):
            try:
                total += _side_mass(tree, s)
            except SolveError:
                raise PositivityError(
                    f"singular side block at {tree.ids[s]!r}; the equality "
                    f"certificate needs a positive-definite truncation")
            total_reg += tree.lam[s] * m_reg[s]
        masses.append(total)
        masses_reg.append(total_reg / m_reg[path[k]])
    reduced = [tree.beta[path[k]] - masses[k] for k in range(len(path))]
    lam_path = [tree.lam[v] for v in path.vertices]
    j_reduced = ClassicalJacobi(lambda n: lam_path[n], lambda n: reduced[n],
                                len(path) - 1)
    try:
        m_path = positivity_sign_vector(j_reduced, len(path) - 1)
    except ValueError as exc:
        raise PositivityError(
            f"Schur-reduced path matrix not positive definite: {exc}") from exc
    m: dict[int, Fraction] = {}
    for k, v in enumerate(path.vertices):
        m[v] = m_path[k]
    for k in range(len(path)):
        for s in _side_roots(tree, path, k):
            m.update(_side_equality_values(tree, s, m[path[k]]))
    cert = PositivityCertificate(tree, m, "equality")
    _verify_equality_certificate(tree, m)
    return CertificateConstruction(cert, reduced, masses, masses_reg, m_reg)


def _verify_equality_certificate(tree: TreeTruncation, m: dict[int, Fraction]):
    for v in range(tree.size):
        if m[v] <= 0:
            raise PositivityError(
                f"certificate value at {tree.ids[v]!r} is not positive")
        if v == tree.top:
            continue
        lhs = tree.beta[v] * m[v]
        rhs = tree.lam[v] * m[tree.parent[v]]
        rhs += sum((tree.lam[c] * m[c] for c in tree.children[v]), Fraction(0))
        if lhs != rhs:
            raise PositivityError(
                f"equality certificate has a nonzero residual at "
                f"{tree.ids[v]!r}")


# ---------------------------------------------------------------------
# the norm-capped inductive construction at z = i
# ---------------------------------------------------------------------


@dataclass
class NormLedgerRow:
    n: int
    side_norm2: Fraction
    top_value_norm2: Fraction
    total_norm2: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.total_norm2 <= self.bound


@dataclass
class SmallNormResult:
    tree: TreeTruncation
    solution: SolutionField
    path: PathSelection
    ledger: list[NormLedgerRow]

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.ledger)


def default_budget(n: int) -> Fraction:
    """Per-bucket squared-norm budget at stage n.

    The stage bound 1 - 2^(-n) cannot hold at n = 0 for any solution
    normalized away from zero, so the origin takes the value 1/2 and each
    stage spends at most 2^(-n-2) on the new side subtree and the same on
    the new path value, keeping the total at stage n below
    3/4 - 2^(-n-1) <= 1 - 2^(-n) for every n >= 1.
    """
    return Fraction(1, 2 ** (n + 2))


def build_small_norm_pair(depth: int, budget=default_budget) -> SmallNormResult:
    """Inductively choose weights (diagonal zero, z = i) so the normalized
    eigen-solution keeps its squared norm below 1 - 2^(-n) on every stage
    truncation.  Path weights grow by doubling until the new path value is
    small enough; each path vertex x_n gets one fresh side chain down to
    level 0 with unit weights inside, whose solution is rescaled against a
    halving side weight until it fits the side budget."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    z = I
    ids: list[str] = ["x0"]
    parent_ids: dict[str, str | None] = {"x0": None}
    levels: dict[str, int] = {"x0": 0}
    lams: dict[str, Fraction] = {}
    values: dict[str, GaussianRational] = {
        "x0": GaussianRational(Fraction(1, 2), Fraction(0))}
    norm = values["x0"].abs2()
    ledger: list[NormLedgerRow] = []
    for n in range(1, depth + 1):
        b_n = Fraction(budget(n))
        if b_n <= 0:
            raise ValueError(f"budget must be positive (stage {n})")
        prev = f"x{n - 1}"
        cur = f"x{n}"
        # eigen-equation at x_{n-1}: lambda_{x_{n-1}} v(x_n) = R, where R
        # collects z v(x_{n-1}) minus all already-fixed neighbor terms
        r_val = z * values[prev]
        for y in ids:
            if parent_ids.get(y) == prev:
                r_val = r_val - lams[y] * values[y]
        if not r_val:
            raise ConstructionError(
                f"vanishing right-hand side at stage {n}; impossible for a "
                f"nonvanishing solution")
        lam_prev = Fraction(1)
        while r_val.abs2() / lam_prev ** 2 > b_n:
            lam_prev *= 2
        lams[prev] = lam_prev
        ids.append(cur)
        parent_ids[cur] = None
        levels[cur] = n
        parent_ids[prev] = cur
        values[cur] = r_val / lam_prev
        # fresh side chain s_n (level n-1) ... s_n.<n-1> (level 0)
        chain = [f"s{n}"] + [f"s{n}.{j}" for j in range(1, n)]
        free = _free_chain_values(n, z)  # classical values, unit weights
        head = z * free[-1]
        if n >= 2:
            head = head - free[-2]
        if not head:
            raise ConstructionError(
                f"vanishing side numerator at stage {n}")
        chain_mass = sum((w.abs2() for w in free), Fraction(0))
        lam_side = Fraction(1)
        while (lam_side ** 2 * values[cur].abs2() / head.abs2()) * chain_mass > b_n:
            lam_side /= 2
        scale = lam_side * values[cur] / head
        side_norm = scale.abs2() * chain_mass
        for j, name in enumerate(chain):
            ids.append(name)
            parent_ids[name] = cur if j == 0 else chain[j - 1]
            levels[name] = n - 1 - j
            lams[name] = lam_side if j == 0 else Fraction(1)
            values[name] = scale * free[len(chain) - 1 - j]
        norm = norm + side_norm + values[cur].abs2()
        ledger.append(NormLedgerRow(
            n, side_norm, values[cur].abs2(), norm,
            Fraction(1) - Fraction(1, 2 ** n)))
    lams[f"x{depth}"] = Fraction(1)  # weight of the absent upward edge
    tree = TreeTruncation(
        ids=ids,
        top=ids.index(f"x{depth}"),
        parent=[None if parent_ids[i] is None else ids.index(parent_ids[i])
                for i in ids],
        level=[levels[i] for i in ids],
        lam=[lams[i] for i in ids],
        beta=[Fraction(0)] * len(ids))
    vals = {tree.index_of(name): w for name, w in values.items()}
    fld = SolutionField(tree, z, vals, frozenset(tree.interior()),
                        default_path(tree))
    if not fld.verify():
        raise ConstructionError("constructed solution has a nonzero residual")
    if not all(row.ok for row in ledger):
        raise ConstructionError("norm ledger bound violated")
    return SmallNormResult(tree, fld, default_path(tree), ledger)


def _free_chain_values(n: int, z: GaussianRational) -> list[GaussianRational]:
    """Values f_0..f_{n-1} of the unit-weight diagonal-free recursion at z,
    bottom of the side chain first."""
    out = [GaussianRational(Fraction(1), Fraction(0))]
    if n >= 2:
        out.append(z)
    for k in range(2, n):
        out.append(z * out[-1] - out[-2])
    return out


# ---------------------------------------------------------------------
# bounded homogeneous matrix plus degenerate path perturbation
# ---------------------------------------------------------------------


def default_path_weight(n: int) -> Fraction:
    """Geometric path weights 2^(n+1); their reciprocal sum converges and
    the first/second-kind values at 0 are square-summable, the classical
    marker of a non-essentially-selfadjoint path matrix."""
    return Fraction(2) ** (n + 1)


@dataclass
class PerturbedHomogeneousResult:
    tree: TreeTruncation
    base: TreeTruncation
    path: PathSelection
    branching: int
    base_weight: Fraction
    path_weights: list[Fraction]


def build_path_perturbed_homogeneous(d: int, depth: int,
                                     path_weight=default_path_weight
                                     ) -> PerturbedHomogeneousResult:
    """The sum of the norm-bounded homogeneous matrix (all weights
    d^(-1/2), zero diagonal; truncations stay inside [-2, 2]) and the
    degenerate path matrix with weights `path_weight(n)` along the
    leftmost path.  d must be a perfect square so the base weight stays
    rational."""
    root = math.isqrt(d)
    if root * root != d:
        raise ValueError("branching d must be a perfect square for an exact "
                         "base weight")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    w = Fraction(1, root)
    base = homogeneous_tree(d, depth, lam=w, beta=Fraction(0))
    path = default_path(base)
    weights = [Fraction(path_weight(n)) for n in range(len(path))]
    if any(x <= 0 for x in weights):
        raise ValueError("path weights must be positive")
    on_path = {v: k for k, v in enumerate(path.vertices)}
    lam = [base.lam[v] + weights[on_path[v]] if v in on_path else base.lam[v]
           for v in range(base.size)]
    tree = TreeTruncation(base.ids, base.top,
                          [base.parent[v] for v in range(base.size)],
                          base.level, lam, base.beta)
    return PerturbedHomogeneousResult(
        tree, base, default_path(tree), d, w, weights)


def bounded_base_radius_ok(d: int, depths) -> bool:
    """Exact check that the homogeneous base matrix truncations have no
    eigenvalue outside [-2, 2] at each depth."""
    root = math.isqrt(d)
    if root * root != d:
        raise ValueError("branching d must be a perfect square")
    w = Fraction(1, root)
    for depth in depths:
        base = homogeneous_tree(d, depth, lam=w, beta=Fraction(0))
        if eigenvalues_outside(base, Fraction(-2), Fraction(2)) != 0:
            return False
    return True


# ---------------------------------------------------------------------
# pendant path
# ---------------------------------------------------------------------


def ramp_pendant_rule(a: Fraction):
    """beta_n = (n^2 - a^2) / (2an): 1 + beta_n^2 is the square of
    mu_n = (n^2 + a^2) / (2an) for every n, so pendant weights stay
    rational for any rational a > 0."""
    a = Fraction(a)
    if a <= 0:
        raise ValueError("ramp rule needs a > 0")

    def beta(n: int) -> Fraction:
        return Fraction(n * n - a * a, 1) / (2 * a * n)

    def mu(n: int) -> Fraction:
        return Fraction(n * n + a * a, 1) / (2 * a * n)

    return beta, mu


def constant_pendant_rule(a: Fraction):
    """beta_n = a for all n; needs 1 + a^2 to be the square of a rational
    (choose a from a Pythagorean ratio such as 3/4)."""
    a = Fraction(a)
    m2 = 1 + a * a
    num, den = math.isqrt(m2.numerator), math.isqrt(m2.denominator)
    if num * num != m2.numerator or den * den != m2.denominator:
        raise ValueError(
            f"1 + a^2 = {m2} is not the square of a rational; pendant "
            f"weights would be irrational")
    mu_val = Fraction(num, den)
    return (lambda n: a), (lambda n: mu_val)


@dataclass
class PendantPathResult:
    tree: TreeTruncation
    pair: SolutionPair
    reduced_residuals: list[GaussianRational]
    pendant_norm_ok: bool
    classical_match: bool

    @property
    def ok(self) -> bool:
        return (all(not r for r in self.reduced_residuals)
                and self.pendant_norm_ok and self.classical_match)


def build_pendant_path(depth: int, rule: str = "ramp", a=Fraction(3, 4),
                       path_lam=Fraction(1)) -> PendantPathResult:
    """Path with zero diagonal plus one pendant under each path vertex;
    pendant n carries diagonal beta_n and coupling mu_n with
    mu_n^2 = 1 + beta_n^2.  At z = i the pendant values satisfy
    |v(y_{n-1})|^2 = |v(x_n)|^2 and the path values obey the classical
    recursion with diagonal -beta_n at the point 2i, both checked exactly."""
    if rule == "ramp":
        beta_rule, mu_rule = ramp_pendant_rule(Fraction(a))
    elif rule == "constant":
        beta_rule, mu_rule = constant_pendant_rule(Fraction(a))
    else:
        raise ValueError(f"unknown pendant rule {rule!r}")
    lam_rule = path_lam if callable(path_lam) else (
        lambda n, c=Fraction(path_lam): c)
    tree = decorated_path_tree(depth, path_lam=lam_rule,
                               path_beta=Fraction(0),
                               side_lam=mu_rule, side_beta=beta_rule)
    path = default_path(tree)
    pair = solve_pair(tree, path, I)
    v = pair.v.values
    xs = path.vertices
    two_i = GaussianRational(Fraction(0), Fraction(2))
    residuals = []
    for n in range(1, depth):
        lam_n = tree.lam[xs[n]]
        lam_p = tree.lam[xs[n - 1]]
        residuals.append(two_i * v[xs[n]]
                         - (lam_n * v[xs[n + 1]]
                            - beta_rule(n) * v[xs[n]]
                            + lam_p * v[xs[n - 1]]))
    norm_ok = True
    for n in range(1, depth + 1):
        y = tree.index_of(f"y{n - 1}")
        norm_ok = norm_ok and v[y].abs2() == v[xs[n]].abs2()
        # the pendant's own equation (pendants are cut; assert it directly)
        res = I * v[y] - tree.lam[y] * v[xs[n]] - tree.beta[y] * v[y]
        norm_ok = norm_ok and not res
    flipped = classical(lam_rule, lambda n: -beta_rule(n) if n >= 1
                        else Fraction(0), depth + 1)
    ref = recurrence_values(flipped, two_i, v[xs[0]], v[xs[1]], depth)
    classical_match = all(ref[n] == v[xs[n]] for n in range(depth + 1))
    return PendantPathResult(tree, pair, residuals, norm_ok, classical_match)


# ---------------------------------------------------------------------
# the real-value obstruction construction
# ---------------------------------------------------------------------


@dataclass
class ObstructionResult:
    tree: TreeTruncation
    kill_betas: list[Fraction]
    interior_dimensions: list[int]
    propagation: PropagationResult

    @property
    def ok(self) -> bool:
        return self.propagation.obstructed


def build_real_obstruction(depth: int) -> ObstructionResult:
    """Binary-branching matrix admitting no eigen-equation field at the
    real value 0 normalized at the path origin.

    Each side vertex y_k gets a positive-definite block below it (unit
    weights, diagonal 4), and its own diagonal is chosen so the unique
    interior solution of the block at 0 forces the value above y_k to
    vanish; the path origin carries diagonal 1 so the level-0 equation
    pins the origin value to zero, contradicting the normalization.
    The returned propagation result holds the proof of infeasibility."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    ids: list[str] = []
    parents: list[str | None] = []
    levels: list[int] = []
    lams: list[Fraction] = []
    betas: list[Fraction] = []

    def add(name, parent, level, lam, beta):
        ids.append(name)
        parents.append(parent)
        levels.append(level)
        lams.append(Fraction(lam))
        betas.append(Fraction(beta))

    for k in range(depth + 1):
        add(f"x{k}", f"x{k + 1}" if k < depth else None, k, 1,
            1 if k == 0 else 0)
    kill_betas: list[Fraction] = []
    dims: list[int] = []
    for k in range(depth):
        block = _binary_block(f"y{k}", k)
        beta_y, dim = _kill_beta(block)
        kill_betas.append(beta_y)
        dims.append(dim)
        add(f"y{k}", f"x{k + 1}", k, 1, beta_y)
        for name, parent, level in block.interior_rows:
            add(name, parent, level, 1, 4)
    index = {name: i for i, name in enumerate(ids)}
    tree = TreeTruncation(
        ids, index[f"x{depth}"],
        [None if p is None else index[p] for p in parents],
        levels, lams, betas)
    prop = propagate_real(tree, tree.top, Fraction(0))
    return ObstructionResult(tree, kill_betas, dims, prop)


@dataclass
class _Block:
    tree: TreeTruncation           # y_k with its binary block, y_k as top
    interior_rows: list[tuple[str, str, int]]  # (id, parent id, level)


def _binary_block(root: str, level: int) -> _Block:
    """The side vertex `root` at the given level with a full binary tree
    below it (two children per vertex down to level 0)."""
    ids = [root]
    parents: list[str | None] = [None]
    levels = [level]
    rows: list[tuple[str, str, int]] = []

    def grow(parent: str, lv: int):
        for j in range(2):
            name = f"{parent}.{j}"
            ids.append(name)
            parents.append(parent)
            levels.append(lv)
            rows.append((name, parent, lv))
            if lv > 0:
                grow(name, lv - 1)

    if level > 0:
        grow(root, level - 1)
    index = {name: i for i, name in enumerate(ids)}
    tree = TreeTruncation(
        ids, 0, [None if p is None else index[p] for p in parents],
        levels, [Fraction(1)] * len(ids),
        [Fraction(0) if i == 0 else Fraction(4) for i in range(len(ids))])
    return _Block(tree, rows)


def _kill_beta(block: _Block) -> tuple[Fraction, int]:
    """The diagonal value at the block root that forces the interior
    solution at 0 to vanish one level above the root.

    The block below the root is positive definite (checked), the interior
    solution space at 0 is one-dimensional (checked by elimination), and
    the root value of the family at 0 cannot vanish; the diagonal is then
    -(sum of child values)/(root value)."""
    t = block.tree
    for c in t.children[0]:
        sub = tree_inertia(t, Fraction(0), at=c)
        if sub.below != 0 or sub.at != 0:
            raise ConstructionError(
                "side block below the kill vertex is not positive definite")
    dim = _real_interior_dimension(t)
    if dim != 1:
        raise ConstructionError(
            f"interior solution space at 0 has dimension {dim}, expected 1")
    fam = family(t, 0)
    root_val = fam.self_poly[0](Fraction(0))
    if root_val == 0:
        raise ConstructionError(
            "family value at the kill vertex vanishes; excluded by the "
            "positive definite block")
    child_sum = sum((t.lam[c] * fam.entry(0, c)(Fraction(0))
                     for c in t.children[0]), Fraction(0))
    return -child_sum / root_val, dim


def _real_interior_dimension(t: TreeTruncation) -> int:
    """Solution-space dimension of the interior equations at z = 0 over the
    rationals (the real analog of the nonreal uniqueness dimension)."""
    from .solutions import _eliminate, _equation_row
    order = t.descendants(t.top)
    pos = {v: i for i, v in enumerate(order)}
    rows = [_equation_row(t, w, pos, Fraction(0), Fraction(0))
            for w in order if w != t.top and w not in t.cut]
    return len(order) - _eliminate(rows, len(order))


def small_norm_profile(depths) -> "GrowthProfile":
    """Norm profile of the norm-capped construction, measured on its own
    solution (stage norms of one deterministic build; stages are prefixes
    of deeper builds, so one build at the maximum depth covers all rows)."""
    from .solutions import GrowthProfile, GrowthRow
    depths = list(depths)
    if not depths or min(depths) < 1:
        raise ValueError("profile depths must be positive")
    top = max(depths)
    res = build_small_norm_pair(top)
    by_stage = {row.n: row.total_norm2 for row in res.ledger}
    tree = res.tree
    rows = []
    for d in depths:
        stage_top = tree.index_of(f"x{d}")
        carleman = sum((Fraction(1) / tree.lam[tree.index_of(f"x{k}")]
                        for k in range(d + 1)), Fraction(0))
        rows.append(GrowthRow(d, len(tree.descendants(stage_top)),
                              by_stage[d], carleman))
    increasing = all(a.norm2 < b.norm2 for a, b in zip(rows, rows[1:]))
    bounded = all(row.norm2 <= 1 for row in rows)
    carleman_up = all(a.carleman_sum < b.carleman_sum
                      for a, b in zip(rows, rows[1:]))
    return GrowthProfile(rows, increasing, bounded, carleman_up)


# ---------------------------------------------------------------------
# classical trend helper shared by the CLI and the acceptance suite
# ---------------------------------------------------------------------


def path_weight_square_sum_window(path_weight=default_path_weight,
                                  lower: int = 20, upper: int = 30
                                  ) -> Fraction:
    """Increase of the partial sums of p_n(0)^2 + q_n(0)^2 between the two
    indices for the diagonal-free classical matrix with the given path
    weights (exact)."""
    j = classical(path_weight, Fraction(0), upper + 1)
    return pq_square_sum(j, Fraction(0), upper) - pq_square_sum(j, Fraction(0), lower)
