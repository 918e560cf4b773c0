import random
from fractions import Fraction as F

from conftest import (cut_shape_corpus, exhaustive_corpus, random_corpus,
                      random_lambda, random_beta)
from treejacobi.exactmath import (ONE, Poly, X, count_real_roots,
                                  square_free_decomposition)
from treejacobi.spectra import (char_poly, count_negative_eigenvalues,
                                eigenvalues_outside,
                                eigenvector_witness_report,
                                spectral_description, tree_inertia,
                                tree_solve, truncated_operator,
                                verify_spectral_identity)
from treejacobi.treecore import build_from_spec, homogeneous_tree, path_tree
from treejacobi.treepoly import family

STAR = build_from_spec("""
{"vertices": [
  {"id": "a", "parent": "x", "level": 0, "lambda": "1/1", "beta": "0/1"},
  {"id": "b", "parent": "x", "level": 0, "lambda": "1/1", "beta": "0/1"},
  {"id": "x", "level": 1, "beta": "0/1"}],
 "top": "x", "top_lambda": "1/1"}
""")


def _lagrange_char_poly(tree):
    """Independent oracle: det(xI - J) sampled at n+1 rational points by
    dense elimination, then Lagrange interpolation."""
    op = truncated_operator(tree)
    n = len(op.vertices)
    points = [F(k) for k in range(n + 1)]

    def det_at(x):
        mat = [[(x if i == j else F(0)) - op.matrix[i][j] for j in range(n)]
               for i in range(n)]
        det = F(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
            if piv is None:
                return F(0)
            if piv != col:
                mat[col], mat[piv] = mat[piv], mat[col]
                det = -det
            det *= mat[col][col]
            for r in range(col + 1, n):
                f = mat[r][col] / mat[col][col]
                if f:
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
        return det

    acc = Poly()
    for i, xi in enumerate(points):
        term = Poly([det_at(xi)])
        for jj, xj in enumerate(points):
            if jj != i:
                term = term * Poly([-xj, 1]) * (F(1) / (xi - xj))
        acc = acc + term
    return acc


def test_char_poly_examples():
    assert char_poly(STAR) == X * X * X - 2 * X
    assert char_poly(path_tree(2)) == X * X * X - 2 * X
    leaf = build_from_spec('{"vertices": [{"id": "v", "level": 0, "beta": "7/1"}],'
                           ' "top": "v", "top_lambda": "1/1"}')
    assert char_poly(leaf) == X - 7 * ONE


def test_char_poly_against_interpolated_determinant():
    for tree in exhaustive_corpus(5) + random_corpus(57, 8, max_vertices=8):
        assert char_poly(tree) == _lagrange_char_poly(tree)


def test_matrix_symmetry_and_pattern():
    op = truncated_operator(STAR)
    n = len(op.vertices)
    for i in range(n):
        for j in range(n):
            assert op.matrix[i][j] == op.matrix[j][i]
    # off-diagonal entries exactly where edges are
    x = op.vertices.index(STAR.index_of("x"))
    a = op.vertices.index(STAR.index_of("a"))
    assert op.matrix[x][a] == 1 and op.matrix[a][a] == 0


def test_spectral_description_star():
    desc = spectral_description(family(STAR))
    assert desc.top_roots.count() == 2
    assert len(desc.shared) == 1
    assert desc.shared[0].vertex == "x"
    assert desc.shared[0].factor == X
    assert desc.shared[0].roots.count_with_multiplicity() == 1


def test_spectral_description_path_and_distinct():
    assert spectral_description(family(path_tree(3))).shared == ()
    distinct = build_from_spec("""
    {"vertices": [
      {"id": "a", "parent": "x", "level": 0, "lambda": "1/1", "beta": "1/1"},
      {"id": "b", "parent": "x", "level": 0, "lambda": "1/1", "beta": "2/1"},
      {"id": "x", "level": 1, "beta": "0/1"}],
     "top": "x", "top_lambda": "1/1"}
    """)
    assert spectral_description(family(distinct)).shared == ()


def test_identity_exhaustive_and_cut_shapes():
    for tree in exhaustive_corpus(5) + cut_shape_corpus(5):
        assert verify_spectral_identity(family(tree))


def test_negative_counts():
    assert count_negative_eigenvalues(STAR) == 1
    leaf = build_from_spec('{"vertices": [{"id": "v", "level": 0, "beta": "-1/1"}],'
                           ' "top": "v", "top_lambda": "1/1"}')
    assert count_negative_eigenvalues(leaf) == 1
    star4 = homogeneous_tree(2, 1, beta=F(4))
    assert count_negative_eigenvalues(star4) == 0


def test_inertia_matches_char_poly_counts():
    trees = exhaustive_corpus(5) + random_corpus(77, 12, max_vertices=10)
    sigmas = [F(0), F(1), F(-1), F(2), F(-2), F(1, 2), F(4)]
    for tree in trees:
        p = char_poly(tree)
        for sigma in sigmas:
            inertia = tree_inertia(tree, sigma)
            # multiplicity of sigma as an eigenvalue
            q, at = p, 0
            while q(sigma) == 0:
                q = q.exact_div(Poly([-sigma, 1]))
                at += 1
            below = 0
            for g, mult in square_free_decomposition(q):
                if g.degree >= 1:
                    gg = g
                    if gg(sigma) == 0:
                        gg = gg.exact_div(Poly([-sigma, 1]))
                    if gg.degree >= 1:
                        below += mult * count_real_roots(gg, None, sigma)
            assert inertia.at == at, (tree.ids, sigma)
            assert inertia.below == below, (tree.ids, sigma)
            assert inertia.below + inertia.at + inertia.above == tree.size


def test_inertia_zero_pivot_path():
    # star at sigma = 0 walks through the zero-pivot pairing
    assert tree_inertia(STAR, F(0)) == tree_inertia(STAR, F(0)).__class__(1, 1, 1)
    assert eigenvalues_outside(STAR, F(-2), F(2)) == 0
    assert eigenvalues_outside(STAR, F(-1), F(1)) == 2


def test_identity_random_corpus():
    for tree in random_corpus(101, 30):
        assert verify_spectral_identity(family(tree))


def test_eigenvector_witnesses():
    checks = eigenvector_witness_report(family(STAR))
    assert len(checks) == 1 and checks[0].ok
    # three identical children share a root with multiplicity 3
    triple = homogeneous_tree(3, 1)
    checks = eigenvector_witness_report(family(triple))
    assert len(checks) == 3 and all(c.ok for c in checks)
    # deeper shared structure: identical subtrees of height 2
    deep = homogeneous_tree(2, 2)
    checks = eigenvector_witness_report(family(deep))
    assert checks and all(c.ok for c in checks)
    for tree in random_corpus(13, 10):
        assert all(c.ok for c in eigenvector_witness_report(family(tree)))


def test_spectral_description_multiplicities_match_char_poly():
    # engineered high multiplicity: four identical subtrees of height 2
    # under one vertex contribute each shared root three extra times
    tall = homogeneous_tree(4, 2, lam=F(1, 2), beta=F(1, 3))
    trees = [tall, homogeneous_tree(3, 2), STAR] + random_corpus(85, 8)
    for tree in trees:
        fam = family(tree)
        p = char_poly(tree)
        desc = spectral_description(fam)
        # every described root interval carries exactly the multiplicity
        # the characteristic polynomial has there
        assert all(r.multiplicity == 1 for r in desc.top_roots.roots)
        described = [(r, 1) for r in desc.top_roots.roots]
        for shared in desc.shared:
            described.extend((r, r.multiplicity) for r in shared.roots.roots)
        total = 0
        for r, mult in described:
            if r.lo == r.hi:
                got = 0
                q = p
                while q(r.lo) == 0:
                    q = q.exact_div(Poly([-r.lo, 1]))
                    got += 1
            else:
                got = 0
                for g, m in square_free_decomposition(p):
                    gg = g
                    if gg(r.lo) == 0:
                        gg = gg.exact_div(Poly([-r.lo, 1]))
                    if gg.degree >= 1:
                        got += m * count_real_roots(gg, r.lo, r.hi)
            # intervals from different factors may overlap between the two
            # parts of the description, so compare per-entry lower bounds
            assert got >= mult
            total += mult
        assert total == tree.size  # all eigenvalues accounted for


def test_char_poly_of_forest_is_product():
    # removing a vertex splits the subtree into the forest of its children;
    # the determinant of the block-diagonal matrix is the product of blocks
    for tree in random_corpus(63, 6, max_vertices=9):
        p = char_poly(tree)
        for v in range(tree.size):
            if not tree.children[v]:
                continue
            prod = ONE
            for c in tree.children[v]:
                prod = prod * char_poly(tree, at=c)
            # sample the block-diagonal determinant at a few points
            for x in (F(0), F(1), F(-2), F(5, 3)):
                det = F(1)
                for c in tree.children[v]:
                    det *= _lagrange_char_poly_value(tree, c, x)
                assert prod(x) == det


def _lagrange_char_poly_value(tree, anchor, x):
    sub = tree.subtree(anchor)
    return _lagrange_char_poly(sub)(x)


def test_tree_solve_against_dense():
    rng = random.Random(5)
    for tree in random_corpus(21, 8, max_vertices=9):
        n = tree.size
        # positive definite system: diagonally dominant with edge weights
        diag = {v: F(1) + tree.lam[v] + sum(tree.lam[c] for c in tree.children[v])
                for v in range(n)}
        off = {v: -tree.lam[v] for v in range(n)}
        rhs = {v: random_beta(rng) for v in range(n)}
        x = tree_solve(tree, diag, off, rhs)
        for v in range(n):
            acc = diag[v] * x[v]
            if tree.parent[v] is not None:
                acc += off[v] * x[tree.parent[v]]
            for c in tree.children[v]:
                acc += off[c] * x[c]
            assert acc == rhs.get(v, F(0))
