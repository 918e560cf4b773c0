"""Finite truncations of one-ended trees carrying Jacobi coefficients.

A truncation is a finite rooted tree whose root (the ``top`` vertex) is
the vertex closest to the missing end.  Levels decrease downward: the
parent of a level-k vertex sits on level k+1, and every leaf sits on
level 0 unless it is flagged ``cut`` (meaning its children were truncated
away and its full neighborhood is not represented here).

Every vertex v stores the positive weight ``lambda(v)`` of the edge from
v toward its parent -- the top vertex keeps the weight of its edge toward
the absent vertex above it -- and a real diagonal value ``beta(v)``.

The JSON interchange document looks like::

    {"vertices": [{"id": "a", "parent": "x", "level": 0,
                   "lambda": "1/1", "beta": "0/1"}, ...],
     "top": "x", "top_lambda": "1/1"}

Rationals travel as ``"p/q"`` strings; serialization round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import ParseError, UnknownVertexError, ValidationError
from .exactmath import format_rational, parse_rational


class TreeTruncation:
    """Immutable finite truncation; vertices are dense integer indices."""

    __slots__ = ("ids", "top", "parent", "children", "level", "lam", "beta",
                 "cut", "_index")

    def __init__(self, ids: Sequence[str], top: int,
                 parent: Sequence[int | None], level: Sequence[int],
                 lam: Sequence[Fraction], beta: Sequence[Fraction],
                 cut: Sequence[int] = ()):
        self.ids = tuple(ids)
        self.top = top
        self.parent = tuple(parent)
        self.level = tuple(int(l) for l in level)
        self.lam = tuple(Fraction(x) for x in lam)
        self.beta = tuple(Fraction(x) for x in beta)
        self.cut = frozenset(cut)
        kids: list[list[int]] = [[] for _ in self.ids]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        self.children = tuple(tuple(k) for k in kids)
        self._index = {name: i for i, name in enumerate(self.ids)}
        self._validate()

    # -- basic structure ----------------------------------------------

    @property
    def size(self) -> int:
        return len(self.ids)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVertexError(name) from None

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def is_cut(self, v: int) -> bool:
        return v in self.cut

    def interior(self) -> Iterator[int]:
        """Vertices whose full neighborhood is present (not top, not cut)."""
        for v in range(self.size):
            if v != self.top and v not in self.cut:
                yield v

    def descendants(self, x: int) -> list[int]:
        """The subtree below (and including) x, in depth-first order."""
        out, stack = [], [x]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def post_order(self, x: int | None = None) -> list[int]:
        """Children-before-parent ordering of the subtree at x (default top)."""
        return self._post_order(self.top if x is None else x)

    def _post_order(self, root: int) -> list[int]:
        out, stack = [], [(root, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                out.append(v)
            else:
                stack.append((v, True))
                for c in reversed(self.children[v]):
                    stack.append((c, False))
        return out

    def subtree(self, x: int) -> "TreeTruncation":
        """The truncation below x, with x as its top; coefficients inherited."""
        if not 0 <= x < self.size:
            raise UnknownVertexError(x)
        order = self.descendants(x)
        remap = {v: i for i, v in enumerate(order)}
        return TreeTruncation(
            ids=[self.ids[v] for v in order],
            top=0,
            parent=[None if v == x else remap[self.parent[v]] for v in order],
            level=[self.level[v] for v in order],
            lam=[self.lam[v] for v in order],
            beta=[self.beta[v] for v in order],
            cut=[remap[v] for v in order if v in self.cut],
        )

    # -- validation ---------------------------------------------------

    def _validate(self):
        n = self.size
        if n == 0:
            raise ValidationError("a truncation needs at least one vertex")
        if len(set(self.ids)) != n:
            raise ValidationError("vertex ids are not unique")
        if not 0 <= self.top < n:
            raise ValidationError("top index out of range")
        if self.parent[self.top] is not None:
            raise ValidationError(f"top vertex {self.ids[self.top]!r} has a parent")
        for v in range(n):
            name = self.ids[v]
            p = self.parent[v]
            if v != self.top:
                if p is None:
                    raise ValidationError(f"vertex {name!r} has no parent and is not top")
                if not 0 <= p < n:
                    raise ValidationError(f"vertex {name!r} has an unknown parent")
                if self.level[p] != self.level[v] + 1:
                    raise ValidationError(
                        f"vertex {name!r}: parent level must be its level + 1")
            if self.level[v] < 0:
                raise ValidationError(f"vertex {name!r} has negative level")
            if self.lam[v] <= 0:
                raise ValidationError(f"vertex {name!r} has nonpositive lambda")
            if not self.children[v] and self.level[v] > 0 and v not in self.cut:
                raise ValidationError(
                    f"vertex {name!r} is a childless level-{self.level[v]} vertex "
                    f"without a cut flag")
        # connectivity: every vertex must reach top through parent links
        for v in range(n):
            seen = set()
            w = v
            while w != self.top:
                if w in seen:
                    raise ValidationError(f"cycle through vertex {self.ids[v]!r}")
                seen.add(w)
                w = self.parent[w]

    # -- serialization ------------------------------------------------

    def to_spec(self) -> dict:
        rows = []
        for v in range(self.size):
            row = {"id": self.ids[v], "level": self.level[v],
                   "beta": format_rational(self.beta[v])}
            if v != self.top:
                row["parent"] = self.ids[self.parent[v]]
                row["lambda"] = format_rational(self.lam[v])
            if v in self.cut:
                row["cut"] = True
            rows.append(row)
        return {"vertices": rows, "top": self.ids[self.top],
                "top_lambda": format_rational(self.lam[self.top])}

    def to_json(self) -> str:
        return json.dumps(self.to_spec(), indent=2, sort_keys=True) + "\n"

    def __repr__(self):
        return (f"TreeTruncation(top={self.ids[self.top]!r}, "
                f"size={self.size})")


def build_from_spec(doc) -> TreeTruncation:
    """Build and validate a truncation from a JSON string or parsed dict."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("tree document must be a JSON object")
    try:
        rows = doc["vertices"]
        top_id = doc["top"]
        top_lambda = parse_rational(doc["top_lambda"])
    except KeyError as exc:
        raise ParseError(f"tree document missing field {exc.args[0]!r}") from None
    if not isinstance(rows, list) or not rows:
        raise ParseError("'vertices' must be a non-empty list")
    ids, parent_ids, level, lam, beta, cut = [], [], [], [], [], []
    for row in rows:
        if not isinstance(row, dict) or "id" not in row:
            raise ParseError(f"bad vertex row: {row!r}")
        ids.append(str(row["id"]))
        parent_ids.append(row.get("parent"))
        try:
            level.append(int(row["level"]))
            beta.append(parse_rational(str(row["beta"])))
            lam.append(parse_rational(str(row["lambda"])) if "parent" in row
                       else top_lambda)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad vertex row {row.get('id')!r}: {exc}") from None
        cut.append(bool(row.get("cut", False)))
    index = {name: i for i, name in enumerate(ids)}
    if top_id not in index:
        raise ValidationError(f"top vertex {top_id!r} not among the vertices")
    parent = []
    for name, p in zip(ids, parent_ids):
        if p is None:
            if name != top_id:
                raise ValidationError(f"vertex {name!r} has no parent and is not top")
            parent.append(None)
        else:
            if p not in index:
                raise ValidationError(f"vertex {name!r} has unknown parent {p!r}")
            parent.append(index[p])
    return TreeTruncation(ids, index[top_id], parent, level, lam, beta,
                          [i for i, c in enumerate(cut) if c])


# ---------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------

Rule = Callable[..., Fraction]


def _as_rule(value) -> Rule:
    if callable(value):
        return value
    const = Fraction(value)
    return lambda *args: const


def path_tree(depth: int, lam=Fraction(1), beta=Fraction(0)) -> TreeTruncation:
    """The degenerate tree: a single path x_0 ... x_depth, top at x_depth.

    `lam`/`beta` are constants or callables of the level n.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    lam_r, beta_r = _as_rule(lam), _as_rule(beta)
    n = depth + 1
    ids = [f"x{k}" for k in range(n)]
    parent = [k + 1 if k < depth else None for k in range(n)]
    return TreeTruncation(
        ids=ids, top=depth, parent=parent, level=list(range(n)),
        lam=[lam_r(k) for k in range(n)], beta=[beta_r(k) for k in range(n)])


def homogeneous_tree(d: int, depth: int, lam=Fraction(1),
                     beta=Fraction(0)) -> TreeTruncation:
    """Truncation of the homogeneous tree: every vertex above level 0 has
    d children.  `lam`/`beta` may be callables of (level, address) where
    the address is the tuple of child positions walked down from the top.
    """
    if d < 1:
        raise ValueError("branching d must be >= 1")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    lam_r, beta_r = _as_rule(lam), _as_rule(beta)
    ids, parent, level, lams, betas = [], [], [], [], []

    def add(address: tuple[int, ...], parent_idx: int | None) -> int:
        idx = len(ids)
        ids.append("r" + "".join(f".{i}" for i in address))
        parent.append(parent_idx)
        lv = depth - len(address)
        level.append(lv)
        lam_v = Fraction(lam_r(lv, address))
        if lam_v <= 0:
            raise ValueError(f"rule produced nonpositive lambda at {ids[idx]!r}")
        lams.append(lam_v)
        betas.append(Fraction(beta_r(lv, address)))
        if lv > 0:
            for i in range(d):
                add(address + (i,), idx)
        return idx

    add((), None)
    return TreeTruncation(ids, 0, parent, level, lams, betas)


def decorated_path_tree(depth: int, path_lam=Fraction(1), path_beta=Fraction(0),
                        side_lam=Fraction(1), side_beta=Fraction(0)) -> TreeTruncation:
    """A path x_0 ... x_depth with one pendant leaf y_{n-1} under each x_n.

    Path rules are callables of the path level n; pendant rules are
    callables of n where the pendant y_{n-1} hangs under x_n.  Pendants
    above level 0 are childless by design (the operator under study keeps
    only their coupling to the path), so they carry the cut flag.
    """
    if depth < 1:
        raise ValueError("a decorated path needs depth >= 1")
    pl, pb = _as_rule(path_lam), _as_rule(path_beta)
    sl, sb = _as_rule(side_lam), _as_rule(side_beta)
    ids, parent, level, lams, betas, cut = [], [], [], [], [], []
    for k in range(depth + 1):
        ids.append(f"x{k}")
        parent.append(k + 1 if k < depth else None)
        level.append(k)
        lams.append(Fraction(pl(k)))
        betas.append(Fraction(pb(k)))
    for n in range(1, depth + 1):
        if n > 1:
            cut.append(len(ids))
        ids.append(f"y{n - 1}")
        parent.append(n)
        level.append(n - 1)
        lams.append(Fraction(sl(n)))
        betas.append(Fraction(sb(n)))
    return TreeTruncation(ids, depth, parent, level, lams, betas, cut)


def generate(kind: str, **kwargs) -> TreeTruncation:
    """Dispatch on a generator name: homogeneous, path, decorated_path."""
    table = {"homogeneous": homogeneous_tree, "path": path_tree,
             "decorated_path": decorated_path_tree}
    if kind not in table:
        raise ValueError(f"unknown generator {kind!r}")
    return table[kind](**kwargs)


# ---------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PathSelection:
    """An ascending path x_0, x_1, ..., x_n with level(x_k) = k."""

    tree: TreeTruncation
    vertices: tuple[int, ...]

    def __post_init__(self):
        t = self.tree
        vs = self.vertices
        if not vs:
            raise ValidationError("empty path")
        for k, v in enumerate(vs):
            if t.level[v] != k:
                raise ValidationError(
                    f"path vertex {t.ids[v]!r} at position {k} has level {t.level[v]}")
            if k + 1 < len(vs) and t.parent[v] != vs[k + 1]:
                raise ValidationError(
                    f"path vertices {t.ids[v]!r} and {t.ids[vs[k + 1]]!r} "
                    f"are not adjacent")

    def __len__(self):
        return len(self.vertices)

    def __getitem__(self, k):
        return self.vertices[k]

    def reaches_top(self) -> bool:
        return self.vertices[-1] == self.tree.top

    @property
    def ids(self) -> list[str]:
        return [self.tree.ids[v] for v in self.vertices]


def default_path(tree: TreeTruncation, top: int | None = None) -> PathSelection:
    """Descend from the top to level 0, preferring the first child that
    reaches level 0; the result runs upward from x_0 to the top."""
    root = tree.top if top is None else top
    reaches: dict[int, bool] = {}
    for v in tree._post_order(root):
        if tree.level[v] == 0:
            reaches[v] = True
        else:
            reaches[v] = any(reaches[c] for c in tree.children[v])
    if not reaches[root]:
        raise ValidationError(
            f"no level-0 vertex below {tree.ids[root]!r}; cannot select a path")
    chain = [root]
    v = root
    while tree.level[v] > 0:
        v = next(c for c in tree.children[v] if reaches[c])
        chain.append(v)
    return PathSelection(tree, tuple(reversed(chain)))


def path_from_ids(tree: TreeTruncation, names: Sequence[str]) -> PathSelection:
    return PathSelection(tree, tuple(tree.index_of(n) for n in names))
