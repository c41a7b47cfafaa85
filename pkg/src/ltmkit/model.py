"""Core types for latent tree analysis: variables, tree models, datasets.

A latent tree model is an undirected tree over categorical variables where
every observed ("manifest") variable is a leaf and internal structure is
carried by unobserved ("latent") variables.  Parameters are stored against
a rooted orientation: a marginal distribution for the root and, for every
other variable, one conditional distribution per parent state.

Models and datasets are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-9

MANIFEST = "manifest"
LATENT = "latent"


@dataclass(frozen=True, order=True)
class Variable:
    """A categorical variable with a stable unique id and a display name."""

    id: str
    name: str
    cardinality: int
    kind: str

    def __post_init__(self):
        if self.cardinality < 2:
            raise ValueError(f"variable {self.id!r}: cardinality must be >= 2")
        if self.kind not in (MANIFEST, LATENT):
            raise ValueError(f"variable {self.id!r}: kind must be 'manifest' or 'latent'")

    @property
    def is_latent(self) -> bool:
        return self.kind == LATENT


def manifest_var(vid: str, cardinality: int = 2, name: str | None = None) -> Variable:
    return Variable(vid, vid if name is None else name, cardinality, MANIFEST)


def latent_var(vid: str, cardinality: int = 2, name: str | None = None) -> Variable:
    return Variable(vid, vid if name is None else name, cardinality, LATENT)


def _canonical_edges(edges) -> tuple[tuple[str, str], ...]:
    out = set()
    for a, b in edges:
        if a == b:
            raise ValueError(f"self-loop edge on {a!r}")
        out.add((a, b) if a < b else (b, a))
    return tuple(sorted(out))


class LatentTreeModel:
    """Tree-structured categorical model with conditional probability tables.

    ``tables[root]`` is the root marginal, shape ``(c_root,)``.  For every
    other variable v with parent u (the neighbor toward the root),
    ``tables[v][j, k] = P(v = k | u = j)``; each row is a distribution
    (a "column" of the CPT in classical orientation).
    """

    def __init__(self, variables: Iterable[Variable], edges, root: str, tables: Mapping[str, np.ndarray]):
        vs = sorted(variables)
        by_id: dict[str, Variable] = {}
        for v in vs:
            if v.id in by_id:
                raise ValueError(f"duplicate variable id {v.id!r}")
            by_id[v.id] = v
        self._vars = by_id
        self.edges = _canonical_edges(edges)
        for a, b in self.edges:
            if a not in by_id or b not in by_id:
                raise ValueError(f"edge ({a!r}, {b!r}) references an unknown variable")
        if root not in by_id:
            raise ValueError(f"root {root!r} is not a variable of the model")
        self.root = root
        tbl = {}
        for vid, t in tables.items():
            if vid not in by_id:
                raise ValueError(f"table for unknown variable {vid!r}")
            arr = np.array(t, dtype=float)
            arr.setflags(write=False)
            tbl[vid] = arr
        self.tables = tbl

        # adjacency, and a rooted orientation when the edge set is a tree
        adj: dict[str, list[str]] = {vid: [] for vid in by_id}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for vid in adj:
            adj[vid].sort()
        self._adj = adj
        self._orient()
        self._plan_cache = None

    def _orient(self):
        """BFS from the root; tolerates cyclic/disconnected edge sets."""
        parent: dict[str, str | None] = {self.root: None}
        order = [self.root]
        children: dict[str, list[str]] = {vid: [] for vid in self._vars}
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for w in self._adj[u]:
                if w not in parent:
                    parent[w] = u
                    children[u].append(w)
                    order.append(w)
        self._parent = parent
        self._children = children
        self._order = tuple(order)  # root-first; may not span invalid models

    # -- structure accessors -------------------------------------------------

    @property
    def variables(self) -> Mapping[str, Variable]:
        return self._vars

    def var(self, vid: str) -> Variable:
        return self._vars[vid]

    @property
    def manifest_ids(self) -> tuple[str, ...]:
        return tuple(v for v in self._vars if self._vars[v].kind == MANIFEST)

    @property
    def latent_ids(self) -> tuple[str, ...]:
        return tuple(v for v in self._vars if self._vars[v].kind == LATENT)

    def neighbors(self, vid: str) -> tuple[str, ...]:
        return tuple(self._adj[vid])

    def degree(self, vid: str) -> int:
        return len(self._adj[vid])

    def parent(self, vid: str) -> str | None:
        return self._parent.get(vid)

    def children(self, vid: str) -> tuple[str, ...]:
        return tuple(self._children[vid])

    def topo_order(self) -> tuple[str, ...]:
        """Variables, root first, parents before children."""
        return self._order

    def cardinality(self, vid: str) -> int:
        return self._vars[vid].cardinality

    def expected_table_shape(self, vid: str) -> tuple[int, ...]:
        if vid == self.root:
            return (self.cardinality(vid),)
        p = self.parent(vid)
        if p is None:
            return (self.cardinality(vid),)  # unreachable node; shape unchecked
        return (self.cardinality(p), self.cardinality(vid))

    def free_parameters(self) -> int:
        """Count of free parameters of the rooted parameterization."""
        d = self.cardinality(self.root) - 1
        for vid in self._vars:
            if vid == self.root:
                continue
            p = self.parent(vid)
            if p is not None:
                d += self.cardinality(p) * (self.cardinality(vid) - 1)
        return d

    def with_tables(self, tables: Mapping[str, np.ndarray]) -> "LatentTreeModel":
        """Same structure, replacing the tables of the given variables."""
        merged = dict(self.tables)
        merged.update(tables)
        return LatentTreeModel(self._vars.values(), self.edges, self.root, merged)

    def __repr__(self):
        return (f"LatentTreeModel({len(self._vars)} vars, {len(self.edges)} edges, "
                f"root={self.root!r})")


def validate_model(model: LatentTreeModel) -> list[str]:
    """Check every structural and parametric invariant; return violations.

    An empty list means the model is valid.  Each entry names the broken
    invariant and the offending element.
    """
    report: list[str] = []
    vars_ = model.variables
    n = len(vars_)

    # tree shape: connected and acyclic (spanning tree has n-1 edges)
    reached = set(model.topo_order())
    if len(reached) < n:
        missing = sorted(set(vars_) - reached)
        report.append(f"not connected: unreachable from root: {missing}")
    if len(model.edges) > n - 1:
        report.append("cycle: edge set has more edges than a spanning tree")
    elif len(model.edges) < n - 1 and len(reached) == n:
        report.append("cycle: edge count inconsistent with a tree")

    latents = [v for v in vars_.values() if v.kind == LATENT]
    if latents and vars_[model.root].kind != LATENT:
        report.append(f"root not latent: {model.root!r}")

    for v in vars_.values():
        deg = model.degree(v.id)
        if v.kind == MANIFEST and deg > 1:
            report.append(f"manifest variable not a leaf: {v.id!r} has degree {deg}")
        if v.kind == LATENT and deg == 0:
            report.append(f"latent variable isolated: {v.id!r}")
        if v.kind == LATENT and deg == 1:
            nb = model.neighbors(v.id)[0]
            if vars_[nb].kind == LATENT:
                report.append(
                    f"unidentifiable latent leaf: {v.id!r} has no manifest neighbor")

    # tables: presence, shape, range, normalization
    for vid, v in vars_.items():
        t = model.tables.get(vid)
        if t is None:
            report.append(f"missing table: {vid!r}")
            continue
        shape = model.expected_table_shape(vid)
        if t.shape != shape:
            report.append(f"table shape mismatch: {vid!r} has {t.shape}, expected {shape}")
            continue
        if not np.all(np.isfinite(t)):
            report.append(f"table not finite: {vid!r}")
            continue
        if np.any(t < 0) or np.any(t > 1):
            report.append(f"table entries outside [0, 1]: {vid!r}")
        sums = t.sum(axis=-1)
        bad = np.flatnonzero(np.abs(np.atleast_1d(sums) - 1.0) > NORMALIZATION_TOL)
        for j in bad:
            report.append(
                f"column not normalized: {vid!r}"
                + (f" given parent state {j}" if vid != model.root else "")
                + f" sums to {np.atleast_1d(sums)[j]:.6g}")
    return report


def ensure_valid(model: LatentTreeModel) -> LatentTreeModel:
    violations = validate_model(model)
    if violations:
        raise ValueError("invalid model: " + "; ".join(violations))
    return model


class CategoricalDataset:
    """Distinct observed cases with multiplicities over a manifest schema.

    Duplicate rows are consolidated at construction, so ingesting the same
    case twice is indistinguishable from one case with multiplicity 2.
    """

    def __init__(self, schema: Sequence[Variable], values, counts=None):
        schema = tuple(schema)
        seen = set()
        for v in schema:
            if v.kind != MANIFEST:
                raise ValueError(f"dataset schema variable {v.id!r} is not manifest")
            if v.id in seen:
                raise ValueError(f"duplicate schema variable id {v.id!r}")
            seen.add(v.id)
        self.schema = schema
        vals = np.asarray(values, dtype=np.int64)
        if vals.size == 0:
            vals = vals.reshape(0, len(schema))
        if vals.ndim != 2 or vals.shape[1] != len(schema):
            raise ValueError(f"case array has shape {vals.shape}, expected (*, {len(schema)})")
        if counts is None:
            counts = np.ones(len(vals), dtype=np.int64)
        else:
            counts = np.asarray(counts, dtype=np.int64)
            if counts.shape != (len(vals),):
                raise ValueError("counts must align with case rows")
            if np.any(counts < 1):
                raise ValueError("multiplicities must be >= 1")
        for j, v in enumerate(schema):
            if len(vals) and (vals[:, j].min() < 0 or vals[:, j].max() >= v.cardinality):
                raise ValueError(
                    f"value out of range for variable {v.id!r} (cardinality {v.cardinality})")
        # consolidate duplicates; np.unique sorts rows, fixing iteration order
        if len(vals):
            uniq, inverse = np.unique(vals, axis=0, return_inverse=True)
            agg = np.zeros(len(uniq), dtype=np.int64)
            np.add.at(agg, inverse.ravel(), counts)
            vals, counts = uniq, agg
        vals.setflags(write=False)
        counts.setflags(write=False)
        self.values = vals
        self.counts = counts
        self.total_n = int(counts.sum())
        self._col = {v.id: j for j, v in enumerate(schema)}

    @property
    def n_cases(self) -> int:
        return len(self.values)

    @property
    def variable_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.schema)

    def column_index(self, vid: str) -> int:
        return self._col[vid]

    def column(self, vid: str) -> np.ndarray:
        return self.values[:, self._col[vid]]

    def case_mapping(self, i: int) -> dict[str, int]:
        """Case i as an id -> value mapping."""
        row = self.values[i]
        return {v.id: int(row[j]) for j, v in enumerate(self.schema)}

    def restrict(self, ids: Sequence[str]) -> "CategoricalDataset":
        """Project onto a subset of variables, re-consolidating duplicates."""
        cols = [self._col[i] for i in ids]
        schema = tuple(self.schema[c] for c in cols)
        return CategoricalDataset(schema, self.values[:, cols], self.counts)

    def __eq__(self, other):
        if not isinstance(other, CategoricalDataset):
            return NotImplemented
        return (self.schema == other.schema
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.counts, other.counts))

    def __repr__(self):
        return (f"CategoricalDataset({len(self.schema)} vars, {self.n_cases} distinct "
                f"cases, N={self.total_n})")


def forward_sample(model: LatentTreeModel, n: int, seed: int) -> CategoricalDataset:
    """Draw n i.i.d. cases by ancestral sampling; latent values discarded.

    Deterministic given (model, n, seed).  The returned schema lists the
    model's manifest variables in id order.
    """
    ensure_valid(model)
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    states: dict[str, np.ndarray] = {}
    for vid in model.topo_order():
        card = model.cardinality(vid)
        table = model.tables[vid]
        if vid == model.root:
            cum = np.cumsum(table)
            states[vid] = np.searchsorted(cum, rng.random(n), side="right").clip(0, card - 1)
        else:
            rows = np.cumsum(table, axis=1)[states[model.parent(vid)]]
            u = rng.random(n)
            states[vid] = (u[:, None] >= rows).sum(axis=1).clip(0, card - 1)
    ids = sorted(model.manifest_ids)
    schema = tuple(model.var(v) for v in ids)
    if n == 0:
        return CategoricalDataset(schema, np.zeros((0, len(ids)), dtype=np.int64))
    cols = np.stack([states[v] for v in ids], axis=1)
    return CategoricalDataset(schema, cols)
