"""Exact inference on latent tree models via two-pass message passing.

All accumulation happens in log space with a max-shift per message, so
cases whose probability underflows double precision (routine with ~100
binary leaves) are handled exactly up to float rounding.  A brute-force
enumeration oracle over the full joint is provided for testing.

Evidence is always a complete assignment of (a subset of) the manifest
variables; unobserved manifest leaves marginalize out implicitly.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .model import CategoricalDataset, LatentTreeModel

_NEG_INF = -np.inf


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def _log_push(logx: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Row-wise log( exp(logx) @ mat ) with a max shift per row.

    logx: (n, a); mat: (a, b) nonnegative.  Returns (n, b).
    """
    m = logx.max(axis=1)
    shift = np.where(np.isneginf(m), 0.0, m)
    lin = np.exp(logx - shift[:, None]) @ mat
    with np.errstate(divide="ignore"):
        return np.log(lin) + m[:, None]


def _logsumexp_rows(logx: np.ndarray) -> np.ndarray:
    m = logx.max(axis=1)
    shift = np.where(np.isneginf(m), 0.0, m)
    with np.errstate(divide="ignore"):
        return np.log(np.exp(logx - shift[:, None]).sum(axis=1)) + m


class TreePass:
    """Shared two-pass computation over all distinct cases of a dataset.

    The upward pass yields per-case log-likelihoods; the downward pass (run
    on demand) yields node and edge posteriors as needed by EM and MAP
    queries.  Pure function of (model, dataset); intermediate messages are
    cached on the instance.
    """

    def __init__(self, model: LatentTreeModel, dataset: CategoricalDataset):
        unknown = set(dataset.variable_ids) - set(model.manifest_ids)
        if unknown:
            raise ValueError(f"dataset variables not in model: {sorted(unknown)}")
        self.model = model
        self.dataset = dataset
        self._observed = {vid: dataset.column(vid) for vid in dataset.variable_ids}
        self._log_tables = {vid: _log(t) for vid, t in model.tables.items()}
        self._up_in: dict[str, np.ndarray] = {}
        self._up_msg: dict[str, np.ndarray] = {}
        self._down: dict[str, np.ndarray] | None = None
        self._run_upward()

    # -- upward pass -----------------------------------------------------

    def _run_upward(self):
        model, n = self.model, self.dataset.n_cases
        arange_n = np.arange(n)
        for vid in reversed(model.topo_order()):
            card = model.cardinality(vid)
            kids = model.children(vid)
            inner = np.zeros((n, card))
            for c in kids:
                inner += self._up_msg[c]
            self._up_in[vid] = inner
            if vid == model.root:
                continue
            var = model.var(vid)
            logt = self._log_tables[vid]
            if var.kind == "manifest":
                obs = self._observed.get(vid)
                if obs is None:
                    msg = np.zeros((n, logt.shape[0]))  # sums out to ones
                else:
                    msg = logt.T[obs]
                    if kids:
                        msg = msg + inner[arange_n, obs][:, None]
            else:
                msg = _log_push(inner, self.model.tables[vid].T)
            self._up_msg[vid] = msg
        root = model.root
        prior = self._log_tables[root]
        self._root_prior = prior
        inner = self._up_in[root]
        obs = self._observed.get(root) if model.var(root).kind == "manifest" else None
        if obs is not None:
            self.case_loglik = prior[obs] + inner[arange_n, obs]
        else:
            self.case_loglik = _logsumexp_rows(inner + prior)

    def log_likelihood(self) -> float:
        return float(np.dot(self.dataset.counts, self.case_loglik))

    # -- downward pass -----------------------------------------------------

    def _sibling_excluded(self, vid: str, down_u: np.ndarray) -> np.ndarray:
        """down(u) plus messages from all children of u except vid."""
        model = self.model
        u = model.parent(vid)
        total = down_u.copy()
        for c in model.children(u):
            if c != vid:
                total += self._up_msg[c]
        return total

    def _run_downward(self):
        if self._down is not None:
            return
        model, n = self.model, self.dataset.n_cases
        down: dict[str, np.ndarray] = {}
        root = model.root
        base = np.broadcast_to(self._root_prior, (n, len(self._root_prior))).copy()
        obs = self._observed.get(root) if model.var(root).kind == "manifest" else None
        if obs is not None:
            mask = np.full_like(base, _NEG_INF)
            mask[np.arange(n), obs] = 0.0
            base = base + mask
        down[root] = base
        for vid in model.topo_order():
            if vid == root:
                continue
            ctx = self._sibling_excluded(vid, down[model.parent(vid)])
            if model.var(vid).kind == "latent":
                down[vid] = _log_push(ctx, self.model.tables[vid])
            else:
                down[vid] = ctx  # kept in parent-state space; enough for edge counts
        self._down = down

    def posteriors(self, vid: str) -> np.ndarray:
        """P(vid | case) for every distinct case; rows sum to 1."""
        var = self.model.var(vid)
        if var.kind != "latent":
            raise ValueError(f"posterior target {vid!r} is not latent")
        if np.any(np.isneginf(self.case_loglik)):
            bad = int(np.flatnonzero(np.isneginf(self.case_loglik))[0])
            raise ValueError(f"case {bad} has zero probability under the model")
        return self._node_belief(vid)

    def _node_belief(self, vid: str) -> np.ndarray:
        """P(vid | case), accepting manifest nodes (point mass when observed)."""
        model, n = self.model, self.dataset.n_cases
        if model.var(vid).kind == "manifest":
            obs = self._observed.get(vid)
            if obs is not None:
                out = np.zeros((n, model.cardinality(vid)))
                out[np.arange(n), obs] = 1.0
                return out
        if vid == model.root:
            logp = self._up_in[vid] + self._root_prior
        elif model.var(vid).kind == "manifest":
            # unobserved leaf: its down context lives in parent-state space
            self._run_downward()
            logp = _log_push(self._down[vid], model.tables[vid])
        else:
            self._run_downward()
            logp = self._up_in[vid] + self._down[vid]
        return np.exp(logp - self.case_loglik[:, None])

    def edge_statistics(self, vid: str) -> np.ndarray:
        """Multiplicity-weighted expected counts for the table of vid.

        Root: expected state counts, shape (c_root,).  Other variables:
        expected (parent state, own state) co-occurrence counts with the
        same shape as the stored table.
        """
        model = self.model
        counts = self.dataset.counts.astype(float)
        if vid == model.root:
            return counts @ self._node_belief(vid)
        self._run_downward()
        var = model.var(vid)
        if var.kind == "manifest":
            obs = self._observed.get(vid)
            # belief over the parent: exclusion context plus own message
            logb = self._down[vid] + self._up_msg[vid] - self.case_loglik[:, None]
            post_u = np.exp(logb)
            if obs is None:
                return (counts @ post_u)[:, None] * model.tables[vid]
            out = np.zeros(model.expected_table_shape(vid))
            np.add.at(out.T, obs, post_u * counts[:, None])
            return out
        ctx = self._sibling_excluded(vid, self._down[model.parent(vid)])
        logt = self._log_tables[vid]
        log_joint = (ctx[:, :, None] + logt[None, :, :]
                     + self._up_in[vid][:, None, :] - self.case_loglik[:, None, None])
        return np.einsum("n,njk->jk", counts, np.exp(log_joint))


# -- public operations ---------------------------------------------------


def log_likelihood(model: LatentTreeModel, dataset: CategoricalDataset) -> float:
    """Natural-log likelihood of all cases, multiplicity-weighted.

    Returns -inf if any case has probability zero under the model.
    """
    return TreePass(model, dataset).log_likelihood()


def _single_case_dataset(model: LatentTreeModel, case: Mapping[str, int]) -> CategoricalDataset:
    ids = sorted(model.manifest_ids)
    missing = [v for v in ids if v not in case]
    if missing:
        raise ValueError(f"case is missing manifest variables: {missing}")
    unknown = sorted(set(case) - set(ids))
    if unknown:
        raise ValueError(f"case mentions unknown variables: {unknown}")
    schema = tuple(model.var(v) for v in ids)
    row = np.array([[case[v] for v in ids]], dtype=np.int64)
    return CategoricalDataset(schema, row)


def posterior(model: LatentTreeModel, target: str, case: Mapping[str, int]) -> np.ndarray:
    """Exact P(target | case) for a latent target and a complete case."""
    if target not in model.variables:
        raise KeyError(f"unknown variable {target!r}")
    tp = TreePass(model, _single_case_dataset(model, case))
    return tp.posteriors(target)[0]


def map_state(model: LatentTreeModel, target: str, case: Mapping[str, int]) -> int:
    """Most probable state of target given the case; ties favor lower index."""
    return int(np.argmax(posterior(model, target, case)))


def marginal(model: LatentTreeModel, vid: str) -> np.ndarray:
    """Model marginal of a single variable (no evidence)."""
    if vid not in model.variables:
        raise KeyError(f"unknown variable {vid!r}")
    return _all_marginals(model)[vid]


def _all_marginals(model: LatentTreeModel) -> dict[str, np.ndarray]:
    margs: dict[str, np.ndarray] = {}
    for v in model.topo_order():
        if v == model.root:
            margs[v] = model.tables[v].copy()
        else:
            margs[v] = margs[model.parent(v)] @ model.tables[v]
    return margs


def _tree_path(model: LatentTreeModel, a: str, b: str) -> list[str]:
    parent = {a: None}
    queue = [a]
    i = 0
    while i < len(queue):
        u = queue[i]
        i += 1
        if u == b:
            break
        for w in model.neighbors(u):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def pairwise_marginal(model: LatentTreeModel, var_a: str, var_b: str) -> np.ndarray:
    """Exact joint P(var_a, var_b) under the model, shape (c_a, c_b)."""
    for v in (var_a, var_b):
        if v not in model.variables:
            raise KeyError(f"unknown variable {v!r}")
    margs = _all_marginals(model)
    if var_a == var_b:
        return np.diag(margs[var_a])
    path = _tree_path(model, var_a, var_b)
    joint = np.diag(margs[var_a])  # (c_a, c_current)
    for prev, nxt in zip(path, path[1:]):
        if model.parent(nxt) == prev:
            trans = model.tables[nxt]  # P(nxt | prev)
        else:
            # edge stored as P(prev | nxt); reverse it through the marginals
            t = model.tables[prev]
            num = t * margs[nxt][:, None]  # P(nxt=j) P(prev=s | nxt=j)
            denom = margs[prev][None, :]
            trans = np.divide(num, denom, out=np.zeros_like(num), where=denom > 0).T
        joint = joint @ trans
    return joint


def conditional_of(model: LatentTreeModel, target: str, given: str) -> np.ndarray:
    """P(target | given) as a (c_given, c_target) table."""
    if model.parent(target) == given:
        return model.tables[target].copy()  # stored exactly in this orientation
    joint = pairwise_marginal(model, given, target)
    denom = joint.sum(axis=1, keepdims=True)
    out = np.divide(joint, denom, out=np.full_like(joint, 1.0 / joint.shape[1]),
                    where=denom > 0)
    return out


def reroot(model: LatentTreeModel, new_root: str) -> LatentTreeModel:
    """Re-parameterize the same joint distribution against another root."""
    if new_root not in model.variables:
        raise KeyError(f"unknown variable {new_root!r}")
    if new_root == model.root:
        return model
    margs = _all_marginals(model)
    skeleton = LatentTreeModel(model.variables.values(), model.edges, new_root, {})
    tables: dict[str, np.ndarray] = {new_root: margs[new_root]}
    for vid in skeleton.topo_order():
        if vid == new_root:
            continue
        u = skeleton.parent(vid)
        if model.parent(vid) == u:
            tables[vid] = model.tables[vid]
        else:
            # orientation flipped: P(vid | u) from P(u | vid) and marginals
            t = model.tables[u]  # (c_vid, c_u)
            num = t * margs[vid][:, None]
            denom = margs[u][None, :]
            flipped = np.divide(num, denom, out=np.zeros_like(num), where=denom > 0).T
            zero_rows = margs[u] <= 0
            if np.any(zero_rows):
                flipped[zero_rows] = 1.0 / model.cardinality(vid)
            tables[vid] = flipped
    return LatentTreeModel(model.variables.values(), model.edges, new_root, tables)


# -- brute-force oracle ----------------------------------------------------

_STATE_SPACE_GUARD = 2 ** 24


def _joint_table(model: LatentTreeModel):
    """Full joint distribution by enumeration: (column map, states, log probs)."""
    ids = list(model.topo_order())
    cards = [model.cardinality(v) for v in ids]
    size = int(np.prod(cards, dtype=np.int64))
    if size > _STATE_SPACE_GUARD:
        raise ValueError(f"joint state space {size} exceeds enumeration guard")
    grids = np.indices(cards).reshape(len(ids), size).T  # (size, nvars)
    logp = np.zeros(size)
    col = {v: j for j, v in enumerate(ids)}
    for vid in ids:
        t = _log(model.tables[vid])
        if vid == model.root:
            logp += t[grids[:, col[vid]]]
        else:
            logp += t[grids[:, col[model.parent(vid)]], grids[:, col[vid]]]
    return col, grids, logp


def brute_force_log_likelihood(model: LatentTreeModel, dataset: CategoricalDataset) -> float:
    """Exact likelihood by full joint enumeration (test oracle)."""
    unknown = set(dataset.variable_ids) - set(model.manifest_ids)
    if unknown:
        raise ValueError(f"dataset variables not in model: {sorted(unknown)}")
    col, grids, logp = _joint_table(model)
    p = np.exp(logp)
    total = 0.0
    for i in range(dataset.n_cases):
        mask = np.ones(len(grids), dtype=bool)
        for vid in dataset.variable_ids:
            mask &= grids[:, col[vid]] == dataset.values[i, dataset.column_index(vid)]
        case_p = p[mask].sum()
        total += float(dataset.counts[i]) * (np.log(case_p) if case_p > 0 else _NEG_INF)
    return total


def brute_force_posterior(model: LatentTreeModel, target: str, case: Mapping[str, int]) -> np.ndarray:
    """Exact posterior by full joint enumeration (test oracle)."""
    if target not in model.variables:
        raise KeyError(f"unknown variable {target!r}")
    ds = _single_case_dataset(model, case)
    col, grids, logp = _joint_table(model)
    mask = np.ones(len(grids), dtype=bool)
    for vid in ds.variable_ids:
        mask &= grids[:, col[vid]] == ds.values[0, ds.column_index(vid)]
    p = np.exp(logp)
    out = np.zeros(model.cardinality(target))
    np.add.at(out, grids[mask, col[target]], p[mask])
    total = out.sum()
    if total <= 0:
        raise ValueError("case has zero probability under the model")
    return out / total


def brute_force_pairwise_marginal(model: LatentTreeModel, var_a: str, var_b: str) -> np.ndarray:
    """Exact pairwise marginal by full joint enumeration (test oracle)."""
    col, grids, logp = _joint_table(model)
    p = np.exp(logp)
    out = np.zeros((model.cardinality(var_a), model.cardinality(var_b)))
    np.add.at(out, (grids[:, col[var_a]], grids[:, col[var_b]]), p)
    return out
