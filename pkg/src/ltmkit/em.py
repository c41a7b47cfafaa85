"""Maximum-likelihood parameter estimation for a fixed tree structure.

Full EM with random restarts, and a restricted variant (``local_em``) that
only updates a focus subset of tables — the screening workhorse of the
structure search.  The E-step runs exact tree inference; the M-step
normalizes expected counts with additive smoothing (one pseudo-count per
distribution, spread uniformly), so fitted probabilities never hit zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .inference import TreePass
from .model import CategoricalDataset, LatentTreeModel

MONOTONICITY_TOL = 1e-9


@dataclass(frozen=True)
class EMConfig:
    max_iterations: int = 500
    tolerance: float = 1e-4
    restarts: int = 16
    seed: int = 0
    smoothing: float = 1.0


LOCAL_DEFAULTS = EMConfig(max_iterations=40, restarts=1)


@dataclass(frozen=True)
class EMResult:
    model: LatentTreeModel
    trace: tuple[float, ...]          # winning restart, one entry per iteration
    log_likelihood: float
    restart_index: int
    converged: bool
    traces: tuple[tuple[float, ...], ...] = ()   # every restart, winner included

    @property
    def final(self) -> float:
        return self.log_likelihood


def _random_tables(model: LatentTreeModel, vids: Iterable[str], rng: np.random.Generator):
    """Uniform-simplex draws for each distribution of the given variables."""
    out = {}
    for vid in vids:
        shape = model.expected_table_shape(vid)
        if len(shape) == 1:
            out[vid] = rng.dirichlet(np.ones(shape[0]))
        else:
            out[vid] = rng.dirichlet(np.ones(shape[1]), size=shape[0])
    return out


def _m_step_table(counts: np.ndarray, smoothing: float) -> np.ndarray:
    card = counts.shape[-1]
    smoothed = counts + smoothing / card
    return smoothed / smoothed.sum(axis=-1, keepdims=True)


def _check_dataset(model: LatentTreeModel, dataset: CategoricalDataset):
    if dataset.total_n == 0:
        raise ValueError("cannot fit on an empty dataset")
    have, want = set(dataset.variable_ids), set(model.manifest_ids)
    if have != want:
        raise ValueError(
            f"dataset schema does not match model manifest variables; "
            f"missing {sorted(want - have)}, extra {sorted(have - want)}")


def _em_run(model, dataset, focus, config, rng):
    """One EM run from a random initialization of the focus tables."""
    current = model.with_tables(_random_tables(model, focus, rng))
    trace: list[float] = []
    converged = False
    for _ in range(config.max_iterations):
        tp = TreePass(current, dataset)
        trace.append(tp.log_likelihood())
        if len(trace) > 1 and trace[-1] - trace[-2] < config.tolerance:
            converged = True
            break
        new_tables = {vid: _m_step_table(tp.edge_statistics(vid), config.smoothing)
                      for vid in focus}
        current = current.with_tables(new_tables)
    if not converged:
        # iteration budget exhausted after an M-step: score the final model
        trace.append(TreePass(current, dataset).log_likelihood())
    return current, trace, converged


def em_fit(model: LatentTreeModel, dataset: CategoricalDataset,
           config: EMConfig | None = None) -> EMResult:
    """Fit all tables by EM with random restarts; returns the best restart.

    Deterministic given the config seed.  Restart winners are chosen by
    (log-likelihood, lower restart index), so evaluation order does not
    matter.  Each restart's trace is non-decreasing up to float tolerance.
    """
    config = config or EMConfig()
    if config.restarts < 1:
        raise ValueError("restarts must be >= 1")
    _check_dataset(model, dataset)
    focus = list(model.variables)
    best = None
    traces = []
    for r in range(config.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, r)))
        fitted, trace, converged = _em_run(model, dataset, focus, config, rng)
        traces.append(tuple(trace))
        if best is None or trace[-1] > best[1] + 0.0:
            best = (fitted, trace[-1], trace, r, converged)
    fitted, ll, trace, r, converged = best
    return EMResult(fitted, tuple(trace), ll, r, converged, tuple(traces))


def local_em(model: LatentTreeModel, dataset: CategoricalDataset,
             focus: Sequence[str], config: EMConfig | None = None) -> EMResult:
    """EM restricted to the focus variables; all other tables stay frozen.

    Used to screen structure-search candidates cheaply: the focus tables
    are randomly re-initialized and re-estimated while the rest of the
    model is held at its current parameters.
    """
    config = config if config is not None else LOCAL_DEFAULTS
    if config.restarts < 1:
        raise ValueError("restarts must be >= 1")
    _check_dataset(model, dataset)
    focus = list(dict.fromkeys(focus))
    if not focus:
        raise ValueError("focus must name at least one variable")
    unknown = [v for v in focus if v not in model.variables]
    if unknown:
        raise ValueError(f"focus variables not in model: {unknown}")
    best = None
    traces = []
    for r in range(config.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, r)))
        fitted, trace, converged = _em_run(model, dataset, focus, config, rng)
        traces.append(tuple(trace))
        if best is None or trace[-1] > best[1]:
            best = (fitted, trace[-1], trace, r, converged)
    fitted, ll, trace, r, converged = best
    return EMResult(fitted, tuple(trace), ll, r, converged, tuple(traces))
