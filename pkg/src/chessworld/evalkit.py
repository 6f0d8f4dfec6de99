"""Exactness metrics over (shard, prediction) pairs, plus reference
predictors that make the metric stack testable without any learned model.

Cross-entropy is micro-averaged by default: every (timestep, target) pair
of every game pools with equal weight.  The per-game macro average (each
game's masked mean first, then the mean over games) is always computed
alongside, since either convention is defensible for aggregate test loss.
Rates use exact integer counting; floating-point accumulation uses
math.fsum over per-game float64 sums, which is deterministic and
order-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pipeline import Trajectory
from .shardio import PredictionRecord

BIN_WIDTH = 20
LOGP_FLOOR = -30.0


class PredictionMismatch(Exception):
    """Prediction game ids or lengths do not match the reference shard."""


class BadLogProb(ValueError):
    """A prediction carries a positive log-probability."""


@dataclass
class BinMetrics:
    start: int  # first timestep index of the bin (multiples of 20)
    timesteps: int
    exact: float
    labelwise: float
    exact_count: int
    label_matches: int


@dataclass
class MetricReport:
    games: int
    timesteps: int
    cross_entropy: float
    cross_entropy_macro: float
    labelwise_accuracy: float
    exact_state_rate: float
    trajectory_exact_rate: float
    bins: list = field(default_factory=list)
    vacuous: bool = False

    def to_lines(self) -> list[str]:
        lines = [
            f"games\t{self.games}",
            f"timesteps\t{self.timesteps}",
            f"cross_entropy\t{self.cross_entropy!r}",
            f"cross_entropy_macro\t{self.cross_entropy_macro!r}",
            f"labelwise_accuracy\t{self.labelwise_accuracy!r}",
            f"exact_state_rate\t{self.exact_state_rate!r}",
            f"trajectory_exact_rate\t{self.trajectory_exact_rate!r}",
        ]
        if self.vacuous:
            lines.append("warning\tempty shard: rates are vacuously 1.0")
        for b in self.bins:
            lines.append(f"bin\t{b.start}\t{b.timesteps}\t{b.exact!r}\t{b.labelwise!r}")
        return lines


def _gold_labels(traj: Trajectory) -> np.ndarray:
    return np.frombuffer(traj.states, dtype=np.uint8).reshape(traj.T + 1, 75)


def evaluate(
    trajectories: Sequence[Trajectory],
    predictions: Sequence[PredictionRecord],
) -> MetricReport:
    """Score predictions against gold trajectories.

    Ids must match as a set and lengths per game; evaluation itself is
    order-independent (games are processed in shard order internally).
    """
    by_id = {}
    for rec in predictions:
        if rec.game_id in by_id:
            raise PredictionMismatch(f"duplicate prediction for {rec.game_id!r}")
        by_id[rec.game_id] = rec
    gold_ids = [t.game_id for t in trajectories]
    if len(set(gold_ids)) != len(gold_ids):
        raise PredictionMismatch("duplicate game ids in shard")
    if set(gold_ids) != set(by_id):
        missing = set(gold_ids) ^ set(by_id)
        raise PredictionMismatch(f"game id sets differ ({len(missing)} mismatched)")

    total_steps = 0
    exact_steps = 0
    label_matches = 0
    exact_games = 0
    ce_sums: list[float] = []  # per-game -sum(logp)
    ce_means: list[float] = []  # per-game masked means
    bins: dict[int, list[int]] = {}  # start -> [timesteps, exact, matches]

    for traj in trajectories:
        rec = by_id[traj.game_id]
        if rec.T != traj.T:
            raise PredictionMismatch(
                f"{traj.game_id!r}: prediction T={rec.T} but shard T={traj.T}"
            )
        if np.any(rec.logp > 0):
            raise BadLogProb(f"{traj.game_id!r}: positive log-probability")
        gold = _gold_labels(traj)
        steps = traj.T + 1
        eq = rec.labels == gold
        matches_per_t = eq.sum(axis=1)
        exact_per_t = matches_per_t == 75
        total_steps += steps
        exact_steps += int(exact_per_t.sum())
        label_matches += int(matches_per_t.sum())
        exact_games += int(exact_per_t.all())
        neg_sum = -float(rec.logp.sum(dtype=np.float64))
        ce_sums.append(neg_sum)
        ce_means.append(neg_sum / (75 * steps))
        for start in range(0, steps, BIN_WIDTH):
            stop = min(start + BIN_WIDTH, steps)
            acc = bins.setdefault(start, [0, 0, 0])
            acc[0] += stop - start
            acc[1] += int(exact_per_t[start:stop].sum())
            acc[2] += int(matches_per_t[start:stop].sum())

    games = len(trajectories)
    if games == 0:
        return MetricReport(0, 0, 0.0, 0.0, 1.0, 1.0, 1.0, [], vacuous=True)
    cross_entropy = math.fsum(ce_sums) / (75 * total_steps)
    cross_entropy_macro = math.fsum(ce_means) / games
    bin_list = [
        BinMetrics(start, acc[0], acc[1] / acc[0], acc[2] / (75 * acc[0]), acc[1], acc[2])
        for start, acc in sorted(bins.items())
    ]
    return MetricReport(
        games=games,
        timesteps=total_steps,
        cross_entropy=cross_entropy,
        cross_entropy_macro=cross_entropy_macro,
        labelwise_accuracy=label_matches / (75 * total_steps),
        exact_state_rate=exact_steps / total_steps,
        trajectory_exact_rate=exact_games / games,
        bins=bin_list,
    )


def oracle_predict(trajectories: Iterable[Trajectory]) -> list[PredictionRecord]:
    """Gold labels with log-probability zero everywhere."""
    out = []
    for traj in trajectories:
        gold = _gold_labels(traj)
        out.append(
            PredictionRecord(traj.game_id, gold.copy(), np.zeros(gold.shape, dtype=np.float32))
        )
    return out


def _floored_logp(pred: np.ndarray, gold: np.ndarray) -> np.ndarray:
    """0 where the predicted label is the gold one, the -30 floor elsewhere.

    The floor stands in for -inf so reports stay finite; it matches the
    floor used when models emit prediction files.
    """
    return np.where(pred == gold, 0.0, LOGP_FLOOR).astype(np.float32)


def lagk_predict(trajectories: Iterable[Trajectory], k: int) -> list[PredictionRecord]:
    """Predict the state from k plies ago (clamped to the start)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    for traj in trajectories:
        gold = _gold_labels(traj)
        idx = np.maximum(np.arange(gold.shape[0]) - k, 0)
        pred = gold[idx]
        out.append(PredictionRecord(traj.game_id, pred.copy(), _floored_logp(pred, gold)))
    return out


def amnesiac_predict(trajectories: Iterable[Trajectory]) -> list[PredictionRecord]:
    """Board and side gold-correct; castling/ep/counters frozen at t = 0."""
    out = []
    for traj in trajectories:
        gold = _gold_labels(traj)
        pred = gold.copy()
        pred[:, 65:] = gold[0, 65:]
        out.append(PredictionRecord(traj.game_id, pred, _floored_logp(pred, gold)))
    return out
