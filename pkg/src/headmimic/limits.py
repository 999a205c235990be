"""Yaw-dependent pitch limits.

The robot head's safe pitch range depends on the current yaw. The
manufacturer publishes the envelope as a sparse table of knots; two
epsilon-SVR regressors (RBF kernel) are fitted to the table's min and max
columns so bounds can be evaluated at any yaw. Before clamping, each bound
is pulled 5% toward zero as an outlier margin.

The dual problem is solved by a deterministic pairwise SMO sweep in fixed
lexicographic order, so refitting the same table with the same
hyperparameters reproduces bit-identical coefficients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .geometry import YAW_LIMIT_DEG

FIT_TOL_DEG = 1.0
MAX_PAIR_UPDATES = 100_000
_SWEEP_STOP = 1e-10
_FREE_TOL = 1e-8

DEFAULT_C = 100.0
DEFAULT_EPSILON_TUBE = 0.5
DEFAULT_GAMMA = 1.0 / (2.0 * 30.0 * 30.0)


class FitFailure(RuntimeError):
    """The regressor pair could not be fitted within tolerance."""


class InvertedBounds(ValueError):
    """The margin-adjusted pitch bounds crossed."""


@dataclass(frozen=True, slots=True)
class LimitTable:
    """Manufacturer pitch-envelope knots: (yaw, min_pitch, max_pitch) rows."""

    rows: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if len(self.rows) < 2:
            raise ValueError("limit table needs at least two rows")
        yaws = [r[0] for r in self.rows]
        for a, b in zip(yaws, yaws[1:]):
            if b <= a:
                raise ValueError(f"yaw knots must strictly increase (got {a} then {b})")
        for yaw, lo, hi in self.rows:
            if not (math.isfinite(yaw) and math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("limit table contains non-finite values")
            if lo >= hi:
                raise ValueError(f"min_pitch {lo} >= max_pitch {hi} at yaw {yaw}")
        if yaws[0] > -YAW_LIMIT_DEG or yaws[-1] < YAW_LIMIT_DEG:
            raise ValueError(
                f"yaw knots must cover [{-YAW_LIMIT_DEG}, {YAW_LIMIT_DEG}], "
                f"got [{yaws[0]}, {yaws[-1]}]"
            )

    @property
    def yaws(self) -> list[float]:
        return [r[0] for r in self.rows]

    @property
    def min_pitches(self) -> list[float]:
        return [r[1] for r in self.rows]

    @property
    def max_pitches(self) -> list[float]:
        return [r[2] for r in self.rows]

    def interpolate(self, yaw_deg: float) -> tuple[float, float]:
        """Piecewise-linear hardware envelope at a yaw, clamped to the knot range."""
        yaws = self.yaws
        if yaw_deg <= yaws[0]:
            return self.rows[0][1], self.rows[0][2]
        if yaw_deg >= yaws[-1]:
            return self.rows[-1][1], self.rows[-1][2]
        for i in range(len(yaws) - 1):
            if yaws[i] <= yaw_deg <= yaws[i + 1]:
                f = (yaw_deg - yaws[i]) / (yaws[i + 1] - yaws[i])
                lo = self.rows[i][1] + f * (self.rows[i + 1][1] - self.rows[i][1])
                hi = self.rows[i][2] + f * (self.rows[i + 1][2] - self.rows[i][2])
                return lo, hi
        raise AssertionError("unreachable")

    @classmethod
    def from_json_file(cls, path: str | Path) -> "LimitTable":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, list):
            raise ValueError("limit table file must hold a JSON array")
        rows = []
        for entry in raw:
            try:
                rows.append((float(entry["yaw"]), float(entry["min_pitch"]),
                             float(entry["max_pitch"])))
            except (TypeError, KeyError) as exc:
                raise ValueError(f"bad limit table entry {entry!r}") from exc
        return cls(tuple(rows))


@dataclass(frozen=True, slots=True)
class SvrHyperparams:
    c: float = DEFAULT_C
    epsilon_tube: float = DEFAULT_EPSILON_TUBE
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self) -> None:
        if self.c <= 0 or self.epsilon_tube <= 0 or self.gamma <= 0:
            raise ValueError("SVR hyperparameters must be positive")


@dataclass(frozen=True, slots=True)
class SvrModel:
    """One fitted 1-D epsilon-SVR: support inputs, dual coefficients, bias."""

    support: np.ndarray = field(repr=False)
    coef: np.ndarray = field(repr=False)
    bias: float
    gamma: float

    def predict(self, x: float) -> float:
        return float(_kernels.rbf_predict(float(x), self.support, self.coef,
                                          self.gamma, self.bias))

    def to_dict(self) -> dict:
        return {
            "support": self.support.tolist(),
            "coef": self.coef.tolist(),
            "bias": self.bias,
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvrModel":
        return cls(
            support=np.asarray(d["support"], dtype=np.float64),
            coef=np.asarray(d["coef"], dtype=np.float64),
            bias=float(d["bias"]),
            gamma=float(d["gamma"]),
        )


@dataclass(frozen=True, slots=True)
class PitchBounds:
    min_deg: float
    max_deg: float


@dataclass(frozen=True, slots=True)
class PitchLimitModel:
    """Fitted min/max pitch regressors plus the hyperparameters used."""

    min_model: SvrModel
    max_model: SvrModel
    hyperparams: SvrHyperparams

    def to_json(self) -> str:
        return json.dumps(
            {
                "min_model": self.min_model.to_dict(),
                "max_model": self.max_model.to_dict(),
                "hyperparams": {
                    "c": self.hyperparams.c,
                    "epsilon_tube": self.hyperparams.epsilon_tube,
                    "gamma": self.hyperparams.gamma,
                },
            },
            sort_keys=True,
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "PitchLimitModel":
        d = json.loads(text)
        hp = d["hyperparams"]
        return cls(
            min_model=SvrModel.from_dict(d["min_model"]),
            max_model=SvrModel.from_dict(d["max_model"]),
            hyperparams=SvrHyperparams(float(hp["c"]), float(hp["epsilon_tube"]),
                                       float(hp["gamma"])),
        )

    @classmethod
    def from_json_file(cls, path: str | Path) -> "PitchLimitModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _fit_svr(xs: np.ndarray, ys: np.ndarray, hp: SvrHyperparams) -> SvrModel:
    """Fit one epsilon-SVR by deterministic pairwise SMO sweeps."""
    n = len(xs)
    diff = xs[:, None] - xs[None, :]
    kmat = np.exp(-hp.gamma * diff * diff)
    kmat = np.ascontiguousarray(kmat, dtype=np.float64)
    beta = np.zeros(n, dtype=np.float64)
    grad = ys.astype(np.float64).copy()

    total_updates = 0
    while total_updates < MAX_PAIR_UPDATES:
        max_step, updates = _kernels.smo_sweep(kmat, ys, beta, grad,
                                               hp.c, hp.epsilon_tube)
        total_updates += max(updates, 1)
        if max_step < _SWEEP_STOP:
            break

    bias = _solve_bias(ys, beta, grad, hp)
    return SvrModel(support=xs.copy(), coef=beta, bias=bias, gamma=hp.gamma)


def _solve_bias(ys: np.ndarray, beta: np.ndarray, grad: np.ndarray,
                hp: SvrHyperparams) -> float:
    """Bias from KKT conditions; grad[i] = y_i - (K beta)_i.

    Free coefficients pin the bias exactly; otherwise take the midpoint of
    the feasible interval implied by the box constraints.
    """
    free = []
    lo = -math.inf
    hi = math.inf
    for i in range(len(ys)):
        g = float(grad[i])
        b = float(beta[i])
        if b > _FREE_TOL and b < hp.c - _FREE_TOL:
            free.append(g - hp.epsilon_tube)
        elif b < -_FREE_TOL and b > -hp.c + _FREE_TOL:
            free.append(g + hp.epsilon_tube)
        elif abs(b) <= _FREE_TOL:
            lo = max(lo, g - hp.epsilon_tube)
            hi = min(hi, g + hp.epsilon_tube)
        elif b >= hp.c - _FREE_TOL:
            hi = min(hi, g - hp.epsilon_tube)
        else:
            lo = max(lo, g + hp.epsilon_tube)
    if free:
        return sum(free) / len(free)
    if lo <= hi and math.isfinite(lo) and math.isfinite(hi):
        return (lo + hi) / 2.0
    return float(np.mean(grad))


def fit_pitch_limit_model(table: LimitTable,
                          hyperparams: SvrHyperparams | None = None,
                          sweep_step_deg: float = 0.5) -> PitchLimitModel:
    """Fit the min/max pitch regressor pair to a limit table.

    Raises FitFailure when a knot residual exceeds 1 degree or the fitted
    curves cross anywhere on the yaw range (both signal bad hyperparameters).
    """
    hp = hyperparams or SvrHyperparams()
    xs = np.asarray(table.yaws, dtype=np.float64)
    min_model = _fit_svr(xs, np.asarray(table.min_pitches, dtype=np.float64), hp)
    max_model = _fit_svr(xs, np.asarray(table.max_pitches, dtype=np.float64), hp)

    for name, model, targets in (("min", min_model, table.min_pitches),
                                 ("max", max_model, table.max_pitches)):
        for x, y in zip(table.yaws, targets):
            resid = abs(model.predict(x) - y)
            if resid > FIT_TOL_DEG:
                raise FitFailure(
                    f"{name}-pitch residual {resid:.3f} deg at yaw {x} "
                    f"exceeds {FIT_TOL_DEG} deg"
                )

    yaw = -YAW_LIMIT_DEG
    while yaw <= YAW_LIMIT_DEG:
        if min_model.predict(yaw) >= max_model.predict(yaw):
            raise FitFailure(f"fitted min/max pitch curves cross at yaw {yaw:.1f}")
        yaw += sweep_step_deg

    return PitchLimitModel(min_model=min_model, max_model=max_model, hyperparams=hp)


def margin_adjust(raw_min: float, raw_max: float,
                  safe_margin: bool = False) -> PitchBounds:
    """Apply the 5% outlier margin to a raw (min, max) pitch pair.

    Default mode shrinks each bound 5% toward zero. With safe_margin=True the
    margin is applied inward only (min raised by 5% of its magnitude, max
    lowered by 5% of its magnitude), which never widens the range for
    same-sign bounds; the two modes agree whenever min < 0 < max.
    """
    if safe_margin:
        lo = raw_min + 0.05 * abs(raw_min)
        hi = raw_max - 0.05 * abs(raw_max)
    else:
        lo = raw_min - 0.05 * raw_min
        hi = raw_max - 0.05 * raw_max
    if lo >= hi:
        raise InvertedBounds(
            f"pitch bounds inverted: min {lo:.3f} >= max {hi:.3f} "
            f"(raw {raw_min:.3f}/{raw_max:.3f})"
        )
    return PitchBounds(lo, hi)


def pitch_bounds(model: PitchLimitModel, yaw_deg: float,
                 safe_margin: bool = False) -> PitchBounds:
    """Margin-adjusted pitch bounds at a yaw, from the fitted regressor pair."""
    return margin_adjust(model.min_model.predict(yaw_deg),
                         model.max_model.predict(yaw_deg), safe_margin)


def clamp_pitch(pitch_deg: float, bounds: PitchBounds) -> float:
    """Clamp a pitch command into the allowed bounds."""
    if pitch_deg > bounds.max_deg:
        return bounds.max_deg
    if pitch_deg < bounds.min_deg:
        return bounds.min_deg
    return pitch_deg
