"""Training-compute records and what they say about efficiency over time.

A record states how much compute one training run needed to reach a
fixed accuracy threshold. Records compare pairwise (efficiency factor,
optionally decomposed into an epoch term and a per-image term), filter
to a minimal-compute frontier over time, and fit an exponential trend
whose headline number is the doubling time of efficiency: the months
for required compute to halve.

Compute is stored in raw floating point operations. Two display units
are available throughout: "stated" divides by one teraflop/s sustained
for a day (8.64e16), "table" divides by 1e15, matching the units the
bundled record set is usually quoted in.
"""
from __future__ import annotations

import datetime
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .curves import (
    BACKWARD_MULTIPLIER,
    IMAGES_PER_EPOCH,
    DEFAULT_THRESHOLD,
    Threshold,
    training_compute,
)

# Mean Gregorian month, used whenever dates become month counts.
MONTH_DAYS = 30.436875

# Raw flops per display unit.
UNIT_DIVISORS = {
    "raw": 1.0,
    "stated": 8.64e16,  # one teraflop/s for 86400 seconds
    "table": 1e15,
}

# Relative disagreement allowed between an explicit total and the
# epochs * flops_per_image * images product when a record carries both.
TOTAL_AGREEMENT_RTOL = 1e-6


class TrendError(ValueError):
    """Invalid record data or an invalid trend operation."""


def to_report_units(value: float, unit: str = "raw") -> float:
    """Convert raw flops to one of the display units: raw, stated, table."""
    if unit not in UNIT_DIVISORS:
        raise TrendError(f"unknown unit {unit!r}; expected one of {sorted(UNIT_DIVISORS)}")
    return value / UNIT_DIVISORS[unit]


def date_to_months(d: datetime.date) -> float:
    """A date as a real-valued month count on a fixed calendar origin."""
    return d.toordinal() / MONTH_DAYS


@dataclass(frozen=True)
class EfficiencyRecord:
    """One training run that reached a threshold, with its compute cost.

    Either total_compute (raw flops) or the triple flops_per_image and
    epochs (with images_per_epoch defaulting to 1.28e6) must be given.
    When both appear they must agree to within TOTAL_AGREEMENT_RTOL
    relative. backward_multiplier scales forward cost per image to full
    training cost and participates in the triple product.
    """

    name: str
    date: datetime.date
    threshold: Threshold = DEFAULT_THRESHOLD
    total_compute: float | None = None
    flops_per_image: float | None = None
    epochs: float | None = None
    images_per_epoch: float | None = None
    backward_multiplier: float = BACKWARD_MULTIPLIER
    notes: str = ""

    def __post_init__(self):
        if not self.name:
            raise TrendError("record name must be a non-empty string")
        if not isinstance(self.date, datetime.date) or isinstance(self.date, datetime.datetime):
            raise TrendError(f"{self.name}: date must be a datetime.date")
        if not isinstance(self.threshold, Threshold):
            raise TrendError(f"{self.name}: threshold must be a Threshold")
        for label in ("total_compute", "flops_per_image", "epochs", "images_per_epoch"):
            v = getattr(self, label)
            if v is not None:
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
                    raise TrendError(f"{self.name}: {label} must be positive, got {v!r}")
                object.__setattr__(self, label, float(v))
        if not self.backward_multiplier > 0:
            raise TrendError(f"{self.name}: backward_multiplier must be positive")
        has_triple = self.flops_per_image is not None and self.epochs is not None
        if (self.flops_per_image is None) != (self.epochs is None):
            raise TrendError(
                f"{self.name}: flops_per_image and epochs must be given together"
            )
        if self.images_per_epoch is not None and not has_triple:
            raise TrendError(
                f"{self.name}: images_per_epoch is meaningless without flops_per_image and epochs"
            )
        if not has_triple and self.total_compute is None:
            raise TrendError(
                f"{self.name}: needs total_compute or flops_per_image with epochs"
            )
        if has_triple and self.total_compute is not None:
            derived = self._triple_total()
            rel = abs(self.total_compute - derived) / derived
            if rel > TOTAL_AGREEMENT_RTOL:
                raise TrendError(
                    f"{self.name}: total_compute {self.total_compute!r} disagrees with "
                    f"epochs * flops_per_image product {derived!r} "
                    f"(relative difference {rel:.3e})"
                )

    def _triple_total(self) -> float:
        return training_compute(
            self.flops_per_image,
            self.epochs,
            self.images_per_epoch if self.images_per_epoch is not None else IMAGES_PER_EPOCH,
            self.backward_multiplier,
        )

    @property
    def total(self) -> float:
        """Total training compute in raw flops."""
        if self.total_compute is not None:
            return self.total_compute
        return self._triple_total()

    @property
    def effective_images_per_epoch(self) -> float:
        return self.images_per_epoch if self.images_per_epoch is not None else IMAGES_PER_EPOCH


# ---------------------------------------------------------------------------
# record json
# ---------------------------------------------------------------------------

_RECORD_FIELDS = {
    "name", "date", "threshold", "total_compute", "flops_per_image",
    "epochs", "images_per_epoch", "backward_multiplier", "notes",
}


def _threshold_from_json(value, where: str) -> Threshold:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Threshold("top5", float(value))
    if isinstance(value, dict):
        extra = set(value) - {"metric", "value"}
        if extra or set(value) != {"metric", "value"}:
            raise TrendError(
                f"{where}: threshold object must have exactly the keys metric and value"
            )
        return Threshold(value["metric"], value["value"])
    raise TrendError(f"{where}: threshold must be a number or a metric/value object")


def record_from_dict(obj: dict, where: str = "record") -> EfficiencyRecord:
    if not isinstance(obj, dict):
        raise TrendError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - _RECORD_FIELDS
    if unknown:
        raise TrendError(f"{where}: unknown fields {sorted(unknown)}")
    for req in ("name", "date"):
        if req not in obj:
            raise TrendError(f"{where}: missing required field {req!r}")
    name = obj["name"]
    if not isinstance(name, str) or not name:
        raise TrendError(f"{where}: name must be a non-empty string")
    try:
        date = datetime.date.fromisoformat(obj["date"])
    except (TypeError, ValueError):
        raise TrendError(f"{where} ({name}): date {obj['date']!r} is not YYYY-MM-DD") from None
    kwargs = {}
    if "threshold" in obj:
        kwargs["threshold"] = _threshold_from_json(obj["threshold"], f"{where} ({name})")
    for num in ("total_compute", "flops_per_image", "epochs", "images_per_epoch",
                "backward_multiplier"):
        if num in obj:
            kwargs[num] = obj[num]
    if "notes" in obj:
        if not isinstance(obj["notes"], str):
            raise TrendError(f"{where} ({name}): notes must be a string")
        kwargs["notes"] = obj["notes"]
    return EfficiencyRecord(name=name, date=date, **kwargs)


def records_from_json(text: str) -> tuple[EfficiencyRecord, ...]:
    """Parse a json array of records. Unknown fields are rejected."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise TrendError(f"records file is not valid json: {e}") from None
    if not isinstance(data, list):
        raise TrendError("records file must contain a json array")
    records = []
    for i, obj in enumerate(data):
        records.append(record_from_dict(obj, where=f"record {i}"))
    return tuple(records)


def record_to_dict(r: EfficiencyRecord) -> dict:
    obj: dict = {
        "name": r.name,
        "date": r.date.isoformat(),
        "threshold": {"metric": r.threshold.metric, "value": r.threshold.value},
        "total_compute": r.total,
    }
    if r.flops_per_image is not None:
        obj["flops_per_image"] = r.flops_per_image
        obj["epochs"] = r.epochs
        obj["images_per_epoch"] = r.effective_images_per_epoch
    obj["backward_multiplier"] = r.backward_multiplier
    if r.notes:
        obj["notes"] = r.notes
    return obj


def records_to_json(records: Sequence[EfficiencyRecord]) -> str:
    """Serialize records to the json array format records_from_json reads.

    The explicit total is always written alongside any triple, so files
    stay self-checking when edited by hand.
    """
    return json.dumps([record_to_dict(r) for r in records], indent=2) + "\n"


# ---------------------------------------------------------------------------
# pairwise comparison
# ---------------------------------------------------------------------------

def _require_same_threshold(baseline: EfficiencyRecord, improved: EfficiencyRecord):
    if baseline.threshold != improved.threshold:
        raise TrendError(
            f"{baseline.name} and {improved.name} target different thresholds "
            f"({baseline.threshold} vs {improved.threshold}); factors are only "
            "meaningful at a shared threshold"
        )


@dataclass(frozen=True)
class EfficiencyFactor:
    """How much less compute the later run needed, and over what span."""

    baseline: str
    improved: str
    factor: float
    elapsed_days: int
    elapsed_months: float


def efficiency_factor(baseline: EfficiencyRecord, improved: EfficiencyRecord) -> EfficiencyFactor:
    """baseline total over improved total, at a shared threshold.

    A factor above 1 means the improved run was cheaper. Dates may be
    in either order; elapsed time is improved minus baseline and can
    be negative.
    """
    _require_same_threshold(baseline, improved)
    days = (improved.date - baseline.date).days
    return EfficiencyFactor(
        baseline=baseline.name,
        improved=improved.name,
        factor=baseline.total / improved.total,
        elapsed_days=days,
        elapsed_months=days / MONTH_DAYS,
    )


@dataclass(frozen=True)
class Decomposition:
    """An efficiency factor split into its epoch and per-image terms.

    epochs_ratio is baseline epochs over improved epochs (above 1 when
    the improved run converged in fewer passes). flops_per_image_ratio
    is baseline per-image cost over improved (below 1 when the improved
    model costs more per image). Their product is the factor exactly.
    """

    baseline: str
    improved: str
    epochs_ratio: float
    flops_per_image_ratio: float
    factor: float


def decompose(baseline: EfficiencyRecord, improved: EfficiencyRecord) -> Decomposition:
    """Split the efficiency factor of two triple-form records.

    Both records must carry flops_per_image and epochs, and must share
    images_per_epoch and backward_multiplier so the shared constants
    cancel; otherwise the two ratios would not multiply back to the
    total factor.
    """
    _require_same_threshold(baseline, improved)
    for r in (baseline, improved):
        if r.flops_per_image is None:
            raise TrendError(
                f"{r.name}: decomposition needs flops_per_image and epochs on both records"
            )
    if baseline.effective_images_per_epoch != improved.effective_images_per_epoch:
        raise TrendError(
            f"{baseline.name} and {improved.name} use different images_per_epoch; "
            "their epoch counts are not comparable"
        )
    if baseline.backward_multiplier != improved.backward_multiplier:
        raise TrendError(
            f"{baseline.name} and {improved.name} use different backward multipliers; "
            "their totals are not comparable term by term"
        )
    epochs_ratio = baseline.epochs / improved.epochs
    flops_ratio = baseline.flops_per_image / improved.flops_per_image
    return Decomposition(
        baseline=baseline.name,
        improved=improved.name,
        epochs_ratio=epochs_ratio,
        flops_per_image_ratio=flops_ratio,
        factor=epochs_ratio * flops_ratio,
    )


def partial_run_factor(
    baseline_total: float, improved_total: float, improved_fraction: float = 1.0
) -> float:
    """Efficiency factor when the improved run matched the baseline early.

    improved_fraction is the share of the improved run's total compute
    spent by the time it reached baseline-level performance, so the
    comparison charges the improved run only that share.
    """
    if not baseline_total > 0 or not improved_total > 0:
        raise TrendError("totals must be positive")
    if not 0.0 < improved_fraction <= 1.0:
        raise TrendError(f"improved_fraction {improved_fraction!r} outside (0, 1]")
    return baseline_total / (improved_fraction * improved_total)


def doubling_time(factor: float, elapsed: float) -> float:
    """Time for efficiency to double, given a factor gained over elapsed time.

    Unit-agnostic: the result is in whatever unit elapsed is in. The
    factor must be above 1; the elapsed time positive.
    """
    if not factor > 0:
        raise TrendError(f"factor must be positive, got {factor!r}")
    if factor == 1.0:
        raise TrendError("factor of exactly 1 means no change; doubling time is undefined")
    if not elapsed > 0:
        raise TrendError(f"elapsed time must be positive, got {elapsed!r}")
    if factor < 1.0:
        raise TrendError(
            f"factor {factor!r} is below 1 (efficiency fell); no doubling time exists"
        )
    return elapsed / math.log2(factor)


# ---------------------------------------------------------------------------
# frontier and trend fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frontier:
    """Records kept by the running strict minimum of compute over time."""

    records: tuple[EfficiencyRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise TrendError("frontier must contain at least one record")
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.date <= prev.date:
                raise TrendError(
                    f"frontier dates must strictly increase ({prev.name} -> {cur.name})"
                )
            if cur.total >= prev.total:
                raise TrendError(
                    f"frontier totals must strictly decrease ({prev.name} -> {cur.name})"
                )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.records)

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def frontier(records: Sequence[EfficiencyRecord]) -> Frontier:
    """The strictly improving minimal-compute sequence of the records.

    Records are taken in date order. Among records sharing a date the
    cheapest stands (ties broken by input order), and a record joins
    the frontier only if it is strictly cheaper than everything before
    it. All records must share one threshold.
    """
    if not records:
        raise TrendError("frontier needs at least one record")
    for r in records[1:]:
        _require_same_threshold(records[0], r)
    indexed = sorted(enumerate(records), key=lambda t: (t[1].date, t[0]))
    kept: list[EfficiencyRecord] = []
    i = 0
    while i < len(indexed):
        j = i
        best = indexed[i][1]
        while j + 1 < len(indexed) and indexed[j + 1][1].date == best.date:
            j += 1
            if indexed[j][1].total < best.total:
                best = indexed[j][1]
        if not kept or best.total < kept[-1].total:
            kept.append(best)
        i = j + 1
    return Frontier(records=tuple(kept))


@dataclass(frozen=True)
class TrendFit:
    """An exponential efficiency trend: log2 of compute, linear in months.

    slope is log2(total flops) per month and is negative when
    efficiency improves. doubling_months is the months for required
    compute to halve. intercept anchors the line at the month origin
    of date_to_months. r_squared is 1.0 for an endpoint fit by
    construction.
    """

    method: str
    slope: float
    intercept: float
    doubling_months: float
    r_squared: float
    points: int


def fit_trend(
    records: Sequence[EfficiencyRecord] | Frontier, method: str = "regression"
) -> TrendFit:
    """Fit the efficiency trend through records' (date, total) pairs.

    method "regression" is least squares on (months, log2 total);
    "endpoints" uses only the earliest and latest records, which
    reproduces quoted doubling times of the form elapsed over
    log2(first total / last total).
    """
    if isinstance(records, Frontier):
        records = records.records
    if method not in ("regression", "endpoints"):
        raise TrendError(f"unknown fit method {method!r}; expected regression or endpoints")
    if len(records) < 2:
        raise TrendError("trend fitting needs at least two records")
    ordered = sorted(records, key=lambda r: r.date)
    if ordered[0].date == ordered[-1].date:
        raise TrendError("trend fitting needs records on at least two distinct dates")
    xs = [date_to_months(r.date) for r in ordered]
    ys = [math.log2(r.total) for r in ordered]

    if method == "endpoints":
        slope = (ys[-1] - ys[0]) / (xs[-1] - xs[0])
        intercept = ys[0] - slope * xs[0]
        r2 = 1.0
        n = 2
    else:
        n = len(xs)
        mean_x = sum(xs) / n
        mean_y = sum(ys) / n
        sxx = sum((x - mean_x) ** 2 for x in xs)
        sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
        slope = sxy / sxx
        intercept = mean_y - slope * mean_x
        ss_tot = sum((y - mean_y) ** 2 for y in ys)
        ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
        r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    if slope == 0.0:
        raise TrendError("records show no change in compute; doubling time is undefined")
    if slope > 0.0:
        raise TrendError(
            "required compute rises over these records; no efficiency doubling time exists"
        )
    return TrendFit(
        method=method,
        slope=slope,
        intercept=intercept,
        doubling_months=-1.0 / slope,
        r_squared=r2,
        points=n if method == "endpoints" else len(xs),
    )


# ---------------------------------------------------------------------------
# effective compute
# ---------------------------------------------------------------------------

def moore_factor(period_months: float, doubling_months: float) -> float:
    """Growth factor from steady doubling over a period."""
    if not doubling_months > 0:
        raise TrendError(f"doubling_months must be positive, got {doubling_months!r}")
    return 2.0 ** (period_months / doubling_months)


def effective_compute(factors: Iterable[float]) -> float:
    """Combined multiplier from independent gain factors (their product)."""
    total = 1.0
    for f in factors:
        if not isinstance(f, (int, float)) or isinstance(f, bool) or not f > 0:
            raise TrendError(f"factors must be positive numbers, got {f!r}")
        total *= f
    return total


@dataclass(frozen=True)
class EffectiveComputeModel:
    """Effective compute growth for the largest training runs of a period.

    Three stacked multipliers over period_months: hardware price
    performance doubling every hardware_doubling_months, growth in
    spending on a single run, and algorithmic efficiency gains. The
    defaults describe a six year window with two year hardware
    doubling, a 37500x spending rise and a 25x efficiency gain, which
    combine to 7.5 million times more effective compute.
    """

    hardware_doubling_months: float = 24.0
    spending_factor: float = 37500.0
    efficiency_factor: float = 25.0
    period_months: float = 72.0

    def __post_init__(self):
        for label in ("hardware_doubling_months", "spending_factor",
                      "efficiency_factor", "period_months"):
            if not getattr(self, label) > 0:
                raise TrendError(f"{label} must be positive")

    @property
    def hardware_factor(self) -> float:
        return moore_factor(self.period_months, self.hardware_doubling_months)

    @property
    def total_factor(self) -> float:
        return effective_compute(
            [self.hardware_factor, self.spending_factor, self.efficiency_factor]
        )

    def breakdown(self) -> dict[str, float]:
        return {
            "hardware_factor": self.hardware_factor,
            "spending_factor": self.spending_factor,
            "efficiency_factor": self.efficiency_factor,
            "total_factor": self.total_factor,
        }
