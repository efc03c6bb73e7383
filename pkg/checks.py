import functools
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

import config

log = logging.getLogger(__name__)


class Status(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


@dataclass
class Report:
    suite: str
    status: Status
    checked: int = 0
    violations: int = 0
    witness: dict = None
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    parts: list = field(default_factory=list)
    seed: int = None
    elapsed: float = 0.0
    version: str = config.TOOL_VERSION

    def __post_init__(self):
        if self.status is Status.FAIL and self.witness is None:
            raise ValueError(f"{self.suite}: a FAIL report needs a witness")

    @property
    def passed(self):
        return self.status is Status.PASS

    @property
    def failed(self):
        return self.status is Status.FAIL

    def part(self, suite):
        """Find a nested report by suite id"""
        for p in self.parts:
            if p.suite == suite:
                return p
            found = p.part(suite)
            if found is not None:
                return found
        return None

    @classmethod
    def skip(cls, suite, reason, seed=None):
        log.warning("%s skipped: %s", suite, reason)
        return cls(suite, Status.SKIP, notes=[reason], seed=seed)

    @classmethod
    def combine(cls, suite, parts, notes=(), seed=None):
        """Fold sub-reports: any FAIL fails, SKIP only if every part skipped"""
        parts = list(parts)
        statuses = [p.status for p in parts]
        if Status.FAIL in statuses:
            status = Status.FAIL
            first = next(p for p in parts if p.failed)
            witness = {"part": first.suite, **first.witness}
        elif statuses and all(s is Status.SKIP for s in statuses):
            status, witness = Status.SKIP, None
        else:
            status, witness = Status.PASS, None
        return cls(suite, status,
                   checked=sum(p.checked for p in parts),
                   violations=sum(p.violations for p in parts),
                   witness=witness, notes=list(notes), parts=parts, seed=seed,
                   elapsed=sum(p.elapsed for p in parts))

    def to_dict(self, timing=True):
        d = {
            "suite": self.suite,
            "status": self.status.value,
            "checked": self.checked,
            "violations": self.violations,
            "seed": self.seed,
            "version": self.version,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.witnesses:
            d["witnesses"] = self.witnesses
        if self.notes:
            d["notes"] = list(self.notes)
        if self.parts:
            d["parts"] = [p.to_dict(timing) for p in self.parts]
        if timing:
            d["timing"] = {"elapsed": round(self.elapsed, 6)}
        return d


def serialize(value):
    """JSON-ready form of the values that show up in witnesses. Rationals become "p/q" strings."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.ndarray):
        return [serialize(v) for v in value.tolist()] if value.ndim else serialize(value.item())
    if isinstance(value, dict):
        return {str(k): serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialize(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


def is_zero(value):
    if value is None:
        return True
    if isinstance(value, np.ndarray):
        return not np.any(value != 0)
    if hasattr(value, "is_zero"):
        return value.is_zero()
    if isinstance(value, (list, tuple)):
        return all(is_zero(v) for v in value)
    return not value


## The generic checker.
## `cases` is an iterable of test cases, consumed in the given (lexicographic) order.
## `defect(case)` must return something zero-like when the identity holds on the
## case, and the nonzero defect otherwise.
## `describe(case, defect)` turns a failing case into a JSON-ready witness dict.
## The first failing case is the witness; with collect_all the loop keeps going
## and gathers every violation.
def sweep(suite, cases, defect, describe=None, collect_all=False, seed=None, notes=()):
    if describe is None:
        describe = lambda case, d: {"case": serialize(case), "defect": serialize(d)}

    checked = violations = 0
    witness = None
    witnesses = []
    start = time.time()

    for case in cases:
        checked += 1
        d = defect(case)
        if not is_zero(d):
            violations += 1
            w = describe(case, d)
            if witness is None:
                witness = w
            if not collect_all:
                break
            witnesses.append(w)
        if checked % 1000 == 0:
            log.debug("%s: %d cases checked, %d violations", suite, checked, violations)

    status = Status.FAIL if violations else Status.PASS
    return Report(suite, status, checked=checked, violations=violations, witness=witness,
                  witnesses=witnesses, notes=list(notes), seed=seed, elapsed=time.time() - start)


def first_nonzero(defect):
    """Lexicographically first nonzero index of an array, or None"""
    hits = np.argwhere(defect != 0)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def nonzero_cases(defect, case_axes):
    """Index tuples (in C order, i.e. lexicographic) over the first `case_axes` axes
    of a defect tensor where some trailing entry is nonzero"""
    mask = defect != 0
    if defect.ndim > case_axes:
        mask = mask.any(axis=tuple(range(case_axes, defect.ndim)))
    return [tuple(int(i) for i in idx) for idx in np.argwhere(mask)]


def tensor_report(suite, defect, case_axes, describe, collect_all=False, seed=None, notes=()):
    """Report for a vectorized checker that produced the whole defect tensor at once"""
    hits = nonzero_cases(defect, case_axes)
    checked = int(np.prod(defect.shape[:case_axes])) if case_axes else 1
    if not hits:
        return Report(suite, Status.PASS, checked=checked, notes=list(notes), seed=seed)
    shown = hits if collect_all else hits[:1]
    witnesses = [describe(h, defect[h]) for h in shown]
    return Report(suite, Status.FAIL, checked=checked, violations=len(hits),
                  witness=witnesses[0], witnesses=witnesses if collect_all else [],
                  notes=list(notes), seed=seed)


def timed(fn):
    """Stamp the elapsed time on the report a suite returns and log the outcome"""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.time()
        report = fn(*args, **kwargs)
        report.elapsed = time.time() - start
        log.info("%s: %s (%d checked, %d violations) in %.2fs", report.suite,
                 report.status.value, report.checked, report.violations, report.elapsed)
        return report
    return wrapper
