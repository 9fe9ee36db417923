"""Locate/extract timing protocol over every backend configuration.

A fixed-seed generator holds out ``misses`` strings, builds each backend on
the rest, and times ``hits`` successful locates, the held-out unsuccessful
locates and ``extracts`` extracts. Every backend sees the same query lists.
Times are wall-clock per batch divided by the batch size, averaged over the
repetitions, in microseconds.
"""

import csv
import random
import time
from dataclasses import dataclass, field
from itertools import product

from . import core
from .errors import ParameterError

CSV_FIELDS = ("backend", "params", "space_percent", "locate_hit_us", "locate_miss_us", "extract_us")

class ConfigError(ParameterError):
    pass


@dataclass
class BenchConfig:
    backends: list = field(default_factory=lambda: list(core.BACKEND_NAMES))
    alpha: list = field(default_factory=lambda: [core.DEFAULT_PARAMS["alpha"]])
    bucket: list = field(default_factory=lambda: [core.DEFAULT_PARAMS["bucket"]])
    x: list = field(default_factory=lambda: [core.DEFAULT_PARAMS["x"]])
    hits: int = 10_000
    misses: int = 1_000
    extracts: int = 10_000
    repetitions: int = 10
    seed: int = 0
    baseline: bool = True

    def validate(self):
        for name in ("hits", "misses", "extracts", "repetitions"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        unknown = [b for b in self.backends if b not in core.BACKENDS]
        if unknown or not self.backends:
            raise ConfigError(f"unknown backends {unknown}; choose from {', '.join(core.BACKEND_NAMES)}")
        if not all(0 < a < 1 for a in self.alpha):
            raise ConfigError("alpha values must lie in (0, 1)")
        if not all(0 < v <= 1 for v in self.x):
            raise ConfigError("x values must lie in (0, 1]")
        if not all(isinstance(v, int) and v >= 2 for v in self.bucket):
            raise ConfigError("bucket sizes must be integers >= 2")

    def configurations(self):
        """(backend, params) pairs, sweeping only the parameters each backend uses."""
        for name in self.backends:
            keys = core.get_backend(name).params
            for values in product(*(getattr(self, k) for k in keys)):
                yield name, dict(zip(keys, values))


def _parse_value(key, text):
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        if key == "backends":
            return items
        if key in ("alpha", "x"):
            return [float(t) for t in items]
        if key == "bucket":
            return [int(t) for t in items]
        if key == "baseline":
            return text.strip().lower() in ("1", "true", "yes", "on")
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text.strip()!r}")


def parse_config(text):
    """Parse ``key = value`` lines; lists are comma-separated, ``#`` starts a comment."""
    cfg = BenchConfig()
    known = set(BenchConfig.__dataclass_fields__)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        setattr(cfg, key, _parse_value(key, value.strip().strip('"').strip("'")))
    cfg.validate()
    return cfg


def split_workload(strings, cfg):
    """Held-out misses, the build set, and the member queries, all from ``cfg.seed``."""
    strings = core.prepare_strings(strings)
    if len(strings) <= cfg.misses:
        raise ConfigError(f"corpus of {len(strings)} strings cannot hold out {cfg.misses}")
    rnd = random.Random(cfg.seed)
    held = set(rnd.sample(range(len(strings)), cfg.misses))
    misses = [strings[k] for k in sorted(held)]
    members = [s for k, s in enumerate(strings) if k not in held]
    hits = rnd.choices(members, k=cfg.hits)
    extract_targets = rnd.choices(members, k=cfg.extracts)
    rnd.shuffle(misses)
    return members, hits, misses, extract_targets


def _time_per_query(fn, queries, repetitions):
    total = 0.0
    for _ in range(repetitions):
        t = time.perf_counter()
        for q in queries:
            fn(q)
        total += time.perf_counter() - t
    return 1e6 * total / (repetitions * len(queries))


def _params_text(params):
    return ";".join(f"{k}={v}" for k, v in params.items())


def measure(d, hits, misses, extract_targets, repetitions):
    ids = [d.locate(s) for s in extract_targets]
    return (_time_per_query(d.locate, hits, repetitions),
            _time_per_query(d.locate, misses, repetitions),
            _time_per_query(d.extract, ids, repetitions))


def run(strings, cfg, log=None):
    """Return one dict per configuration (plus the plain baseline row)."""
    members, hits, misses, targets = split_workload(strings, cfg)
    rows = []
    if cfg.baseline:
        ref = core.ReferenceDictionary(members)
        rows.append(dict(zip(CSV_FIELDS, ("plain", "", 100.0, *measure(ref, hits, misses, targets, cfg.repetitions)))))
    for name, params in cfg.configurations():
        t = time.perf_counter()
        d = core.build(members, name, params)
        _, percent = d.space_report()
        row = dict(zip(CSV_FIELDS, (name, _params_text(params), percent,
                                    *measure(d, hits, misses, targets, cfg.repetitions))))
        rows.append(row)
        if log:
            log(f"{name} {_params_text(params)}: {percent:.1f}% in {time.perf_counter() - t:.1f}s")
    return rows


def write_csv(rows, sink, cfg):
    sink.write(f"# seed={cfg.seed} hits={cfg.hits} misses={cfg.misses} "
               f"extracts={cfg.extracts} repetitions={cfg.repetitions}\n")
    w = csv.DictWriter(sink, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.3f}" if isinstance(v, float) else v) for k, v in row.items()})
