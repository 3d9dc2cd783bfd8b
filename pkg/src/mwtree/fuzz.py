"""Seeded fuzz campaigns over random trees.

Trial ``i`` of a campaign draws everything from ``Philox(SeedSequence([seed, i]))``
so a single trial can be rebuilt with :func:`trial_instance` without running
the others.
"""
import json
import math
from dataclasses import asdict, dataclass, field

from .formulas import beta
from .generate import TOPOLOGIES, WEIGHT_MODES, make_rng, random_topology, random_weights, topology_allows
from .linalg import lu_decompose
from .tree import degree_profile, validate
from .verify import IDENTITIES, run_all

MIXED_CYCLE = ("no-deg2", "one-deg2", "two-plus-deg2", "uniform")


@dataclass(frozen=True)
class FuzzConfig:
    trials: int
    n_range: tuple = (3, 12)
    s_range: tuple = (1, 3)
    weight_mode: str = "diagonal"
    seed: int = 0
    topology: str = "mixed"
    tolerances: dict = field(default_factory=dict)
    # redraw weights until beta is nonsingular (only meaningful without degree-2 vertices)
    nonsingular_beta: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name, (lo, hi) in (("n_range", self.n_range), ("s_range", self.s_range)):
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo}:{hi}")
        if self.n_range[0] < 2 or self.s_range[0] < 1:
            raise ValueError("need n >= 2 and s >= 1")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"unknown weight mode {self.weight_mode!r}")
        if self.topology != "mixed" and self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if not any(topology_allows(self._topology_for(i), n)
                   for i in range(len(MIXED_CYCLE)) for n in range(self.n_range[0], self.n_range[1] + 1)):
            raise ValueError(f"topology {self.topology!r} impossible for n in {self.n_range}")

    def _topology_for(self, trial):
        if self.topology == "mixed":
            return MIXED_CYCLE[trial % len(MIXED_CYCLE)]
        return self.topology


@dataclass
class TrialInfo:
    trial: int
    n: int
    s: int
    topology: str
    branch: str
    regime: str


@dataclass
class IdentityStats:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    max_ratio: float = 0.0
    worst_trial: int = -1

    def add(self, rep, trial):
        if rep.status == "skip":
            self.skipped += 1
            return
        if rep.status == "pass":
            self.passed += 1
        else:
            self.failed += 1
        if not math.isnan(rep.ratio) and (rep.ratio > self.max_ratio or self.worst_trial < 0):
            self.max_ratio = rep.ratio
            self.worst_trial = trial


@dataclass
class Failure:
    identity: str
    seed: int
    trial: int
    ratio: float
    tolerance: float
    asserted: bool
    n: int
    s: int
    topology: str
    regime: str


@dataclass
class FuzzReport:
    config: dict
    trials: list
    identities: dict
    det_agreement: dict
    inverse_agreement: dict
    failures: list

    @property
    def asserted_failures(self):
        return [f for f in self.failures if f.asserted]

    @property
    def ok(self):
        return not self.asserted_failures

    def to_dict(self):
        d = asdict(self)
        return _finite(d)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _finite(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _pick_n(config, topology, rng):
    lo, hi = config.n_range
    ok = [n for n in range(lo, hi + 1) if topology_allows(topology, n)]
    if not ok:
        return None
    return ok[int(rng.integers(len(ok)))]


def trial_instance(config, trial):
    """Rebuild ``(tree, topology)`` for one trial of ``config``."""
    rng = make_rng(config.seed, trial)
    topology = config._topology_for(trial)
    n = _pick_n(config, topology, rng)
    if n is None:
        topology = "uniform"
        n = _pick_n(config, topology, rng)
    s = int(rng.integers(config.s_range[0], config.s_range[1] + 1))
    pairs = random_topology(topology, n, rng)
    for _ in range(100):
        weights = random_weights(len(pairs), s, config.weight_mode, rng)
        t = validate(n, [(u + 1, v + 1, w) for (u, v), w in zip(pairs, weights)], s=s)
        if not config.nonsingular_beta or degree_profile(t).deg2_vertices:
            break
        if not lu_decompose(beta(t)).is_singular(1e-8):
            break
    return t, topology


def fuzz(config):
    stats = {name: IdentityStats() for name in IDENTITIES}
    trials, failures = [], []
    det_rel, sing_piv, inv_rel = [], [], []
    for i in range(config.trials):
        t, topology = trial_instance(config, i)
        reports = run_all(t, tolerances=config.tolerances)
        regime = reports[0].regime
        branch = "?"
        for rep in reports:
            stats[rep.identity].add(rep, i)
            if rep.status == "fail":
                failures.append(Failure(rep.identity, config.seed, i, rep.ratio, rep.tolerance,
                                        rep.asserted, t.n, t.s, topology, regime))
            if rep.identity == "det_vs_oracle":
                branch = rep.detail.get("branch", "?")
                (sing_piv if branch == "TwoPlusDeg2" or "min_pivot" in rep.detail else det_rel).append(rep.ratio)
            elif rep.identity == "inverse_vs_oracle" and rep.status != "skip":
                inv_rel.append(rep.detail.get("rel_to_oracle", math.inf))
        trials.append(TrialInfo(i, t.n, t.s, topology, branch, regime))
    return FuzzReport(
        config=_config_record(config),
        trials=trials,
        identities=stats,
        det_agreement={
            "nonsingular_trials": len(det_rel),
            "max_rel_err": max(det_rel, default=0.0),
            "singular_trials": len(sing_piv),
            "max_pivot_ratio": max(sing_piv, default=0.0),
        },
        inverse_agreement={"trials": len(inv_rel), "max_rel_err": max(inv_rel, default=0.0)},
        failures=failures,
    )


def _config_record(config):
    d = asdict(config)
    d["n_range"] = list(config.n_range)
    d["s_range"] = list(config.s_range)
    return d


def replay(seed_or_config, trial, **config_kwargs):
    """Re-run one trial and return ``(tree, reports)``."""
    config = seed_or_config if isinstance(seed_or_config, FuzzConfig) else FuzzConfig(
        trials=trial + 1, seed=seed_or_config, **config_kwargs)
    t, _ = trial_instance(config, trial)
    return t, run_all(t, tolerances=config.tolerances)

