"""Experiment orchestration: generate, extract, preprocess, train, evaluate.

Configurations are plain dicts (usually loaded from YAML, see
``configs/``).  Everything downstream of the config is a deterministic
function of it; worker pools only change wall-clock time, never output.
"""

from __future__ import annotations

import copy
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import data
from .diagrams import bottleneck
from .features import (BinningSpec, FeatureMatrix, assemble, discretize, mlpca_column_names,
                       plh_column_names, standardize, write_csv)
from .geometry import PointCloud, hausdorff
from .learn import Metrics, evaluate, train_svm
from .mlpca import mlpca_features_batch
from .plh import DEFAULT_RESOLUTION, build_sphere_complex, plh_diagram_on, plh_features_batch

log = logging.getLogger(__name__)

MODES = {"plh": ("plh",), "mlpca": ("mlpca",), "mlsa": ("mlpca", "plh")}
MODE_LABELS = {"plh": "PLH", "mlpca": "MLPCA", "mlsa": "MLSA"}
RESULTS_HEADER = "features,bins,sensitivity,specificity,max_error"

DEFAULTS = {
    "crossing": {
        "points_per_instance": 200,
        "radii": [0.1, 0.2, 0.3],
        "plh_spec": [[0, 6]],
        "layout": "crossing-36",
    },
    "sides": {
        "n_segment": 200,
        "n_ambient": 200,
        "radii": [0.2, 0.4],
        "plh_spec": [[1, 1]],
        "layout": "sides-14",
    },
    "lidar": {
        "radii": [0.0625, 0.125],
        "plh_spec": [[0, 1], [1, 1]],
        "layout": "lidar-31",
        "labels": [0, 1],
        "train_ids": [1, 2, 4, 6, 8],
        "test_ids": [3, 5, 7, 9, 10],
        "sample_per_subset": 1000,
    },
}
COMMON = {
    "seed": 0,
    "train_instances": 50,
    "test_instances": 15,
    "resolution": None,
    "modes": ["plh", "mlpca", "mlsa"],
    "binning": ["none", "bins10"],
    "svm": {"lam": 1e-4, "epochs": 50, "seed": 0},
    "jitter": 0.0,
    "out": None,
}


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = yaml.safe_load(fh) or {}
    base = Path(path).parent
    if cfg.get("kind") == "lidar" and "file" in cfg and not Path(cfg["file"]).is_absolute():
        cfg["file"] = str(base / cfg["file"])
    return cfg


def validate_config(cfg: dict) -> dict:
    """Fill defaults and check the schema; raises :class:`ConfigError` listing every problem."""
    errors = []
    kind = cfg.get("kind")
    if kind not in DEFAULTS:
        raise ConfigError(f"kind must be one of {sorted(DEFAULTS)}, got {kind!r}")
    full = copy.deepcopy(COMMON)
    full.update(copy.deepcopy(DEFAULTS[kind]))
    for k, v in cfg.items():
        if k == "svm":
            full["svm"].update(v or {})
        else:
            full[k] = v
    known = set(COMMON) | set(DEFAULTS[kind]) | {"kind", "name", "classes", "file"}
    errors += [f"unknown key {k!r}" for k in cfg if k not in known]
    full.setdefault("name", kind)
    if kind in ("crossing", "sides"):
        classes = full.get("classes")
        valid = set(data.CROSSING_SHAPES) if kind == "crossing" else {"one", "both"}
        if not (isinstance(classes, list) and len(classes) == 2 and set(classes) <= valid
                and classes[0] != classes[1]):
            errors.append(f"classes must be two distinct names from {sorted(valid)}")
        for key in ("train_instances", "test_instances"):
            if not (isinstance(full[key], int) and full[key] >= 1):
                errors.append(f"{key} must be a positive integer")
    if kind == "lidar":
        if "file" not in full:
            errors.append("lidar experiments need a 'file'")
        full.setdefault("classes", [str(l) for l in full["labels"]])
    radii = full["radii"]
    if not (isinstance(radii, list) and radii and all(isinstance(r, (int, float)) and r > 0 for r in radii)
            and all(a < b for a, b in zip(radii, radii[1:]))):
        errors.append("radii must be a strictly increasing list of positive numbers")
    if any(m not in MODES for m in full["modes"]):
        errors.append(f"modes must be drawn from {sorted(MODES)}")
    if any(b not in ("none", "bins10") for b in full["binning"]):
        errors.append("binning entries must be 'none' or 'bins10'")
    svm = full["svm"]
    if not (isinstance(svm.get("lam"), (int, float)) and svm["lam"] > 0):
        errors.append("svm.lam must be positive")
    if not (isinstance(svm.get("epochs"), int) and svm["epochs"] >= 1):
        errors.append("svm.epochs must be a positive integer")
    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))
    full["radii"] = [float(r) for r in radii]
    full["plh_spec"] = [tuple(int(x) for x in s) for s in full["plh_spec"]]
    return full


@contextmanager
def stage(name: str, timings: dict | None = None):
    t0 = time.perf_counter()
    try:
        yield
    except Exception as exc:
        raise RuntimeError(f"stage {name!r} failed: {exc}") from exc
    finally:
        dt = time.perf_counter() - t0
        log.info("%s: %.2fs", name, dt)
        if timings is not None:
            timings[name] = dt


def _instance_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


@dataclass(frozen=True)
class Task:
    """One cloud plus the points where features are extracted (picklable)."""

    points: np.ndarray
    centers: np.ndarray
    label: int
    radii: tuple
    plh_spec: tuple
    resolution: int | None
    coords: bool


def extract(task: Task) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    cloud = PointCloud(task.points)
    m = mlpca_features_batch(cloud, task.centers, task.radii)
    p = plh_features_batch(cloud, task.centers, task.radii, task.plh_spec, task.resolution)
    return m, p, (task.centers.copy() if task.coords else None)


def _map(fn, items, threads: int):
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _synthetic_tasks(cfg: dict, split_idx: int, count: int) -> list[Task]:
    tasks = []
    for ci, name in enumerate(cfg["classes"]):
        label = 1 if ci == 0 else -1
        for i in range(count):
            s = _instance_seed(cfg["seed"], ci, split_idx, i)
            if cfg["kind"] == "crossing":
                cloud = data.generate_crossing(name, cfg["points_per_instance"], s, cfg["jitter"])
                centers = cloud.points
            else:
                cloud, mask = data.generate_sides(name, cfg["n_segment"], cfg["n_ambient"], s,
                                                  cfg["jitter"])
                centers = cloud.points[mask]
            tasks.append(Task(cloud.points, centers, label, tuple(cfg["radii"]),
                              tuple(cfg["plh_spec"]), cfg["resolution"], False))
    return tasks


def _lidar_tasks(cfg: dict) -> tuple[list[Task], list[Task]]:
    sets = data.load_labeled_xyz(cfg["file"], tuple(cfg["labels"]))
    train, test = data.split(sets, cfg["train_ids"], cfg["test_ids"])
    out = []
    for si, part in enumerate((train, test)):
        tasks = []
        for c in part.clouds:
            pts = c.cloud.points
            k = cfg["sample_per_subset"]
            rng = np.random.default_rng(_instance_seed(cfg["seed"], c.label, c.subset))
            centers = pts if len(pts) <= k else pts[np.sort(rng.choice(len(pts), k, replace=False))]
            label = 1 if c.label == cfg["labels"][0] else -1
            tasks.append(Task(pts, centers, label, tuple(cfg["radii"]), tuple(cfg["plh_spec"]),
                              cfg["resolution"], True))
        out.append(tasks)
    return out[0], out[1]


def _matrix(cfg: dict, results, tasks: list[Task]) -> FeatureMatrix:
    dim = tasks[0].centers.shape[1]
    mlpca = np.vstack([r[0] for r in results])
    plh = np.vstack([r[1] for r in results])
    coords = np.vstack([r[2] for r in results]) if tasks[0].coords else None
    labels = np.concatenate([np.full(len(t.centers), t.label) for t in tasks])
    layout = cfg["layout"]
    try:
        return assemble(layout, mlpca, plh, coords, labels,
                        mlpca_column_names(cfg["radii"], dim),
                        plh_column_names(cfg["radii"], cfg["plh_spec"]))
    except ValueError:
        if layout == "generic":
            raise
        # radii or degree specs other than the defaults change the widths
        return assemble("generic", mlpca, plh, coords, labels,
                        mlpca_column_names(cfg["radii"], dim),
                        plh_column_names(cfg["radii"], cfg["plh_spec"]))


def extract_features(cfg: dict, threads: int = 1, timings: dict | None = None):
    """Build the train and test feature matrices for a validated config."""
    with stage("generate", timings):
        if cfg["kind"] == "lidar":
            train_tasks, test_tasks = _lidar_tasks(cfg)
        else:
            train_tasks = _synthetic_tasks(cfg, 0, cfg["train_instances"])
            test_tasks = _synthetic_tasks(cfg, 1, cfg["test_instances"])
    with stage("extract", timings):
        res = _map(extract, train_tasks + test_tasks, threads)
    train = _matrix(cfg, res[:len(train_tasks)], train_tasks)
    test = _matrix(cfg, res[len(train_tasks):], test_tasks)
    return train, test


@dataclass(frozen=True)
class ResultRow:
    mode: str
    binning: str
    metrics: Metrics

    def csv(self) -> str:
        m = self.metrics
        return (f"{self.mode},{self.binning},{m.sensitivity:.4f},{m.specificity:.4f},"
                f"{m.max_error:.4f}")


def _with_coords(train: FeatureMatrix, blocks) -> tuple:
    # raw coordinates ride along with the MLPCA block when present; the
    # PLH-only mode stays purely topological
    if "coords" in train.blocks and "mlpca" in blocks:
        return tuple(blocks) + ("coords",)
    return tuple(blocks)


def classify(cfg: dict, train: FeatureMatrix, test: FeatureMatrix,
             timings: dict | None = None) -> list[ResultRow]:
    rows = []
    svm = cfg["svm"]
    spec = BinningSpec()
    with stage("train+evaluate", timings):
        for binning in cfg["binning"]:
            for mode in cfg["modes"]:
                blocks = _with_coords(train, MODES[mode])
                tr, te = train.select(blocks), test.select(blocks)
                tr_s, st = standardize(tr)
                te_s = st.apply(te)
                if binning == "bins10":
                    tr_s, te_s = discretize(tr_s, spec), discretize(te_s, spec)
                model = train_svm(tr_s, svm["lam"], svm["epochs"], svm["seed"])
                rows.append(ResultRow(mode, binning, evaluate(model, te_s)))
    return rows


def render_table(name: str, rows: list[ResultRow]) -> str:
    lines = [name, f"{'Features':<9}{'Bins':<6}{'Sens.':>9}{'Spec.':>9}{'Max Errors':>12}"]
    for r in rows:
        m = r.metrics
        lines.append(f"{MODE_LABELS[r.mode]:<9}{'No' if r.binning == 'none' else '10':<6}"
                     f"{m.sensitivity:>8.2f}%{m.specificity:>8.2f}%{m.max_error:>11.2f}%")
    return "\n".join(lines) + "\n"


def write_results(out: Path, name: str, rows: list[ResultRow]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(RESULTS_HEADER + "\n" + "".join(r.csv() + "\n" for r in rows))
    (out / "results.txt").write_text(render_table(name, rows))


def run_experiment(cfg: dict, out=None, threads: int = 1) -> list[ResultRow]:
    """Full pipeline; writes results and feature CSVs when an output dir is given."""
    cfg = validate_config(cfg)
    timings: dict = {}
    train, test = extract_features(cfg, threads, timings)
    rows = classify(cfg, train, test, timings)
    out = out or cfg.get("out")
    if out:
        out = Path(out)
        write_results(out, cfg["name"], rows)
        write_csv(out / "features_train.csv", train)
        write_csv(out / "features_test.csv", test)
    log.info("timings: %s", {k: round(v, 2) for k, v in timings.items()})
    return rows


def dump_features(cfg: dict, out, threads: int = 1) -> tuple[Path, Path]:
    cfg = validate_config(cfg)
    train, test = extract_features(cfg, threads)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    paths = (out / "features_train.csv", out / "features_test.csv")
    write_csv(paths[0], train)
    write_csv(paths[1], test)
    return paths


# --- stability checks -------------------------------------------------------

@dataclass
class StabilityCheck:
    name: str
    max_ratio: float = 0.0  # distance / (bound + slack)
    max_excess: float = -np.inf  # distance - bound - slack
    trials: int = 0
    violations: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, distance: float, bound: float, slack: float) -> None:
        self.trials += 1
        self.max_ratio = max(self.max_ratio, distance / (bound + slack))
        self.max_excess = max(self.max_excess, distance - bound - slack)
        if distance > bound + slack:
            self.violations += 1


def _random_instance(rng: np.random.Generator, dim: int):
    n = int(rng.integers(10, 120))
    if rng.random() < 0.5:
        pts = rng.random((n, dim))
    else:
        # points near a few random segments: stratified, like the shapes above
        a, b = rng.random((3, dim)), rng.random((3, dim))
        which = rng.integers(0, 3, n)
        pts = a[which] + rng.random((n, 1)) * (b[which] - a[which])
        pts += rng.normal(scale=0.01, size=pts.shape)
    z = rng.uniform(0.25, 0.75, dim)
    R = float(rng.uniform(0.05, 0.4))
    return PointCloud(pts), z, R


def stability_suite(seed: int = 0, trials: int = 100, resolution: int | None = None,
                    dim: int = 2, degrees=(0, 1)) -> dict[str, StabilityCheck]:
    """Randomized checks of the radius, center and cloud stability bounds.

    Every check compares PLH diagrams in bottleneck distance against the
    perturbation size plus ``2 * max edge length`` of the sphere complexes
    involved.  The cloud check evaluates both clouds on one shared sphere.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    res = DEFAULT_RESOLUTION[dim] if resolution is None else resolution
    checks = {k: StabilityCheck(k) for k in ("radius", "center", "cloud")}
    for _ in range(trials):
        cloud, z, R = _random_instance(rng, dim)
        R2 = float(np.clip(R + rng.uniform(-0.05, 0.05), 0.02, None))
        z2 = z + rng.normal(scale=0.03, size=dim)
        cloud2 = PointCloud(cloud.points + rng.uniform(-0.02, 0.02, cloud.points.shape))
        s1 = build_sphere_complex(z, R, res)
        s_r = build_sphere_complex(z, R2, res)
        s_z = build_sphere_complex(z2, R, res)
        for k in degrees:
            base = plh_diagram_on(s1, cloud, k)
            checks["radius"].record(bottleneck(base, plh_diagram_on(s_r, cloud, k)), abs(R - R2),
                                    2 * max(s1.max_edge_length, s_r.max_edge_length))
            checks["center"].record(bottleneck(base, plh_diagram_on(s_z, cloud, k)),
                                    float(np.linalg.norm(z - z2)), 2 * s1.max_edge_length)
            checks["cloud"].record(bottleneck(base, plh_diagram_on(s1, cloud2, k)),
                                   hausdorff(cloud, cloud2), 2 * s1.max_edge_length)
    return checks


def format_stability(checks: dict[str, StabilityCheck]) -> str:
    lines = []
    for c in checks.values():
        lines.append(f"{c.name:<7} trials={c.trials:<4} max_ratio={c.max_ratio:.4f} "
                     f"violations={c.violations} {'PASS' if c.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


__all__ = [
    "ConfigError", "load_config", "validate_config", "run_experiment", "dump_features",
    "extract_features", "classify", "render_table", "write_results", "stability_suite",
    "format_stability",
]
