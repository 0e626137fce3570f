"""Scenario config files: flat ``key = value`` lines.

Blank lines and ``#`` comments are ignored. Per-worker overrides use dotted
keys with 1-based worker numbers, e.g. ``worker.3.p_gg = 0.9``.
"""

from __future__ import annotations

from pathlib import Path

from .field import DEFAULT_PRIME
from .sim import ConfigError, ScenarioConfig
from .worker_net import WorkerParams

INT_KEYS = ("n", "r", "k", "deg_f", "rounds", "seed", "chunk_len", "prime")
FLOAT_KEYS = ("d", "mu_g", "mu_b", "p_gg", "p_bb", "static_good_prob")
STR_KEYS = ("strategy", "fidelity")
WORKER_KEYS = ("p_gg", "p_bb")
REQUIRED = ("n", "r", "k", "deg_f", "d", "mu_g", "mu_b")

DEFAULTS = {
    "strategy": "lea",
    "fidelity": "analytic",
    "rounds": 100_000,
    "seed": 0,
    "chunk_len": 4,
    "prime": DEFAULT_PRIME,
    "static_good_prob": None,
}


def parse_text(text: str, source: str = "<config>") -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = (value, lineno)
    return values


def _convert(key: str, value: str, kind, source: str, lineno: int):
    value = value.strip().strip('"').strip("'")
    if kind is str:
        return value
    if value.lower() in ("none", "") and key == "static_good_prob":
        return None
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{source}:{lineno}: {key} = {value!r} is not a valid {kind.__name__}") from None


def config_from_text(text: str, source: str = "<config>") -> ScenarioConfig:
    raw = parse_text(text, source)
    flat: dict = dict(DEFAULTS)
    overrides: dict[int, dict[str, float]] = {}
    for key, (value, lineno) in raw.items():
        if key.startswith("worker."):
            parts = key.split(".")
            if len(parts) != 3 or not parts[1].isdigit() or parts[2] not in WORKER_KEYS:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
            overrides.setdefault(int(parts[1]), {})[parts[2]] = _convert(key, value, float, source, lineno)
        elif key in INT_KEYS:
            flat[key] = _convert(key, value, int, source, lineno)
        elif key in FLOAT_KEYS:
            flat[key] = _convert(key, value, float, source, lineno)
        elif key in STR_KEYS:
            flat[key] = _convert(key, value, str, source, lineno)
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")

    for key in REQUIRED:
        if key not in flat:
            raise ConfigError(f"{source}: missing required key {key!r}")
    n = flat["n"]
    if n < 1:
        raise ConfigError(f"{source}: n must be >= 1")
    if not flat["mu_g"] > flat["mu_b"]:
        raise ConfigError(f"{source}: mu_g must exceed mu_b (mu_g={flat['mu_g']}, mu_b={flat['mu_b']})")
    bad = [w for w in overrides if not 1 <= w <= n]
    if bad:
        raise ConfigError(f"{source}: worker.{bad[0]} is outside 1..{n}")

    workers = []
    for i in range(1, n + 1):
        own = overrides.get(i, {})
        params = {}
        for key in WORKER_KEYS:
            if key in own:
                params[key] = own[key]
            elif key in flat:
                params[key] = flat[key]
            else:
                raise ConfigError(f"{source}: missing required key {key!r} (needed by worker {i})")
        try:
            workers.append(WorkerParams(params["p_gg"], params["p_bb"], flat["mu_g"], flat["mu_b"]))
        except ValueError as exc:
            name = f"worker.{i}" if own else "p_gg/p_bb"
            raise ConfigError(f"{source}: {name}: {exc}") from None

    return ScenarioConfig(
        n=n, r=flat["r"], k=flat["k"], deg_f=flat["deg_f"], d=flat["d"], workers=workers,
        strategy=flat["strategy"], static_good_prob=flat["static_good_prob"],
        rounds=flat["rounds"], seed=flat["seed"], fidelity=flat["fidelity"],
        chunk_len=flat["chunk_len"], prime=flat["prime"],
    )


def parse_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return config_from_text(text, str(path))


def format_config(cfg: ScenarioConfig) -> str:
    """Canonical text form; ``config_from_text(format_config(c)) == c``."""
    base = cfg.workers[0]
    lines = [
        f"n = {cfg.n}",
        f"r = {cfg.r}",
        f"k = {cfg.k}",
        f"deg_f = {cfg.deg_f}",
        f"d = {cfg.d!r}",
        f"mu_g = {cfg.mu_g!r}",
        f"mu_b = {cfg.mu_b!r}",
        f"p_gg = {base.p_gg!r}",
        f"p_bb = {base.p_bb!r}",
        f"strategy = {cfg.strategy}",
        f"static_good_prob = {cfg.static_good_prob!r}",
        f"rounds = {cfg.rounds}",
        f"seed = {cfg.seed}",
        f"fidelity = {cfg.fidelity}",
        f"chunk_len = {cfg.chunk_len}",
        f"prime = {cfg.prime}",
    ]
    for i, w in enumerate(cfg.workers, start=1):
        if w.p_gg != base.p_gg:
            lines.append(f"worker.{i}.p_gg = {w.p_gg!r}")
        if w.p_bb != base.p_bb:
            lines.append(f"worker.{i}.p_bb = {w.p_bb!r}")
    return "\n".join(lines) + "\n"
