"""Name-to-class registries and construction from JSON-style configs.

Seeds are derived from one master seed with splitmix64: child ``k`` of seed
``s`` is the ``k``-th splitmix64 output from state ``s``, i.e.
``mix(s + k * 0x9E3779B97F4A7C15 mod 2**64)``. The stream takes child 1 of
the master seed and model ``i`` (0-based, config order) takes child
``i + 2``. A component's ``seed`` parameter receives its derived seed
directly; the random-RBF sample seed and nested configs (base estimators,
concept-drift sub-streams) take further children of it.
"""

from __future__ import annotations

import inspect

from .core import ConfigError, StreamModel
from .drift import DETECTORS
from .generators import (GENERATOR_DEFAULTS, GENERATORS, CSVStream, Centroid,
                         ConceptDriftStream)
from .learners import LEARNERS

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

EVALUATORS = ("prequential", "holdout")
STREAM_TYPES = tuple(GENERATORS) + ("csv", "concept_drift")


def splitmix64_mix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, k: int) -> int:
    return splitmix64_mix((int(seed) + k * GOLDEN_GAMMA) & MASK64)


def _check_keys(section: str, given: dict, allowed) -> None:
    if not isinstance(given, dict):
        raise ConfigError(f"'{section}' must be an object")
    for key in given:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in {section}")


def _params(cfg, where):
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"'params' of {where} must be an object")
    return dict(params)


def _accepted_params(cls):
    return [p for p in inspect.signature(cls.__init__).parameters if p != "self"]


def _construct(cls, params, where):
    accepted = _accepted_params(cls)
    for key in params:
        if key not in accepted:
            raise ConfigError(f"unknown parameter '{key}' for {where}")
    try:
        return cls(**params)
    except (TypeError, ValueError, OSError) as exc:
        raise ConfigError(f"invalid parameters for {where}: {exc}") from exc


def build_stream(cfg: dict, seed: int):
    """Stream from ``{"type": ..., "params": {...}}``."""
    _check_keys("stream", cfg, ("type", "params"))
    kind = cfg.get("type")
    if kind not in STREAM_TYPES:
        raise ConfigError(f"unknown stream type '{kind}'")
    params = _params(cfg, f"stream '{kind}'")
    if kind == "csv":
        return _construct(CSVStream, params, "stream 'csv'")
    if kind == "concept_drift":
        _check_keys("concept_drift params", params, ("stream", "drift_stream", "position"))
        for key in ("stream", "drift_stream"):
            if key not in params:
                raise ConfigError(f"missing key '{key}' in concept_drift params")
        return ConceptDriftStream(build_stream(params["stream"], derive_seed(seed, 1)),
                                  build_stream(params["drift_stream"], derive_seed(seed, 2)),
                                  position=params.get("position", 5000))
    cls = GENERATORS[kind]
    params = {**GENERATOR_DEFAULTS.get(kind, {}), **params}
    if "centroids" in params and params["centroids"] is not None:
        try:
            params["centroids"] = [Centroid(**c) for c in params["centroids"]]
        except TypeError as exc:
            raise ConfigError(f"invalid centroid in stream '{kind}': {exc}") from exc
    accepted = _accepted_params(cls)
    derived = {"seed": seed, "seed_model": seed, "seed_sample": derive_seed(seed, 1)}
    for name, value in derived.items():
        if name in accepted and name not in params:
            params[name] = value
    return _construct(cls, params, f"stream '{kind}'")


def build_model(cfg: dict, seed: int) -> StreamModel:
    """Model from ``{"type": ..., "params": {...}}``; nested ``base_estimator`` configs allowed."""
    _check_keys("model", cfg, ("name", "type", "params"))
    kind = cfg.get("type")
    if kind not in LEARNERS:
        raise ConfigError(f"unknown model type '{kind}'")
    cls = LEARNERS[kind]
    params = _params(cfg, f"model type '{kind}'")
    if isinstance(params.get("base_estimator"), dict):
        params["base_estimator"] = build_model(params["base_estimator"], derive_seed(seed, 1))
    if "seed" in _accepted_params(cls) and "seed" not in params:
        params["seed"] = seed
    return _construct(cls, params, f"model type '{kind}'")


def build_detector(name: str, **params):
    if name not in DETECTORS:
        raise ConfigError(f"unknown detector '{name}'")
    return _construct(DETECTORS[name], params, f"detector '{name}'")


def listing():
    """``(section, names)`` pairs in a stable order."""
    return [
        ("generators", list(GENERATORS)),
        ("learners", list(LEARNERS)),
        ("detectors", list(DETECTORS)),
        ("evaluators", list(EVALUATORS)),
    ]
