"""Line-oriented ``key = value`` scenario files.

Example::

    # teleport a seeded random qubit, Carol and Dennis frames
    psi_seed = 7
    i0 = 2
    alice_x = 0
    bob_x = 2
    alice_measure_t = 1
    signal_speed = 2
    frames = 0.0, 0.6
    confirmation = false
    seed = 0

``psi`` may instead be given explicitly as two complex amplitudes
(``psi = 0.6, 0.8j``; Python complex syntax ``re+imj``). ``i0`` is 1..4 or
``sample``. Optional keys: ``tolerance``, ``confirmation_delay``,
``prepare_t``. ``#`` starts a comment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import qcore
from .observer import Geometry
from .teleport import TeleportScenario

REQUIRED = ("i0", "alice_x", "bob_x", "alice_measure_t", "signal_speed", "frames", "seed")
OPTIONAL = ("psi", "psi_seed", "confirmation", "tolerance", "confirmation_delay", "prepare_t")
# explicit amplitudes within this distance of unit norm are renormalized
PSI_NORM_TOL = 1e-6


class ScenarioFileError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioFile:
    psi: qcore.StateVector
    i0: Optional[int]
    geometry: Geometry
    frames: tuple
    confirmation: bool
    seed: int
    tolerance: float = qcore.ATOL
    psi_seed: Optional[int] = None

    def teleport_scenario(self) -> TeleportScenario:
        return TeleportScenario(self.psi, self.i0, self.confirmation, self.seed)


def _float(key, text):
    try:
        val = float(text)
    except ValueError:
        raise ScenarioFileError(f"{key}: not a number: {text!r}") from None
    if not math.isfinite(val):
        raise ScenarioFileError(f"{key}: must be finite")
    return val


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ScenarioFileError(f"{key}: not an integer: {text!r}") from None


def _bool(key, text):
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ScenarioFileError(f"{key}: not a boolean: {text!r}")


def _complex(key, text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ScenarioFileError(f"{key}: not a complex number: {text!r}") from None


def parse_pairs(text: str) -> dict:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioFileError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in REQUIRED + OPTIONAL:
            raise ScenarioFileError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ScenarioFileError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def parse_scenario(text: str, seed: Optional[int] = None,
                   tolerance: Optional[float] = None) -> ScenarioFile:
    """Parse and validate; ``seed``/``tolerance`` override the file's values."""
    kv = parse_pairs(text)
    missing = [k for k in REQUIRED if k not in kv]
    if missing:
        raise ScenarioFileError(f"missing keys: {', '.join(missing)}")

    run_seed = seed if seed is not None else _int("seed", kv["seed"])
    tol = tolerance if tolerance is not None else _float("tolerance", kv.get("tolerance", repr(qcore.ATOL)))
    if not tol > 0:
        raise ScenarioFileError("tolerance must be positive")

    if ("psi" in kv) == ("psi_seed" in kv):
        raise ScenarioFileError("give exactly one of psi, psi_seed")
    psi_seed = None
    if "psi" in kv:
        parts = [p for p in kv["psi"].split(",")]
        if len(parts) != 2:
            raise ScenarioFileError("psi: expected two amplitudes")
        amps = np.array([_complex("psi", p) for p in parts])
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > PSI_NORM_TOL:
            raise ScenarioFileError(f"psi: amplitudes are not normalized (norm {norm:.12g})")
        psi = qcore.StateVector(("psi",), amps / norm)
    else:
        psi_seed = _int("psi_seed", kv["psi_seed"])
        psi = qcore.random_pure_state(psi_seed, 1, ["psi"])

    if kv["i0"].lower() == "sample":
        i0 = None
    else:
        i0 = _int("i0", kv["i0"])
        if i0 not in (1, 2, 3, 4):
            raise ScenarioFileError(f"i0: must be 1..4 or 'sample', got {i0}")

    geometry = Geometry(
        alice_x=_float("alice_x", kv["alice_x"]),
        bob_x=_float("bob_x", kv["bob_x"]),
        alice_measure_t=_float("alice_measure_t", kv["alice_measure_t"]),
        signal_speed=_float("signal_speed", kv["signal_speed"]),
        prepare_t=_float("prepare_t", kv.get("prepare_t", "0")),
        confirmation_delay=_float("confirmation_delay", kv.get("confirmation_delay", "0.1")),
    )
    if not geometry.signal_speed > 0:
        raise ScenarioFileError("signal_speed must be positive")
    if geometry.prepare_t >= geometry.alice_measure_t:
        raise ScenarioFileError("prepare_t must precede alice_measure_t")
    if not geometry.confirmation_delay > 0:
        raise ScenarioFileError("confirmation_delay must be positive")

    frames = tuple(_float("frames", v) for v in kv["frames"].split(",") if v.strip())
    if not frames:
        raise ScenarioFileError("frames: need at least one velocity")
    for v in frames:
        if not abs(v) < 1 - 1e-12:
            raise ScenarioFileError(f"frames: |v| must be < 1, got {v}")

    return ScenarioFile(
        psi=psi, i0=i0, geometry=geometry, frames=frames,
        confirmation=_bool("confirmation", kv.get("confirmation", "false")),
        seed=run_seed, tolerance=tol, psi_seed=psi_seed,
    )


def load_scenario(path, seed=None, tolerance=None) -> ScenarioFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, seed=seed, tolerance=tolerance)


DEFAULT_SCENARIO = """\
# rest frame (Carol) and a frame past the reversal threshold (Dennis)
psi_seed = 7
i0 = 1
alice_x = 0
bob_x = 2
alice_measure_t = 1
signal_speed = 2
frames = 0.0, 0.6
confirmation = false
seed = 0
"""
