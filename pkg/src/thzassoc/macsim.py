"""Beacon-interval initial-access simulator.

Every BI starts with a beacon header: the AP sweeps its sectors (BTI) and
every searching station locks on, then synchronised stations pick one A-BFT
slot uniformly at random. A station alone in its slot completes the random
access response, connection request and scheduled phases within the same BI;
colliding stations back off for a uniform number of BIs in
``[1, max_backoff_bi]`` and try again. Latency is counted in BIs.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from thzassoc.errors import ParameterError


class Phase(str, Enum):
    SEARCHING = "searching"
    SYNCHRONIZED = "synchronized"
    PREAMBLE_SENT = "preamble_sent"
    RAR_RECEIVED = "rar_received"
    CONNECTED = "connected"


@dataclass(frozen=True)
class BeaconIntervalConfig:
    num_sectors: int = 16
    num_abft_slots: int = 8
    ati_present: bool = True
    max_backoff_bi: int = 4

    def __post_init__(self):
        for key in ("num_sectors", "num_abft_slots", "max_backoff_bi"):
            if getattr(self, key) < 1:
                raise ParameterError(f"{key} must be >= 1", key=f"macsim.{key}")

    @property
    def bhi_slots(self) -> int:
        """Beacon-header length in sweep/training slots (BTI sectors + A-BFT slots)."""
        return self.num_sectors + self.num_abft_slots


@dataclass
class StationIAState:
    station_id: int
    phase: Phase = Phase.SEARCHING
    bi_count: int = 0
    backoff_remaining: int = 0
    latency_bi: int | None = None


@dataclass
class AbftRound:
    bi: int
    contenders: int
    successes: int
    collisions: int


@dataclass
class IAResult:
    stations: list[StationIAState]
    rounds: list[AbftRound] = field(default_factory=list)

    @property
    def latencies(self) -> list[int | None]:
        return [s.latency_bi for s in self.stations]

    def to_csv_rows(self, seed: int) -> list[dict]:
        return [
            {"seed": seed, "station_id": s.station_id,
             "latency_bi": "" if s.latency_bi is None else s.latency_bi,
             "connected": int(s.phase is Phase.CONNECTED)}
            for s in self.stations
        ]


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def simulate_abft(num_contenders: int, num_slots: int, seed=None) -> np.ndarray:
    """One slotted A-BFT contention; True where the station's slot was not shared."""
    if num_contenders < 1 or num_slots < 1:
        raise ParameterError("num_contenders and num_slots must be >= 1")
    rng = _as_rng(seed)
    picks = rng.integers(0, num_slots, size=num_contenders)
    counts = np.bincount(picks, minlength=num_slots)
    return counts[picks] == 1


def expected_abft_successes(num_contenders: int, num_slots: int) -> float:
    """U (1 - 1/S)^(U - 1): mean number of stations alone in their slot."""
    return num_contenders * (1.0 - 1.0 / num_slots) ** (num_contenders - 1)


def simulate_initial_access(config: BeaconIntervalConfig, num_stations: int,
                            max_bi: int, seed=None) -> IAResult:
    if num_stations < 1 or max_bi < 1:
        raise ParameterError("num_stations and max_bi must be >= 1")
    rng = _as_rng(seed)
    stations = [StationIAState(k) for k in range(num_stations)]

    result = IAResult(stations)
    for bi in range(1, max_bi + 1):
        pending = [s for s in stations if s.phase is not Phase.CONNECTED]
        if not pending:
            break
        contenders = []
        for s in pending:
            s.bi_count = bi
            if s.backoff_remaining > 0:
                s.backoff_remaining -= 1
                continue
            s.phase = Phase.SYNCHRONIZED  # BTI lock is certain under LOS
            contenders.append(s)
        if not contenders:
            continue

        won = simulate_abft(len(contenders), config.num_abft_slots, rng)
        for s, ok in zip(contenders, won):
            if ok:
                # RAR, connection request and scheduled phase all land in this BI
                s.phase = Phase.CONNECTED
                s.latency_bi = bi
            else:
                s.phase = Phase.SEARCHING
                # next attempt k BIs later, so k - 1 BIs are skipped
                s.backoff_remaining = int(rng.integers(1, config.max_backoff_bi + 1)) - 1
        n_ok = int(won.sum())
        result.rounds.append(AbftRound(bi, len(contenders), n_ok, len(contenders) - n_ok))
    return result


def write_latency_csv(rows: list[dict], header: str = "") -> str:
    buf = io.StringIO()
    buf.write(header)
    w = csv.DictWriter(buf, fieldnames=["seed", "station_id", "latency_bi", "connected"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
