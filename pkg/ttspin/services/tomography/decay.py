import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ttspin.services.spinpair.fano import FanoState
from ttspin.settings import settings
from ttspin.utils.errors import DomainError, NegativeDensity, ParseError
from ttspin.utils.utils import atomic_write

logger = logging.getLogger(__name__)

EVENT_COLUMNS = ["lx+", "ly+", "lz+", "lx-", "ly-", "lz-"]
NORMALIZATION = 1.0 / (4.0 * np.pi) ** 2

_NEGATIVE_EPS = 1e-12
_MIN_BATCH = 4096


class DecayConfig(BaseModel):
    """Spin analyzing powers of the charged leptons from the top (kappa_plus) and antitop (kappa_minus) decays."""

    model_config = ConfigDict(frozen=True)

    kappa_plus: float = Field(default=1.0, ge=-1.0, le=1.0)
    kappa_minus: float = Field(default=-1.0, ge=-1.0, le=1.0)


@dataclass(frozen=True)
class EventSample:
    """
    Lepton directions of n dilepton events.

    Args:
        l_plus (np.ndarray): Unit vectors of the antilepton, shape (n, 3).
        l_minus (np.ndarray): Unit vectors of the lepton, shape (n, 3).
        seed (int): Seed the sample was generated from.
    """

    l_plus: np.ndarray
    l_minus: np.ndarray
    seed: int = 0

    def __post_init__(self) -> None:
        """Freeze the arrays and check shapes and unit norms."""
        l_plus = np.array(self.l_plus, dtype=float)
        l_minus = np.array(self.l_minus, dtype=float)
        if l_plus.ndim != 2 or l_plus.shape[1] != 3 or l_plus.shape != l_minus.shape:
            raise DomainError(f"direction arrays must both have shape (n, 3), got {l_plus.shape} and {l_minus.shape}")
        for name, array in (("l_plus", l_plus), ("l_minus", l_minus)):
            residual = np.max(np.abs(np.linalg.norm(array, axis=1) - 1.0), initial=0.0)
            if residual > settings.ALGEBRA_EPS:
                raise DomainError(f"{name} directions deviate from unit norm by {residual:.3g}")
            array.setflags(write=False)
        object.__setattr__(self, "l_plus", l_plus)
        object.__setattr__(self, "l_minus", l_minus)

    @property
    def n(self) -> int:
        """Number of events."""
        return len(self.l_plus)

    def cos_phi(self) -> np.ndarray:
        """Cosine of the opening angle between the two leptons."""
        return np.einsum("ij,ij->i", self.l_plus, self.l_minus)


def _bracket(state: FanoState, l_plus: np.ndarray, l_minus: np.ndarray, cfg: DecayConfig) -> np.ndarray:
    """1 + k+ B+.l+ + k- B-.l- + k+ k- l+.C.l-, one value per direction pair."""
    g = state.normalized()
    return (
        1.0
        + cfg.kappa_plus * l_plus @ g.bplus
        + cfg.kappa_minus * l_minus @ g.bminus
        + cfg.kappa_plus * cfg.kappa_minus * np.einsum("ij,jk,ik->i", l_plus, g.c, l_minus)
    )


def dilepton_density(state: FanoState, l_plus, l_minus, cfg: DecayConfig = DecayConfig()):
    """
    Normalized angular distribution of the two lepton directions.

    Args:
        state (FanoState): Spin state of the pair in the frame the directions are expressed in.
        l_plus: Antilepton unit vector(s), shape (3,) or (n, 3).
        l_minus: Lepton unit vector(s), same shape.
        cfg (DecayConfig): Spin analyzing powers.

    Returns:
        float or np.ndarray: Density on S^2 x S^2, a float for single directions.

    Raises:
        NegativeDensity: If the distribution is negative somewhere, i.e. the state is not physical.
    """
    single = np.ndim(l_plus) == 1
    values = _bracket(state, np.atleast_2d(l_plus), np.atleast_2d(l_minus), cfg)
    if np.min(values) < -_NEGATIVE_EPS:
        raise NegativeDensity(f"decay density is negative ({np.min(values):.3g}); the spin state is not physical")
    density = np.clip(values, 0.0, None) * NORMALIZATION
    return float(density[0]) if single else density


def envelope(state: FanoState, cfg: DecayConfig = DecayConfig()) -> float:
    """
    Upper bound of the bracket 1 + k+ B+.l+ + k- B-.l- + k+ k- l+.C.l- over both spheres.

    Returns:
        float: 1 + |k+||B+| + |k-||B-| + |k+ k-| sigma_max(C); exact for unpolarized states.
    """
    g = state.normalized()
    return float(
        1.0
        + abs(cfg.kappa_plus) * np.linalg.norm(g.bplus)
        + abs(cfg.kappa_minus) * np.linalg.norm(g.bminus)
        + abs(cfg.kappa_plus * cfg.kappa_minus) * np.linalg.norm(g.c, ord=2)
    )


def uniform_directions(rng: np.random.Generator, size: int) -> np.ndarray:
    """Isotropic unit vectors, shape (size, 3)."""
    v = rng.normal(size=(size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _draw(state: FanoState, n: int, rng: np.random.Generator, cfg: DecayConfig, bound: float):
    """Rejection-sample n direction pairs from one stream."""
    l_plus, l_minus = [], []
    accepted, proposed = 0, 0
    while accepted < n:
        size = max(_MIN_BATCH, int(1.2 * (n - accepted) * bound))
        p, m = uniform_directions(rng, size), uniform_directions(rng, size)
        values = _bracket(state, p, m, cfg)
        if np.min(values) < -_NEGATIVE_EPS:
            raise NegativeDensity("decay density is negative; the spin state is not physical")
        keep = rng.uniform(0.0, bound, size=size) < values
        l_plus.append(p[keep])
        l_minus.append(m[keep])
        accepted += int(np.count_nonzero(keep))
        proposed += size
    logger.debug("rejection sampling: %d of %d proposals accepted (%.4f)", accepted, proposed, accepted / proposed)
    return np.concatenate(l_plus)[:n], np.concatenate(l_minus)[:n]


def sample_events(
    state: FanoState,
    n: int,
    seed: int = 0,
    cfg: DecayConfig = DecayConfig(),
    streams: int = 1,
) -> EventSample:
    """
    Draw dilepton events from the decay distribution of a spin state.

    Proposals are uniform on S^2 x S^2 and accepted with probability bracket / envelope. Each of the streams uses
    its own generator spawned from numpy.random.SeedSequence(seed), so the sample depends only on (seed, streams).

    Args:
        state (FanoState): Physical spin state.
        n (int): Number of events, at least 1.
        seed (int): Seed of the PCG64 generators.
        cfg (DecayConfig): Spin analyzing powers.
        streams (int): Number of independent generator streams sharing the events.

    Returns:
        EventSample: The events, stream by stream.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if streams < 1:
        raise DomainError(f"streams must be at least 1, got {streams}")
    bound = envelope(state, cfg)
    counts = [n // streams + (1 if i < n % streams else 0) for i in range(streams)]
    children = np.random.SeedSequence(seed).spawn(streams)
    parts = [
        _draw(state, count, np.random.default_rng(child), cfg, bound)
        for count, child in zip(counts, children)
        if count
    ]
    return EventSample(
        l_plus=np.concatenate([p for p, _ in parts]),
        l_minus=np.concatenate([m for _, m in parts]),
        seed=seed,
    )


def write_events_csv(sample: EventSample, path: Union[str, Path]) -> Path:
    """
    Write events as CSV with columns lx+, ly+, lz+, lx-, ly-, lz- after a "# seed: N" line.

    Args:
        sample (EventSample): Events.
        path (Union[str, Path]): Destination file.

    Returns:
        Path: The written file.
    """
    df = pd.DataFrame(np.hstack([sample.l_plus, sample.l_minus]), columns=EVENT_COLUMNS)
    text = f"# seed: {sample.seed}\n" + df.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return atomic_write(path, text)


def read_events_csv(path: Union[str, Path]) -> EventSample:
    """
    Read events written by write_events_csv.

    Raises:
        ParseError: If the header or a value is malformed.
    """
    path = Path(path)
    seed = 0
    with path.open(encoding="utf-8") as stream:
        first = stream.readline()
    if first.startswith("# seed:"):
        try:
            seed = int(first.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"malformed seed line in {path}", line=1)
    try:
        df = pd.read_csv(path, comment="#", dtype=float, float_precision="round_trip")
    except ValueError as exc:
        raise ParseError(f"non-numeric event value in {path}: {exc}")
    if list(df.columns) != EVENT_COLUMNS:
        raise ParseError(f"event columns must be {','.join(EVENT_COLUMNS)}, got {','.join(df.columns)}")
    values = df.to_numpy()
    return EventSample(l_plus=values[:, :3], l_minus=values[:, 3:], seed=seed)
