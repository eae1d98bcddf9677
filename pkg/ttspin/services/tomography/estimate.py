import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ttspin.services.collider import ColliderConfig, MassWindow
from ttspin.services.phase_space.integrated import mass_integrated_state
from ttspin.services.spinpair.fano import FanoState, assemble_density, extract_fano
from ttspin.services.spinpair.measures import (
    chsh_value,
    concurrence,
    delta_marker,
    fidelity,
    is_physical,
    peres_horodecki,
    project_physical,
    witness_d,
)
from ttspin.services.tomography.decay import DecayConfig, EventSample, sample_events, write_events_csv
from ttspin.utils.constants import BASIS_BEAM
from ttspin.utils.errors import DomainError, InsufficientSample

logger = logging.getLogger(__name__)

MIN_EVENTS = 100
_GRADIENT_STEP = 1e-6


def _check(sample: EventSample, cfg: DecayConfig) -> None:
    """Require enough events and non-zero analyzing powers."""
    if sample.n < MIN_EVENTS:
        raise InsufficientSample(f"tomography needs at least {MIN_EVENTS} events, got {sample.n}")
    if cfg.kappa_plus == 0.0 or cfg.kappa_minus == 0.0:
        raise DomainError("spin analyzing powers must be non-zero to reconstruct the state")


def _per_event(sample: EventSample, cfg: DecayConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-event contributions whose means are B+, B- and C."""
    bplus = 3.0 * sample.l_plus / cfg.kappa_plus
    bminus = 3.0 * sample.l_minus / cfg.kappa_minus
    c = 9.0 * np.einsum("ni,nj->nij", sample.l_plus, sample.l_minus) / (cfg.kappa_plus * cfg.kappa_minus)
    return bplus, bminus, c


def _standard_error(rows: np.ndarray) -> np.ndarray:
    """Standard error of the mean along the first axis."""
    return np.std(rows, axis=0, ddof=1) / np.sqrt(len(rows))


def estimate_state(sample: EventSample, cfg: DecayConfig = DecayConfig()) -> Tuple[FanoState, Dict[str, np.ndarray]]:
    """
    Moment estimates of B+, B- and C.

    B+ = 3 <l+> / k+, B- = 3 <l-> / k- and C_ij = 9 <l+_i l-_j> / (k+ k-); at k+ = 1, k- = -1 these are the usual
    linear-fit slopes of the single and double angular distributions.

    Args:
        sample (EventSample): Events.
        cfg (DecayConfig): Spin analyzing powers used in the generation.

    Returns:
        Tuple[FanoState, Dict[str, np.ndarray]]: The raw estimate (not necessarily physical) and the standard errors
            under keys bplus, bminus and c.

    Raises:
        InsufficientSample: Below 100 events.
    """
    _check(sample, cfg)
    bplus, bminus, c = _per_event(sample, cfg)
    state = FanoState(
        a=1.0,
        bplus=bplus.mean(axis=0),
        bminus=bminus.mean(axis=0),
        c=c.mean(axis=0),
        basis_tag=BASIS_BEAM,
    )
    errors = {"bplus": _standard_error(bplus), "bminus": _standard_error(bminus), "c": _standard_error(c)}
    return state, errors


def estimate_d(sample: EventSample, cfg: DecayConfig = DecayConfig()) -> Tuple[float, float]:
    """
    D = tr(C) / 3 from the opening angle, D = 3 <cos phi> / (k+ k-).

    Returns:
        Tuple[float, float]: (D, standard error).
    """
    _check(sample, cfg)
    rows = 3.0 * sample.cos_phi() / (cfg.kappa_plus * cfg.kappa_minus)
    return float(rows.mean()), float(_standard_error(rows))


def witness_significance(w: float, sigma_w: float) -> float:
    """Number of standard deviations by which W lies below zero."""
    if sigma_w <= 0.0:
        raise DomainError(f"the uncertainty of W must be positive, got {sigma_w:.3g}")
    return -w / sigma_w


@dataclass(frozen=True)
class Tier:
    """
    One set of assumptions about the state.

    Args:
        name (str): Key in the report.
        labels (List[str]): Names of the free parameters.
        rows (Callable): Per-event contributions (n, k) whose means are the parameters.
        build (Callable): Parameter vector to normalized state.
    """

    name: str
    labels: List[str]
    rows: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    build: Callable[[np.ndarray], FanoState]


def _axial(c_perp: float, c_z: float, bplus_z: float = 0.0, bminus_z: float = 0.0) -> FanoState:
    """Axially symmetric beam-basis state."""
    return FanoState(
        a=1.0,
        bplus=[0.0, 0.0, bplus_z],
        bminus=[0.0, 0.0, bminus_z],
        c=np.diag([c_perp, c_perp, c_z]),
        basis_tag=BASIS_BEAM,
    )


def _full(theta: np.ndarray) -> FanoState:
    """General state from (B+, B-, C) flattened."""
    return FanoState(a=1.0, bplus=theta[:3], bminus=theta[3:6], c=theta[6:].reshape(3, 3), basis_tag=BASIS_BEAM)


TIERS = (
    Tier(
        name="symmetryLO",
        labels=["cPerp", "cZ"],
        rows=lambda bp, bm, c: np.column_stack([(c[:, 0, 0] + c[:, 1, 1]) / 2.0, c[:, 2, 2]]),
        build=lambda t: _axial(t[0], t[1]),
    ),
    Tier(
        name="symmetry",
        labels=["cPerp", "cZ", "bplusZ", "bminusZ"],
        rows=lambda bp, bm, c: np.column_stack([(c[:, 0, 0] + c[:, 1, 1]) / 2.0, c[:, 2, 2], bp[:, 2], bm[:, 2]]),
        build=lambda t: _axial(t[0], t[1], t[2], t[3]),
    ),
    Tier(
        name="none",
        labels=[f"bplus{a}" for a in "XYZ"]
        + [f"bminus{a}" for a in "XYZ"]
        + [f"c{a}{b}" for a in "XYZ" for b in "XYZ"],
        rows=lambda bp, bm, c: np.column_stack([bp, bm, c.reshape(len(c), 9)]),
        build=_full,
    ),
)

MARKERS: Dict[str, Callable[[FanoState], float]] = {
    "delta": lambda s: delta_marker(s.c),
    "chsh": lambda s: chsh_value(s.c),
    "d": lambda s: witness_d(s.c)[0],
    "w": lambda s: witness_d(s.c)[1],
}


def _propagate(func: Callable[[np.ndarray], float], theta: np.ndarray, rows: np.ndarray) -> float:
    """Delta-method standard error of func(mean of rows)."""
    gradient = np.empty(len(theta))
    for i in range(len(theta)):
        step = np.zeros(len(theta))
        step[i] = _GRADIENT_STEP
        gradient[i] = (func(theta + step) - func(theta - step)) / (2.0 * _GRADIENT_STEP)
    return float(_standard_error(rows @ gradient))


def _tier_report(tier: Tier, per_event: tuple, truth: FanoState) -> dict:
    """Estimates, errors, markers and fidelities under one tier."""
    rows = tier.rows(*per_event)
    theta = rows.mean(axis=0)
    errors = _standard_error(rows)
    raw = tier.build(theta)
    rho = assemble_density(raw)
    projected = project_physical(rho)
    _, entangled = peres_horodecki(projected)
    markers = {}
    for name, marker in MARKERS.items():
        markers[name] = marker(raw)
        markers[f"{name}Error"] = _propagate(lambda t, m=marker: m(tier.build(t)), theta, rows)
    return {
        "parameterCount": len(tier.labels),
        "estimates": dict(zip(tier.labels, theta)),
        "errors": dict(zip(tier.labels, errors)),
        "markers": markers,
        "physical": is_physical(rho),
        "projected": {
            "concurrence": concurrence(projected),
            "entangled": entangled,
            "fidelity": fidelity(assemble_density(truth.normalized()), projected),
            "correlations": extract_fano(projected).c,
        },
    }


def estimate_tiers(sample: EventSample, truth: FanoState, cfg: DecayConfig = DecayConfig()) -> dict:
    """
    Reconstruct the state under the three assumption tiers and compare with the generating state.

    Args:
        sample (EventSample): Events.
        truth (FanoState): State the events were drawn from.
        cfg (DecayConfig): Spin analyzing powers.

    Returns:
        dict: One entry per tier (2, 4 and 15 free parameters).
    """
    _check(sample, cfg)
    per_event = _per_event(sample, cfg)
    return {tier.name: _tier_report(tier, per_event, truth) for tier in TIERS}


def tomography_report(
    cfg: ColliderConfig,
    window: MassWindow,
    n: int,
    seed: int = 0,
    decay: DecayConfig = DecayConfig(),
    streams: int = 1,
    events_path: Optional[Union[str, Path]] = None,
) -> dict:
    """
    Simulate dilepton events from the pairs produced in a mass window and reconstruct their spin state.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        window (MassWindow): Invariant-mass window in GeV.
        n (int): Number of events.
        seed (int): Seed of the event generator.
        decay (DecayConfig): Spin analyzing powers.
        streams (int): Number of generator streams.
        events_path (Union[str, Path], optional): Also write the events there as CSV.

    Returns:
        dict: Generating state, per-tier reconstructions and the opening-angle witness with its significance.
    """
    truth = mass_integrated_state(cfg, window)
    sample = sample_events(truth, n, seed=seed, cfg=decay, streams=streams)
    if events_path is not None:
        write_events_csv(sample, events_path)
    d, d_error = estimate_d(sample, decay)
    w = d + 1.0 / 3.0
    truth_d, truth_w = witness_d(truth.c)
    logger.info("tomography: %d events, D = %.6g +- %.2g (true %.6g)", n, d, d_error, truth_d)
    return {
        "n": n,
        "seed": seed,
        "kappaPlus": decay.kappa_plus,
        "kappaMinus": decay.kappa_minus,
        "truth": {
            "cPerp": truth.c[0, 0],
            "cZ": truth.c[2, 2],
            "d": truth_d,
            "w": truth_w,
            "concurrence": concurrence(assemble_density(truth)),
        },
        "tiers": estimate_tiers(sample, truth, decay),
        "witness": {
            "d": d,
            "dError": d_error,
            "w": w,
            "significance": witness_significance(w, d_error),
        },
    }
