import numpy as np
import pytest

from ttspin.services.spinpair.fano import FanoState, singlet
from ttspin.services.tomography.decay import (
    NORMALIZATION,
    DecayConfig,
    EventSample,
    dilepton_density,
    envelope,
    read_events_csv,
    sample_events,
    write_events_csv,
)
from ttspin.utils.errors import DomainError, NegativeDensity, ParseError

Z = np.array([0.0, 0.0, 1.0])


def test_singlet_density():
    assert dilepton_density(singlet(), Z, Z) == pytest.approx(2.0 * NORMALIZATION)
    assert dilepton_density(singlet(), Z, -Z) == pytest.approx(0.0)


def test_density_is_vectorized():
    l_plus = np.array([Z, -Z, [1.0, 0.0, 0.0]])

    assert dilepton_density(singlet(), l_plus, l_plus).shape == (3,)


def test_unphysical_state_has_negative_density():
    state = FanoState.from_correlations(2.0 * np.eye(3))

    with pytest.raises(NegativeDensity):
        dilepton_density(state, Z, Z)
    with pytest.raises(NegativeDensity):
        sample_events(state, 1000)


def test_envelope():
    assert envelope(singlet()) == pytest.approx(2.0)
    assert envelope(singlet(), DecayConfig(kappa_plus=0.5, kappa_minus=-0.5)) == pytest.approx(1.25)


def test_decay_config_bounds():
    with pytest.raises(ValueError):
        DecayConfig(kappa_plus=1.5)


def test_singlet_opening_angle():
    sample = sample_events(singlet(), 100000, seed=3)

    assert sample.n == 100000
    assert sample.cos_phi().mean() == pytest.approx(1.0 / 3.0, abs=1e-2)


def test_sampling_is_deterministic():
    first = sample_events(singlet(), 2000, seed=11, streams=2)
    second = sample_events(singlet(), 2000, seed=11, streams=2)
    other = sample_events(singlet(), 2000, seed=12, streams=2)

    assert np.array_equal(first.l_plus, second.l_plus)
    assert np.array_equal(first.l_minus, second.l_minus)
    assert not np.array_equal(first.l_plus, other.l_plus)


@pytest.mark.parametrize("streams", [1, 3, 7])
def test_streams_share_the_events(streams):
    sample = sample_events(singlet(), 1000, seed=5, streams=streams)

    assert sample.n == 1000
    assert np.allclose(np.linalg.norm(sample.l_minus, axis=1), 1.0)


@pytest.mark.parametrize("n,streams", [(0, 1), (10, 0)])
def test_sample_size_and_streams_must_be_positive(n, streams):
    with pytest.raises(DomainError):
        sample_events(singlet(), n, streams=streams)


def test_event_sample_checks_unit_norm():
    with pytest.raises(DomainError):
        EventSample(l_plus=[[0.0, 0.0, 2.0]], l_minus=[[0.0, 0.0, 1.0]])
    with pytest.raises(DomainError):
        EventSample(l_plus=[[0.0, 0.0, 1.0]], l_minus=[[0.0, 1.0]])


def test_events_csv_round_trip(tmp_path):
    sample = sample_events(singlet(), 500, seed=9)
    path = write_events_csv(sample, tmp_path / "events.csv")

    assert path.read_text(encoding="utf-8").startswith("# seed: 9\nlx+,ly+,lz+,lx-,ly-,lz-\n")

    restored = read_events_csv(path)

    assert restored.seed == 9
    assert np.array_equal(restored.l_plus, sample.l_plus)
    assert np.array_equal(restored.l_minus, sample.l_minus)


def test_events_csv_rejects_text(tmp_path):
    path = tmp_path / "events.csv"
    path.write_text("# seed: 1\nlx+,ly+,lz+,lx-,ly-,lz-\n0,0,1,0,0,abc\n", encoding="utf-8")

    with pytest.raises(ParseError):
        read_events_csv(path)


def test_events_csv_rejects_columns(tmp_path):
    path = tmp_path / "events.csv"
    path.write_text("x,y,z,u,v,w\n0,0,1,0,0,1\n", encoding="utf-8")

    with pytest.raises(ParseError):
        read_events_csv(path)


def test_events_csv_rejects_seed_line(tmp_path):
    path = tmp_path / "events.csv"
    path.write_text("# seed: many\nlx+,ly+,lz+,lx-,ly-,lz-\n0,0,1,0,0,1\n", encoding="utf-8")

    with pytest.raises(ParseError) as excinfo:
        read_events_csv(path)

    assert excinfo.value.line == 1
