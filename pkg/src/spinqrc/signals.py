"""Multi-sinusoid input sequences and single-qubit input encoding.

Each raw sequence is a sum of 20 sinusoids with frequencies linearly spaced
over [f0/5000, f0/50] and independent uniform phases, min-max normalized to
[0, 1]. Nine sequences (ids 0..8) are generated per (f0, seed): ids 0 and 1
drive the training run, 2 and 3 the test run, 4..8 are reserved.

By default the time variable is the integer sample index k = 0..N-1, so the
component periods span 50/f0 .. 5000/f0 samples and the signal varies slowly
but nontrivially between samples. ``time_axis="unit_interval"`` instead
samples t on [0, 1], which makes the signal nearly constant for small f0.
How a reservoir run walks through the samples is the run loop's concern:
see ``reservoir.RunConfig.sample_spacing``, which lays the 1000 samples out
uniformly over the evolution window (2.75 time units apart by default, so
one full-length run consumes nearly the whole sequence).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .streams import SIGNAL_DOMAIN, as_key, stream

N_SAMPLES = 1000
N_COMPONENTS = 20

TRAIN_SEQUENCE_IDS = (0, 1)
TEST_SEQUENCE_IDS = (2, 3)
HOLDOUT_SEQUENCE_IDS = (4, 5)
N_SEQUENCES = 9

TIME_AXES = ("index", "unit_interval")


def component_frequencies(f0: float, n_components: int = N_COMPONENTS) -> np.ndarray:
    """Linearly spaced component frequencies, inclusive of both endpoints."""
    if f0 <= 0:
        raise ValueError("f0 must be positive")
    return np.linspace(f0 / 5000.0, f0 / 50.0, n_components)


def sequence_phases(seq_id: int, seed) -> np.ndarray:
    """The sequence's 20 phase offsets, i.i.d. uniform on [0, 1).

    Phases depend only on (seed, seq_id), never on f0, so sweeps over input
    frequency reuse the same phase realizations.
    """
    if not 0 <= seq_id < N_SEQUENCES:
        raise ValueError(f"sequence id {seq_id} out of range 0..{N_SEQUENCES - 1}")
    rng = stream(SIGNAL_DOMAIN, *as_key(seed), seq_id)
    return rng.uniform(0.0, 1.0, size=N_COMPONENTS)


def generate_raw_sequence(f0: float, seq_id: int, seed, n_samples: int = N_SAMPLES,
                          time_axis: str = "index") -> np.ndarray:
    """Un-normalized sum of sinusoids sampled at n_samples points."""
    if time_axis not in TIME_AXES:
        raise ValueError(f"time_axis must be one of {TIME_AXES}")
    freqs = component_frequencies(f0)
    phases = sequence_phases(seq_id, seed)
    if time_axis == "index":
        t = np.arange(n_samples, dtype=float)
    else:
        t = np.linspace(0.0, 1.0, n_samples)
    # x(t) = sum_k sin(2 pi f_k t + 2 pi phi_k)
    arg = 2.0 * np.pi * (np.outer(t, freqs) + phases[np.newaxis, :])
    return np.sin(arg).sum(axis=1)


def normalize_minmax(x: np.ndarray) -> np.ndarray:
    """Affine rescaling onto [0, 1]; both endpoints are attained."""
    x = np.asarray(x, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        raise ValueError("degenerate sequence: min-max normalization needs max > min")
    return (x - lo) / (hi - lo)


@dataclass(frozen=True, eq=False)
class InputSequence:
    """Normalized scalar input series with its generation metadata."""

    samples: np.ndarray
    f0: float
    sequence_id: int
    rng_seed: tuple
    phases: np.ndarray
    n_components: int = N_COMPONENTS
    time_axis: str = "index"

    def __len__(self) -> int:
        return len(self.samples)


def make_input_sequence(f0: float, seq_id: int, seed, n_samples: int = N_SAMPLES,
                        time_axis: str = "index") -> InputSequence:
    """Generate and normalize one input sequence."""
    raw = generate_raw_sequence(f0, seq_id, seed, n_samples, time_axis)
    return InputSequence(
        samples=normalize_minmax(raw),
        f0=float(f0),
        sequence_id=int(seq_id),
        rng_seed=as_key(seed),
        phases=sequence_phases(seq_id, seed),
        time_axis=time_axis,
    )


def make_sequence_family(f0: float, seed, n_samples: int = N_SAMPLES,
                         time_axis: str = "index") -> list[InputSequence]:
    """All nine sequences for one (f0, seed)."""
    return [make_input_sequence(f0, q, seed, n_samples, time_axis) for q in range(N_SEQUENCES)]


@dataclass(frozen=True, eq=False)
class EncodedInput:
    """Scalar input value and its pure-state density matrix."""

    value: float
    state: np.ndarray


def encode_input_state(s: float) -> EncodedInput:
    """Pure state sqrt(1-s)|0> + sqrt(s)|1> as a 2x2 density matrix.

    The encoded state satisfies <Z> = 1 - 2s.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"input value {s} outside [0, 1]")
    amp = np.array([np.sqrt(1.0 - s), np.sqrt(s)], dtype=complex)
    return EncodedInput(value=float(s), state=np.outer(amp, amp.conj()))


def write_sequence_csv(seq: InputSequence, path) -> None:
    """Export as two columns: index, value."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "value"])
        for k, v in enumerate(seq.samples):
            writer.writerow([k, repr(float(v))])


def read_sequence_csv(path) -> np.ndarray:
    """Read back a sequence exported by ``write_sequence_csv``."""
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["index", "value"]:
            raise ValueError(f"unexpected header {header!r} in {path}")
        for row in reader:
            values.append(float(row[1]))
    return np.array(values)
