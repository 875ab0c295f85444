"""Zero-phase filter-bank decomposition for multichannel records.

A geometric cutoff ladder splits every channel over the same frequency
cells, so band k of channel p and band k of channel q always cover
identical DFT bins. Filtering is done by masking whole conjugate bin
pairs of the forward DFT, which makes each stage exactly zero-phase
and makes band + residue telescoping hold to the last bit: the residue
is computed in the time domain as what the band left behind.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .spectral import Signal


@dataclass
class MultichannelSignal:
    """Channels sampled on a shared clock.

    All channels must agree on length, sample rate, and start time.
    """

    channels: tuple[Signal, ...]

    def __post_init__(self):
        self.channels = tuple(self.channels)
        if not self.channels:
            raise ParameterError("need at least one channel")
        first = self.channels[0]
        for i, ch in enumerate(self.channels[1:], start=1):
            if ch.n != first.n:
                raise ParameterError(
                    f"channel {i} has {ch.n} samples, channel 0 has {first.n}"
                )
            if ch.sample_rate_hz != first.sample_rate_hz:
                raise ParameterError(
                    f"channel {i} sample rate {ch.sample_rate_hz} differs from "
                    f"channel 0 rate {first.sample_rate_hz}"
                )
            if ch.start_time_s != first.start_time_s:
                raise ParameterError(
                    f"channel {i} start time {ch.start_time_s} differs from "
                    f"channel 0 start {first.start_time_s}"
                )

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def n(self) -> int:
        return self.channels[0].n

    @property
    def sample_rate_hz(self) -> float:
        return self.channels[0].sample_rate_hz

    @property
    def start_time_s(self) -> float:
        return self.channels[0].start_time_s


@dataclass
class CutoffSchedule:
    """Strictly decreasing highpass cutoffs, all inside (0, fs/2).

    ``m`` is recorded when the schedule came from the geometric
    recurrence; hand-built schedules leave it None.
    """

    cutoffs_hz: tuple[float, ...]
    sample_rate_hz: float
    m: float | None = None

    def __post_init__(self):
        self.cutoffs_hz = tuple(float(c) for c in self.cutoffs_hz)
        if not self.cutoffs_hz:
            raise ParameterError("cutoff schedule is empty")
        if not (self.sample_rate_hz > 0):
            raise ParameterError(f"sample rate must be > 0, got {self.sample_rate_hz}")
        half = self.sample_rate_hz / 2.0
        for c in self.cutoffs_hz:
            if not (0.0 < c < half):
                raise ParameterError(
                    f"cutoff {c} Hz outside (0, {half}) Hz"
                )
        for a, b in zip(self.cutoffs_hz, self.cutoffs_hz[1:]):
            if not (b < a):
                raise ParameterError(
                    f"cutoffs must be strictly decreasing, got {a} then {b}"
                )

    @property
    def levels(self) -> int:
        return len(self.cutoffs_hz)


def cutoff_schedule(sample_rate_hz: float, m: float, levels: int) -> CutoffSchedule:
    """Geometric cutoff ladder f_{i+1} = f_i * (2m - 1) / (2m + 1).

    The first cutoff is (fs/2) * (2m - 1) / (2m + 1); consecutive
    cutoffs therefore keep the constant ratio (2m + 1) / (2m - 1).
    ``m`` must exceed 1/2 so the ratio stays inside (0, 1); m = 1.5
    gives the dyadic ladder fs/4, fs/8, fs/16, ...
    """
    if not (m > 0.5):
        raise ParameterError(f"m must be > 1/2, got {m}")
    if levels < 1:
        raise ParameterError(f"levels must be >= 1, got {levels}")
    if not (sample_rate_hz > 0):
        raise ParameterError(f"sample rate must be > 0, got {sample_rate_hz}")
    r = (2.0 * m - 1.0) / (2.0 * m + 1.0)
    cutoffs = []
    f = sample_rate_hz / 2.0
    for _ in range(levels):
        f = f * r
        cutoffs.append(f)
    return CutoffSchedule(tuple(cutoffs), sample_rate_hz, m=m)


def _bin_freqs(n: int, sample_rate_hz: float) -> np.ndarray:
    # |frequency| of every DFT bin; bin k and bin n-k fold to the same
    # value so any threshold on this keeps conjugate pairs together
    k = np.arange(n)
    return np.minimum(k, n - k) * (sample_rate_hz / n)


def retained_bins(n: int, sample_rate_hz: float, cutoff_hz: float) -> np.ndarray:
    """Positive-half bin indices a highpass at cutoff_hz keeps.

    Indices k in [1, n // 2] with k * fs / n >= cutoff_hz. Useful for
    checking that the same schedule pins the same bins on every channel.
    """
    half = n // 2
    k = np.arange(1, half + 1)
    return k[k * (sample_rate_hz / n) >= cutoff_hz]


def _check_cutoff(signal: Signal, cutoff_hz: float):
    half = signal.sample_rate_hz / 2.0
    if not (0.0 < cutoff_hz < half):
        raise ParameterError(f"cutoff {cutoff_hz} Hz outside (0, {half}) Hz")


def zero_phase_highpass(signal: Signal, cutoff_hz: float) -> Signal:
    """Keep only DFT bins at or above cutoff_hz; zero phase shift.

    DC always lands below any positive cutoff and is removed. The mask
    acts on whole conjugate pairs, so the output is real up to
    rounding and is returned as such.
    """
    _check_cutoff(signal, cutoff_hz)
    x = signal.samples
    spec = np.fft.fft(x, norm="forward")
    keep = _bin_freqs(x.size, signal.sample_rate_hz) >= cutoff_hz
    y = np.fft.ifft(spec * keep, norm="forward").real
    return Signal(y, signal.sample_rate_hz, signal.start_time_s)


def zero_phase_lowpass(signal: Signal, cutoff_hz: float) -> Signal:
    """Keep only DFT bins strictly below cutoff_hz (DC included)."""
    _check_cutoff(signal, cutoff_hz)
    x = signal.samples
    spec = np.fft.fft(x, norm="forward")
    keep = _bin_freqs(x.size, signal.sample_rate_hz) < cutoff_hz
    y = np.fft.ifft(spec * keep, norm="forward").real
    return Signal(y, signal.sample_rate_hz, signal.start_time_s)


@dataclass
class MfdmResult:
    """Per-level, per-channel band signals plus the final residue.

    ``bands[i][p]`` is level i of channel p (level 0 holds the highest
    frequencies). ``residue[p]`` is what remains of channel p below the
    last cutoff, DC included. For every channel

        x = sum_i bands[i] + residue

    holds exactly because each residue was formed by subtraction.
    """

    bands: tuple[tuple[np.ndarray, ...], ...]
    residue: tuple[np.ndarray, ...]
    schedule: CutoffSchedule
    variant: str
    sample_rate_hz: float
    start_time_s: float
    n: int

    @property
    def n_levels(self) -> int:
        return len(self.bands)

    @property
    def n_channels(self) -> int:
        return len(self.residue)


def mfdm_decompose(data, schedule: CutoffSchedule,
                   variant: str = "highpass") -> MfdmResult:
    """Run the zero-phase filter bank over every channel.

    Parameters
    ----------
    data : Signal or MultichannelSignal
    schedule : CutoffSchedule
        Must carry the same sample rate as the data, and every cutoff
        must sit at or above the DFT resolution fs / n; below that a
        highpass stage cannot distinguish the cutoff from DC.
    variant : {"highpass", "lowpass"}
        "highpass" peels each band off the running residue directly;
        "lowpass" forms the new residue first and takes the band as
        the difference. The band signals are mathematically identical,
        the flag exists to exercise either filter as the primitive.

    Returns
    -------
    MfdmResult
    """
    if isinstance(data, Signal):
        data = MultichannelSignal((data,))
    if variant not in ("highpass", "lowpass"):
        raise ParameterError(f"unknown variant {variant!r}")
    fs = data.sample_rate_hz
    if schedule.sample_rate_hz != fs:
        raise ParameterError(
            f"schedule sample rate {schedule.sample_rate_hz} does not match "
            f"data sample rate {fs}"
        )
    resolution = fs / data.n
    for c in schedule.cutoffs_hz:
        if c < resolution:
            raise ParameterError(
                f"cutoff {c} Hz is below the frequency resolution "
                f"{resolution} Hz of an n={data.n} record"
            )

    per_level = [[] for _ in schedule.cutoffs_hz]
    residues = []
    for ch in data.channels:
        residue = ch
        for i, c in enumerate(schedule.cutoffs_hz):
            if variant == "highpass":
                band = zero_phase_highpass(residue, c)
                rest = Signal(residue.samples - band.samples, fs, ch.start_time_s)
            else:
                rest = zero_phase_lowpass(residue, c)
                band = Signal(residue.samples - rest.samples, fs, ch.start_time_s)
            per_level[i].append(band.samples)
            residue = rest
        residues.append(residue.samples)

    return MfdmResult(
        bands=tuple(tuple(level) for level in per_level),
        residue=tuple(residues),
        schedule=schedule,
        variant=variant,
        sample_rate_hz=fs,
        start_time_s=data.start_time_s,
        n=data.n,
    )
