"""Greedy frequency-scan decomposition into analytic intrinsic bands.

A decomposition partitions the positive-frequency DFT bins
[1, ceil(N/2)-1] into contiguous cells. Each cell's analytic signal
must have a non-decreasing unwrapped phase (within a configurable
tolerance) at every interior sample, which is what makes its
instantaneous frequency physically meaningful. Scanning low-to-high
grows each band upward as far as admissibility allows; high-to-low
mirrors this from the top bin downward. DC and the Nyquist bin never
join a band: they are real standalone terms in the reconstruction

    x[n] = dc + sum_i y_i[n] + nyquist * (-1)^n
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ParameterError, UndefinedPhaseError
from .spectral import AnalyticSignal, Signal, Spectrum, analytic_band, dft

# Edge bins whose coefficient magnitude falls at or below this fraction
# of the largest positive-bin magnitude are considered empty and do not
# count toward a band's reported bin range. The scan partition itself
# is kept separately so bin bookkeeping stays exact.
ZERO_BIN_RTOL = 1e-12


class ScanDirection(Enum):
    LOW_TO_HIGH = "lth"
    HIGH_TO_LOW = "htl"


class SearchMode(Enum):
    """How far a band scan looks before settling on a boundary.

    MAXIMAL_EXHAUSTIVE tries every candidate extension up to the last
    positive bin and keeps the largest admissible one; admissibility is
    not monotone in the band edge, so this is the faithful reading of
    "maximum value". FIRST_VIOLATION stops at the first inadmissible
    extension after at least one admissible candidate has been seen,
    trading possibly-smaller bands for speed on long signals.
    """

    MAXIMAL_EXHAUSTIVE = "max"
    FIRST_VIOLATION = "first"


@dataclass
class FdmConfig:
    scan: ScanDirection = ScanDirection.LOW_TO_HIGH
    search: SearchMode = SearchMode.MAXIMAL_EXHAUSTIVE
    monotonicity_tolerance: float = 0.0
    max_fibfs: int | None = None

    def __post_init__(self):
        if isinstance(self.scan, str):
            self.scan = ScanDirection(self.scan)
        if isinstance(self.search, str):
            self.search = SearchMode(self.search)
        if not (self.monotonicity_tolerance >= 0.0):
            raise ParameterError(
                f"monotonicity_tolerance must be >= 0, got {self.monotonicity_tolerance}"
            )
        if self.max_fibfs is not None and self.max_fibfs < 1:
            raise ParameterError(f"max_fibfs must be >= 1, got {self.max_fibfs}")


@dataclass
class Afibf:
    """One analytic intrinsic band function.

    Attributes
    ----------
    bin_range : (int, int)
        Inclusive DFT bin span actually carrying energy, after empty
        edge bins are trimmed off.
    partition_range : (int, int)
        The cell this band occupies in the exact bin partition; the
        cells of a decomposition tile [1, ceil(N/2)-1] with no gaps.
    amplitude, phase, inst_freq_hz, fibf : ndarray
        Per-sample envelope |z|, unwrapped phase, instantaneous
        frequency in Hz, and the real band signal Re{z}.
    """

    bin_range: tuple[int, int]
    partition_range: tuple[int, int]
    amplitude: np.ndarray
    phase: np.ndarray
    inst_freq_hz: np.ndarray
    fibf: np.ndarray

    @property
    def n(self) -> int:
        return self.fibf.size

    def energy(self) -> float:
        """Total energy sum(y^2) of the band signal."""
        return float(np.dot(self.fibf, self.fibf))


@dataclass
class DecompositionResult:
    dc: float
    nyquist: float | None
    fibfs: tuple[Afibf, ...]
    scan: ScanDirection
    reconstruction_error: float
    sample_rate_hz: float
    n: int
    start_time_s: float = 0.0
    # indices into fibfs whose phase failed the monotonicity test and
    # were emitted anyway to keep reconstruction exact
    non_monotone: tuple[int, ...] = ()
    # True when a max_fibfs cap forced leftover bins into the last band
    merged_tail: bool = False

    @property
    def n_fibfs(self) -> int:
        return len(self.fibfs)


def unwrap_phase(analytic: AnalyticSignal) -> np.ndarray:
    """Unwrapped atan2 phase of an analytic signal.

    The first sample is anchored in (-pi, pi]; later samples differ
    from their predecessor by at most pi in magnitude. A sample with
    exactly zero magnitude has no phase and raises
    :class:`UndefinedPhaseError` with its index.
    """
    v = analytic.values
    zero = np.flatnonzero((v.real == 0.0) & (v.imag == 0.0))
    if zero.size:
        raise UndefinedPhaseError(zero[0])
    return np.unwrap(np.angle(v))


def inst_freq(phase: np.ndarray, sample_rate_hz: float) -> np.ndarray:
    """Instantaneous frequency in Hz from an unwrapped phase sequence.

    Interior samples use the central difference
    (phase[n+1] - phase[n-1]) / 2; the endpoints fall back to one-sided
    differences.
    """
    phase = np.asarray(phase, dtype=np.float64)
    if phase.size < 3:
        raise ParameterError("instantaneous frequency needs at least 3 samples")
    omega = np.empty_like(phase)
    omega[1:-1] = 0.5 * (phase[2:] - phase[:-2])
    omega[0] = phase[1] - phase[0]
    omega[-1] = phase[-1] - phase[-2]
    return omega * (sample_rate_hz / (2.0 * np.pi))


def _unwrap_permissive(values: np.ndarray) -> np.ndarray:
    # np.angle treats an exact zero as phase 0, which is what we want
    # for bands that were flagged non-monotone anyway
    return np.unwrap(np.angle(values))


def _trim_bin_range(coeffs: np.ndarray, lo: int, hi: int, k_max: int) -> tuple[int, int]:
    mags = np.abs(coeffs[1:k_max + 1])
    peak = mags.max() if mags.size else 0.0
    if peak <= 0.0:
        return lo, hi
    thr = ZERO_BIN_RTOL * peak
    t_lo, t_hi = lo, hi
    while t_lo < t_hi and abs(coeffs[t_lo]) <= thr:
        t_lo += 1
    while t_hi > t_lo and abs(coeffs[t_hi]) <= thr:
        t_hi -= 1
    if abs(coeffs[t_lo]) <= thr and t_lo == t_hi:
        # nothing in this cell rises above the floor; keep it whole
        return lo, hi
    return t_lo, t_hi


def _scan_partition(spectrum: Spectrum, config: FdmConfig, backend: str | None = None):
    """Partition positive bins into cells: list of (lo, hi, monotone)."""
    coeffs = spectrum.coefficients
    n = spectrum.n
    k_max = spectrum.k_max
    sr = np.ascontiguousarray(coeffs.real)
    si = np.ascontiguousarray(coeffs.imag)
    cos_tab, sin_tab = _kernels.twiddle_tables(n)
    if backend is None:
        lth, htl, check = (_kernels.lth_boundary, _kernels.htl_boundary,
                           _kernels.band_monotone)
    else:
        lth, htl, check = _kernels.boundary_functions(backend)
    eps = config.monotonicity_tolerance
    exhaustive = config.search is SearchMode.MAXIMAL_EXHAUSTIVE
    cap = config.max_fibfs
    cells = []
    merged_tail = False

    if config.scan is ScanDirection.LOW_TO_HIGH:
        lo = 1
        while lo <= k_max:
            hi = int(lth(sr, si, cos_tab, sin_tab, lo, k_max, eps, exhaustive))
            if cap is not None and len(cells) == cap - 1 and hi != k_max:
                # cap reached: everything left is forced into this band
                mono = bool(check(sr, si, cos_tab, sin_tab, lo, k_max, eps))
                cells.append((lo, k_max, mono))
                merged_tail = True
                break
            if hi == -1:
                # no admissible extension at all; emit the residual band
                # so the partition, and with it reconstruction, stays exact
                cells.append((lo, k_max, False))
                break
            cells.append((lo, hi, True))
            lo = hi + 1
    else:
        hi = k_max
        while hi >= 1:
            lo = int(htl(sr, si, cos_tab, sin_tab, hi, eps, exhaustive))
            if cap is not None and len(cells) == cap - 1 and lo != 1:
                mono = bool(check(sr, si, cos_tab, sin_tab, 1, hi, eps))
                cells.append((1, hi, mono))
                merged_tail = True
                break
            if lo == -1:
                cells.append((1, hi, False))
                break
            cells.append((lo, hi, True))
            hi = lo - 1

    return cells, merged_tail


def decompose(signal: Signal, config: FdmConfig | None = None,
              backend: str | None = None) -> DecompositionResult:
    """Decompose a signal into analytic intrinsic band functions.

    Parameters
    ----------
    signal : Signal
    config : FdmConfig, optional
        Scan direction, search mode, monotonicity tolerance, band cap.
    backend : str, optional
        Kernel backend override ("numba" or "numpy"); default is
        whatever the FDMKIT_NUMBA environment variable selected.

    Returns
    -------
    DecompositionResult
        Bands ordered by extraction (ascending bins for low-to-high,
        descending for high-to-low), plus the DC and Nyquist terms and
        the relative L2 reconstruction error.
    """
    if config is None:
        config = FdmConfig()
    x = signal.samples
    n = x.size
    if n < 4:
        raise ParameterError(f"signal too short to decompose: n={n} < 4")

    if not np.any(x):
        return DecompositionResult(
            dc=0.0,
            nyquist=0.0 if n % 2 == 0 else None,
            fibfs=(),
            scan=config.scan,
            reconstruction_error=0.0,
            sample_rate_hz=signal.sample_rate_hz,
            n=n,
            start_time_s=signal.start_time_s,
        )

    spectrum = dft(signal)
    coeffs = spectrum.coefficients
    k_max = spectrum.k_max
    fs = signal.sample_rate_hz

    cells, merged_tail = _scan_partition(spectrum, config, backend=backend)

    fibfs = []
    non_monotone = []
    for i, (lo, hi, mono) in enumerate(cells):
        z = analytic_band(spectrum, lo, hi)
        amplitude = np.abs(z.values)
        phase = _unwrap_permissive(z.values)
        freq = inst_freq(phase, fs)
        fibfs.append(Afibf(
            bin_range=_trim_bin_range(coeffs, lo, hi, k_max),
            partition_range=(lo, hi),
            amplitude=amplitude,
            phase=phase,
            inst_freq_hz=freq,
            fibf=z.values.real.copy(),
        ))
        if not mono:
            non_monotone.append(i)

    dc = float(coeffs[0].real)
    nyq_bin = spectrum.nyquist_bin
    nyquist = float(coeffs[nyq_bin].real) if nyq_bin is not None else None

    recon = _synthesize(dc, nyquist, fibfs, n)
    err = float(np.linalg.norm(recon - x) / np.linalg.norm(x))

    return DecompositionResult(
        dc=dc,
        nyquist=nyquist,
        fibfs=tuple(fibfs),
        scan=config.scan,
        reconstruction_error=err,
        sample_rate_hz=fs,
        n=n,
        start_time_s=signal.start_time_s,
        non_monotone=tuple(non_monotone),
        merged_tail=merged_tail,
    )


def _synthesize(dc, nyquist, fibfs, n):
    out = np.full(n, dc, dtype=np.float64)
    for band in fibfs:
        out += band.fibf
    if nyquist is not None and nyquist != 0.0:
        alt = np.ones(n)
        alt[1::2] = -1.0
        out += nyquist * alt
    return out


def reconstruct(result: DecompositionResult) -> np.ndarray:
    """Rebuild the time series a decomposition describes."""
    return _synthesize(result.dc, result.nyquist, result.fibfs, result.n)
