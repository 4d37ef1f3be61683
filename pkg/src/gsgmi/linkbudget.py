"""Optical reach from GMI via the closed-form Gaussian-noise (GN) model.

Multi-span SSMF link, one EDFA per span exactly compensating the span loss,
ASE and nonlinear interference (NLI) both accumulating incoherently (linearly
in the number of spans). The NLI coefficient is the rectangular-spectrum
closed-form GN reference formula applied to the whole WDM band.
"""

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from gsgmi.gmi import NoiseSpec, gmi_gh

PLANCK = 6.62607015e-34
LIGHT_SPEED = 299792458.0


class ReachError(ValueError):
    pass


@dataclass(frozen=True)
class GnLink:
    span_length: float = 80.0  # km
    spans: int = 1
    attenuation: float = 0.2  # dB/km
    dispersion_beta2: float = -21.7  # ps^2/km
    gamma_nl: float = 1.3  # 1/(W km)
    noise_figure: float = 4.5  # dB
    symbol_rate: float = 45.0  # GBaud
    wdm_channels: int = 11
    channel_spacing: float = 50.0  # GHz
    center_wavelength: float = 1550.0  # nm

    def __post_init__(self):
        positive = {
            "span_length": self.span_length,
            "attenuation": self.attenuation,
            "|dispersion_beta2|": abs(self.dispersion_beta2),
            "gamma_nl": self.gamma_nl,
            "symbol_rate": self.symbol_rate,
            "wdm_channels": self.wdm_channels,
            "channel_spacing": self.channel_spacing,
            "center_wavelength": self.center_wavelength,
        }
        for name, value in positive.items():
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.spans < 1:
            raise ValueError("spans must be >= 1")
        if not math.isfinite(self.noise_figure):
            raise ValueError("noise_figure must be finite")

    # field attenuation in Np/km; power decays as exp(-2 alpha z)
    @property
    def alpha(self):
        return self.attenuation * math.log(10.0) / 20.0

    @property
    def l_eff(self):
        a2 = 2.0 * self.alpha
        return (1.0 - math.exp(-a2 * self.span_length)) / a2

    @property
    def l_eff_a(self):
        return 1.0 / (2.0 * self.alpha)

    @property
    def span_gain(self):
        return 10.0 ** (self.attenuation * self.span_length / 10.0)

    @property
    def p_ase_span(self):
        """ASE power per span in the signal bandwidth (W)."""
        nu = LIGHT_SPEED / (self.center_wavelength * 1e-9)
        nf = 10.0 ** (self.noise_figure / 10.0)
        return (self.span_gain - 1.0) * nf * PLANCK * nu * self.symbol_rate * 1e9

    @property
    def eta(self):
        """NLI coefficient per span (1/W^2): P_NLI = spans * eta * P^3."""
        b2 = abs(self.dispersion_beta2) * 1e-24  # s^2/km
        rs = self.symbol_rate * 1e9
        bwdm = self.wdm_channels * self.channel_spacing * 1e9
        lea = self.l_eff_a
        return (
            (8.0 / 27.0)
            * self.gamma_nl**2
            * self.l_eff**2
            / (math.pi * b2 * lea * rs**2)
            * math.asinh(0.5 * math.pi**2 * b2 * lea * bwdm**2)
        )


@dataclass(frozen=True)
class ReachResult:
    max_spans: int
    reach_km: float
    optimal_launch_power_dbm: float
    required_snr_db: float
    spans_real: float


def dbm_to_w(p_dbm):
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def w_to_dbm(p_w):
    return 10.0 * math.log10(p_w / 1e-3)


def gn_effective_snr(link, launch_power_dbm, spans=None):
    """Effective SNR (dB) at the receiver for a per-channel launch power."""
    spans = link.spans if spans is None else spans
    if spans < 1:
        raise ValueError("spans must be >= 1")
    p = dbm_to_w(launch_power_dbm)
    return 10.0 * math.log10(p / (spans * link.p_ase_span + spans * link.eta * p**3))


def optimal_launch_power(link, spans=None):
    """Per-channel launch power (dBm) maximizing the effective SNR.

    Independent of the span count because ASE and NLI both scale with it.
    """
    return w_to_dbm((link.p_ase_span / (2.0 * link.eta)) ** (1.0 / 3.0))


def required_snr(c, code_rate, J=None, lo=-10.0, hi=40.0, xtol=1e-4):
    """SNR (dB) at which the GMI reaches ``code_rate * m`` bits per symbol."""
    if not 0 < code_rate < 1:
        raise ValueError("code_rate must lie in (0, 1)")
    target = code_rate * c.m

    def excess(snr_db):
        return gmi_gh(c, NoiseSpec(snr_db), J) - target

    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo > 0 or f_hi < 0:
        raise ReachError(
            f"GMI threshold {target:.4f} not bracketed in [{lo}, {hi}] dB "
            f"(GMI - target = {f_lo:.4g}, {f_hi:.4g})"
        )
    return brentq(excess, lo, hi, xtol=xtol)


def reach_from_snr(link, required_snr_db):
    """Reach at optimal launch power for a given required SNR."""
    p_opt = optimal_launch_power(link)
    snr1 = 10.0 ** (gn_effective_snr(link, p_opt, 1) / 10.0)
    spans_real = snr1 / 10.0 ** (required_snr_db / 10.0)
    max_spans = int(math.floor(spans_real))
    if max_spans < 1:
        raise ReachError(
            f"required SNR {required_snr_db:.2f} dB exceeds the single-span SNR "
            f"{10 * math.log10(snr1):.2f} dB"
        )
    return ReachResult(
        max_spans=max_spans,
        reach_km=max_spans * link.span_length,
        optimal_launch_power_dbm=p_opt,
        required_snr_db=required_snr_db,
        spans_real=spans_real,
    )


def reach(link, c, code_rate=0.8, J=None):
    return reach_from_snr(link, required_snr(c, code_rate, J))


def reach_increase(baseline, candidate, link, code_rate=0.8, J=None):
    """Percent reach increase of ``candidate`` over ``baseline`` (real-valued spans)."""
    rb = reach(link, baseline, code_rate, J)
    rc = reach(link, candidate, code_rate, J)
    return 100.0 * (rc.spans_real - rb.spans_real) / rb.spans_real
