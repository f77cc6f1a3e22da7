"""Parameter sweeps, witness comparison and figure datasets."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Optional, Sequence, Union

import numpy as np

from . import channels as ch
from .channels import ChannelPoint, NmdParams, RegimeTag, RtnParams, classify_regime
from .errors import InputError, SingularityError
from .infomeasures import (
    avg_gate_fidelity,
    gate_fidelity_dephased,
    holevo_dephased_closed,
    holevo_nmd_closed,
    nmd_holevo_argument,
)
from .qfi import positive_intervals, qfi_flow_nmd, qfi_flow_rtn, qfi_phi_closed, qfi_theta_closed
from .qstate import beta_balance, coherence_l1, mixedness, pure_qubit

DEFAULT_STEPS = 2000
SIGN_TOL = 1e-12
FACTOR_FLOOR = 1e-6

CSV_FIELDS = (
    "abscissa", "factor", "rate", "coherence", "mixedness", "beta", "qfi_theta", "qfi_phi",
    "flow_theta", "flow_phi", "gate_fidelity", "holevo", "regime",
)


@dataclass(frozen=True)
class SweepConfig:
    channel: str
    params: Union[RtnParams, NmdParams]
    theta: float
    phi: float = 0.0
    start: float = 0.0
    stop: float = 0.5
    steps: int = DEFAULT_STEPS
    include_singularities: bool = True

    def __post_init__(self):
        c = self.channel.upper()
        if c not in ("RTN", "NMD"):
            raise InputError(f"unknown channel {self.channel!r}")
        object.__setattr__(self, "channel", c)
        want = RtnParams if c == "RTN" else NmdParams
        if not isinstance(self.params, want):
            raise InputError(f"{c} sweep needs {want.__name__}")
        if not (isinstance(self.steps, (int, np.integer)) and self.steps >= 2):
            raise InputError("steps must be an integer >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise InputError("sweep range needs finite start < stop")
        if self.start < 0:
            raise InputError("sweep range must start at >= 0")
        if c == "NMD" and self.stop > 0.5:
            raise InputError("NMD sweeps are limited to p <= 1/2")

    def singular_abscissae(self) -> list[float]:
        """Points inside the range where the decoherence rate diverges."""
        if self.channel == "RTN":
            pts = ch.rtn_zero_crossings(self.params, self.stop)
        else:
            crit = ch.nmd_critical_points(self.params)
            pts = [0.5 if crit is None else crit[0]]
        return [x for x in pts if self.start <= x <= self.stop]

    def grid(self) -> np.ndarray:
        xs = np.linspace(self.start, self.stop, self.steps)
        if self.include_singularities:
            extra = [x for x in self.singular_abscissae() if np.min(np.abs(xs - x)) > ch.SINGULARITY_GUARD]
            if extra:
                xs = np.sort(np.concatenate([xs, extra]))
        return xs


@dataclass(frozen=True)
class SweepRecord:
    abscissa: float
    factor: float
    rate: Optional[float]
    coherence: float
    mixedness: float
    beta: float
    qfi_theta: float
    qfi_phi: float
    flow_theta: float
    flow_phi: float
    gate_fidelity: float
    holevo: float
    regime: RegimeTag

    @property
    def singular(self) -> bool:
        return self.rate is None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = str(self.regime)
        return d


def _point(config: SweepConfig, x: float) -> ChannelPoint:
    if config.channel == "RTN":
        return ChannelPoint.rtn(config.params, x)
    return ChannelPoint.nmd(config.params, x)


def evaluate_point(config: SweepConfig, x: float) -> SweepRecord:
    """Every facet at one abscissa; state measures come from the Kraus-evolved matrix."""
    point = _point(config, x)
    f = point.factor
    kraus = point.kraus()
    rho = ch.apply_channel(kraus, pure_qubit(config.theta, config.phi))
    try:
        rate = point.decoherence_rate()
    except SingularityError:
        rate = None
    if config.channel == "RTN":
        flows = qfi_flow_rtn(config.params, x, config.theta)
        chi = holevo_dephased_closed(f, config.theta)
    else:
        flows = qfi_flow_nmd(config.params, x, config.theta)
        chi = holevo_nmd_closed(config.params, x)
    return SweepRecord(
        abscissa=float(x),
        factor=f,
        rate=rate,
        coherence=coherence_l1(rho),
        mixedness=mixedness(rho),
        beta=beta_balance(rho),
        qfi_theta=qfi_theta_closed(f, config.theta),
        qfi_phi=qfi_phi_closed(f, config.theta),
        flow_theta=flows.flow_theta,
        flow_phi=flows.flow_phi,
        gate_fidelity=avg_gate_fidelity(kraus),
        holevo=chi,
        regime=classify_regime(point),
    )


def run_sweep(config: SweepConfig, threads: int = 1) -> list[SweepRecord]:
    """One record per grid point, sorted by abscissa.

    The exact locations where the rate diverges are added to the grid (unless
    ``include_singularities`` is off) so that they appear as explicit
    singular records.
    """
    xs = config.grid()
    fn = partial(evaluate_point, config)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(fn, xs))
    else:
        records = [fn(x) for x in xs]
    return records


def detect_sign_changes(series: Sequence[tuple[float, float]], tol: float = SIGN_TOL) -> list[float]:
    """Abscissae where the value changes sign, by linear interpolation.

    Values within ``tol`` of zero count as zero; a run of zeros between
    opposite signs is reported at its midpoint.
    """
    pts = [(float(x), float(v)) for x, v in series]
    if any(b[0] < a[0] for a, b in zip(pts, pts[1:])):
        raise InputError("series must be sorted by abscissa")
    out = []
    last = None  # index of last sample with a definite sign
    for i, (x, v) in enumerate(pts):
        if math.isnan(v) or abs(v) <= tol:
            continue
        if last is not None and (pts[last][1] > 0) != (v > 0):
            if last == i - 1:
                x0, v0 = pts[last]
                out.append(x0 - v0 * (x - x0) / (v - v0))
            else:
                out.append(0.5 * (pts[last + 1][0] + pts[i - 1][0]))
        last = i
    return out


@dataclass
class WitnessReport:
    positive_flow_intervals: list
    negative_rate_intervals: list
    sign_disagreements: int
    max_boundary_offset_cells: float
    violations: list
    singularities: list
    factor_crossings: list
    consistent: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = "consistent" if self.consistent else "inconsistent"
        return d


def witness_consistency(records: Sequence[SweepRecord]) -> WitnessReport:
    """Compare positive phi-flow against negative decoherence rate along a sweep.

    For pure dephasing both reduce to the sign of ``f f'``, so the interval
    sets must agree up to one grid cell per boundary. Samples with
    ``|f| <= 1e-6`` or a singular rate are not compared pointwise.
    """
    xs = np.array([r.abscissa for r in records])
    flow = np.array([r.flow_phi for r in records])
    rate = np.array([np.nan if r.rate is None else r.rate for r in records])
    cell = float(np.max(np.diff(xs))) if len(xs) > 1 else 0.0

    flow_iv = positive_intervals(xs, flow, SIGN_TOL)
    rate_iv = positive_intervals(xs, -rate, SIGN_TOL)

    flow_bounds = [b for iv in flow_iv for b in iv]
    rate_bounds = [b for iv in rate_iv for b in iv]
    violations = []
    for i, r in enumerate(records):
        if r.rate is None or abs(r.factor) <= FACTOR_FLOOR:
            continue
        if (r.flow_phi > SIGN_TOL) == (r.rate < -SIGN_TOL):
            continue
        lo = xs[max(i - 1, 0)]
        hi = xs[min(i + 1, len(xs) - 1)]
        # a boundary offset is excused only when both sets switch nearby
        if any(lo <= b <= hi for b in flow_bounds) and any(lo <= b <= hi for b in rate_bounds):
            continue
        violations.append(float(xs[i]))

    if len(flow_iv) == len(rate_iv):
        offsets = [abs(a - b) for fi, ri in zip(flow_iv, rate_iv) for a, b in zip(fi, ri)]
        max_off = max(offsets, default=0.0) / cell if cell else 0.0
    else:
        max_off = math.inf
    consistent = not violations and max_off <= 1.0 + 1e-9

    return WitnessReport(
        positive_flow_intervals=[list(iv) for iv in flow_iv],
        negative_rate_intervals=[list(iv) for iv in rate_iv],
        sign_disagreements=len(violations),
        max_boundary_offset_cells=max_off,
        violations=violations,
        singularities=[float(r.abscissa) for r in records if r.rate is None],
        factor_crossings=detect_sign_changes([(r.abscissa, r.factor) for r in records]),
        consistent=consistent,
    )


# ------------------------------------------------------------ Table 1 audit

TABLE1_FACETS = ("coherence", "mixedness", "beta", "gate_fidelity", "holevo")


@dataclass(frozen=True)
class Table1Row:
    abscissa: float
    theta: float
    factor: float
    closed: dict
    oracle: dict

    def diff(self, facet: str) -> float:
        return abs(self.closed[facet] - self.oracle[facet])

    @property
    def max_diff(self) -> float:
        return max(self.diff(k) for k in TABLE1_FACETS)


def _entropy_bits(eigs) -> float:
    eigs = np.asarray(eigs, dtype=float)
    eigs = eigs[eigs > 0]
    return float(-np.sum(eigs * np.log2(eigs)))


def table1_row(channel: str, params, x: float, theta: float) -> Table1Row:
    """Closed-form table entries next to brute-force values at one point.

    The oracle side evolves the pure state with the channel's Kraus operators
    and measures the resulting matrix directly (eigenvalues from a numeric
    Hermitian solver). The NMD Holevo entry is not the entropy of that
    evolved state; its oracle is the binary entropy of
    ``A = 1 - 2p/3 + 2 alpha p (p-1)`` taken from a numeric eigen-solve of
    ``diag(A, 1-A)``.
    """
    channel = channel.upper()
    point = ChannelPoint.rtn(params, x) if channel == "RTN" else ChannelPoint.nmd(params, x)
    f = point.factor
    kraus = point.kraus()
    m = np.asarray(ch.apply_channel(kraus, pure_qubit(theta, 0.0)))
    s2 = math.sin(theta) ** 2
    if channel == "RTN":
        chi = holevo_dephased_closed(f, theta)
        chi_oracle = _entropy_bits(np.linalg.eigvalsh(m))
    else:
        chi = holevo_nmd_closed(params, x)
        a = nmd_holevo_argument(params, x)
        chi_oracle = _entropy_bits(np.linalg.eigvalsh(np.diag([a, 1.0 - a])))
    closed = {
        "coherence": abs(f * math.sin(theta)),
        "mixedness": (1.0 - f * f) * s2,
        "beta": s2,
        "gate_fidelity": gate_fidelity_dephased(f),
        "holevo": chi,
    }
    c = float(abs(m[0, 1]) + abs(m[1, 0]))
    mix = float(2.0 * (1.0 - np.trace(m @ m).real))
    oracle = {
        "coherence": c,
        "mixedness": mix,
        "beta": c * c + mix,
        "gate_fidelity": avg_gate_fidelity(kraus),
        "holevo": chi_oracle,
    }
    return Table1Row(float(x), float(theta), f, closed, oracle)


def table1(channel: str, params, abscissae: Sequence[float], thetas: Sequence[float]) -> list[Table1Row]:
    return [table1_row(channel, params, x, th) for th in thetas for x in abscissae]


# ------------------------------------------------------------ figures


@dataclass
class Curve:
    label: str
    x: np.ndarray
    y: list  # floats, None where the quantity is singular
    scale: float = 1.0
    params: dict = field(default_factory=dict)


@dataclass
class FigurePanel:
    figure: int
    panel: int
    title: str
    xlabel: str
    ylabel: str
    curves: list
    metadata: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return f"fig{self.figure}_panel{self.panel}"


RTN_RANGE_NON_MARKOVIAN = (0.0, 100.0)
RTN_RANGE_MARKOVIAN = (0.0, 10.0)
NMD_RANGE = (0.0, 0.5)


def _rtn_config(a, gamma, theta, steps):
    rng = RTN_RANGE_NON_MARKOVIAN if 2 * a > gamma else RTN_RANGE_MARKOVIAN
    return SweepConfig("RTN", RtnParams(a, gamma), theta, 0.0, rng[0], rng[1], steps)


def _nmd_config(alpha, theta, steps):
    return SweepConfig("NMD", NmdParams(alpha), theta, 0.0, NMD_RANGE[0], NMD_RANGE[1], steps)


def _curve(label, config, records, attr, scale=1.0):
    ys = []
    for r in records:
        v = getattr(r, attr)
        ys.append(None if v is None else scale * v)
    if isinstance(config.params, RtnParams):
        params = {"channel": "RTN", "a": config.params.a, "gamma": config.params.gamma}
    else:
        params = {"channel": "NMD", "alpha": config.params.alpha}
    params.update(theta=config.theta, phi=config.phi)
    return Curve(label, np.array([r.abscissa for r in records]), ys, scale, params)


_LABELS = {
    "rate": "decoherence rate",
    "flow_theta": "QFI flow (theta)",
    "flow_phi": "QFI flow (phi)",
    "coherence": "coherence C",
    "mixedness": "mixedness M",
    "gate_fidelity": "average gate fidelity",
    "holevo": "Holevo quantity (bits)",
}


def _rtn_pair_panels(fig, a, theta, attrs, markovian_scale, steps):
    nm = _rtn_config(a, 0.001, theta, steps)
    mk = _rtn_config(a, 1.0, theta, steps)
    rec_nm, rec_mk = run_sweep(nm), run_sweep(mk)
    panels = []
    for i, attr in enumerate(attrs, start=1):
        curves = [
            _curve("non-Markovian", nm, rec_nm, attr),
            _curve("Markovian" + (f" x{markovian_scale:g}" if markovian_scale != 1 else ""), mk, rec_mk, attr, markovian_scale),
        ]
        meta = {"scaling": {"Markovian": markovian_scale}} if markovian_scale != 1 else {}
        panels.append(FigurePanel(fig, i, f"RTN {_LABELS[attr]}", "t", _LABELS[attr], curves, meta))
    return panels


def figure_series(figure_id: int, steps: int = DEFAULT_STEPS) -> list[FigurePanel]:
    """Datasets for figures 1-7 at the caption parameters.

    Caption magnitude scalings (x10 in figure 1, x5 in figure 2) are applied
    to the Markovian curves here only and recorded in ``metadata``.
    """
    q, h = math.pi / 4, math.pi / 2
    if figure_id == 1:
        panels = _rtn_pair_panels(1, 0.05, h, ["rate"], 10.0, steps)
        cfg = _nmd_config(0.7, q, steps)
        rec = run_sweep(cfg)
        panels.append(FigurePanel(
            1, 2, "NMD decoherence rate", "p", _LABELS["rate"], [_curve("NMD", cfg, rec, "rate")],
            {"singularities": [r.abscissa for r in rec if r.rate is None]},
        ))
        return panels
    if figure_id == 2:
        return _rtn_pair_panels(2, 0.07, q, ["flow_theta", "flow_phi"], 5.0, steps)
    if figure_id == 3:
        cfg = _nmd_config(0.7, q, steps)
        rec = run_sweep(cfg)
        return [
            FigurePanel(3, i, f"NMD {_LABELS[a]}", "p", _LABELS[a], [_curve("NMD", cfg, rec, a)])
            for i, a in enumerate(["flow_theta", "flow_phi"], start=1)
        ]
    if figure_id == 4:
        return _rtn_pair_panels(4, 0.07, h, ["coherence", "mixedness"], 1.0, steps)
    if figure_id == 5:
        return _rtn_pair_panels(5, 0.07, h, ["gate_fidelity", "holevo"], 1.0, steps)
    if figure_id == 6:
        rtn = _rtn_config(0.5, 0.001, h, steps)
        nmd = _nmd_config(0.5, q, steps)
        out = []
        for i, (cfg, xl, name) in enumerate([(rtn, "t", "RTN"), (nmd, "p", "NMD")], start=1):
            rec = run_sweep(cfg)
            curves = [_curve("C", cfg, rec, "coherence"), _curve("M", cfg, rec, "mixedness")]
            out.append(FigurePanel(6, i, f"{name} coherence-mixedness interplay", xl, "C, M", curves))
        return out
    if figure_id == 7:
        cfg = _nmd_config(0.5, q, steps)
        rec = run_sweep(cfg)
        return [
            FigurePanel(7, i, f"NMD {_LABELS[a]}", "p", _LABELS[a], [_curve("NMD", cfg, rec, a)])
            for i, a in enumerate(["coherence", "mixedness", "gate_fidelity", "holevo"], start=1)
        ]
    raise InputError(f"unknown figure id {figure_id!r}; expected 1..7")
