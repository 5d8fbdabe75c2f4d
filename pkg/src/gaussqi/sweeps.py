"""Parameter sweeps, figure-data reproduction, expansion verification, and
the limit-order study, with deterministic CSV/JSON output.

Quantities handled by sweeps:
    chernoff            exponent xi = -log Q_{s*}
    q_half              Bhattacharyya point Q_{1/2}
    s_star              minimizing s
    fidelity            F(rho0, rho1) (single-mode transmitters)
    ratio_vs_coherent   xi / xi(coherent) at the same grid point
    ratio_vs_vacuum     Q_{s*} / Q_{s*}(vacuum) at the same grid point
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import highprec
from .divergence import chernoff, fidelity, lambda_factor
from .symplectic import symplectic_eigenvalues
from .target import TargetConfig, make_pair
from .transmitters import KINDS, TransmitterSpec, thermal_state

QUANTITIES = (
    "chernoff",
    "q_half",
    "s_star",
    "fidelity",
    "ratio_vs_coherent",
    "ratio_vs_vacuum",
)

CSV_HEADER = ("transmitter", "model", "n_s", "n_b", "kappa", "quantity", "value", "s_star", "flags")

FIGURES = (
    "fidelity-curves",
    "smsv-ratio",
    "s-map-coherent",
    "s-map-tmss",
    "advantage-map",
)

# Documented reproduction grids: the advantage-map summary statistic is
# grid-dependent, hence the wide acceptance window [2.1, 2.4] around the
# quoted 2.23.
MAP_NS_GRID = tuple(np.logspace(-3, 1, 41))
MAP_NB_GRID = tuple(np.logspace(-3, 2, 41))
MAP_KAPPA = 1e-2


@dataclass(frozen=True)
class SweepRow:
    transmitter: str
    model: str
    n_s: float
    n_b: float
    kappa: float
    quantity: str
    value: float
    s_star: float | None = None
    flags: tuple = ()


@dataclass(frozen=True)
class SweepPlan:
    """Grid specification for run_sweep.

    Grids are explicit tuples; the CLI layer parses range expressions into
    them.  A vacuum transmitter ignores the n_s grid (single point at 0).
    """

    transmitters: tuple = ("coherent",)
    quantities: tuple = ("chernoff",)
    n_s_grid: tuple = (1.0,)
    n_b_grid: tuple = (1.0,)
    kappa_grid: tuple = (1e-2,)
    model: str = "agnostic"
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        for kind in self.transmitters:
            if kind not in KINDS:
                raise ValueError(f"unknown transmitter {kind!r}")
        for q in self.quantities:
            if q not in QUANTITIES:
                raise ValueError(f"unknown quantity {q!r}")
        if self.model not in ("agnostic", "legacy"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.out_format!r}")
        for name, grid in (
            ("n_s", self.n_s_grid),
            ("n_b", self.n_b_grid),
            ("kappa", self.kappa_grid),
        ):
            arr = np.asarray(grid, dtype=float)
            if arr.size == 0 or not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} grid must be non-empty and finite")


class _ChernoffCache:
    """Memoized chernoff() results keyed by the full configuration."""

    def __init__(self):
        self._store = {}

    def get(self, kind: str, n_s: float, n_b: float, kappa: float, model: str):
        key = (kind, n_s, n_b, kappa, model)
        if key not in self._store:
            pair = make_pair(
                TransmitterSpec(kind, n_s),
                TargetConfig(kappa=kappa, n_b=n_b, model=model),
            )
            self._store[key] = (pair, chernoff(pair))
        return self._store[key]


def _evaluate(cache: _ChernoffCache, kind: str, n_s: float, n_b: float,
              kappa: float, model: str, quantity: str) -> SweepRow:
    pair, res = cache.get(kind, n_s, n_b, kappa, model)
    flags = tuple(res.flags)
    base = dict(transmitter=kind, model=model, n_s=n_s, n_b=n_b, kappa=kappa,
                quantity=quantity, s_star=res.s_star, flags=flags)
    if quantity == "chernoff":
        return SweepRow(value=res.xi, **base)
    if quantity == "q_half":
        return SweepRow(value=res.q_half, **base)
    if quantity == "s_star":
        return SweepRow(value=res.s_star, **base)
    if quantity == "fidelity":
        if pair.rho0.n_modes != 1:
            return SweepRow(value=float("nan"),
                            **{**base, "flags": flags + ("unsupported",), "s_star": None})
        return SweepRow(value=fidelity(pair.rho0, pair.rho1),
                        **{**base, "s_star": None})
    if quantity == "ratio_vs_coherent":
        _, ref = cache.get("coherent", n_s, n_b, kappa, model)
        if res.xi == 0.0 or ref.xi == 0.0:
            return SweepRow(value=float("nan"),
                            **{**base, "flags": flags + ("degenerate",)})
        return SweepRow(value=res.xi / ref.xi, **base)
    if quantity == "ratio_vs_vacuum":
        _, ref = cache.get("vacuum", 0.0, n_b, kappa, model)
        if ref.xi == 0.0 and "degenerate" in ref.flags:
            return SweepRow(value=float("nan"),
                            **{**base, "flags": flags + ("degenerate",)})
        # Q_{s*} ratio through the exponent difference, stable when both
        # overlaps sit within rounding of 1.
        return SweepRow(value=float(np.exp(ref.xi - res.xi)), **base)
    raise ValueError(f"unknown quantity {quantity!r}")


def run_sweep(plan: SweepPlan) -> list[SweepRow]:
    """Evaluate the plan, one row per grid point per quantity.

    Rows follow the lexicographic order of (transmitter, n_s, n_b, kappa,
    quantity) as listed in the plan, so identical plans produce identical
    tables.  Degenerate configurations yield flagged rows, not errors.
    """
    cache = _ChernoffCache()
    rows = []
    for kind in plan.transmitters:
        n_s_values = (0.0,) if kind == "vacuum" else plan.n_s_grid
        for n_s in n_s_values:
            for n_b in plan.n_b_grid:
                for kappa in plan.kappa_grid:
                    for quantity in plan.quantities:
                        rows.append(
                            _evaluate(cache, kind, float(n_s), float(n_b),
                                      float(kappa), plan.model, quantity)
                        )
    return rows


def _format_value(x) -> str:
    if x is None:
        return ""
    return "%.17g" % float(x)


def emit(rows: list[SweepRow], path, out_format: str = "csv") -> None:
    """Write rows as CSV (17 significant digits) or JSON.

    `path` may be a filesystem path or an open text stream.
    """
    if out_format not in ("csv", "json"):
        raise ValueError(f"unknown format {out_format!r}")
    owns = not hasattr(path, "write")
    stream = open(path, "w", newline="") if owns else path
    try:
        if out_format == "csv":
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in rows:
                writer.writerow(
                    [
                        row.transmitter,
                        row.model,
                        _format_value(row.n_s),
                        _format_value(row.n_b),
                        _format_value(row.kappa),
                        row.quantity,
                        _format_value(row.value),
                        _format_value(row.s_star),
                        ";".join(row.flags),
                    ]
                )
        else:
            records = [
                {
                    "transmitter": row.transmitter,
                    "model": row.model,
                    "n_s": row.n_s,
                    "n_b": row.n_b,
                    "kappa": row.kappa,
                    "quantity": row.quantity,
                    "value": row.value,
                    "s_star": row.s_star,
                    "flags": list(row.flags),
                }
                for row in rows
            ]
            json.dump(records, stream, indent=1)
            stream.write("\n")
    finally:
        if owns:
            stream.close()


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    emit(rows, buf, "csv")
    return buf.getvalue()


def parse_csv(text: str) -> list[SweepRow]:
    """Inverse of the CSV emitter (used by round-trip tests)."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    rows = []
    for rec in reader:
        rows.append(
            SweepRow(
                transmitter=rec[0],
                model=rec[1],
                n_s=float(rec[2]),
                n_b=float(rec[3]),
                kappa=float(rec[4]),
                quantity=rec[5],
                value=float(rec[6]) if rec[6] else float("nan"),
                s_star=float(rec[7]) if rec[7] else None,
                flags=tuple(f for f in rec[8].split(";") if f),
            )
        )
    return rows


# --------------------------------------------------------------------------
# Figure-data reproduction


def _fig_fidelity_curves() -> tuple[list[SweepRow], dict]:
    kappa, n_b = 1e-4, 20.0
    marker = (2 * n_b - 3) / 4.0
    cfg = TargetConfig(kappa=kappa, n_b=n_b)
    background = thermal_state(n_b)

    vac_pair = make_pair(TransmitterSpec("vacuum", 0.0), cfg)
    f_vac = fidelity(vac_pair.rho1, background)
    rows = [
        SweepRow("vacuum", "agnostic", 0.0, n_b, kappa, "fidelity", f_vac)
    ]
    grid = np.linspace(0.05, 30.0, 600)
    f_smsv = np.empty_like(grid)
    for i, n_s in enumerate(grid):
        pair = make_pair(TransmitterSpec("smsv", float(n_s)), cfg)
        f_smsv[i] = fidelity(pair.rho1, background)
        rows.append(
            SweepRow("smsv", "agnostic", float(n_s), n_b, kappa, "fidelity", f_smsv[i])
        )

    peak = float(grid[np.argmax(f_smsv)])
    peak_dev = abs(peak - marker) / marker
    above = f_smsv > f_vac
    crossings = int(np.count_nonzero(np.diff(above.astype(int))))
    interval = (
        (float(grid[above][0]), float(grid[above][-1])) if above.any() else None
    )
    summary = {
        "figure": "fidelity-curves",
        "kappa": kappa,
        "n_b": n_b,
        "peak_n_s": peak,
        "analytic_marker": marker,
        "peak_rel_dev": peak_dev,
        "peak_within_5pct": bool(peak_dev <= 0.05),
        "crossover_interval": interval,
        "interval_contiguous": bool(above.any() and crossings <= 1),
        "passed": bool(peak_dev <= 0.05 and above.any() and crossings <= 1),
    }
    return rows, summary


def _fig_smsv_ratio() -> tuple[list[SweepRow], dict]:
    n_b, kappa = 200.0, 1e-3
    grid = np.logspace(-2, 3, 51)
    plan = SweepPlan(
        transmitters=("smsv",),
        quantities=("ratio_vs_vacuum", "q_half", "fidelity"),
        n_s_grid=tuple(grid),
        n_b_grid=(n_b,),
        kappa_grid=(kappa,),
    )
    rows = run_sweep(plan)
    cfg = TargetConfig(kappa=kappa, n_b=n_b)
    vac_pair = make_pair(TransmitterSpec("vacuum", 0.0), cfg)
    f_vac = fidelity(vac_pair.rho0, vac_pair.rho1)
    rows.append(SweepRow("vacuum", "agnostic", 0.0, n_b, kappa, "fidelity", f_vac))

    ratio = np.array([r.value for r in rows if r.quantity == "ratio_vs_vacuum"])
    fids = np.array([r.value for r in rows if r.quantity == "fidelity" and r.transmitter == "smsv"])
    hurt = ratio > 1.0
    concomitant = bool(np.all(fids[hurt] > f_vac)) if hurt.any() else False
    summary = {
        "figure": "smsv-ratio",
        "n_b": n_b,
        "kappa": kappa,
        "region_exists": bool(hurt.any()),
        "region_n_s": (
            (float(grid[hurt][0]), float(grid[hurt][-1])) if hurt.any() else None
        ),
        "max_ratio": float(ratio.max()),
        "fidelity_concomitant": concomitant,
        "passed": bool(hurt.any() and concomitant),
    }
    return rows, summary


def _fig_s_map(kind: str) -> tuple[list[SweepRow], dict]:
    plan = SweepPlan(
        transmitters=(kind,),
        quantities=("s_star",),
        n_s_grid=MAP_NS_GRID,
        n_b_grid=MAP_NB_GRID,
        kappa_grid=(MAP_KAPPA,),
    )
    rows = run_sweep(plan)
    values = np.array([r.value for r in rows])
    interior = bool(np.all((values > 0.0) & (values < 1.0)))
    summary = {
        "figure": f"s-map-{kind}",
        "kappa": MAP_KAPPA,
        "s_star_min": float(values.min()),
        "s_star_max": float(values.max()),
        "all_interior": interior,
        "passed": interior,
    }
    return rows, summary


def _fig_advantage_map() -> tuple[list[SweepRow], dict]:
    plan = SweepPlan(
        transmitters=("tmss",),
        quantities=("ratio_vs_coherent",),
        n_s_grid=MAP_NS_GRID,
        n_b_grid=MAP_NB_GRID,
        kappa_grid=(MAP_KAPPA,),
    )
    rows = run_sweep(plan)
    values = np.array([r.value for r in rows])
    best = int(np.argmax(values))
    max_ratio = float(values[best])
    summary = {
        "figure": "advantage-map",
        "kappa": MAP_KAPPA,
        "max_ratio": max_ratio,
        "max_ratio_db": float(10.0 * np.log10(max_ratio)),
        "argmax_n_s": rows[best].n_s,
        "argmax_n_b": rows[best].n_b,
        "max_in_window": bool(2.1 <= max_ratio <= 2.4),
        "all_below_4": bool(values.max() < 4.0),
        "passed": bool(2.1 <= max_ratio <= 2.4 and values.max() < 4.0),
    }
    return rows, summary


def reproduce_figure(which: str) -> tuple[list[SweepRow], dict]:
    """Emit the data grid behind one of the package's reference figures.

    fidelity-curves: fidelity of the reflected squeezed probe against the
        bare background over signal intensity, with the vacuum-probe level
        and the analytic peak marker (2 N_B - 3)/4.
    smsv-ratio: Q_{s*} penalty of squeezed light relative to no
        illumination at high occupation, with the matching fidelity
        ordering.
    s-map-coherent / s-map-tmss: minimizing s over the intensity/occupation
        map.
    advantage-map: exponent ratio of the entangled transmitter over the
        coherent one; its grid maximum and the strict < 4 bound.

    Returns (rows, summary); the summary carries pass/fail flags for the
    quantitative claims attached to the figure.
    """
    if which == "fidelity-curves":
        return _fig_fidelity_curves()
    if which == "smsv-ratio":
        return _fig_smsv_ratio()
    if which == "s-map-coherent":
        return _fig_s_map("coherent")
    if which == "s-map-tmss":
        return _fig_s_map("tmss")
    if which == "advantage-map":
        return _fig_advantage_map()
    raise ValueError(f"unknown figure {which!r}; expected one of {FIGURES}")


# --------------------------------------------------------------------------
# Expansion-residual verification

CHECKS = (
    "bright-lambda-sum",
    "bright-affinity",
    "dim-lambda-sum",
    "dim-affinity",
    "smsv-weak-signal",
    "smsv-strong-signal",
    "tmss-eigenvalues",
    "tmss-affinity",
    "limit-order",
)


@dataclass
class ExpansionCheck:
    """Residual-order verification of one asymptotic simplification.

    The exact quantity is compared against its truncated model on a
    decreasing parameter sequence; the fitted log-log slope must exceed
    expected_order - 0.1.  Checks with value-window semantics (limit-order)
    store the windows in `details` instead of a fitted order.
    """

    name: str
    parameters: dict = field(default_factory=dict)
    sequence: tuple = ()
    residuals: tuple = ()
    fitted_order: float | None = None
    expected_order: float | None = None
    details: dict = field(default_factory=dict)
    passed: bool | None = None


def _fit_order(xs, rs) -> float:
    return float(np.polyfit(np.log(xs), np.log(rs), 1)[0])


def _check_bright_lambda_sum(check: ExpansionCheck) -> ExpansionCheck:
    # Lambda_s(2N_B+1) + Lambda_{1-s}(2(1-k)N_B+1) -> (2N_B(1-ks)+1)/(s(1-s))
    # with O(1/N_B) residual, uniformly over the tested s.
    kappa = 1e-3
    n_bs = np.array([50.0, 100.0, 200.0])
    s_values = (0.3, 0.5, 0.7)
    resid = []
    for n_b in n_bs:
        worst = 0.0
        for s in s_values:
            exact = float(
                lambda_factor(s, 2 * n_b + 1) + lambda_factor(1 - s, 2 * (1 - kappa) * n_b + 1)
            )
            model = (2 * n_b * (1 - kappa * s) + 1) / (s * (1 - s))
            worst = max(worst, abs(exact - model))
        resid.append(worst)
    order = _fit_order(1.0 / n_bs, resid)
    check.parameters = {"kappa": kappa, "s_values": s_values}
    check.sequence = tuple(1.0 / n_bs)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 1.0
    check.passed = order > 1.0 - 0.1
    return check


def _check_dim_lambda_sum(check: ExpansionCheck) -> ExpansionCheck:
    # Small-N_B limit 2 + 2(N_B^s + N_B^{1-s}).  The stated O(N_B) residual
    # holds at s = 1/2; away from it the true remainder is the larger
    # O(N_B^{2 min(s, 1-s)}), so the expected order is per-s.
    kappa = 1e-4
    n_bs = np.array([1e-2, 1e-3, 1e-4])
    per_s = {}
    ok = True
    for s in (0.5, 0.3, 0.7):
        resid = []
        for n_b in n_bs:
            exact = float(
                lambda_factor(s, 2 * n_b + 1) + lambda_factor(1 - s, 2 * (1 - kappa) * n_b + 1)
            )
            model = 2 + 2 * (n_b**s + n_b ** (1 - s))
            resid.append(abs(exact - model))
        order = _fit_order(n_bs, resid)
        expected = min(1.0, 2 * s, 2 * (1 - s))
        per_s[s] = {"fitted": order, "expected": expected, "residuals": tuple(resid)}
        ok = ok and order > expected - 0.1
    primary = per_s[0.5]
    check.parameters = {"kappa": kappa}
    check.sequence = tuple(n_bs)
    check.residuals = primary["residuals"]
    check.fitted_order = primary["fitted"]
    check.expected_order = 1.0
    check.details = {"per_s": per_s}
    check.passed = ok
    return check


def _check_bright_affinity(check: ExpansionCheck) -> ExpansionCheck:
    # -log Q_{1/2} for the coherent pair vs the bright-background model
    # k^2(N_B-1)/(8N_B) + k N_S / (2((2-k)N_B+1)); residual of higher order.
    n_b, n_s = 100.0, 1.0
    kappas = np.logspace(-4, -2, 4)
    resid = []
    for kappa in kappas:
        exact = -float(highprec.log_q_half("coherent", n_s, n_b, kappa))
        model = kappa**2 * (n_b - 1) / (8 * n_b) + kappa * n_s / (2 * ((2 - kappa) * n_b + 1))
        resid.append(abs(exact - model))
    order = _fit_order(kappas, resid)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 2.0
    check.passed = order > 2.0 - 0.1
    return check


def _check_dim_affinity(check: ExpansionCheck) -> ExpansionCheck:
    # Small-N_B model N_B k^2/8 + k N_S/(1+2 sqrt(N_B)).  Its own error
    # terms (O(N_B) and O(k sqrt(N_B)) inside the denominator) enter at
    # first order in kappa, so the residual order is 1, not 2.
    n_b, n_s = 1e-3, 1.0
    kappas = np.logspace(-4, -2, 4)
    resid = []
    for kappa in kappas:
        exact = -float(highprec.log_q_half("coherent", n_s, n_b, kappa))
        model = n_b * kappa**2 / 8 + kappa * n_s / (1 + 2 * np.sqrt(n_b))
        resid.append(abs(exact - model))
    order = _fit_order(kappas, resid)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 1.0
    check.passed = order > 1.0 - 0.1
    return check


def _check_smsv_weak(check: ExpansionCheck) -> ExpansionCheck:
    # 1 - Q_{1/2} = k^2 (N_B - 1 - 2 N_S)/(8 N_B) + o(k^2) for weak squeezed
    # light in a bright background; the deficit is smaller than the vacuum
    # transmitter's, which is the squeezing-hurts statement.
    n_b, n_s = 100.0, 1.0
    kappas = np.logspace(-4, -2, 4)
    resid = []
    hurts = True
    for kappa in kappas:
        exact = highprec.q_half_deficit("smsv", n_s, n_b, kappa)
        model = kappa**2 * (n_b - 1 - 2 * n_s) / (8 * n_b)
        resid.append(abs(exact - model))
        vac = highprec.q_half_deficit("vacuum", 0.0, n_b, kappa)
        hurts = hurts and exact < vac
    order = _fit_order(kappas, resid)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 2.0
    check.details = {"worse_than_vacuum": hurts}
    check.passed = bool(order > 2.0 - 0.1 and hurts)
    return check


def _check_smsv_strong(check: ExpansionCheck) -> ExpansionCheck:
    # Strong-signal regime N_S > N_B: the extra -k^2 N_S(N_S-N_B)/(4N_B^2)
    # term makes squeezed light beat the vacuum deficit.
    n_b, n_s = 50.0, 100.0
    kappas = np.logspace(-5, -3, 4)
    resid = []
    helps = True
    for kappa in kappas:
        exact = highprec.q_half_deficit("smsv", n_s, n_b, kappa)
        model = kappa**2 * (n_b - 1) / (8 * n_b) + kappa**2 * n_s * (n_s - n_b) / (4 * n_b**2)
        resid.append(abs(exact - model))
        vac = highprec.q_half_deficit("vacuum", 0.0, n_b, kappa)
        helps = helps and exact > vac
    order = _fit_order(kappas, resid)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 2.0
    check.details = {"better_than_vacuum": helps}
    check.passed = bool(order > 2.0 - 0.1 and helps)
    return check


def _check_tmss_eigenvalues(check: ExpansionCheck) -> ExpansionCheck:
    # Doubled symplectic eigenvalues of the two-mode received state:
    # gamma_1 = (1+2N_B) - 2N_B(1+N_B)k/(1+N_S+N_B) + o(k), same shape for
    # gamma_2 with N_S <-> N_B; the o(k) remainder is quadratic.
    n_b, n_s = 5.0, 2.0
    kappas = np.logspace(-5, -2, 4)
    resid1, resid2 = [], []
    for kappa in kappas:
        pair = make_pair(TransmitterSpec("tmss", n_s), TargetConfig(kappa=kappa, n_b=n_b))
        gammas = 2.0 * np.sort(symplectic_eigenvalues(pair.rho1.cov))[::-1]
        model1 = (1 + 2 * n_b) - 2 * n_b * (1 + n_b) * kappa / (1 + n_s + n_b)
        model2 = (1 + 2 * n_s) - 2 * n_s * (1 + n_s) * kappa / (1 + n_s + n_b)
        resid1.append(abs(gammas[0] - model1))
        resid2.append(abs(gammas[1] - model2))
    order1 = _fit_order(kappas, resid1)
    order2 = _fit_order(kappas, resid2)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid1)
    check.fitted_order = order1
    check.expected_order = 2.0
    check.details = {"gamma2_fitted_order": order2}
    check.passed = bool(order1 > 2.0 - 0.1 and order2 > 2.0 - 0.1)
    return check


def _check_tmss_affinity(check: ExpansionCheck) -> ExpansionCheck:
    # 1 - Q_{1/2} for the entangled transmitter against the two-order model
    # (N_S - 2 N_S^{3/2} + 3 N_S^2) k / N_B + (N_B-1) k^2/(8 N_B)
    # + (5N_S/4 - 3 N_S^{3/2} + 9 N_S^2) k^2 / N_B.  At small N_S and large
    # N_B the neglected terms are O(k^3).
    n_b, n_s = 1e4, 1e-3
    kappas = np.logspace(-4, -2, 4)
    resid = []
    for kappa in kappas:
        exact = highprec.q_half_deficit("tmss", n_s, n_b, kappa)
        model = (
            (n_s - 2 * n_s**1.5 + 3 * n_s**2) * kappa / n_b
            + (n_b - 1) * kappa**2 / (8 * n_b)
            + (1.25 * n_s - 3 * n_s**1.5 + 9 * n_s**2) * kappa**2 / n_b
        )
        resid.append(abs(exact - model))
    order = _fit_order(kappas, resid)
    check.parameters = {"n_b": n_b, "n_s": n_s}
    check.sequence = tuple(kappas)
    check.residuals = tuple(resid)
    check.fitted_order = order
    check.expected_order = 3.0
    check.passed = order > 3.0 - 0.1
    return check


def _check_limit_order(check: ExpansionCheck) -> ExpansionCheck:
    # Order-of-limits sensitivity of the entangled-over-coherent exponent
    # ratio.  kappa -> 0 first approaches (but never reaches) 4; n_s -> 0
    # first gives no advantage; the rescaled-background model is continuous
    # with limit 4.
    n_b = 1e4
    kappa_first = [
        (1e-4, k) for k in (1e-6, 1e-8, 1e-10, 1e-11)
    ]
    ratios_kf = [highprec.exponent_ratio(n_s, n_b, k) for n_s, k in kappa_first]
    ns_first = [(n, 1e-3) for n in (1e-6, 1e-8, 1e-10)]
    ratios_nf = [highprec.exponent_ratio(n_s, n_b, k) for n_s, k in ns_first]
    legacy = highprec.exponent_ratio(1e-4, n_b, 1e-6, model="legacy")
    all_ratios = ratios_kf + ratios_nf + [legacy]
    ok = (
        3.8 <= ratios_kf[2] <= 4.0
        and all(r < 4.0 for r in all_ratios)
        and abs(ratios_nf[-1] - 1.0) <= 0.02
        and 3.9 <= legacy <= 4.0
    )
    check.parameters = {"n_b": n_b}
    check.sequence = tuple(k for _, k in kappa_first)
    check.residuals = tuple(abs(r - 4.0) for r in ratios_kf)
    check.details = {
        "kappa_first": list(zip([p[1] for p in kappa_first], ratios_kf)),
        "ns_first": list(zip([p[0] for p in ns_first], ratios_nf)),
        "legacy_ratio": legacy,
    }
    check.passed = bool(ok)
    return check


_CHECK_IMPLS = {
    "bright-lambda-sum": _check_bright_lambda_sum,
    "bright-affinity": _check_bright_affinity,
    "dim-lambda-sum": _check_dim_lambda_sum,
    "dim-affinity": _check_dim_affinity,
    "smsv-weak-signal": _check_smsv_weak,
    "smsv-strong-signal": _check_smsv_strong,
    "tmss-eigenvalues": _check_tmss_eigenvalues,
    "tmss-affinity": _check_tmss_affinity,
    "limit-order": _check_limit_order,
}


def verify_expansion(check) -> ExpansionCheck:
    """Fill an ExpansionCheck (or a check name) with measured residuals.

    Failures set passed=False; nothing raises, so a sweep over all checks
    always reports a complete table.
    """
    if isinstance(check, str):
        check = ExpansionCheck(name=check)
    if check.name not in _CHECK_IMPLS:
        raise ValueError(f"unknown check {check.name!r}; expected one of {CHECKS}")
    return _CHECK_IMPLS[check.name](check)


def limit_order_study(model: str = "agnostic") -> list[SweepRow]:
    """Tabulate the exponent ratio along both limit orderings.

    Rows carry quantity "exponent_ratio" with a path flag: "kappa-first"
    holds the signal intensity at 1e-4 while the reflectivity drops;
    "ns-first" holds the reflectivity at 1e-3 while the intensity drops.
    """
    if model not in ("agnostic", "legacy"):
        raise ValueError(f"unknown model {model!r}")
    n_b = 1e4
    rows = []
    kappa_path = (1e-4, 1e-6, 1e-8, 1e-10) if model == "agnostic" else (1e-4, 1e-5, 1e-6)
    for kappa in kappa_path:
        ratio = highprec.exponent_ratio(1e-4, n_b, kappa, model=model)
        rows.append(
            SweepRow("tmss", model, 1e-4, n_b, kappa, "exponent_ratio", ratio,
                     flags=("kappa-first",))
        )
    for n_s in (1e-6, 1e-8, 1e-10):
        ratio = highprec.exponent_ratio(n_s, n_b, 1e-3, model=model)
        rows.append(
            SweepRow("tmss", model, n_s, n_b, 1e-3, "exponent_ratio", ratio,
                     flags=("ns-first",))
        )
    return rows
