"""Parameter sweeps over the closed forms and oracles, emitted as CSV.

Config files are flat ``key = value`` text; grids are comma-separated lists.
Keys are validated fail-closed against the schema of the requested quantity
(an unknown key aborts the load), SNR is always linear (no dB anywhere), and
rows stream out in deterministic lexicographic grid order regardless of how
many threads compute them.
"""

import csv
import io
import itertools
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import capacity, iid, oracles, reliability
from .channel import ChannelDims, RngStream, gamma_lower_regularized
from .errors import ConfigError, TrainingInfeasibleError, WidemimoError

__all__ = ["SweepConfig", "SweepSummary", "load_config", "run_sweep", "DEFAULT_ROW_CAP"]

DEFAULT_ROW_CAP = 10**6
ROW_CAP_ENV = "WIDEMIMO_ROW_CAP"

_QUANTITIES = ("capacity", "sublinear", "exponent", "outage", "iid", "oracle-check")

# grid schema: ordered (key, type) pairs; groups are sets of mutually
# exclusive alternatives of which exactly one must be present.
_SCHEMAS = {
    "capacity": {"keys": (("t", int), ("r", int), ("l", int), ("snr", float)), "groups": ()},
    "sublinear": {
        "keys": (("t", int), ("r", int), ("snr", float), ("alpha", float), ("l", int)),
        "groups": (("alpha", "l"),),
    },
    "exponent": {
        "keys": (
            ("t", int), ("r", int), ("snr", float),
            ("l", int), ("nu", float), ("rate", float), ("kappa", float),
        ),
        "groups": (("l", "nu"), ("rate", "kappa")),
    },
    "outage": {
        "keys": (
            ("t", int), ("r", int), ("snr", float),
            ("l", int), ("nu", float), ("rate", float), ("kappa", float),
        ),
        "groups": (("l", "nu"), ("rate", "kappa")),
    },
    "iid": {"keys": (("r", int), ("snr", float), ("amplitude_sq", float)), "groups": ()},
    "oracle-check": {"keys": (("t", int), ("r", int), ("l", int), ("snr", float)), "groups": ()},
}

_SCALAR_KEYS = ("quantity", "seed", "n_samples", "out")


@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep request: quantity, grids and reproducibility knobs."""

    quantity: str
    grids: dict
    seed: int = 0
    n_samples: int = 100_000
    output_path: str | None = None


@dataclass
class SweepSummary:
    """What a sweep did: row counts, failures, timing, seed."""

    rows: int = 0
    row_errors: list = field(default_factory=list)
    elapsed_s: float = 0.0
    seed: int = 0
    output_path: str | None = None


def row_cap() -> int:
    raw = os.environ.get(ROW_CAP_ENV)
    if raw is None:
        return DEFAULT_ROW_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ROW_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ConfigError(f"{ROW_CAP_ENV} must be >= 1, got {cap}")
    return cap


def _parse_scalar(key, raw, line_no):
    if key in ("seed", "n_samples"):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"line {line_no}: {key} must be an integer, got {raw!r}") from exc
    return raw


def _parse_grid(key, kind, raw, line_no):
    tokens = [tok.strip() for tok in raw.split(",")]
    if any(not tok for tok in tokens):
        raise ConfigError(f"line {line_no}: empty entry in grid '{key}'")
    values = []
    for tok in tokens:
        try:
            values.append(kind(tok))
        except ValueError as exc:
            raise ConfigError(
                f"line {line_no}: grid '{key}' expects {kind.__name__} values, got {tok!r}"
            ) from exc
    return tuple(values)


def load_config(path) -> SweepConfig:
    """Parse and validate a sweep configuration file (fail-closed)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    raw_entries = {}
    for line_no, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {body!r}")
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {body!r}")
        if key in raw_entries:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        raw_entries[key] = (value, line_no)

    if "quantity" not in raw_entries:
        raise ConfigError("missing required key 'quantity'")
    quantity = raw_entries["quantity"][0]
    if quantity not in _QUANTITIES:
        raise ConfigError(
            f"line {raw_entries['quantity'][1]}: unknown quantity {quantity!r}; "
            f"expected one of {', '.join(_QUANTITIES)}"
        )
    schema = _SCHEMAS[quantity]
    grid_types = dict(schema["keys"])
    allowed = set(_SCALAR_KEYS) | set(grid_types)

    for key, (_, line_no) in raw_entries.items():
        if key not in allowed:
            raise ConfigError(f"line {line_no}: unknown key '{key}' for quantity '{quantity}'")

    scalars = {"seed": 0, "n_samples": 100_000, "out": None}
    for key in ("seed", "n_samples", "out"):
        if key in raw_entries:
            scalars[key] = _parse_scalar(key, *raw_entries[key])
    if scalars["n_samples"] < 1000:
        raise ConfigError("n_samples must be >= 1000")

    grids = {}
    for key, kind in schema["keys"]:
        if key in raw_entries:
            grids[key] = _parse_grid(key, kind, *raw_entries[key])

    for group in schema["groups"]:
        present = [key for key in group if key in grids]
        if len(present) != 1:
            raise ConfigError(
                f"quantity '{quantity}' needs exactly one of {'/'.join(group)}, "
                f"got {present or 'none'}"
            )
    grouped = {key for group in schema["groups"] for key in group}
    for key, _ in schema["keys"]:
        if key not in grouped and key not in grids:
            raise ConfigError(f"quantity '{quantity}' needs a grid for '{key}'")

    total = math.prod(len(v) for v in grids.values())
    cap = row_cap()
    if total > cap:
        raise ConfigError(
            f"grid cross-product has {total} rows, above the cap of {cap} "
            f"(override with {ROW_CAP_ENV})"
        )

    return SweepConfig(
        quantity=quantity,
        grids=grids,
        seed=scalars["seed"],
        n_samples=scalars["n_samples"],
        output_path=scalars["out"],
    )


# ---------------------------------------------------------------------------
# Row evaluation, one function per quantity.  Each returns an ordered dict of
# computed columns; library errors become the per-row error column.
# ---------------------------------------------------------------------------


def _row_capacity(p, cfg, rng):
    dims = ChannelDims(p["t"], p["r"], p["l"])
    expansion = capacity.coherent_expansion(dims, p["snr"])
    lb = capacity.gaussian_lower_bound(dims, p["snr"])
    return {
        "linear": expansion.linear,
        "sublinear": expansion.sublinear,
        "total": expansion.total,
        "gaussian_lower_bound": lb,
        "lb_negative": lb < 0.0,
        "dropped": "snr^3 remainder dropped",
    }


def _row_sublinear(p, cfg, rng):
    dims = ChannelDims(p["t"], p["r"], max(p.get("l", 1), 1))
    if "alpha" in p:
        value = capacity.sublinear_term(dims, p["snr"], alpha=p["alpha"])
        note = "remainder beyond snr^(1+alpha) dropped"
    else:
        value = capacity.sublinear_term(dims, p["snr"], coherence_length=p["l"])
        note = "remainder beyond snr/sqrt(l) dropped"
    return {"value": value, "dropped": note}


def _coherence_and_regime(p):
    t, r, snr = p["t"], p["r"], p["snr"]
    if "l" in p:
        dims = ChannelDims(t, r, p["l"])
        regime = capacity.regime_from_coherence(dims, snr)
        coherence = float(p["l"])
    else:
        regime = capacity.regime_from_nu(snr, p["nu"])
        coherence = capacity.coherence_for_regime(t, r, regime)
    return coherence, regime


def _resolve_rate(p, coherence, regime):
    if "rate" in p:
        return float(p["rate"])
    return coherence * p["r"] * regime.snr ** p["kappa"]


def _row_exponent(p, cfg, rng):
    t, r = p["t"], p["r"]
    coherence, regime = _coherence_and_regime(p)
    rate = _resolve_rate(p, coherence, regime)
    lm = reliability._landmarks_scalar(t, r, coherence, regime.snr_b)
    point = reliability._exponent_point(t, r, coherence, regime, rate)
    return {
        "rate_nats": rate,
        "e_r": point.value,
        "rho": point.rho,
        "region": point.region,
        "r_critical": lm.r_critical,
        "r_cutoff": lm.r_cutoff,
        "c_block": lm.c_block,
        "c_block_training_lb": lm.c_block_training_lb,
        "asymptotics_binding": lm.asymptotics_binding,
        "dropped": point.dropped,
    }


def _row_outage(p, cfg, rng):
    t, r = p["t"], p["r"]
    coherence, regime = _coherence_and_regime(p)
    rate = _resolve_rate(p, coherence, regime)
    if coherence <= t:
        raise TrainingInfeasibleError(f"training needs l > t, got l={coherence:g}, t={t}")
    f_star, gamma_star = reliability._f_star_scalar(t, coherence, regime.snr_b)
    prob = gamma_lower_regularized(r * t, rate / (coherence * f_star))
    point = reliability._exponent_point(t, r, coherence, regime, rate)
    return {
        "rate_nats": rate,
        "f_star": f_star,
        "gamma_star": gamma_star,
        "outage": prob,
        "delta_times_outage": regime.delta * prob,
        "block_error_bound": regime.delta * math.exp(-point.value),
    }


def _row_iid(p, cfg, rng):
    r, snr, a = p["r"], p["snr"], p["amplitude_sq"]
    spec = iid.onoff_building_blocks(r, snr, a)
    quad = iid.onoff_mi_quadrature(r, snr, a, rel_tol=1e-10)
    expansion = iid.onoff_mi_asymptotic(r, snr, a)
    bracket = iid.iid_capacity_bracket(r, snr)
    mstar = iid.m_star(r, snr)
    return {
        "omega": spec.omega,
        "divergence": spec.divergence,
        "zeta_star": spec.zeta_star,
        "mi_quadrature": quad,
        "mi_asymptotic": expansion.value,
        "zeta_ratio": expansion.zeta_ratio,
        "bracket_lower": bracket.lower,
        "bracket_upper": bracket.upper,
        "delta_iid_dot": bracket.delta_iid_dot,
        "m_star": mstar.m_star,
        "m_star_argmin": mstar.argmin_amplitude_sq,
    }


def _row_oracle_check(p, cfg, rng):
    dims = ChannelDims(p["t"], p["r"], p["l"])
    est = oracles.mc_coherent_mi(dims, p["snr"], cfg.n_samples, rng)
    closed = capacity.coherent_expansion(dims, p["snr"]).total
    gap = abs(est.mean - closed)
    slack = est.ci99_half + 10.0 * p["snr"] ** 3
    return {
        "n_samples": cfg.n_samples,
        "mc_mean": est.mean,
        "mc_std_error": est.std_error,
        "ci99_low": est.ci99_low,
        "ci99_high": est.ci99_high,
        "closed_form": closed,
        "abs_gap": gap,
        "slack": slack,
        "agree": gap <= slack,
    }


_ROW_FUNCS = {
    "capacity": (_row_capacity, ["linear", "sublinear", "total", "gaussian_lower_bound", "lb_negative", "dropped"]),
    "sublinear": (_row_sublinear, ["value", "dropped"]),
    "exponent": (
        _row_exponent,
        ["rate_nats", "e_r", "rho", "region", "r_critical", "r_cutoff", "c_block",
         "c_block_training_lb", "asymptotics_binding", "dropped"],
    ),
    "outage": (
        _row_outage,
        ["rate_nats", "f_star", "gamma_star", "outage", "delta_times_outage", "block_error_bound"],
    ),
    "iid": (
        _row_iid,
        ["omega", "divergence", "zeta_star", "mi_quadrature", "mi_asymptotic", "zeta_ratio",
         "bracket_lower", "bracket_upper", "delta_iid_dot", "m_star", "m_star_argmin"],
    ),
    "oracle-check": (
        _row_oracle_check,
        ["n_samples", "mc_mean", "mc_std_error", "ci99_low", "ci99_high", "closed_form",
         "abs_gap", "slack", "agree"],
    ),
}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def run_sweep(
    config: SweepConfig,
    *,
    out: str | None = None,
    seed: int | None = None,
    threads: int = 1,
    err_stream=None,
) -> SweepSummary:
    """Evaluate the configured quantity over the grid cross-product.

    Rows are emitted in lexicographic grid order; Monte Carlo rows each get
    their own stream id, so the CSV bytes do not depend on ``threads``.
    Per-row library errors land in the error column and the run continues.
    """
    err_stream = err_stream if err_stream is not None else sys.stderr
    seed = config.seed if seed is None else seed
    path = out if out is not None else config.output_path
    start = time.perf_counter()

    row_fn, computed_cols = _ROW_FUNCS[config.quantity]
    grid_keys = list(config.grids.keys())
    header = grid_keys + computed_cols + ["error"]
    combos = list(itertools.product(*(config.grids[k] for k in grid_keys)))

    def eval_row(item):
        index, combo = item
        params = dict(zip(grid_keys, combo))
        rng = RngStream(seed, index)
        try:
            return index, params, row_fn(params, config, rng), None
        except WidemimoError as exc:
            return index, params, {}, f"{type(exc).__name__}: {exc}"

    items = list(enumerate(combos))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_row, items))
    else:
        results = [eval_row(item) for item in items]

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    summary = SweepSummary(seed=seed, output_path=path)
    for index, params, computed, error in results:
        row = [_fmt(params[k]) for k in grid_keys]
        row += [_fmt(computed.get(col)) for col in computed_cols]
        row.append("" if error is None else error)
        writer.writerow(row)
        summary.rows += 1
        if error is not None:
            summary.row_errors.append((index, error))

    text = buffer.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)

    summary.elapsed_s = time.perf_counter() - start
    for index, error in summary.row_errors:
        print(f"row {index}: {error}", file=err_stream)
    print(
        f"sweep quantity={config.quantity} rows={summary.rows} "
        f"errors={len(summary.row_errors)} seed={seed} "
        f"elapsed={summary.elapsed_s:.2f}s out={path or '<stdout>'}",
        file=err_stream,
    )
    return summary
