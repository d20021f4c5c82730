"""Batch front end: parse a JSON config, dispatch one verification
command, emit a structured report.

Exit codes: 0 all asserted checks pass, 1 an asserted check failed,
2 malformed config, 3 unexpected runtime error.  Verdict expectations in
the config (``expect`` fields) only affect the exit code under
``--assert``; the report always records them.

The report body is deterministic for a fixed (config, seed): records are
emitted in a fixed order and the wall-clock timings live in a separate
``timing`` section that is excluded from the canonical byte image (and
from the config hash).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from typing import Any, Optional

import numpy as np

from . import __version__
from .config import ConfigError, parse_growth, parse_measure
from .corpus import random_step_1d, random_step_2d
from .growth import LogGrid, classify, derived_pair
from .integrals import QuadratureSpec
from .maximal import (
    DyadicGrid,
    dyadic_level_intervals,
    dyadic_maximal,
    hl_maximal,
    translated_box_table,
    weighted_dyadic_maximal_batch,
    weighted_maximal_over_boxes,
)
from .measure import BoxFamily, carleson_box_constant
from .carleson import (
    embedding_constant,
    hardy_test_family,
    bergman_test_family,
    verify_equivalence,
    weak_hardy_family,
    weak_type_constant,
)
from .multipliers import embed_check, multiplier_space, omega_profile

EXIT_PASS = 0
EXIT_ASSERT = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_COMMANDS = {}


def _jsonable(obj: Any) -> Any:
    """Recursively convert to JSON-safe values; non-finite floats become
    strings so the canonical byte image is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def _record(name: str, claim: str, inputs: dict, values: dict,
            verdict: str, tolerances: Optional[dict] = None) -> dict:
    return {
        "name": name,
        "claim": claim,
        "inputs": _jsonable(inputs),
        "values": _jsonable(values),
        "verdict": verdict,
        "tolerances": _jsonable(tolerances or {}),
    }


def _command(name):
    def deco(fn):
        _COMMANDS[name] = fn
        return fn
    return deco


def _check_keys(config: dict, allowed: set[str]) -> None:
    unknown = set(config) - allowed - {"command", "seed"}
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")


def _quadrature(config: dict) -> QuadratureSpec:
    q = config.get("quadrature", {})
    extra = set(q) - {"abs_tol", "rel_tol", "y_min", "halfwidth", "scheme", "max_depth", "y_max"}
    if extra:
        raise ConfigError(f"unknown quadrature keys {sorted(extra)}")
    return QuadratureSpec(
        scheme=q.get("scheme", "adaptive_simpson"),
        abs_tol=float(q.get("abs_tol", 1e-10)),
        rel_tol=float(q.get("rel_tol", 1e-9)),
        max_depth=int(q.get("max_depth", 24)),
        halfwidth=float(q.get("halfwidth", math.inf)),
        y_min=float(q.get("y_min", 1e-6)),
        y_max=float(q.get("y_max", math.inf)),
    )


def _box_family(config: dict) -> BoxFamily:
    b = config.get("box_family", {})
    extra = set(b) - {"j_min", "j_max", "extent", "step_fraction"}
    if extra:
        raise ConfigError(f"unknown box_family keys {sorted(extra)}")
    return BoxFamily(
        j_min=int(b.get("j_min", -10)),
        j_max=int(b.get("j_max", 10)),
        extent=float(b.get("extent", 16.0)),
        step_fraction=float(b.get("step_fraction", 0.25)),
    )


def _grid(config: dict) -> LogGrid:
    g = config.get("grid", {})
    extra = set(g) - {"t_min", "t_max", "points"}
    if extra:
        raise ConfigError(f"unknown grid keys {sorted(extra)}")
    return LogGrid(
        t_min=float(g.get("t_min", 1e-6)),
        t_max=float(g.get("t_max", 1e6)),
        points=int(g.get("points", 512)),
    )


def _expectation(config: dict, key: str, actual, records: list, name: str) -> bool:
    """Record an expectation check; absent expectations always pass."""
    if key not in config:
        return True
    expected = config[key]
    ok = expected == actual
    records.append(_record(
        name, f"expected {expected!r}", {"expected": expected},
        {"actual": actual}, "pass" if ok else "fail",
    ))
    return ok


def _explicit_family(specs, phi1, mode: str, alpha: float, spec: QuadratureSpec):
    """Normed test family from explicit test-function specs."""
    from .carleson import NormedMember
    from .config import parse_test_function
    from .spaces import bergman_norm, hardy_norm

    members = []
    for i, fn_spec in enumerate(specs):
        f = parse_test_function(fn_spec)
        if mode == "hardy":
            norm = hardy_norm(f, phi1, spec=spec).luxembourg_sup
        else:
            norm = bergman_norm(f, phi1, alpha, spec=spec).luxembourg
        if norm <= 0:
            raise ConfigError(f"family member {i} has zero norm in the source space")
        members.append(NormedMember(
            f"{fn_spec.get('kind', 'member')}[{i}]", f, norm,
            float(getattr(f, "natural_scale", 1.0)),
        ))
    return members


# ---------------------------------------------------------------------------
# Command handlers: each returns (records, passed)
# ---------------------------------------------------------------------------

@_command("classify-growth")
def _run_classify(config: dict):
    _check_keys(config, {"phi", "grid", "expect_nabla2", "expect_tilde"})
    phi = parse_growth(config["phi"])
    cls = classify(phi, _grid(config))
    records = [
        _record(
            "doubling",
            "phi(2t) <= K phi(t) on the grid",
            {"phi": config["phi"]},
            {"constant": cls.doubling.constant, "passed": cls.doubling.passed},
            "info",
        ),
        _record(
            "dini",
            "int_0^t phi(s)/s^2 ds <= C phi(t)/t (annulus sums)",
            {"phi": config["phi"]},
            {"constant": cls.dini.constant, "passed": cls.dini.passed,
             "witness": cls.dini.witness},
            "info",
        ),
        _record(
            "indices",
            "grid extrema of t phi'(t)/phi(t)",
            {"phi": config["phi"]},
            {"lower": cls.lower_index, "upper": cls.upper_index,
             "upper_type": cls.upper_type_estimate,
             "lower_type": cls.lower_type_estimate,
             "upper_type_constant": cls.upper_type_constant},
            "info",
        ),
        _record(
            "submultiplicativity",
            "the three quotient conditions on 2-d grids",
            {"phi": config["phi"]},
            {k: v.as_dict() for k, v in cls.tilde_conditions.items()},
            "info",
        ),
    ]
    ok = _expectation(config, "expect_nabla2", cls.nabla2_passed, records, "expect_nabla2")
    ok &= _expectation(config, "expect_tilde", cls.tilde_passed, records, "expect_tilde")
    return records, ok


@_command("carleson-test")
def _run_carleson_test(config: dict):
    _check_keys(config, {"measure", "phi", "s", "box_family", "quadrature", "expect"})
    mu = parse_measure(config["measure"])
    phi = parse_growth(config["phi"])
    s = float(config.get("s", 1.0))
    sweep = carleson_box_constant(mu, phi, s, _box_family(config), _quadrature(config))
    verdict = "carleson" if sweep.finite else "not_carleson"
    records = [_record(
        "box-sweep",
        "sup over the box family of mu(Q_I) * phi(1/|I|^s)",
        {"measure": config["measure"], "phi": config["phi"], "s": s},
        {
            "constant": sweep.constant,
            "witness": None if sweep.witness is None else
                [sweep.witness.center_x, sweep.witness.length],
            "divergent_mass": sweep.divergent_mass,
            "trend": sweep.trend,
            "verdict": verdict,
        },
        "info",
    )]
    ok = _expectation(config, "expect", verdict, records, "expect")
    return records, ok


@_command("equivalence")
def _run_equivalence(config: dict):
    _check_keys(config, {"measure", "phi1", "phi2", "mode", "alpha", "s",
                         "box_family", "quadrature", "expect"})
    mu = parse_measure(config["measure"])
    phi1 = parse_growth(config["phi1"])
    phi2 = parse_growth(config["phi2"])
    rep = verify_equivalence(
        mu, phi1, phi2,
        mode=config.get("mode", "hardy"),
        alpha=float(config.get("alpha", 0.0)),
        s=config.get("s"),
        box_family=_box_family(config),
        spec=_quadrature(config),
    )
    records = [_record(
        "equivalence",
        "box, kernel, and embedding verdicts agree (finite together)",
        {"measure": config["measure"], "phi1": config["phi1"],
         "phi2": config["phi2"], "mode": rep.mode, "s": rep.s},
        rep.as_dict(),
        "pass" if rep.coherent else "fail",
    )]
    verdict = None
    if rep.carleson is not None:
        verdict = "carleson" if rep.carleson else "not_carleson"
    ok = rep.coherent
    ok &= _expectation(config, "expect", verdict, records, "expect")
    return records, ok


@_command("embed-check")
def _run_embed(config: dict):
    _check_keys(config, {"phi1", "phi2", "variant", "alpha", "beta", "grid", "expect"})
    res = embed_check(
        parse_growth(config["phi1"]),
        parse_growth(config["phi2"]),
        config.get("variant", "hardy_to_bergman"),
        float(config.get("alpha", 0.0)),
        None if config.get("beta") is None else float(config["beta"]),
        _grid(config),
    )
    verdict = "holds" if res.holds else "fails"
    records = [_record(
        "embed-check",
        "phi1^{-1}(t) <= phi2^{-1}(C t^(2+alpha)) via edge-slope scan",
        {k: config.get(k) for k in ("phi1", "phi2", "variant", "alpha", "beta")},
        {"holds": res.holds, "constant": res.constant,
         "witness": res.witness, "edge": res.edge},
        "info",
    )]
    ok = _expectation(config, "expect", verdict, records, "expect")
    return records, ok


@_command("multiplier-classify")
def _run_multiplier(config: dict):
    _check_keys(config, {"phi1", "phi2", "variant", "alpha", "beta", "grid", "expect"})
    phi1 = parse_growth(config["phi1"])
    phi2 = parse_growth(config["phi2"])
    variant = config.get("variant", "hardy_to_bergman")
    alpha = float(config.get("alpha", 0.0))
    beta = None if config.get("beta") is None else float(config["beta"])
    prof = omega_profile(phi1, phi2, variant, alpha, beta, _grid(config))
    composed = derived_pair(phi1, phi2)[0]
    verdict = multiplier_space(
        prof, classify(phi1), classify(phi2), classify(composed)
    )
    records = [_record(
        "multiplier-space",
        "profile shape plus hypothesis checks decide the multiplier space",
        {k: config.get(k) for k in ("phi1", "phi2", "variant", "alpha", "beta")},
        {"profile": prof.classification, "bracket": list(prof.bracket),
         **verdict.as_dict()},
        "info",
    )]
    ok = _expectation(config, "expect", verdict.space, records, "expect")
    return records, ok


@_command("weak-test")
def _run_weak(config: dict):
    _check_keys(config, {"measure", "phi1", "phi2", "mode", "alpha",
                         "quadrature", "lambda_grid", "family"})
    mu = parse_measure(config["measure"])
    phi1 = parse_growth(config["phi1"])
    phi2 = parse_growth(config["phi2"])
    mode = config.get("mode", "hardy")
    alpha = float(config.get("alpha", 0.0))
    spec = _quadrature(config)
    if mode == "hardy":
        weak_family = weak_hardy_family(phi1, spec=spec)
        strong_family = hardy_test_family(phi1, spec=spec)
    elif mode == "bergman":
        weak_family = bergman_test_family(phi1, alpha, spec=spec)
        strong_family = weak_family
    else:
        raise ConfigError(f"unknown weak-test mode {mode!r}")
    if "family" in config:
        weak_family = _explicit_family(config["family"], phi1, mode, alpha, spec)
        strong_family = weak_family
    lams = None
    if "lambda_grid" in config:
        lams = np.asarray([float(v) for v in config["lambda_grid"]])
    weak = weak_type_constant(mu, phi2, weak_family, lambda_grid=lams)
    strong = embedding_constant(mu, phi2, strong_family, spec)
    dominated = all(
        wk <= sk * (1 + 1e-6)
        for (_, wk), (_, sk) in zip(weak.per_member, strong.per_member)
    )
    records = [_record(
        "weak-vs-strong",
        "the weak-type constant never exceeds the embedding constant",
        {"measure": config["measure"], "phi1": config["phi1"],
         "phi2": config["phi2"], "mode": mode},
        {"weak": weak.family_constant, "strong": strong.family_constant,
         "weak_members": list(map(list, weak.per_member)),
         "strong_members": list(map(list, strong.per_member))},
        "pass" if dominated else "fail",
        {"slack": 1e-6},
    )]
    return records, dominated


@_command("maximal-suite")
def _run_maximal(config: dict):
    _check_keys(config, {"n_functions", "n_probes", "n_levels", "alphas"})
    seed = int(config.get("seed", 0))
    n_functions = int(config.get("n_functions", 50))
    n_probes = int(config.get("n_probes", 50))
    n_levels = int(config.get("n_levels", 10))
    alphas = [float(a) for a in config.get("alphas", [0.0, 1.0])]
    rng = np.random.default_rng(seed)
    grids = (DyadicGrid(0.0, -4, 6), DyadicGrid(1.0 / 3.0, -4, 6))

    onethird_bad = weak_bad = compare_bad = 0
    for _ in range(n_functions):
        f = random_step_1d(rng)
        probes = rng.uniform(*f.window, n_probes)
        m_full = np.array([hl_maximal(f, float(x)) for x in probes])
        m_dyadic = dyadic_maximal(f, grids[0], probes) + dyadic_maximal(f, grids[1], probes)
        onethird_bad += int(np.sum(m_full > 6.0 * m_dyadic + 1e-12))

        top = float(np.max(np.abs(f.values)))
        if top > 0:
            for lam in np.geomspace(top / 100.0, top * 0.999, n_levels):
                for grid in grids:
                    intervals = dyadic_level_intervals(f, grid, float(lam))
                    size = sum(b - a for a, b in intervals)
                    fa = np.abs(f.values)
                    widths = np.diff(f.edges)
                    bound = (2.0 / lam) * float(np.sum(fa[fa > lam / 2] * widths[fa > lam / 2]))
                    if size > bound + 1e-12:
                        weak_bad += 1

    for _ in range(max(1, n_functions // 4)):
        f2 = random_step_2d(rng)
        xs = rng.uniform(f2.x_edges[0], f2.x_edges[-1], n_probes)
        ys = rng.uniform(f2.y_edges[0] + 1e-6, f2.y_edges[-1] * 0.999, n_probes)
        for alpha in alphas:
            table = translated_box_table(f2, alpha, -3, 4, extent=6.0)
            full = weighted_maximal_over_boxes(table, (xs, ys))
            dyad = weighted_dyadic_maximal_batch(f2, alpha, xs, ys, -3, 4)
            compare_bad += int(np.sum((full > 1e-12) & (dyad < full / 68.0 - 1e-12)))

    values = {
        "one_third_violations": onethird_bad,
        "weak_type_violations": weak_bad,
        "dyadic_comparison_violations": compare_bad,
        "n_functions": n_functions,
        "seed": seed,
    }
    passed = onethird_bad == 0 and weak_bad == 0 and compare_bad == 0
    records = [_record(
        "maximal-suite",
        "one-third trick (factor 6), weak type (constant 2), dyadic "
        "comparison (factor 68) on seeded random step functions",
        {"seed": seed, "n_functions": n_functions},
        values,
        "pass" if passed else "fail",
    )]
    return records, passed


@_command("suite")
def _run_suite(config: dict):
    _check_keys(config, {"runs"})
    records = []
    all_ok = True
    for i, sub in enumerate(config.get("runs", [])):
        sub_records, ok = _dispatch(sub)
        for r in sub_records:
            r = dict(r)
            r["name"] = f"run[{i}].{r['name']}"
            records.append(r)
        all_ok &= ok
    return records, all_ok


def _dispatch(config: dict):
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    command = config.get("command")
    if command not in _COMMANDS:
        raise ConfigError(
            f"unknown command {command!r}; choose from {sorted(_COMMANDS)}"
        )
    return _COMMANDS[command](config)


def run(config: dict) -> dict:
    """Execute one config and assemble the deterministic report."""
    t0 = time.time()
    records, passed = _dispatch(config)
    body = {
        "tool": {"name": "orliczhp", "version": __version__},
        "command": config.get("command"),
        "config": _jsonable(config),
        "config_hash": hashlib.sha256(canonical_json(config).encode()).hexdigest(),
        "records": records,
        "suite_verdict": "pass" if passed else "fail",
    }
    body["timing"] = {"total_s": round(time.time() - t0, 3)}
    return body


def render_text(report: dict) -> str:
    lines = [
        f"orliczhp {report['tool']['version']} :: {report['command']}",
        f"config hash {report['config_hash'][:16]}",
    ]
    for rec in report["records"]:
        lines.append(f"[{rec['verdict']:>4}] {rec['name']}: {rec['claim']}")
        for key, val in rec["values"].items():
            lines.append(f"         {key} = {val}")
    lines.append(f"suite verdict: {report['suite_verdict']}")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="orliczhp",
        description="Numerical testers for Carleson embeddings, maximal "
                    "operators, and pointwise multipliers on the upper half-plane.",
    )
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument(
        "--assert", dest="assert_", action="store_true",
        help="turn verdict expectations into the process status",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        config["seed"] = args.seed

    try:
        report = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report and signal, never trace-dump
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    text = render_text(report) if args.format == "text" else json.dumps(
        _jsonable(report), indent=2, sort_keys=True
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.assert_ and report["suite_verdict"] != "pass":
        return EXIT_ASSERT
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
