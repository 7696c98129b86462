"""
Command-line interface

Commands print human-readable reports on stdout (JSON with --json). Exit
status: 0 success, 1 suite failure or a negative computational outcome
(NotFaithful, NotInKernel, ...), 2 bad input.
"""

import argparse
import json
import logging
import sys
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from ..config.settings import AppSettings, ConfigManager
from ..core.errors import CapExceededError, EpilabError, SpecFormatError, WitnessError
from ..core.epi import epi_conditions, is_epimorphism, kaehler
from ..core.gabriel import classify_flat_epis, filter_of, verify_axioms
from ..core.poly import (
    constant_term_contraction,
    eval_kernel_rewrite,
    format_coefficient,
    mccoy_annihilator,
    parse_poly,
    shift_schedule,
)
from ..core.spectrum import check_geo_v, check_prop2, decompose, flatness_witness, is_flat_module
from ..core.total_quotient import construct_denominator, parse_frac
from ..integration.ring_files import load_map_file, load_module_file, load_ring_file
from ..harness.generators import builtin_zoo
from ..harness.suites import SUITES, SuiteContext, run_suite, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def _emit(args: argparse.Namespace, text: str, data: Dict[str, Any]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, default=list))
    else:
        print(text)


def _group_name(invariant_factors) -> str:
    factors = [d for d in invariant_factors if d != 1]
    return " x ".join(f"Z/{d}" if d else "Z" for d in factors) or "0"


def _polys(text: str, ring) -> List:
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        raise SpecFormatError("no polynomials given")
    variables = parse_poly(" + ".join(parts), ring).vars
    return [parse_poly(p, ring, variables) for p in parts]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check_epi(args: argparse.Namespace, settings: AppSettings) -> int:
    phi = load_map_file(args.map)
    limits = settings.limits
    epi = is_epimorphism(phi, limits)
    conditions = epi_conditions(phi)
    prop2 = check_prop2(phi, limits)
    geo_v = check_geo_v(phi, limits)
    lines = [
        f"map: {phi.source.name} -> {phi.target.name}",
        f"epimorphism: {epi}",
        "conditions: " + ", ".join(f"{k}={v}" for k, v in conditions.as_dict().items()),
        "spectral: " + ", ".join(f"{k}={v}" for k, v in prop2.as_dict().items()) + f", geo_v={geo_v}",
    ]
    _emit(args, "\n".join(lines), {
        "epimorphism": epi,
        "conditions": conditions.as_dict(),
        "prop2": prop2.as_dict(),
        "geo_v": geo_v,
    })
    return EXIT_OK


def cmd_kaehler(args: argparse.Namespace, settings: AppSettings) -> int:
    phi = load_map_file(args.map)
    omega = kaehler(phi)
    text = (f"Omega({phi.target.name}/{phi.source.name}) = {_group_name(omega.invariant_factors)} (order {omega.order})\n"
            f"generators: {', '.join(str(g) for g in omega.generators)}")
    _emit(args, text, {
        "order": omega.order,
        "invariant_factors": list(omega.invariant_factors),
        "generators": [list(g) for g in omega.generators],
    })
    return EXIT_OK


def cmd_mccoy(args: argparse.Namespace, settings: AppSettings) -> int:
    ring = load_ring_file(args.ring)
    f = parse_poly(args.poly, ring)
    witness = mccoy_annihilator(f)
    if witness is None:
        print(f"{f} is regular in {ring.name}[{f.vars[0]}]")
    else:
        print(f"{f} is a zero-divisor: {format_coefficient(ring, witness)} * ({f}) = 0")
    return EXIT_OK


def cmd_regular(args: argparse.Namespace, settings: AppSettings) -> int:
    ring = load_ring_file(args.ring)
    fs = _polys(args.polys, ring)
    certificate = construct_denominator(fs)
    schedule = shift_schedule(fs)
    print(f"regular element: {certificate.element}")
    for i, s in zip(schedule.order, schedule.shifts):
        print(f"  x^{s} * ({fs[i]})")
    return EXIT_OK


def cmd_frac(args: argparse.Namespace, settings: AppSettings) -> int:
    ring = load_ring_file(args.ring)
    q = parse_frac(args.fraction, ring)
    print(f"fraction: {q}")
    if args.invert:
        print(f"inverse: {q.invert()}")
    return EXIT_OK


def cmd_rewrite(args: argparse.Namespace, settings: AppSettings) -> int:
    ring = load_ring_file(args.ring)
    f = parse_poly(args.poly, ring)
    try:
        point = [int(c) for c in args.at.split(",")]
    except ValueError as e:
        raise SpecFormatError(f"--at expects comma-separated integers, got {args.at!r}") from e
    hs = eval_kernel_rewrite(f, point)
    for var, c, h in zip(f.vars, point, hs):
        print(f"({h}) * ({var} - {c})")
    return EXIT_OK


def cmd_contract(args: argparse.Namespace, settings: AppSettings) -> int:
    ring = load_ring_file(args.ring)
    ideal = constant_term_contraction(_polys(args.polys, ring))
    print(f"contraction: ideal of order {ideal.order} generated by "
          f"{', '.join(format_coefficient(ring, g) for g in ideal.canonical_gens) or '0'}")
    return EXIT_OK


def cmd_flat(args: argparse.Namespace, settings: AppSettings) -> int:
    module = load_module_file(args.module)
    ring = module.ring
    flat = is_flat_module(module, settings.limits)
    lines = [f"{module.name}: {'flat' if flat else 'not flat'} over {ring.name}"]
    data: Dict[str, Any] = {"flat": flat}
    if not flat:
        witness = flatness_witness(module, settings.limits)
        if witness is not None:
            ideal, a = witness
            gens = ", ".join(format_coefficient(ring, g) for g in ideal.canonical_gens) or "0"
            lines.append(f"witness: (I : a)M != IM : a for I = <{gens}>, a = {format_coefficient(ring, a)}")
            data["witness"] = {"ideal": [list(g) for g in ideal.canonical_gens], "a": list(a)}
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_filter(args: argparse.Namespace, settings: AppSettings) -> int:
    phi = load_map_file(args.map)
    filt = filter_of(phi, settings.limits)
    axioms = verify_axioms(filt, settings.limits)
    sets = filt.generator_sets()
    text = "\n".join([f"filter of {phi.source.name} -> {phi.target.name}: {len(filt)} ideals"]
                     + [f"  {s}" for s in sets]
                     + [f"axioms: T1={axioms.t1} T2={axioms.t2} T3={axioms.t3} G={axioms.g}"])
    _emit(args, text, {"members": sets, "axioms": {"t1": axioms.t1, "t2": axioms.t2,
                                                  "t3": axioms.t3, "g": axioms.g}})
    return EXIT_OK if axioms.passed else EXIT_FAILURE


def cmd_classify(args: argparse.Namespace, settings: AppSettings) -> int:
    phi = load_map_file(args.first)
    psi = load_map_file(args.second)
    result = classify_flat_epis(phi, psi, settings.limits)
    print(f"{result.verdict.value} (filters equal: {result.filters_equal})")
    if result.theta is not None:
        print(f"isomorphism: {result.theta!r}")
    return EXIT_OK


def cmd_suite(args: argparse.Namespace, settings: AppSettings) -> int:
    names = list(SUITES) if args.name == "all" else [args.name]
    ctx = SuiteContext(settings.suite, settings.limits, count=args.count)
    reports = [run_suite(name, ctx) for name in names]

    report_dir = args.report_dir or settings.suite.report_dir
    if report_dir:
        for report in reports:
            write_report(report, Path(report_dir))

    if args.json:
        data = [r.to_dict() for r in reports]
        print(json.dumps(data if len(data) > 1 else data[0], indent=2))
    else:
        print("\n".join(r.summary() for r in reports))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURE


def cmd_zoo(args: argparse.Namespace, settings: AppSettings) -> int:
    for ring in builtin_zoo(args.max_order):
        if ring.order > args.max_order:
            continue
        flags = []
        if ring.is_field():
            flags.append("field")
        elif ring.order > 1 and len(decompose(ring, settings.limits)) == 1:
            flags.append("local")
        print(f"{ring.name:<36} order {ring.order:>3}  {' '.join(flags)}")
    return EXIT_OK


def _apply_setting(config: ConfigManager, assignment: str) -> None:
    """limits.NAME=VALUE or suite.NAME=VALUE, with VALUE read as YAML"""
    key, sep, raw = assignment.partition("=")
    section, _, name = key.strip().partition(".")
    if not sep or section not in ("limits", "suite") or not name:
        raise SpecFormatError(f"--set expects limits.NAME=VALUE or suite.NAME=VALUE, got {assignment!r}")
    current = getattr(config.settings, section)
    if name not in {f.name for f in fields(current)}:
        raise SpecFormatError(f"unknown setting {key.strip()!r}")
    value = yaml.safe_load(raw)
    old = getattr(current, name)
    if old is not None and type(value) is not type(old):
        raise SpecFormatError(f"{key.strip()} expects a {type(old).__name__}, got {raw!r}")
    updated = replace(current, **{name: value})
    if section == "limits":
        config.update_limits(updated)
    else:
        config.update_suite_settings(updated)
    logger.info(f"Set {section}.{name} = {value!r}")


def cmd_config(args: argparse.Namespace, settings: AppSettings, config: ConfigManager) -> int:
    if args.reset:
        config.reset_to_defaults()
    elif args.write_defaults:
        config.save_settings()
    for assignment in args.set:
        _apply_setting(config, assignment)
    if args.export:
        if not config.export_settings(Path(args.export)):
            return EXIT_FAILURE
    for key, value in config.get_config_info().items():
        print(f"{key}: {value}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="epilab", description="Epimorphisms of finite commutative rings")
    ap.add_argument("--config", default=None, help="Settings file (YAML)")
    ap.add_argument("--log-level", default=None, help="Override the configured log level")
    ap.add_argument("--paranoid", action="store_true", help="Run every epimorphism test and abort on disagreement")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check-epi", help="Evaluate every epimorphism condition on a map file")
    c.add_argument("map")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check_epi)

    k = sub.add_parser("kaehler", help="Module of differentials of a map")
    k.add_argument("map")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_kaehler)

    m = sub.add_parser("mccoy", help="Constant annihilator of a univariate polynomial")
    m.add_argument("ring")
    m.add_argument("poly")
    m.set_defaults(func=cmd_mccoy)

    r = sub.add_parser("regular", help="Regular element of a faithful ideal, polynomials separated by ';'")
    r.add_argument("ring")
    r.add_argument("polys")
    r.set_defaults(func=cmd_regular)

    q = sub.add_parser("frac", help="Parse a fraction 'num / den' in T(R[x])")
    q.add_argument("ring")
    q.add_argument("fraction")
    q.add_argument("--invert", action="store_true")
    q.set_defaults(func=cmd_frac)

    w = sub.add_parser("rewrite", help="Write f as a combination of x_i - c_i")
    w.add_argument("ring")
    w.add_argument("poly")
    w.add_argument("--at", required=True, help="Point c1,c2,...")
    w.set_defaults(func=cmd_rewrite)

    t = sub.add_parser("contract", help="Contraction of an extended ideal to its constant terms")
    t.add_argument("ring")
    t.add_argument("polys")
    t.set_defaults(func=cmd_contract)

    f = sub.add_parser("filter", help="Gabriel filter of a map")
    f.add_argument("map")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_filter)

    fl = sub.add_parser("flat", help="Flatness of a module file, with a witness when it is not flat")
    fl.add_argument("module")
    fl.add_argument("--json", action="store_true")
    fl.set_defaults(func=cmd_flat)

    cl = sub.add_parser("classify", help="Compare two flat epimorphisms out of the same ring")
    cl.add_argument("first")
    cl.add_argument("second")
    cl.set_defaults(func=cmd_classify)

    s = sub.add_parser("suite", help="Run a verification suite")
    s.add_argument("name", help=f"one of {', '.join(SUITES)}, or all")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--profile", default=None, help="Named suite profile from the settings")
    s.add_argument("--report-dir", default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_suite)

    z = sub.add_parser("zoo", help="List the built-in rings")
    z.add_argument("--max-order", type=int, default=64)
    z.set_defaults(func=cmd_zoo)

    g = sub.add_parser("config", help="Show configuration locations")
    g.add_argument("--write-defaults", action="store_true")
    g.add_argument("--reset", action="store_true")
    g.add_argument("--export", default=None)
    g.add_argument("--set", action="append", default=[], metavar="SECTION.NAME=VALUE",
                   help="Store one limits or suite setting, e.g. suite.seed=11")
    g.set_defaults(func=cmd_config)
    return ap


def effective_settings(args: argparse.Namespace, config: ConfigManager) -> AppSettings:
    """Settings with this invocation's flags applied; the stored settings are untouched"""
    base = config.settings
    suite = base.suite
    profile_name = getattr(args, "profile", None)
    if profile_name:
        profile = config.get_profile(profile_name)
        if profile is None:
            raise SpecFormatError(f"unknown profile {profile_name!r}")
        suite = profile.suite
    if getattr(args, "seed", None) is not None:
        suite = replace(suite, seed=args.seed)
    limits = replace(base.limits, paranoid=base.limits.paranoid or args.paranoid)
    return replace(base, suite=suite, limits=limits)


def dispatch(args: argparse.Namespace, config: ConfigManager) -> int:
    try:
        settings = effective_settings(args, config)
        if args.func is cmd_config:
            return cmd_config(args, settings, config)
        return args.func(args, settings)
    except WitnessError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, FileNotFoundError, IsADirectoryError, CapExceededError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EpilabError as e:
        logger.error(f"{type(e).__name__}: {e}", exc_info=True)
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        print(f"\nFatal error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
