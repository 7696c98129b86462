"""
Verification suites

Each suite runs one family of checks over generated or enumerated instances
and collects the failures, each with a reproducer that can be replayed through
the file interface.
"""

import itertools
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from ..config.settings import SuiteSettings
from ..core.errors import CapExceededError, NotFaithfulError, SpecFormatError, UnknownSuiteError
from ..core.epi import (
    Verdict,
    check_module_condition,
    epi_conditions,
    is_epimorphism,
    kaehler,
    tensor_square,
    verify_faithfully_flat_epi_iso,
    verify_field_epi_iso,
    verify_injective_factorization,
)
from ..core.gabriel import Classification, classify_flat_epis, extension, filter_of, verify_axioms
from ..core.limits import ComputeLimits
from ..core.poly import Poly, eval_kernel_rewrite, has_polynomial_annihilator, mccoy_annihilator
from ..core.rings import (
    FiniteModule,
    FiniteRing,
    Ideal,
    RingMap,
    diagonal_map,
    enumerate_ideals,
    identity_map,
    inclusion_map,
    is_faithful,
    module_colon,
    poly_quotient,
    quotient_module,
    regular_module,
    zmod,
)
from ..core.spectrum import (
    check_geo_ii,
    check_geo_iv,
    check_geo_v,
    check_local_iso,
    check_prop2,
    colon_condition_failure,
    flatness_witness,
    is_flat_module,
)
from ..core.total_quotient import construct_denominator, total_quotient_is_trivial
from ..integration.ring_files import map_to_dict, module_to_dict, save_document
from .generators import (
    InstanceGenerator,
    factor_projections,
    flat_epimorphisms_from,
    generate_maps,
    graph_map,
    poly_inclusion,
    random_element,
    surjections,
    zoo_modules,
)

logger = logging.getLogger(__name__)


@dataclass
class SuiteFailure:
    index: int
    message: str
    reproducer: Dict[str, Any]


@dataclass
class SuiteReport:
    name: str
    seed: int
    instances: int = 0
    failures: List[SuiteFailure] = field(default_factory=list)
    capped: List[str] = field(default_factory=list)     # instances skipped at a size cap
    tallies: Dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def tally(self, key: str) -> None:
        self.tallies[key] = self.tallies.get(key, 0) + 1

    def fail(self, index: int, message: str, reproducer: Dict[str, Any]) -> None:
        logger.warning(f"[{self.name}] instance {index}: {message}")
        self.failures.append(SuiteFailure(index, message, reproducer))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["failures"] = sorted(data["failures"], key=lambda f: f["index"])
        data["tallies"] = dict(sorted(self.tallies.items()))
        data["ok"] = self.ok
        return data

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.name}: {status} ({self.instances} instances, {len(self.failures)} failures, "
                 f"{len(self.capped)} capped, {self.wall_time:.2f}s, seed {self.seed})"]
        for key, value in sorted(self.tallies.items()):
            lines.append(f"  {key}: {value}")
        for failure in sorted(self.failures, key=lambda f: f.index):
            lines.append(f"  instance {failure.index}: {failure.message}")
        return "\n".join(lines)


@dataclass
class SuiteContext:
    settings: SuiteSettings = field(default_factory=SuiteSettings)
    limits: ComputeLimits = field(default_factory=ComputeLimits)
    count: Optional[int] = None         # overrides the suite's configured count

    def count_for(self, attribute: str) -> int:
        return self.count if self.count is not None else getattr(self.settings, attribute)

    def generator(self) -> InstanceGenerator:
        return InstanceGenerator(seed=self.settings.seed, max_ring_order=self.settings.max_ring_order,
                                 limits=self.limits)


# ---------------------------------------------------------------------------
# Plumbing
# ---------------------------------------------------------------------------

def map_reproducer(phi: RingMap, **extra) -> Dict[str, Any]:
    try:
        data = map_to_dict(phi)
    except SpecFormatError:
        data = {"map": repr(phi)}
    data.update(extra)
    return data


def poly_reproducer(fs: Iterable[Poly], **extra) -> Dict[str, Any]:
    fs = list(fs)
    ring = fs[0].ring
    data = {
        "ring": ring.description,
        "variables": list(fs[0].vars),
        "polys": [str(f) for f in fs],
        "terms": [[[list(e), list(c)] for e, c in sorted(f.terms.items())] for f in fs],
    }
    data.update(extra)
    return data


def module_reproducer(module: FiniteModule, **extra) -> Dict[str, Any]:
    try:
        data = module_to_dict(module)
    except SpecFormatError:
        data = {"module": module.name}
    data.update(extra)
    return data


def _guard(report: SuiteReport, index: int, check: Callable[[], Optional[str]],
           reproducer: Callable[[], Dict[str, Any]]) -> None:
    """Run one instance; a returned message or an exception is a failure"""
    report.instances += 1
    try:
        problem = check()
    except CapExceededError as e:
        logger.info(f"[{report.name}] instance {index} skipped: {e}")
        report.capped.append(f"instance {index}: {e}")
        return
    except Exception as e:
        logger.debug(f"[{report.name}] instance {index} raised", exc_info=True)
        problem = f"{type(e).__name__}: {e}"
    if problem:
        report.fail(index, problem, reproducer())


def _small_flat_epis(ctx: SuiteContext) -> List[RingMap]:
    gen = ctx.generator()
    maps = []
    for ring in gen.zoo:
        if 1 < ring.order <= ctx.settings.classify_max_order:
            maps.extend(flat_epimorphisms_from(ring))
    return maps


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_th1_agreement(ctx: SuiteContext, report: SuiteReport) -> None:
    """Every epimorphism characterization gives the same verdict"""
    for instance in generate_maps(ctx.generator(), ctx.count_for("count")):
        phi = instance.phi

        def check() -> Optional[str]:
            conditions = epi_conditions(phi)
            report.tally("epimorphisms" if conditions.tensor else "non-epimorphisms")
            if not conditions.agree:
                return f"conditions disagree: {conditions.as_dict()}"
            violations = tensor_square(phi).structure_violations()
            if violations:
                return f"tensor square identities fail: {', '.join(violations)}"
            on_s = check_module_condition(phi, regular_module(phi.target))
            if on_s != conditions.tensor:
                return f"module condition on S is {on_s}, other conditions say {conditions.tensor}"
            if conditions.tensor and phi.target.order > 1:
                elements = list(phi.target.elements())
                x = elements[instance.index % len(elements)]
                module = quotient_module(phi.target, Ideal(phi.target, [x]))
                if not check_module_condition(phi, module):
                    return f"module condition fails on {module.name}"
            return None

        _guard(report, instance.index, check, lambda: map_reproducer(phi, family=instance.family))


def suite_prop2_equiv(ctx: SuiteContext, report: SuiteReport) -> None:
    """Spec-injective, residue-bijective and unramified exactly for epimorphisms"""
    for instance in generate_maps(ctx.generator(), ctx.count_for("count")):
        phi = instance.phi

        def check() -> Optional[str]:
            epi = is_epimorphism(phi, ctx.limits)
            conditions = check_prop2(phi, ctx.limits)
            report.tally("epimorphisms" if epi else "non-epimorphisms")
            if conditions.all != epi:
                return f"conditions {conditions.as_dict()} but is_epimorphism is {epi}"
            return None

        _guard(report, instance.index, check, lambda: map_reproducer(phi, family=instance.family))


def suite_geo5_equiv(ctx: SuiteContext, report: SuiteReport) -> None:
    for instance in generate_maps(ctx.generator(), ctx.count_for("count")):
        phi = instance.phi

        def check() -> Optional[str]:
            epi = is_epimorphism(phi, ctx.limits)
            report.tally("epimorphisms" if epi else "non-epimorphisms")
            verdicts = {
                "geo_v": check_geo_v(phi, ctx.limits),
                "geo_ii": check_geo_ii(phi, ctx.limits),
                "geo_iv": check_geo_iv(phi, ctx.limits),
            }
            wrong = [name for name, value in verdicts.items() if value != epi]
            if wrong:
                return f"{', '.join(wrong)} disagree with is_epimorphism = {epi}"
            return None

        _guard(report, instance.index, check, lambda: map_reproducer(phi, family=instance.family))


def suite_kaehler_epi(ctx: SuiteContext, report: SuiteReport) -> None:
    """Epimorphisms are unramified; the converse fails"""
    f2 = zmod(2)
    etale = inclusion_map(poly_quotient(f2, [0, 1, 1]))
    dual_numbers = inclusion_map(poly_quotient(f2, [0, 0, 1]))

    def check_etale() -> Optional[str]:
        if not kaehler(etale).is_zero():
            return "differentials of Z/2 -> Z/2[t]/(t^2 + t) do not vanish"
        if is_epimorphism(etale, ctx.limits):
            return "Z/2 -> Z/2[t]/(t^2 + t) judged an epimorphism"
        return None

    def check_dual() -> Optional[str]:
        order = kaehler(dual_numbers).order
        return None if order == 4 else f"differentials of Z/2 -> Z/2[t]/(t^2) have order {order}, expected 4"

    _guard(report, 0, check_etale, lambda: map_reproducer(etale))
    _guard(report, 1, check_dual, lambda: map_reproducer(dual_numbers))

    for instance in generate_maps(ctx.generator(), ctx.count_for("count")):
        phi = instance.phi

        def check() -> Optional[str]:
            omega = kaehler(phi)
            report.tally(f"|Omega| = {omega.order}")
            if is_epimorphism(phi, ctx.limits) and not omega.is_zero():
                return f"epimorphism with differentials of order {omega.order}"
            return None

        _guard(report, instance.index + 2, check, lambda: map_reproducer(phi, family=instance.family))


def suite_mccoy_oracle(ctx: SuiteContext, report: SuiteReport) -> None:
    """Constant annihilators exist exactly when polynomial ones do"""
    gen = ctx.generator()
    rings = [r for r in gen.zoo if 1 < r.order <= 32]
    for index, rng in enumerate(gen.streams(ctx.count_for("mccoy_count"))):
        ring = rings[int(rng.integers(len(rings)))]
        degree = int(rng.integers(0, 5))
        f = Poly.from_coefficients(ring, [random_element(ring, rng) for _ in range(degree + 1)])
        if rng.random() < 0.5:
            f = f.scale(random_element(ring, rng))

        def check() -> Optional[str]:
            witness = mccoy_annihilator(f)
            oracle = has_polynomial_annihilator(f, max_degree=4)
            report.tally("zero-divisors" if oracle else "regular")
            if (witness is not None) != oracle:
                return f"constant witness {witness} but polynomial annihilator exists = {oracle}"
            if witness is not None and (not any(witness) or not f.scale(witness).is_zero()):
                return f"{witness} does not annihilate {f}"
            return None

        _guard(report, index, check, lambda: poly_reproducer([f]))


def _common_annihilator(ring: FiniteRing, fs: List[Poly]):
    coefficients = [c for f in fs for c in f.content()]
    return next((c for c in ring.elements()
                 if any(c) and all(not any(ring.mul(c, a)) for a in coefficients)), None)


def suite_coro7_regular(ctx: SuiteContext, report: SuiteReport) -> None:
    """Faithful generator lists produce certified regular elements"""
    gen = ctx.generator()
    z6 = zmod(6)
    x = Poly.variable(z6)
    cases: List[List[Poly]] = [[Poly.constant(z6, 3), x.scale(2)]]

    rings = [r for r in gen.zoo if 1 < r.order <= 32]
    for rng in gen.streams(ctx.count_for("coro7_count")):
        ring = rings[int(rng.integers(len(rings)))]
        size = int(rng.integers(1, 4))
        fs = [gen.random_poly(rng, ring, int(rng.integers(0, 4))) for _ in range(size)]
        if rng.random() < 0.25:
            divisors = [z for z in ring.elements() if any(z) and not ring.is_unit(z)]
            if divisors:
                z = divisors[int(rng.integers(len(divisors)))]
                fs = [f.scale(z) for f in fs]
        fs = [f for f in fs if not f.is_zero()] or [Poly.constant(ring, ring.one)]
        cases.append(fs)

    for index, fs in enumerate(cases):
        ring = fs[0].ring

        def check() -> Optional[str]:
            expected = _common_annihilator(ring, fs)
            try:
                certificate = construct_denominator(fs)
            except NotFaithfulError as e:
                report.tally("not faithful")
                if expected is None:
                    return "NotFaithfulError raised for a faithful list"
                if not any(e.witness) or any(any(ring.mul(e.witness, c)) for f in fs for c in f.content()):
                    return f"witness {e.witness} does not annihilate every coefficient"
                return None
            report.tally("faithful")
            if expected is not None:
                return f"accepted although {expected} annihilates every generator"
            if not certificate.verify():
                return f"certificate for {certificate.element} does not verify"
            if index == 0 and certificate.element != Poly.constant(z6, 3) + x.shift(1).scale(2):
                return f"expected 3 + 2x^2, got {certificate.element}"
            return None

        _guard(report, index, check, lambda: poly_reproducer(fs))


def suite_lemma2_rewrite(ctx: SuiteContext, report: SuiteReport) -> None:
    """f vanishing at c is a combination of the x_i - c_i"""
    gen = ctx.generator()
    rings = [r for r in gen.zoo if 1 < r.order <= 16]
    for index, rng in enumerate(gen.streams(ctx.count_for("rewrite_count"))):
        ring = rings[int(rng.integers(len(rings)))]
        n = int(rng.integers(1, 4))
        variables = ("x",) if n == 1 else tuple(f"x{i + 1}" for i in range(n))
        f = gen.random_poly(rng, ring, 3, variables, max_terms=5)
        point = [random_element(ring, rng) for _ in range(n)]
        f = f - Poly.constant(ring, f.evaluate(point), variables)

        def check() -> Optional[str]:
            hs = eval_kernel_rewrite(f, point)
            total = Poly(ring, variables)
            for i, h in enumerate(hs):
                linear = Poly.variable(ring, variables[i], variables) - Poly.constant(ring, point[i], variables)
                total = total + h * linear
            return None if total == f else f"sum of h_i (x_i - c_i) is {total}, not {f}"

        _guard(report, index, check, lambda: poly_reproducer([f], point=[list(c) for c in point]))


def suite_lemma7_flatness(ctx: SuiteContext, report: SuiteReport) -> None:
    """Flat exactly when (I:J)M = IM:J for all ideals, with witnesses otherwise"""
    z4 = zmod(4)
    half = quotient_module(z4, Ideal(z4, [z4.from_int(2)]))

    def check_example() -> Optional[str]:
        left, right = module_colon(half, Ideal(z4, []), Ideal(z4, [z4.from_int(2)]))
        if left == right:
            return "(0 : 2)M equals 0M : 2 for M = Z/2 over Z/4"
        if is_flat_module(half, ctx.limits):
            return "Z/2 judged flat over Z/4"
        return None

    _guard(report, 0, check_example, lambda: module_reproducer(half))

    index = 1
    for ring in ctx.generator().zoo:
        if not 1 < ring.order <= ctx.settings.flatness_max_order:
            continue
        for module in zoo_modules(ring, ctx.limits):

            def check() -> Optional[str]:
                flat = is_flat_module(module, ctx.limits)
                pair = colon_condition_failure(module, ctx.limits)
                report.tally("flat" if flat else "not flat")
                if flat != (pair is None):
                    return f"is_flat_module = {flat} but colon condition failure = {pair}"
                if not flat:
                    witness = flatness_witness(module, ctx.limits)
                    if witness is None:
                        return "non-flat module without a witness (I, a)"
                    ideal, a = witness
                    left, right = module_colon(module, ideal, Ideal(ring, [a]))
                    if left == right:
                        return f"witness ({ideal!r}, {a}) does not separate the colons"
                return None

            _guard(report, index, check, lambda: module_reproducer(module))
            index += 1


def suite_gabriel_axioms(ctx: SuiteContext, report: SuiteReport) -> None:
    """Filters of ring maps are Gabriel filters"""
    for instance in generate_maps(ctx.generator(), ctx.count_for("count")):
        phi = instance.phi

        def check() -> Optional[str]:
            filt = filter_of(phi, ctx.limits)
            axioms = verify_axioms(filt, ctx.limits)
            report.tally(f"filter size {len(filt)}")
            if not axioms.passed:
                return f"axioms fail: {'; '.join(axioms.failures[:3])}"
            for member in filt.members:
                for ideal in enumerate_ideals(phi.source, ctx.limits):
                    if member.issubset(ideal) and not extension(phi, ideal).is_unit():
                        return f"{ideal!r} contains member {member!r} but does not extend to the unit ideal"
            return None

        _guard(report, instance.index, check, lambda: map_reproducer(phi, family=instance.family))


def suite_coro8_classify(ctx: SuiteContext, report: SuiteReport) -> None:
    """Flat epimorphisms are classified by their filters"""
    by_source: Dict[FiniteRing, List[RingMap]] = {}
    for phi in _small_flat_epis(ctx):
        by_source.setdefault(phi.source, []).append(phi)

    index = 0
    for maps in by_source.values():
        for phi, psi in itertools.combinations_with_replacement(maps, 2):

            def check() -> Optional[str]:
                result = classify_flat_epis(phi, psi, ctx.limits)
                report.tally(result.verdict.value)
                if result.verdict is Classification.UNDECIDED:
                    return "isomorphism search hit its cap"
                if result.filters_equal and result.verdict is not Classification.SAME_CLASS:
                    return "equal filters but no compatible isomorphism"
                if not result.filters_equal and result.theta is not None:
                    return f"different filters but {result.theta!r} identifies the maps"
                return None

            _guard(report, index, check,
                   lambda: {"phi": map_reproducer(phi), "psi": map_reproducer(psi)})
            index += 1


def suite_cor2_ff_epi(ctx: SuiteContext, report: SuiteReport) -> None:
    """Faithfully flat epimorphisms and epimorphisms out of fields are bijective"""
    maps = [instance.phi for instance in generate_maps(ctx.generator(), ctx.count_for("count"))]
    maps.extend(_small_flat_epis(ctx))
    for index, phi in enumerate(maps):

        def check() -> Optional[str]:
            verdicts = {
                "faithfully flat": verify_faithfully_flat_epi_iso(phi, ctx.limits),
                "field source": verify_field_epi_iso(phi, ctx.limits),
            }
            for name, verdict in verdicts.items():
                report.tally(f"{name}: {verdict.value}")
            bad = [name for name, verdict in verdicts.items() if verdict is Verdict.COUNTEREXAMPLE]
            return f"counterexample ({', '.join(bad)})" if bad else None

        _guard(report, index, check, lambda: map_reproducer(phi))


def suite_prop1_local_iso(ctx: SuiteContext, report: SuiteReport) -> None:
    """Flat epimorphisms are isomorphisms on local rings"""
    maps = [instance.phi for instance in generate_maps(ctx.generator(), ctx.count_for("count"))]
    maps.extend(_small_flat_epis(ctx))
    for index, phi in enumerate(maps):

        def check() -> Optional[str]:
            verdict = check_local_iso(phi, ctx.limits)
            report.tally(verdict.value)
            return "local map not bijective" if verdict is Verdict.COUNTEREXAMPLE else None

        _guard(report, index, check, lambda: map_reproducer(phi))


def suite_th21_finite_hypothesis(ctx: SuiteContext, report: SuiteReport) -> None:
    """Faithful ideals of finite rings contain regular elements, and T(R) = R"""
    index = 0
    for ring in ctx.generator().zoo:
        if ring.order > ctx.settings.max_ring_order:
            continue

        def check() -> Optional[str]:
            if not total_quotient_is_trivial(ring):
                return "a regular element is not a unit"
            for ideal in enumerate_ideals(ring, ctx.limits):
                if not is_faithful(ideal):
                    continue
                report.tally("faithful ideals")
                if not any(ring.is_regular(x) for x in ideal.closure):
                    return f"faithful {ideal!r} has no regular element"
                if not ideal.is_unit():
                    return f"faithful {ideal!r} is not the unit ideal"
            return None

        _guard(report, index, check, lambda: {"ring": ring.description})
        index += 1


def _second_legs(ring: FiniteRing) -> Tuple[List[RingMap], List[RingMap]]:
    """Maps that exist out of any ring: injective ones, then the factor projections"""
    embeddings = [identity_map(ring), diagonal_map(ring)]
    embeddings.extend(graph_map(pi) for pi in surjections(ring))
    return embeddings, factor_projections(ring)


def suite_lemma33_injectivity(ctx: SuiteContext, report: SuiteReport) -> None:
    """h∘g injective with g a flat epimorphism forces h injective"""
    gen = ctx.generator()
    for index, rng in enumerate(gen.streams(ctx.count_for("count"))):
        ring = gen.pick_ring(rng, max_order=ctx.settings.classify_max_order)
        if rng.random() < 0.9:
            candidates = [identity_map(ring), poly_inclusion(ring, [ring.neg(ring.one), ring.one])]
        else:
            candidates = flat_epimorphisms_from(ring)
        g = candidates[int(rng.integers(len(candidates)))]
        embeddings, projections = _second_legs(g.target)
        legs = projections if projections and rng.random() < 0.1 else embeddings
        h = legs[int(rng.integers(len(legs)))]

        def check() -> Optional[str]:
            verdict = verify_injective_factorization(g, h, ctx.limits)
            report.tally(verdict.value)
            if verdict is Verdict.COUNTEREXAMPLE:
                return f"h∘g injective but {h!r} is not"
            return None

        _guard(report, index, check, lambda: {"g": map_reproducer(g), "h": map_reproducer(h)})


SUITES: Dict[str, Callable[[SuiteContext, SuiteReport], None]] = {
    "th1-agreement": suite_th1_agreement,
    "prop2-equiv": suite_prop2_equiv,
    "geo5-equiv": suite_geo5_equiv,
    "kaehler-epi": suite_kaehler_epi,
    "mccoy-oracle": suite_mccoy_oracle,
    "coro7-regular": suite_coro7_regular,
    "lemma2-rewrite": suite_lemma2_rewrite,
    "lemma7-flatness": suite_lemma7_flatness,
    "gabriel-axioms": suite_gabriel_axioms,
    "coro8-classify": suite_coro8_classify,
    "cor2-ff-epi": suite_cor2_ff_epi,
    "prop1-local-iso": suite_prop1_local_iso,
    "th21-finite-hypothesis": suite_th21_finite_hypothesis,
    "lemma33-injectivity": suite_lemma33_injectivity,
}


def run_suite(name: str, ctx: Optional[SuiteContext] = None) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ctx = ctx or SuiteContext()
    report = SuiteReport(name, ctx.settings.seed)
    logger.info(f"Running suite {name} (seed {ctx.settings.seed})")
    start = time.perf_counter()
    SUITES[name](ctx, report)
    report.wall_time = time.perf_counter() - start
    report.failures.sort(key=lambda f: f.index)
    if report.ok:
        logger.info(f"Suite {name} passed {report.instances} instances in {report.wall_time:.2f}s")
    else:
        logger.warning(f"Suite {name} failed on {len(report.failures)} of {report.instances} instances")
    return report


def run_all(ctx: Optional[SuiteContext] = None) -> List[SuiteReport]:
    return [run_suite(name, ctx) for name in SUITES]


def write_report(report: SuiteReport, directory: Path) -> Path:
    path = Path(directory) / f"{report.name}-seed{report.seed}.json"
    return save_document(report.to_dict(), path)
