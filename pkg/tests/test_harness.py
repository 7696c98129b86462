"""
Tests for instance generation and the verification suites
"""

import json

import numpy as np
import pytest

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.config.settings import SuiteSettings
from src.core.errors import UnknownSuiteError
from src.core.epi import is_epimorphism
from src.core.rings import product, zmod
from src.core.spectrum import is_flat_module
from src.harness import (
    SUITES, InstanceGenerator, SuiteContext, builtin_zoo, flat_epimorphisms_from, generate_maps,
    run_suite, write_report
)
from src.harness.generators import factor_projections, surjections, zoo_modules
from src.harness.suites import module_reproducer
from src.integration import module_from_document


def small_context(seed: int = 3, count: int = 4) -> SuiteContext:
    settings = SuiteSettings(seed=seed, count=count, mccoy_count=count, coro7_count=count,
                             rewrite_count=count, max_ring_order=16, flatness_max_order=8,
                             classify_max_order=8)
    return SuiteContext(settings, count=count)


class TestGenerators:
    """Test the ring zoo and the map families"""

    def test_zoo_respects_order(self):
        zoo = builtin_zoo(max_order=64)
        assert zoo
        assert all(ring.order <= 64 for ring in zoo)

    def test_surjections(self):
        orders = {phi.target.order for phi in surjections(zmod(12))}
        assert 4 in orders
        assert 1 in orders
        assert all(is_epimorphism(phi) for phi in surjections(zmod(12)))

    def test_factor_projections(self):
        assert sorted(phi.target.order for phi in factor_projections(zmod(6))) == [2, 3]
        assert factor_projections(zmod(8)) == []

    def test_flat_epimorphisms_start_with_identity(self):
        maps = flat_epimorphisms_from(zmod(6))
        assert maps[0].target == zmod(6)

    def test_deterministic_stream(self):
        first = [(m.family, repr(m.phi)) for m in InstanceGenerator(seed=1).maps(12)]
        second = [(m.family, repr(m.phi)) for m in InstanceGenerator(seed=1).maps(12)]
        assert first == second

    def test_orders_within_cap(self):
        for instance in InstanceGenerator(seed=5, max_ring_order=16).maps(20):
            assert instance.phi.source.order <= 16
            assert instance.phi.target.order <= 16

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            InstanceGenerator(weights={"bogus": 1.0})

    def test_generate_maps_is_deterministic(self):
        first = [(m.family, repr(m.phi)) for m in generate_maps(InstanceGenerator(seed=4), 10)]
        second = [(m.family, repr(m.phi)) for m in generate_maps(InstanceGenerator(seed=4), 10)]
        assert first == second
        assert len(first) == 10

    def test_factor_family_reaches_non_product_rings(self):
        """Z/n splits even when the zoo entry is not a product construction"""
        gen = InstanceGenerator(seed=1, weights={"factor": 1.0})
        kinds = {(instance.family, instance.phi.source.construction.kind) for instance in gen.maps(40)}
        assert ("factor", "zmod") in kinds

    def test_random_poly_total_degree(self):
        gen = InstanceGenerator(seed=2)
        rng = np.random.default_rng(0)
        for _ in range(10):
            poly = gen.random_poly(rng, zmod(6), 3, variables=("x", "y", "z"))
            assert all(sum(e) <= 3 for e in poly.terms)
        full = gen.random_poly(np.random.default_rng(1), zmod(5), 2, variables=("x", "y"))
        assert all(sum(e) <= 2 for e in full.terms)
        assert (2, 2) not in full.terms

    def test_zoo_modules_include_sums_and_restrictions(self):
        z6 = zmod(6)
        modules = zoo_modules(z6, InstanceGenerator().limits, max_order=36)
        orders = sorted(m.order for m in modules)
        assert 36 in orders
        assert all(m.ring == z6 for m in modules)
        assert all(m.order <= 36 for m in modules)
        assert len(modules) > len(flat_epimorphisms_from(z6))

    def test_module_reproducer_replays(self):
        ring = product([zmod(2), zmod(2)])
        for module in zoo_modules(ring, InstanceGenerator().limits, max_order=16):
            data = json.loads(json.dumps(module_reproducer(module, note="replay")))
            assert data.pop("note") == "replay"
            rebuilt = module_from_document(data)
            assert rebuilt.order == module.order
            assert is_flat_module(rebuilt) == is_flat_module(module)


class TestSuites:
    """Test suite dispatch and reports"""

    def test_registry(self):
        assert len(SUITES) == 14
        assert "th1-agreement" in SUITES

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuiteError):
            run_suite("no-such-suite")

    @pytest.mark.parametrize("name", ["th1-agreement", "mccoy-oracle", "lemma2-rewrite",
                                      "gabriel-axioms", "kaehler-epi"])
    def test_small_run_passes(self, name):
        report = run_suite(name, small_context())
        assert report.ok, report.summary()
        assert report.instances > 0

    def test_injectivity_suite_mostly_confirms(self):
        report = run_suite("lemma33-injectivity", small_context(seed=5, count=30))
        assert report.ok, report.summary()
        assert report.tallies.get("confirmed", 0) > report.instances // 2
        assert set(report.tallies) <= {"confirmed", "not-applicable"}

    def test_reports_are_deterministic(self):
        first = run_suite("th1-agreement", small_context(seed=11)).to_dict()
        second = run_suite("th1-agreement", small_context(seed=11)).to_dict()
        first.pop("wall_time")
        second.pop("wall_time")
        assert first == second

    def test_write_report(self, tmp_path):
        report = run_suite("mccoy-oracle", small_context(seed=2))
        path = write_report(report, tmp_path)
        assert path.name == "mccoy-oracle-seed2.json"
        data = json.loads(path.read_text())
        assert data["ok"] is True
        assert data["seed"] == 2
        assert "PASS" in report.summary()
