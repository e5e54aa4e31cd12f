"""
Tests for the axiom harness: individual checks, report folding and the batch document.
"""

import pytest

from src import documents, fincat, harness, sset
from src.exceptions import BudgetExceeded
from src.harness import FAIL, PASS, UNVERIFIABLE, AxiomHarness, Corpus, Report


@pytest.fixture
def tiny_corpus():
    categories = [fincat.point(), fincat.interval(), fincat.bar_interval()]
    return Corpus(categories, [fincat.with_isomorphisms(fincat.interval())], 20240611)


class TestChecks:
    """Individual finite instances."""

    def test_unverifiable_axioms(self):
        for report in (harness.check_A1(), harness.check_A4()):
            assert report.verdict == UNVERIFIABLE
            assert report.hypothesis_notes, f"{report.check} should explain why it is unverifiable"

    def test_indecomposable(self):
        report = harness.check_indecomposable(truncation=2)
        assert report.passed, f"Failures: {report.witnesses}"
        assert report.metrics['points of C(1)'] == 2
        assert report.metrics['endomorphisms of C(1)'] == 3

    def test_initial(self):
        report = harness.check_initial(truncation=2)
        assert report.passed
        assert report.metrics['maps empty -> *'] == 1

    def test_A7_counts(self):
        report = harness.check_A7(2, 3)
        assert report.passed, f"Counts disagree: {report.witnesses}"
        assert set(report.metrics.values()) == {20}

    def test_A3_on_two_points(self):
        parts = [sset.point(2), sset.point(2)]
        total, inclusions = sset.coproduct_family(parts)
        report = harness.check_A3(parts, sset.identity_map(total), inclusions)
        assert report.passed, f"Failures: {report.witnesses}"

    def test_interval_conditions(self):
        report = harness.check_interval(max_spine=3, truncation=2)
        assert report.passed, f"Failures: {report.witnesses}"
        assert 'not an isomorphism' in report.hypothesis_notes[0]

    def test_A6_on_equivalence(self):
        witness = fincat.are_equivalent(fincat.bar_interval(), fincat.point()).witness
        report = harness.check_A6(witness)
        assert report.passed
        assert report.metrics['objects bijective'] and report.metrics['arrows bijective']

    def test_arrow_classes_of_bar_interval(self):
        assert harness.arrow_isomorphism_classes(fincat.bar_interval()) == [['id_x', 'id_y', 'f', 'g']]
        assert len(harness.arrow_isomorphism_classes(fincat.interval())) == 3

    def test_nerve_segal_with_mutations(self):
        report = harness.check_nerve_segal([fincat.linear(2), fincat.cyclic_group(2)], truncation=2)
        assert report.passed, f"Failures: {report.witnesses}"
        assert report.metrics['mutations'] == 2

    def test_completeness_rigidity(self, named_categories):
        categories = [named_categories[n] for n in ('point', 'interval', 'bar_interval', 'Z/2')]
        report = harness.check_completeness_rigidity(categories)
        assert report.passed, f"Failures: {report.witnesses}"

    def test_completeness_rigidity_per_category(self, named_categories):
        categories = list(named_categories.values())
        report = harness.check_completeness_rigidity(categories)
        assert report.passed, f"Failures: {report.witnesses}"
        assert report.metrics['instances'] == len(categories)
        assert report.metrics['unverifiable instances'] == []

    def test_reversal_per_category(self, named_categories):
        report = harness.check_reversal(list(named_categories.values()), truncation=2)
        assert report.passed, f"Failures: {report.witnesses}"
        assert report.metrics['instances'] == len(named_categories)

    def test_A5_on_bar_interval(self):
        report = harness.check_A5(fincat.bar_interval())
        assert report.passed, f"Failures: {report.witnesses}"

    def test_A6_sweep_restriction_is_noted(self):
        categories = [fincat.point(), fincat.interval(), fincat.bar_interval()]
        report = harness.check_A6_sweep(categories, max_arrows=3)
        assert report.passed, f"Failures: {report.witnesses}"
        assert (report.metrics['categories'], report.metrics['corpus']) == (2, 3)
        assert any('not swept' in note for note in report.hypothesis_notes)

    def test_realization_oracle_counts_nontrivial_spaces(self):
        report = harness.check_realization_oracle(count=4, seed=11, outer=2, inner=2)
        assert report.passed, f"Failures: {report.witnesses}"
        assert report.metrics['non-trivial spaces'] == report.metrics['spaces'] == 4

    def test_classification(self, tiny_corpus):
        report = harness.check_classification(tiny_corpus.relcats, tiny_corpus.categories)
        assert report.passed, f"Failures: {report.witnesses}"

    def test_hmono_skips_incomplete(self):
        report = harness.check_hmono_sweep([fincat.bar_interval()])
        assert report.verdict == UNVERIFIABLE


class TestMergeReports:
    """Folding per-instance reports."""

    def test_any_failure_fails(self):
        merged = harness.merge_reports('demo', [Report('a', PASS), Report('b', FAIL, witnesses=[{'x': 1}])])
        assert merged.verdict == FAIL
        assert merged.witnesses == [{'instance': 'b', 'witnesses': [{'x': 1}]}]
        assert merged.metrics['failed'] == 1

    def test_all_unverifiable(self):
        merged = harness.merge_reports('demo', [Report('a', UNVERIFIABLE), Report('b', UNVERIFIABLE)])
        assert merged.verdict == UNVERIFIABLE

    def test_mixed_passes(self):
        merged = harness.merge_reports('demo', [Report('a', PASS), Report('b', UNVERIFIABLE)])
        assert merged.verdict == PASS

    def test_sweep_keeps_budget_failures_as_instances(self):
        def instance(A):
            if len(A.arrows) > 1:
                raise BudgetExceeded('functor enumeration', 10)
            return Report(f"demo[{A.name}]", PASS)

        merged = harness.sweep('demo', [fincat.point(), fincat.interval()], instance)
        assert merged.verdict == PASS
        assert merged.metrics['unverifiable'] == 1
        [entry] = merged.metrics['unverifiable instances']
        assert entry['instance'] == f"demo[{fincat.interval().name}]"
        assert 'Budget exceeded' in entry['notes'][0]


class TestAxiomHarness:
    """The batch runner and its outputs."""

    def test_run_subset_keeps_order(self, tiny_corpus):
        runner = AxiomHarness(corpus=tiny_corpus, workers=2)
        reports = runner.run(only=['A1', 'initial', 'A7'])
        names = [r.check for r in reports]
        assert names[0] == 'A1' and names[-1] == 'initial'
        assert len(names) == 18
        assert runner.overall_status() == 'PASS'

    def test_planned_checks_cover_whole_corpus(self, tiny_corpus):
        names = [name for name, _ in AxiomHarness(corpus=tiny_corpus).planned_checks()]
        for A in tiny_corpus.categories:
            assert f"A5[{A.name}]" in names, f"A5 is not planned for {A.name}"
        assert 'A5[bar_interval]' in names

    def test_sweeps_report_every_category(self, tiny_corpus):
        runner = AxiomHarness(corpus=tiny_corpus)
        reports = {r.check: r for r in runner.run(only=['completeness-rigidity', 'reversal'])}
        for name in ('completeness-rigidity', 'reversal'):
            assert reports[name].metrics['instances'] == len(tiny_corpus.categories)

    def test_batch_document_matches_schema(self, tiny_corpus):
        runner = AxiomHarness(corpus=tiny_corpus, timings=True)
        runner.run(only=['A1', 'indecomposable'])
        document = runner.batch_document()
        documents.validate_with_schema(document, 'batch')
        assert document['reports'][0]['verdict'] == UNVERIFIABLE
        assert 'seconds' in document['reports'][1]['timings']

    def test_timings_omitted_by_default(self, tiny_corpus):
        runner = AxiomHarness(corpus=tiny_corpus)
        runner.run(only=['A4'])
        assert 'timings' not in runner.batch_document()['reports'][0]

    def test_summary_and_evidence(self, tiny_corpus, tmp_path):
        runner = AxiomHarness(corpus=tiny_corpus)
        runner.run(only=['A1'])
        frame = runner.summary_frame()
        assert list(frame['verdict']) == [UNVERIFIABLE]
        path = runner.save_evidence_report(str(tmp_path / 'evidence.yaml'))
        assert (tmp_path / 'evidence.yaml').exists() and path.endswith('evidence.yaml')


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
