"""Workflow structure: validation, variant instantiation, linear extensions."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogseq import (
    VariantGroup,
    Workflow,
    WorkflowError,
    count_linear_extensions,
    enumerate_linear_extensions,
    instantiate_all,
    instantiate_variant,
    is_linear_extension,
    validate_workflow,
)
from cogseq.model import extension_violation

from conftest import permutation_extensions, random_workflow, simple_task


def chain(*codes: str) -> Workflow:
    tasks = []
    for i, code in enumerate(codes):
        prereqs = (codes[i - 1],) if i else ()
        tasks.append(simple_task(code, prerequisites=prereqs))
    return Workflow.from_tasks(tasks)


def antichain(*codes: str) -> Workflow:
    return Workflow.from_tasks(simple_task(c) for c in codes)


class TestTask:
    def test_code_and_modality_are_normalized(self):
        task = simple_task("  A1 ", modality="  Touchscreen QWERTY ")
        assert task.code == "A1"
        assert task.modality == "touchscreen qwerty"

    def test_empty_code_rejected(self):
        with pytest.raises(WorkflowError):
            simple_task("   ")

    def test_duplicate_codes_rejected(self):
        with pytest.raises(WorkflowError, match="duplicate task code"):
            Workflow.from_tasks([simple_task("A"), simple_task("A")])


class TestValidation:
    def test_clean_workflow_is_ok(self):
        report = validate_workflow(chain("A", "B", "C"))
        assert report.ok
        assert report.summary() == "valid"

    def test_unknown_prerequisite(self):
        wf = Workflow.from_tasks([simple_task("A", prerequisites=("Z",))])
        kinds = {v.kind for v in validate_workflow(wf)}
        assert "unknown-prerequisite" in kinds

    def test_self_prerequisite(self):
        wf = Workflow.from_tasks([simple_task("A", prerequisites=("A",))])
        kinds = {v.kind for v in validate_workflow(wf)}
        assert "self-prerequisite" in kinds

    @pytest.mark.parametrize("familiarity,complexity", [(0, 3), (6, 3), (3, 0), (3, 9)])
    def test_out_of_range_properties(self, familiarity, complexity):
        wf = Workflow.from_tasks([
            simple_task("A", familiarity=familiarity, complexity=complexity)
        ])
        kinds = [v.kind for v in validate_workflow(wf)]
        assert "out-of-range" in kinds

    def test_cycle_reported_with_path(self):
        wf = Workflow.from_tasks([
            simple_task("A", prerequisites=("C",)),
            simple_task("B", prerequisites=("A",)),
            simple_task("C", prerequisites=("B",)),
        ])
        cycles = [v for v in validate_workflow(wf) if v.kind == "cycle"]
        assert len(cycles) == 1
        assert set(cycles[0].codes) == {"A", "B", "C"}

    def test_cycle_through_variant_group(self):
        # M requires A, A requires the group containing M: cyclic for the
        # M choice, which the member->group edges make visible.
        wf = Workflow.from_tasks(
            [
                simple_task("A", prerequisites=("G",)),
                simple_task("M", prerequisites=("A",)),
            ],
            [VariantGroup("G", frozenset({"M"}))],
        )
        kinds = {v.kind for v in validate_workflow(wf)}
        assert "cycle" in kinds

    def test_group_code_collision_and_unknown_member(self):
        wf = Workflow.from_tasks(
            [simple_task("A")],
            [VariantGroup("A", frozenset({"ZZ"}))],
        )
        kinds = {v.kind for v in validate_workflow(wf)}
        assert "group-code-collision" in kinds
        assert "unknown-member" in kinds

    def test_direct_member_reference_flagged(self):
        wf = Workflow.from_tasks(
            [
                simple_task("M1"),
                simple_task("M2"),
                simple_task("B", prerequisites=("M1",)),
            ],
            [VariantGroup("G", frozenset({"M1", "M2"}))],
        )
        kinds = {v.kind for v in validate_workflow(wf)}
        assert "direct-member-reference" in kinds

    def test_fixtures_validate(self, full_document, validation_document):
        assert validate_workflow(full_document.workflow).ok
        assert validate_workflow(validation_document.workflow).ok


class TestVariants:
    def build(self) -> Workflow:
        return Workflow.from_tasks(
            [
                simple_task("S"),
                simple_task("M1", prerequisites=("S",)),
                simple_task("M2", prerequisites=("S",)),
                simple_task("E", prerequisites=("G",)),
            ],
            [VariantGroup("G", frozenset({"M1", "M2"}))],
        )

    def test_instantiate_rewrites_and_drops(self):
        wf = instantiate_variant(self.build(), "G", "M1")
        assert wf.is_concrete
        assert set(wf.tasks) == {"S", "M1", "E"}
        assert wf.tasks["E"].prerequisites == frozenset({"M1"})

    def test_unknown_group_and_member(self):
        with pytest.raises(WorkflowError, match="unknown variant group"):
            instantiate_variant(self.build(), "NOPE", "M1")
        with pytest.raises(WorkflowError, match="not a member"):
            instantiate_variant(self.build(), "G", "E")

    def test_instantiate_all(self):
        wf = instantiate_all(self.build(), {"G": "M2"})
        assert wf.is_concrete
        assert "M1" not in wf.tasks
        with pytest.raises(WorkflowError, match="no member chosen"):
            instantiate_all(self.build(), {})

    def test_concrete_required_for_sequencing(self):
        with pytest.raises(WorkflowError, match="unresolved variant groups"):
            is_linear_extension(("S",), self.build())

    def test_fixture_instantiation_counts(self, full_document):
        wf = instantiate_variant(full_document.workflow, "AUTH", "AUPS")
        assert len(wf.tasks) == 13
        assert len(wf.precedence_edges()) == 25
        assert wf.tasks["CFRM"].prerequisites >= {"AUPS"}


class TestExtensions:
    def test_chain_has_single_extension(self):
        wf = chain("A", "B", "C")
        assert list(enumerate_linear_extensions(wf)) == [("A", "B", "C")]
        assert count_linear_extensions(wf) == 1

    def test_antichain_enumerates_lexicographically(self):
        wf = antichain("A", "B", "C")
        exts = list(enumerate_linear_extensions(wf))
        assert len(exts) == 6
        assert exts == sorted(exts)
        assert exts[0] == ("A", "B", "C")

    def test_limit(self):
        wf = antichain("A", "B", "C", "D")
        assert len(list(enumerate_linear_extensions(wf, limit=5))) == 5

    def test_cyclic_rejected(self):
        wf = Workflow.from_tasks([
            simple_task("A", prerequisites=("B",)),
            simple_task("B", prerequisites=("A",)),
        ])
        with pytest.raises(WorkflowError):
            list(enumerate_linear_extensions(wf))
        with pytest.raises(WorkflowError):
            count_linear_extensions(wf)

    def test_is_linear_extension(self):
        wf = chain("A", "B", "C")
        assert is_linear_extension(("A", "B", "C"), wf)
        assert not is_linear_extension(("B", "A", "C"), wf)
        assert not is_linear_extension(("A", "B"), wf)
        assert not is_linear_extension(("A", "A", "B"), wf)

    def test_violation_messages(self):
        wf = chain("A", "B")
        assert extension_violation(("A", "B"), wf) is None
        assert "unknown task" in extension_violation(("A", "Z"), wf)
        assert "more than once" in extension_violation(("A", "A"), wf)
        assert "missing tasks" in extension_violation(("A",), wf)
        assert "'A' must precede 'B'" in extension_violation(("B", "A"), wf)

    def test_empty_workflow(self):
        wf = Workflow.from_tasks([])
        assert list(enumerate_linear_extensions(wf)) == [()]
        assert count_linear_extensions(wf) == 1
        assert is_linear_extension((), wf)

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_permutation_oracle(self, seed):
        rng = random.Random(seed)
        wf = random_workflow(rng, n_max=6)
        expected = permutation_extensions(wf)
        produced = list(enumerate_linear_extensions(wf))
        assert produced == expected
        assert count_linear_extensions(wf) == len(expected)
        assert all(is_linear_extension(e, wf) for e in produced)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None)
    def test_count_agrees_with_enumeration(self, seed):
        rng = random.Random(seed)
        wf = random_workflow(rng, n_max=7)
        assert count_linear_extensions(wf) == sum(
            1 for _ in enumerate_linear_extensions(wf)
        )

    def test_fixture_extension_count(self, full_document):
        wf = instantiate_variant(full_document.workflow, "AUTH", "AUPW")
        assert count_linear_extensions(wf) == 114_624
