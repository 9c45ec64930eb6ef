import math
import random

import pytest

from optsort import aspif
from optsort.analysis import (
    Propagator,
    attach_network,
    binomial_document,
    binomial_opt_program,
    binomial_program,
    card_propagator,
    output_atoms,
    run_pch,
    sorted_output_check,
    verify_trace,
)
from optsort.asplang import (
    SemanticsError,
    enumerate_answer_sets,
    evaluate,
    optimal_value,
    rule,
)
from optsort.network import limit_depth, oe_sorter


class TestBinomialPrograms:
    def test_answer_sets_are_the_large_subsets(self):
        models = enumerate_answer_sets(binomial_program(3, 2))
        assert sorted(sorted(m) for m in models) == [[1, 2], [1, 2, 3], [1, 3], [2, 3]]

    def test_unconstrained_choice(self):
        assert len(enumerate_answer_sets(binomial_program(5, 0))) == 32

    def test_unsatisfiable_bound(self):
        assert enumerate_answer_sets(binomial_program(2, 3)) == []

    def test_optimum_is_the_bound(self):
        program, objective = binomial_opt_program(4, 2)
        assert optimal_value(program, objective) == 2

    def test_number_of_optimal_answer_sets(self):
        program, objective = binomial_opt_program(4, 2)
        optima = [
            m for m in enumerate_answer_sets(program) if evaluate(objective, m) == 2
        ]
        assert len(optima) == math.comb(4, 2)

    def test_single_atom_instance(self):
        program, objective = binomial_opt_program(1, 1)
        assert enumerate_answer_sets(program) == [frozenset({1})]
        assert optimal_value(program, objective) == 1

    def test_document_form_matches_the_native_program(self):
        doc_program, _ = aspif.to_ground_program(binomial_document(4, 2, opt=True))
        assert enumerate_answer_sets(doc_program) == enumerate_answer_sets(
            binomial_program(4, 2)
        )


class TestCardPropagator:
    def test_explains_with_the_smallest_true_atoms(self):
        propagator = card_propagator([1, 2, 3], 2)
        explanation = propagator.explain(frozenset({1, 2, 3}))
        assert explanation.signed_literals == frozenset({(1, True), (2, True)})

    def test_explain_requires_a_conflict(self):
        propagator = card_propagator([1, 2, 3], 2)
        with pytest.raises(SemanticsError):
            propagator.explain(frozenset({1}))

    def test_unit_bound_constraint_is_singletons(self):
        propagator = card_propagator([1, 2, 3], 1)
        assert len(propagator.constraint_nogoods()) == 3
        assert all(len(n.signed_literals) == 1 for n in propagator.constraint_nogoods())

    def test_bound_cannot_exceed_the_atoms(self):
        with pytest.raises(SemanticsError):
            card_propagator([1, 2], 3)


class TestBarePch:
    @pytest.mark.parametrize("n,k", [(2, 1), (4, 2), (5, 2), (6, 3), (8, 4)])
    def test_history_length_is_the_binomial_coefficient(self, n, k):
        trace = run_pch(binomial_program(n, k), card_propagator(range(1, n + 1), k))
        assert trace.complete
        assert trace.m == math.comb(n, k)

    def test_table_row_at_ten_over_five(self):
        trace = run_pch(binomial_program(10, 5), card_propagator(range(1, 11), 5))
        assert trace.m == 252 and trace.complete

    @pytest.mark.parametrize("seed", range(5))
    def test_length_is_order_independent(self, seed):
        trace = run_pch(
            binomial_program(6, 3),
            card_propagator(range(1, 7), 3),
            shuffle_rng=random.Random(seed),
        )
        assert trace.m == math.comb(6, 3)

    def test_trace_survives_post_hoc_validation(self):
        program = binomial_program(4, 2)
        propagator = card_propagator(range(1, 5), 2)
        trace = run_pch(program, propagator)
        assert verify_trace(program, propagator, trace)

    def test_incomplete_history_when_an_answer_set_survives(self):
        # bound below the constraint's reach: the all-false candidate is an
        # answer set, so the propagator never wipes out the search space
        program = binomial_program(3, 0)
        propagator = card_propagator([1, 2, 3], 2)
        trace = run_pch(program, propagator)
        assert not trace.complete

    def test_summary_format(self):
        trace = run_pch(binomial_program(3, 2), card_propagator([1, 2, 3], 2))
        assert trace.summary() == "m=3 complete=true"
        assert trace.to_text().splitlines()[-1] == trace.summary()


class TestNetworkedPch:
    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_sorter_outputs_cap_the_history_linearly(self, n):
        for k in range(1, n + 1):
            program, wire_map = attach_network(
                binomial_program(n, k), range(1, n + 1), oe_sorter(n)
            )
            propagator = card_propagator(output_atoms(wire_map), k)
            trace = run_pch(program, propagator)
            assert trace.complete
            assert trace.m <= n - k + 1, (n, k, trace.m)

    def test_distinct_first_output_positions_bound_the_learned_nogoods(self):
        n, k = 6, 3
        program, wire_map = attach_network(
            binomial_program(n, k), range(1, n + 1), oe_sorter(n)
        )
        outputs = output_atoms(wire_map)
        trace = run_pch(program, card_propagator(outputs, k))
        first_positions = {
            min(outputs.index(a) for a, _ in ng.signed_literals)
            for ng in trace.nogoods
        }
        assert len(first_positions) == trace.m
        assert len(first_positions) <= n - k + 1

    def test_networked_trace_survives_post_hoc_validation(self):
        program, wire_map = attach_network(
            binomial_program(3, 2), [1, 2, 3], oe_sorter(3)
        )
        propagator = card_propagator(output_atoms(wire_map), 2)
        trace = run_pch(program, propagator)
        assert verify_trace(program, propagator, trace)
        assert trace.m <= 2

    def test_rejects_programs_with_negation(self):
        program = binomial_program(2, 1)
        spoiled = type(program)(
            signature=program.signature | {9},
            normal_rules=(rule(9, not_body=[1]),),
            choice_rules=program.choice_rules,
            cardinality_constraints=program.cardinality_constraints,
        )
        with pytest.raises(SemanticsError):
            run_pch(spoiled, card_propagator([1, 2], 1))

    def test_rejects_positive_cycles(self):
        program = binomial_program(2, 1)
        spoiled = type(program)(
            signature=program.signature | {8, 9},
            normal_rules=(rule(8, body=[9]), rule(9, body=[8])),
            choice_rules=program.choice_rules,
            cardinality_constraints=program.cardinality_constraints,
        )
        with pytest.raises(SemanticsError):
            run_pch(spoiled, card_propagator([1, 2], 1))


class TestSortedOutputs:
    def test_full_sorter_passes(self):
        assert sorted_output_check(oe_sorter(6))

    def test_depth_limited_sorter_fails(self):
        assert not sorted_output_check(limit_depth(oe_sorter(6), 1))

    def test_single_wire_passes(self):
        assert sorted_output_check(oe_sorter(1))

    def test_width_guard(self):
        with pytest.raises(SemanticsError):
            sorted_output_check(oe_sorter(9))
