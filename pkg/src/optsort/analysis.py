"""Binomial benchmark family and the abstract branch-and-bound propagator model.

The simulator replays the final unsatisfiability phase of branch-and-bound
optimization: it repeatedly presents total supported-model candidates to a
cardinality propagator, accumulating the learned nogoods (never deleting any)
until no candidate survives.  The trace length measures solving difficulty.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import aspif
from .asplang import (
    CardinalityConstraint,
    ChoiceRule,
    GroundProgram,
    Nogood,
    ObjectiveFunction,
    SemanticsError,
    enumerate_answer_sets,
    least_model,
    pos,
)
from .encode import WireAtomMap, asp_of_network, dense_wire_atom_map
from .network import Network, apply


def binomial_program(n: int, k: int) -> GroundProgram:
    """Free choice over n atoms constrained to keep at least k of them."""
    if n < 0 or k < 0:
        raise SemanticsError("binomial parameters must be non-negative")
    atoms = frozenset(range(1, n + 1))
    choice = (ChoiceRule(atoms),) if n else ()
    bound = min(k, n + 1)
    constraint = (
        (CardinalityConstraint(tuple(pos(a) for a in sorted(atoms)), bound),)
        if n and k
        else ()
    )
    if n == 0 and k > 0:
        return GroundProgram(frozenset(), nogoods=(Nogood(frozenset()),))
    return GroundProgram(atoms, choice_rules=choice, cardinality_constraints=constraint)


def binomial_opt_program(n: int, k: int) -> tuple[GroundProgram, ObjectiveFunction]:
    """The binomial program with the unit-weight objective over its atoms."""
    program = binomial_program(n, k)
    objective = ObjectiveFunction(tuple((1, pos(a)) for a in range(1, n + 1)))
    return program, objective


def binomial_document(n: int, k: int, opt: bool = False) -> aspif.AspifDocument:
    """The binomial (optimization) program in aspif form."""
    atoms = tuple(range(1, n + 1))
    statements: list[aspif.Statement] = []
    if n:
        statements.append(aspif.Rule(aspif.CHOICE, atoms, aspif.NormalBody(())))
        statements.append(
            aspif.Rule(
                aspif.DISJUNCTIVE,
                (),
                aspif.WeightBody(n - k + 1, tuple((-a, 1) for a in atoms)),
            )
        )
    if opt:
        statements.append(aspif.Minimize(0, tuple((a, 1) for a in atoms)))
    return aspif.AspifDocument(statements=tuple(statements))


@dataclass(frozen=True)
class Propagator:
    """Lazily represented all-true-k-subset constraint over some atoms.

    Conflicts are explained by the nogood over the k smallest true atoms of
    the conflicting assignment.
    """

    atoms: tuple[int, ...]
    bound: int

    def conflicts_with(self, assignment: frozenset[int]) -> bool:
        return sum(1 for a in self.atoms if a in assignment) >= self.bound

    def explain(self, assignment: frozenset[int]) -> Nogood:
        true_atoms = sorted(a for a in self.atoms if a in assignment)
        if len(true_atoms) < self.bound:
            raise SemanticsError("explain called on a non-conflicting assignment")
        return Nogood(frozenset((a, True) for a in true_atoms[: self.bound]))

    def constraint_nogoods(self, guard: int = 10**6) -> list[Nogood]:
        """The full constraint, materialized; only for desk-scale checks."""
        import itertools
        import math

        if math.comb(len(self.atoms), self.bound) > guard:
            raise SemanticsError("constraint materialization exceeds guard")
        return [
            Nogood(frozenset((a, True) for a in subset))
            for subset in itertools.combinations(sorted(self.atoms), self.bound)
        ]


def card_propagator(atoms: Sequence[int], k: int) -> Propagator:
    if k > len(atoms):
        raise SemanticsError(f"bound {k} exceeds {len(atoms)} atoms")
    return Propagator(tuple(atoms), k)


@dataclass(frozen=True)
class PropagatorTrace:
    """Recorded propagator call history with its learned nogoods."""

    assignments: tuple[frozenset[int], ...]
    nogoods: tuple[Nogood, ...]
    complete: bool

    @property
    def m(self) -> int:
        return len(self.assignments)

    def summary(self) -> str:
        return f"m={self.m} complete={'true' if self.complete else 'false'}"

    def to_text(self) -> str:
        lines = []
        for idx, (assignment, ng) in enumerate(zip(self.assignments, self.nogoods), 1):
            atoms = ",".join(f"T{a}" for a, _ in sorted(ng.signed_literals))
            lines.append(f"call {idx}: |A|={len(assignment)} nogood={{{atoms}}}")
        lines.append(self.summary())
        return "\n".join(lines)


def _check_acyclic(rules: Sequence, heads: set[int]) -> None:
    graph = {h: set() for h in heads}
    for r in rules:
        graph[r.head] |= r.pos_body & heads
    state: dict[int, int] = {}
    for start in graph:
        if state.get(start):
            continue
        stack = [(start, iter(graph[start]))]
        state[start] = 1
        while stack:
            node, children = stack[-1]
            for child in children:
                if state.get(child) == 1:
                    raise SemanticsError("positive rule cycle defeats candidate closure")
                if not state.get(child):
                    state[child] = 1
                    stack.append((child, iter(graph[child])))
                    break
            else:
                state[node] = 2
                stack.pop()


def _supported_candidates(program: GroundProgram) -> list[frozenset[int]]:
    """Total supported-model candidates, fast when the program is layered.

    Requires empty-bodied choice rules and negation-free, acyclic normal
    rules: then supported models are exactly the closures of choice subsets
    that pass the constraints.
    """
    choice_atoms: set[int] = set()
    for c in program.choice_rules:
        if c.body:
            raise SemanticsError("candidate enumeration needs empty choice bodies")
        choice_atoms |= c.head_atoms
    for r in program.normal_rules:
        if r.neg_body:
            raise SemanticsError("candidate enumeration needs negation-free rules")
    _check_acyclic(program.normal_rules, {r.head for r in program.normal_rules})
    order = sorted(choice_atoms)
    n = len(order)
    if n > 24:
        raise SemanticsError(f"{n} choice atoms exceed the enumeration guard")
    seen: set[frozenset[int]] = set()
    candidates = []
    derivations = [(r.head, r.pos_body) for r in program.normal_rules]
    for mask in range(1 << n):
        chosen = frozenset(order[b] for b in range(n) if mask >> b & 1)
        model = least_model(list(derivations) + [(a, frozenset()) for a in chosen])
        if model in seen:
            continue
        seen.add(model)
        if all(cc.satisfied_by(model) for cc in program.cardinality_constraints) and all(
            ng.satisfied_by(model) for ng in program.nogoods
        ):
            candidates.append(model)
    candidates.sort(key=lambda m: tuple(sorted(m)))
    return candidates


def run_pch(
    program: GroundProgram,
    propagator: Propagator,
    shuffle_rng: random.Random | None = None,
) -> PropagatorTrace:
    """Drive the propagator with supported-model candidates until none remain.

    Candidates are visited in lexicographic order (or shuffled with the given
    generator); each conflicting one contributes its explanation to the pool
    of learned nogoods, which immediately prunes the remaining candidates.
    A surviving non-conflicting candidate would be an answer set, ending the
    history incomplete.
    """
    candidates = _supported_candidates(program)
    if shuffle_rng is not None:
        shuffle_rng.shuffle(candidates)
    assignments: list[frozenset[int]] = []
    learned: list[Nogood] = []
    while candidates:
        current = candidates[0]
        if not propagator.conflicts_with(current):
            return PropagatorTrace(tuple(assignments), tuple(learned), False)
        explanation = propagator.explain(current)
        assignments.append(current)
        learned.append(explanation)
        candidates = [c for c in candidates if not explanation.conflicts_with(c)]
    return PropagatorTrace(tuple(assignments), tuple(learned), True)


def verify_trace(
    program: GroundProgram, propagator: Propagator, trace: PropagatorTrace
) -> bool:
    """Re-check a trace against the definitional conditions, brute force.

    Each assignment must be a supported model satisfying all earlier learned
    nogoods while conflicting with the propagator constraint; completeness
    must coincide with the learned nogoods wiping out every answer set.
    """
    from .asplang import is_supported_model

    constraint = set(propagator.constraint_nogoods())
    for idx, assignment in enumerate(trace.assignments):
        if not is_supported_model(program, assignment):
            return False
        if any(ng.conflicts_with(assignment) for ng in trace.nogoods[:idx]):
            return False
        if not propagator.conflicts_with(assignment):
            return False
        if trace.nogoods[idx] not in constraint:
            return False
        if not trace.nogoods[idx].conflicts_with(assignment):
            return False
    constrained = GroundProgram(
        signature=program.signature,
        normal_rules=program.normal_rules,
        choice_rules=program.choice_rules,
        cardinality_constraints=program.cardinality_constraints,
        nogoods=program.nogoods + trace.nogoods,
    )
    return trace.complete == (not enumerate_answer_sets(constrained))


def attach_network(
    program: GroundProgram, input_atoms: Sequence[int], network: Network
) -> tuple[GroundProgram, WireAtomMap]:
    """Graft a network's rule translation onto existing input atoms."""
    first_free = max(program.signature, default=0) + 1
    wire_map = dense_wire_atom_map(
        network.width, network.depth, first_free, inputs=list(input_atoms)
    )
    rules = asp_of_network(network, wire_map)
    merged = GroundProgram(
        signature=program.signature | frozenset(wire_map.atoms()),
        normal_rules=program.normal_rules + tuple(rules),
        choice_rules=program.choice_rules,
        cardinality_constraints=program.cardinality_constraints,
        nogoods=program.nogoods,
    )
    return merged, wire_map


def output_atoms(wire_map: WireAtomMap) -> list[int]:
    return [wire_map.atom(i, wire_map.depth) for i in range(1, wire_map.width + 1)]


def sorted_output_check(network: Network) -> bool:
    """Exhaustively test that every binary input leaves the network sorted."""
    if network.width > 8:
        raise SemanticsError("sorted-output check is exhaustive, width capped at 8")
    for mask in range(1 << network.width):
        bits = [(mask >> b) & 1 for b in range(network.width)]
        output = apply(network, bits).output()
        if any(output[i] > output[i + 1] for i in range(len(output) - 1)):
            return False
    return True
