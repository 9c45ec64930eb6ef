"""Rewriting of minimize statements through weighted sorting networks.

Each priority level of the objective is wired onto the inputs of an odd-even
sorting network (optionally depth-limited), the network is emitted as rules,
and the level's weights are propagated over a sparse decomposition.  The new
objective ranges over wire atoms and carries exactly the same value on every
answer set, in bijection with the original ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import aspif
from .asplang import (
    FreshAtoms,
    GroundProgram,
    Literal,
    NormalRule,
    ObjectiveFunction,
    evaluate,
    enumerate_answer_sets_layered,
    enumerate_answer_sets_split,
)
from .encode import asp_of_network, dense_wire_atom_map
from .network import limit_depth, oe_sorter, decompose_sparse
from .propagate import from_input_weights, propagate_decomposition


class RewriteError(ValueError):
    """Raised for invalid rewrite configurations or inputs."""


@dataclass(frozen=True)
class RewriteConfig:
    """Pipeline knobs.

    ``depth_limit`` of None means the full network; 0 disables rewriting
    entirely.  ``sparseness`` of None collapses every connected region into a
    single block (weights land only on the input and output columns).  With
    ``propagate`` off the network is still attached but weights stay on the
    input column.
    """

    depth_limit: int | None = None
    sparseness: int | None = 1
    propagate: bool = True
    sort_inputs: bool = False
    network_scheme: str = "odd-even"

    def __post_init__(self) -> None:
        if self.depth_limit is not None and self.depth_limit < 0:
            raise RewriteError(f"depth limit must be >= 0, got {self.depth_limit}")
        if self.sparseness is not None and self.sparseness < 1:
            raise RewriteError(f"sparseness must be >= 1, got {self.sparseness}")
        if self.network_scheme != "odd-even":
            raise RewriteError(f"unknown network scheme {self.network_scheme!r}")


@dataclass(frozen=True)
class LevelReport:
    priority: int
    input_terms: int
    rewritten_terms: int
    passthrough_terms: int
    network_width: int
    network_depth: int
    network_size: int
    output_terms: int
    atoms_added: int
    rules_added: int
    wire_atom_lines: tuple[str, ...] = ()


@dataclass(frozen=True)
class RewriteReport:
    levels: tuple[LevelReport, ...]

    def to_text(self) -> str:
        lines = []
        for lv in self.levels:
            lines.append(
                f"priority {lv.priority}: terms {lv.input_terms} -> {lv.output_terms} "
                f"(wired {lv.rewritten_terms}, passed {lv.passthrough_terms}), "
                f"network {lv.network_width}x{lv.network_depth} "
                f"size {lv.network_size}, atoms +{lv.atoms_added}, rules +{lv.rules_added}"
            )
        return "\n".join(lines)

    def sidecar_text(self) -> str:
        """Debug dump of every (wire, level) -> atom allocation, per priority."""
        lines = []
        for lv in self.levels:
            for entry in lv.wire_atom_lines:
                lines.append(f"priority {lv.priority} {entry}")
        return "\n".join(lines)


def wire_inputs(
    terms: list[tuple[int, Literal]], fresh: FreshAtoms
) -> tuple[list[NormalRule], list[int]]:
    """Bridge each weighted literal onto a fresh network input atom.

    One rule per term: the input atom is derived exactly when the literal
    holds.  Weights must be positive (normalization runs first).
    """
    rules = []
    inputs = []
    for w, lit in terms:
        if w <= 0:
            raise RewriteError(f"cannot wire non-positive weight {w}")
        atom = fresh.take()
        if lit.positive:
            rules.append(NormalRule(atom, frozenset({lit.atom})))
        else:
            rules.append(NormalRule(atom, frozenset(), frozenset({lit.atom})))
        inputs.append(atom)
    return rules, inputs


def _normalize(
    terms: tuple[tuple[int, int], ...]
) -> tuple[list[tuple[int, int]], list[tuple[int, int]], list[tuple[int, int]]]:
    # Merge duplicate literals (weights summed, first occurrence keeps the
    # slot), then split off non-positive weights as pass-through terms.
    merged: dict[int, int] = {}
    for lit, w in terms:
        merged[lit] = merged.get(lit, 0) + w
    rewritable = [(lit, w) for lit, w in merged.items() if w > 0]
    passthrough = [(lit, w) for lit, w in merged.items() if w <= 0]
    return rewritable, passthrough, list(merged.items())


def _rule_statement(rule: NormalRule) -> aspif.Rule:
    body = tuple(sorted(rule.pos_body)) + tuple(-a for a in sorted(rule.neg_body))
    return aspif.Rule(aspif.DISJUNCTIVE, (rule.head,), aspif.NormalBody(body))


def _rewrite_level(
    priority: int,
    terms: tuple[tuple[int, int], ...],
    config: RewriteConfig,
    fresh: FreshAtoms,
) -> tuple[list[aspif.Statement], LevelReport]:
    rewritable, passthrough, merged = _normalize(terms)
    if config.sort_inputs:
        rewritable.sort(key=lambda t: -t[1])
    if len(rewritable) < 2:
        statement = aspif.Minimize(priority, tuple(merged))
        return [statement], LevelReport(
            priority=priority,
            input_terms=len(terms),
            rewritten_terms=0,
            passthrough_terms=len(merged),
            network_width=0,
            network_depth=0,
            network_size=0,
            output_terms=len(merged),
            atoms_added=0,
            rules_added=0,
        )

    literals = [aspif.literal_from_int(lit) for lit, _ in rewritable]
    weights = [w for _, w in rewritable]
    bridge_rules, input_atoms = wire_inputs(list(zip(weights, literals)), fresh)
    network = oe_sorter(len(input_atoms))
    if config.depth_limit is not None:
        network = limit_depth(network, config.depth_limit)
    first_wire_atom = fresh.reserve(network.width * network.depth)
    wire_map = dense_wire_atom_map(
        network.width, network.depth, first_wire_atom, inputs=input_atoms
    )
    network_rules = asp_of_network(network, wire_map)

    matrix = from_input_weights(weights, network.depth)
    if config.propagate and network.depth >= 1:
        k = config.sparseness if config.sparseness is not None else network.depth
        matrix = propagate_decomposition(matrix, decompose_sparse(network, k))

    wire_terms = [
        (wire_map.atom(i, j), w) for i, j, w in matrix.nonzero_entries()
    ]
    out_terms = tuple(wire_terms) + tuple(passthrough)
    statements: list[aspif.Statement] = [
        _rule_statement(r) for r in bridge_rules + network_rules
    ]
    statements.append(aspif.Minimize(priority, out_terms))
    report = LevelReport(
        priority=priority,
        input_terms=len(terms),
        rewritten_terms=len(rewritable),
        passthrough_terms=len(passthrough),
        network_width=network.width,
        network_depth=network.depth,
        network_size=network.size(),
        output_terms=len(out_terms),
        atoms_added=len(input_atoms) + network.width * network.depth,
        rules_added=len(bridge_rules) + len(network_rules),
        wire_atom_lines=tuple(wire_map.sidecar_lines()),
    )
    return statements, report


def rewrite_objective(
    document: aspif.AspifDocument, config: RewriteConfig
) -> tuple[aspif.AspifDocument, RewriteReport]:
    """Rewrite every minimize priority level of the document independently.

    Non-minimize statements pass through untouched; several minimize
    statements sharing a priority are merged into one.  A depth limit of 0
    leaves the document exactly as parsed.
    """
    minimizes = [s for s in document.statements if isinstance(s, aspif.Minimize)]
    if config.depth_limit == 0 or not minimizes:
        levels = tuple(
            LevelReport(s.priority, len(s.terms), 0, len(s.terms), 0, 0, 0, len(s.terms), 0, 0)
            for s in minimizes
        )
        return document, RewriteReport(levels)

    by_priority: dict[int, list[tuple[int, int]]] = {}
    for s in minimizes:
        by_priority.setdefault(s.priority, []).extend(s.terms)

    fresh = FreshAtoms(document.max_atom_id() + 1)
    replacements: dict[int, list[aspif.Statement]] = {}
    reports = []
    for priority in sorted(by_priority):
        statements, report = _rewrite_level(
            priority, tuple(by_priority[priority]), config, fresh
        )
        replacements[priority] = statements
        reports.append(report)

    out_statements: list[aspif.Statement] = []
    emitted: set[int] = set()
    for s in document.statements:
        if isinstance(s, aspif.Minimize):
            if s.priority not in emitted:
                emitted.add(s.priority)
                out_statements.extend(replacements[s.priority])
        else:
            out_statements.append(s)
    rewritten = aspif.AspifDocument(
        document.version, document.tags, tuple(out_statements), True
    )
    return rewritten, RewriteReport(tuple(reports))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    answer_sets: int
    detail: str = ""


def verify_rewrite(
    before: tuple[GroundProgram, dict[int, ObjectiveFunction]],
    after: tuple[GroundProgram, dict[int, ObjectiveFunction]],
    before_models: list[frozenset[int]] | None = None,
) -> VerifyReport:
    """Brute-force check that a rewrite preserves answer sets and values.

    Verifies that projecting the rewritten program's answer sets onto the
    original signature is a bijection onto the original answer sets and that
    every objective level keeps its value model by model (hence also as a
    multiset and at the optimum).
    """
    before_program, before_objectives = before
    after_program, after_objectives = after
    if set(before_objectives) != set(after_objectives):
        return VerifyReport(False, 0, "objective priority levels differ")
    base = (
        enumerate_answer_sets_layered(before_program)
        if before_models is None
        else before_models
    )
    rewritten = enumerate_answer_sets_split(after_program, before_program.signature)
    if len(rewritten) != len(base):
        return VerifyReport(
            False, len(base), f"answer set counts differ: {len(base)} vs {len(rewritten)}"
        )
    base_set = set(base)
    seen: set[frozenset[int]] = set()
    for model in rewritten:
        projected = model & before_program.signature
        if projected in seen:
            return VerifyReport(
                False, len(base), f"two rewritten answer sets project to {sorted(projected)}"
            )
        seen.add(projected)
        if projected not in base_set:
            return VerifyReport(
                False, len(base), f"projection {sorted(projected)} is not an original answer set"
            )
        for priority, objective in before_objectives.items():
            value = evaluate(objective, projected)
            new_value = evaluate(after_objectives[priority], model)
            if value != new_value:
                return VerifyReport(
                    False,
                    len(base),
                    f"value mismatch at priority {priority} on {sorted(projected)}: "
                    f"{value} vs {new_value}",
                )
    return VerifyReport(True, len(base))


def random_opt_document(rng: random.Random, max_objective_atoms: int = 10) -> aspif.AspifDocument:
    """Small seeded optimization program for randomized verification sweeps."""
    n_choice = rng.randint(2, 5)
    choice_atoms = list(range(1, n_choice + 1))
    statements: list[aspif.Statement] = [
        aspif.Rule(aspif.CHOICE, tuple(choice_atoms), aspif.NormalBody(()))
    ]
    atoms = list(choice_atoms)
    for _ in range(rng.randint(0, 3)):
        head = atoms[-1] + 1
        pool = list(atoms)
        body = tuple(
            a if rng.random() < 0.7 else -a
            for a in rng.sample(pool, k=rng.randint(1, min(2, len(pool))))
        )
        statements.append(aspif.Rule(aspif.DISJUNCTIVE, (head,), aspif.NormalBody(body)))
        atoms.append(head)
    if rng.random() < 0.4:
        body = tuple(
            a if rng.random() < 0.6 else -a
            for a in rng.sample(atoms, k=rng.randint(1, min(3, len(atoms))))
        )
        statements.append(aspif.Rule(aspif.DISJUNCTIVE, (), aspif.NormalBody(body)))
    if rng.random() < 0.3:
        k = rng.randint(1, n_choice)
        terms = tuple((-a, 1) for a in choice_atoms)
        statements.append(
            aspif.Rule(
                aspif.DISJUNCTIVE, (), aspif.WeightBody(n_choice - k + 1, terms)
            )
        )
    priorities = [0] if rng.random() < 0.7 else [0, 1]
    for priority in priorities:
        count = rng.randint(1, max_objective_atoms)
        terms = []
        for _ in range(count):
            atom = rng.choice(atoms)
            lit = atom if rng.random() < 0.75 else -atom
            roll = rng.random()
            if roll < 0.1:
                weight = 0
            elif roll < 0.2:
                weight = -rng.randint(1, 9)
            else:
                weight = rng.randint(1, 30)
            terms.append((lit, weight))
        statements.append(aspif.Minimize(priority, tuple(terms)))
    if rng.random() < 0.3:
        statements.append(aspif.Output("picked", (choice_atoms[0],)))
    return aspif.AspifDocument(statements=tuple(statements))
