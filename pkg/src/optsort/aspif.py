"""Reader/writer for the aspif v1 text format subset used by the rewriter.

Rule (1), minimize (2) and output (4) statements are interpreted; every other
statement code is carried through verbatim so downstream consumers lose
nothing.  Writing is canonical: single spaces, "\\n" line endings, terminator
always present, raw lines byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .asplang import (
    CardinalityConstraint,
    ChoiceRule,
    GroundProgram,
    Literal,
    Nogood,
    NormalRule,
    ObjectiveFunction,
)

DISJUNCTIVE = 0
CHOICE = 1


class AspifParseError(ValueError):
    """Raised on malformed aspif input, with a line number when known."""


class UnsupportedStatementError(ValueError):
    """Raised when a document cannot be bridged to ground-program semantics."""


@dataclass(frozen=True)
class NormalBody:
    literals: tuple[int, ...]


@dataclass(frozen=True)
class WeightBody:
    lower_bound: int
    terms: tuple[tuple[int, int], ...]  # (literal, weight)


@dataclass(frozen=True)
class Rule:
    head_kind: int  # DISJUNCTIVE or CHOICE
    head_atoms: tuple[int, ...]
    body: Union[NormalBody, WeightBody]


@dataclass(frozen=True)
class Minimize:
    priority: int
    terms: tuple[tuple[int, int], ...]  # (literal, weight)


@dataclass(frozen=True)
class Output:
    name: str
    condition: tuple[int, ...]


@dataclass(frozen=True)
class Raw:
    line: str


Statement = Union[Rule, Minimize, Output, Raw]


@dataclass(frozen=True)
class AspifDocument:
    version: tuple[int, int, int] = (1, 0, 0)
    tags: tuple[str, ...] = ()
    statements: tuple[Statement, ...] = ()
    had_terminator: bool = True

    def max_atom_id(self) -> int:
        """Largest atom id in sight; raw lines are scanned conservatively.

        For unknown statements every integer token is taken as a potential
        atom id, which can only overshoot, never collide.
        """
        top = 0
        for s in self.statements:
            if isinstance(s, Rule):
                top = max(top, *s.head_atoms, 0)
                if isinstance(s.body, NormalBody):
                    top = max(top, *(abs(l) for l in s.body.literals), 0)
                else:
                    top = max(top, *(abs(l) for l, _ in s.body.terms), 0)
            elif isinstance(s, Minimize):
                top = max(top, *(abs(l) for l, _ in s.terms), 0)
            elif isinstance(s, Output):
                top = max(top, *(abs(l) for l in s.condition), 0)
            else:
                for token in s.line.split():
                    try:
                        top = max(top, abs(int(token)))
                    except ValueError:
                        pass
        return top


class _Tokens:
    def __init__(self, parts: list[str], line_no: int):
        self.parts = parts
        self.pos = 0
        self.line_no = line_no

    def take_int(self, what: str) -> int:
        if self.pos >= len(self.parts):
            raise AspifParseError(f"line {self.line_no}: truncated statement, missing {what}")
        token = self.parts[self.pos]
        self.pos += 1
        try:
            return int(token)
        except ValueError:
            raise AspifParseError(
                f"line {self.line_no}: non-integer token {token!r} for {what}"
            ) from None

    def finish(self) -> None:
        if self.pos != len(self.parts):
            raise AspifParseError(
                f"line {self.line_no}: {len(self.parts) - self.pos} unexpected trailing tokens"
            )


def _parse_rule(tokens: _Tokens) -> Rule:
    head_kind = tokens.take_int("head kind")
    if head_kind not in (DISJUNCTIVE, CHOICE):
        raise AspifParseError(f"line {tokens.line_no}: unknown head kind {head_kind}")
    m = tokens.take_int("head atom count")
    heads = tuple(tokens.take_int("head atom") for _ in range(m))
    body_kind = tokens.take_int("body kind")
    if body_kind == 0:
        n = tokens.take_int("body literal count")
        lits = tuple(tokens.take_int("body literal") for _ in range(n))
        body: Union[NormalBody, WeightBody] = NormalBody(lits)
    elif body_kind == 1:
        bound = tokens.take_int("lower bound")
        n = tokens.take_int("body element count")
        terms = tuple(
            (tokens.take_int("body literal"), tokens.take_int("weight"))
            for _ in range(n)
        )
        body = WeightBody(bound, terms)
    else:
        raise AspifParseError(f"line {tokens.line_no}: unknown body kind {body_kind}")
    tokens.finish()
    if any(a < 1 for a in heads):
        raise AspifParseError(f"line {tokens.line_no}: head atoms must be positive")
    return Rule(head_kind, heads, body)


def _parse_minimize(tokens: _Tokens) -> Minimize:
    priority = tokens.take_int("priority")
    n = tokens.take_int("term count")
    terms = tuple(
        (tokens.take_int("literal"), tokens.take_int("weight")) for _ in range(n)
    )
    tokens.finish()
    return Minimize(priority, terms)


def _parse_output(line: str, line_no: int) -> Output:
    head, _, rest = line.partition(" ")
    assert head == "4"
    len_token, _, tail = rest.partition(" ")
    try:
        length = int(len_token)
    except ValueError:
        raise AspifParseError(f"line {line_no}: bad output string length") from None
    if length < 0 or len(tail) < length:
        raise AspifParseError(f"line {line_no}: output string shorter than declared")
    name = tail[:length]
    remainder = tail[length:]
    if remainder and not remainder.startswith(" "):
        raise AspifParseError(f"line {line_no}: output string length mismatch")
    tokens = _Tokens(remainder.split(), line_no)
    n = tokens.take_int("condition count")
    condition = tuple(tokens.take_int("condition literal") for _ in range(n))
    tokens.finish()
    return Output(name, condition)


def parse(text: str) -> AspifDocument:
    """Parse an aspif document from text.

    A missing trailing terminator is tolerated (and recorded); anything after
    the terminator is an error.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise AspifParseError("empty input, expected an aspif header")
    header = lines[0].split(" ")
    if len(header) < 4 or header[0] != "asp":
        raise AspifParseError(f"bad header {lines[0]!r}, expected 'asp 1 0 0'")
    try:
        version = (int(header[1]), int(header[2]), int(header[3]))
    except ValueError:
        raise AspifParseError(f"bad header version in {lines[0]!r}") from None
    if version != (1, 0, 0):
        raise AspifParseError(f"unsupported aspif version {version}")
    tags = tuple(header[4:])
    statements: list[Statement] = []
    terminated = False
    for line_no, line in enumerate(lines[1:], start=2):
        if terminated:
            raise AspifParseError(f"line {line_no}: content after terminator")
        if line == "0":
            terminated = True
            continue
        if not line.strip():
            raise AspifParseError(f"line {line_no}: blank statement line")
        code_token = line.split(" ", 1)[0]
        try:
            code = int(code_token)
        except ValueError:
            raise AspifParseError(
                f"line {line_no}: non-integer statement code {code_token!r}"
            ) from None
        if code == 1:
            statements.append(_parse_rule(_Tokens(line.split()[1:], line_no)))
        elif code == 2:
            statements.append(_parse_minimize(_Tokens(line.split()[1:], line_no)))
        elif code == 4:
            statements.append(_parse_output(line, line_no))
        else:
            statements.append(Raw(line))
    return AspifDocument(version, tags, tuple(statements), terminated)


def _render_statement(s: Statement) -> str:
    if isinstance(s, Rule):
        parts = [1, s.head_kind, len(s.head_atoms), *s.head_atoms]
        if isinstance(s.body, NormalBody):
            parts += [0, len(s.body.literals), *s.body.literals]
        else:
            parts += [1, s.body.lower_bound, len(s.body.terms)]
            for lit, w in s.body.terms:
                parts += [lit, w]
        return " ".join(map(str, parts))
    if isinstance(s, Minimize):
        parts = [2, s.priority, len(s.terms)]
        for lit, w in s.terms:
            parts += [lit, w]
        return " ".join(map(str, parts))
    if isinstance(s, Output):
        tail = " ".join(map(str, [len(s.condition), *s.condition]))
        return f"4 {len(s.name)} {s.name} {tail}"
    return s.line


def write(doc: AspifDocument) -> str:
    """Canonical rendering; always ends with the terminator line."""
    header = " ".join(["asp", *map(str, doc.version), *doc.tags])
    lines = [header]
    lines.extend(_render_statement(s) for s in doc.statements)
    lines.append("0")
    return "\n".join(lines) + "\n"


def literal_from_int(lit: int) -> Literal:
    """Signed aspif literal to semantic literal (negative = default negation)."""
    if lit == 0:
        raise UnsupportedStatementError("literal 0 is not allowed")
    return Literal(abs(lit), lit > 0)


def _constraint_from_weight_body(body: WeightBody) -> CardinalityConstraint | Nogood | None:
    """Integrity constraint over a weight body, when weights are uniform.

    Returns None when the constraint can never fire, an empty nogood when it
    always fires, and an at-least constraint over complemented literals
    otherwise.
    """
    merged: dict[int, int] = {}
    for lit, w in body.terms:
        merged[lit] = merged.get(lit, 0) + w
    weights = set(merged.values())
    if len(weights) > 1 or any(w < 0 for w in weights):
        raise UnsupportedStatementError(
            "weight body with non-uniform weights cannot be bridged"
        )
    n = len(merged)
    w = weights.pop() if weights else 0
    if w == 0:
        fires = body.lower_bound <= 0
        return Nogood(frozenset()) if fires else None
    needed = math.ceil(body.lower_bound / w)
    if needed <= 0:
        return Nogood(frozenset())
    if needed > n:
        return None
    complements = tuple(literal_from_int(lit).negated() for lit in sorted(merged))
    return CardinalityConstraint(complements, n - needed + 1)


def to_ground_program(doc: AspifDocument) -> tuple[GroundProgram, dict[int, ObjectiveFunction]]:
    """Bridge the document to brute-force semantics.

    Supports normal rules, integrity constraints (normal or uniform-weight
    bodies), choice rules with normal bodies, minimize and output statements.
    Anything else raises UnsupportedStatementError.
    """
    normal_rules: list[NormalRule] = []
    choice_rules: list[ChoiceRule] = []
    cardinality: list[CardinalityConstraint] = []
    nogoods: list[Nogood] = []
    objective_terms: dict[int, list[tuple[int, Literal]]] = {}
    atoms: set[int] = set()
    for s in doc.statements:
        if isinstance(s, Raw):
            raise UnsupportedStatementError(
                f"statement {s.line.split(' ', 1)[0]!r} has no ground-program bridge"
            )
        if isinstance(s, Output):
            atoms.update(abs(l) for l in s.condition)
            continue
        if isinstance(s, Minimize):
            bucket = objective_terms.setdefault(s.priority, [])
            for lit, w in s.terms:
                bucket.append((w, literal_from_int(lit)))
                atoms.add(abs(lit))
            continue
        if isinstance(s.body, WeightBody):
            if s.head_atoms or s.head_kind == CHOICE:
                raise UnsupportedStatementError(
                    "weight bodies are only bridged on integrity constraints"
                )
            atoms.update(abs(l) for l, _ in s.body.terms)
            constraint = _constraint_from_weight_body(s.body)
            if isinstance(constraint, CardinalityConstraint):
                cardinality.append(constraint)
            elif isinstance(constraint, Nogood):
                nogoods.append(constraint)
            continue
        lits = [literal_from_int(l) for l in s.body.literals]
        atoms.update(l.atom for l in lits)
        atoms.update(s.head_atoms)
        if s.head_kind == CHOICE:
            if s.head_atoms:
                choice_rules.append(ChoiceRule(frozenset(s.head_atoms), frozenset(lits)))
            continue
        if len(s.head_atoms) > 1:
            raise UnsupportedStatementError("disjunctive heads are not bridged")
        pos_body = frozenset(l.atom for l in lits if l.positive)
        neg_body = frozenset(l.atom for l in lits if not l.positive)
        if s.head_atoms:
            normal_rules.append(NormalRule(s.head_atoms[0], pos_body, neg_body))
        elif not pos_body & neg_body:
            # a constraint needing some atom both true and false never fires
            nogoods.append(
                Nogood(
                    frozenset(
                        {(a, True) for a in pos_body} | {(a, False) for a in neg_body}
                    )
                )
            )
    program = GroundProgram(
        signature=frozenset(atoms),
        normal_rules=tuple(normal_rules),
        choice_rules=tuple(choice_rules),
        cardinality_constraints=tuple(cardinality),
        nogoods=tuple(nogoods),
    )
    objectives = {
        p: ObjectiveFunction(tuple(terms)) for p, terms in sorted(objective_terms.items())
    }
    return program, objectives
