"""CNF formula types and small complete SAT / NAE-SAT deciders.

Literals use the DIMACS convention: variable ids 1..n_vars, a negative
integer is a negated variable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, EmptyClause, NotRestricted, OutOfRange


@dataclass(frozen=True)
class CnfFormula:
    """Plain CNF: `clauses` is a tuple of tuples of signed literals."""

    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise EmptyClause("empty clause")
            for lit in clause:
                if lit == 0 or not 1 <= abs(lit) <= self.n_vars:
                    raise OutOfRange(f"literal {lit} outside +-1..{self.n_vars}")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


class RestrictedCnf(CnfFormula):
    """CNF in the monotone-occurrence-limited form the feedback-set reductions consume.

    Invariants: every clause is all-positive or all-negative; clause sizes are
    2 or 3 with distinct variables; each variable occurs at most twice positive
    and at most once negative.
    """

    def __post_init__(self):
        super().__post_init__()
        problem = restricted_defect(self)
        if problem is not None:
            raise NotRestricted(problem)


def restricted_defect(phi: CnfFormula) -> str | None:
    """Reason `phi` violates the restricted-form invariants, or None if it holds."""
    pos = [0] * (phi.n_vars + 1)
    neg = [0] * (phi.n_vars + 1)
    for clause in phi.clauses:
        if len(clause) not in (2, 3):
            return f"clause {clause} has size {len(clause)}, not 2 or 3"
        signs = {lit > 0 for lit in clause}
        if len(signs) != 1:
            return f"clause {clause} mixes positive and negative literals"
        if len({abs(lit) for lit in clause}) != len(clause):
            return f"clause {clause} repeats a variable"
        for lit in clause:
            if lit > 0:
                pos[lit] += 1
            else:
                neg[-lit] += 1
    for x in range(1, phi.n_vars + 1):
        if pos[x] > 2:
            return f"variable {x} occurs {pos[x]} times positive (max 2)"
        if neg[x] > 1:
            return f"variable {x} occurs {neg[x]} times negative (max 1)"
    return None


def evaluate(phi: CnfFormula, assignment: dict[int, bool]) -> bool:
    """True iff the assignment satisfies every clause (missing vars read as False)."""
    return all(
        any(assignment.get(abs(lit), False) == (lit > 0) for lit in clause)
        for clause in phi.clauses
    )


def evaluate_nae(phi: CnfFormula, assignment: dict[int, bool]) -> bool:
    """True iff every clause has at least one true and at least one false literal."""
    for clause in phi.clauses:
        values = {assignment.get(abs(lit), False) == (lit > 0) for lit in clause}
        if values != {True, False}:
            return False
    return True


def sat_assignment(phi: CnfFormula) -> dict[int, bool] | None:
    """A satisfying assignment, or None.  Complete search (DPLL with unit propagation)."""
    clauses = [list(c) for c in phi.clauses]
    assignment: dict[int, bool] = {}

    def propagate(cls: list[list[int]], asg: dict[int, bool]) -> list[list[int]] | None:
        changed = True
        while changed:
            changed = False
            next_cls = []
            for clause in cls:
                live = []
                satisfied = False
                for lit in clause:
                    var = abs(lit)
                    if var in asg:
                        if asg[var] == (lit > 0):
                            satisfied = True
                            break
                    else:
                        live.append(lit)
                if satisfied:
                    continue
                if not live:
                    return None
                if len(live) == 1:
                    lit = live[0]
                    asg[abs(lit)] = lit > 0
                    changed = True
                else:
                    next_cls.append(live)
            cls = next_cls
        return cls

    def solve(cls: list[list[int]], asg: dict[int, bool]) -> dict[int, bool] | None:
        cls = propagate(cls, asg)
        if cls is None:
            return None
        if not cls:
            return asg
        var = abs(cls[0][0])
        for value in (True, False):
            trial = dict(asg)
            trial[var] = value
            result = solve([list(c) for c in cls], trial)
            if result is not None:
                return result
        return None

    result = solve(clauses, assignment)
    if result is None:
        return None
    return {x: result.get(x, False) for x in range(1, phi.n_vars + 1)}


def nae_assignment(phi: CnfFormula, max_vars: int = 24) -> dict[int, bool] | None:
    """An assignment where every clause is not-all-equal, or None.  Brute force."""
    if phi.n_vars > max_vars:
        raise BudgetExceeded(f"NAE brute force capped at {max_vars} variables")
    for mask in range(1 << phi.n_vars):
        assignment = {x: bool(mask >> (x - 1) & 1) for x in range(1, phi.n_vars + 1)}
        if evaluate_nae(phi, assignment):
            return assignment
    return None
