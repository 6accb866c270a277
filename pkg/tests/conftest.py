"""Shared fixtures: an independent truth-table oracle and formula generators.

The oracle here deliberately avoids the package's vectorized enumeration and
the circuit path: assignments come from itertools.product and clauses are
evaluated with any()/all() directly, so expected values asserted in the tests
are computed along a route the code under test never touches.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest
from hypothesis import settings

from qsatlab.cnf import Assignment, Clause, CnfFormula, Literal

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

REPO_ROOT = Path(__file__).resolve().parents[1]
CORPUS_DIR = REPO_ROOT / "corpus"


def brute_eval(formula: CnfFormula, bits: tuple[int, ...]) -> bool:
    """Reference semantics, written independently of the package."""
    def lit_true(lit: Literal) -> bool:
        value = bits[lit.var - 1] == 1
        return not value if lit.negated else value

    return all(any(lit_true(l) for l in clause) for clause in formula.clauses)


def brute_count(formula: CnfFormula) -> int:
    return sum(
        1
        for bits in itertools.product((0, 1), repeat=formula.n)
        if brute_eval(formula, bits)
    )


def random_test_formula(rng: random.Random, max_n: int = 6, max_m: int = 8,
                        allow_empty_clause: bool = False) -> CnfFormula:
    n = rng.randint(1, max_n)
    m = rng.randint(0, max_m)
    clauses = []
    for _ in range(m):
        lo = 0 if allow_empty_clause else 1
        k = rng.randint(lo, min(3, n))
        chosen = rng.sample(range(1, n + 1), k)
        clauses.append(Clause(Literal(v, rng.random() < 0.5) for v in chosen))
    return CnfFormula(n, clauses)


def all_assignments(n: int):
    for bits in itertools.product((0, 1), repeat=n):
        yield Assignment(bits)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    assert CORPUS_DIR.is_dir(), "bundled corpus missing; run python -m qsatlab.corpus corpus/"
    return CORPUS_DIR
