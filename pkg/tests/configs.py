"""Shared parameter sets for the test-suite and the acceptance run."""

import random

from gmpy2 import mpq

from artifact.graded_linear import DSuperMatrix

# (algebra, involution, sign, parity, shape)
FORM_CONFIGS = [
    ("Cl0R", "triv", 1, 0, (1, 1, 2)),
    ("Cl0R", "triv", -1, 0, (2, 0, 1, 1)),
    ("Cl0R", "triv", 1, 1, 1),
    ("Cl0C", "triv", 1, 0, (2, 0, 2, 0)),
    ("Cl0C", "triv", 1, 1, 1),
    ("Cl0C", "conj", 1, 0, (1, 0, 1, 0)),
    ("Cl0C", "conj", -1, 0, (1, 1, 1, 0)),
    ("Cl0C", "conj", 1, 1, 1),
    ("Cl4R", "conj", 1, 0, (1, 0, 1)),
    ("Cl4R", "conj", -1, 1, 1),
    ("Cl1C", "iota1", 1, 0, (1, 1)),
    ("Cl1C", "iota2", -1, 0, (2, 0)),
]


def random_dmatrix(mod, parity, rng: random.Random, terms=3):
    """Random homogeneous element of gl_D(mod) with small integer coefficients."""
    basis = [m for m in mod.gl_basis() if m.parity == parity]
    acc = DSuperMatrix(mod, {})
    for m in rng.sample(basis, min(terms, len(basis))):
        acc = acc + m.scale(mpq(rng.randint(-3, 3)))
    return acc
