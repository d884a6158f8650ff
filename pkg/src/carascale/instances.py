"""Deterministic random instances with known feasibility witnesses.

Random streams come from numpy's counter-based Philox generator keyed by
the seed, so an instance depends only on ``(generator, n, m, seed)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import RankDeficient, complement_basis, orthonormalize, project

PRIMAL_INTERIOR = "PrimalInterior"
DUAL_INTERIOR = "DualInterior"

WITNESS_TOL = 1e-8
MAX_ATTEMPTS = 100


@dataclass(eq=False)
class Instance:
    n: int
    m: int
    basis: np.ndarray  # n x m spanning set of L, not necessarily orthonormal
    witness: np.ndarray = None
    witness_tag: str = None
    seed: int = 0
    generator_id: str = "manual"

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=float)
        if self.basis.ndim == 1:
            self.basis = self.basis[:, None]
        if self.basis.shape != (self.n, self.m):
            raise ValueError(f"basis has shape {self.basis.shape}, expected ({self.n}, {self.m})")
        if not 1 <= self.m < self.n:
            raise ValueError(f"need 1 <= m < n, got n={self.n}, m={self.m}")
        if self.witness is not None:
            self.witness = np.asarray(self.witness, dtype=float)

    @cached_property
    def _q(self):
        return orthonormalize(self.basis)

    @cached_property
    def _q_perp(self):
        return complement_basis(self._q)

    def orthonormal_basis(self):
        return self._q

    def complement(self):
        return self._q_perp

    def witness_ok(self, tag=None):
        """Whether the witness has the property ``tag`` (default: its own tag)."""
        tag = tag or self.witness_tag
        w = self.witness
        if w is None or tag is None:
            return False
        if np.min(w) <= 0:
            return False
        p = project(self._q, w)
        scale = WITNESS_TOL * np.linalg.norm(w)
        if tag == PRIMAL_INTERIOR:
            return np.linalg.norm(w - p) <= scale
        if tag == DUAL_INTERIOR:
            return np.linalg.norm(p) <= scale
        raise ValueError(f"unknown witness tag {tag!r}")

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        same_w = (self.witness is None and other.witness is None) or (
            self.witness is not None and other.witness is not None
            and np.array_equal(self.witness, other.witness))
        return (self.n, self.m, self.witness_tag, self.seed, self.generator_id) == (
            other.n, other.m, other.witness_tag, other.seed, other.generator_id
        ) and np.array_equal(self.basis, other.basis) and same_w


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


def _positive_vector(rng, n, hardness):
    w = rng.uniform(0.1, 1.0, size=n)
    w[np.argmin(w)] *= hardness
    return w


def _check_dims(n, m, hardness):
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    if not 0.0 < hardness <= 1.0:
        raise ValueError("hardness must lie in (0, 1]")


def gen_primal_feasible(n, m, seed, hardness=1.0):
    """L = span[x*, G] with x* uniform in [0.1, 1]^n and G standard normal."""
    _check_dims(n, m, hardness)
    rng = make_rng(seed)
    w = _positive_vector(rng, n, hardness)
    for _ in range(MAX_ATTEMPTS):
        basis = np.column_stack([w, rng.standard_normal((n, m - 1))])
        try:
            orthonormalize(basis)
        except RankDeficient:
            continue
        inst = Instance(n, m, basis, w, PRIMAL_INTERIOR, int(seed), "primal_feasible/v1")
        if not inst.witness_ok() or inst.witness_ok(DUAL_INTERIOR):
            raise AssertionError(f"generated witness invalid (n={n}, m={m}, seed={seed})")
        return inst
    raise RuntimeError(f"no full-rank basis after {MAX_ATTEMPTS} attempts")


def gen_dual_feasible(n, m, seed, hardness=1.0):
    """L = complement of span[y*, G] with y* > 0, so L is orthogonal to y*."""
    _check_dims(n, m, hardness)
    rng = make_rng(seed)
    w = _positive_vector(rng, n, hardness)
    for _ in range(MAX_ATTEMPTS):
        perp = np.column_stack([w, rng.standard_normal((n, n - m - 1))])
        try:
            q_perp = orthonormalize(perp)
        except RankDeficient:
            continue
        inst = Instance(n, m, complement_basis(q_perp), w, DUAL_INTERIOR, int(seed),
                        "dual_feasible/v1")
        if not inst.witness_ok() or inst.witness_ok(PRIMAL_INTERIOR):
            raise AssertionError(f"generated witness invalid (n={n}, m={m}, seed={seed})")
        return inst
    raise RuntimeError(f"no full-rank basis after {MAX_ATTEMPTS} attempts")


GENERATORS = {"primal": gen_primal_feasible, "dual": gen_dual_feasible}


def generate(kind, n, m, seed, hardness=1.0):
    return GENERATORS[kind](n, m, seed, hardness)
