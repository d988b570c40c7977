"""Deterministic generators for benchmark subspace systems.

Families:

* ``example3``     three coordinate subspaces of R^d built from the residue
                   classes mod 3 plus three exceptional axes; every pair
                   meets in a line but the triple intersection is {0}, so
                   pairwise angles are degenerate while the joint angle is
                   not.  The sum of the three projectors is diagonal for
                   every d >= 4, which makes all angle values exact.
* ``two_lines``    two lines at a prescribed angle in R^2.
* ``tilted_pairs`` K independent tilted planes stacked block-diagonally in
                   R^{2K}; the joint angle is max_k cos(theta_k).
* ``random_system``  seeded Gaussian spans.
* ``common_core``  seeded spans all containing a shared core subspace, so
                   the intersection is nontrivial by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subspace import Subspace, SubspaceSystem

__all__ = [
    "FamilySpec",
    "common_core",
    "example3",
    "random_system",
    "tilted_pairs",
    "two_lines",
]


def _coordinate_subspace(d: int, indices, name: str = "") -> Subspace:
    idx = sorted(set(int(i) for i in indices))
    basis = np.zeros((d, len(idx)))
    for col, i in enumerate(idx):
        basis[i, col] = 1.0
    return Subspace(d, basis, name)


def example3(d: int = 12) -> SubspaceSystem:
    """Three coordinate subspaces whose pairwise meets are single axes.

    Component 1 spans the axes with index 0 mod 3; component 2 spans axis 0
    plus the axes with index 1 mod 3; component 3 spans axes 1 and 3 plus
    the axes with index 2 mod 3.  The pairwise intersections are the axes
    0, 1 and 3 while the triple intersection is {0}.
    """
    if d < 4:
        raise ValueError("example3 needs ambient dimension >= 4")
    i1 = range(0, d, 3)
    i2 = [0, *range(1, d, 3)]
    i3 = [1, 3, *range(2, d, 3)]
    subs = (
        _coordinate_subspace(d, i1, "S1"),
        _coordinate_subspace(d, i2, "S2"),
        _coordinate_subspace(d, i3, "S3"),
    )
    return SubspaceSystem(subs)


def two_lines(theta: float) -> SubspaceSystem:
    """Two lines in R^2 at angle theta; the joint angle cosine is cos(theta).

    theta = 0 is rejected (the lines coincide; use common_core for
    degenerate studies).
    """
    if not 0.0 < theta <= np.pi / 2:
        raise ValueError("theta must lie in (0, pi/2]")
    first = Subspace(2, np.array([[1.0], [0.0]]), "S1")
    second = Subspace(2, np.array([[np.cos(theta)], [np.sin(theta)]]), "S2")
    return SubspaceSystem((first, second))


def _resolve_angles(k: int, angle_rule) -> np.ndarray:
    if isinstance(angle_rule, str):
        if angle_rule == "inv-k":
            return 1.0 / np.arange(1, k + 1, dtype=float)
        raise ValueError(f"unknown angle rule {angle_rule!r}")
    if callable(angle_rule):
        return np.array([float(angle_rule(i)) for i in range(1, k + 1)])
    arr = np.asarray(angle_rule, dtype=float).reshape(-1)
    if arr.shape[0] != k:
        raise ValueError(f"expected {k} angles, got {arr.shape[0]}")
    return arr


def tilted_pairs(k: int, angle_rule="inv-k") -> SubspaceSystem:
    """K tilted planes stacked block-diagonally in R^{2K}.

    Block i holds the horizontal line and a line tilted by theta_i; the
    rule is "inv-k" (theta_i = 1/i), a callable i -> theta_i, or an array
    of K angles, each in (0, pi/2].
    """
    if k < 1:
        raise ValueError("need at least one block")
    theta = _resolve_angles(k, angle_rule)
    if ((theta <= 0) | (theta > np.pi / 2)).any():
        raise ValueError("angles must lie in (0, pi/2]")
    d = 2 * k
    horizontal = np.zeros((d, k))
    tilted = np.zeros((d, k))
    for i in range(k):
        horizontal[2 * i, i] = 1.0
        tilted[2 * i, i] = np.cos(theta[i])
        tilted[2 * i + 1, i] = np.sin(theta[i])
    return SubspaceSystem((Subspace(d, horizontal, "S1"), Subspace(d, tilted, "S2")))


def random_system(d: int, dims, seed: int = 0) -> SubspaceSystem:
    """Subspaces spanned by seeded Gaussian vectors, orthonormalized."""
    dims = [int(m) for m in dims]
    if len(dims) < 2:
        raise ValueError("need at least two subspaces")
    if any(not 0 <= m <= d for m in dims):
        raise ValueError("each dimension must lie in 0..d")
    rng = np.random.default_rng(seed)
    subs = []
    for j, m in enumerate(dims):
        vectors = rng.standard_normal((m, d))
        subs.append(Subspace.from_vectors(vectors, ambient_dim=d, name=f"S{j + 1}"))
    return SubspaceSystem(tuple(subs))


def common_core(d: int, dims, core_dim: int, seed: int = 0) -> SubspaceSystem:
    """Seeded spans that all contain one shared core subspace.

    Guarantees a nontrivial intersection (generically exactly the core), so
    reduction and the non-reduced angle parameters get exercised.
    """
    dims = [int(m) for m in dims]
    if len(dims) < 2:
        raise ValueError("need at least two subspaces")
    if not 0 <= core_dim <= min(dims):
        raise ValueError("core_dim must lie in 0..min(dims)")
    if max(dims) > d:
        raise ValueError("dimensions cannot exceed the ambient dimension")
    rng = np.random.default_rng(seed)
    core = rng.standard_normal((core_dim, d))
    subs = []
    for j, m in enumerate(dims):
        extra = rng.standard_normal((m - core_dim, d))
        vectors = np.vstack([core, extra]) if core_dim else extra
        subs.append(Subspace.from_vectors(vectors, ambient_dim=d, name=f"S{j + 1}"))
    return SubspaceSystem(tuple(subs))


@dataclass(frozen=True)
class FamilySpec:
    """Validated parameters for one corpus family, buildable into a system."""

    family: str
    dim: int | None = None
    theta: float | None = None
    k: int | None = None
    angle_rule: str = "inv-k"
    dims: tuple[int, ...] | None = None
    seed: int = 0
    core_dim: int | None = None

    def build(self) -> SubspaceSystem:
        if self.family == "example3":
            return example3(self.dim if self.dim is not None else 12)
        if self.family == "two_lines":
            if self.theta is None:
                raise ValueError("two_lines needs --theta")
            return two_lines(self.theta)
        if self.family == "tilted_pairs":
            if self.k is None:
                raise ValueError("tilted_pairs needs --k")
            return tilted_pairs(self.k, self.angle_rule)
        if self.family == "random":
            if self.dim is None or self.dims is None:
                raise ValueError("random needs --dim and --dims")
            return random_system(self.dim, self.dims, self.seed)
        if self.family == "common_core":
            if self.dim is None or self.dims is None or self.core_dim is None:
                raise ValueError("common_core needs --dim, --dims and --core-dim")
            return common_core(self.dim, self.dims, self.core_dim, self.seed)
        raise ValueError(f"unknown family {self.family!r}")
