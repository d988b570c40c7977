"""Joint angle parameters of a family of subspaces.

For N subspaces with intersection M the module computes:

* the configuration constant  kappa = || (P_1 + ... + P_N)/N - P_M ||,
* the joint Friedrichs number c = N/(N-1) * kappa - 1/(N-1)  in [0, 1],
* the non-reduced pair (c0, kappa0) via the product-space route,
* pairwise angles, prefix angles and Gramian samples,
* the inclination  l = inf over unit y orthogonal to M of
  max_j dist(y, M_j), estimated by multistart projected subgradient
  descent and certified against the sandwich
  1 - sqrt(kappa) <= l-related bounds <= sqrt(2N(1 - sqrt(kappa))).

Empty-supremum convention: when every reduced subspace is {0} (all
subspaces equal M) the defining suprema range over an empty set; c and c0
are reported as 0 and kappa as 1/N, with the degenerate flag raised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOL, NumericalFailure, TolerancePolicy, operator_norm
from .subspace import Subspace, SubspaceSystem, intersection_of, orthogonal_complement, projector

__all__ = [
    "AngleReport",
    "InclinationBudget",
    "InclinationEstimate",
    "ProductSpacePair",
    "angle_report",
    "configuration_constant",
    "dixmier_number",
    "friedrichs_number",
    "gramian_sample",
    "inclination",
    "pairwise_dixmier_reduced",
    "pairwise_friedrichs",
    "prefix_friedrichs",
    "product_space",
]


@dataclass(frozen=True)
class InclinationEstimate:
    """Numerical estimate of the inclination together with certified bounds.

    lower and upper come from the configuration constant; `certified` is set
    when the optimizer value lands inside [lower - tol, upper + tol].
    """

    lower: float
    upper: float
    estimate: float
    certified: bool


@dataclass(frozen=True)
class InclinationBudget:
    """Multistart / iteration parameters for the inclination optimizer."""

    starts: int = 32
    steps: int = 400
    polish_steps: int = 200
    step_size: float = 0.5
    smoothing_power: float = 16.0
    seed: int = 0


@dataclass(eq=False)
class ProductSpacePair:
    """Cartesian product C = M_1 x ... x M_N and the diagonal D inside R^{Nd}."""

    C: Subspace
    D: Subspace
    CD: Subspace


@dataclass(eq=False)
class AngleReport:
    """All angle parameters of a system in one bundle."""

    c0: float
    c: float
    kappa0: float
    kappa: float
    pairwise_dixmier_reduced: np.ndarray
    prefix_friedrichs: tuple[float, ...]
    inclination: InclinationEstimate | None
    degenerate: bool


def _checked_range(value: float, lo: float, hi: float, tol: TolerancePolicy, label: str) -> float:
    if value < lo - tol.check_tol or value > hi + tol.check_tol:
        raise NumericalFailure(f"{label} = {value} escapes [{lo}, {hi}] beyond tolerance")
    return float(min(hi, max(lo, value)))


def configuration_constant(system: SubspaceSystem, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """kappa = || mean of the projectors - projector onto the intersection ||.

    Lies in [1/N, 1]; the degenerate (all-equal) family gets 1/N by the
    empty-supremum convention.
    """
    n = system.n_subspaces
    if system.degenerate:
        return 1.0 / n
    kappa = operator_norm(system.mean_projector - system.intersection_projector)
    return _checked_range(kappa, 1.0 / n, 1.0, tol, "configuration constant")


def friedrichs_number(system: SubspaceSystem, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Joint Friedrichs number c = N/(N-1) * kappa - 1/(N-1), in [0, 1].

    c = 0 for pairwise orthogonal subspaces, c = 1 exactly when uniform
    geometric convergence of the cyclic projection iteration fails.
    """
    n = system.n_subspaces
    kappa = configuration_constant(system, tol)
    c = (n * kappa - 1.0) / (n - 1.0)
    return _checked_range(c, 0.0, 1.0, tol, "Friedrichs number")


def product_space(system: SubspaceSystem) -> ProductSpacePair:
    """Assemble C (block-diagonal), D (diagonal copies) and C ∩ D in R^{Nd}."""
    d = system.ambient_dim
    n = system.n_subspaces
    total = sum(system.dims)
    c_basis = np.zeros((n * d, total))
    col = 0
    for j, s in enumerate(system.subspaces):
        c_basis[j * d:(j + 1) * d, col:col + s.dim] = s.basis
        col += s.dim
    d_basis = np.tile(np.eye(d), (n, 1)) / np.sqrt(n)
    cd_basis = np.tile(system.intersection.basis, (n, 1)) / np.sqrt(n)
    return ProductSpacePair(
        C=Subspace(n * d, c_basis, name="product"),
        D=Subspace(n * d, d_basis, name="diagonal"),
        CD=Subspace(n * d, cd_basis, name="product&diagonal"),
    )


def dixmier_number(system: SubspaceSystem, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[float, float]:
    """(c0, kappa0): the non-reduced angle pair.

    kappa0 = ||P_D P_C||^2 in the product space, c0 the affine transform of
    kappa0.  c0 = 1 whenever the intersection is nonzero, c0 = 0 exactly for
    pairwise orthogonal subspaces.
    """
    n = system.n_subspaces
    if all(s.dim == 0 for s in system.subspaces):
        return 0.0, 1.0 / n  # empty admissible set
    pair = product_space(system)
    kappa0 = operator_norm(projector(pair.D) @ projector(pair.C)) ** 2
    kappa0 = _checked_range(kappa0, 1.0 / n, 1.0, tol, "non-reduced configuration constant")
    c0 = (n * kappa0 - 1.0) / (n - 1.0)
    return _checked_range(c0, 0.0, 1.0, tol, "Dixmier number"), kappa0


def pairwise_friedrichs(s1: Subspace, s2: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Cosine of the Friedrichs angle of two subspaces: ||P_2 P_1 - P_meet||."""
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError("subspaces must share the ambient dimension")
    meet = intersection_of([s1, s2], tol)
    value = operator_norm(projector(s2) @ projector(s1) - projector(meet))
    return _checked_range(value, 0.0, 1.0, tol, "pairwise Friedrichs number")


def pairwise_dixmier_reduced(system: SubspaceSystem, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Symmetric N x N table of ||P_i~ P_j~|| over the reduced subspaces.

    Entry (i, j) is the cosine of the minimal angle between the reduced
    subspaces i and j; the diagonal is 1 for nonzero reduced subspaces and 0
    otherwise.
    """
    n = system.n_subspaces
    table = np.zeros((n, n))
    red_projectors = [projector(r) for r in system.reduced]
    for i in range(n):
        table[i, i] = 1.0 if system.reduced[i].dim else 0.0
        for j in range(i + 1, n):
            value = operator_norm(red_projectors[i] @ red_projectors[j])
            value = _checked_range(value, 0.0, 1.0, tol, "pairwise Dixmier number")
            table[i, j] = table[j, i] = value
    return table


def prefix_friedrichs(system: SubspaceSystem, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[float, ...]:
    """c_j = pairwise angle of (M_1 ∩ ... ∩ M_{j-1}, M_j) for j = 2..N.

    Prefix intersections reuse the eigenspace route on the leading
    sub-family.
    """
    values = []
    for j in range(1, system.n_subspaces):
        prefix = intersection_of(system.subspaces[:j], tol)
        values.append(pairwise_friedrichs(prefix, system.subspaces[j], tol))
    return tuple(values)


def gramian_sample(system: SubspaceSystem, unit_vectors, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """(1/N) * ||G|| for the Gramian G of one unit vector per reduced subspace.

    Every sample is a lower witness for the configuration constant; the
    supremum over admissible tuples attains it.  Rejected when some reduced
    subspace is {0}, because the admissible set then has no unit vector.
    """
    n = system.n_subspaces
    if any(r.dim == 0 for r in system.reduced):
        raise ValueError("every reduced subspace must be nonzero to pick unit vectors")
    vs = [np.asarray(v, dtype=float) for v in unit_vectors]
    if len(vs) != n:
        raise ValueError(f"expected {n} vectors, got {len(vs)}")
    for v, r in zip(vs, system.reduced):
        if v.shape != (system.ambient_dim,):
            raise ValueError("vectors must live in the ambient space")
        if abs(float(np.linalg.norm(v)) - 1.0) > tol.check_tol:
            raise ValueError("vectors must have unit norm")
        if not r.contains(v, tol):
            raise ValueError("each vector must lie in its reduced subspace")
    v_mat = np.column_stack(vs)
    gram = v_mat.T @ v_mat
    return operator_norm(gram) / n


def _inclination_objective(coeff_gram: list[np.ndarray], c: np.ndarray) -> np.ndarray:
    """max_j ||A_j c|| column-wise for c of shape (m, nstarts)."""
    r2 = np.stack([np.sum(c * (s @ c), axis=0) for s in coeff_gram])
    return np.sqrt(np.maximum(r2, 0.0)).max(axis=0)


def _subgradient_run(coeff_gram: list[np.ndarray], starts: np.ndarray, steps: int,
                     step_size: float, power: float) -> tuple[float, np.ndarray]:
    """Projected subgradient descent on the unit sphere, all starts at once.

    Descent directions use an L^p smoothing of the max of norms; objective
    values are always the true max.
    """
    c = starts / np.linalg.norm(starts, axis=0, keepdims=True)
    best_val = np.full(c.shape[1], np.inf)
    best_c = c.copy()
    for t in range(steps):
        sc = [s @ c for s in coeff_gram]
        r = np.sqrt(np.maximum(np.stack([np.sum(c * x, axis=0) for x in sc]), 0.0))
        f = r.max(axis=0)
        improved = f < best_val
        best_val = np.where(improved, f, best_val)
        best_c[:, improved] = c[:, improved]
        rmax = np.maximum(f, 1e-300)
        weights = (r / rmax) ** (power - 2.0)
        grad = sum(w * x for w, x in zip(weights, sc))
        grad -= c * np.sum(grad * c, axis=0)
        norms = np.linalg.norm(grad, axis=0)
        safe = np.maximum(norms, 1e-300)
        c = c - (step_size / np.sqrt(t + 1.0)) * grad / safe
        c /= np.linalg.norm(c, axis=0, keepdims=True)
    f = _inclination_objective(coeff_gram, c)
    improved = f < best_val
    best_val = np.where(improved, f, best_val)
    best_c[:, improved] = c[:, improved]
    winner = int(np.argmin(best_val))
    return float(best_val[winner]), best_c[:, winner]


def inclination(system: SubspaceSystem, budget: InclinationBudget = InclinationBudget(),
                tol: TolerancePolicy = DEFAULT_TOL) -> InclinationEstimate:
    """Estimate l = min over unit y orthogonal to M of max_j dist(y, M_j).

    Multistart projected subgradient descent over the unit sphere of the
    orthogonal complement of the intersection; the certified interval
    [1 - sqrt(kappa), sqrt(2N(1 - sqrt(kappa)))] comes from the
    configuration constant.  Undefined when the intersection is the whole
    space.
    """
    comp = orthogonal_complement(system.intersection, tol)
    m = comp.dim
    if m == 0:
        raise ValueError("inclination undefined: the intersection is the whole space")
    n = system.n_subspaces
    coeff = [comp.basis - p @ comp.basis for p in system.projectors]
    coeff_gram = [a.T @ a for a in coeff]

    if m == 1:
        estimate = float(_inclination_objective(coeff_gram, np.ones((1, 1)))[0])
    else:
        rng = np.random.default_rng(budget.seed)
        structured = [np.linalg.eigh(sum(coeff_gram))[1][:, :2]]
        structured.extend(np.linalg.eigh(s)[1][:, :1] for s in coeff_gram)
        seeds = np.column_stack([np.hstack(structured), rng.standard_normal((m, max(1, budget.starts)))])
        estimate, best = _subgradient_run(coeff_gram, seeds, budget.steps,
                                          budget.step_size, budget.smoothing_power)
        polish_val, _ = _subgradient_run(coeff_gram, best[:, None], budget.polish_steps,
                                         budget.step_size / 10.0, budget.smoothing_power)
        estimate = min(estimate, polish_val)

    kappa = configuration_constant(system, tol)
    root = np.sqrt(kappa)
    lower = max(0.0, 1.0 - root)
    upper = min(1.0, float(np.sqrt(max(0.0, 2.0 * n * (1.0 - root)))))
    certified = (lower - tol.check_tol) <= estimate <= (upper + tol.check_tol)
    return InclinationEstimate(lower=lower, upper=upper, estimate=float(estimate), certified=bool(certified))


def angle_report(system: SubspaceSystem, budget: InclinationBudget = InclinationBudget(),
                 tol: TolerancePolicy = DEFAULT_TOL) -> AngleReport:
    """Compute every angle parameter of the system in one pass."""
    c0, kappa0 = dixmier_number(system, tol)
    kappa = configuration_constant(system, tol)
    c = friedrichs_number(system, tol)
    table = pairwise_dixmier_reduced(system, tol)
    prefix = prefix_friedrichs(system, tol)
    if system.intersection.dim == system.ambient_dim:
        incl = None
    else:
        incl = inclination(system, budget, tol)
    return AngleReport(
        c0=c0,
        c=c,
        kappa0=kappa0,
        kappa=kappa,
        pairwise_dixmier_reduced=table,
        prefix_friedrichs=prefix,
        inclination=incl,
        degenerate=system.degenerate,
    )
