"""Evaluator variants over lotteries of utility acts.

A model couples a perception family (finitely many belief sets with costs,
or an affine parametric template over theta in [0,1]^k) with one of five
functional forms:

    cap            max over family of (expected MEU - cost)
    cautious       min over family of (expected MEU + cost)
    dual_self      max over family of expected MEU (costs must be zero)
    double_maxmin  min over family of expected MEU (costs must be zero)
    choquet        like cap, but members are capacity cores and the MEU
                   kernel is computed by the Choquet sort formula

Values are utils throughout; the certainty equivalent of a lottery equals
its value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    BeliefSet,
    ConvexCapacity,
    DimensionMismatchError,
    Prior,
    StateSpace,
    UtilityAct,
    _check_same_states,
    _readonly,
    core_of_capacity,
    is_supermodular,
    set_equal,
)

GROUNDED_TOL = 1e-9
REFINE_TOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

VARIANTS = ("cap", "cautious", "dual_self", "double_maxmin", "choquet")

# score = expected MEU + cost_sign * cost, optimized in opt direction
_IS_MAX = {
    "cap": True,
    "dual_self": True,
    "choquet": True,
    "cautious": False,
    "double_maxmin": False,
}
_COST_SIGN = {
    "cap": -1.0,
    "choquet": -1.0,
    "cautious": 1.0,
    "dual_self": 0.0,
    "double_maxmin": 0.0,
}


def constant_act(states: StateSpace, t: float) -> UtilityAct:
    return UtilityAct(states, np.full(len(states), float(t)))


class Lottery:
    """Finitely supported distribution over utility acts.

    Atoms with identical payoff vectors are merged at construction, so two
    lotteries that denote the same distribution compare equal atom-wise.
    """

    __slots__ = ("states", "atoms", "probs", "payoff_matrix")

    def __init__(self, atoms):
        atoms = list(atoms)
        if not atoms:
            raise ValueError("lottery needs at least one atom")
        states = atoms[0][1].states
        merged: dict[bytes, list] = {}
        for prob, act in atoms:
            prob = float(prob)
            if act.states != states:
                raise DimensionMismatchError("lottery atoms mix state spaces")
            if not prob > 0.0:
                raise ValueError(f"atom probability {prob} must be positive")
            key = act.payoffs.tobytes()
            if key in merged:
                merged[key][0] += prob
            else:
                merged[key] = [prob, act]
        probs = np.array([p for p, _ in merged.values()])
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"atom probabilities sum to {probs.sum()}, not 1")
        acts = [a for _, a in merged.values()]
        object.__setattr__(self, "states", states)
        object.__setattr__(
            self, "atoms", tuple(zip(probs.tolist(), acts))
        )
        object.__setattr__(self, "probs", _readonly(probs))
        object.__setattr__(
            self, "payoff_matrix", _readonly(np.vstack([a.payoffs for a in acts]))
        )

    def __setattr__(self, name, value):
        raise AttributeError("Lottery is immutable")

    @classmethod
    def dirac(cls, act: UtilityAct) -> "Lottery":
        return cls([(1.0, act)])

    @classmethod
    def constant(cls, states: StateSpace, t: float) -> "Lottery":
        return cls.dirac(constant_act(states, t))

    def __len__(self):
        return len(self.atoms)

    def __repr__(self):
        body = ", ".join(f"{p:g}: {a.payoffs.tolist()}" for p, a in self.atoms)
        return f"Lottery({{{body}}})"


def mix_lotteries(lam: float, P: Lottery, Q: Lottery) -> Lottery:
    """Ex ante mixture: atom-wise union with scaled probabilities."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixture weight {lam} outside [0, 1]")
    _check_same_states(P, Q)
    atoms = [(lam * p, a) for p, a in P.atoms if lam > 0.0]
    atoms += [((1.0 - lam) * p, a) for p, a in Q.atoms if lam < 1.0]
    return Lottery(atoms)


def mix_acts(lam: float, f: UtilityAct, g: UtilityAct) -> UtilityAct:
    """Ex post (statewise) mixture of payoff vectors."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixture weight {lam} outside [0, 1]")
    _check_same_states(f, g)
    return UtilityAct(f.states, lam * f.payoffs + (1.0 - lam) * g.payoffs)


class FiniteFamily:
    """Finite list of (BeliefSet, cost) pairs with a grounded cost."""

    __slots__ = ("states", "members", "costs", "_stacked", "_offsets")

    def __init__(self, members):
        members = [(M, float(c)) for M, c in members]
        if not members:
            raise ValueError("perception family needs at least one member")
        states = members[0][0].states
        for M, c in members:
            if M.states != states:
                raise DimensionMismatchError("family members mix state spaces")
            if not math.isfinite(c) or c < -GROUNDED_TOL:
                raise ValueError(f"cost {c} must be a nonnegative real")
        costs = np.maximum([c for _, c in members], 0.0)
        if costs.min() > GROUNDED_TOL:
            raise ValueError(
                f"cost not grounded: minimum over family is {costs.min()}, not 0"
            )
        sets = [M for M, _ in members]
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "members", tuple(zip(sets, costs.tolist())))
        object.__setattr__(self, "costs", _readonly(costs))
        object.__setattr__(
            self, "_stacked", _readonly(np.vstack([M.matrix for M in sets]))
        )
        sizes = [len(M) for M in sets]
        offsets = np.concatenate([[0], np.cumsum(sizes[:-1])]).astype(np.intp)
        object.__setattr__(self, "_offsets", offsets)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteFamily is immutable")

    @property
    def sets(self) -> tuple[BeliefSet, ...]:
        return tuple(M for M, _ in self.members)

    def __len__(self):
        return len(self.members)

    def meu_matrix(self, payoff_matrix: np.ndarray) -> np.ndarray:
        """(n_members, n_acts) matrix of minimum expected payoffs."""
        dots = self._stacked @ payoff_matrix.T
        return np.minimum.reduceat(dots, self._offsets, axis=0)


class ParametricFamily:
    """Affine vertex template over theta in [0,1]^k with an affine cost.

    Member(theta) has vertex matrix ``vertex_base + sum_i theta_i *
    vertex_coefs[i]``; cost(theta) = ``cost_base + cost_coefs . theta``.
    Vertices must be valid priors at every grid point, which (entries being
    affine in theta) makes them valid on the whole box.
    """

    __slots__ = (
        "states",
        "vertex_base",
        "vertex_coefs",
        "cost_base",
        "cost_coefs",
        "grid_resolution",
        "param_names",
        "thetas",
        "grid_costs",
        "grid_vertices",
    )

    def __init__(
        self,
        states: StateSpace,
        vertex_base,
        vertex_coefs,
        cost_base: float,
        cost_coefs,
        grid_resolution: int,
        param_names=None,
    ):
        base = np.asarray(vertex_base, dtype=float)
        coefs = np.asarray(vertex_coefs, dtype=float)
        if base.ndim != 2 or base.shape[1] != len(states):
            raise DimensionMismatchError("vertex_base must be (n_vertices, n_states)")
        if coefs.ndim != 3 or coefs.shape[1:] != base.shape:
            raise DimensionMismatchError(
                "vertex_coefs must be (n_params, n_vertices, n_states)"
            )
        k = coefs.shape[0]
        if k < 1:
            raise ValueError("parametric family needs at least one parameter")
        cvec = np.asarray(cost_coefs, dtype=float).reshape(-1)
        if cvec.size != k:
            raise DimensionMismatchError("cost_coefs length must match n_params")
        if grid_resolution < 1:
            raise ValueError("grid_resolution must be a positive integer")
        if param_names is None:
            param_names = tuple(f"theta{i}" for i in range(k))
        param_names = tuple(str(s) for s in param_names)
        if len(param_names) != k or len(set(param_names)) != k:
            raise ValueError("param_names must be distinct, one per parameter")

        axis = np.linspace(0.0, 1.0, grid_resolution) if grid_resolution > 1 else np.array([0.0])
        grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
        corners = np.array(list(itertools.product([0.0, 1.0], repeat=k)))
        thetas = np.unique(np.vstack([grid, corners]), axis=0)

        verts = base[None] + np.einsum("ck,kvn->cvn", thetas, coefs)
        sums = verts.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > 1e-12) or verts.min() < -1e-12:
            bad = int(np.argmax(np.abs(sums - 1.0).max(axis=1)))
            raise ValueError(
                f"template yields invalid priors at theta={thetas[bad].tolist()}"
            )
        costs = float(cost_base) + thetas @ cvec
        if costs.min() < -GROUNDED_TOL:
            raise ValueError(f"cost goes negative on the grid ({costs.min()})")
        if costs.min() > GROUNDED_TOL:
            raise ValueError(
                f"cost not grounded: minimum over grid is {costs.min()}, not 0"
            )

        object.__setattr__(self, "states", states)
        object.__setattr__(self, "vertex_base", _readonly(base))
        object.__setattr__(self, "vertex_coefs", _readonly(coefs))
        object.__setattr__(self, "cost_base", float(cost_base))
        object.__setattr__(self, "cost_coefs", _readonly(cvec))
        object.__setattr__(self, "grid_resolution", int(grid_resolution))
        object.__setattr__(self, "param_names", param_names)
        object.__setattr__(self, "thetas", _readonly(thetas))
        object.__setattr__(self, "grid_costs", _readonly(np.maximum(costs, 0.0)))
        object.__setattr__(self, "grid_vertices", _readonly(verts))

    def __setattr__(self, name, value):
        raise AttributeError("ParametricFamily is immutable")

    @property
    def n_params(self) -> int:
        return self.vertex_coefs.shape[0]

    def vertex_matrix_at(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        return self.vertex_base + np.tensordot(theta, self.vertex_coefs, axes=(0, 0))

    def member_at(self, theta) -> BeliefSet:
        return BeliefSet(self.states, self.vertex_matrix_at(theta))

    def cost_at(self, theta) -> float:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        return max(0.0, self.cost_base + float(self.cost_coefs @ theta))

    def to_finite(self) -> FiniteFamily:
        """Sample the family onto its grid (plus box corners)."""
        return FiniteFamily(
            [(self.member_at(th), self.cost_at(th)) for th in self.thetas]
        )


def _lower_envelope_capacity(M: BeliefSet) -> ConvexCapacity:
    """nu(E) = min over vertices of mu(E), for every subset bitmask E."""
    n = len(M.states)
    masks = np.arange(1 << n)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    values = (M.matrix @ bits.T.astype(float)).min(axis=0)
    values[0] = 0.0
    values[-1] = 1.0
    return ConvexCapacity(M.states, values)


class CapModel:
    """A perception family, a cost, and an evaluator variant."""

    __slots__ = ("states", "family", "variant", "capacities", "_cap_values")

    def __init__(self, states: StateSpace, family, variant: str, capacities=None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        if family.states != states:
            raise DimensionMismatchError("family defined over a different state space")
        if variant in ("dual_self", "double_maxmin"):
            costs = (
                family.grid_costs
                if isinstance(family, ParametricFamily)
                else family.costs
            )
            if np.max(costs) > GROUNDED_TOL:
                raise ValueError(f"{variant} requires all costs to be 0")
        if variant == "choquet":
            if not isinstance(family, FiniteFamily):
                raise ValueError("choquet variant requires a finite family of cores")
            sets = family.sets
            if capacities is None:
                capacities = tuple(_lower_envelope_capacity(M) for M in sets)
            capacities = tuple(capacities)
            if len(capacities) != len(sets):
                raise ValueError("one capacity per family member required")
            for nu, M in zip(capacities, sets):
                if nu.states != states:
                    raise DimensionMismatchError("capacity over a different state space")
                if not is_supermodular(nu):
                    raise ValueError("family member is not the core of a supermodular capacity")
                if not set_equal(core_of_capacity(nu), M):
                    raise ValueError("family member does not equal its capacity's core")
            object.__setattr__(
                self, "_cap_values", _readonly(np.vstack([nu.values for nu in capacities]))
            )
        else:
            if capacities is not None:
                raise ValueError("capacities only apply to the choquet variant")
            object.__setattr__(self, "_cap_values", None)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "capacities", capacities)

    def __setattr__(self, name, value):
        raise AttributeError("CapModel is immutable")

    @classmethod
    def from_capacities(cls, states: StateSpace, pairs) -> "CapModel":
        """Build the choquet variant from (ConvexCapacity, cost) pairs."""
        pairs = list(pairs)
        family = FiniteFamily([(core_of_capacity(nu), c) for nu, c in pairs])
        return cls(states, family, "choquet", capacities=[nu for nu, _ in pairs])

    @property
    def is_parametric(self) -> bool:
        return isinstance(self.family, ParametricFamily)


@dataclass(frozen=True)
class EvaluationResult:
    """Value, certainty equivalent, and near-optimal perceptions.

    ``optimal_perceptions`` lists family indices (finite families) or theta
    tuples (parametric families) whose score is within
    eps_opt = 1e-9 * max(1, |value|) of the optimum.
    """

    value: float
    certainty_equivalent: float
    optimal_perceptions: tuple


def _choquet_values(cap_values: np.ndarray, payoff_matrix: np.ndarray) -> np.ndarray:
    """(n_capacities, n_acts) Choquet integrals by descending sort-and-sum."""
    orders = np.argsort(-payoff_matrix, axis=1, kind="stable")
    sorted_pay = np.take_along_axis(payoff_matrix, orders, axis=1)
    prefix_masks = np.cumsum(1 << orders, axis=1)
    prefix_vals = cap_values[:, prefix_masks]
    increments = np.diff(prefix_vals, axis=2, prepend=0.0)
    return np.einsum("ma,kma->km", sorted_pay, increments)


def _finite_scores(model: CapModel, P: Lottery) -> np.ndarray:
    family = model.family
    if model.variant == "choquet":
        meu = _choquet_values(model._cap_values, P.payoff_matrix) @ P.probs
    else:
        meu = family.meu_matrix(P.payoff_matrix) @ P.probs
    return meu + _COST_SIGN[model.variant] * family.costs


def _golden_section_max(f, tol: float):
    """Maximize a unimodal f on [0,1]; returns (x, f(x))."""
    a, b = 0.0, 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    candidates = [(0.0, f(0.0)), (1.0, f(1.0)), (c, fc), (d, fd)]
    return max(candidates, key=lambda t: t[1])


def _refine_parametric(model: CapModel, P: Lottery, theta0: np.ndarray):
    """Cyclic coordinate search from the best grid point.

    The score is concave in each coordinate (a min of affine functions),
    so maxima refine by golden section and minima sit at an endpoint.
    """
    family = model.family
    sign = 1.0 if _IS_MAX[model.variant] else -1.0
    A0 = family.vertex_base @ P.payoff_matrix.T
    AC = np.einsum("kvn,mn->kvm", family.vertex_coefs, P.payoff_matrix)
    cost_sign = _COST_SIGN[model.variant]

    def score(theta):
        vals = A0 + np.tensordot(theta, AC, axes=(0, 0))
        meu = float(P.probs @ vals.min(axis=0))
        cost = family.cost_base + float(family.cost_coefs @ theta)
        return sign * (meu + cost_sign * cost)

    theta = theta0.copy()
    best = score(theta)
    k = family.n_params
    for _ in range(60):
        gained = 0.0
        for i in range(k):
            def along(x, i=i):
                trial = theta.copy()
                trial[i] = x
                return score(trial)

            if _IS_MAX[model.variant]:
                x, v = _golden_section_max(along, REFINE_TOL)
            else:
                # -score is convex per coordinate, so its max is at an endpoint
                x, v = max(((0.0, along(0.0)), (1.0, along(1.0))), key=lambda t: t[1])
            if v > best + 1e-15:
                gained += v - best
                theta[i] = x
                best = v
        if gained <= 1e-12:
            break
    return theta, sign * best


def _parametric_scores(model: CapModel, P: Lottery) -> np.ndarray:
    family = model.family
    dots = np.einsum("cvn,mn->cvm", family.grid_vertices, P.payoff_matrix)
    meu = dots.min(axis=1) @ P.probs
    return meu + _COST_SIGN[model.variant] * family.grid_costs


def evaluate(model: CapModel, P: Lottery) -> EvaluationResult:
    """Value of the lottery under the model, with near-optimal perceptions."""
    _check_same_states(model, P)
    sign = 1.0 if _IS_MAX[model.variant] else -1.0

    if isinstance(model.family, FiniteFamily):
        scores = _finite_scores(model, P)
        value = float(sign * np.max(sign * scores))
        eps = 1e-9 * max(1.0, abs(value))
        idx = np.flatnonzero(sign * scores >= sign * value - eps)
        return EvaluationResult(value, value, tuple(int(i) for i in idx))

    family = model.family
    scores = _parametric_scores(model, P)
    best_idx = int(np.argmax(sign * scores))
    theta_star, refined = _refine_parametric(model, P, family.thetas[best_idx].copy())
    value = float(sign * max(sign * scores[best_idx], sign * refined))
    eps = 1e-9 * max(1.0, abs(value))
    keep = np.flatnonzero(sign * scores >= sign * value - eps)
    perceptions = [tuple(float(x) for x in family.thetas[i]) for i in keep]
    if sign * refined >= sign * value - eps:
        t_star = tuple(float(x) for x in theta_star)
        if all(max(abs(a - b) for a, b in zip(t_star, p)) > 1e-12 for p in perceptions):
            perceptions.append(t_star)
    return EvaluationResult(value, value, tuple(sorted(perceptions)))


def evaluate_value(model: CapModel, P: Lottery) -> float:
    """Fast path returning only the value (used by sampling-heavy callers)."""
    _check_same_states(model, P)
    sign = 1.0 if _IS_MAX[model.variant] else -1.0
    if isinstance(model.family, FiniteFamily):
        scores = _finite_scores(model, P)
        return float(sign * np.max(sign * scores))
    scores = _parametric_scores(model, P)
    best_idx = int(np.argmax(sign * scores))
    _, refined = _refine_parametric(model, P, model.family.thetas[best_idx].copy())
    return float(sign * max(sign * scores[best_idx], sign * refined))


def certainty_equivalent(model: CapModel, P: Lottery) -> float:
    """Constant utility level indifferent to P; equals the value in utils."""
    return evaluate(model, P).value
