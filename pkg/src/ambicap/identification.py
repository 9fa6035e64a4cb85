"""Cost recovery from behavior.

The canonical cost of a belief set is the supremum, over lotteries, of
expected MEU under that set minus the lottery's certainty equivalent.  The
estimator restricts the supremum to lotteries supported on a finite
dictionary of normalized acts scaled by a geometric ladder (shifting an
atom by a constant moves both terms equally, so only normalized directions
matter), which makes the objective concave in the weight vector.  It is
maximized by multiplicative-weights supergradient ascent with restarts,
polished by exact line searches toward simplex vertices, and reported as a
certified lower bound together with the witness lottery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    BeliefSet,
    StateSpace,
    UtilityAct,
    convex_combination_gap,
    is_subset,
    mix_sets,
    prune_vertices,
    support_value,
    symmetric_vertex_distance,
)
from .model import (
    CapModel,
    FiniteFamily,
    Lottery,
    ParametricFamily,
    constant_act,
    evaluate,
)

WITNESS_TOL = 1e-7
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_N_RESTARTS = 16
_N_POLISHED = 4


def normalize_act(act: UtilityAct) -> UtilityAct:
    """Shift the first-state payoff to 0 and rescale to max |payoff| 1."""
    p = act.payoffs - act.payoffs[0]
    scale = np.abs(p).max()
    if scale < 1e-15:
        raise ValueError("constant acts have no normalized direction")
    return UtilityAct(act.states, p / scale)


@dataclass(frozen=True)
class Dictionary:
    """Finite set of normalized payoff directions with a scale ladder."""

    acts: tuple
    ladder: tuple = (1.0, 10.0, 100.0, 1000.0)

    def __post_init__(self):
        acts = tuple(self.acts)
        if not acts:
            raise ValueError("dictionary needs at least one act")
        seen = set()
        for a in acts:
            if a.payoffs[0] != 0.0 or np.abs(a.payoffs).max() != 1.0:
                raise ValueError(
                    f"act {a.payoffs.tolist()} is not normalized "
                    "(first payoff 0, max |payoff| 1)"
                )
            key = a.payoffs.tobytes()
            if key in seen:
                raise ValueError("dictionary acts must be distinct")
            seen.add(key)
        ladder = tuple(float(x) for x in self.ladder)
        if not ladder or any(x <= 0.0 for x in ladder):
            raise ValueError("scale ladder must be positive reals")
        object.__setattr__(self, "acts", acts)
        object.__setattr__(self, "ladder", ladder)


def standard_bet_dictionary(states: StateSpace, ladder=(1.0, 10.0, 100.0, 1000.0)) -> Dictionary:
    """Indicator bets on each state, their negatives, and pairwise
    differences, all normalized and deduplicated."""
    n = len(states)
    eye = np.eye(n)
    raw = [eye[i] for i in range(n)]
    raw += [-eye[i] for i in range(n)]
    raw += [eye[i] - eye[j] for i in range(n) for j in range(n) if i != j]
    acts, seen = [], set()
    for p in raw:
        a = normalize_act(UtilityAct(states, p))
        key = a.payoffs.tobytes()
        if key not in seen:
            seen.add(key)
            acts.append(a)
    return Dictionary(tuple(acts), ladder)


@dataclass(frozen=True)
class CostEstimate:
    """A certified lower bound on the canonical cost of one belief set."""

    value: float
    is_lower_bound: bool
    support_witness: Lottery


@dataclass(frozen=True)
class CanonicalReport:
    """Violations of inclusion-monotonicity and convexity in a finite family."""

    canonical: bool
    monotonicity_violations: tuple
    cost_convexity_violations: tuple
    hull_gaps: tuple
    members_checked: int
    lambdas: tuple = (0.25, 0.5, 0.75)


def _dictionary_atoms(dictionary: Dictionary, states: StateSpace):
    """Zero act first (it pins the estimate's floor at exactly 0), then
    every ladder scaling of every dictionary act."""
    atoms = [constant_act(states, 0.0)]
    for psi in dictionary.acts:
        for alpha in dictionary.ladder:
            atoms.append(UtilityAct(states, alpha * psi.payoffs))
    return atoms


def _surrogate_tables(model: CapModel, atoms):
    """(Hmat, costs): per-candidate MEU of every atom, plus candidate costs.

    For parametric families the candidates are the grid plus corners, so
    the surrogate value of a lottery never exceeds the true one and the
    final report re-evaluates with the exact evaluator.
    """
    payoff_matrix = np.vstack([a.payoffs for a in atoms])
    family = model.family
    if isinstance(family, FiniteFamily):
        return family.meu_matrix(payoff_matrix), family.costs
    dots = np.einsum("cvn,mn->cvm", family.grid_vertices, payoff_matrix)
    return dots.min(axis=1), family.grid_costs


def _golden_max_01(f, tol=1e-9):
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
    return max([(0.0, f(0.0)), (1.0, f(1.0)), (c, fc), (d, fd)], key=lambda t: t[1])


def _polish(w: np.ndarray, objective) -> tuple[np.ndarray, float]:
    """Cyclic exact line searches between each vertex weight and the rest.

    Along w(s) = s*e_d + (1-s)*(w-w_d e_d)/(1-w_d) the objective is concave
    (the path is affine), so golden section finds the segment optimum.
    """
    w = w.copy()
    best = objective(w)
    D = w.size
    for _ in range(3):
        gained = 0.0
        for d in range(D):
            wd = w[d]
            if wd >= 1.0 - 1e-15:
                continue
            rest = w.copy()
            rest[d] = 0.0
            rest /= rest.sum()
            e_d = np.zeros(D)
            e_d[d] = 1.0

            def along(s, rest=rest, e_d=e_d):
                return objective(s * e_d + (1.0 - s) * rest)

            s_star, v = _golden_max_01(along)
            if v > best + 1e-12:
                gained += v - best
                w = s_star * e_d + (1.0 - s_star) * rest
                best = v
        if gained <= 1e-10:
            break
    return w, best


def estimate_cost_star(
    model: CapModel, M: BeliefSet, dictionary: Dictionary, budget: int = 5000
) -> CostEstimate:
    """Lower-bound the canonical cost of M under the model's behavior."""
    if model.variant != "cap":
        raise ValueError("cost recovery is defined for the cap variant")
    if M.states != model.states:
        raise ValueError("belief set over a different state space")
    atoms = _dictionary_atoms(dictionary, model.states)
    D = len(atoms)
    h = np.array([support_value(M, a) for a in atoms])
    Hmat, costs = _surrogate_tables(model, atoms)

    def objective(w):
        return float(h @ w - np.max(Hmat @ w - costs))

    rng = np.random.default_rng(0)
    starts = [np.full(D, 1.0 / D)]
    starts += [rng.dirichlet(np.ones(D)) for _ in range(_N_RESTARTS - 1)]
    iters = max(1, budget // _N_RESTARTS)

    results = []
    for w0 in starts:
        w = w0.copy()
        lipschitz = 1e-12
        best_w, best_v = w.copy(), objective(w)
        for t in range(1, iters + 1):
            scores = Hmat @ w - costs
            active = int(np.argmax(scores))
            value = float(h @ w - scores[active])
            if value > best_v:
                best_v, best_w = value, w.copy()
            g = h - Hmat[active]
            lipschitz = max(lipschitz, float(np.abs(g).max()))
            w = w * np.exp(g / (lipschitz * math.sqrt(t)))
            w /= w.sum()
        results.append((best_v, best_w.tobytes(), best_w))
    results.sort(key=lambda r: (-r[0], r[1]))

    polished = []
    for v, key, w in results[:_N_POLISHED]:
        pw, pv = _polish(w, objective)
        polished.append((pv, pw.tobytes(), pw))
    polished.sort(key=lambda r: (-r[0], r[1]))
    _, _, w_best = polished[0]

    keep = w_best > 1e-300
    probs = w_best[keep] / w_best[keep].sum()
    witness = Lottery(
        [(p, a) for p, a in zip(probs, (a for a, k in zip(atoms, keep) if k))]
    )
    true_value = float(
        sum(p * support_value(M, a) for p, a in witness.atoms)
        - evaluate(model, witness).value
    )
    if true_value < 0.0:
        zero = Lottery.dirac(atoms[0])
        zero_value = float(
            support_value(M, atoms[0]) - evaluate(model, zero).value
        )
        return CostEstimate(max(0.0, zero_value), True, zero)
    return CostEstimate(true_value, True, witness)


_PROBE_CACHE: dict = {}


def _probe_directions(states: StateSpace) -> np.ndarray:
    """Deterministic payoff directions used to fingerprint belief sets."""
    n = len(states)
    if n not in _PROBE_CACHE:
        eye = np.eye(n)
        dirs = [eye[i] for i in range(n)]
        dirs += [-eye[i] for i in range(n)]
        dirs += [eye[i] - eye[j] for i in range(n) for j in range(i + 1, n)]
        rng = np.random.default_rng(20240917)
        dirs += list(rng.normal(size=(32, n)))
        _PROBE_CACHE[n] = np.vstack(dirs)
    return _PROBE_CACHE[n]


def _support_vector(M: BeliefSet, dirs: np.ndarray) -> np.ndarray:
    return (M.matrix @ dirs.T).min(axis=0)


def check_canonical(family) -> CanonicalReport:
    """Check inclusion-monotonicity of costs and convexity of the structure.

    Parametric families are sampled onto their grid first.  Mixture
    convexity is checked on support-function fingerprints: the mixture of
    two members must be expressible as a weighted combination of members
    (hull feasibility), and whenever it coincides with an actual member
    that member's cost must respect the convexity inequality.
    """
    if isinstance(family, ParametricFamily):
        family = family.to_finite()
    sets = family.sets
    costs = family.costs
    K = len(sets)
    lambdas = (0.25, 0.5, 0.75)

    mono = []
    for i in range(K):
        for j in range(K):
            if i != j and costs[i] < costs[j] - 1e-9 and is_subset(sets[i], sets[j]):
                mono.append((i, j, float(costs[i]), float(costs[j])))

    dirs = _probe_directions(family.states)
    fingerprints = np.vstack([_support_vector(M, dirs) for M in sets])

    convexity = []
    hull_gaps = []
    for i in range(K):
        for j in range(i + 1, K):
            for lam in lambdas:
                target = lam * fingerprints[i] + (1.0 - lam) * fingerprints[j]
                gap = convex_combination_gap(fingerprints, target)
                if gap > 1e-9:
                    hull_gaps.append((i, j, lam, float(gap)))
                bound = lam * costs[i] + (1.0 - lam) * costs[j]
                near = np.flatnonzero(
                    np.abs(fingerprints - target).max(axis=1) <= 1e-9
                )
                for k in near:
                    mixed = mix_sets(lam, sets[i], sets[j])
                    if not (is_subset(mixed, sets[k]) and is_subset(sets[k], mixed)):
                        continue
                    if costs[k] > bound + 1e-9:
                        convexity.append(
                            (i, j, float(lam), int(k), float(costs[k]), float(bound))
                        )
                    break

    return CanonicalReport(
        canonical=not (mono or convexity or hull_gaps),
        monotonicity_violations=tuple(mono),
        cost_convexity_violations=tuple(convexity),
        hull_gaps=tuple(hull_gaps),
        members_checked=K,
        lambdas=lambdas,
    )


def estimate_multi_meu_core(model: CapModel, sampler, n: int = 200) -> list[BeliefSet]:
    """Union of optimal perceptions over n sampled lotteries, deduplicated.

    An inner approximation of the minimal perception family: it grows with
    n and never over-reports (every returned set was exactly optimal at
    some sampled lottery).
    """
    if model.variant not in ("cap", "dual_self", "choquet"):
        raise ValueError("the minimal family is recovered from max-type variants")
    family = model.family
    found: list[BeliefSet] = []
    for _ in range(n):
        P = sampler.lottery()
        result = evaluate(model, P)
        for tag in result.optimal_perceptions:
            if isinstance(family, FiniteFamily):
                candidate = family.sets[tag]
            else:
                candidate = family.member_at(np.asarray(tag))
            pruned = prune_vertices(candidate)
            if all(
                symmetric_vertex_distance(pruned, existing) >= 1e-9
                for existing in found
            ):
                found.append(pruned)
    return found
