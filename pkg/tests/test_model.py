"""Model evaluation: golden tables, variant semantics, structural laws."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ambicap import (
    BeliefSet,
    CapModel,
    FiniteFamily,
    Lottery,
    StateSpace,
    UtilityAct,
    VARIANTS,
    certainty_equivalent,
    choquet_integral,
    constant_act,
    core_of_capacity,
    evaluate,
    evaluate_value,
    mix_acts,
    mix_lotteries,
    support_value,
)
from ambicap.sampling import (
    LotterySampler,
    random_cap_model,
    random_supermodular_capacity,
)
from ambicap.stock import (
    acts_5051,
    acts_dual_self,
    acts_ellsberg,
    acts_reflection,
    dual_self_model,
    family_5051,
    model_5051,
    model_reflection,
)

P_VAL = 50.0 / 101.0


def _dirac(act):
    return Lottery.dirac(act)


class TestGoldenTables:
    def test_urn_5051_values(self, urn_model):
        acts = acts_5051()
        want = {
            "f1": 100.0 * (1.0 + 50.0 / 101.0),
            "f2": 125.0 - 2500.0 / 101.0,
            "f3": 25.0 + 7500.0 / 101.0,
            "f4": 50.0 + 5000.0 / 101.0,
        }
        for name, act in acts.items():
            assert evaluate_value(urn_model, _dirac(act)) == pytest.approx(
                want[name], abs=1e-9
            )

    def test_urn_5051_preference_pattern(self, urn_model):
        acts = acts_5051()
        u = {k: evaluate_value(urn_model, _dirac(v)) for k, v in acts.items()}
        assert u["f1"] > u["f2"]
        assert u["f4"] > u["f3"]

    def test_reflection_values_and_perceptions(self, reflection_model):
        acts = acts_reflection()
        want = {"f5": 50.0, "f6": 70.0, "f7": 70.0, "f8": 50.0}
        for name, act in acts.items():
            res = evaluate(reflection_model, _dirac(act))
            assert res.value == pytest.approx(want[name], abs=1e-9)
        opt6 = evaluate(reflection_model, _dirac(acts["f6"])).optimal_perceptions
        opt7 = evaluate(reflection_model, _dirac(acts["f7"])).optimal_perceptions
        assert any(np.allclose(t, (1.0, 0.0), atol=1e-9) for t in opt6)
        assert any(np.allclose(t, (0.0, 1.0), atol=1e-9) for t in opt7)

    def test_ellsberg_values(self, reflection_model):
        acts = acts_ellsberg()
        assert evaluate_value(reflection_model, _dirac(acts["f9"])) == pytest.approx(
            50.0, abs=1e-9
        )
        assert evaluate_value(reflection_model, _dirac(acts["f10"])) == pytest.approx(
            -50.0, abs=1e-9
        )

    def test_dual_self_values(self, slices_model):
        acts = acts_dual_self()
        want = {"f5": 75.0, "f6": 100.0, "f7": 100.0, "f8": 75.0,
                "f9": 50.0, "f10": 25.0}
        for name, act in acts.items():
            assert evaluate_value(slices_model, _dirac(act)) == pytest.approx(
                want[name], abs=1e-9
            )

    def test_cautious_variant_flips_to_worst_member(self, states4):
        model = model_5051(variant="cautious")
        act = acts_5051()["f2"]
        assert evaluate_value(model, _dirac(act)) == pytest.approx(100.0, abs=1e-9)


class TestEvaluationContract:
    def test_certainty_equivalent_equals_value(self, urn_model):
        for act in acts_5051().values():
            res = evaluate(urn_model, _dirac(act))
            assert res.certainty_equivalent == res.value
            assert certainty_equivalent(urn_model, _dirac(act)) == res.value

    def test_optimal_perceptions_achieve_value_parametric(self, urn_model):
        family = urn_model.family
        for act in acts_5051().values():
            P = _dirac(act)
            res = evaluate(urn_model, P)
            assert res.optimal_perceptions
            eps = 1e-9 * max(1.0, abs(res.value))
            for theta in res.optimal_perceptions:
                member = family.member_at(theta)
                got = support_value(member, act) - family.cost_at(theta)
                assert abs(got - res.value) <= eps

    def test_optimal_perceptions_achieve_value_finite(self, slices_model):
        family = slices_model.family
        for act in acts_dual_self().values():
            P = _dirac(act)
            res = evaluate(slices_model, P)
            assert res.optimal_perceptions
            for idx in res.optimal_perceptions:
                got = support_value(family.sets[idx], act)
                assert abs(got - res.value) <= 1e-9 * max(1.0, abs(res.value))

    def test_constant_lottery_worth_face_value(self, states4):
        for variant in VARIANTS:
            model = random_cap_model(
                states4, np.random.default_rng(5), variant=variant
            )
            P = Lottery.constant(states4, 42.5)
            assert evaluate_value(model, P) == pytest.approx(42.5, abs=1e-9)


class TestStructuralLaws:
    @given(st.integers(0, 2**31 - 1), st.sampled_from(VARIANTS))
    def test_translation_invariance(self, seed, variant):
        rng = np.random.default_rng(seed)
        states = StateSpace([f"s{i}" for i in range(int(rng.integers(2, 5)))])
        model = random_cap_model(states, rng, variant=variant)
        sampler = LotterySampler(states, seed=seed % 1000)
        P = sampler.lottery()
        shift = 13.25
        shifted = Lottery(
            [(p, UtilityAct(states, a.payoffs + shift)) for p, a in P.atoms]
        )
        assert evaluate_value(model, shifted) == pytest.approx(
            evaluate_value(model, P) + shift, abs=1e-8
        )

    @given(st.integers(0, 2**31 - 1), st.floats(0.0, 1.0))
    def test_mixture_curvature_by_variant(self, seed, lam):
        rng = np.random.default_rng(seed)
        states = StateSpace([f"s{i}" for i in range(int(rng.integers(2, 5)))])
        sampler = LotterySampler(states, seed=seed % 1000)
        P, Q = sampler.pair()
        for variant in ("cap", "dual_self"):
            model = random_cap_model(states, rng, variant=variant)
            mixed = evaluate_value(model, mix_lotteries(lam, P, Q))
            chord = lam * evaluate_value(model, P) + (1 - lam) * evaluate_value(
                model, Q
            )
            assert mixed <= chord + 1e-8
        for variant in ("cautious", "double_maxmin"):
            model = random_cap_model(states, rng, variant=variant)
            mixed = evaluate_value(model, mix_lotteries(lam, P, Q))
            chord = lam * evaluate_value(model, P) + (1 - lam) * evaluate_value(
                model, Q
            )
            assert mixed >= chord - 1e-8

    @given(st.integers(0, 2**31 - 1))
    def test_pointwise_dominance_monotone(self, seed):
        rng = np.random.default_rng(seed)
        states = StateSpace([f"s{i}" for i in range(int(rng.integers(2, 5)))])
        model = random_cap_model(states, rng)
        f = UtilityAct(states, rng.uniform(-100, 300, len(states)))
        g = UtilityAct(states, f.payoffs + rng.uniform(0, 50, len(states)))
        assert evaluate_value(model, _dirac(g)) >= evaluate_value(model, _dirac(f))

    def test_cap_value_bounds_members(self, urn_model):
        family = urn_model.family
        sampler = LotterySampler(urn_model.states, seed=3)
        for _ in range(20):
            P = sampler.lottery()
            value = evaluate_value(urn_model, P)
            for theta in ((0.0, 0.0), (1.0, 1.0), (0.5, 0.25)):
                member = family.member_at(theta)
                route = (
                    sum(p * support_value(member, a) for p, a in P.atoms)
                    - family.cost_at(theta)
                )
                assert value >= route - 1e-8


class TestParametricFiniteAgreement:
    def test_grid_values_match_finite_enumeration(self):
        family = family_5051(grid_resolution=7)
        parametric = CapModel(family.states, family, "cap")
        finite = CapModel(family.states, family.to_finite(), "cap")
        sampler = LotterySampler(family.states, seed=11)
        for _ in range(25):
            P = sampler.lottery()
            v_fin = evaluate_value(finite, P)
            v_par = evaluate_value(parametric, P)
            # refinement can only improve on the shared grid
            assert v_par >= v_fin - 1e-9

    def test_corner_acts_agree_exactly(self, urn_model):
        finite = CapModel(
            urn_model.states, urn_model.family.to_finite(), "cap"
        )
        for act in acts_5051().values():
            assert evaluate_value(urn_model, _dirac(act)) == pytest.approx(
                evaluate_value(finite, _dirac(act)), abs=1e-9
            )


class TestChoquetVariant:
    @given(st.integers(0, 2**31 - 1))
    def test_choquet_matches_core_route(self, seed):
        rng = np.random.default_rng(seed)
        states = StateSpace([f"s{i}" for i in range(int(rng.integers(2, 5)))])
        pairs = []
        for _ in range(int(rng.integers(1, 4))):
            nu = random_supermodular_capacity(states, rng)
            pairs.append((nu, float(rng.uniform(0, 10))))
        pairs[int(rng.integers(0, len(pairs)))] = (pairs[0][0], 0.0)
        choquet_model = CapModel.from_capacities(states, pairs)
        core_family = FiniteFamily(
            [(core_of_capacity(nu), cost) for nu, cost in pairs]
        )
        cap_model = CapModel(states, core_family, "cap")
        sampler = LotterySampler(states, seed=seed % 997)
        for _ in range(5):
            P = sampler.lottery()
            assert evaluate_value(choquet_model, P) == pytest.approx(
                evaluate_value(cap_model, P), abs=1e-9
            )

    def test_single_capacity_is_choquet_integral(self, states3):
        rng = np.random.default_rng(4)
        nu = random_supermodular_capacity(states3, rng)
        model = CapModel.from_capacities(states3, [(nu, 0.0)])
        phi = UtilityAct(states3, (5.0, -3.0, 11.0))
        assert evaluate_value(model, _dirac(phi)) == pytest.approx(
            choquet_integral(nu, phi), abs=1e-12
        )


class TestConstructionRules:
    def test_lottery_merges_duplicate_acts(self, states4):
        f = constant_act(states4, 3.0)
        P = Lottery([(0.25, f), (0.25, f), (0.5, constant_act(states4, 9.0))])
        assert len(P) == 2
        assert P.probs.sum() == pytest.approx(1.0)

    def test_lottery_rejects_bad_probabilities(self, states4):
        f = constant_act(states4, 1.0)
        g = constant_act(states4, 2.0)
        with pytest.raises(ValueError):
            Lottery([(0.7, f), (0.2, g)])
        with pytest.raises(ValueError):
            Lottery([(1.2, f), (-0.2, g)])

    def test_mix_acts(self, states4):
        f = UtilityAct(states4, (0.0, 4.0, 0.0, 0.0))
        g = UtilityAct(states4, (8.0, 0.0, 0.0, 0.0))
        h = mix_acts(0.25, f, g)
        assert h.payoffs.tolist() == [6.0, 1.0, 0.0, 0.0]

    def test_family_requires_grounded_costs(self, states4):
        M = BeliefSet(states4, np.eye(4))
        with pytest.raises(ValueError):
            FiniteFamily([(M, 5.0)])
        with pytest.raises(ValueError):
            FiniteFamily([(M, -1.0)])

    def test_zero_cost_variants_reject_costs(self, states4):
        M = BeliefSet(states4, np.eye(4))
        N = BeliefSet(states4, [np.full(4, 0.25)])
        family = FiniteFamily([(M, 0.0), (N, 2.0)])
        for variant in ("dual_self", "double_maxmin"):
            with pytest.raises(ValueError):
                CapModel(states4, family, variant)

    def test_unknown_variant_rejected(self, states4):
        M = BeliefSet(states4, np.eye(4))
        with pytest.raises(ValueError):
            CapModel(states4, FiniteFamily([(M, 0.0)]), "optimist")

    def test_dual_self_equals_zero_cost_cap(self, slices_model):
        family = slices_model.family
        cap_twin = CapModel(slices_model.states, family, "cap")
        sampler = LotterySampler(slices_model.states, seed=2)
        for _ in range(40):
            P = sampler.lottery()
            assert evaluate_value(slices_model, P) == pytest.approx(
                evaluate_value(cap_twin, P), abs=1e-12
            )

    def test_double_maxmin_is_worst_member_meu(self, states4):
        rng = np.random.default_rng(9)
        model = random_cap_model(states4, rng, variant="double_maxmin")
        sampler = LotterySampler(states4, seed=8)
        for _ in range(40):
            P = sampler.lottery()
            per_member = model.family.meu_matrix(P.payoff_matrix) @ P.probs
            assert evaluate_value(model, P) == pytest.approx(
                float(per_member.min()), abs=1e-12
            )
