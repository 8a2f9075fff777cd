#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "colorcode/decoder.hpp"
#include "colorcode/deflag.hpp"

using namespace colorcode;

TEST_CASE("plan shape: one rule per flagged gadget instance") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666}) {
        const ColorCode code = build_color_code(family, 5);
        const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
        const DeflagPlan plan = build_deflag_plan(c, code);
        CHECK(plan.rules.size() ==
              static_cast<std::size_t>(2 * c.cycles * code.num_faces()));
        for (const auto& rule : plan.rules) {
            if (rule.kind == GadgetSpec::Kind::four_qubit) {
                CHECK(rule.flag_meas.size() == 3);
                CHECK(rule.targets.size() == 4);
            } else {
                CHECK(rule.flag_meas.size() == 1);
                const std::size_t w = code.faces[rule.face].support.size();
                CHECK(rule.targets.size() == (w + 1) / 2);
            }
            CHECK(rule.flips.size() == static_cast<std::size_t>(c.num_measurements()));
        }
    }
}

TEST_CASE("single-ancilla circuits deflag to an empty plan") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit c =
        build_memory_experiment(code, ExtractionMethod::single_ancilla, PauliType::z);
    CHECK(build_deflag_plan(c, code).rules.empty());
}

TEST_CASE("deflag updates never touch flag measurements") {
    const ColorCode code = build_color_code(CodeFamily::c488, 5);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::x);
    const DeflagPlan plan = build_deflag_plan(c, code);
    for (const auto& rule : plan.rules)
        for (int m = 0; m < c.num_measurements(); ++m)
            if (c.measurement_map[m].kind == MeasKind::flag) CHECK(rule.flips[m] == 0);
}

TEST_CASE("applying the plan twice is the identity") {
    const ColorCode code = build_color_code(CodeFamily::c666, 5);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const ReferenceRun ref = reference_run(c);
    const DeflagPlan plan = build_deflag_plan(c, code);
    for (std::uint64_t shot = 0; shot < 50; ++shot) {
        const ShotRecord rec = sample_shot(c, ref, NoiseModel{0.01}, 77, shot);
        const ShotRecord once = apply_deflagging(rec, plan);
        const ShotRecord twice = apply_deflagging(once, plan);
        CHECK(twice.outcomes == rec.outcomes);
        // Flag bits themselves never move.
        for (int m = 0; m < c.num_measurements(); ++m)
            if (c.measurement_map[m].kind == MeasKind::flag)
                CHECK(once.outcomes[m] == rec.outcomes[m]);
    }
}

TEST_CASE("trigger semantics") {
    const ColorCode code = build_color_code(CodeFamily::c488, 5);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const DeflagPlan plan = build_deflag_plan(c, code);
    ShotRecord shot;
    shot.outcomes.assign(static_cast<std::size_t>(c.num_measurements()), 0);
    for (const auto& rule : plan.rules) {
        CHECK_FALSE(deflag_triggered(shot, rule));
        ShotRecord armed = shot;
        for (int m : rule.flag_meas) armed.outcomes[m] = 1;
        CHECK(deflag_triggered(armed, rule));
        if (rule.flag_meas.size() == 3) {
            ShotRecord partial = shot;
            partial.outcomes[rule.flag_meas[0]] = 1;
            partial.outcomes[rule.flag_meas[1]] = 1;
            CHECK_FALSE(deflag_triggered(partial, rule));
        }
    }
}

TEST_CASE("no single fault raises all three flags of a four-qubit gadget") {
    const ColorCode code = build_color_code(CodeFamily::c488, 5);
    for (auto basis : {PauliType::x, PauliType::z}) {
        const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, basis);
        const DeflagPlan plan = build_deflag_plan(c, code);
        const auto effects = exhaustive_single_fault_enumeration(c, 0.001);
        bool saw_two_qubit_trigger = false;
        int four_qubit_rules = 0;
        for (const auto& rule : plan.rules) {
            if (rule.kind == GadgetSpec::Kind::four_qubit) ++four_qubit_rules;
            for (const auto& e : effects) {
                bool all = true;
                for (int m : rule.flag_meas)
                    if (!e.flips[m]) all = false;
                if (rule.kind == GadgetSpec::Kind::four_qubit) {
                    CHECK_FALSE(all);
                } else if (all) {
                    saw_two_qubit_trigger = true;
                }
            }
        }
        CHECK(four_qubit_rules > 0);
        CHECK(saw_two_qubit_trigger);
    }
}

TEST_CASE("any single circuit fault decodes cleanly at distance three") {
    // Deflagging alone cannot disambiguate a flag fired with no data error
    // from one fired with a full half-run error; the flag-conditioned weights
    // are what steer the decoder to a correction in the right logical class.
    for (auto family : {CodeFamily::c488, CodeFamily::c666}) {
        const ColorCode code = build_color_code(family, 3);
        for (auto basis : {PauliType::x, PauliType::z}) {
            CAPTURE(family_name(family));
            CAPTURE(basis == PauliType::x ? "x" : "z");
            const EstimationSide side =
                basis == PauliType::x ? EstimationSide::cx : EstimationSide::cz;
            const ConditionalProbTable table =
                estimate_conditional_probs(code, side, NoiseModel{0.002}, 200000, 5, true);
            const Circuit c =
                build_memory_experiment(code, ExtractionMethod::flagged, basis);
            const ReferenceRun ref = reference_run(c);
            const DeflagPlan plan = build_deflag_plan(c, code);
            const auto effects = exhaustive_single_fault_enumeration(c, 0.001);
            int failures = 0;
            for (const auto& e : effects) {
                ShotRecord shot;
                shot.outcomes = ref.outcomes;
                for (std::size_t m = 0; m < shot.outcomes.size(); ++m)
                    shot.outcomes[m] ^= e.flips[m];
                const ShotRecord fixed = apply_deflagging(shot, plan);
                const WeightAssignment weights =
                    build_weights(&table, WeightScheme::flagged, c, fixed, code, basis);
                const DecodingInstance inst = build_instance(c, fixed, code, weights, basis);
                const DecodingSolution sol = decode(inst);
                REQUIRE(sol.status == SolveStatus::optimal);
                failures += judge_logical_error(sol, c, fixed, code, basis);
            }
            CHECK(failures == 0);
        }
    }
}
