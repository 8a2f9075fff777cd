#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "colorcode/weights.hpp"

using namespace colorcode;

TEST_CASE("logit weight values and domain") {
    CHECK(logit_weight(0.5) == doctest::Approx(0.0));
    CHECK(logit_weight(0.1) == doctest::Approx(std::log(9.0)));
    CHECK(logit_weight(0.9) == doctest::Approx(-std::log(9.0)));
    CHECK_THROWS_AS(logit_weight(0.0), std::invalid_argument);
    CHECK_THROWS_AS(logit_weight(1.0), std::invalid_argument);
    CHECK_THROWS_AS(logit_weight(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(logit_weight(1.2), std::invalid_argument);
}

TEST_CASE("smoothing uses laplace counts and falls back below the floor") {
    LocationTable loc;
    loc.width = 1;
    loc.stats.assign(2, PatternStats{});
    loc.stats[0] = {200, 20};
    loc.stats[1] = {50, 25};
    loc.total_count = 250;
    loc.total_errors = 45;
    CHECK(smoothed_probability(loc, 0) == doctest::Approx(21.0 / 202.0));
    // Pattern 1 sits below kMinPatternCount and merges.
    CHECK(smoothed_probability(loc, 1) == doctest::Approx(46.0 / 252.0));
    CHECK(smoothed_marginal(loc) == doctest::Approx(46.0 / 252.0));

    LocationTable empty;
    empty.width = 0;
    empty.stats.assign(1, PatternStats{});
    const double q = smoothed_probability(empty, 0);
    CHECK(q > 0.0);
    CHECK(q < 1.0);
}

TEST_CASE("noiseless estimation sees zero errors everywhere") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    for (auto side : {EstimationSide::cx, EstimationSide::cz}) {
        const ConditionalProbTable table =
            estimate_conditional_probs(code, side, NoiseModel{0.0}, 20000, 3, true);
        for (const auto& loc : table.vertex) {
            CHECK(loc.total_count == 20000);
            CHECK(loc.total_errors == 0);
        }
        for (const auto& loc : table.face) {
            CHECK(loc.total_count == 20000);
            CHECK(loc.total_errors == 0);
        }
    }
}

TEST_CASE("pattern counts partition the samples exactly") {
    const ColorCode code = build_color_code(CodeFamily::c666, 3);
    const ConditionalProbTable table =
        estimate_conditional_probs(code, EstimationSide::cz, NoiseModel{0.002}, 30000, 4, true);
    auto check_loc = [](const LocationTable& loc) {
        std::uint64_t count = 0, errors = 0;
        for (const auto& s : loc.stats) {
            count += s.count;
            errors += s.errors;
            CHECK(s.errors <= s.count);
        }
        CHECK(count == loc.total_count);
        CHECK(errors == loc.total_errors);
        CHECK(loc.total_count == 30000);
    };
    for (const auto& loc : table.vertex) check_loc(loc);
    for (const auto& loc : table.face) check_loc(loc);
    // Noise produces at least some errors overall.
    std::uint64_t all_errors = 0;
    for (const auto& loc : table.vertex) all_errors += loc.total_errors;
    CHECK(all_errors > 0);
}

TEST_CASE("source lists follow the face incidence structure") {
    const ColorCode code = build_color_code(CodeFamily::c488, 5);
    const ConditionalProbTable table =
        estimate_conditional_probs(code, EstimationSide::cx, NoiseModel{0.0}, 10, 1, false);
    for (int v = 0; v < code.num_qubits(); ++v) {
        std::size_t expected = 0;
        for (int f : code.faces_of_vertex[v])
            expected += code.faces[f].support.size() == 8 ? 3 : 1;
        CHECK(table.vertex_sources[v].size() == expected);
        CHECK(table.vertex[v].width == static_cast<int>(expected));
    }
    for (int f = 0; f < code.num_faces(); ++f) {
        const std::size_t flags = code.faces[f].support.size() == 8 ? 3 : 1;
        CHECK(table.face_sources[f].size() == flags);
        for (const auto& src : table.face_sources[f]) CHECK(src.face == f);
    }
}

TEST_CASE("json round trip preserves the table") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const ConditionalProbTable table =
        estimate_conditional_probs(code, EstimationSide::cz, NoiseModel{0.003}, 5000, 9, true);
    const std::string path = "test_weights_table.json";
    save_table_json(table, path);
    const ConditionalProbTable loaded = load_table_json(path);
    std::remove(path.c_str());
    CHECK(loaded.family == table.family);
    CHECK(loaded.distance == table.distance);
    CHECK(loaded.noise_p == table.noise_p);
    CHECK(loaded.samples == table.samples);
    CHECK(loaded.deflagged == table.deflagged);
    CHECK(loaded.side == table.side);
    CHECK(loaded.seed == table.seed);
    CHECK(loaded.schedule_version == table.schedule_version);
    REQUIRE(loaded.vertex.size() == table.vertex.size());
    REQUIRE(loaded.face.size() == table.face.size());
    for (std::size_t v = 0; v < table.vertex.size(); ++v) {
        CHECK(loaded.vertex[v].width == table.vertex[v].width);
        CHECK(loaded.vertex[v].total_count == table.vertex[v].total_count);
        CHECK(loaded.vertex[v].total_errors == table.vertex[v].total_errors);
        for (std::size_t k = 0; k < table.vertex[v].stats.size(); ++k) {
            CHECK(loaded.vertex[v].stats[k].count == table.vertex[v].stats[k].count);
            CHECK(loaded.vertex[v].stats[k].errors == table.vertex[v].stats[k].errors);
        }
    }
    for (std::size_t f = 0; f < table.face.size(); ++f) {
        CHECK(loaded.face[f].total_count == table.face[f].total_count);
        CHECK(loaded.face[f].total_errors == table.face[f].total_errors);
    }
}

TEST_CASE("uniform weights need no table and are all ones") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const WeightAssignment w =
        build_weights(nullptr, WeightScheme::uniform, c, ShotRecord{}, code, PauliType::z);
    REQUIRE(w.vertex_weight.size() == 4);
    REQUIRE(w.meas_weight.size() == 3);
    for (const auto& round : w.vertex_weight)
        for (double x : round) CHECK(x == 1.0);
    for (const auto& round : w.meas_weight)
        for (double x : round) CHECK(x == 1.0);
}

TEST_CASE("table validation rejects mismatched use") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const ConditionalProbTable cx_table =
        estimate_conditional_probs(code, EstimationSide::cx, NoiseModel{0.002}, 2000, 2, true);
    ShotRecord shot;
    shot.outcomes.assign(static_cast<std::size_t>(c.num_measurements()), 0);
    CHECK_THROWS_AS(
        build_weights(&cx_table, WeightScheme::flagged, c, shot, code, PauliType::z),
        std::invalid_argument);
    CHECK_THROWS_AS(
        build_weights(nullptr, WeightScheme::conventional, c, shot, code, PauliType::z),
        std::invalid_argument);
    const ColorCode other = build_color_code(CodeFamily::c488, 5);
    const Circuit oc = build_memory_experiment(other, ExtractionMethod::flagged, PauliType::x);
    CHECK_THROWS_AS(
        build_weights(&cx_table, WeightScheme::flagged, oc, shot, other, PauliType::x),
        std::invalid_argument);
}

TEST_CASE("conventional weights are round-constant marginals") {
    const ColorCode code = build_color_code(CodeFamily::c666, 3);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::x);
    const ConditionalProbTable table =
        estimate_conditional_probs(code, EstimationSide::cx, NoiseModel{0.002}, 50000, 6, true);
    ShotRecord shot;
    shot.outcomes.assign(static_cast<std::size_t>(c.num_measurements()), 0);
    const WeightAssignment w =
        build_weights(&table, WeightScheme::conventional, c, shot, code, PauliType::x);
    for (int v = 0; v < code.num_qubits(); ++v) {
        const double expect = logit_weight(smoothed_marginal(table.vertex[v]));
        for (std::size_t t = 0; t < w.vertex_weight.size(); ++t)
            CHECK(w.vertex_weight[t][v] == expect);
    }
    for (int f = 0; f < code.num_faces(); ++f) {
        const double expect = logit_weight(smoothed_marginal(table.face[f]));
        for (std::size_t t = 0; t < w.meas_weight.size(); ++t)
            CHECK(w.meas_weight[t][f] == expect);
    }
}

TEST_CASE("flagged weights condition on the decode-relevant cycle") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const ConditionalProbTable table =
        estimate_conditional_probs(code, EstimationSide::cz, NoiseModel{0.002}, 100000, 7, true);
    ShotRecord zeros;
    zeros.outcomes.assign(static_cast<std::size_t>(c.num_measurements()), 0);
    const WeightAssignment w =
        build_weights(&table, WeightScheme::flagged, c, zeros, code, PauliType::z);
    const int T = c.cycles;
    for (int v = 0; v < code.num_qubits(); ++v) {
        // Z decoding: round 1 predates any Z-gadget flags and reads as the
        // all-zero pattern, matching every later round of this zero shot.
        const double conditioned = logit_weight(smoothed_probability(table.vertex[v], 0));
        for (int t = 1; t <= T + 1; ++t) CHECK(w.vertex_weight[t - 1][v] == conditioned);
    }
    for (int f = 0; f < code.num_faces(); ++f) {
        const double conditioned = logit_weight(smoothed_probability(table.face[f], 0));
        for (int t = 1; t <= T; ++t) CHECK(w.meas_weight[t - 1][f] == conditioned);
    }

    // A raised flag must change the conditioned weight of an adjacent vertex
    // in exactly the rounds that read that cycle.
    const ConditionalProbTable& tb = table;
    int target_v = -1, src_face = -1, src_slot = -1;
    std::uint32_t bit = 0;
    for (int v = 0; v < code.num_qubits() && target_v < 0; ++v)
        for (std::size_t k = 0; k < tb.vertex_sources[v].size(); ++k) {
            const auto& loc = tb.vertex[v];
            const std::uint32_t pat = 1u << k;
            if (loc.stats[pat].count >= kMinPatternCount &&
                smoothed_probability(loc, pat) != smoothed_probability(loc, 0)) {
                target_v = v;
                src_face = tb.vertex_sources[v][k].face;
                src_slot = tb.vertex_sources[v][k].slot;
                bit = pat;
                break;
            }
        }
    REQUIRE(target_v >= 0);
    ShotRecord flagged = zeros;
    const int meas = c.flags_at(StabBasis::z, 2, src_face)[src_slot];
    flagged.outcomes[meas] = 1;
    const WeightAssignment wf =
        build_weights(&table, WeightScheme::flagged, c, flagged, code, PauliType::z);
    // Cycle-2 Z flags feed round 3 under Z decoding.
    CHECK(wf.vertex_weight[2][target_v] ==
          logit_weight(smoothed_probability(tb.vertex[target_v], bit)));
    CHECK(wf.vertex_weight[1][target_v] == w.vertex_weight[1][target_v]);
    CHECK(wf.vertex_weight[3][target_v] == w.vertex_weight[3][target_v]);
}
