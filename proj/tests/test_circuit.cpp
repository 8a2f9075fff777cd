#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "colorcode/circuit.hpp"

using namespace colorcode;

namespace {

int expected_total_qubits(CodeFamily family, ExtractionMethod method, int d) {
    if (family == CodeFamily::c488)
        return method == ExtractionMethod::flagged ? (5 * d * d + 4 * d - 5) / 4
                                                   : (3 * d * d + 6 * d - 5) / 4;
    return method == ExtractionMethod::flagged ? (3 * d * d - 1) / 2 : (9 * d * d - 1) / 8;
}

int data_cnot_layers(const Circuit& c) {
    int count = 0;
    for (const auto& layer : c.layers) {
        bool touches_data = false;
        for (const auto& ins : layer.instructions)
            if (ins.op == OpType::cnot && (c.roles[ins.q0] == QubitRole::data ||
                                           c.roles[ins.q1] == QubitRole::data))
                touches_data = true;
        if (touches_data) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("total qubit counts match the closed forms") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666})
        for (auto method : {ExtractionMethod::single_ancilla, ExtractionMethod::flagged})
            for (int d = 3; d <= 7; d += 2) {
                CAPTURE(family_name(family));
                CAPTURE(d);
                const ColorCode code = build_color_code(family, d);
                const Circuit c = build_memory_experiment(code, method, PauliType::z);
                CHECK(c.num_qubits == expected_total_qubits(family, method, d));
                CHECK(c.num_data == code.num_qubits());
            }
}

TEST_CASE("flagged data rounds have depth three, single-ancilla family-constant depth") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666})
        for (int d = 3; d <= 7; d += 2) {
            CAPTURE(family_name(family));
            CAPTURE(d);
            const ColorCode code = build_color_code(family, d);
            const Circuit flagged = build_flagged_cycle(code, StabBasis::x);
            CHECK(data_cnot_layers(flagged) == 3);
            // The single-ancilla window is reserved at the family's maximum
            // face weight; at d = 3 every face has weight 4, so the trailing
            // reserved layers hold only idles.
            const Circuit single = build_single_ancilla_cycle(code, StabBasis::x);
            const int populated = d == 3 ? 4 : (family == CodeFamily::c488 ? 8 : 6);
            CHECK(data_cnot_layers(single) == populated);
        }
}

TEST_CASE("half-cycle layer counts are family constants") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666}) {
        const ColorCode code = build_color_code(family, 5);
        const int cat = family == CodeFamily::c488 ? 2 : 1;
        CHECK(build_flagged_cycle(code, StabBasis::z).num_layers() == 1 + cat + 3 + cat + 1);
        const int depth = family == CodeFamily::c488 ? 8 : 6;
        CHECK(build_single_ancilla_cycle(code, StabBasis::z).num_layers() == 1 + depth + 1);
    }
}

TEST_CASE("memory circuit shape") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    CHECK(c.kind == CircuitKind::memory);
    CHECK(c.cycles == 3);
    const int half = 1 + 2 + 3 + 2 + 1;
    CHECK(c.num_layers() == 1 + 3 * 2 * half + 1);
    CHECK(c.first_ideal_layer == c.num_layers() - 1);
    // 3 cycles x 2 bases x 3 faces x (1 syndrome + 1 flag) + 7 final reads.
    CHECK(c.num_measurements() == 43);
    CHECK(c.schedule_version == kScheduleVersion);
}

TEST_CASE("every measurement index is mapped exactly once") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666})
        for (auto method : {ExtractionMethod::single_ancilla, ExtractionMethod::flagged}) {
            const ColorCode code = build_color_code(family, 5);
            const Circuit c = build_memory_experiment(code, method, PauliType::x);
            std::set<int> seen;
            for (int b = 0; b < 2; ++b)
                for (int t = 1; t <= c.cycles; ++t)
                    for (int f = 0; f < code.num_faces(); ++f) {
                        const int s = c.syndrome_at(static_cast<StabBasis>(b), t, f);
                        REQUIRE(s >= 0);
                        CHECK(seen.insert(s).second);
                        for (int idx : c.flags_at(static_cast<StabBasis>(b), t, f)) {
                            REQUIRE(idx >= 0);
                            CHECK(seen.insert(idx).second);
                        }
                    }
            for (int v = 0; v < c.num_data; ++v) {
                REQUIRE(c.final_index[v] >= 0);
                CHECK(seen.insert(c.final_index[v]).second);
            }
            CHECK(static_cast<int>(seen.size()) == c.num_measurements());
            // Cross-check against the measurement map itself.
            for (int m = 0; m < c.num_measurements(); ++m) {
                const auto& info = c.measurement_map[m];
                if (info.kind == MeasKind::syndrome)
                    CHECK(c.syndrome_at(info.basis, info.cycle, info.face) == m);
                if (info.kind == MeasKind::final_data) CHECK(c.final_index[info.data_qubit] == m);
            }
        }
}

TEST_CASE("gadget specs partition each face support") {
    const ColorCode code = build_color_code(CodeFamily::c488, 5);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    REQUIRE(c.gadgets.size() == static_cast<std::size_t>(code.num_faces()));
    for (int f = 0; f < code.num_faces(); ++f) {
        const GadgetSpec& g = c.gadgets[f];
        CHECK(g.face == f);
        const std::size_t w = code.faces[f].support.size();
        if (w == 8) {
            CHECK(g.kind == GadgetSpec::Kind::four_qubit);
            CHECK(g.flag_qubits.size() == 3);
        } else {
            CHECK(g.kind == GadgetSpec::Kind::two_qubit);
            CHECK(g.flag_qubits.size() == 1);
        }
        std::multiset<int> covered;
        for (const auto& run : g.data_partition) {
            CHECK_FALSE(run.empty());
            for (int v : run) covered.insert(v);
        }
        std::multiset<int> support(code.faces[f].support.begin(), code.faces[f].support.end());
        CHECK(covered == support);
    }
}

TEST_CASE("layer validation accepts every built variant") {
    for (auto family : {CodeFamily::c488, CodeFamily::c666})
        for (int d = 3; d <= 5; d += 2) {
            const ColorCode code = build_color_code(family, d);
            for (auto method : {ExtractionMethod::single_ancilla, ExtractionMethod::flagged})
                for (auto basis : {PauliType::x, PauliType::z})
                    CHECK_NOTHROW(
                        validate_layers(build_memory_experiment(code, method, basis)));
            for (auto side : {EstimationSide::cx, EstimationSide::cz})
                CHECK_NOTHROW(validate_layers(build_estimation_circuit(code, side)));
        }
}

TEST_CASE("estimation circuits run one armed half and read out noisily") {
    const ColorCode code = build_color_code(CodeFamily::c666, 5);
    for (auto side : {EstimationSide::cx, EstimationSide::cz}) {
        const Circuit c = build_estimation_circuit(code, side);
        CHECK(c.kind == CircuitKind::estimation);
        CHECK(c.first_ideal_layer == -1);
        for (int v = 0; v < c.num_data; ++v) CHECK(c.final_index[v] >= 0);
        // Both halves present: one disarmed, one armed, each with syndromes.
        for (int b = 0; b < 2; ++b)
            for (int f = 0; f < code.num_faces(); ++f)
                CHECK(c.syndrome_at(static_cast<StabBasis>(b), 1, f) >= 0);
    }
}

TEST_CASE("circuit hashing is deterministic and basis-sensitive") {
    const ColorCode code = build_color_code(CodeFamily::c488, 3);
    const Circuit a = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const Circuit b = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::z);
    const Circuit c = build_memory_experiment(code, ExtractionMethod::flagged, PauliType::x);
    CHECK(circuit_hash(a) == circuit_hash(b));
    CHECK(circuit_hash(a) != circuit_hash(c));
    CHECK(circuit_to_text(a) == circuit_to_text(b));
}
