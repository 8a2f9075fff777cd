#include "colorcode/sim.hpp"

#include <stdexcept>

#include "colorcode/tableau.hpp"

namespace colorcode {

ReferenceRun reference_run(const Circuit& circuit) {
    StabilizerTableau tab(circuit.num_qubits);
    ReferenceRun ref;
    for (const auto& layer : circuit.layers) {
        for (const auto& ins : layer.instructions) {
            switch (ins.op) {
                case OpType::prepare_0: tab.prep_z(ins.q0); break;
                case OpType::prepare_plus: tab.prep_x(ins.q0); break;
                case OpType::hadamard: tab.h(ins.q0); break;
                case OpType::cnot: tab.cnot(ins.q0, ins.q1); break;
                case OpType::idle: break;
                case OpType::measure_z: {
                    auto m = tab.measure_z(ins.q0);
                    ref.outcomes.push_back(m.outcome);
                    ref.deterministic.push_back(m.deterministic);
                    break;
                }
                case OpType::measure_x: {
                    auto m = tab.measure_x(ins.q0);
                    ref.outcomes.push_back(m.outcome);
                    ref.deterministic.push_back(m.deterministic);
                    break;
                }
            }
        }
    }
    if (static_cast<int>(ref.outcomes.size()) != circuit.num_measurements())
        throw std::logic_error("measurement count mismatch against measurement_map");
    return ref;
}

int draw_pauli1(ShotRng& rng, double p) {
    const double u = rng.uniform();
    if (u >= p) return 0;
    const int k = static_cast<int>(u * 3.0 / p);
    return 1 + (k > 2 ? 2 : k);
}

int draw_pauli2(ShotRng& rng, double p) {
    const double u = rng.uniform();
    if (u >= p) return 0;
    const int k = static_cast<int>(u * 15.0 / p);
    return 1 + (k > 14 ? 14 : k);
}

namespace {

struct Frame {
    std::vector<std::uint8_t> fx, fz;
    explicit Frame(int n)
        : fx(static_cast<std::size_t>(n), 0), fz(static_cast<std::size_t>(n), 0) {}

    void pauli1(int q, int code) {
        if (code == 1 || code == 2) fx[static_cast<std::size_t>(q)] ^= 1;
        if (code == 2 || code == 3) fz[static_cast<std::size_t>(q)] ^= 1;
    }
};

// Applies one instruction's frame action; returns the outcome flip for
// measurements (-1 for non-measurements).
int step_frame(Frame& f, const Instruction& ins) {
    const auto q = static_cast<std::size_t>(ins.q0);
    switch (ins.op) {
        case OpType::prepare_0:
        case OpType::prepare_plus:
            f.fx[q] = 0;
            f.fz[q] = 0;
            return -1;
        case OpType::hadamard:
            std::swap(f.fx[q], f.fz[q]);
            return -1;
        case OpType::cnot: {
            const auto t = static_cast<std::size_t>(ins.q1);
            f.fx[t] ^= f.fx[q];
            f.fz[q] ^= f.fz[t];
            return -1;
        }
        case OpType::idle:
            return -1;
        case OpType::measure_z: {
            const int flip = f.fx[q];
            f.fz[q] = 0;
            return flip;
        }
        case OpType::measure_x: {
            const int flip = f.fz[q];
            f.fx[q] = 0;
            return flip;
        }
    }
    return -1;
}

bool layer_is_noisy(const Circuit& c, int layer) {
    return c.first_ideal_layer < 0 || layer < c.first_ideal_layer;
}

}  // namespace

ShotRecord sample_shot(const Circuit& circuit, const ReferenceRun& ref, const NoiseModel& noise,
                       std::uint64_t master_seed, std::uint64_t shot_index,
                       std::vector<FaultEvent>* fault_log) {
    ShotRng rng(master_seed, shot_index);
    Frame frame(circuit.num_qubits);
    ShotRecord shot;
    shot.outcomes = ref.outcomes;
    int meas = 0;
    for (int l = 0; l < circuit.num_layers(); ++l) {
        const bool noisy = layer_is_noisy(circuit, l) && noise.p > 0.0;
        const auto& instructions = circuit.layers[static_cast<std::size_t>(l)].instructions;
        for (int i = 0; i < static_cast<int>(instructions.size()); ++i) {
            const auto& ins = instructions[i];
            const int flip = step_frame(frame, ins);
            if (flip >= 0) {
                shot.outcomes[static_cast<std::size_t>(meas)] ^= static_cast<std::uint8_t>(flip);
                if (noisy && rng.bernoulli(noise.p)) {
                    shot.outcomes[static_cast<std::size_t>(meas)] ^= 1;
                    if (fault_log) fault_log->push_back({l, i, 0});
                }
                ++meas;
                continue;
            }
            if (!noisy) continue;
            switch (ins.op) {
                case OpType::prepare_0:
                    if (rng.bernoulli(noise.p)) {
                        frame.fx[static_cast<std::size_t>(ins.q0)] = 1;
                        if (fault_log) fault_log->push_back({l, i, 0});
                    }
                    break;
                case OpType::prepare_plus:
                    if (rng.bernoulli(noise.p)) {
                        frame.fz[static_cast<std::size_t>(ins.q0)] = 1;
                        if (fault_log) fault_log->push_back({l, i, 0});
                    }
                    break;
                case OpType::hadamard:
                case OpType::idle: {
                    const int code = draw_pauli1(rng, noise.p);
                    if (code) {
                        frame.pauli1(ins.q0, code);
                        if (fault_log) fault_log->push_back({l, i, code});
                    }
                    break;
                }
                case OpType::cnot: {
                    const int code = draw_pauli2(rng, noise.p);
                    if (code) {
                        frame.pauli1(ins.q0, code / 4);
                        frame.pauli1(ins.q1, code % 4);
                        if (fault_log) fault_log->push_back({l, i, code});
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }
    return shot;
}

namespace {

// Continues frame propagation from (layer, first_instr) to the end,
// XOR-ing measurement flips into `flips`. `meas` must already count the
// measurements before the start point.
void propagate_tail(const Circuit& circuit, int layer, int first_instr, int meas, Frame& frame,
                    std::vector<std::uint8_t>& flips) {
    for (int l = layer; l < circuit.num_layers(); ++l) {
        const auto& instructions = circuit.layers[static_cast<std::size_t>(l)].instructions;
        for (int i = (l == layer ? first_instr : 0); i < static_cast<int>(instructions.size());
             ++i) {
            const int flip = step_frame(frame, instructions[i]);
            if (flip >= 0) {
                flips[static_cast<std::size_t>(meas)] ^= static_cast<std::uint8_t>(flip);
                ++meas;
            }
        }
    }
}

int count_measurements(const Circuit& circuit, int layer, int instr_end) {
    int meas = 0;
    for (int l = 0; l <= layer && l < circuit.num_layers(); ++l) {
        const auto& instructions = circuit.layers[static_cast<std::size_t>(l)].instructions;
        const int end = l == layer ? instr_end : static_cast<int>(instructions.size());
        for (int i = 0; i < end; ++i) {
            const auto op = instructions[static_cast<std::size_t>(i)].op;
            if (op == OpType::measure_x || op == OpType::measure_z) ++meas;
        }
    }
    return meas;
}

}  // namespace

std::vector<std::uint8_t> collect_flips_from_pauli(const Circuit& circuit, int start_layer,
                                                   const std::vector<int>& xs,
                                                   const std::vector<int>& zs) {
    Frame frame(circuit.num_qubits);
    for (int q : xs) frame.fx[static_cast<std::size_t>(q)] ^= 1;
    for (int q : zs) frame.fz[static_cast<std::size_t>(q)] ^= 1;
    std::vector<std::uint8_t> flips(static_cast<std::size_t>(circuit.num_measurements()), 0);
    propagate_tail(circuit, start_layer, 0, count_measurements(circuit, start_layer, 0), frame,
                   flips);
    return flips;
}

std::vector<FaultEffect> exhaustive_single_fault_enumeration(const Circuit& circuit, double p) {
    std::vector<FaultEffect> out;
    const auto num_meas = static_cast<std::size_t>(circuit.num_measurements());
    int meas = 0;
    for (int l = 0; l < circuit.num_layers(); ++l) {
        const auto& instructions = circuit.layers[static_cast<std::size_t>(l)].instructions;
        for (int i = 0; i < static_cast<int>(instructions.size()); ++i) {
            const auto& ins = instructions[i];
            const bool is_meas = ins.op == OpType::measure_x || ins.op == OpType::measure_z;
            if (!layer_is_noisy(circuit, l)) {
                if (is_meas) ++meas;
                continue;
            }
            switch (ins.op) {
                case OpType::prepare_0:
                case OpType::prepare_plus: {
                    FaultEffect eff;
                    eff.site = {l, i, 0};
                    eff.probability = p;
                    eff.flips.assign(num_meas, 0);
                    Frame frame(circuit.num_qubits);
                    if (ins.op == OpType::prepare_0) frame.fx[static_cast<std::size_t>(ins.q0)] = 1;
                    else frame.fz[static_cast<std::size_t>(ins.q0)] = 1;
                    propagate_tail(circuit, l, i + 1, meas, frame, eff.flips);
                    out.push_back(std::move(eff));
                    break;
                }
                case OpType::hadamard:
                case OpType::idle: {
                    for (int code = 1; code <= 3; ++code) {
                        FaultEffect eff;
                        eff.site = {l, i, code};
                        eff.probability = p / 3.0;
                        eff.flips.assign(num_meas, 0);
                        Frame frame(circuit.num_qubits);
                        frame.pauli1(ins.q0, code);
                        propagate_tail(circuit, l, i + 1, meas, frame, eff.flips);
                        out.push_back(std::move(eff));
                    }
                    break;
                }
                case OpType::cnot: {
                    for (int code = 1; code <= 15; ++code) {
                        FaultEffect eff;
                        eff.site = {l, i, code};
                        eff.probability = p / 15.0;
                        eff.flips.assign(num_meas, 0);
                        Frame frame(circuit.num_qubits);
                        frame.pauli1(ins.q0, code / 4);
                        frame.pauli1(ins.q1, code % 4);
                        propagate_tail(circuit, l, i + 1, meas, frame, eff.flips);
                        out.push_back(std::move(eff));
                    }
                    break;
                }
                case OpType::measure_x:
                case OpType::measure_z: {
                    FaultEffect eff;
                    eff.site = {l, i, 0};
                    eff.probability = p;
                    eff.flips.assign(num_meas, 0);
                    eff.flips[static_cast<std::size_t>(meas)] = 1;
                    out.push_back(std::move(eff));
                    ++meas;
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace colorcode
