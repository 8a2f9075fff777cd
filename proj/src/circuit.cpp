#include "colorcode/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace colorcode {

namespace {

struct Layout {
    ExtractionMethod method;
    int total_qubits;
    std::vector<QubitRole> roles;
    std::vector<GadgetSpec> gadgets;  // per face id
};

Layout make_layout(const ColorCode& code, ExtractionMethod method) {
    Layout layout;
    layout.method = method;
    layout.roles.assign(static_cast<std::size_t>(code.num_qubits()), QubitRole::data);
    int next = code.num_qubits();
    for (const auto& face : code.faces) {
        GadgetSpec g;
        g.face = face.id;
        const auto& sup = face.support;
        g.syndrome_qubit = next++;
        layout.roles.push_back(QubitRole::syndrome);
        if (method == ExtractionMethod::single_ancilla) {
            g.kind = GadgetSpec::Kind::single_ancilla;
            g.data_partition = {sup};
        } else if (sup.size() == 8) {
            g.kind = GadgetSpec::Kind::four_qubit;
            for (int i = 0; i < 3; ++i) {
                g.flag_qubits.push_back(next++);
                layout.roles.push_back(QubitRole::flag);
            }
            for (int run = 0; run < 4; ++run)
                g.data_partition.push_back({sup[2 * run], sup[2 * run + 1]});
        } else {
            g.kind = GadgetSpec::Kind::two_qubit;
            g.flag_qubits.push_back(next++);
            layout.roles.push_back(QubitRole::flag);
            const std::size_t half = sup.size() / 2;
            g.data_partition.emplace_back(sup.begin(), sup.begin() + half);
            g.data_partition.emplace_back(sup.begin() + half, sup.end());
        }
        layout.gadgets.push_back(std::move(g));
    }
    layout.total_qubits = next;
    return layout;
}

// Bipartite edge coloring, processing edges in the given order and repairing
// along alternating paths, so the result is a pure function of the order.
std::vector<int> edge_coloring(int num_left, int num_right,
                               const std::vector<std::pair<int, int>>& edges, int colors) {
    std::vector<std::vector<int>> at_left(num_left, std::vector<int>(colors, -1));
    std::vector<std::vector<int>> at_right(num_right, std::vector<int>(colors, -1));
    std::vector<int> color(edges.size(), -1);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const auto [u, v] = edges[e];
        int cu = -1, cv = -1;
        for (int c = 0; c < colors; ++c) {
            if (cu < 0 && at_left[u][c] < 0) cu = c;
            if (cv < 0 && at_right[v][c] < 0) cv = c;
        }
        if (cu < 0 || cv < 0) throw std::logic_error("schedule conflict: no free color");
        if (at_right[v][cu] < 0) {
            color[e] = cu;
            at_left[u][cu] = e;
            at_right[v][cu] = e;
            continue;
        }
        // cu is taken at v; swap colors cu/cv along the alternating path from v.
        std::vector<int> path;
        int cur = at_right[v][cu];
        bool on_cu = true;
        while (cur >= 0) {
            path.push_back(cur);
            cur = on_cu ? at_left[edges[cur].first][cv] : at_right[edges[cur].second][cu];
            on_cu = !on_cu;
        }
        for (int pe : path) {
            at_left[edges[pe].first][color[pe]] = -1;
            at_right[edges[pe].second][color[pe]] = -1;
        }
        for (int pe : path) {
            color[pe] = color[pe] == cu ? cv : cu;
            at_left[edges[pe].first][color[pe]] = pe;
            at_right[edges[pe].second][color[pe]] = pe;
        }
        color[e] = cu;
        at_left[u][cu] = e;
        at_right[v][cu] = e;
    }
    return color;
}

struct HalfSchedule {
    // Data-interaction layers as (gadget qubit, data qubit); direction is
    // applied per basis at emission.
    std::vector<std::vector<std::pair<int, int>>> data_layers;
    // Cat-tree layers in X-gadget convention (control, target); the Z-basis
    // emission reverses both the direction and, for uncompute, the order.
    std::vector<std::vector<std::pair<int, int>>> cat_layers;
};

HalfSchedule make_schedule(const ColorCode& code, const Layout& layout) {
    HalfSchedule sched;
    std::vector<int> left_qubit;
    std::vector<std::pair<int, int>> edges;
    for (const auto& g : layout.gadgets) {
        for (std::size_t slot = 0; slot < g.data_partition.size(); ++slot) {
            const int gq = slot == 0 ? g.syndrome_qubit : g.flag_qubits[slot - 1];
            const int lidx = static_cast<int>(left_qubit.size());
            left_qubit.push_back(gq);
            for (int v : g.data_partition[slot]) edges.emplace_back(lidx, v);
        }
    }
    const int depth = layout.method == ExtractionMethod::single_ancilla
                          ? (code.family == CodeFamily::c488 ? 8 : 6)
                          : 3;
    const auto colors =
        edge_coloring(static_cast<int>(left_qubit.size()), code.num_qubits(), edges, depth);
    sched.data_layers.resize(static_cast<std::size_t>(depth));
    for (std::size_t e = 0; e < edges.size(); ++e)
        sched.data_layers[static_cast<std::size_t>(colors[e])].emplace_back(
            left_qubit[static_cast<std::size_t>(edges[e].first)], edges[e].second);

    if (layout.method == ExtractionMethod::flagged) {
        sched.cat_layers.resize(code.family == CodeFamily::c488 ? 2 : 1);
        for (const auto& g : layout.gadgets) {
            if (g.kind == GadgetSpec::Kind::two_qubit) {
                sched.cat_layers[0].emplace_back(g.syndrome_qubit, g.flag_qubits[0]);
            } else if (g.kind == GadgetSpec::Kind::four_qubit) {
                sched.cat_layers[0].emplace_back(g.syndrome_qubit, g.flag_qubits[0]);
                sched.cat_layers[1].emplace_back(g.syndrome_qubit, g.flag_qubits[1]);
                sched.cat_layers[1].emplace_back(g.flag_qubits[0], g.flag_qubits[2]);
            }
        }
    }
    return sched;
}

class Builder {
public:
    Builder(const ColorCode& code, const Layout& layout, CircuitKind kind, int cycles) {
        c.kind = kind;
        c.family = code.family;
        c.distance = code.distance;
        c.method = layout.method;
        c.num_qubits = layout.total_qubits;
        c.num_data = code.num_qubits();
        c.cycles = cycles;
        c.roles = layout.roles;
        c.gadgets = layout.gadgets;
        c.schedule_version = kScheduleVersion;
        for (int b = 0; b < 2; ++b) {
            c.syndrome_index.emplace_back(
                cycles, std::vector<int>(static_cast<std::size_t>(code.num_faces()), -1));
            auto& fb = c.flag_index.emplace_back();
            fb.resize(static_cast<std::size_t>(cycles));
            for (auto& per_face : fb) {
                per_face.resize(static_cast<std::size_t>(code.num_faces()));
                for (const auto& g : layout.gadgets)
                    per_face[static_cast<std::size_t>(g.face)]
                        .assign(g.flag_qubits.size(), -1);
            }
        }
        c.final_index.assign(static_cast<std::size_t>(code.num_qubits()), -1);
        c.half_end_layer.assign(2, std::vector<int>(static_cast<std::size_t>(cycles), -1));
    }

    // `infos` aligns with the measure instructions of `instr`, in order.
    void add_layer(std::vector<Instruction> instr, const std::vector<MeasurementInfo>& infos = {}) {
        std::vector<std::uint8_t> touched(static_cast<std::size_t>(c.num_qubits), 0);
        auto touch = [&](int q) {
            if (q < 0 || q >= c.num_qubits) throw std::logic_error("instruction references invalid qubit");
            if (touched[static_cast<std::size_t>(q)]++)
                throw std::logic_error("schedule conflict: qubit used twice in one layer");
        };
        std::size_t next_info = 0;
        for (const auto& ins : instr) {
            touch(ins.q0);
            if (ins.op == OpType::cnot) touch(ins.q1);
            if (ins.op == OpType::measure_x || ins.op == OpType::measure_z) {
                if (next_info >= infos.size()) throw std::logic_error("measurement without info");
                record(infos[next_info++]);
            }
        }
        if (next_info != infos.size()) throw std::logic_error("unused measurement info");
        for (int q = 0; q < c.num_qubits; ++q)
            if (!touched[static_cast<std::size_t>(q)]) instr.push_back({OpType::idle, q});
        c.layers.push_back({std::move(instr)});
    }

    void emit_half(const HalfSchedule& sched, StabBasis basis, int cycle, bool armed) {
        const bool xb = basis == StabBasis::x;
        std::vector<Instruction> prep;
        for (const auto& g : c.gadgets) {
            OpType sp, fp;
            if (armed) {
                sp = xb ? OpType::prepare_plus : OpType::prepare_0;
                fp = xb ? OpType::prepare_0 : OpType::prepare_plus;
            } else {
                sp = fp = xb ? OpType::prepare_0 : OpType::prepare_plus;
            }
            prep.push_back({sp, g.syndrome_qubit});
            for (int f : g.flag_qubits) prep.push_back({fp, f});
        }
        add_layer(std::move(prep));

        auto emit_cat = [&](const std::vector<std::pair<int, int>>& layer) {
            std::vector<Instruction> instr;
            for (auto [a, b] : layer)
                instr.push_back(xb ? Instruction{OpType::cnot, a, b}
                                   : Instruction{OpType::cnot, b, a});
            add_layer(std::move(instr));
        };
        for (const auto& layer : sched.cat_layers) emit_cat(layer);
        for (const auto& layer : sched.data_layers) {
            std::vector<Instruction> instr;
            for (auto [g, v] : layer)
                instr.push_back(xb ? Instruction{OpType::cnot, g, v}
                                   : Instruction{OpType::cnot, v, g});
            add_layer(std::move(instr));
        }
        for (auto it = sched.cat_layers.rbegin(); it != sched.cat_layers.rend(); ++it)
            emit_cat(*it);

        std::vector<Instruction> meas;
        std::vector<MeasurementInfo> infos;
        const OpType armed_s = xb ? OpType::measure_x : OpType::measure_z;
        const OpType disarmed_s = xb ? OpType::measure_z : OpType::measure_x;
        const OpType flag_m = xb ? OpType::measure_z : OpType::measure_x;
        for (const auto& g : c.gadgets) {
            meas.push_back({armed ? armed_s : disarmed_s, g.syndrome_qubit});
            infos.push_back({MeasKind::syndrome, g.face, basis, cycle, -1, -1});
            for (std::size_t s = 0; s < g.flag_qubits.size(); ++s) {
                meas.push_back({flag_m, g.flag_qubits[s]});
                infos.push_back({MeasKind::flag, g.face, basis, cycle, static_cast<int>(s), -1});
            }
        }
        add_layer(std::move(meas), infos);
        c.half_end_layer[static_cast<int>(basis)][cycle - 1] = c.num_layers() - 1;
    }

    void add_data_prep(OpType op) {
        std::vector<Instruction> instr;
        for (int v = 0; v < c.num_data; ++v) instr.push_back({op, v});
        add_layer(std::move(instr));
    }

    void add_final_readout(OpType op, int cycle) {
        std::vector<Instruction> instr;
        std::vector<MeasurementInfo> infos;
        for (int v = 0; v < c.num_data; ++v) {
            instr.push_back({op, v});
            infos.push_back({MeasKind::final_data, -1, StabBasis::x, cycle, -1, v});
        }
        add_layer(std::move(instr), infos);
    }

    Circuit c;

private:
    void record(const MeasurementInfo& info) {
        const int idx = c.num_measurements();
        c.measurement_map.push_back(info);
        if (info.kind == MeasKind::syndrome) {
            c.syndrome_index[static_cast<int>(info.basis)][info.cycle - 1][info.face] = idx;
        } else if (info.kind == MeasKind::flag) {
            c.flag_index[static_cast<int>(info.basis)][info.cycle - 1][info.face]
                        [static_cast<std::size_t>(info.flag_slot)] = idx;
        } else {
            c.final_index[static_cast<std::size_t>(info.data_qubit)] = idx;
        }
    }
};

Circuit build_cycle_fragment(const ColorCode& code, ExtractionMethod method, StabBasis basis) {
    const Layout layout = make_layout(code, method);
    const HalfSchedule sched = make_schedule(code, layout);
    Builder b(code, layout, CircuitKind::cycle_fragment, 1);
    b.emit_half(sched, basis, 1, true);
    validate_layers(b.c);
    return std::move(b.c);
}

}  // namespace

Circuit build_single_ancilla_cycle(const ColorCode& code, StabBasis basis) {
    return build_cycle_fragment(code, ExtractionMethod::single_ancilla, basis);
}

Circuit build_flagged_cycle(const ColorCode& code, StabBasis basis) {
    return build_cycle_fragment(code, ExtractionMethod::flagged, basis);
}

Circuit build_memory_experiment(const ColorCode& code, ExtractionMethod method,
                                PauliType decode_basis) {
    const Layout layout = make_layout(code, method);
    const HalfSchedule sched = make_schedule(code, layout);
    Builder b(code, layout, CircuitKind::memory, code.distance);
    b.c.decode_basis = decode_basis;
    b.add_data_prep(decode_basis == PauliType::x ? OpType::prepare_0 : OpType::prepare_plus);
    for (int t = 1; t <= code.distance; ++t) {
        b.emit_half(sched, StabBasis::x, t, true);
        b.emit_half(sched, StabBasis::z, t, true);
    }
    b.c.first_ideal_layer = b.c.num_layers();
    b.add_final_readout(decode_basis == PauliType::x ? OpType::measure_z : OpType::measure_x,
                        code.distance + 1);
    validate_layers(b.c);
    return std::move(b.c);
}

Circuit build_estimation_circuit(const ColorCode& code, EstimationSide side) {
    const Layout layout = make_layout(code, ExtractionMethod::flagged);
    const HalfSchedule sched = make_schedule(code, layout);
    Builder b(code, layout, CircuitKind::estimation, 1);
    b.c.side = side;
    if (side == EstimationSide::cx) {
        b.add_data_prep(OpType::prepare_0);
        b.emit_half(sched, StabBasis::x, 1, false);
        b.emit_half(sched, StabBasis::z, 1, true);
        b.add_final_readout(OpType::measure_z, 2);
    } else {
        b.add_data_prep(OpType::prepare_plus);
        b.emit_half(sched, StabBasis::z, 1, false);
        b.emit_half(sched, StabBasis::x, 1, true);
        b.add_final_readout(OpType::measure_x, 2);
    }
    validate_layers(b.c);
    return std::move(b.c);
}

void validate_layers(const Circuit& circuit) {
    for (const auto& layer : circuit.layers) {
        std::vector<std::uint8_t> touched(static_cast<std::size_t>(circuit.num_qubits), 0);
        auto touch = [&](int q) {
            if (q < 0 || q >= circuit.num_qubits)
                throw std::logic_error("instruction references invalid qubit");
            if (touched[static_cast<std::size_t>(q)]++)
                throw std::logic_error("qubit used twice in one layer");
        };
        for (const auto& ins : layer.instructions) {
            touch(ins.q0);
            if (ins.op == OpType::cnot) {
                if (ins.q1 == ins.q0) throw std::logic_error("cnot with equal qubits");
                touch(ins.q1);
            }
        }
        for (int q = 0; q < circuit.num_qubits; ++q)
            if (!touched[static_cast<std::size_t>(q)])
                throw std::logic_error("layer leaves a qubit without an instruction");
    }
}

const char* op_name(OpType op) {
    switch (op) {
        case OpType::prepare_0: return "prepare_0";
        case OpType::prepare_plus: return "prepare_plus";
        case OpType::hadamard: return "hadamard";
        case OpType::cnot: return "cnot";
        case OpType::idle: return "idle";
        case OpType::measure_x: return "measure_x";
        case OpType::measure_z: return "measure_z";
    }
    return "?";
}

std::string circuit_to_text(const Circuit& circuit) {
    std::ostringstream out;
    const char* kind = circuit.kind == CircuitKind::memory ? "memory"
                       : circuit.kind == CircuitKind::estimation ? "estimation"
                                                                 : "cycle_fragment";
    out << "circuit " << family_name(circuit.family) << " d=" << circuit.distance
        << " method=" << (circuit.method == ExtractionMethod::flagged ? "flagged" : "single_ancilla")
        << " kind=" << kind << " qubits=" << circuit.num_qubits
        << " cycles=" << circuit.cycles << " schedule=" << circuit.schedule_version << "\n";
    for (std::size_t l = 0; l < circuit.layers.size(); ++l) {
        out << "layer " << l;
        if (static_cast<int>(l) == circuit.first_ideal_layer) out << " ideal";
        out << "\n";
        for (const auto& ins : circuit.layers[l].instructions) {
            out << "  " << op_name(ins.op) << " " << ins.q0;
            if (ins.op == OpType::cnot) out << " " << ins.q1;
            out << "\n";
        }
    }
    out << "measurements\n";
    for (std::size_t m = 0; m < circuit.measurement_map.size(); ++m) {
        const auto& info = circuit.measurement_map[m];
        out << "  " << m << " ";
        if (info.kind == MeasKind::final_data) {
            out << "final_data qubit=" << info.data_qubit << " cycle=" << info.cycle;
        } else {
            out << (info.kind == MeasKind::syndrome ? "syndrome" : "flag")
                << " face=" << info.face << " basis=" << (info.basis == StabBasis::x ? "x" : "z")
                << " cycle=" << info.cycle;
            if (info.kind == MeasKind::flag) out << " slot=" << info.flag_slot;
        }
        out << "\n";
    }
    return out.str();
}

std::uint64_t circuit_hash(const Circuit& circuit) {
    const std::string text = circuit_to_text(circuit);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace colorcode
