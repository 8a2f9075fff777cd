#include "colorcode/deflag.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace colorcode {

DeflagPlan build_deflag_plan(const Circuit& circuit, const ColorCode& code) {
    DeflagPlan plan;
    for (int b = 0; b < 2; ++b) {
        const auto basis = static_cast<StabBasis>(b);
        for (int cycle = 1; cycle <= circuit.cycles; ++cycle) {
            const int end_layer = circuit.half_end_layer[b][cycle - 1];
            if (end_layer < 0) continue;
            for (const auto& g : circuit.gadgets) {
                if (g.kind == GadgetSpec::Kind::single_ancilla) continue;
                DeflagRule rule;
                rule.kind = g.kind;
                rule.basis = basis;
                rule.face = g.face;
                rule.cycle = cycle;
                rule.flag_meas = circuit.flags_at(basis, cycle, g.face);
                for (int m : rule.flag_meas)
                    if (m < 0) throw std::logic_error("gadget flags missing from circuit");
                rule.targets = g.data_partition[0];
                if (g.kind == GadgetSpec::Kind::four_qubit)
                    rule.targets.insert(rule.targets.end(), g.data_partition[1].begin(),
                                        g.data_partition[1].end());
                rule.inject_layer = end_layer + 1;
                if (basis == StabBasis::x)
                    rule.flips = collect_flips_from_pauli(circuit, rule.inject_layer,
                                                          rule.targets, {});
                else
                    rule.flips = collect_flips_from_pauli(circuit, rule.inject_layer, {},
                                                          rule.targets);
                plan.rules.push_back(std::move(rule));
            }
        }
    }
    std::stable_sort(plan.rules.begin(), plan.rules.end(),
                     [](const DeflagRule& a, const DeflagRule& b) {
                         return a.inject_layer < b.inject_layer;
                     });
    for (const auto& rule : plan.rules)
        for (int q : rule.targets)
            if (q < 0 || q >= code.num_qubits())
                throw std::logic_error("deflag target outside the data block");
    return plan;
}

bool deflag_triggered(const ShotRecord& shot, const DeflagRule& rule) {
    for (int m : rule.flag_meas)
        if (!shot.outcomes[static_cast<std::size_t>(m)]) return false;
    return true;
}

ShotRecord deflag_update(const ShotRecord& shot, const DeflagRule& rule) {
    if (!deflag_triggered(shot, rule)) return shot;
    ShotRecord out = shot;
    for (std::size_t m = 0; m < out.outcomes.size(); ++m) out.outcomes[m] ^= rule.flips[m];
    return out;
}

ShotRecord apply_deflagging(const ShotRecord& shot, const DeflagPlan& plan) {
    ShotRecord out = shot;
    // Triggers read flag bits, which no rule's flip pattern touches, so the
    // original record and the running record agree on every trigger.
    for (const auto& rule : plan.rules) {
        if (!deflag_triggered(shot, rule)) continue;
        for (std::size_t m = 0; m < out.outcomes.size(); ++m) out.outcomes[m] ^= rule.flips[m];
    }
    return out;
}

std::string deflag_rules_table(const Circuit& circuit, const ColorCode& code,
                               const DeflagPlan& plan) {
    std::ostringstream out;
    out << "deflag rules: " << family_name(code.family) << " d=" << code.distance << " ("
        << plan.rules.size() << " rules)\n";
    out << "face cycle basis kind trigger_flags repair_pauli targets\n";
    for (const auto& rule : plan.rules) {
        out << rule.face << " " << rule.cycle << " " << (rule.basis == StabBasis::x ? "x" : "z")
            << " " << (rule.kind == GadgetSpec::Kind::two_qubit ? "two_qubit" : "four_qubit")
            << " ";
        for (std::size_t i = 0; i < rule.flag_meas.size(); ++i)
            out << (i ? "," : "") << rule.flag_meas[i];
        out << " " << (rule.basis == StabBasis::x ? "X" : "Z") << " ";
        for (std::size_t i = 0; i < rule.targets.size(); ++i)
            out << (i ? "," : "") << rule.targets[i];
        out << "\n";
    }
    return out.str();
}

}  // namespace colorcode
