#pragma once

#include <string>
#include <vector>

#include "colorcode/circuit.hpp"
#include "colorcode/sim.hpp"

namespace colorcode {

// One trigger -> frame-update rule bound to a gadget instance in a circuit.
// Two-qubit gadgets trigger on their single flag and repair the data run of
// the syndrome qubit; four-qubit gadgets trigger only when all three flags
// fire and repair the runs of the syndrome qubit and the top (first) flag.
// X-basis gadgets inject X repairs, Z-basis gadgets inject Z.
struct DeflagRule {
    GadgetSpec::Kind kind;
    StabBasis basis;
    int face;
    int cycle;
    std::vector<int> flag_meas;       // measurement indices of the trigger flags
    std::vector<int> targets;         // data qubits the repair Pauli acts on
    int inject_layer;                 // first layer after the gadget's half-cycle
    std::vector<std::uint8_t> flips;  // precomputed downstream outcome flips
};

struct DeflagPlan {
    std::vector<DeflagRule> rules;  // ascending inject_layer
};

DeflagPlan build_deflag_plan(const Circuit& circuit, const ColorCode& code);

bool deflag_triggered(const ShotRecord& shot, const DeflagRule& rule);

// Applies one rule when its trigger fires. Flag bits are never altered.
ShotRecord deflag_update(const ShotRecord& shot, const DeflagRule& rule);

// Composes every triggered rule in time order. Pure frame bookkeeping: the
// returned record differs from `shot` only in downstream syndrome and final
// data bits.
ShotRecord apply_deflagging(const ShotRecord& shot, const DeflagPlan& plan);

// Human-readable audit table of every rule.
std::string deflag_rules_table(const Circuit& circuit, const ColorCode& code,
                               const DeflagPlan& plan);

}  // namespace colorcode
