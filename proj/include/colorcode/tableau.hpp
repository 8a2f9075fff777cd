#pragma once

#include <cstdint>
#include <vector>

namespace colorcode {

// Aaronson–Gottesman stabilizer tableau (destabilizer + stabilizer rows).
// Nondeterministic measurements collapse to outcome 0, so a run doubles as a
// deterministic reference trace.
class StabilizerTableau {
public:
    explicit StabilizerTableau(int n);

    int num_qubits() const { return n_; }

    void h(int q);
    void cnot(int control, int target);
    void prep_z(int q);  // collapse to |0>
    void prep_x(int q);  // collapse to |+>

    struct MeasResult {
        std::uint8_t outcome;
        bool deterministic;
    };
    MeasResult measure_z(int q);
    MeasResult measure_x(int q);

private:
    struct Row {
        std::vector<std::uint8_t> x, z;
        std::uint8_t r = 0;
    };
    void rowsum(Row& h, const Row& i) const;
    void apply_pauli_x(int q);  // conjugation: flips phases of rows with Z_q
    void apply_pauli_z(int q);

    int n_;
    std::vector<Row> rows_;  // [0, n): destabilizers; [n, 2n): stabilizers
};

}  // namespace colorcode
