#include "colorcode/tableau.hpp"

#include <stdexcept>
#include <utility>

namespace colorcode {

StabilizerTableau::StabilizerTableau(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("qubit count must be positive");
    rows_.resize(2 * static_cast<std::size_t>(n));
    for (auto& row : rows_) {
        row.x.assign(static_cast<std::size_t>(n), 0);
        row.z.assign(static_cast<std::size_t>(n), 0);
    }
    for (int i = 0; i < n; ++i) {
        rows_[static_cast<std::size_t>(i)].x[static_cast<std::size_t>(i)] = 1;
        rows_[static_cast<std::size_t>(n + i)].z[static_cast<std::size_t>(i)] = 1;
    }
}

void StabilizerTableau::h(int q) {
    for (auto& row : rows_) {
        row.r ^= row.x[q] & row.z[q];
        std::swap(row.x[q], row.z[q]);
    }
}

void StabilizerTableau::cnot(int control, int target) {
    for (auto& row : rows_) {
        row.r ^= row.x[control] & row.z[target] &
                 static_cast<std::uint8_t>(row.x[target] ^ row.z[control] ^ 1);
        row.x[target] ^= row.x[control];
        row.z[control] ^= row.z[target];
    }
}

namespace {
// Phase exponent (mod 4) contribution of multiplying Pauli (x1,z1) into (x2,z2).
int phase_g(int x1, int z1, int x2, int z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return z2 - x2;
    if (x1) return z2 * (2 * x2 - 1);
    return x2 * (1 - 2 * z2);
}
}  // namespace

void StabilizerTableau::rowsum(Row& h, const Row& i) const {
    int sum = 2 * h.r + 2 * i.r;
    for (int j = 0; j < n_; ++j) sum += phase_g(i.x[j], i.z[j], h.x[j], h.z[j]);
    sum %= 4;
    if (sum < 0) sum += 4;
    h.r = static_cast<std::uint8_t>(sum / 2);
    for (int j = 0; j < n_; ++j) {
        h.x[j] ^= i.x[j];
        h.z[j] ^= i.z[j];
    }
}

void StabilizerTableau::apply_pauli_x(int q) {
    for (auto& row : rows_) row.r ^= row.z[q];
}

void StabilizerTableau::apply_pauli_z(int q) {
    for (auto& row : rows_) row.r ^= row.x[q];
}

StabilizerTableau::MeasResult StabilizerTableau::measure_z(int q) {
    int p = -1;
    for (int i = n_; i < 2 * n_; ++i)
        if (rows_[i].x[q]) { p = i; break; }

    if (p >= 0) {
        // Nondeterministic: collapse, fixing the outcome to 0.
        for (int i = 0; i < 2 * n_; ++i)
            if (i != p && rows_[i].x[q]) rowsum(rows_[i], rows_[p]);
        rows_[p - n_] = rows_[p];
        auto& stab = rows_[p];
        stab.x.assign(static_cast<std::size_t>(n_), 0);
        stab.z.assign(static_cast<std::size_t>(n_), 0);
        stab.z[q] = 1;
        stab.r = 0;
        return {0, false};
    }

    Row scratch;
    scratch.x.assign(static_cast<std::size_t>(n_), 0);
    scratch.z.assign(static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i)
        if (rows_[i].x[q]) rowsum(scratch, rows_[n_ + i]);
    return {scratch.r, true};
}

StabilizerTableau::MeasResult StabilizerTableau::measure_x(int q) {
    h(q);
    MeasResult m = measure_z(q);
    h(q);
    return m;
}

void StabilizerTableau::prep_z(int q) {
    MeasResult m = measure_z(q);
    if (m.outcome) apply_pauli_x(q);
}

void StabilizerTableau::prep_x(int q) {
    MeasResult m = measure_x(q);
    if (m.outcome) apply_pauli_z(q);
}

}  // namespace colorcode
