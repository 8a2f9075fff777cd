#include "colorcode/gf2.hpp"

namespace colorcode::gf2 {

std::vector<BitVec> kernel_basis(const std::vector<BitVec>& rows, std::size_t n) {
    // Column-reduce a working copy to RREF, tracking pivot columns.
    std::vector<BitVec> m = rows;
    std::vector<std::size_t> pivot_cols;
    std::size_t r0 = 0;
    for (std::size_t c = 0; c < n && r0 < m.size(); ++c) {
        std::size_t sel = m.size();
        for (std::size_t r = r0; r < m.size(); ++r)
            if (m[r].get(c)) { sel = r; break; }
        if (sel == m.size()) continue;
        std::swap(m[r0], m[sel]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != r0 && m[r].get(c)) m[r] ^= m[r0];
        pivot_cols.push_back(c);
        ++r0;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols) is_pivot[c] = true;

    std::vector<BitVec> ker;
    for (std::size_t fc = 0; fc < n; ++fc) {
        if (is_pivot[fc]) continue;
        BitVec v(n);
        v.set(fc, true);
        for (std::size_t pi = 0; pi < pivot_cols.size(); ++pi)
            if (m[pi].get(fc)) v.set(pivot_cols[pi], true);
        ker.push_back(std::move(v));
    }
    return ker;
}

}  // namespace colorcode::gf2
