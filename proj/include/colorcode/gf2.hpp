#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace colorcode::gf2 {

// Dense bit vector over 64-bit blocks. Fixed length after construction.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : size_(n), blocks_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const {
        return (blocks_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) blocks_[i >> 6] |= mask;
        else blocks_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { blocks_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        if (o.size_ != size_) throw std::invalid_argument("BitVec size mismatch");
        for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] ^= o.blocks_[b];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool any() const {
        for (auto b : blocks_) if (b) return true;
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto b : blocks_) c += static_cast<std::size_t>(std::popcount(b));
        return c;
    }
    // Index of the lowest set bit, or -1 when zero.
    long lowest_set() const {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (blocks_[b]) return static_cast<long>(b * 64 + std::countr_zero(blocks_[b]));
        return -1;
    }

    bool operator==(const BitVec&) const = default;

    const std::vector<std::uint64_t>& blocks() const { return blocks_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> blocks_;
};

// Incrementally maintained reduced basis of a GF(2) span. Each stored row has
// a distinct pivot (lowest set bit) and is reduced against all others.
class RowBasis {
public:
    // Returns true when v was independent of the current span.
    bool insert(BitVec v) {
        v = reduce(std::move(v));
        if (!v.any()) return false;
        for (auto& r : rows_)
            if (r.get(static_cast<std::size_t>(v.lowest_set()))) r ^= v;
        rows_.push_back(std::move(v));
        return true;
    }

    bool contains(const BitVec& v) const { return !reduce(v).any(); }

    BitVec reduce(BitVec v) const {
        for (const auto& r : rows_) {
            long p = r.lowest_set();
            if (p >= 0 && v.get(static_cast<std::size_t>(p))) v ^= r;
        }
        return v;
    }

    std::size_t rank() const { return rows_.size(); }
    const std::vector<BitVec>& rows() const { return rows_; }

private:
    std::vector<BitVec> rows_;
};

// Kernel basis of the matrix whose rows are `rows` (each of length n):
// all v with rows * v = 0, one basis vector per free column.
std::vector<BitVec> kernel_basis(const std::vector<BitVec>& rows, std::size_t n);

}  // namespace colorcode::gf2
