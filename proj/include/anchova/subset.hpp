#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace anchova {

/// A subset u of the coordinate index set {0, .., dim-1}, stored as a bitmask.
/// Bit j set means coordinate j belongs to u. Bitmasks are the index space of
/// every decomposition and weight table, so dim is capped at 63.
class CoordSubset {
public:
    CoordSubset() = default;

    CoordSubset(std::uint64_t bits, int dim) : bits_(bits), dim_(dim) {
        if (dim < 0 || dim > 63)
            throw std::invalid_argument("CoordSubset: dim must be in [0, 63], got " +
                                        std::to_string(dim));
        if (dim < 64 && (bits >> dim) != 0)
            throw std::invalid_argument("CoordSubset: bit set at index >= dim");
    }

    static CoordSubset empty_set(int dim) { return CoordSubset(0, dim); }

    static CoordSubset full_set(int dim) {
        return CoordSubset(dim == 0 ? 0 : ((std::uint64_t{1} << dim) - 1), dim);
    }

    /// Build from 0-based coordinate indices.
    static CoordSubset of(std::initializer_list<int> indices, int dim) {
        std::uint64_t b = 0;
        for (int j : indices) {
            if (j < 0 || j >= dim)
                throw std::invalid_argument("CoordSubset: index out of range");
            b |= std::uint64_t{1} << j;
        }
        return CoordSubset(b, dim);
    }

    std::uint64_t bits() const noexcept { return bits_; }
    int dim() const noexcept { return dim_; }
    int cardinality() const noexcept { return std::popcount(bits_); }
    bool empty() const noexcept { return bits_ == 0; }

    bool contains(int j) const noexcept { return j >= 0 && j < dim_ && ((bits_ >> j) & 1u); }
    bool subset_of(const CoordSubset& other) const noexcept {
        return (bits_ & ~other.bits_) == 0;
    }

    CoordSubset complement() const { return CoordSubset(~bits_ & full_mask(), dim_); }
    CoordSubset union_with(const CoordSubset& o) const { return CoordSubset(bits_ | o.bits_, dim_); }
    CoordSubset intersect(const CoordSubset& o) const { return CoordSubset(bits_ & o.bits_, dim_); }
    CoordSubset without(int j) const { return CoordSubset(bits_ & ~(std::uint64_t{1} << j), dim_); }
    CoordSubset with(int j) const {
        if (j < 0 || j >= dim_) throw std::invalid_argument("CoordSubset: index out of range");
        return CoordSubset(bits_ | (std::uint64_t{1} << j), dim_);
    }

    /// 0-based member indices, ascending.
    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(cardinality()));
        for (std::uint64_t b = bits_; b != 0; b &= b - 1)
            out.push_back(std::countr_zero(b));
        return out;
    }

    friend bool operator==(const CoordSubset&, const CoordSubset&) = default;

    /// "{}" or "{1,3}" with 1-based indices, matching the file formats.
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int j : indices()) {
            if (!first) s += ",";
            s += std::to_string(j + 1);
            first = false;
        }
        return s + "}";
    }

private:
    std::uint64_t full_mask() const noexcept {
        return dim_ == 0 ? 0 : ((std::uint64_t{1} << dim_) - 1);
    }

    std::uint64_t bits_ = 0;
    int dim_ = 0;
};

/// Calls body(v) for every subset v of mask, descending from mask to 0.
template <typename Body>
void for_each_subset_of(std::uint64_t mask, Body&& body) {
    std::uint64_t v = mask;
    while (true) {
        body(v);
        if (v == 0) break;
        v = (v - 1) & mask;
    }
}

}  // namespace anchova
