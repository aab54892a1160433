#pragma once

#include <stdexcept>
#include <string>

namespace anchova {

/// A request exceeded a documented size cap (subset cardinality, grid size,
/// explicit-table dimension). Maps to CLI exit code 3.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A weight table violates downward closure: some gamma_u > 0 has a subset
/// v of u with gamma_v == 0.
class compatibility_error : public std::runtime_error {
public:
    explicit compatibility_error(const std::string& what) : std::runtime_error(what) {}
};

/// A function lies outside the subspace selected by a zero weight: the
/// component on a zero-weight subset is not the zero function.
class membership_error : public std::runtime_error {
public:
    membership_error(const std::string& what, unsigned long long subset_bits)
        : std::runtime_error(what), subset_bits_(subset_bits) {}

    unsigned long long subset_bits() const noexcept { return subset_bits_; }

private:
    unsigned long long subset_bits_;
};

/// Exactly one of two norms that must vanish together came out zero; the
/// two decompositions disagree about whether the function is trivial.
class inconsistency_error : public std::runtime_error {
public:
    explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anchova
