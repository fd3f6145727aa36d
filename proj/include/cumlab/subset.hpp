#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

namespace cumlab {

/// A subset of the coordinate set {0, ..., n-1}, stored as a bitmask.
/// Coordinates are zero-based throughout the library.
class Subset {
public:
    constexpr Subset() = default;
    constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}

    static constexpr Subset empty() { return Subset{}; }
    static constexpr Subset full(int n) { return Subset{n >= 32 ? ~0u : (1u << n) - 1u}; }
    static constexpr Subset single(int j) { return Subset{1u << j}; }
    static Subset of(std::initializer_list<int> coords)
    {
        std::uint32_t b = 0;
        for (int j : coords)
            b |= 1u << j;
        return Subset{b};
    }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool contains(int j) const { return (bits_ >> j) & 1u; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool is_empty() const { return bits_ == 0; }
    constexpr bool within(int n) const { return (bits_ & ~full(n).bits_) == 0; }
    constexpr bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }

    constexpr Subset operator|(Subset o) const { return Subset{bits_ | o.bits_}; }
    constexpr Subset operator&(Subset o) const { return Subset{bits_ & o.bits_}; }
    constexpr Subset minus(Subset o) const { return Subset{bits_ & ~o.bits_}; }
    constexpr Subset with(int j) const { return Subset{bits_ | (1u << j)}; }
    constexpr Subset without(int j) const { return Subset{bits_ & ~(1u << j)}; }

    constexpr auto operator<=>(const Subset&) const = default;

    /// Members in increasing order.
    std::vector<int> elements() const
    {
        std::vector<int> out;
        for (std::uint32_t b = bits_; b; b &= b - 1)
            out.push_back(std::countr_zero(b));
        return out;
    }

    /// Calls fn(W) for every W ⊆ *this, starting from the empty set.
    template <class Fn>
    void for_each_subset(Fn&& fn) const
    {
        std::uint32_t w = 0;
        while (true) {
            fn(Subset{w});
            if (w == bits_)
                break;
            w = (w - bits_) & bits_;
        }
    }

private:
    std::uint32_t bits_ = 0;
};

/// Every k-subset of {0..n-1}, in increasing bitmask order.
std::vector<Subset> k_subsets(int n, int k);

} // namespace cumlab
