#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

// Fixed-length intervention bit vector. Bit j set means zone j+1 is converted
// to permeable surface. The string form writes zone 1 first, so lexicographic
// string order equals the enumeration order.
class Genome {
public:
    Genome() = default;
    explicit Genome(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

    static Genome from_string(std::string_view bits);
    // Genome whose string form is the n-digit binary representation of index.
    static Genome from_index(std::uint64_t index, std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool operator[](std::size_t j) const noexcept { return bits_[j] != 0; }
    void set(std::size_t j, bool value) noexcept { bits_[j] = value ? 1 : 0; }
    void flip(std::size_t j) noexcept { bits_[j] ^= 1; }

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] bool all() const noexcept { return count() == size(); }
    [[nodiscard]] bool none() const noexcept { return count() == 0; }
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::vector<std::uint8_t> const& bits() const noexcept { return bits_; }

    friend auto operator<=>(Genome const&, Genome const&) = default;
    friend bool operator==(Genome const&, Genome const&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

[[nodiscard]] std::size_t hamming_distance(Genome const& a, Genome const& b);
[[nodiscard]] Genome operator|(Genome const& a, Genome const& b);
[[nodiscard]] Genome operator&(Genome const& a, Genome const& b);

struct GenomeHash {
    std::size_t operator()(Genome const& g) const noexcept;
};

// 2^n as a double; exact for every n the tool can enumerate.
[[nodiscard]] double search_space_size(std::size_t n) noexcept;

} // namespace bgi
