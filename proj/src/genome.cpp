#include "bgi/genome.hpp"

#include <algorithm>
#include <cmath>

#include "bgi/errors.hpp"

namespace bgi {

Genome Genome::from_string(std::string_view bits)
{
    if (bits.empty()) {
        throw ParseError("empty genome");
    }
    Genome g(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        char const c = bits[j];
        if (c != '0' && c != '1') {
            throw ParseError("invalid genome '" + std::string(bits) + "': character " + std::to_string(j) +
                             " is not 0 or 1");
        }
        g.bits_[j] = c == '1' ? 1 : 0;
    }
    return g;
}

Genome Genome::from_index(std::uint64_t index, std::size_t n)
{
    Genome g(n);
    for (std::size_t j = 0; j < n && j < 64; ++j) {
        g.bits_[n - 1 - j] = static_cast<std::uint8_t>((index >> j) & 1U);
    }
    return g;
}

std::size_t Genome::count() const noexcept
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Genome::to_string() const
{
    std::string s(bits_.size(), '0');
    for (std::size_t j = 0; j < bits_.size(); ++j) {
        if (bits_[j] != 0) {
            s[j] = '1';
        }
    }
    return s;
}

std::size_t hamming_distance(Genome const& a, Genome const& b)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("hamming_distance: genome lengths differ");
    }
    std::size_t d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        d += a[j] != b[j] ? 1 : 0;
    }
    return d;
}

namespace {
template <typename Op>
Genome combine(Genome const& a, Genome const& b, Op op)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("genome lengths differ");
    }
    Genome g(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        g.set(j, op(a[j], b[j]));
    }
    return g;
}
} // namespace

Genome operator|(Genome const& a, Genome const& b)
{
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

Genome operator&(Genome const& a, Genome const& b)
{
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

std::size_t GenomeHash::operator()(Genome const& g) const noexcept
{
    // FNV-1a over the bits, folded eight at a time.
    std::uint64_t h = 1469598103934665603ULL;
    auto const& bits = g.bits();
    for (std::size_t j = 0; j < bits.size(); j += 8) {
        std::uint64_t byte = 0;
        for (std::size_t k = j; k < std::min(j + 8, bits.size()); ++k) {
            byte = (byte << 1) | bits[k];
        }
        h = (h ^ byte) * 1099511628211ULL;
    }
    h = (h ^ bits.size()) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
}

double search_space_size(std::size_t n) noexcept
{
    return std::ldexp(1.0, static_cast<int>(n));
}

} // namespace bgi
