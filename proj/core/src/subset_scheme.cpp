#include "qrom/subset_scheme.hpp"

#include <stdexcept>

namespace qrom::sigcore {

namespace {
constexpr std::uint64_t kMask = (1u << SubsetRevealingId::kBits) - 1;
constexpr unsigned K = SubsetRevealingId::kBits;
} // namespace

Widths SubsetRevealingId::widths() const {
    return Widths{0, K, 2 * K, 4 * K, 2, 2 * K};
}

SchemeMetadata SubsetRevealingId::metadata() const {
    return SchemeMetadata{1.0 / 16.0, true, true, true, 0.0, 0.0};
}

KeyPair SubsetRevealingId::keygen(std::uint64_t coin) const {
    return KeyPair{Bits(0), Bits::from_uint(coin & kMask, K)};
}

Commitment SubsetRevealingId::commit(const Bits &sk, std::uint64_t coin) const {
    const std::uint64_t s = sk.to_uint() & kMask;
    const std::uint64_t r = coin & kMask, rho0 = (coin >> K) & kMask, rho1 = (coin >> (2 * K)) & kMask;
    Bits w = Bits::from_uint(r ^ rho0, K);
    w.append_uint(r ^ s ^ rho1, K);
    Bits st = Bits::from_uint(r, K);
    st.append_uint(rho0, K);
    st.append_uint(r ^ s, K);
    st.append_uint(rho1, K);
    return Commitment{std::move(w), std::move(st)};
}

bool SubsetRevealingId::in_challenge_space(const Bits &c) const {
    return c.width() == 2 && c.to_uint() <= 1;
}

Bits SubsetRevealingId::challenge(std::uint64_t k) const {
    if (k > 1)
        throw std::out_of_range("challenge index out of range");
    return Bits::from_uint(k, 2);
}

std::optional<std::vector<std::size_t>> SubsetRevealingId::derive_set(const Bits &c) const {
    if (!in_challenge_space(c))
        return std::vector<std::size_t>{};
    return std::vector<std::size_t>{static_cast<std::size_t>(c.to_uint())};
}

std::optional<Bits> SubsetRevealingId::respond(const Bits &, const Bits &, const Bits &c,
                                               const Bits &st) const {
    if (!in_challenge_space(c))
        return std::nullopt;
    const std::size_t cw = st_component_width();
    return st.slice(c.to_uint() * cw, cw);
}

bool SubsetRevealingId::verify(const Bits &, const Bits &w, const Bits &c, const Bits &z) const {
    if (!in_challenge_space(c) || w.width() != 2 * K || z.width() != 2 * K)
        return false;
    const std::uint64_t v = z.slice(0, K).to_uint(), rho = z.slice(K, K).to_uint();
    return (v ^ rho) == w.slice(c.to_uint() * K, K).to_uint();
}

std::pair<Bits, Bits> SubsetRevealingId::special_sim(const Bits &, const Bits &c,
                                                     std::uint64_t coin) const {
    const std::uint64_t v = coin & kMask, rho = (coin >> K) & kMask, other = (coin >> (2 * K)) & kMask;
    const std::uint64_t idx = c.to_uint() & 1;
    const std::uint64_t wc = v ^ rho;
    Bits w = Bits::from_uint(idx == 0 ? wc : other, K);
    w.append_uint(idx == 0 ? other : wc, K);
    Bits z = Bits::from_uint(v, K);
    z.append_uint(rho, K);
    return {std::move(w), std::move(z)};
}

} // namespace qrom::sigcore
