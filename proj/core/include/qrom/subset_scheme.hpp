#pragma once

#include "qrom/sigcore.hpp"

namespace qrom::sigcore {

// Subset-revealing test fixture (k = 2 bit pads, not a secure scheme).
// sk = s; commit draws r, rho_0, rho_1 and sets st_0 = (r, rho_0),
// st_1 = (r ^ s, rho_1), w = (r ^ rho_0, r ^ s ^ rho_1). C = {0, 1} in a
// 2-bit field, DeriveSet(c) = {c}, z = st_c, accept iff z.v ^ z.rho = w_c.
// pk is empty. Perfect special HVZK; alpha = 2^-4.
class SubsetRevealingId : public IdScheme {
  public:
    using IdScheme::commit;
    using IdScheme::keygen;

    static constexpr unsigned kBits = 2;

    std::string name() const override { return "subset2"; }
    Widths widths() const override;
    SchemeMetadata metadata() const override;

    std::uint64_t keygen_coin_count() const override { return 1u << kBits; }
    KeyPair keygen(std::uint64_t coin) const override;
    std::uint64_t commit_coin_count() const override { return 1u << (3 * kBits); }
    Commitment commit(const Bits &sk, std::uint64_t coin) const override;
    std::optional<Bits> respond(const Bits &sk, const Bits &w, const Bits &c,
                                const Bits &st) const override;
    bool verify(const Bits &pk, const Bits &w, const Bits &c, const Bits &z) const override;

    unsigned challenge_bits() const override { return 1; }
    Bits challenge(std::uint64_t k) const override;
    bool in_challenge_space(const Bits &c) const override;

    std::uint64_t sim_coin_count() const override { return 1u << (3 * kBits); }
    std::pair<Bits, Bits> special_sim(const Bits &pk, const Bits &c,
                                      std::uint64_t coin) const override;

    std::optional<std::vector<std::size_t>> derive_set(const Bits &c) const override;
    std::size_t st_component_width() const override { return 2 * kBits; }
};

} // namespace qrom::sigcore
