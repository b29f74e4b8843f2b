#include "qrom/schnorr.hpp"

#include <stdexcept>

namespace qrom::sigcore {

namespace {
__extension__ typedef unsigned __int128 u128;
} // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % mod);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1)
            r = mulmod(r, base, mod);
        base = mulmod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

unsigned bit_length(std::uint64_t v) {
    unsigned b = 0;
    while (v) {
        ++b;
        v >>= 1;
    }
    return b;
}

SchnorrGroup SchnorrGroup::make(std::uint64_t P, std::uint64_t q, std::uint64_t g) {
    if (P >= (std::uint64_t{1} << 62))
        throw std::invalid_argument("modulus must be below 2^62");
    if (!is_prime(P))
        throw std::invalid_argument("modulus is not prime");
    if (!is_prime(q))
        throw std::invalid_argument("group order is not prime");
    if ((P - 1) % q != 0)
        throw std::invalid_argument("group order does not divide P - 1");
    if (g <= 1 || g >= P || powmod(g, q, P) != 1)
        throw std::invalid_argument("generator does not have order q");
    return SchnorrGroup{P, q, g};
}

namespace {
std::uint64_t find_generator(std::uint64_t P, std::uint64_t q) {
    const std::uint64_t cof = (P - 1) / q;
    for (std::uint64_t h = 2; h < P; ++h) {
        const std::uint64_t g = powmod(h, cof, P);
        if (g != 1)
            return g;
    }
    throw std::invalid_argument("no generator found");
}
} // namespace

SchnorrGroup SchnorrGroup::toy17() { return make(103, 17, find_generator(103, 17)); }

SchnorrGroup SchnorrGroup::safe_prime(unsigned bits) {
    if (bits < 8 || bits > 62)
        throw std::invalid_argument("safe-prime search supports 8..62 bits");
    std::uint64_t q = ((std::uint64_t{1} << (bits - 1)) - 1) | 1;
    for (; q > 2; q -= 2) {
        if (is_prime(q) && is_prime(2 * q + 1))
            return make(2 * q + 1, q, find_generator(2 * q + 1, q));
    }
    throw std::invalid_argument("no safe prime found");
}

SchnorrId::SchnorrId(SchnorrGroup group) : G_(group) {
    cbits_ = bit_length(G_.q) - 1; // 2^cbits <= q - 1 since q is an odd prime
    if ((std::uint64_t{1} << cbits_) >= G_.q)
        --cbits_;
    const std::size_t pw = bit_length(G_.P - 1), qw = bit_length(G_.q - 1);
    widths_ = Widths{pw, qw, pw, qw, cbits_ + 1, qw};
}

std::string SchnorrId::name() const { return "schnorr" + std::to_string(G_.q); }

SchemeMetadata SchnorrId::metadata() const {
    return SchemeMetadata{1.0 / static_cast<double>(G_.q), false, true, true, 0.0, 0.0};
}

KeyPair SchnorrId::keygen(std::uint64_t coin) const {
    const std::uint64_t sk = 1 + coin % (G_.q - 1);
    return KeyPair{Bits::from_uint(powmod(G_.g, sk, G_.P), widths_.pk),
                   Bits::from_uint(sk, widths_.sk)};
}

Commitment SchnorrId::commit(const Bits &, std::uint64_t coin) const {
    const std::uint64_t a = coin % G_.q;
    return Commitment{Bits::from_uint(powmod(G_.g, a, G_.P), widths_.w),
                      Bits::from_uint(a, widths_.st)};
}

bool SchnorrId::in_challenge_space(const Bits &c) const {
    if (c.width() != widths_.c)
        return false;
    const std::uint64_t v = c.to_uint();
    return v >= 1 && v <= (std::uint64_t{1} << cbits_);
}

Bits SchnorrId::challenge(std::uint64_t k) const {
    if (k >= challenge_count())
        throw std::out_of_range("challenge index out of range");
    return Bits::from_uint(k + 1, widths_.c);
}

std::optional<Bits> SchnorrId::respond(const Bits &sk, const Bits &, const Bits &c,
                                       const Bits &st) const {
    if (!in_challenge_space(c))
        return std::nullopt;
    const std::uint64_t s = sk.to_uint() % G_.q;
    const std::uint64_t a = st.to_uint() % G_.q;
    const std::uint64_t z = (a + mulmod(c.to_uint(), s, G_.q)) % G_.q;
    return Bits::from_uint(z, widths_.z);
}

bool SchnorrId::verify(const Bits &pk, const Bits &w, const Bits &c, const Bits &z) const {
    if (!in_challenge_space(c) || pk.width() != widths_.pk || w.width() != widths_.w ||
        z.width() != widths_.z)
        return false;
    const std::uint64_t y = pk.to_uint(), wv = w.to_uint(), zv = z.to_uint();
    if (y == 0 || y >= G_.P || wv == 0 || wv >= G_.P || zv >= G_.q)
        return false;
    return powmod(G_.g, zv, G_.P) == mulmod(wv, powmod(y, c.to_uint(), G_.P), G_.P);
}

std::pair<Bits, Bits> SchnorrId::special_sim(const Bits &pk, const Bits &c,
                                             std::uint64_t coin) const {
    const std::uint64_t z = coin % G_.q;
    const std::uint64_t e = (G_.q - c.to_uint() % G_.q) % G_.q;
    const std::uint64_t w = mulmod(powmod(G_.g, z, G_.P), powmod(pk.to_uint(), e, G_.P), G_.P);
    return {Bits::from_uint(w, widths_.w), Bits::from_uint(z, widths_.z)};
}

std::optional<std::uint64_t> SchnorrId::dlog(std::uint64_t y) const {
    if (G_.q > (std::uint64_t{1} << 24))
        throw std::invalid_argument("brute-force discrete log limited to toy groups");
    std::uint64_t acc = 1;
    for (std::uint64_t k = 0; k < G_.q; ++k) {
        if (acc == y)
            return k;
        acc = mulmod(acc, G_.g, G_.P);
    }
    return std::nullopt;
}

} // namespace qrom::sigcore
