#include "qrom/bits.hpp"

#include <stdexcept>

#include "qrom/rng.hpp"

namespace qrom {

namespace {
std::size_t words_for(std::size_t width) { return (width + 63) / 64; }

int hex_value(char ch) {
    if (ch >= '0' && ch <= '9')
        return ch - '0';
    if (ch >= 'a' && ch <= 'f')
        return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F')
        return ch - 'A' + 10;
    return -1;
}
} // namespace

BitString::BitString(std::size_t width)
    : width_(width), words_(words_for(width), 0) {}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
    BitString b(width);
    if (width < 64 && (value >> width) != 0)
        throw std::out_of_range("value does not fit in bit width");
    if (width > 0)
        b.words_[0] = value;
    return b;
}

BitString BitString::from_hex(const std::string &hex, std::size_t width) {
    BitString b(width);
    std::size_t bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
        int v = hex_value(*it);
        if (v < 0)
            throw std::invalid_argument("bad hex digit");
        for (int k = 0; k < 4; ++k, ++bit) {
            if ((v >> k) & 1) {
                if (bit >= width)
                    throw std::out_of_range("hex value exceeds bit width");
                b.set(bit, true);
            }
        }
    }
    return b;
}

BitString BitString::concat(const std::vector<BitString> &fields) {
    BitString out;
    for (const auto &f : fields)
        out.append(f);
    return out;
}

bool BitString::get(std::size_t i) const {
    if (i >= width_)
        throw std::out_of_range("bit index out of range");
    return (words_[i / 64] >> (i % 64)) & 1;
}

void BitString::set(std::size_t i, bool b) {
    if (i >= width_)
        throw std::out_of_range("bit index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (b)
        words_[i / 64] |= mask;
    else
        words_[i / 64] &= ~mask;
}

void BitString::flip(std::size_t i) {
    if (i >= width_)
        throw std::out_of_range("bit index out of range");
    words_[i / 64] ^= std::uint64_t{1} << (i % 64);
}

BitString &BitString::append(const BitString &high) {
    const std::size_t base = width_;
    width_ += high.width_;
    words_.resize(words_for(width_), 0);
    for (std::size_t i = 0; i < high.width_; ++i)
        if (high.get(i))
            set(base + i, true);
    return *this;
}

BitString &BitString::append_uint(std::uint64_t value, std::size_t width) {
    return append(from_uint(value, width));
}

BitString BitString::slice(std::size_t offset, std::size_t width) const {
    if (offset + width > width_)
        throw std::out_of_range("slice out of range");
    BitString out(width);
    for (std::size_t i = 0; i < width; ++i)
        if (get(offset + i))
            out.set(i, true);
    return out;
}

std::uint64_t BitString::to_uint() const {
    if (width_ > 64)
        throw std::out_of_range("bit string wider than 64 bits");
    return words_.empty() ? 0 : words_[0];
}

std::string BitString::hex() const {
    static const char *digits = "0123456789abcdef";
    const std::size_t nbytes = (width_ + 7) / 8;
    std::string out(nbytes * 2, '0');
    for (std::size_t byte = 0; byte < nbytes; ++byte) {
        unsigned v = 0;
        for (unsigned k = 0; k < 8; ++k) {
            std::size_t i = byte * 8 + k;
            if (i < width_ && get(i))
                v |= 1u << k;
        }
        std::size_t pos = (nbytes - 1 - byte) * 2;
        out[pos] = digits[v >> 4];
        out[pos + 1] = digits[v & 15];
    }
    return out;
}

std::uint64_t BitString::digest(std::uint64_t key) const {
    std::uint64_t h = prf64(key, width_);
    for (std::size_t i = 0; i < words_.size(); ++i)
        h = prf64(h, words_[i] ^ (i * 0x9E3779B97F4A7C15ULL));
    return h;
}

bool operator<(const BitString &a, const BitString &b) {
    if (a.width_ != b.width_)
        return a.width_ < b.width_;
    for (std::size_t i = a.words_.size(); i-- > 0;)
        if (a.words_[i] != b.words_[i])
            return a.words_[i] < b.words_[i];
    return false;
}

} // namespace qrom
