#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qrom {

// Fixed-width bit string. Bit 0 is the least significant bit of word 0.
// Composite tuples are built by append(), which places the new field above
// the existing bits, so the first field of a tuple occupies the low bits.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t width);

    static BitString from_uint(std::uint64_t value, std::size_t width);
    static BitString from_hex(const std::string &hex, std::size_t width);
    static BitString concat(const std::vector<BitString> &fields);

    std::size_t width() const { return width_; }
    bool get(std::size_t i) const;
    void set(std::size_t i, bool b);
    void flip(std::size_t i);

    BitString &append(const BitString &high);
    BitString &append_uint(std::uint64_t value, std::size_t width);
    BitString slice(std::size_t offset, std::size_t width) const;

    // Requires width() <= 64.
    std::uint64_t to_uint() const;
    // Low 64 bits regardless of width.
    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    // Big-endian hex of ceil(width/8) bytes.
    std::string hex() const;
    // Width-tagged digest used to index hash tables.
    std::uint64_t digest(std::uint64_t key) const;

    const std::vector<std::uint64_t> &words() const { return words_; }

    friend bool operator==(const BitString &a, const BitString &b) {
        return a.width_ == b.width_ && a.words_ == b.words_;
    }
    friend bool operator!=(const BitString &a, const BitString &b) {
        return !(a == b);
    }
    friend bool operator<(const BitString &a, const BitString &b);

  private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitStringHash {
    std::size_t operator()(const BitString &b) const {
        return static_cast<std::size_t>(b.digest(0));
    }
};

} // namespace qrom
