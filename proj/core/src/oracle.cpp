#include "qrom/oracle.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qrom/rng.hpp"

namespace qrom::oracle {

namespace {
constexpr unsigned kMaxInputBits = 40;

std::uint64_t mask_for(unsigned m) {
    return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}
} // namespace

OracleTable::OracleTable(unsigned n, unsigned m, std::vector<std::uint64_t> table,
                         std::uint64_t seed)
    : n_(n), m_(m), seed_(seed), table_(std::move(table)) {
    if (n > kMaxInputBits)
        throw std::invalid_argument("oracle input width too large");
    if (m > 64)
        throw std::invalid_argument("oracle output width exceeds 64 bits");
    if (table_.size() != (std::uint64_t{1} << n))
        throw std::invalid_argument("oracle table length must be 2^n");
    const std::uint64_t mk = mask_for(m);
    for (auto v : table_)
        if ((v & ~mk) != 0)
            throw std::invalid_argument("oracle entry exceeds 2^m");
}

OracleTable OracleTable::constant(unsigned n, unsigned m, std::uint64_t value) {
    return OracleTable(n, m, std::vector<std::uint64_t>(std::uint64_t{1} << n, value));
}

std::uint64_t OracleTable::mask() const { return mask_for(m_); }

std::uint64_t OracleTable::lookup(std::uint64_t x) const {
    if (x >= table_.size())
        throw std::out_of_range("oracle point out of range");
    return table_[x];
}

void OracleTable::set(std::uint64_t x, std::uint64_t y) {
    if (x >= table_.size())
        throw std::out_of_range("oracle point out of range");
    if ((y & ~mask()) != 0)
        throw std::out_of_range("oracle value out of range");
    table_[x] = y;
}

void OracleTable::write(std::ostream &os) const {
    os.write("QROM", 4);
    const char nm[2] = {static_cast<char>(n_), static_cast<char>(m_)};
    os.write(nm, 2);
    for (int k = 0; k < 8; ++k)
        os.put(static_cast<char>((seed_ >> (8 * k)) & 0xFF));
    const unsigned bytes = (m_ + 7) / 8;
    for (auto v : table_)
        for (unsigned k = 0; k < bytes; ++k)
            os.put(static_cast<char>((v >> (8 * k)) & 0xFF));
}

OracleTable OracleTable::read(std::istream &is) {
    char magic[4];
    if (!is.read(magic, 4) || std::string(magic, 4) != "QROM")
        throw std::runtime_error("bad oracle file magic");
    const int n = is.get();
    const int m = is.get();
    if (n < 0 || m < 0)
        throw std::runtime_error("truncated oracle header");
    std::uint64_t seed = 0;
    for (int k = 0; k < 8; ++k) {
        int c = is.get();
        if (c < 0)
            throw std::runtime_error("truncated oracle header");
        seed |= static_cast<std::uint64_t>(c) << (8 * k);
    }
    if (static_cast<unsigned>(n) > kMaxInputBits || m > 64)
        throw std::runtime_error("oracle header out of range");
    const unsigned bytes = (static_cast<unsigned>(m) + 7) / 8;
    std::vector<std::uint64_t> table(std::uint64_t{1} << n);
    for (auto &v : table) {
        v = 0;
        for (unsigned k = 0; k < bytes; ++k) {
            int c = is.get();
            if (c < 0)
                throw std::runtime_error("truncated oracle body");
            v |= static_cast<std::uint64_t>(c) << (8 * k);
        }
    }
    return OracleTable(static_cast<unsigned>(n), static_cast<unsigned>(m),
                       std::move(table), seed);
}

OracleTable sample_oracle(unsigned n, unsigned m, std::uint64_t seed) {
    if (n > kMaxInputBits)
        throw std::invalid_argument("oracle input width too large");
    const std::uint64_t mk = mask_for(m);
    std::vector<std::uint64_t> table(std::uint64_t{1} << n);
    for (std::uint64_t x = 0; x < table.size(); ++x)
        table[x] = prf64(seed, x) & mk;
    return OracleTable(n, m, std::move(table), seed);
}

OracleTable reprogram(OracleTable O, std::uint64_t x, std::uint64_t y) {
    O.set(x, y);
    return O;
}

std::uint64_t ProgrammableOracle::lookup(std::uint64_t x) const {
    if (auto v = overlay_value(x))
        return *v;
    return base_.lookup(x);
}

std::optional<std::uint64_t> ProgrammableOracle::overlay_value(std::uint64_t x) const {
    for (auto it = overlay_.rbegin(); it != overlay_.rend(); ++it)
        if (it->first == x)
            return it->second;
    return std::nullopt;
}

void ProgrammableOracle::reprogram(std::uint64_t x, std::uint64_t y) {
    if (x >= base_.size())
        throw std::out_of_range("oracle point out of range");
    if ((y & ~base_.mask()) != 0)
        throw std::out_of_range("oracle value out of range");
    overlay_.emplace_back(x, y);
}

void ProgrammableOracle::erase(std::uint64_t x, std::uint64_t y) {
    std::erase_if(overlay_, [&](const auto &e) { return e.first == x && e.second == y; });
}

void ProgrammableOracle::erase_point(std::uint64_t x) {
    std::erase_if(overlay_, [&](const auto &e) { return e.first == x; });
}

OracleTable ProgrammableOracle::materialize() const {
    std::vector<std::uint64_t> table(base_.size());
    for (std::uint64_t x = 0; x < table.size(); ++x)
        table[x] = lookup(x);
    return OracleTable(n(), m(), std::move(table), base_.seed());
}

ProgrammableOracle reprogram(ProgrammableOracle O, std::uint64_t x, std::uint64_t y) {
    O.reprogram(x, y);
    return O;
}

} // namespace qrom::oracle
