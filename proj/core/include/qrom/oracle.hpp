#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace qrom::oracle {

// Eagerly materialized function {0,1}^n -> {0,1}^m.
class OracleTable {
  public:
    OracleTable() = default;
    OracleTable(unsigned n, unsigned m, std::vector<std::uint64_t> table,
                std::uint64_t seed = 0);

    static OracleTable constant(unsigned n, unsigned m, std::uint64_t value);

    unsigned n() const { return n_; }
    unsigned m() const { return m_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t size() const { return table_.size(); }
    std::uint64_t mask() const;

    std::uint64_t operator()(std::uint64_t x) const { return lookup(x); }
    std::uint64_t lookup(std::uint64_t x) const;
    void set(std::uint64_t x, std::uint64_t y);
    const std::vector<std::uint64_t> &values() const { return table_; }

    // "QROM", u8 n, u8 m, u64 seed (LE), then 2^n entries of ceil(m/8) LE bytes.
    void write(std::ostream &os) const;
    static OracleTable read(std::istream &is);

    friend bool operator==(const OracleTable &a, const OracleTable &b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.table_ == b.table_;
    }

  private:
    unsigned n_ = 0;
    unsigned m_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> table_;
};

OracleTable sample_oracle(unsigned n, unsigned m, std::uint64_t seed);

// O with x mapped to y; every other point unchanged.
OracleTable reprogram(OracleTable O, std::uint64_t x, std::uint64_t y);

// A base table plus an ordered overlay; the last overlay entry at x wins.
class ProgrammableOracle {
  public:
    explicit ProgrammableOracle(OracleTable base) : base_(std::move(base)) {}

    const OracleTable &base() const { return base_; }
    unsigned n() const { return base_.n(); }
    unsigned m() const { return base_.m(); }

    std::uint64_t lookup(std::uint64_t x) const;
    std::optional<std::uint64_t> overlay_value(std::uint64_t x) const;

    void reprogram(std::uint64_t x, std::uint64_t y);
    // Removes every overlay entry (x, y).
    void erase(std::uint64_t x, std::uint64_t y);
    void erase_point(std::uint64_t x);

    const std::vector<std::pair<std::uint64_t, std::uint64_t>> &overlay() const {
        return overlay_;
    }
    // Extensional snapshot of lookup over the whole domain.
    OracleTable materialize() const;

  private:
    OracleTable base_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> overlay_;
};

ProgrammableOracle reprogram(ProgrammableOracle O, std::uint64_t x,
                             std::uint64_t y);

} // namespace qrom::oracle
