#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qrom::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInvariant = 2;

struct AttackOptions {
    std::vector<unsigned> n{10};
    unsigned m = 1;
    std::vector<unsigned> q{8};
    std::uint64_t trials = 0; // Monte-Carlo trials per row; 0 skips the estimate
    std::uint64_t seed = 1;
    unsigned threads = 0;     // 0 = hardware concurrency
};

struct SupoOptions {
    unsigned n = 3;
    unsigned m = 1;
    unsigned depth = 4;        // adversary steps per circuit
    std::uint64_t episodes = 20;
    unsigned work = 0;         // extra adversary qubits
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct BoundsOptions {
    std::string bound;
    std::string params_file;        // key=value text; empty means none
    std::string params_inline;      // "k=v;k=v", merged after the file
    std::vector<std::string> sweep; // cartesian product of all sweeps
    std::string preset;             // "dilithium-footnote"
    std::string mode = "log";
    unsigned threads = 0;
};

struct GamesOptions {
    std::string game = "uf-cma";
    std::string scheme = "schnorr17";
    std::string params_file;   // adversary script
    std::string script_inline; // used when params_file is empty
    std::uint64_t episodes = 10;
    std::uint64_t seed = 1;
    std::size_t rma_count = 4;
    unsigned threads = 0;
};

int cmd_attack(const AttackOptions &o, std::ostream &out);
int cmd_supo_verify(const SupoOptions &o, std::ostream &out);
int cmd_bounds(const BoundsOptions &o, std::ostream &out);
int cmd_games(const GamesOptions &o, std::ostream &out);

// Full command-line entry point; errors go to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qrom::cli
