#include "qrom_cli/common.hpp"

#include <cstdio>
#include <mutex>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "qrom/schnorr.hpp"
#include "qrom/subset_scheme.hpp"
#include "qrom/version.hpp"

namespace qrom::cli {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &f) {
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Header::Header(std::string command) : command_(std::move(command)) {}

Header &Header::add(const std::string &key, const std::string &value) {
    entries_.emplace_back(key, value);
    return *this;
}

Header &Header::add(const std::string &key, std::uint64_t value) {
    return add(key, std::to_string(value));
}

void Header::write(std::ostream &out) const {
    out << "# qrom " << kVersion << " " << command_ << "\n";
    out << "# modules: " << kModuleVersions << "\n";
    for (const auto &[k, v] : entries_)
        out << "# " << k << "=" << v << "\n";
}

std::unique_ptr<sigcore::IdScheme> make_scheme(const std::string &name) {
    if (name == "schnorr17")
        return std::make_unique<sigcore::SchnorrId>(sigcore::SchnorrGroup::toy17());
    if (name == "subset2")
        return std::make_unique<sigcore::SubsetRevealingId>();
    static const std::regex re(R"(schnorr-([0-9]+))");
    std::smatch mt;
    if (std::regex_match(name, mt, re))
        return std::make_unique<sigcore::SchnorrId>(
            sigcore::SchnorrGroup::safe_prime(static_cast<unsigned>(std::stoul(mt[1]))));
    throw std::invalid_argument("unknown scheme '" + name + "' (schnorr17, subset2, schnorr-<bits>)");
}

std::vector<unsigned> parse_uint_list(const std::string &text) {
    static const std::regex range_re(R"((2\^)?([0-9]+)\.\.(2\^)?([0-9]+))");
    std::smatch mt;
    std::vector<unsigned> out;
    if (std::regex_match(text, mt, range_re)) {
        const bool pow = mt[1].matched;
        if (pow != mt[3].matched)
            throw std::invalid_argument("range '" + text + "' mixes forms");
        const unsigned a = std::stoul(mt[2]), b = std::stoul(mt[4]);
        if (b < a || (pow && b > 31) || b - a > 100000)
            throw std::invalid_argument("bad range '" + text + "'");
        for (unsigned v = a; v <= b; ++v)
            out.push_back(pow ? (1u << v) : v);
        return out;
    }
    std::stringstream ss(text);
    static const std::regex item_re(R"((2\^)?([0-9]+))");
    for (std::string item; std::getline(ss, item, ',');) {
        if (!std::regex_match(item, mt, item_re))
            throw std::invalid_argument("bad list item '" + item + "'");
        const unsigned long v = std::stoul(mt[2]);
        if (mt[1].matched && v > 31)
            throw std::invalid_argument("power too large in '" + item + "'");
        out.push_back(mt[1].matched ? (1u << v) : static_cast<unsigned>(v));
    }
    return out;
}

std::string join(const std::vector<std::string> &items, const std::string &sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

} // namespace qrom::cli
