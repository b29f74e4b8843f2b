#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qrom/sigcore.hpp"

namespace qrom::cli {

// Runs f(i) for i in [0, count) on a pool; the first exception by index is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &f);

std::string fmt(double v);

// "# key=value" header lines.
class Header {
  public:
    explicit Header(std::string command);
    Header &add(const std::string &key, const std::string &value);
    Header &add(const std::string &key, std::uint64_t value);
    void write(std::ostream &out) const;

  private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

std::unique_ptr<sigcore::IdScheme> make_scheme(const std::string &name);

std::vector<unsigned> parse_uint_list(const std::string &text);

std::string join(const std::vector<std::string> &items, const std::string &sep);

} // namespace qrom::cli
