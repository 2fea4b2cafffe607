#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace corpusdiff {

std::string sha256_hex(std::string_view data);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Calls fn once per non-empty line (line number is 1-based).
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(size_t, const std::string&)>& fn);

// Fisher-Yates with an explicit index draw so results do not depend on the
// standard library's std::shuffle/uniform_int_distribution implementations.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        size_t j = i + static_cast<size_t>(rng() % (v.size() - i));
        std::swap(v[i], v[j]);
    }
}

inline uint64_t rand_index(std::mt19937_64& rng, uint64_t n) {
    return rng() % n;
}

} // namespace corpusdiff
