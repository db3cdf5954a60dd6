#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace esdlab {

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string fmt_double(double x, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return std::string(buf);
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Runs fn(0..count-1), fanning out over at most `jobs` threads. Each
/// index is independent; results must be stored by index so aggregation
/// stays deterministic regardless of schedule.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(jobs);
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futures) f.get();  // rethrows worker exceptions
}

inline int default_jobs() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace esdlab
