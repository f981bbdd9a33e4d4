// Throughput comparison of the scanner paths on a synthetic corpus:
// naive per-pattern find loop (serial reference), single-worker automaton,
// and the OpenMP chunk-parallel automaton.
//
// Usage: proofkit_bench [corpus-MiB] [workers...]

#include "proofkit/scan.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace proofkit;

namespace {

std::string make_corpus(std::size_t bytes, const std::vector<std::string>& patterns) {
    std::mt19937_64 rng(2024);
    static const char alphabet[] =
        "abcdefghijklmnopqrstuvwxyz ABCDEFGH(){}<>-=:`/ irrational rintro rcases apply sqrt ";
    std::string out;
    out.reserve(bytes);
    while (out.size() < bytes) out += alphabet[rng() % (sizeof(alphabet) - 1)];
    out.resize(bytes);
    for (std::size_t k = 0; k < bytes / 4096; ++k) {
        const std::string& p = patterns[rng() % patterns.size()];
        out.replace(rng() % (out.size() - p.size()), p.size(), p);
    }
    return out;
}

template <typename F>
double time_mib_per_s(std::size_t bytes, F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    return static_cast<double>(bytes) / (1024.0 * 1024.0) / secs;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t mib = argc > 1 ? static_cast<std::size_t>(std::stoul(argv[1])) : 256;
    std::vector<int> workerCounts;
    for (int i = 2; i < argc; ++i) workerCounts.push_back(std::stoi(argv[i]));
    if (workerCounts.empty()) {
#ifdef _OPENMP
        workerCounts = {1, 2, 4, omp_get_max_threads()};
#else
        workerCounts = {1};
#endif
    }

    const std::vector<std::string> patterns = {
        "{ rintro ⟨",
        "{ rcases h",
        "irrational_sqrt_two : irrational (sqrt 2)",
        "( ph -> A = C )",
        "( ph -> A R C )",
        "( sqrt ` 2 ) e/ QQ",
        "apply (rule ",
        "apply (drule ",
    };

    std::printf("building %zu MiB synthetic corpus...\n", mib);
    std::string corpus = make_corpus(mib << 20, patterns);

    std::vector<std::uint64_t> expected;
    double naive = time_mib_per_s(corpus.size(), [&] {
        expected = count_matches_naive(corpus, patterns);
    });
    std::printf("%-28s %10.1f MiB/s\n", "naive reference (serial)", naive);

    std::vector<std::uint64_t> got;
    double serial = time_mib_per_s(corpus.size(), [&] {
        got = count_matches(corpus, patterns, 1 << 20, 1);
    });
    std::printf("%-28s %10.1f MiB/s%s\n", "automaton, 1 worker", serial,
                got == expected ? "" : "  COUNT MISMATCH");

    for (int w : workerCounts) {
        if (w <= 1) continue;
        double par = time_mib_per_s(corpus.size(), [&] {
            got = count_matches(corpus, patterns, 1 << 20, w);
        });
        std::printf("automaton, %-2d workers        %10.1f MiB/s  (%.2fx)%s\n", w, par,
                    par / serial, got == expected ? "" : "  COUNT MISMATCH");
    }

    std::uint64_t total = 0;
    for (std::uint64_t c : expected) total += c;
    std::printf("total planted occurrences found: %llu\n",
                static_cast<unsigned long long>(total));
    return 0;
}
