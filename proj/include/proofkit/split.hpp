#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace proofkit {

struct EmptyName : std::runtime_error {
    EmptyName() : std::runtime_error("cannot hash an empty name") {}
};

struct MissingName : std::runtime_error {
    explicit MissingName(std::size_t line)
        : std::runtime_error("record at line " + std::to_string(line) + " has no decl_nm") {}
};

enum class Bucket { Train, Valid, Test };

const char* bucket_name(Bucket b);

// Deterministic, platform-independent name hash: the first 8 bytes of the
// SHA-256 digest of the UTF-8 bytes, read big-endian as an unsigned 64-bit n,
// mapped to (n + 0.5) / 2^64 — always strictly inside (0,1).
double hash_name(const std::string& name);

// train iff hash01 < 0.80; valid iff 0.80 <= hash01 < 0.85; test otherwise.
Bucket bucket_of01(double hash01);
Bucket bucket_of(const std::string& name);

struct SplitManifest {
    std::map<std::string, std::uint64_t> counts;        // bucket -> records
    std::map<std::string, std::uint64_t> distinctNames; // bucket -> distinct decl_nm
    std::string to_json() const;
};

// Routes JSONL records (any schema carrying a decl_nm field) into the three
// bucket streams, keeping input order within each bucket.
SplitManifest split_jsonl(std::istream& in, std::ostream& train, std::ostream& valid,
                          std::ostream& test);

} // namespace proofkit
