#include "proofkit/split.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <set>

using json = nlohmann::ordered_json;

namespace proofkit {

const char* bucket_name(Bucket b) {
    switch (b) {
    case Bucket::Train: return "train";
    case Bucket::Valid: return "valid";
    case Bucket::Test: return "test";
    }
    return "?";
}

double hash_name(const std::string& name) {
    if (name.empty()) throw EmptyName();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(name.data(), name.size(), digest, &len, EVP_sha256(), nullptr) != 1 ||
        len < 8)
        throw std::runtime_error("SHA-256 digest failed");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n = (n << 8) | digest[i];
    return (static_cast<double>(n) + 0.5) / 18446744073709551616.0; // 2^64
}

Bucket bucket_of01(double hash01) {
    if (hash01 < 0.80) return Bucket::Train;
    if (hash01 < 0.85) return Bucket::Valid;
    return Bucket::Test;
}

Bucket bucket_of(const std::string& name) { return bucket_of01(hash_name(name)); }

std::string SplitManifest::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["counts"] = counts;
    j["distinct_names"] = distinctNames;
    return j.dump();
}

SplitManifest split_jsonl(std::istream& in, std::ostream& train, std::ostream& valid,
                          std::ostream& test) {
    SplitManifest m;
    for (Bucket b : {Bucket::Train, Bucket::Valid, Bucket::Test}) {
        m.counts[bucket_name(b)] = 0;
        m.distinctNames[bucket_name(b)] = 0;
    }
    std::map<std::string, std::set<std::string>> names;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("decl_nm") ||
            !j["decl_nm"].is_string())
            throw MissingName(lineNo);
        std::string nm = j["decl_nm"].get<std::string>();
        if (nm.empty()) throw MissingName(lineNo);
        Bucket b = bucket_of(nm);
        std::ostream& out = b == Bucket::Train ? train : b == Bucket::Valid ? valid : test;
        out << line << "\n";
        m.counts[bucket_name(b)] += 1;
        names[bucket_name(b)].insert(nm);
    }
    for (auto& [k, s] : names) m.distinctNames[k] = s.size();
    return m;
}

} // namespace proofkit
