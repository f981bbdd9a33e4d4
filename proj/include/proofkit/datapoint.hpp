#pragma once

#include "proofkit/expr.hpp"

#include <iosfwd>

namespace proofkit {

// One record per proof subterm, in the raw-datapoint JSON schema
// (field names are frozen wire format).
struct RawDatapoint {
    std::string decl_nm;
    std::string decl_tp;
    std::vector<std::pair<std::string, std::string>> hyps;
    std::vector<bool> hyps_mask;
    std::vector<std::pair<std::string, std::string>> decl_premises;
    std::vector<bool> decl_premises_mask;
    std::string goal;
    std::string proof_term;
    std::string result; // contains exactly one PREDICT
    std::pair<std::string, std::string> next_lemma;
    bool goal_is_prop = false;
    std::string verbose_proof_term;
    std::string verbose_goal;
    std::string verbose_result;
};

struct ExtractionConfig {
    std::size_t minSubtermSize = 1; // skip subterms with fewer nodes
    bool skipSorts = true;          // skip subterms that are Sorts
    bool emitVerbose = true;
    bool dedupPremises = false; // appendix keeps duplicates; flag for ablation
};

struct SchemaError : std::runtime_error {
    SchemaError(const std::string& field_, std::size_t line_)
        : std::runtime_error("raw datapoint schema error in field '" + field_ + "' at line " +
                             std::to_string(line_)),
          field(field_), line(line_) {}
    std::string field;
    std::size_t line;
};

struct InvariantError : std::runtime_error {
    InvariantError(const std::string& what_, std::size_t line_)
        : std::runtime_error("raw datapoint invariant violated at line " +
                             std::to_string(line_) + ": " + what_),
          line(line_) {}
    std::size_t line;
};

// Named constants used by the declaration's proof term in positions that are
// visible in its pretty-printed form (heads, explicit arguments, binder
// bodies), reported innermost-first with duplicates preserved, each with its
// pretty-printed declared type.
std::vector<std::pair<std::string, std::string>> premises_of(const Declaration& decl,
                                                             const Environment& env,
                                                             bool dedup = false);

// Walks every eligible subterm of decl.value and emits one RawDatapoint per
// subterm: binder-type subtrees are never eligible, Sorts are skipped when
// cfg.skipSorts is set.
std::vector<RawDatapoint> extract_decl_datapoints(const Declaration& decl, const Environment& env,
                                                  const ExtractionConfig& cfg = {});

// Extraction over a whole environment; declarations are processed in
// parallel (one per work unit) and outputs are ordered by declaration
// orderIndex, then traversal order.
std::vector<RawDatapoint> extract_environment(const Environment& env,
                                              const ExtractionConfig& cfg = {}, int workers = 1);

// JSON-Lines bridge for pre-extracted raw datapoints. Strings are kept
// byte-identical; schema and mask/PREDICT invariants are validated.
std::vector<RawDatapoint> ingest_raw_json(std::istream& in);
std::vector<RawDatapoint> ingest_raw_json_file(const std::string& path);

std::string datapoint_to_json(const RawDatapoint& dp);
void write_raw_jsonl(std::ostream& out, const std::vector<RawDatapoint>& dps);

} // namespace proofkit
