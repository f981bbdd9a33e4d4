#pragma once

#include "proofkit/datapoint.hpp"

namespace proofkit {

enum class TaskKind {
    Proofstep,
    NextLemma,
    ProofTerm,
    SkipProof,
    TypePrediction,
    TsElab,
    PtElab,
    PremiseCls,
    LocalCls,
    Naming,
};

enum class MixGroup { Tactic, Mix1, Mix2 };

const char* task_name(TaskKind k);
const char* task_keyword(TaskKind k);
const char* mix_name(MixGroup m);
// Fixed task→mix assignment: proofstep→tactic; next lemma and proof term
// prediction→mix1; the remaining seven→mix2.
MixGroup mix_of(TaskKind k);

struct TaskExample {
    std::string prompt;
    std::string completion;
    TaskKind task = TaskKind::Proofstep;
    MixGroup mix = MixGroup::Tactic;
    std::string decl_nm;
};

// One goal of a recorded tactic state, as strings.
struct GoalStrings {
    std::vector<std::pair<std::string, std::string>> hyps;
    std::string target;
};

struct TacticStep {
    std::vector<GoalStrings> goals; // at least one
    std::string command;
};

struct TaskCodecConfig {
    bool premiseClsUppercase = false; // " <TRUE>"/" <FALSE>" instead of " True"/" False"
    bool premiseNameOnly = false;     // omit the premise type from CLASSIFYPREMISE prompts
    double negRatio = 0.0;            // premise_cls negative downsampling; 0 keeps all
    std::uint64_t negSeed = 0;        // deterministic downsampling stream
};

// Hypotheses with identical consecutive type strings are grouped
// ("P Q : Prop"); groups joined by ", "; then " ⊢ " and the target; goals
// joined by a single newline; a goal without hypotheses renders "⊢ <target>".
std::string render_tactic_state(const std::vector<GoalStrings>& goals);

TaskExample encode_proofstep(const TacticStep& step, const std::string& declName = "");

// The nine self-supervised task examples derivable from one raw datapoint
// (theorem naming is per declaration, see encode_naming).
std::vector<TaskExample> derive_tasks(const RawDatapoint& dp, const TaskCodecConfig& cfg = {});

TaskExample encode_naming(const std::string& decl_nm, const std::string& decl_tp);

// Per-datapoint tasks in input order followed by one naming example per
// distinct declaration (first-occurrence order).
std::vector<TaskExample> derive_all(const std::vector<RawDatapoint>& dps,
                                    const TaskCodecConfig& cfg = {});

std::string task_to_json(const TaskExample& ex, bool concat = false);
// Returns nullopt for rows this reader does not understand.
std::optional<TaskExample> task_from_json(const std::string& line);

} // namespace proofkit
