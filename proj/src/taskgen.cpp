#include "proofkit/taskgen.hpp"

#include <nlohmann/json.hpp>

#include <set>

using json = nlohmann::ordered_json;

namespace proofkit {

const char* task_name(TaskKind k) {
    switch (k) {
    case TaskKind::Proofstep: return "proofstep";
    case TaskKind::NextLemma: return "next_lemma";
    case TaskKind::ProofTerm: return "proof_term";
    case TaskKind::SkipProof: return "skip_proof";
    case TaskKind::TypePrediction: return "type_prediction";
    case TaskKind::TsElab: return "ts_elab";
    case TaskKind::PtElab: return "pt_elab";
    case TaskKind::PremiseCls: return "premise_cls";
    case TaskKind::LocalCls: return "local_cls";
    case TaskKind::Naming: return "naming";
    }
    return "?";
}

const char* task_keyword(TaskKind k) {
    switch (k) {
    case TaskKind::Proofstep: return "PROOFSTEP";
    case TaskKind::NextLemma: return "NEXTLEMMA";
    case TaskKind::ProofTerm: return "PROOFTERM";
    case TaskKind::SkipProof: return "SKIPPROOF";
    case TaskKind::TypePrediction: return "PREDICTTYPE";
    case TaskKind::TsElab: return "ELABGOAL";
    case TaskKind::PtElab: return "ELABPROOFTERM";
    case TaskKind::PremiseCls: return "CLASSIFYPREMISE";
    case TaskKind::LocalCls: return "CLASSIFYLOCALS";
    case TaskKind::Naming: return "NAME";
    }
    return "?";
}

const char* mix_name(MixGroup m) {
    switch (m) {
    case MixGroup::Tactic: return "tactic";
    case MixGroup::Mix1: return "mix1";
    case MixGroup::Mix2: return "mix2";
    }
    return "?";
}

MixGroup mix_of(TaskKind k) {
    switch (k) {
    case TaskKind::Proofstep: return MixGroup::Tactic;
    case TaskKind::NextLemma:
    case TaskKind::ProofTerm: return MixGroup::Mix1;
    default: return MixGroup::Mix2;
    }
}

std::string render_tactic_state(const std::vector<GoalStrings>& goals) {
    std::string out;
    for (std::size_t g = 0; g < goals.size(); ++g) {
        if (g) out += "\n";
        const auto& goal = goals[g];
        std::string hypPart;
        std::size_t i = 0;
        while (i < goal.hyps.size()) {
            std::size_t j = i;
            while (j < goal.hyps.size() && goal.hyps[j].second == goal.hyps[i].second) ++j;
            if (!hypPart.empty()) hypPart += ", ";
            for (std::size_t k = i; k < j; ++k) {
                if (k > i) hypPart += " ";
                hypPart += goal.hyps[k].first;
            }
            hypPart += " : " + goal.hyps[i].second;
            i = j;
        }
        if (hypPart.empty())
            out += "⊢ " + goal.target;
        else
            out += hypPart + " ⊢ " + goal.target;
    }
    return out;
}

namespace {

TaskExample make(TaskKind k, std::string prompt, std::string completion,
                 const std::string& declName) {
    TaskExample ex;
    ex.task = k;
    ex.mix = mix_of(k);
    ex.prompt = std::move(prompt);
    ex.completion = std::move(completion);
    ex.decl_nm = declName;
    return ex;
}

// splitmix64, used for deterministic premise downsampling
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

TaskExample encode_proofstep(const TacticStep& step, const std::string& declName) {
    if (step.goals.empty()) throw std::invalid_argument("encode_proofstep: no goals");
    if (step.command.empty()) throw std::invalid_argument("encode_proofstep: empty command");
    return make(TaskKind::Proofstep, "GOAL " + render_tactic_state(step.goals) + " PROOFSTEP",
                " " + step.command, declName);
}

std::vector<TaskExample> derive_tasks(const RawDatapoint& dp, const TaskCodecConfig& cfg) {
    std::vector<TaskExample> out;
    std::string ts = render_tactic_state({{dp.hyps, dp.goal}});
    const std::string& vGoal = dp.verbose_goal.empty() ? dp.goal : dp.verbose_goal;
    const std::string& vTerm =
        dp.verbose_proof_term.empty() ? dp.proof_term : dp.verbose_proof_term;

    out.push_back(make(TaskKind::NextLemma, "GOAL " + ts + " NEXTLEMMA",
                       " apply (" + dp.next_lemma.first + ")", dp.decl_nm));
    out.push_back(make(TaskKind::ProofTerm, "GOAL " + ts + " PROOFTERM",
                       " exact (" + dp.proof_term + ")", dp.decl_nm));
    out.push_back(make(TaskKind::SkipProof, "RESULT " + dp.result + " SKIPPROOF",
                       " " + dp.proof_term, dp.decl_nm));
    out.push_back(make(TaskKind::TypePrediction, "RESULT " + dp.result + " PREDICTTYPE",
                       " " + dp.goal, dp.decl_nm));
    out.push_back(make(TaskKind::TsElab, "GOAL " + ts + " ELABGOAL",
                       " " + render_tactic_state({{dp.hyps, vGoal}}), dp.decl_nm));
    out.push_back(make(TaskKind::PtElab, "PROOFTERM " + dp.proof_term + " ELABPROOFTERM",
                       " " + vTerm, dp.decl_nm));
    std::uint64_t negCounter = 0;
    for (std::size_t j = 0; j < dp.decl_premises.size(); ++j) {
        bool positive = dp.decl_premises_mask[j];
        if (!positive && cfg.negRatio > 0.0) {
            double u = static_cast<double>(mix64(cfg.negSeed + negCounter++) >> 11) /
                       9007199254740992.0; // 2^53
            if (u >= cfg.negRatio) continue;
        }
        std::string prompt = "GOAL " + ts + " CLASSIFYPREMISE " + dp.decl_premises[j].first;
        if (!cfg.premiseNameOnly) prompt += " " + dp.decl_premises[j].second;
        std::string completion;
        if (cfg.premiseClsUppercase)
            completion = positive ? " <TRUE>" : " <FALSE>";
        else
            completion = positive ? " True" : " False";
        out.push_back(make(TaskKind::PremiseCls, std::move(prompt), std::move(completion),
                           dp.decl_nm));
    }
    std::string locals;
    for (std::size_t i = 0; i < dp.hyps.size(); ++i) {
        if (!dp.hyps_mask[i]) continue;
        if (!locals.empty()) locals += ", ";
        locals += dp.hyps[i].first;
    }
    out.push_back(make(TaskKind::LocalCls, "GOAL " + ts + " CLASSIFYLOCALS",
                       locals.empty() ? " none" : " " + locals, dp.decl_nm));
    return out;
}

TaskExample encode_naming(const std::string& decl_nm, const std::string& decl_tp) {
    if (decl_nm.empty() || decl_tp.empty())
        throw std::invalid_argument("encode_naming: empty name or type");
    return make(TaskKind::Naming, "TYPE " + decl_tp + " NAME", " " + decl_nm, decl_nm);
}

std::vector<TaskExample> derive_all(const std::vector<RawDatapoint>& dps,
                                    const TaskCodecConfig& cfg) {
    std::vector<TaskExample> out;
    std::vector<std::pair<std::string, std::string>> decls;
    std::set<std::string> seen;
    for (const auto& dp : dps) {
        auto tasks = derive_tasks(dp, cfg);
        out.insert(out.end(), tasks.begin(), tasks.end());
        if (seen.insert(dp.decl_nm).second) decls.emplace_back(dp.decl_nm, dp.decl_tp);
    }
    for (const auto& [nm, tp] : decls) out.push_back(encode_naming(nm, tp));
    return out;
}

std::string task_to_json(const TaskExample& ex, bool concat) {
    json j;
    if (concat) {
        j["text"] = ex.prompt + ex.completion;
    } else {
        j["prompt"] = ex.prompt;
        j["completion"] = ex.completion;
        j["task"] = task_name(ex.task);
        j["mix"] = mix_name(ex.mix);
        j["decl_nm"] = ex.decl_nm;
    }
    return j.dump();
}

std::optional<TaskExample> task_from_json(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    if (!j.contains("prompt") || !j.contains("completion")) return std::nullopt;
    TaskExample ex;
    ex.prompt = j["prompt"].get<std::string>();
    ex.completion = j["completion"].get<std::string>();
    if (j.contains("decl_nm")) ex.decl_nm = j["decl_nm"].get<std::string>();
    if (j.contains("task")) {
        std::string t = j["task"].get<std::string>();
        for (int k = 0; k <= static_cast<int>(TaskKind::Naming); ++k) {
            if (t == task_name(static_cast<TaskKind>(k))) {
                ex.task = static_cast<TaskKind>(k);
                break;
            }
        }
    }
    ex.mix = mix_of(ex.task);
    return ex;
}

} // namespace proofkit
