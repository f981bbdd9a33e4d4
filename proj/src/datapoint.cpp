#include "proofkit/datapoint.hpp"

#include "proofkit/print.hpp"
#include "proofkit/typecheck.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

using json = nlohmann::ordered_json;

namespace proofkit {

namespace {

// Binder infos consumed by the arguments of an application spine, walking the
// head's type telescope; empty when the telescope cannot be determined.
std::vector<BinderInfo> spine_arg_infos(const ExprPtr& head, const std::vector<ExprPtr>& args,
                                        const Environment& env) {
    ExprPtr ty;
    if (head->kind == ExprKind::Const) {
        const Declaration* d = env.find(head->name);
        if (!d) return {};
        ty = d->type;
    } else if (head->kind == ExprKind::FVar) {
        ty = head->type;
    } else {
        return {};
    }
    std::vector<BinderInfo> infos;
    for (const auto& a : args) {
        ty = whnf(ty);
        if (ty->kind != ExprKind::Pi) return {};
        infos.push_back(ty->info);
        ty = instantiate(ty->body, a);
    }
    return infos;
}

// Collects constants occurring in pretty-visible positions of e (heads,
// explicit arguments, binder bodies) in pre-order; callers reverse the list
// to obtain the innermost-first premise order.
void collect_visible_consts(const ExprPtr& e, const Environment& env,
                            std::vector<std::string>& out) {
    switch (e->kind) {
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Sort:
        return;
    case ExprKind::Const:
        if (env.find(e->name)) out.push_back(e->name);
        return;
    case ExprKind::App: {
        std::vector<ExprPtr> args;
        ExprPtr head = app_spine(e, args);
        collect_visible_consts(head, env, out);
        std::vector<BinderInfo> infos = spine_arg_infos(head, args, env);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (infos.empty() || infos[i] == BinderInfo::Explicit)
                collect_visible_consts(args[i], env, out);
        }
        return;
    }
    case ExprKind::Lam:
    case ExprKind::Pi:
        collect_visible_consts(e->body, env, out);
        return;
    }
}

struct Extractor {
    const Declaration& decl;
    const Environment& env;
    const ExtractionConfig& cfg;
    std::vector<RawDatapoint> out;

    std::vector<std::pair<std::string, std::string>> premises;
    std::string decl_tp;

    // Opened binder telescope at the current position.
    std::vector<ExprPtr> openedFvars; // FVar exprs, outermost first

    void emit(const ExprPtr& opened, const std::vector<int>& path) {
        RawDatapoint dp;
        dp.decl_nm = decl.name;
        dp.decl_tp = decl_tp;

        ExprPtr goalTy = infer_type(opened, env);
        dp.goal = pretty_str(goalTy, env);
        dp.proof_term = pretty_str(opened, env);
        dp.verbose_goal = cfg.emitVerbose ? verbose_str(goalTy, env) : "";
        dp.verbose_proof_term = cfg.emitVerbose ? verbose_str(opened, env) : "";
        dp.goal_is_prop = infer_type(goalTy, env)->is_sort(SortLevel::Prop);

        ExprPtr masked = mask_at_path(decl.value, path);
        dp.result = pretty_str(masked, env);
        dp.verbose_result = cfg.emitVerbose ? verbose_str(masked, env) : "";

        for (const auto& fv : openedFvars) {
            dp.hyps.emplace_back(fv->name, pretty_str(fv->type, env));
            dp.hyps_mask.push_back(contains_fvar(opened, fv->fvarId));
        }
        dp.decl_premises = premises;
        for (const auto& p : premises)
            dp.decl_premises_mask.push_back(contains_const(opened, p.first));

        std::vector<ExprPtr> spineArgs;
        ExprPtr head = app_spine(opened, spineArgs);
        dp.next_lemma = {pretty_str(head, env), pretty_str(infer_type(head, env), env)};

        out.push_back(std::move(dp));
    }

    bool eligible(const ExprPtr& opened) const {
        if (cfg.skipSorts && opened->kind == ExprKind::Sort) return false;
        if (count_nodes(opened) < cfg.minSubtermSize) return false;
        return true;
    }

    // original: the subtree as it sits in decl.value (loose bound variables);
    // opened: the same subtree with enclosing binders opened as fvars.
    void walk(const ExprPtr& original, const ExprPtr& opened, std::vector<int>& path) {
        if (eligible(opened)) emit(opened, path);
        switch (original->kind) {
        case ExprKind::BVar:
        case ExprKind::FVar:
        case ExprKind::Const:
        case ExprKind::Sort:
            return;
        case ExprKind::App:
            path.push_back(0);
            walk(original->fn, opened->fn, path);
            path.back() = 1;
            walk(original->arg, opened->arg, path);
            path.pop_back();
            return;
        case ExprKind::Lam:
        case ExprKind::Pi: {
            // binder-type subtrees are not eligible datapoints
            ExprPtr fv = Expr::fvar(opened->name, opened->type);
            openedFvars.push_back(fv);
            path.push_back(1);
            walk(original->body, instantiate(opened->body, fv), path);
            path.pop_back();
            openedFvars.pop_back();
            return;
        }
        }
    }
};

} // namespace

std::vector<std::pair<std::string, std::string>> premises_of(const Declaration& decl,
                                                             const Environment& env, bool dedup) {
    if (!decl.value) throw std::runtime_error("premises_of: declaration has no value");
    std::vector<std::string> names;
    collect_visible_consts(decl.value, env, names);
    std::reverse(names.begin(), names.end());
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (dedup && !seen.insert(n).second) continue;
        out.emplace_back(n, pretty_str(env.get(n).type, env));
    }
    return out;
}

std::vector<RawDatapoint> extract_decl_datapoints(const Declaration& decl, const Environment& env,
                                                  const ExtractionConfig& cfg) {
    if (!decl.value) throw std::runtime_error("extract_decl_datapoints: no proof term");
    Extractor ex{decl, env, cfg, {}, premises_of(decl, env, cfg.dedupPremises),
                 pretty_str(decl.type, env), {}};
    std::vector<int> path;
    ex.walk(decl.value, decl.value, path);
    return ex.out;
}

std::vector<RawDatapoint> extract_environment(const Environment& env, const ExtractionConfig& cfg,
                                              int workers) {
    std::vector<const Declaration*> targets;
    for (const auto& d : env.decls())
        if (d.value) targets.push_back(&d);
    std::vector<std::vector<RawDatapoint>> parts(targets.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : 1)
    for (long i = 0; i < static_cast<long>(targets.size()); ++i)
        parts[static_cast<std::size_t>(i)] =
            extract_decl_datapoints(*targets[static_cast<std::size_t>(i)], env, cfg);
    std::vector<RawDatapoint> out;
    for (auto& p : parts)
        for (auto& dp : p) out.push_back(std::move(dp));
    return out;
}

namespace {

std::size_t count_token(const std::string& s, const std::string& tok) {
    std::size_t n = 0;
    for (std::size_t p = s.find(tok); p != std::string::npos; p = s.find(tok, p + tok.size()))
        ++n;
    return n;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const json& j, const char* field,
                                                             std::size_t line) {
    if (!j.is_array()) throw SchemaError(field, line);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& it : j) {
        if (!it.is_array() || it.size() != 2 || !it[0].is_string() || !it[1].is_string())
            throw SchemaError(field, line);
        out.emplace_back(it[0].get<std::string>(), it[1].get<std::string>());
    }
    return out;
}

std::vector<bool> parse_mask(const json& j, const char* field, std::size_t line) {
    if (!j.is_array()) throw SchemaError(field, line);
    std::vector<bool> out;
    for (const auto& it : j) {
        if (!it.is_boolean()) throw SchemaError(field, line);
        out.push_back(it.get<bool>());
    }
    return out;
}

const char* kFields[] = {"decl_nm", "decl_tp", "hyps", "hyps_mask", "decl_premises",
                         "decl_premises_mask", "goal", "proof_term", "result", "next_lemma",
                         "goal_is_prop", "verbose_proof_term", "verbose_goal", "verbose_result"};

RawDatapoint parse_datapoint(const json& j, std::size_t line) {
    for (const char* f : kFields)
        if (!j.contains(f)) throw SchemaError(f, line);
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(std::begin(kFields), std::end(kFields),
                         [&](const char* f) { return key == f; }) == std::end(kFields))
            throw SchemaError(key, line);
    }
    RawDatapoint dp;
    auto str = [&](const char* f) {
        if (!j[f].is_string()) throw SchemaError(f, line);
        return j[f].get<std::string>();
    };
    dp.decl_nm = str("decl_nm");
    dp.decl_tp = str("decl_tp");
    dp.hyps = parse_pairs(j["hyps"], "hyps", line);
    dp.hyps_mask = parse_mask(j["hyps_mask"], "hyps_mask", line);
    dp.decl_premises = parse_pairs(j["decl_premises"], "decl_premises", line);
    dp.decl_premises_mask = parse_mask(j["decl_premises_mask"], "decl_premises_mask", line);
    dp.goal = str("goal");
    dp.proof_term = str("proof_term");
    dp.result = str("result");
    {
        const json& nl = j["next_lemma"];
        if (!nl.is_array() || nl.size() != 2 || !nl[0].is_string() || !nl[1].is_string())
            throw SchemaError("next_lemma", line);
        dp.next_lemma = {nl[0].get<std::string>(), nl[1].get<std::string>()};
    }
    if (!j["goal_is_prop"].is_boolean()) throw SchemaError("goal_is_prop", line);
    dp.goal_is_prop = j["goal_is_prop"].get<bool>();
    dp.verbose_proof_term = str("verbose_proof_term");
    dp.verbose_goal = str("verbose_goal");
    dp.verbose_result = str("verbose_result");

    if (dp.hyps_mask.size() != dp.hyps.size())
        throw InvariantError("hyps_mask length differs from hyps", line);
    if (dp.decl_premises_mask.size() != dp.decl_premises.size())
        throw InvariantError("decl_premises_mask length differs from decl_premises", line);
    if (count_token(dp.result, kHoleName) != 1)
        throw InvariantError("result must contain PREDICT exactly once", line);
    if (!dp.verbose_result.empty() && count_token(dp.verbose_result, kHoleName) != 1)
        throw InvariantError("verbose_result must contain PREDICT exactly once", line);
    return dp;
}

} // namespace

std::vector<RawDatapoint> ingest_raw_json(std::istream& in) {
    std::vector<RawDatapoint> out;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("(malformed JSON: ") + e.what() + ")", lineNo);
        }
        out.push_back(parse_datapoint(j, lineNo));
    }
    return out;
}

std::vector<RawDatapoint> ingest_raw_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open raw datapoint file: " + path);
    return ingest_raw_json(in);
}

std::string datapoint_to_json(const RawDatapoint& dp) {
    json j;
    j["decl_nm"] = dp.decl_nm;
    j["decl_tp"] = dp.decl_tp;
    json hyps = json::array();
    for (const auto& h : dp.hyps) hyps.push_back({h.first, h.second});
    j["hyps"] = std::move(hyps);
    j["hyps_mask"] = dp.hyps_mask;
    json prem = json::array();
    for (const auto& p : dp.decl_premises) prem.push_back({p.first, p.second});
    j["decl_premises"] = std::move(prem);
    j["decl_premises_mask"] = dp.decl_premises_mask;
    j["goal"] = dp.goal;
    j["proof_term"] = dp.proof_term;
    j["result"] = dp.result;
    j["next_lemma"] = {dp.next_lemma.first, dp.next_lemma.second};
    j["goal_is_prop"] = dp.goal_is_prop;
    j["verbose_proof_term"] = dp.verbose_proof_term;
    j["verbose_goal"] = dp.verbose_goal;
    j["verbose_result"] = dp.verbose_result;
    return j.dump();
}

void write_raw_jsonl(std::ostream& out, const std::vector<RawDatapoint>& dps) {
    for (const auto& dp : dps) out << datapoint_to_json(dp) << "\n";
}

} // namespace proofkit
