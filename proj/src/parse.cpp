#include "proofkit/parse.hpp"

#include "proofkit/typecheck.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace proofkit {

namespace {

enum class Tok {
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Colon, At, Arrow, Not, And, Or, Iff, Eq,
    Lambda, Pi, Ident, End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;

    static bool is_ident_byte(unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '.' || c == '\'' || c >= 0x80;
    }

    bool match(const char* seq) {
        std::size_t n = std::strlen(seq);
        if (src.compare(pos, n, seq) == 0) {
            pos += n;
            return true;
        }
        return false;
    }

    bool starts_notation(std::size_t p) const {
        static const char* seqs[] = {"→", "↔", "∧", "∨",
                                     "∀", "¬", "λ", "Π"};
        for (const char* s : seqs)
            if (src.compare(p, std::strlen(s), s) == 0) return true;
        return false;
    }

    Token next() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        std::size_t at = pos;
        if (pos >= src.size()) return {Tok::End, "", at};
        if (match("→")) return {Tok::Arrow, "→", at};
        if (match("↔")) return {Tok::Iff, "↔", at};
        if (match("∧")) return {Tok::And, "∧", at};
        if (match("∨")) return {Tok::Or, "∨", at};
        if (match("∀")) return {Tok::Pi, "∀", at};
        if (match("Π")) return {Tok::Pi, "Π", at};
        if (match("λ")) return {Tok::Lambda, "λ", at};
        if (match("¬")) return {Tok::Not, "¬", at};
        char c = src[pos];
        switch (c) {
        case '(': ++pos; return {Tok::LParen, "(", at};
        case ')': ++pos; return {Tok::RParen, ")", at};
        case '{': ++pos; return {Tok::LBrace, "{", at};
        case '}': ++pos; return {Tok::RBrace, "}", at};
        case '[': ++pos; return {Tok::LBracket, "[", at};
        case ']': ++pos; return {Tok::RBracket, "]", at};
        case ',': ++pos; return {Tok::Comma, ",", at};
        case ':': ++pos; return {Tok::Colon, ":", at};
        case '@': ++pos; return {Tok::At, "@", at};
        case '=': ++pos; return {Tok::Eq, "=", at};
        default: break;
        }
        if (is_ident_byte(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && is_ident_byte(static_cast<unsigned char>(src[pos])) &&
                   !starts_notation(pos))
                ++pos;
            return {Tok::Ident, src.substr(start, pos - start), at};
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
    }
};

std::vector<Token> tokenize(const std::string& src) {
    Lexer lx{src};
    std::vector<Token> out;
    for (;;) {
        Token t = lx.next();
        out.push_back(t);
        if (t.kind == Tok::End) break;
    }
    return out;
}

struct Parser {
    const Environment& env;
    const std::vector<ExprPtr>& locals;
    std::vector<Token> toks;
    std::size_t pos = 0;
    std::vector<Binder> stack; // enclosing binders, outermost first

    const Token& peek() const { return toks[pos]; }
    Token take() { return toks[pos++]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().offset);
        ++pos;
    }

    ExprPtr notation_const(const char* name, std::size_t offset) const {
        if (!env.find(name))
            throw ParseError(std::string("notation constant '") + name + "' is not declared",
                             offset);
        return Expr::constant(name);
    }

    ExprPtr resolve(const std::string& name, std::size_t offset) {
        if (name == "Prop") return Expr::sort(SortLevel::Prop);
        if (name == "Type") return Expr::sort(SortLevel::Type);
        if (name == kHoleName) return Expr::constant(kHoleName);
        for (std::size_t i = stack.size(); i-- > 0;) {
            if (stack[i].name == name)
                return Expr::bvar(static_cast<int>(stack.size() - 1 - i));
        }
        for (const auto& fv : locals)
            if (fv->name == name) return fv;
        if (env.find(name)) return Expr::constant(name);
        (void)offset;
        throw UnknownConstant(name);
    }

    bool at_atom_start() const {
        switch (peek().kind) {
        case Tok::LParen:
        case Tok::At:
        case Tok::Ident:
            return true;
        default:
            return false;
        }
    }

    ExprPtr parse_atom() {
        Token t = take();
        switch (t.kind) {
        case Tok::LParen: {
            ExprPtr e = parse_prec(0);
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::At: {
            Token id = take();
            if (id.kind != Tok::Ident) throw ParseError("expected identifier after '@'", id.offset);
            return resolve(id.text, id.offset);
        }
        case Tok::Ident:
            return resolve(t.text, t.offset);
        default:
            throw ParseError("expected a term", t.offset);
        }
    }

    ExprPtr parse_app() {
        ExprPtr e = parse_atom();
        while (at_atom_start()) e = Expr::app(e, parse_atom());
        return e;
    }

    struct ParsedBinder {
        std::string name;
        BinderInfo info;
        ExprPtr type;
    };

    ExprPtr parse_binder_expr(bool isLambda) {
        std::vector<ParsedBinder> binders;
        std::size_t pushed = 0;
        while (peek().kind == Tok::LParen || peek().kind == Tok::LBrace ||
               peek().kind == Tok::LBracket) {
            Tok open = take().kind;
            BinderInfo info = open == Tok::LParen    ? BinderInfo::Explicit
                              : open == Tok::LBrace ? BinderInfo::Implicit
                                                     : BinderInfo::Instance;
            std::vector<std::string> names;
            while (peek().kind == Tok::Ident) names.push_back(take().text);
            if (names.empty()) throw ParseError("expected binder name", peek().offset);
            expect(Tok::Colon, "':' in binder");
            ExprPtr type = parse_prec(0);
            Tok close = open == Tok::LParen    ? Tok::RParen
                        : open == Tok::LBrace ? Tok::RBrace
                                               : Tok::RBracket;
            expect(close, "closing binder bracket");
            for (std::size_t j = 0; j < names.size(); ++j) {
                ExprPtr ty = shift(type, static_cast<int>(j));
                binders.push_back({names[j], info, ty});
                stack.push_back({names[j], ty, info});
                ++pushed;
            }
        }
        if (binders.empty()) throw ParseError("expected at least one binder group", peek().offset);
        expect(Tok::Comma, "',' after binders");
        ExprPtr body = parse_prec(0);
        stack.resize(stack.size() - pushed);
        for (std::size_t i = binders.size(); i-- > 0;) {
            const auto& b = binders[i];
            body = isLambda ? Expr::lam(b.name, b.info, b.type, body)
                            : Expr::pi(b.name, b.info, b.type, body);
        }
        return body;
    }

    ExprPtr parse_unary() {
        switch (peek().kind) {
        case Tok::Lambda:
            take();
            return parse_binder_expr(true);
        case Tok::Pi:
            take();
            return parse_binder_expr(false);
        case Tok::Not: {
            Token t = take();
            ExprPtr arg = parse_prec(40);
            return Expr::app(notation_const("not", t.offset), arg);
        }
        default:
            return parse_app();
        }
    }

    ExprPtr infer_eq_type(const ExprPtr& lhs, std::size_t offset) {
        SubtermContext ctx;
        ctx.bs = stack;
        try {
            return infer_type(lhs, ctx, env);
        } catch (const std::exception& ex) {
            throw ParseError(std::string("cannot infer type of '=' left operand: ") + ex.what(),
                             offset);
        }
    }

    ExprPtr parse_prec(int minPrec) {
        ExprPtr lhs = parse_unary();
        for (;;) {
            Token t = peek();
            int prec;
            bool rightAssoc = true;
            switch (t.kind) {
            case Tok::Eq: prec = 50; rightAssoc = false; break;
            case Tok::And: prec = 35; break;
            case Tok::Or: prec = 30; break;
            case Tok::Arrow: prec = 25; break;
            case Tok::Iff: prec = 20; rightAssoc = false; break;
            default: return lhs;
            }
            if (prec < minPrec) return lhs;
            take();
            ExprPtr rhs = parse_prec(rightAssoc ? prec : prec + 1);
            switch (t.kind) {
            case Tok::Eq: {
                ExprPtr ty = infer_eq_type(lhs, t.offset);
                lhs = mk_app(notation_const("eq", t.offset), {ty, lhs, rhs});
                break;
            }
            case Tok::And:
                lhs = mk_app(notation_const("and", t.offset), {lhs, rhs});
                break;
            case Tok::Or:
                lhs = mk_app(notation_const("or", t.offset), {lhs, rhs});
                break;
            case Tok::Iff:
                lhs = mk_app(notation_const("iff", t.offset), {lhs, rhs});
                break;
            case Tok::Arrow:
                lhs = Expr::pi("ᾰ", BinderInfo::Explicit, lhs, shift(rhs, 1));
                break;
            default:
                break;
            }
        }
    }

    ExprPtr run() {
        ExprPtr e = parse_prec(0);
        if (peek().kind != Tok::End) throw ParseError("trailing input", peek().offset);
        return e;
    }
};

} // namespace

ExprPtr parse_expr(const std::string& src, const Environment& env,
                   const std::vector<ExprPtr>& locals) {
    Parser p{env, locals, tokenize(src), 0, {}};
    return p.run();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct PendingDecl {
    std::string text;
    std::string modulePath;
};

void add_declaration(Environment& env, const PendingDecl& pd) {
    const std::string& text = pd.text;
    bool isTheorem = text.rfind("theorem ", 0) == 0;
    bool isConstant = text.rfind("constant ", 0) == 0;
    if (!isTheorem && !isConstant)
        throw std::runtime_error("declaration must start with 'theorem' or 'constant': " + text);

    std::string header = text;
    std::string valueSrc;
    if (isTheorem) {
        std::size_t def = text.find(":=");
        if (def == std::string::npos)
            throw std::runtime_error("theorem without ':=' body: " + text);
        header = trim(text.substr(0, def));
        valueSrc = trim(text.substr(def + 2));
    }
    std::size_t kw = header.find(' ');
    std::size_t colon = header.find(':', kw);
    if (colon == std::string::npos) throw std::runtime_error("missing ':' in: " + text);
    std::string name = trim(header.substr(kw, colon - kw));
    std::string typeSrc = trim(header.substr(colon + 1));
    if (name.empty()) throw std::runtime_error("missing declaration name in: " + text);

    Declaration d;
    d.name = name;
    d.modulePath = pd.modulePath;
    d.type = parse_expr(typeSrc, env);
    if (isTheorem) d.value = parse_expr(valueSrc, env);
    check_declaration(d, env);
    env.add(std::move(d));
}

} // namespace

Environment parse_env_file(std::istream& in) {
    Environment env;
    std::string line;
    std::string module;
    PendingDecl pending;
    auto flush = [&]() {
        if (!pending.text.empty()) {
            add_declaration(env, pending);
            pending.text.clear();
        }
    };
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) {
            flush();
            continue;
        }
        if (t.rfind("--", 0) == 0) {
            std::string rest = trim(t.substr(2));
            if (rest.rfind("module ", 0) == 0) {
                flush();
                module = trim(rest.substr(7));
            }
            continue;
        }
        if (t.rfind("theorem ", 0) == 0 || t.rfind("constant ", 0) == 0) {
            flush();
            pending.text = t;
            pending.modulePath = module;
        } else {
            if (pending.text.empty())
                throw std::runtime_error("continuation line without a declaration: " + t);
            pending.text += " " + t;
        }
    }
    flush();
    return env;
}

Environment load_env_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open environment file: " + path);
    return parse_env_file(in);
}

} // namespace proofkit
