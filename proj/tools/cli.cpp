#include "cli.hpp"

#include <cctype>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace strata::cli {

using json = nlohmann::json;

namespace {

class Scanner {
public:
    explicit Scanner(const std::string& t) : text_(t) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    long read_int() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer");
        }
        try {
            return std::stol(text_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("integer out of range");
        }
    }
    std::string read_word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }
    size_t pos() const { return pos_; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("position " + std::to_string(pos_ + 1) + " in \"" + text_ + "\": " + msg);
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
};

int to_int(Scanner& s, long v) {
    if (v < INT32_MIN || v > INT32_MAX) s.fail("integer out of range");
    return static_cast<int>(v);
}

}  // namespace

std::vector<std::vector<int>> parse_signature(const std::string& text) {
    Scanner s(text);
    std::vector<std::vector<int>> out(1);
    if (s.done()) s.fail("empty signature");
    while (true) {
        out.back().push_back(to_int(s, s.read_int()));
        if (s.done()) break;
        if (s.accept(';'))
            out.emplace_back();
        else
            s.expect(',');
    }
    return out;
}

std::vector<ResidueCondition> parse_residues(const std::string& text) {
    Scanner s(text);
    std::vector<ResidueCondition> out;
    if (s.done()) return out;
    while (true) {
        s.expect('[');
        ResidueCondition rc;
        do {
            s.expect('(');
            int c = to_int(s, s.read_int());
            s.expect(',');
            int i = to_int(s, s.read_int());
            s.expect(')');
            rc.push_back({c, i});
        } while (s.accept(','));
        s.expect(']');
        out.push_back(rc);
        if (s.done()) break;
        s.expect(';');
    }
    return out;
}

Profile parse_profile(const std::string& text) {
    Scanner s(text);
    Profile p;
    if (s.done()) return p;
    while (true) {
        p.push_back(to_int(s, s.read_int()));
        if (s.done()) break;
        s.expect(',');
    }
    return p;
}

// ---------------------------------------------------------------- expressions

namespace {

struct Value {
    bool scalar = true;
    Q q = 0;
    TautClass t;
};

class ExprParser {
public:
    ExprParser(StratumPtr X, const std::string& text) : X_(X), s_(text) {}

    TautClass parse() {
        Value v = expr();
        if (!s_.done()) s_.fail("unexpected input");
        return as_class(v);
    }

private:
    TautClass as_class(const Value& v) { return v.scalar ? TautClass::one(X_) * v.q : v.t; }

    Value add(const Value& a, const Value& b) {
        if (a.scalar && b.scalar) return {true, a.q + b.q, {}};
        return {false, 0, as_class(a) + as_class(b)};
    }
    Value mul(const Value& a, const Value& b) {
        if (a.scalar && b.scalar) return {true, a.q * b.q, {}};
        if (a.scalar) return {false, 0, b.t * a.q};
        if (b.scalar) return {false, 0, a.t * b.q};
        return {false, 0, a.t * b.t};
    }
    Value neg(const Value& a) { return a.scalar ? Value{true, -a.q, {}} : Value{false, 0, -a.t}; }

    Value expr() {
        Value v = term();
        while (true) {
            if (s_.accept('+'))
                v = add(v, term());
            else if (s_.accept('-'))
                v = add(v, neg(term()));
            else
                return v;
        }
    }
    Value term() {
        Value v = factor();
        while (s_.accept('*')) v = mul(v, factor());
        return v;
    }
    // right associative
    Value factor() {
        Value base = unary();
        if (!s_.accept('^')) return base;
        Value e = factor();
        if (!e.scalar || e.q.get_den() != 1 || e.q < 0 || e.q > 1000)
            s_.fail("exponent must be a small non-negative integer");
        int k = static_cast<int>(e.q.get_num().get_si());
        if (base.scalar) {
            Q r = 1;
            for (int i = 0; i < k; ++i) r *= base.q;
            return {true, r, {}};
        }
        return {false, 0, pow(base.t, k)};
    }
    Value unary() {
        if (s_.accept('-')) return neg(unary());
        if (s_.accept('+')) return unary();
        return primary();
    }
    Value primary() {
        char c = s_.peek();
        if (c == '(') {
            s_.expect('(');
            Value v = expr();
            s_.expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = s_.read_int();
            mpz_class den = 1;
            if (s_.accept('/')) {
                den = s_.read_int();
                if (den <= 0) s_.fail("bad denominator");
            }
            Q q(num, den);
            q.canonicalize();
            return {true, q, {}};
        }
        std::string w = s_.read_word();
        if (w == "xi") return {false, 0, xi(X_)};
        if (w == "psi") {
            s_.expect('(');
            int leg = to_int(s_, s_.read_int());
            s_.expect(')');
            if (leg < 1 || leg > X_->n()) s_.fail("no point " + std::to_string(leg));
            return {false, 0, psi(X_, leg)};
        }
        if (w == "D") {
            s_.expect('(');
            Profile p;
            int comp = 0;
            if (s_.peek() != ')' && s_.peek() != ';') {
                do p.push_back(to_int(s_, s_.read_int()));
                while (s_.accept(','));
            }
            if (s_.accept(';')) comp = to_int(s_, s_.read_int());
            s_.expect(')');
            for (int b : p)
                if (b < 0 || b >= static_cast<int>(bics(X_).size())) s_.fail("no BIC " + std::to_string(b));
            auto cp = canonical_profile(X_, p);
            if (!cp || comp < 0 || comp >= static_cast<int>(lookup(X_, *cp).size()))
                s_.fail("unknown profile " + to_string(EnhancedProfile{p, comp}));
            return {false, 0, TautClass::from_graph(X_, EnhancedProfile{*cp, comp})};
        }
        s_.fail(w.empty() ? "expected a term" : "unknown name '" + w + "'");
    }

    StratumPtr X_;
    Scanner s_;
};

}  // namespace

TautClass parse_expression(StratumPtr X, const std::string& text) { return ExprParser(X, text).parse(); }

// ---------------------------------------------------------------- commands

namespace {

struct Options {
    std::string sig, res, format = "table", cache_dir;
    bool cache_dir_set = false, verbose = false;
};

StratumPtr stratum_of(const Options& o) {
    if (o.sig.empty()) throw ParseError("--sig is required");
    return make_stratum(parse_signature(o.sig), parse_residues(o.res));
}

std::string list_str(const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

json graph_json(const EmbeddedLevelGraph& G) {
    json dmp = json::array();
    for (auto& [leg, p] : G.dmp) dmp.push_back({leg, p.comp, p.idx});
    return {{"graph", G.LG.to_json()}, {"dmp", dmp}};
}

std::vector<int> level_genera(const EmbeddedLevelGraph& G, int l) {
    std::vector<int> g;
    for (int v : G.LG.vertices_on_level(l)) g.push_back(G.LG.genus(v));
    return g;
}

std::vector<int> prongs(const EmbeddedLevelGraph& G) {
    std::vector<int> p;
    for (auto& e : G.LG.edges()) p.push_back(G.LG.prong(e));
    std::sort(p.begin(), p.end());
    return p;
}

void cmd_info(const Options& o, std::ostream& out) {
    StratumPtr X = stratum_of(o);
    if (o.format == "json") {
        auto c = codim_counts(X);
        int total = 0;
        for (int x : c) total += x;
        out << json{{"stratum", X->sig_str()}, {"residue_conditions", X->rc_str()}, {"genus", X->genus()},
                    {"dimension", X->dim()}, {"codimensions", c}, {"total", total}}
                   .dump(2)
            << "\n";
    } else {
        out << info(X);
    }
}

void cmd_bics(const Options& o, std::ostream& out) {
    StratumPtr X = stratum_of(o);
    const auto& bs = bics(X);
    if (o.format == "json") {
        json arr = json::array();
        for (size_t i = 0; i < bs.size(); ++i) {
            json j = graph_json(*bs[i]);
            j["index"] = i;
            j["prongs"] = prongs(*bs[i]);
            j["automorphisms"] = bs[i]->automorphisms();
            j["ell"] = bs[i]->ell();
            arr.push_back(j);
        }
        out << arr.dump(2) << "\n";
        return;
    }
    out << "index | top genera | bottom genera | prongs       | |Aut| | ell\n";
    for (size_t i = 0; i < bs.size(); ++i) {
        auto pad = [](std::string s, size_t w) { return s.size() < w ? s + std::string(w - s.size(), ' ') : s; };
        out << pad(std::to_string(i), 5) << " | " << pad(list_str(level_genera(*bs[i], 0)), 10) << " | "
            << pad(list_str(level_genera(*bs[i], 1)), 13) << " | " << pad(list_str(prongs(*bs[i])), 12) << " | "
            << pad(std::to_string(bs[i]->automorphisms()), 5) << " | " << bs[i]->ell() << "\n";
    }
}

void cmd_lookup(const Options& o, const std::string& profile, int comp, std::ostream& out) {
    StratumPtr X = stratum_of(o);
    Profile p = parse_profile(profile);
    for (int b : p)
        if (b < 0 || b >= static_cast<int>(bics(X).size())) throw ParseError("no BIC " + std::to_string(b));
    auto cp = canonical_profile(X, p);
    if (!cp) throw ParseError("unknown profile " + to_string(p));
    const auto& gs = lookup(X, *cp);
    if (comp >= static_cast<int>(gs.size())) throw ParseError("profile " + to_string(*cp) + " has " +
                                                              std::to_string(gs.size()) + " components");
    json arr = json::array();
    for (int c = 0; c < static_cast<int>(gs.size()); ++c) {
        if (comp >= 0 && c != comp) continue;
        if (o.format == "json") {
            json j = graph_json(*gs[c]);
            j["profile"] = *cp;
            j["component"] = c;
            arr.push_back(j);
        } else {
            out << "Enhanced profile " << to_string(EnhancedProfile{*cp, c}) << ":\n" << gs[c]->explain() << "\n";
        }
    }
    if (o.format == "json") out << arr.dump(2) << "\n";
}

void cmd_euler(const Options& o, std::ostream& out) {
    StratumPtr X = stratum_of(o);
    Q v = euler_characteristic(X, o.verbose ? &out : nullptr);
    if (o.format == "json")
        out << json{{"stratum", X->sig_str()}, {"euler_characteristic", to_string(v)}}.dump() << "\n";
    else
        out << to_string(v) << "\n";
}

void cmd_eval(const Options& o, const std::string& expr, std::ostream& out) {
    StratumPtr X = stratum_of(o);
    TautClass t = parse_expression(X, expr);
    if (o.verbose) out << t.str();
    Q v = evaluate(t);
    if (o.format == "json")
        out << json{{"stratum", X->sig_str()}, {"expression", expr}, {"value", to_string(v)}}.dump() << "\n";
    else
        out << to_string(v) << "\n";
}

void cmd_cache(const std::string& action, const std::string& kind, const std::string& file, std::ostream& out) {
    auto& c = EvalCache::instance();
    if (action == "print") {
        if (kind != "xi") out << print_adm_evals(c.adm_values());
        if (kind == "all") out << "\n";
        if (kind != "adm") out << print_top_xis(c.xi_values());
    } else if (action == "import") {
        int n = c.import_file(file);
        out << "imported " << n << " records\n";
    } else if (action == "export") {
        if (kind == "adm")
            c.export_adm(file);
        else if (kind == "xi")
            c.export_xi(file);
        else
            c.export_all(file);
        out << "exported to " << file << "\n";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boundary graphs, tautological classes and Euler characteristics of strata of differentials"};
    app.name(args.empty() ? "strata" : args[0]);
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--cache-dir", o.cache_dir, "directory of adm_evals.jsonl and top_xis.jsonl (\"\" keeps memory only)");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
    app.add_flag("-v,--verbose", o.verbose, "progress trace (euler) or the class itself (eval)");

    auto add_stratum = [&](CLI::App* s) {
        s->add_option("--sig", o.sig, "signature, e.g. \"2,1,-1,0\" or \"0,0;0\"")->required();
        s->add_option("--res", o.res, "residue conditions, e.g. \"[(0,1),(0,2)];[(0,3)]\"");
    };
    auto* info_cmd = app.add_subcommand("info", "codimension table");
    add_stratum(info_cmd);
    auto* bics_cmd = app.add_subcommand("bics", "two-level graphs with their indices");
    add_stratum(bics_cmd);
    auto* lookup_cmd = app.add_subcommand("lookup", "graphs of a profile");
    add_stratum(lookup_cmd);
    std::string profile;
    int comp = -1;
    lookup_cmd->add_option("--profile", profile, "BIC indices top to bottom, e.g. \"1,0\"")->required();
    lookup_cmd->add_option("--component", comp, "component of a reducible profile");
    auto* euler_cmd = app.add_subcommand("euler", "orbifold Euler characteristic");
    add_stratum(euler_cmd);
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a top degree expression");
    add_stratum(eval_cmd);
    std::string expr;
    eval_cmd->add_option("--expr", expr, "e.g. \"xi^3*psi(1)\" or \"D(1,0;0)*xi\"")->required();
    auto* cache_cmd = app.add_subcommand("cache", "inspect and move cached values");
    cache_cmd->require_subcommand(1);
    std::string kind = "all", file;
    auto* cprint = cache_cmd->add_subcommand("print", "tables of cached values");
    cprint->add_option("--kind", kind)->check(CLI::IsMember({"all", "adm", "xi"}));
    auto* cimport = cache_cmd->add_subcommand("import", "merge a JSONL file into the cache");
    cimport->add_option("file", file)->required();
    auto* cexport = cache_cmd->add_subcommand("export", "write cached values as JSONL");
    cexport->add_option("file", file)->required();
    cexport->add_option("--kind", kind)->check(CLI::IsMember({"all", "adm", "xi"}));

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    o.cache_dir_set = app.count("--cache-dir") > 0;

    try {
        if (o.cache_dir_set) EvalCache::instance().set_dir(o.cache_dir);
        if (*info_cmd)
            cmd_info(o, out);
        else if (*bics_cmd)
            cmd_bics(o, out);
        else if (*lookup_cmd)
            cmd_lookup(o, profile, comp, out);
        else if (*euler_cmd)
            cmd_euler(o, out);
        else if (*eval_cmd)
            cmd_eval(o, expr, out);
        else if (*cache_cmd)
            cmd_cache(*cprint ? "print" : *cimport ? "import" : "export", kind, file, out);
    } catch (const OracleMiss& e) {
        err << "error: " << e.what() << "\nmissing key: " << e.key
            << "\nimport a value with 'cache import <file>'\n";
        return e.exit_code();
    } catch (const StrataError& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

}  // namespace strata::cli
