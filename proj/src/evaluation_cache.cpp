#include "strata/evaluation_cache.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace strata {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------- keys

AdmKey adm_key(const std::vector<int>& sig, const std::map<int, int>& psis) {
    std::vector<int> perm(sig.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    AdmKey k;
    std::vector<int> exps(sig.size(), 0);
    for (size_t j = 0; j < perm.size(); ++j) {
        k.sig.push_back(sig[perm[j]]);
        auto it = psis.find(perm[j] + 1);
        if (it != psis.end()) exps[j] = it->second;
    }
    for (auto& [i, e] : psis)
        if (i < 1 || i > static_cast<int>(sig.size()))
            throw InternalInconsistency("psi index " + std::to_string(i) + " out of range");
    // points of equal order are interchangeable
    for (size_t a = 0; a < exps.size();) {
        size_t b = a;
        while (b < exps.size() && k.sig[b] == k.sig[a]) ++b;
        std::sort(exps.begin() + a, exps.begin() + b, std::greater<int>());
        a = b;
    }
    for (size_t j = 0; j < exps.size(); ++j)
        if (exps[j] > 0) k.psis.emplace_back(static_cast<int>(j) + 1, exps[j]);
    return k;
}

std::string sig_tuple_str(const std::vector<int>& sig) { return Signature(sig).str(); }

std::string psis_str(const std::vector<std::pair<int, int>>& psis) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < psis.size(); ++i) os << (i ? ", " : "") << psis[i].first << ": " << psis[i].second;
    os << "}";
    return os.str();
}

namespace {

std::vector<std::vector<int>> all_perms(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

XiKey xi_key(const std::vector<std::vector<int>>& comps, const std::vector<ResidueCondition>& res) {
    int n = static_cast<int>(comps.size());
    // sort inside components, then the components
    std::vector<std::vector<int>> sorted(n), pos(n);
    for (int c = 0; c < n; ++c) {
        std::vector<int> perm(comps[c].size());
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return comps[c][a] < comps[c][b]; });
        pos[c].resize(perm.size());
        for (size_t j = 0; j < perm.size(); ++j) {
            sorted[c].push_back(comps[c][perm[j]]);
            pos[c][perm[j]] = static_cast<int>(j);
        }
    }
    std::vector<int> corder(n);
    std::iota(corder.begin(), corder.end(), 0);
    std::stable_sort(corder.begin(), corder.end(), [&](int a, int b) { return sorted[a] < sorted[b]; });
    std::vector<int> cpos(n);
    XiKey base;
    for (int j = 0; j < n; ++j) {
        cpos[corder[j]] = j;
        base.comps.push_back(sorted[corder[j]]);
    }
    std::vector<std::vector<PointRef>> rcs;
    for (auto& rc : res) {
        std::vector<PointRef> r;
        for (auto p : rc) r.push_back({cpos[p.comp], pos[p.comp][p.idx]});
        rcs.push_back(r);
    }
    // symmetries: equal components, equal-order poles inside a component
    struct Block {
        int comp;                   // -1: block of components
        std::vector<int> members;  // component indices or point indices
        std::vector<std::vector<int>> perms;
    };
    std::vector<Block> blocks;
    for (int a = 0; a < n;) {
        int b = a;
        while (b < n && base.comps[b] == base.comps[a]) ++b;
        if (b - a > 1) {
            Block bl{-1, {}, all_perms(b - a)};
            for (int j = a; j < b; ++j) bl.members.push_back(j);
            blocks.push_back(bl);
        }
        a = b;
    }
    for (int c = 0; c < n; ++c) {
        const auto& s = base.comps[c];
        for (size_t a = 0; a < s.size();) {
            size_t b = a;
            while (b < s.size() && s[b] == s[a]) ++b;
            if (s[a] < 0 && b - a > 1) {
                Block bl{c, {}, all_perms(static_cast<int>(b - a))};
                for (size_t j = a; j < b; ++j) bl.members.push_back(static_cast<int>(j));
                blocks.push_back(bl);
            }
            a = b;
        }
    }
    auto normalize = [](std::vector<std::vector<PointRef>> r) {
        for (auto& x : r) std::sort(x.begin(), x.end());
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        return r;
    };
    std::optional<std::vector<std::vector<PointRef>>> best;
    std::vector<size_t> choice(blocks.size(), 0);
    while (true) {
        auto r = rcs;
        for (auto& rc : r)
            for (auto& p : rc) {
                for (size_t bi = 0; bi < blocks.size(); ++bi) {
                    const auto& bl = blocks[bi];
                    if (bl.comp != p.comp) continue;
                    auto it = std::find(bl.members.begin(), bl.members.end(), p.idx);
                    if (it != bl.members.end())
                        p.idx = bl.members[bl.perms[choice[bi]][it - bl.members.begin()]];
                }
                for (size_t bi = 0; bi < blocks.size(); ++bi) {
                    const auto& bl = blocks[bi];
                    if (bl.comp != -1) continue;
                    auto it = std::find(bl.members.begin(), bl.members.end(), p.comp);
                    if (it != bl.members.end())
                        p.comp = bl.members[bl.perms[choice[bi]][it - bl.members.begin()]];
                }
            }
        r = normalize(r);
        if (!best || r < *best) best = r;
        size_t bi = 0;
        while (bi < blocks.size() && ++choice[bi] == blocks[bi].perms.size()) choice[bi++] = 0;
        if (bi == blocks.size()) break;
    }
    base.res = *best;
    return base;
}

XiKey xi_key(StratumPtr S) {
    std::vector<std::vector<int>> comps;
    for (auto& s : S->sig_list()) comps.push_back(s.orders());
    return xi_key(comps, S->res_cond());
}

std::string comps_str(const std::vector<std::vector<int>>& comps) {
    if (comps.size() == 1) return sig_tuple_str(comps[0]);
    std::string s = "[";
    for (size_t i = 0; i < comps.size(); ++i) s += (i ? ", " : "") + sig_tuple_str(comps[i]);
    return s + "]";
}

std::string res_str(const std::vector<std::vector<PointRef>>& res) {
    if (res.empty()) return "()";
    auto one = [](const std::vector<PointRef>& rc) {
        std::string s = "[";
        for (size_t i = 0; i < rc.size(); ++i) s += (i ? ", " : "") + to_string(rc[i]);
        return s + "]";
    };
    if (res.size() == 1) return one(res[0]);
    std::string s = "[";
    for (size_t i = 0; i < res.size(); ++i) s += (i ? ", " : "") + one(res[i]);
    return s + "]";
}

// ---------------------------------------------------------------- closed forms

namespace {

Q factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Q(f);
}

// <tau_a1 ... tau_an>_1 with sum a = n, via string and dilaton
Q witten_genus1(std::vector<int> a) {
    int n = static_cast<int>(a.size());
    int s = std::accumulate(a.begin(), a.end(), 0);
    if (n == 0 || s != n) return 0;
    auto z = std::find(a.begin(), a.end(), 0);
    if (z == a.end()) return factorial(n - 1) / 24;  // all exponents are 1
    a.erase(z);
    Q r = 0;
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] > 0) {
            auto b = a;
            --b[j];
            r += witten_genus1(b);
        }
    return r;
}

}  // namespace

std::optional<Q> analytic_adm(const AdmKey& key) {
    int n = static_cast<int>(key.sig.size());
    int total = std::accumulate(key.sig.begin(), key.sig.end(), 0);
    int g = (total + 2) / 2;
    std::vector<int> a(n, 0);
    for (auto& [i, e] : key.psis) a[i - 1] = e;
    int s = std::accumulate(a.begin(), a.end(), 0);
    if (g == 0) {
        if (n < 3 || s != n - 3) return Q(0);
        Q r = factorial(n - 3);
        for (int x : a) r /= factorial(x);
        return r;
    }
    if (g == 1 && std::all_of(key.sig.begin(), key.sig.end(), [](int o) { return o == 0; }))
        return witten_genus1(a);
    return std::nullopt;
}

// ---------------------------------------------------------------- seeds

std::map<AdmKey, Q> builtin_adm_seeds() {
    struct Row {
        std::vector<int> sig;
        std::map<int, int> psis;
        const char* v;
    };
    static const std::vector<Row> rows = {
        {{0}, {{1, 1}}, "1/24"},
        {{-2, 2}, {{1, 1}}, "1/8"},
        {{-2, 0, 0, 0}, {{1, 1}}, "1"},
        {{-2, -2, -2, 4}, {{1, 1}}, "1"},
        {{-2, -2, 1, 1}, {{1, 1}}, "1"},
        {{-4, 4}, {{1, 1}}, "5/8"},
        {{-2, -2, 0, 2}, {{1, 1}}, "1"},
        {{0, 0}, {{1, 1}, {2, 1}}, "1/24"},
        {{-2, -2, 4}, {{1, 1}, {2, 1}}, "11/12"},
        {{-2, 0, 2}, {{1, 1}, {2, 1}}, "1/4"},
        {{-2, 1, 1}, {{1, 1}, {2, 1}}, "1/6"},
        {{0, 0, 0}, {{1, 1}, {2, 1}, {3, 1}}, "1/12"},
        {{-2, 4}, {{1, 1}, {2, 2}}, "73/1152"},
        {{0, 0, 0}, {{1, 1}, {2, 2}}, "1/12"},
        {{1, 1}, {{1, 1}, {2, 3}}, "1/720"},
        {{-2, -2, 4}, {{1, 1}, {3, 1}}, "11/12"},
        {{0, 0}, {{1, 2}}, "1/24"},
        {{-2, -2, 4}, {{1, 2}}, "19/24"},
        {{-2, 0, 2}, {{1, 2}}, "1/8"},
        {{-2, 1, 1}, {{1, 2}}, "1/24"},
        {{-2, 4}, {{1, 2}, {2, 1}}, "97/1152"},
        {{1, 1}, {{1, 2}, {2, 2}}, "1/720"},
        {{2}, {{1, 3}}, "1/1920"},
        {{0, 0, 0}, {{1, 3}}, "1/24"},
        {{-2, 4}, {{1, 3}}, "43/1152"},
        {{0, 2}, {{1, 4}}, "11/1920"},
        {{1, 1}, {{1, 4}}, "1/720"},
        {{4}, {{1, 5}}, "13/580608"},
        {{-4, 4}, {{2, 1}}, "5/8"},
        {{-2, 2}, {{2, 1}}, "1/8"},
        {{-2, 0, 0, 0}, {{2, 1}}, "1"},
        {{-2, 1, 1}, {{2, 1}, {3, 1}}, "1/6"},
        {{-2, 0, 2}, {{2, 2}}, "1/4"},
        {{-2, 1, 1}, {{2, 2}}, "1/6"},
        {{-2, 4}, {{2, 3}}, "19/1152"},
        {{-2, -2, 0, 2}, {{3, 1}}, "1"},
        {{-2, -2, 1, 1}, {{3, 1}}, "1"},
        {{-2, -2, 4}, {{3, 2}}, "7/24"},
        {{-2, -2, -2, 4}, {{4, 1}}, "1"},
    };
    std::map<AdmKey, Q> out;
    for (auto& r : rows) out[adm_key(r.sig, r.psis)] = parse_rational(r.v);
    return out;
}

std::map<XiKey, Q> builtin_xi_seeds() {
    using RC = std::vector<PointRef>;
    struct Row {
        std::vector<std::vector<int>> comps;
        std::vector<RC> res;
        const char* v;
    };
    static const std::vector<Row> rows = {
        {{{-4, -2, 4}}, {{{0, 0}, {0, 1}}}, "1"},
        {{{-4, 0, 2}}, {{{0, 0}}}, "1"},
        {{{-4, 1, 1}}, {{{0, 0}}}, "1"},
        {{{-4, 4}}, {{{0, 0}}}, "-15/8"},
        {{{-3, -3, 4}}, {{{0, 0}, {0, 1}}}, "1"},
        {{{-2, -2, -2, 4}}, {{{0, 0}, {0, 1}, {0, 2}}}, "-4"},
        {{{-2, -2, -2, 4}}, {{{0, 0}, {0, 2}}, {{0, 1}}}, "1"},
        {{{-2, -2, 0, 2}}, {{{0, 0}, {0, 1}}}, "-2"},
        {{{-2, -2, 1, 1}}, {{{0, 0}}, {{0, 1}}}, "1"},
        {{{-2, -2, 1, 1}}, {{{0, 0}, {0, 1}}}, "-1"},
        {{{-2, -2, 2}}, {{{0, 0}, {0, 1}}}, "1"},
        {{{-2, -2, 4}}, {{{0, 0}}, {{0, 1}}}, "-11/12"},
        {{{-2, -2, 4}}, {{{0, 0}, {0, 1}}}, "13/8"},
        {{{-2, 0, 0}}, {{{0, 0}}}, "1"},
        {{{-2, 0, 0, 0}}, {{{0, 0}}}, "-1"},
        {{{-2, 0, 2}}, {{{0, 0}}}, "1/8"},
        {{{-2, 1, 1}}, {{{0, 0}}}, "0"},
        {{{-2, 2}}, {{{0, 0}}}, "-1/8"},
        {{{-2, 4}}, {{{0, 0}}}, "-23/1152"},
        {{{0}}, {}, "1/24"},
        {{{0}, {-2, 0, 0}}, {{{1, 0}}}, "-1/24"},
        {{{0}, {0}}, {}, "-1/576"},
        {{{0}, {0, 0}}, {}, "0"},
        {{{0, 0}}, {}, "0"},
        {{{0, 0, 0}}, {}, "0"},
        {{{0, 2}}, {}, "0"},
        {{{1, 1}}, {}, "0"},
        {{{2}}, {}, "-1/640"},
        {{{4}}, {}, "305/580608"},
    };
    std::map<XiKey, Q> out;
    for (auto& r : rows) out[xi_key(r.comps, r.res)] = parse_rational(r.v);
    return out;
}

// ---------------------------------------------------------------- files

namespace {

json adm_record(const AdmKey& k, const Q& v) {
    json ps = json::array();
    for (auto& [i, e] : k.psis) ps.push_back({i, e});
    return {{"sig", k.sig}, {"psis", ps}, {"value", to_string(v)}};
}

json xi_record(const XiKey& k, const Q& v) {
    json res = json::array();
    for (auto& rc : k.res) {
        json r = json::array();
        for (auto p : rc) r.push_back({p.comp, p.idx});
        res.push_back(r);
    }
    return {{"components", k.comps}, {"res", res}, {"value", to_string(v)}};
}

// returns 0 for adm, 1 for xi
int parse_record(const json& j, AdmKey& ak, XiKey& xk, Q& v) {
    v = parse_rational(j.at("value").get<std::string>());
    if (j.contains("sig")) {
        std::map<int, int> ps;
        for (auto& p : j.at("psis")) ps[p.at(0).get<int>()] += p.at(1).get<int>();
        ak = adm_key(j.at("sig").get<std::vector<int>>(), ps);
        return 0;
    }
    if (j.contains("components")) {
        std::vector<ResidueCondition> res;
        for (auto& r : j.at("res")) {
            ResidueCondition rc;
            for (auto& p : r) rc.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
            res.push_back(rc);
        }
        xk = xi_key(j.at("components").get<std::vector<std::vector<int>>>(), res);
        return 1;
    }
    throw FileCorrupt("record without sig or components");
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw FileCorrupt("cannot write " + tmp);
        f << content;
        if (!f) throw FileCorrupt("cannot write " + tmp);
    }
    fs::rename(tmp, path);
}

template <class F>
void read_lines(const std::string& path, F&& f) {
    std::ifstream in(path);
    if (!in) throw FileCorrupt("cannot read " + path);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            f(json::parse(line));
        } catch (const json::exception& e) {
            throw FileCorrupt(path + ":" + std::to_string(no) + ": " + e.what());
        } catch (const ParseError& e) {
            throw FileCorrupt(path + ":" + std::to_string(no) + ": " + e.what());
        }
    }
}

}  // namespace

EvalCache& EvalCache::instance() {
    static EvalCache c;
    return c;
}

EvalCache::EvalCache() {
    const char* env = std::getenv("STRATA_CACHE_DIR");
    dir_ = env ? env : ".";
}

void EvalCache::set_dir(const std::string& dir) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    dir_ = dir;
    loaded_ = false;
}

void EvalCache::reset(bool adm_seeds, bool xi_seeds) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    adm_seeds_ = adm_seeds;
    xi_seeds_ = xi_seeds;
    loaded_ = false;
}

std::string EvalCache::adm_path() const { return dir_.empty() ? "" : (fs::path(dir_) / "adm_evals.jsonl").string(); }
std::string EvalCache::xi_path() const { return dir_.empty() ? "" : (fs::path(dir_) / "top_xis.jsonl").string(); }

void EvalCache::ensure_loaded() {
    if (loaded_) return;
    adm_.clear();
    xi_.clear();
    if (adm_seeds_) adm_ = builtin_adm_seeds();
    if (xi_seeds_) xi_ = builtin_xi_seeds();
    loaded_ = true;
    if (dir_.empty()) return;
    AdmKey ak;
    XiKey xk;
    Q v;
    auto merge = [&](const json& j) {
        if (parse_record(j, ak, xk, v) == 0)
            adm_[ak] = v;
        else
            xi_[xk] = v;
    };
    if (fs::exists(adm_path())) read_lines(adm_path(), merge);
    if (fs::exists(xi_path())) read_lines(xi_path(), merge);
}

std::optional<Q> EvalCache::adm(const AdmKey& k) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    auto it = adm_.find(k);
    if (it == adm_.end()) return std::nullopt;
    return it->second;
}

std::optional<Q> EvalCache::xi(const XiKey& k) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    auto it = xi_.find(k);
    if (it == xi_.end()) return std::nullopt;
    return it->second;
}

void EvalCache::put_adm(const AdmKey& k, const Q& v) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    adm_[k] = v;
    persist_adm();
}

void EvalCache::put_xi(const XiKey& k, const Q& v) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    xi_[k] = v;
    persist_xi();
}

std::map<AdmKey, Q> EvalCache::adm_values() {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    return adm_;
}

std::map<XiKey, Q> EvalCache::xi_values() {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    return xi_;
}

void EvalCache::persist_adm() {
    if (dir_.empty()) return;
    std::string s;
    for (auto& [k, v] : adm_) s += adm_record(k, v).dump() + "\n";
    fs::create_directories(dir_);
    write_atomic(adm_path(), s);
}

void EvalCache::persist_xi() {
    if (dir_.empty()) return;
    std::string s;
    for (auto& [k, v] : xi_) s += xi_record(k, v).dump() + "\n";
    fs::create_directories(dir_);
    write_atomic(xi_path(), s);
}

int EvalCache::import_file(const std::string& path) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    std::map<AdmKey, Q> na;
    std::map<XiKey, Q> nx;
    AdmKey ak;
    XiKey xk;
    Q v;
    read_lines(path, [&](const json& j) {
        if (parse_record(j, ak, xk, v) == 0)
            na[ak] = v;
        else
            nx[xk] = v;
    });
    for (auto& [k, x] : na) adm_[k] = x;
    for (auto& [k, x] : nx) xi_[k] = x;
    if (!na.empty()) persist_adm();
    if (!nx.empty()) persist_xi();
    return static_cast<int>(na.size() + nx.size());
}

void EvalCache::export_adm(const std::string& path) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    std::string s;
    for (auto& [k, v] : adm_) s += adm_record(k, v).dump() + "\n";
    write_atomic(path, s);
}

void EvalCache::export_xi(const std::string& path) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    std::string s;
    for (auto& [k, v] : xi_) s += xi_record(k, v).dump() + "\n";
    write_atomic(path, s);
}

void EvalCache::export_all(const std::string& path) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_loaded();
    std::string s;
    for (auto& [k, v] : adm_) s += adm_record(k, v).dump() + "\n";
    for (auto& [k, v] : xi_) s += xi_record(k, v).dump() + "\n";
    write_atomic(path, s);
}

namespace {

std::string pad(const std::string& s, size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string table(const std::string& h2, const std::string& h3,
                  const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
    std::string out = pad("Stratum", 18) + " | " + pad(h2, 28) + " | " + h3 + "\n";
    out += std::string(64, '-') + "\n";
    for (auto& [a, b, c] : rows) out += pad(a, 18) + " | " + pad(b, 28) + " | " + c + "\n";
    return out;
}

}  // namespace

std::string print_adm_evals(const std::map<AdmKey, Q>& values) {
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (auto& [k, v] : values) rows.emplace_back(sig_tuple_str(k.sig), psis_str(k.psis), to_string(v));
    return table("Psis", "eval", rows);
}

std::string print_top_xis(const std::map<XiKey, Q>& values) {
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (auto& [k, v] : values) rows.emplace_back(comps_str(k.comps), res_str(k.res), to_string(v));
    return table("Residue Conditions", "xi^dim", rows);
}

std::vector<std::tuple<std::vector<std::vector<int>>, std::vector<std::vector<PointRef>>, Q>> list_top_xis() {
    std::vector<std::tuple<std::vector<std::vector<int>>, std::vector<std::vector<PointRef>>, Q>> out;
    for (auto& [k, v] : EvalCache::instance().xi_values()) out.emplace_back(k.comps, k.res, v);
    return out;
}

// ---------------------------------------------------------------- evaluation

Q adm_evaluate(const AdmKey& key) {
    if (auto v = EvalCache::instance().adm(key)) return *v;
    if (auto v = analytic_adm(key)) return *v;
    throw OracleMiss(sig_tuple_str(key.sig) + " " + psis_str(key.psis));
}

namespace {

// components linked through residue conditions
bool splits_as_product(StratumPtr S) {
    int n = S->num_components();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& rc : S->res_cond())
        for (size_t i = 1; i < rc.size(); ++i) parent[find(rc[i].comp)] = find(rc[0].comp);
    for (int c = 1; c < n; ++c)
        if (find(c) != find(0)) return true;
    return false;
}

StratumPtr without_condition(StratumPtr S, size_t i) {
    std::vector<std::vector<int>> sigs;
    for (auto& s : S->sig_list()) sigs.push_back(s.orders());
    auto rcs = S->res_cond();
    rcs.erase(rcs.begin() + static_cast<long>(i));
    return make_stratum(sigs, rcs);
}

std::map<std::pair<StratumPtr, std::map<PointRef, int>>, Q>& psi_memo() {
    static std::map<std::pair<StratumPtr, std::map<PointRef, int>>, Q> m;
    return m;
}

Q evaluate_psi_uncached(StratumPtr S, const std::map<PointRef, int>& psis) {
    int deg = 0;
    for (auto& [p, e] : psis) deg += e;
    if (S->is_empty() || deg != S->dim()) return 0;
    if (S->dim() == 0) return 1;
    if (S->res_cond().empty()) {
        if (!S->is_connected()) return 0;
        std::map<int, int> ps;
        for (auto& [p, e] : psis) ps[p.idx + 1] = e;
        return adm_evaluate(adm_key(S->sig_list()[0].orders(), ps));
    }
    if (splits_as_product(S)) return 0;
    for (size_t i = 0; i < S->res_cond().size(); ++i) {
        StratumPtr T = without_condition(S, i);
        if (T->dim() == S->dim()) return evaluate_psi(T, psis);
    }
    // every condition cuts: peel the first one
    StratumPtr T = without_condition(S, 0);
    const auto& sm = smooth_graph(T);
    std::map<int, int> legs;
    for (auto& [p, e] : psis) legs[sm->dmp_inv.at(p)] = e;
    TautClass mono(T, {{Q(1), additive_generator(T, EnhancedProfile{}, legs)}});
    return evaluate(intersection(mono, res_stratum_class(T, S->res_cond()[0])));
}

}  // namespace

Q evaluate_psi(StratumPtr S, const std::map<PointRef, int>& psis) {
    std::map<PointRef, int> clean;
    for (auto& [p, e] : psis)
        if (e) clean[p] = e;
    auto key = std::make_pair(S, clean);
    auto it = psi_memo().find(key);
    if (it != psi_memo().end()) return it->second;
    Q v = evaluate_psi_uncached(S, clean);
    psi_memo()[key] = v;
    return v;
}

Q evaluate(AGRef A) {
    static std::map<AGRef, Q> memo;
    auto it = memo.find(A);
    if (it != memo.end()) return it->second;
    StratumPtr X = A->X;
    Q val = 0;
    if (A->degree() == X->dim()) {
        const auto& info = level_info(X, A->ep);
        int L = A->ep.length();
        std::vector<std::map<PointRef, int>> per(L + 1);
        std::vector<int> deg(L + 1, 0);
        for (auto& [leg, e] : A->legs) {
            int l = info.leg_level.at(leg);
            per[l][standard_level_data(X, A->ep, l).leg_dict.at(leg)] += e;
            deg[l] += e;
        }
        bool ok = true;
        for (int l = 0; l <= L; ++l)
            if (deg[l] != info.level_dim[l]) ok = false;
        if (ok) {
            val = stack_factor(X, A->ep);
            for (int l = 0; l <= L && val != 0; ++l)
                val *= evaluate_psi(standard_level_data(X, A->ep, l).level.S, per[l]);
        }
    }
    memo[A] = val;
    return val;
}

Q evaluate(const TautClass& t) {
    Q r = 0;
    for (auto& [c, A] : t.terms) r += c * evaluate(A);
    return r;
}

}  // namespace strata
