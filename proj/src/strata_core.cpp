#include "strata/strata_core.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace strata {

std::string to_string(const Q& q) { return q.get_str(); }

Q parse_rational(const std::string& s) {
    Q q;
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || q.set_str(t, 10) != 0) throw ParseError("bad rational: " + s);
    if (q.get_den() == 0) throw ParseError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const PointRef& p) {
    return "(" + std::to_string(p.comp) + ", " + std::to_string(p.idx) + ")";
}

int matrix_rank(std::vector<std::vector<int>> rows) {
    if (rows.empty()) return 0;
    size_t ncols = rows[0].size();
    std::vector<std::vector<mpz_class>> m;
    for (auto& r : rows) m.emplace_back(r.begin(), r.end());
    int rank = 0;
    mpz_class prev = 1;
    size_t nr = m.size();
    for (size_t c = 0; c < ncols && rank < static_cast<int>(nr); ++c) {
        size_t piv = rank;
        while (piv < nr && m[piv][c] == 0) ++piv;
        if (piv == nr) continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = rank + 1; r < nr; ++r) {
            for (size_t k = c + 1; k < ncols; ++k)
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            m[r][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

Signature::Signature(std::vector<int> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw MalformedSignature("signature without points");
    int s = std::accumulate(orders_.begin(), orders_.end(), 0);
    if (s % 2 != 0 || s < -2)
        throw MalformedSignature("orders must sum to 2g-2 with g >= 0");
    genus_ = (s + 2) / 2;
    if (genus_ == 0 && orders_.size() < 3)
        throw MalformedSignature("genus 0 needs at least 3 points");
    for (int i = 0; i < n(); ++i) {
        if (orders_[i] < 0)
            pole_ind_.push_back(i);
        else
            zero_ind_.push_back(i);
    }
}

std::string Signature::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < orders_.size(); ++i) {
        if (i) os << ", ";
        os << orders_[i];
    }
    if (orders_.size() == 1) os << ",";
    os << ")";
    return os.str();
}

GeneralisedStratum::GeneralisedStratum(std::vector<Signature> sigs,
                                       std::vector<ResidueCondition> rcs)
    : sigs_(std::move(sigs)), rcs_(std::move(rcs)) {
    int d = 0;
    for (auto& s : sigs_) d += 2 * s.g() + s.n() - 1;
    d -= matrix_rank(full_residue_matrix());
    dim_ = d - 1;
    for (auto p : simple_poles())
        if (residue_zero(p)) empty_ = true;
}

int GeneralisedStratum::n() const {
    int k = 0;
    for (auto& s : sigs_) k += s.n();
    return k;
}

std::vector<int> GeneralisedStratum::genus() const {
    std::vector<int> g;
    for (auto& s : sigs_) g.push_back(s.g());
    return g;
}

bool GeneralisedStratum::has_point(PointRef p) const {
    return p.comp >= 0 && p.comp < num_components() && p.idx >= 0 && p.idx < sigs_[p.comp].n();
}

int GeneralisedStratum::order(PointRef p) const {
    if (!has_point(p)) throw InternalInconsistency("no point " + to_string(p));
    return sigs_[p.comp][p.idx];
}

std::vector<PointRef> GeneralisedStratum::points() const {
    std::vector<PointRef> out;
    for (int c = 0; c < num_components(); ++c)
        for (int i = 0; i < sigs_[c].n(); ++i) out.push_back({c, i});
    return out;
}

std::vector<PointRef> GeneralisedStratum::poles() const {
    std::vector<PointRef> out;
    for (int c = 0; c < num_components(); ++c)
        for (int i : sigs_[c].pole_ind()) out.push_back({c, i});
    return out;
}

std::vector<PointRef> GeneralisedStratum::simple_poles() const {
    std::vector<PointRef> out;
    for (auto p : poles())
        if (order(p) == -1) out.push_back(p);
    return out;
}

std::vector<PointRef> GeneralisedStratum::free_poles() const {
    std::vector<PointRef> out;
    for (auto p : poles()) {
        bool in_rc = false;
        for (auto& rc : rcs_)
            if (std::find(rc.begin(), rc.end(), p) != rc.end()) in_rc = true;
        if (!in_rc) out.push_back(p);
    }
    return out;
}

std::vector<int> GeneralisedStratum::residue_row(const ResidueCondition& rc) const {
    auto ps = poles();
    std::vector<int> row(ps.size(), 0);
    for (size_t j = 0; j < ps.size(); ++j)
        if (std::find(rc.begin(), rc.end(), ps[j]) != rc.end()) row[j] = 1;
    return row;
}

std::vector<std::vector<int>> GeneralisedStratum::residue_matrix() const {
    std::vector<std::vector<int>> m;
    for (auto& rc : rcs_) m.push_back(residue_row(rc));
    return m;
}

std::vector<std::vector<int>> GeneralisedStratum::full_residue_matrix() const {
    auto m = residue_matrix();
    for (int c = 0; c < num_components(); ++c) {
        ResidueCondition all;
        for (int i : sigs_[c].pole_ind()) all.push_back({c, i});
        if (!all.empty()) m.push_back(residue_row(all));
    }
    return m;
}

bool GeneralisedStratum::residue_zero(PointRef p) const {
    auto m = full_residue_matrix();
    int r = matrix_rank(m);
    m.push_back(residue_row({p}));
    return matrix_rank(m) == r;
}

std::string rc_list_str(const std::vector<ResidueCondition>& rcs) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < rcs.size(); ++i) {
        if (i) os << ", ";
        os << "[";
        for (size_t j = 0; j < rcs[i].size(); ++j) {
            if (j) os << ", ";
            os << to_string(rcs[i][j]);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string GeneralisedStratum::sig_str() const {
    if (sigs_.size() == 1) return sigs_[0].str();
    std::string s = "[";
    for (size_t i = 0; i < sigs_.size(); ++i) {
        if (i) s += ", ";
        s += sigs_[i].str();
    }
    return s + "]";
}

std::string GeneralisedStratum::rc_str() const { return rc_list_str(rcs_); }

std::string GeneralisedStratum::key_str() const { return sig_str() + " " + rc_str(); }

std::string GeneralisedStratum::str() const {
    return "Stratum: " + sig_str() + "\nwith residue conditions: " + rc_str() + "\n";
}

namespace {

struct Registry {
    std::mutex mu;
    std::unordered_map<std::string, std::unique_ptr<GeneralisedStratum>> strata;
};

Registry& registry() {
    static Registry* r = new Registry;  // strata live for the whole process
    return *r;
}

}  // namespace

StratumPtr make_stratum(const std::vector<std::vector<int>>& sigs,
                        const std::vector<ResidueCondition>& res_cond) {
    if (sigs.empty()) throw MalformedSignature("empty signature list");
    std::vector<Signature> sl;
    for (auto& s : sigs) sl.emplace_back(s);
    std::vector<ResidueCondition> rcs;
    for (auto rc : res_cond) {
        if (rc.empty()) throw InvalidResidueCondition("empty residue condition");
        for (auto p : rc) {
            if (p.comp < 0 || p.comp >= static_cast<int>(sl.size()) || p.idx < 0 ||
                p.idx >= sl[p.comp].n())
                throw InvalidResidueCondition("no such point " + to_string(p));
            int o = sl[p.comp][p.idx];
            if (o >= 0) throw InvalidResidueCondition("residue condition on a zero " + to_string(p));
            if (o == -1)
                throw InvalidResidueCondition("residue condition on a simple pole " + to_string(p));
        }
        std::sort(rc.begin(), rc.end());
        rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
        rcs.push_back(rc);
    }
    std::sort(rcs.begin(), rcs.end());
    rcs.erase(std::unique(rcs.begin(), rcs.end()), rcs.end());

    auto candidate = std::make_unique<GeneralisedStratum>(std::move(sl), std::move(rcs));
    auto key = candidate->key_str();
    auto& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.strata.find(key);
    if (it != reg.strata.end()) return it->second.get();
    auto* ptr = candidate.get();
    reg.strata.emplace(key, std::move(candidate));
    return ptr;
}

StratumPtr make_stratum(const std::vector<int>& sig, const std::vector<ResidueCondition>& res_cond) {
    return make_stratum(std::vector<std::vector<int>>{sig}, res_cond);
}

}  // namespace strata
