#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "strata/taut_ring.hpp"

namespace strata {

struct OracleMiss : StrataError {
    explicit OracleMiss(std::string key)
        : StrataError("no value for " + key), key(std::move(key)) {}
    int exit_code() const override { return 3; }
    std::string key;
};

// sorted signature with psi exponents renumbered accordingly (1-based)
struct AdmKey {
    std::vector<int> sig;
    std::vector<std::pair<int, int>> psis;
    auto operator<=>(const AdmKey&) const = default;
};

AdmKey adm_key(const std::vector<int>& sig, const std::map<int, int>& psis);
std::string sig_tuple_str(const std::vector<int>& sig);
std::string psis_str(const std::vector<std::pair<int, int>>& psis);

// sorted component signatures and residue conditions renumbered accordingly
struct XiKey {
    std::vector<std::vector<int>> comps;
    std::vector<std::vector<PointRef>> res;
    auto operator<=>(const XiKey&) const = default;
};

XiKey xi_key(const std::vector<std::vector<int>>& comps, const std::vector<ResidueCondition>& res);
XiKey xi_key(StratumPtr S);
std::string comps_str(const std::vector<std::vector<int>>& comps);
std::string res_str(const std::vector<std::vector<PointRef>>& res);

// closed forms: genus 0 (M_{0,n}) and genus 1 with all orders 0 (M_{1,n})
std::optional<Q> analytic_adm(const AdmKey& key);

// File-backed caches of psi integrals on strata and of top xi powers.
// Write-through: every new value rewrites the file (atomic rename).
class EvalCache {
public:
    static EvalCache& instance();

    // "" keeps everything in memory
    void set_dir(const std::string& dir);
    const std::string& dir() const { return dir_; }
    // drops all values; seeds are re-added when requested
    void reset(bool adm_seeds = true, bool xi_seeds = true);

    std::optional<Q> adm(const AdmKey& k);
    void put_adm(const AdmKey& k, const Q& v);
    std::optional<Q> xi(const XiKey& k);
    void put_xi(const XiKey& k, const Q& v);

    std::map<AdmKey, Q> adm_values();
    std::map<XiKey, Q> xi_values();

    // record type is detected per line; returns number of records merged
    int import_file(const std::string& path);
    void export_adm(const std::string& path);
    void export_xi(const std::string& path);
    void export_all(const std::string& path);

    std::string adm_path() const;
    std::string xi_path() const;

private:
    EvalCache();
    void ensure_loaded();
    void persist_adm();
    void persist_xi();

    std::recursive_mutex mu_;
    bool loaded_ = false;
    bool adm_seeds_ = true;
    bool xi_seeds_ = true;
    std::string dir_;
    std::map<AdmKey, Q> adm_;
    std::map<XiKey, Q> xi_;
};

std::string print_adm_evals(const std::map<AdmKey, Q>& values);
std::string print_top_xis(const std::map<XiKey, Q>& values);
std::vector<std::tuple<std::vector<std::vector<int>>, std::vector<std::vector<PointRef>>, Q>> list_top_xis();

std::map<AdmKey, Q> builtin_adm_seeds();
std::map<XiKey, Q> builtin_xi_seeds();

// cache, then closed forms, then OracleMiss
Q adm_evaluate(const AdmKey& key);

// integral of a psi-monomial (point -> exponent) over a generalised stratum
Q evaluate_psi(StratumPtr S, const std::map<PointRef, int>& psis);
Q evaluate(AGRef A);
Q evaluate(const TautClass& t);

}  // namespace strata
