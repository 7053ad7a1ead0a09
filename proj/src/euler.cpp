#include "strata/euler.hpp"

#include <sstream>

namespace strata {

Q EulerTerm::value() const {
    Q v = ell_product * n_top * stack;
    for (auto& x : level_values) v *= x;
    return v;
}

EulerTerm euler_term(StratumPtr X, const EnhancedProfile& ep, std::ostream* trace) {
    EulerTerm t;
    t.ep = ep;
    for (int b : ep.p) t.ell_product *= ell_of_bic(X, b);
    t.n_top = ep.p.empty() ? X->dim() + 1 : bics(X)[ep.p[0]]->top().S->dim() + 1;
    t.stack = stack_factor(X, ep);
    if (trace) *trace << "Calculating xi at";
    for (int l = 0; l <= ep.length(); ++l) {
        StratumPtr S = standard_level_data(X, ep, l).level.S;
        bool cached = EvalCache::instance().xi(xi_key(S)).has_value();
        Q v = top_xi_at_level(X, ep, l);
        t.level_values.push_back(v);
        if (trace) *trace << " level " << l << (cached ? " (cache) " : " ") << to_string(v);
        if (v == 0) {
            if (trace) *trace << " Product 0.";
            break;
        }
    }
    if (trace) *trace << " Done.\n";
    return t;
}

Q euler_characteristic(StratumPtr X, std::ostream* trace) {
    Q total = 0;
    int d = X->dim();
    const auto& ll = lookup_list(X);
    for (int L = 0; L <= d; ++L) {
        if (trace) {
            *trace << "Generating enhanced profiles of length " << L << "...\n";
            if (L < static_cast<int>(ll.size()))
                for (size_t i = 0; i < ll[L].size(); ++i)
                    *trace << "Building all graphs in " << to_string(ll[L][i]) << " (" << i + 1 << "/"
                           << ll[L].size() << ")...\n";
        }
        auto eps = enhanced_profiles_of_length(X, L);
        if (trace) *trace << "Going through " << eps.size() << " profiles of length " << L << "...\n";
        for (size_t i = 0; i < eps.size(); ++i) {
            if (trace) *trace << i + 1 << " / " << eps.size() << ", " << to_string(eps[i]) << ": ";
            total += euler_term(X, eps[i], trace).value();
        }
    }
    if (d % 2) total = -total;
    return total;
}

std::string info(StratumPtr X) {
    std::ostringstream os;
    os << X->str() << "\n";
    os << "Genus: [";
    auto g = X->genus();
    for (size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << g[i];
    os << "]\n";
    os << "Dimension: " << X->dim() << "\n";
    os << "Boundary Graphs (without horizontal edges):\n";
    int total = 0;
    auto c = codim_counts(X);
    for (size_t i = 0; i < c.size(); ++i) {
        os << "Codimension " << i << ": " << c[i] << (c[i] == 1 ? " graph" : " graphs") << "\n";
        total += c[i];
    }
    os << "Total graphs: " << total << "\n";
    return os.str();
}

}  // namespace strata
