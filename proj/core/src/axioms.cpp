#include "eustar/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace eustar {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact rational value of a finite double.
Rational exact_rational(double x) {
    int exp = 0;
    const double frac = std::frexp(x, &exp);
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    exp -= 53;
    BigInt num = mant;
    if (exp >= 0) return Rational(num << exp);
    return Rational(num, BigInt(1) << -exp);
}

Rational rational_pow(const Rational& base, int n) {
    Rational acc = 1;
    for (int i = 0; i < n; ++i) acc *= base;
    return acc;
}

struct PairTable {
    int K = 0;
    int S = 0;
    int P = 0;
    std::vector<std::pair<int, int>> pairs;  // (left entry, right entry), entry = k*S + s
    std::vector<double> lw;                  // log ratio contributed by the pair
    // Suffix availability: which k (or s) appear on the left/right of some
    // pair with index >= p. Used to prune unbalanceable prefixes.
    std::vector<std::uint64_t> suf_lk, suf_rk, suf_ls, suf_rs;
};

PairTable build_pairs(const Dataset& d, AxiomKind kind, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    if (K > 64 || S > 64) {
        throw ArgumentError("axiom oracle supports at most 64 observations/states");
    }
    PairTable t;
    t.K = K;
    t.S = S;
    std::vector<double> lp(static_cast<size_t>(K) * S);
    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            const double v = (kind == AxiomKind::oeu) ? d.price(k, s) / d.belief()[s]
                                                      : d.price(k, s);
            lp[static_cast<size_t>(k * S + s)] = std::log(v);
        }
    }
    for (int a = 0; a < K * S; ++a) {
        for (int b = 0; b < K * S; ++b) {
            if (a == b) continue;
            if (quantity_greater(d.quantity(a / S, a % S), d.quantity(b / S, b % S), tau)) {
                t.pairs.emplace_back(a, b);
                t.lw.push_back(lp[static_cast<size_t>(a)] - lp[static_cast<size_t>(b)]);
            }
        }
    }
    t.P = static_cast<int>(t.pairs.size());
    t.suf_lk.assign(static_cast<size_t>(t.P) + 1, 0);
    t.suf_rk.assign(static_cast<size_t>(t.P) + 1, 0);
    t.suf_ls.assign(static_cast<size_t>(t.P) + 1, 0);
    t.suf_rs.assign(static_cast<size_t>(t.P) + 1, 0);
    for (int p = t.P - 1; p >= 0; --p) {
        const auto [a, b] = t.pairs[static_cast<size_t>(p)];
        t.suf_lk[static_cast<size_t>(p)] = t.suf_lk[static_cast<size_t>(p) + 1] | (1ULL << (a / S));
        t.suf_rk[static_cast<size_t>(p)] = t.suf_rk[static_cast<size_t>(p) + 1] | (1ULL << (b / S));
        t.suf_ls[static_cast<size_t>(p)] = t.suf_ls[static_cast<size_t>(p) + 1] | (1ULL << (a % S));
        t.suf_rs[static_cast<size_t>(p)] = t.suf_rs[static_cast<size_t>(p) + 1] | (1ULL << (b % S));
    }
    return t;
}

// Depth-first walk over canonical multisets of admissible pairs.
//
// With chain_free, any multiset holding two pairs (a,b),(b,c) is skipped:
// replacing them by (a,c) leaves the net counts d -- and hence the ratio
// product and m -- unchanged, so the shorter multiset already covers it.
// Only valid for consumers whose result depends on d alone.
class SequenceSearch {
public:
    SequenceSearch(const PairTable& t, int max_len, bool balanced_states, bool chain_free)
        : t_(t),
          max_len_(max_len),
          bs_(balanced_states),
          cf_(chain_free),
          kbal_(static_cast<size_t>(t.K), 0),
          sbal_(static_cast<size_t>(t.S), 0),
          dvec_(static_cast<size_t>(t.K) * t.S, 0),
          lcnt_(static_cast<size_t>(t.K) * t.S, 0),
          rcnt_(static_cast<size_t>(t.K) * t.S, 0) {
        stack_.reserve(static_cast<size_t>(max_len));
    }

    const std::vector<int>& stack() const { return stack_; }
    double sumw() const { return sumw_; }
    int m() const { return m_; }

    // leaf(search) is called on every balanced multiset; return false to stop.
    template <typename Leaf>
    void run(Leaf&& leaf) {
        if (t_.P == 0 || max_len_ < 1) return;
        recurse(0, leaf);
    }

private:
    template <typename Leaf>
    void recurse(int start, Leaf& leaf) {
        const int depth = static_cast<int>(stack_.size());
        if (depth >= 1 && posk_ == 0 && (!bs_ || poss_ == 0)) {
            if (!leaf(*this)) {
                stopped_ = true;
                return;
            }
        }
        if (depth == max_len_) return;
        const int rem = max_len_ - depth - 1;
        for (int p = start; p < t_.P; ++p) {
            const auto [a, b] = t_.pairs[static_cast<size_t>(p)];
            if (cf_ && (rcnt_[static_cast<size_t>(a)] > 0 || lcnt_[static_cast<size_t>(b)] > 0)) {
                continue;
            }
            push(p, a, b);
            if (completable(p, rem)) recurse(p, leaf);
            pop(p, a, b);
            if (stopped_) return;
        }
    }

    bool completable(int p, int rem) const {
        if (posk_ > rem) return false;
        if (posmask_k_ & ~t_.suf_rk[static_cast<size_t>(p)]) return false;
        if (negmask_k_ & ~t_.suf_lk[static_cast<size_t>(p)]) return false;
        if (bs_) {
            if (poss_ > rem) return false;
            if (posmask_s_ & ~t_.suf_rs[static_cast<size_t>(p)]) return false;
            if (negmask_s_ & ~t_.suf_ls[static_cast<size_t>(p)]) return false;
        }
        return true;
    }

    void bump_bal(std::vector<int>& bal, int idx, int delta, int& pos, std::uint64_t& posmask,
                  std::uint64_t& negmask) {
        int& v = bal[static_cast<size_t>(idx)];
        if (v > 0) pos -= v;
        v += delta;
        if (v > 0) pos += v;
        const std::uint64_t bit = 1ULL << idx;
        posmask = (v > 0) ? (posmask | bit) : (posmask & ~bit);
        negmask = (v < 0) ? (negmask | bit) : (negmask & ~bit);
    }

    void bump_d(int entry, int delta) {
        int& v = dvec_[static_cast<size_t>(entry)];
        m_ -= std::max(v, 0);
        v += delta;
        m_ += std::max(v, 0);
    }

    void push(int p, int a, int b) {
        stack_.push_back(p);
        sumw_ += t_.lw[static_cast<size_t>(p)];
        ++lcnt_[static_cast<size_t>(a)];
        ++rcnt_[static_cast<size_t>(b)];
        bump_d(a, +1);
        bump_d(b, -1);
        bump_bal(kbal_, a / t_.S, +1, posk_, posmask_k_, negmask_k_);
        bump_bal(kbal_, b / t_.S, -1, posk_, posmask_k_, negmask_k_);
        bump_bal(sbal_, a % t_.S, +1, poss_, posmask_s_, negmask_s_);
        bump_bal(sbal_, b % t_.S, -1, poss_, posmask_s_, negmask_s_);
    }

    void pop(int p, int a, int b) {
        stack_.pop_back();
        sumw_ -= t_.lw[static_cast<size_t>(p)];
        --lcnt_[static_cast<size_t>(a)];
        --rcnt_[static_cast<size_t>(b)];
        bump_d(a, -1);
        bump_d(b, +1);
        bump_bal(kbal_, a / t_.S, -1, posk_, posmask_k_, negmask_k_);
        bump_bal(kbal_, b / t_.S, +1, posk_, posmask_k_, negmask_k_);
        bump_bal(sbal_, a % t_.S, -1, poss_, posmask_s_, negmask_s_);
        bump_bal(sbal_, b % t_.S, +1, poss_, posmask_s_, negmask_s_);
    }

    const PairTable& t_;
    int max_len_;
    bool bs_;
    bool cf_;
    bool stopped_ = false;
    std::vector<int> stack_;
    std::vector<int> kbal_, sbal_, dvec_, lcnt_, rcnt_;
    int posk_ = 0, poss_ = 0, m_ = 0;
    double sumw_ = 0.0;
    std::uint64_t posmask_k_ = 0, negmask_k_ = 0, posmask_s_ = 0, negmask_s_ = 0;
};

TestSequence materialize(const PairTable& t, const std::vector<int>& stack) {
    TestSequence seq;
    seq.pairs.reserve(stack.size());
    for (int p : stack) {
        const auto [a, b] = t.pairs[static_cast<size_t>(p)];
        seq.pairs.push_back({a / t.S, a % t.S, b / t.S, b % t.S});
    }
    return seq;
}

// Exact ratio product over pairs. OEU uses rho = p/mu, so the ratio is
// (p_l * mu_r) / (p_r * mu_l); SEU uses raw prices.
Rational rational_product(const Dataset& d, AxiomKind kind, const TestSequence& seq) {
    Rational acc = 1;
    for (const auto& pr : seq.pairs) {
        Rational num = exact_rational(d.price(pr.k, pr.s));
        Rational den = exact_rational(d.price(pr.k2, pr.s2));
        if (kind == AxiomKind::oeu) {
            num *= exact_rational(d.belief()[pr.s2]);
            den *= exact_rational(d.belief()[pr.s]);
        }
        acc *= num / den;
    }
    return acc;
}

int effective_max_len(const Dataset& d, int max_len) {
    if (max_len == -1) return default_oracle_max_len(d);
    if (max_len < 1) throw ArgumentError("max_len must be >= 1");
    return max_len;
}

}  // namespace

int default_oracle_max_len(const Dataset& d) {
    const long full = static_cast<long>(d.num_observations()) * d.states() * (d.states() - 1);
    return static_cast<int>(std::min<long>(full, 12));
}

bool oracle_max_len_capped(const Dataset& d) {
    return static_cast<long>(d.num_observations()) * d.states() * (d.states() - 1) > 12;
}

SequenceStats sequence_stats(const TestSequence& seq, const Dataset& d, double tau) {
    SequenceStats st;
    std::vector<int> kcount(static_cast<size_t>(d.num_observations()), 0);
    for (const auto& p : seq.pairs) {
        for (int k : {p.k, p.k2}) {
            if (k < 0 || k >= d.num_observations()) {
                throw ValidationError("invalid test sequence: observation index out of range");
            }
        }
        for (int s : {p.s, p.s2}) {
            if (s < 0 || s >= d.states()) {
                throw ValidationError("invalid test sequence: state index out of range");
            }
        }
        if (!quantity_greater(d.quantity(p.k, p.s), d.quantity(p.k2, p.s2), tau)) {
            std::ostringstream os;
            os << "invalid test sequence: x[" << p.k << "][" << p.s << "] is not greater than x["
               << p.k2 << "][" << p.s2 << "]";
            throw ValidationError(os.str());
        }
        st.d[{p.k, p.s}] += 1;
        st.d[{p.k2, p.s2}] -= 1;
        kcount[static_cast<size_t>(p.k)] += 1;
        kcount[static_cast<size_t>(p.k2)] -= 1;
    }
    for (int k = 0; k < d.num_observations(); ++k) {
        if (kcount[static_cast<size_t>(k)] != 0) {
            throw ValidationError("invalid test sequence: observation " + std::to_string(k) +
                                  " is unbalanced between left and right");
        }
    }
    for (auto it = st.d.begin(); it != st.d.end();) {
        if (it->second == 0) {
            it = st.d.erase(it);
        } else {
            if (it->second > 0) st.m += it->second;
            ++it;
        }
    }
    return st;
}

void enumerate_test_sequences(const Dataset& d, int max_len, bool balanced_states,
                              const std::function<bool(const TestSequence&)>& consumer,
                              double tau) {
    if (max_len < 1) throw ArgumentError("max_len must be >= 1");
    const PairTable t = build_pairs(d, balanced_states ? AxiomKind::seu : AxiomKind::oeu, tau);
    SequenceSearch search(t, max_len, balanced_states, /*chain_free=*/false);
    search.run([&](const SequenceSearch& s) { return consumer(materialize(t, s.stack())); });
}

std::optional<AxiomWitness> check_axiom(const Dataset& d, AxiomKind kind, double e, int max_len,
                                        double tau) {
    if (!(e >= 0.0)) throw ArgumentError("perturbation level e must be >= 0");
    const int len = effective_max_len(d, max_len);
    const PairTable t = build_pairs(d, kind, tau);
    const double log_bound = std::log1p(e);

    // The check depends only on the net counts d of a sequence, so the
    // chain-free walk is exhaustive for it.
    SequenceSearch search(t, len, kind == AxiomKind::seu, /*chain_free=*/true);
    bool found = false;
    double best_v = 0.0;
    std::vector<int> best_stack;
    int best_m = 0;
    double best_sumw = 0.0;

    search.run([&](const SequenceSearch& s) {
        const int m = s.m();
        if (m == 0) return true;  // ratio product is exactly 1, never violating
        const double slack = s.sumw() - static_cast<double>(m) * log_bound;
        const double guard = 1e-9 * (1.0 + std::abs(s.sumw()) + m * std::abs(log_bound));
        bool violates;
        if (slack > guard) {
            violates = true;
        } else if (slack >= -guard) {
            // Within floating noise of the bound: settle exactly.
            const TestSequence seq = materialize(t, s.stack());
            violates = rational_product(d, kind, seq) >
                       rational_pow(Rational(1) + exact_rational(e), m);
        } else {
            violates = false;
        }
        if (violates) {
            const double v = s.sumw() / m;
            if (!found || v > best_v) {
                found = true;
                best_v = v;
                best_stack = s.stack();
                best_m = m;
                best_sumw = s.sumw();
            }
        }
        return true;
    });

    if (!found) return std::nullopt;
    AxiomWitness w;
    w.sequence = materialize(t, best_stack);
    w.lhs = std::exp(best_sumw);
    w.bound = std::pow(1.0 + e, best_m);
    return w;
}

double oracle_min_e(const Dataset& d, AxiomKind kind, int max_len, double tau) {
    const int len = effective_max_len(d, max_len);
    const PairTable t = build_pairs(d, kind, tau);
    SequenceSearch search(t, len, kind == AxiomKind::seu, /*chain_free=*/true);
    bool any = false;
    double best = 0.0;
    search.run([&](const SequenceSearch& s) {
        if (s.m() > 0) {
            const double v = s.sumw() / s.m();
            if (!any || v > best) {
                any = true;
                best = v;
            }
        }
        return true;
    });
    if (!any) return 0.0;
    return std::max(0.0, std::expm1(best));
}

std::string witness_to_json(const AxiomWitness& w) {
    nlohmann::json j;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : w.sequence.pairs) {
        pairs.push_back({p.k, p.s, p.k2, p.s2});
    }
    j["pairs"] = std::move(pairs);
    j["lhs"] = w.lhs;
    j["bound"] = w.bound;
    return j.dump();
}

}  // namespace eustar
