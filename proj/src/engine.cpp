#include "helpkit/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

namespace helpkit {

std::set<long> candidate_orders(const CharacterTable& table) {
    std::set<long> out;
    for (long d : divisors(table.exponent))
        if (d > 1) out.insert(d);
    return out;
}

const char* OrderVerdict::status_name(Status s) {
    switch (s) {
        case Status::Excluded: return "Excluded";
        case Status::RationallyTrivial: return "RationallyTrivial";
        default: return "Open";
    }
}

std::set<long> SpectrumReport::open_orders() const {
    std::set<long> out;
    for (const auto& e : entries)
        if (e.kind == Kind::Open) out.insert(e.order);
    return out;
}

std::set<long> SpectrumReport::excluded_orders() const {
    std::set<long> out;
    for (const auto& e : entries)
        if (e.kind == Kind::ExcludedDirect || e.kind == Kind::ExcludedByClosure)
            out.insert(e.order);
    return out;
}

Engine::Engine(const CharacterTable& table,
               std::optional<std::vector<CharRef>> restriction)
    : table_(table), restriction_(std::move(restriction)) {}

int Engine::thread_budget() {
    if (const char* env = std::getenv("HELPKIT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

namespace {

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    int workers = std::min<long>(Engine::thread_budget(), (long)n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<CharRef> Engine::selection_for(long k,
                                           std::vector<std::string>* warnings) const {
    std::vector<CharRef> base;
    if (restriction_) {
        base = *restriction_;
    } else {
        for (const auto& ch : table_.ordinary) base.push_back({0, ch.id});
        for (const auto& [p, bt] : table_.brauer)
            for (const auto& ch : bt.characters) base.push_back({p, ch.id});
    }
    std::vector<CharRef> applicable;
    for (const auto& ref : base)
        if (ref.p == 0 || std::gcd(ref.p, k) == 1) applicable.push_back(ref);
    return screen_selection(table_, k, applicable, warnings);
}

const TowersResult& Engine::feasible_towers(long k) {
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
    }

    TowersResult res;
    std::vector<CharRef> selection = selection_for(k, nullptr);

    // Consistent power assignments: a full state of order m fixes tuples for
    // every divisor of m (including m itself).
    using State = std::map<long, AugTuple>;
    std::vector<Tower> cands;
    std::vector<long> maximal;
    for (long m : divisors(k))
        if (m > 1 && m < k && [&] {
                long q = k / m;
                return factorize(q).size() == 1 && factorize(q)[0].second == 1;
            }())
            maximal.push_back(m);

    if (maximal.empty()) {
        cands.push_back(Tower{k, {}});
    } else {
        std::vector<State> partial{State{}};
        for (long m : maximal) {
            const TowersResult& sub = feasible_towers(m);
            if (sub.unbounded) {
                res.unbounded = true;
                res.note = "order " + std::to_string(k) + ": " + sub.note;
                std::lock_guard<std::mutex> lock(memo_mutex_);
                return memo_.emplace(k, std::move(res)).first->second;
            }
            std::vector<State> states;
            for (const auto& [tw, fs] : sub.list) {
                for (const auto& tuple : fs.tuples) {
                    State s = tw.tuples;
                    s[m] = tuple;
                    states.push_back(std::move(s));
                }
            }
            std::vector<State> merged;
            for (const auto& left : partial) {
                for (const auto& right : states) {
                    bool ok = true;
                    State u = left;
                    for (const auto& [d, tup] : right) {
                        auto it = u.find(d);
                        if (it != u.end() && !(it->second == tup)) {
                            ok = false;
                            break;
                        }
                        u[d] = tup;
                    }
                    if (ok) merged.push_back(std::move(u));
                }
            }
            partial = std::move(merged);
            if (partial.empty()) break;
        }
        for (auto& s : partial) cands.push_back(Tower{k, std::move(s)});
    }

    // A tower enters the constraint system only through the induced values
    // chi(u^d) = chi_of_tuple(tower.tuples[m]), so towers sharing those values
    // for every selected character share one system and one solve.
    std::vector<const Character*> chars;
    for (const auto& ref : selection) chars.push_back(table_.find_character(ref.p, ref.id));
    std::map<std::string, std::string> value_cache;  // (char, m, tuple) -> value
    auto tower_signature = [&](const Tower& tw) {
        std::ostringstream os;
        for (size_t ci = 0; ci < chars.size(); ++ci) {
            for (const auto& [m, tup] : tw.tuples) {
                std::string key = selection[ci].str() + "|" + std::to_string(m) +
                                  "|" + tup.str();
                auto it = value_cache.find(key);
                if (it == value_cache.end()) {
                    auto v = chi_of_tuple(table_, *chars[ci], selection[ci].p, tup);
                    it = value_cache.emplace(key, v ? v->str() : "~").first;
                }
                os << it->second << ";";
            }
            os << "/";
        }
        return os.str();
    };

    SystemBuilder builder(table_, k, selection);
    std::map<std::string, FeasibleSet> solved;
    for (const auto& tower : cands) {
        std::string key = tower_signature(tower);
        auto it = solved.find(key);
        if (it == solved.end()) {
            ConstraintSystem sys = builder.build(tower);
            try {
                it = solved.emplace(key, solve_system(sys, tower)).first;
            } catch (const UnboundedError& e) {
                res.unbounded = true;
                res.note = "order " + std::to_string(k) + ": " + e.what();
                break;
            }
        }
        if (!it->second.tuples.empty()) {
            FeasibleSet fs = it->second;
            fs.tower = tower;
            res.list.push_back({tower, std::move(fs)});
        }
    }
    if (res.unbounded) res.list.clear();

    std::lock_guard<std::mutex> lock(memo_mutex_);
    return memo_.emplace(k, std::move(res)).first->second;
}

OrderVerdict Engine::order_verdict(long k) {
    OrderVerdict v;
    v.k = k;
    v.selection = selection_for(k, &v.notes);
    const TowersResult& tr = feasible_towers(k);
    if (tr.unbounded) {
        v.status = OrderVerdict::Status::Open;
        v.unbounded = true;
        v.notes.push_back(tr.note +
                          " -- insufficient constraints; verdict stays Open");
        return v;
    }
    if (tr.list.empty()) {
        v.status = OrderVerdict::Status::Excluded;
        return v;
    }
    v.towers = tr.list;
    auto trivial = [](const AugTuple& t) {
        int nonzero = 0;
        bool simple = true;
        for (auto& [c, val] : t.entries) {
            if (val == 0) continue;
            ++nonzero;
            if (val != 1 || c.find('+') != std::string::npos) simple = false;
        }
        return nonzero == 1 && simple;
    };
    bool rt = true;
    for (const auto& [tw, fs] : tr.list) {
        for (const auto& [m, tup] : tw.tuples) rt = rt && trivial(tup);
        for (const auto& tup : fs.tuples) rt = rt && trivial(tup);
    }
    v.status = rt ? OrderVerdict::Status::RationallyTrivial
                  : OrderVerdict::Status::Open;
    return v;
}

SpectrumReport Engine::spectrum() {
    std::set<long> elems = table_.element_orders();
    std::vector<long> divs;
    for (long d : divisors(table_.exponent))
        if (d > 1) divs.push_back(d);

    // Direct HeLP attempts on non-element orders with at most two prime
    // factors; richer orders are handled by the closure rule alone.
    std::vector<long> targets;
    for (long d : divs)
        if (!elems.count(d) && factorize(d).size() <= 2) targets.push_back(d);
    std::vector<OrderVerdict::Status> status(targets.size());
    parallel_for(targets.size(), [&](size_t i) {
        status[i] = order_verdict(targets[i]).status;
    });
    std::map<long, OrderVerdict::Status> direct;
    for (size_t i = 0; i < targets.size(); ++i) direct[targets[i]] = status[i];

    SpectrumReport rep;
    std::set<long> excluded;
    for (long d : divs) {
        SpectrumReport::Entry e;
        e.order = d;
        if (elems.count(d)) {
            e.kind = SpectrumReport::Kind::ElementOrder;
        } else if (direct.count(d) &&
                   direct[d] == OrderVerdict::Status::Excluded) {
            e.kind = SpectrumReport::Kind::ExcludedDirect;
            excluded.insert(d);
        } else {
            long witness = 0;
            for (long d2 : divisors(d))
                if (d2 < d && excluded.count(d2)) { witness = d2; break; }
            if (witness) {
                e.kind = SpectrumReport::Kind::ExcludedByClosure;
                e.closure_witness = witness;
                excluded.insert(d);
            } else {
                e.kind = SpectrumReport::Kind::Open;
            }
        }
        rep.entries.push_back(e);
    }
    return rep;
}

KimmerleReport Engine::kimmerle() {
    KimmerleReport rep;
    rep.group_graph = table_.prime_graph();
    std::vector<std::pair<long, long>> missing;
    for (long p : rep.group_graph.vertices)
        for (long q : rep.group_graph.vertices)
            if (p < q && !rep.group_graph.has_edge(p, q)) missing.push_back({p, q});

    std::vector<OrderVerdict::Status> status(missing.size());
    parallel_for(missing.size(), [&](size_t i) {
        status[i] = order_verdict(missing[i].first * missing[i].second).status;
    });

    rep.confirmed = true;
    for (size_t i = 0; i < missing.size(); ++i) {
        KimmerleReport::Edge e;
        e.p = missing[i].first;
        e.q = missing[i].second;
        e.order = e.p * e.q;
        e.status = status[i];
        if (e.status != OrderVerdict::Status::Excluded) {
            rep.confirmed = false;
            rep.unresolved.push_back(e.order);
        }
        rep.missing_edges.push_back(e);
    }
    std::sort(rep.unresolved.begin(), rep.unresolved.end());
    return rep;
}

}  // namespace helpkit
