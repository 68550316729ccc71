#pragma once
#include <mutex>

#include "helpkit/solver.hpp"

namespace helpkit {

// All divisors d > 1 of exp(G): element orders (Zassenhaus candidates) plus
// non-element orders (exclusion candidates).
std::set<long> candidate_orders(const CharacterTable& table);

struct TowersResult {
    bool unbounded = false;
    std::string note;  // set when unbounded
    std::vector<std::pair<Tower, FeasibleSet>> list;  // nonempty sets only
};

struct OrderVerdict {
    long k = 1;
    enum class Status { Excluded, RationallyTrivial, Open };
    Status status = Status::Open;
    bool unbounded = false;  // some variable escaped the box (CLI exit 4)
    std::vector<std::pair<Tower, FeasibleSet>> towers;  // surviving towers
    std::vector<CharRef> selection;
    std::vector<std::string> notes;  // screen warnings, unbounded reports
    static const char* status_name(Status s);
};

struct SpectrumReport {
    enum class Kind { ElementOrder, ExcludedDirect, ExcludedByClosure, Open };
    struct Entry {
        long order = 1;
        Kind kind = Kind::Open;
        long closure_witness = 0;  // the excluded divisor, for closure entries
    };
    std::vector<Entry> entries;  // ascending by order
    std::set<long> open_orders() const;
    std::set<long> excluded_orders() const;
};

struct KimmerleReport {
    PrimeGraph group_graph;
    struct Edge {
        long p = 0, q = 0, order = 0;
        OrderVerdict::Status status = OrderVerdict::Status::Open;
    };
    std::vector<Edge> missing_edges;  // prime pairs without a group element
    bool confirmed = false;           // all missing edges excluded
    std::vector<long> unresolved;     // orders pq not excluded
};

// Orchestrates the divisor-lattice recursion with memoized feasible towers.
// A character restriction (from the CLI) replaces the all-characters default;
// at every order it is filtered down to applicable, covering, screened rows.
class Engine {
public:
    explicit Engine(const CharacterTable& table,
                    std::optional<std::vector<CharRef>> restriction = std::nullopt);

    const CharacterTable& table() const { return table_; }

    // Applicable characters for order k: Brauer primes coprime to k, plus the
    // Proposition-1 consistency screen. Warnings are appended when given.
    std::vector<CharRef> selection_for(long k,
                                       std::vector<std::string>* warnings) const;

    const TowersResult& feasible_towers(long k);
    OrderVerdict order_verdict(long k);
    SpectrumReport spectrum();
    KimmerleReport kimmerle();

    // Max worker threads: HELPKIT_THREADS when set, else hardware concurrency.
    static int thread_budget();

private:
    const CharacterTable& table_;
    std::optional<std::vector<CharRef>> restriction_;
    std::map<long, TowersResult> memo_;
    std::mutex memo_mutex_;
};

}  // namespace helpkit
