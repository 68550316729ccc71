#pragma once
#include "helpkit/constraints.hpp"

namespace helpkit {

// Closed integer ranges certified to contain all solutions.
struct Box {
    bool infeasible = false;  // contradiction found before enumeration
    std::map<std::string, std::pair<Integer, Integer>> ranges;
};

// Thrown when the constraints fail to bound some variable; `variable` names
// the unbounded direction (the witness ray moves along it within sum(nu)=1).
struct UnboundedError : std::runtime_error {
    std::string variable;
    explicit UnboundedError(const std::string& var)
        : std::runtime_error("system is unbounded in variable " + var +
                             "; the character selection is too weak"),
          variable(var) {}
};

// Classes whose coefficient columns coincide in every form carry a single
// aggregate variable (named "a+b+..."); solving over aggregates is exact.
struct ReducedSystem {
    ConstraintSystem sys;                         // over aggregate names
    std::vector<std::vector<std::string>> groups;  // parallel to sys.variables
};
ReducedSystem merge_variables(const ConstraintSystem& sys);

struct FeasibleSet {
    long k = 1;
    Tower tower;
    std::vector<std::string> variables;            // aggregate names, in order
    std::vector<std::vector<std::string>> groups;  // parallel to variables
    std::vector<AugTuple> tuples;                  // keyed by aggregate names
};

// Exact rational Fourier-Motzkin bounds for every variable, using
// 0 <= mu <= deg plus sum(nu) = 1. Throws UnboundedError.
Box derive_box(const ConstraintSystem& sys, long max_rows = 10000);

// All integer points of the box satisfying every constraint and sum(nu) = 1,
// in lexicographic variable order.
std::vector<AugTuple> enumerate_tuples(const ConstraintSystem& sys, const Box& box);

struct VerifyResult {
    bool ok = true;
    std::string violation;  // first failing constraint, empty when ok
    std::vector<std::pair<std::string, Rational>> mu_values;  // label -> value
};
VerifyResult verify(const ConstraintSystem& sys, const AugTuple& tuple);

// build_system + merge + derive_box + enumerate in one step.
FeasibleSet solve_system(const ConstraintSystem& sys, const Tower& tower);

}  // namespace helpkit
