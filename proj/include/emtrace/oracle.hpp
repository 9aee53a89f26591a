#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <emtrace/cocycles.hpp>
#include <emtrace/forms.hpp>
#include <emtrace/groups.hpp>

namespace emtrace {

struct SearchBudget {
    std::int64_t max_candidates = 10'000'000; // flat loops: raw candidates; DFS: explored nodes
    int max_violation_reports = 16;
};

struct CohomologyVerdict {
    enum class Status {
        CohomologousWithWitness,
        NotCohomologousExhaustive,
        BudgetExceeded,
    };

    Status status;
    std::optional<Cochain2Table> witness; // set iff cohomologous; re-verified before return
    std::uint64_t candidates_total = 0;
    std::uint64_t candidates_examined = 0; // ordinal of the witness + 1, or the full count
};

/// Decides whether a - b is a coboundary by enumerating every 2-cochain in
/// canonical order. The witness is the canonically smallest one; a
/// not-cohomologous verdict is only issued after full exhaustion. When the
/// candidate count |M|^(|G|^2) exceeds the budget no search is attempted.
CohomologyVerdict cohomologous(const TabulatedCocycle& a, const TabulatedCocycle& b,
                               const SearchBudget& budget = {}, unsigned threads = 1);

struct RepresentSearchResult {
    std::optional<BilinearFormMatrix> witness;
    std::uint64_t candidates_total = 0;
    std::uint64_t candidates_examined = 0;
};

/// Searches every annihilator-respecting bilinear coefficient matrix for
/// one whose diagonal equals q. Throws BudgetExceededError when the
/// candidate space is over budget.
RepresentSearchResult exhaustive_representable(const QuadraticFormTable& q,
                                               const SearchBudget& budget = {});

struct CocycleEnumeration {
    std::vector<TabulatedCocycle> cocycles; // canonical (lexicographic) order
    std::uint64_t nodes_explored = 0;
};

/// All 2-abelian 3-cocycles on (G, M) by depth-first assignment of the c
/// table then the h table, checking each defining equation as soon as its
/// last input is assigned. Throws BudgetExceededError on node overrun.
CocycleEnumeration enumerate_cocycles(const FgAbGroup& g, const FgAbGroup& m,
                                      const SearchBudget& budget = {});

struct ClassCountResult {
    Coord classes = 0;
    std::size_t cocycles = 0;     // |Z|
    std::size_t coboundaries = 0; // |B|
    std::uint64_t dfs_nodes = 0;
    std::uint64_t flat_candidates = 0; // 2-cochains enumerated for the coboundary image
};

/// Number of cohomology classes: enumerate_cocycles quotiented by the
/// coboundary image (precomputed over all 2-cochains), via union-find.
ClassCountResult class_count(const FgAbGroup& g, const FgAbGroup& m,
                             const SearchBudget& budget = {});

struct SeparationCounterexample {
    std::size_t first_index;
    std::size_t second_index;
    Cochain2Table witness;
};

struct SeparationResult {
    std::size_t forms = 0;
    std::size_t pairs_checked = 0;
    std::optional<SeparationCounterexample> counterexample;

    bool ok() const { return !counterexample.has_value(); }
};

/// Injectivity desk check: asserts that the constructed cocycles of any two
/// distinct quadratic forms are not cohomologous, by full coboundary search
/// per pair. Returns the canonically first failing pair, if any.
SeparationResult separate_all_quads(const FgAbGroup& g, const FgAbGroup& m,
                                    const SearchBudget& budget = {}, unsigned threads = 1);

/// The element-by-element form of the representability criterion: true iff
/// |x| * q(x) = 0 for every x of 2-power order. Finite domains only; kept
/// as an independent cross-check of the generator criterion.
bool elementwise_trace_criterion(const QuadraticFormParams& q);

} // namespace emtrace
