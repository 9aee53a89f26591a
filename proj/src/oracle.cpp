#include <emtrace/oracle.hpp>

#include <atomic>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

namespace emtrace {

namespace {

// min(base^exp, cap + 1), overflow-safe
std::uint64_t pow_capped(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base == 0)
            return 0;
        if (out > cap / base)
            return cap + 1;
        out *= base;
    }
    return out;
}

std::uint64_t budget_cap(const SearchBudget& budget) {
    if (budget.max_candidates < 1)
        throw std::invalid_argument("search budget must allow at least one candidate");
    return static_cast<std::uint64_t>(budget.max_candidates);
}

void decode_base(std::uint64_t ordinal, std::size_t base, std::vector<std::uint32_t>& cells) {
    for (std::size_t i = cells.size(); i-- > 0;) {
        cells[i] = static_cast<std::uint32_t>(ordinal % base);
        ordinal /= base;
    }
}

} // namespace

CohomologyVerdict cohomologous(const TabulatedCocycle& a, const TabulatedCocycle& b,
                               const SearchBudget& budget, unsigned threads) {
    if (a.domain != b.domain || a.coeffs != b.coeffs)
        throw std::invalid_argument("cocycle tables live on different groups");
    const GroupTable g(a.domain);
    const GroupTable m(a.coeffs);
    const std::size_t n = g.size();
    const std::size_t msize = m.size();
    const std::size_t ncells = n * n;
    const TabulatedCocycle d = subtract(a, b);

    const std::uint64_t cap = budget_cap(budget);
    const std::uint64_t total = pow_capped(msize, ncells, cap);
    CohomologyVerdict verdict;
    verdict.candidates_total = total;
    if (total > cap) {
        verdict.status = CohomologyVerdict::Status::BudgetExceeded;
        verdict.candidates_examined = 0;
        return verdict;
    }

    // candidate k matches iff (delta k, Alt k) equals d entry-for-entry
    auto matches = [&](const std::vector<std::uint32_t>& k) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                if (m.sub(k[x * n + y], k[y * n + x]) != d.c[x * n + y])
                    return false;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                const std::size_t xy = g.add(x, y);
                for (std::size_t z = 0; z < n; ++z) {
                    std::uint32_t v = m.sub(k[y * n + z], k[xy * n + z]);
                    v = m.add(v, k[x * n + g.add(y, z)]);
                    v = m.sub(v, k[x * n + y]);
                    if (v != d.h[(x * n + y) * n + z])
                        return false;
                }
            }
        return true;
    };

    // flat search partitioned by the leading cochain value; each worker
    // scans its slice in ascending order, and the canonical minimum of the
    // local matches is the witness
    const std::uint64_t per_leading = total / msize;
    std::atomic<std::uint64_t> best{UINT64_MAX};
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(msize)));

    auto scan = [&](std::size_t lead_begin, std::size_t lead_end) {
        std::vector<std::uint32_t> k(ncells, 0);
        for (std::size_t lead = lead_begin; lead < lead_end; ++lead) {
            std::uint64_t ordinal = lead * per_leading;
            if (ordinal > best.load(std::memory_order_relaxed))
                return;
            std::fill(k.begin(), k.end(), 0);
            k[0] = static_cast<std::uint32_t>(lead);
            for (std::uint64_t i = 0; i < per_leading; ++i, ++ordinal) {
                if ((i & 0xfff) == 0 && ordinal > best.load(std::memory_order_relaxed))
                    return;
                if (matches(k)) {
                    std::uint64_t cur = best.load();
                    while (ordinal < cur && !best.compare_exchange_weak(cur, ordinal)) {
                    }
                    return; // ascending scan: first local match is the local minimum
                }
                for (std::size_t p = ncells; p-- > 1;) {
                    if (++k[p] < msize)
                        break;
                    k[p] = 0;
                }
            }
        }
    };

    if (workers <= 1) {
        scan(0, msize);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(scan, msize * w / workers, msize * (w + 1) / workers);
        for (auto& t : pool)
            t.join();
    }

    const std::uint64_t found = best.load();
    if (found == UINT64_MAX) {
        verdict.status = CohomologyVerdict::Status::NotCohomologousExhaustive;
        verdict.candidates_examined = total;
        return verdict;
    }

    Cochain2Table witness = zero_cochain(a.domain, a.coeffs);
    decode_base(found, msize, witness.values);
    if (coboundary(witness) != d) // witnesses are re-verified before the verdict
        throw std::logic_error("cohomologous: witness failed re-verification");
    verdict.status = CohomologyVerdict::Status::CohomologousWithWitness;
    verdict.witness = std::move(witness);
    verdict.candidates_examined = found + 1;
    return verdict;
}

RepresentSearchResult exhaustive_representable(const QuadraticFormTable& q,
                                               const SearchBudget& budget) {
    const GroupTable g(q.domain);
    const GroupTable m(q.coeffs);
    const std::size_t k = q.domain.torsion_count();
    const auto& torsion = q.domain.torsion();
    if (q.values.size() != g.size())
        throw std::invalid_argument("quadratic table has wrong size");

    std::vector<std::vector<GroupElement>> candidates;
    candidates.reserve(k * k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            candidates.push_back(
                torsion_subgroup_elements(q.coeffs, std::gcd(torsion[a], torsion[b])));

    const std::uint64_t cap = budget_cap(budget);
    std::uint64_t total = 1;
    for (const auto& c : candidates) {
        total = total > cap / c.size() ? cap + 1 : total * c.size();
        if (total > cap)
            throw BudgetExceededError("bilinear search space exceeds the budget", total, cap);
    }

    RepresentSearchResult result;
    result.candidates_total = total;

    const auto elems = q.domain.elements();
    std::vector<std::size_t> digits(candidates.size(), 0);
    for (std::uint64_t ordinal = 0; ordinal < total; ++ordinal) {
        bool match = true;
        for (std::size_t i = 0; i < elems.size() && match; ++i) {
            const GroupElement& x = elems[i];
            GroupElement acc = q.coeffs.zero();
            for (std::size_t a = 0; a < k; ++a) {
                if (x[a] == 0)
                    continue;
                for (std::size_t b = 0; b < k; ++b) {
                    if (x[b] == 0)
                        continue;
                    acc = q.coeffs.add(
                        acc, q.coeffs.scalar_mul(x[a] * x[b], candidates[a * k + b][digits[a * k + b]]));
                }
            }
            match = m.index_of(acc) == q.values[i];
        }
        if (match) {
            BilinearFormMatrix c = BilinearFormMatrix::zero(q.domain, q.domain, q.coeffs);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    c.at(a, b) = candidates[a * k + b][digits[a * k + b]];
            result.witness = std::move(c);
            result.candidates_examined = ordinal + 1;
            return result;
        }
        for (std::size_t p = candidates.size(); p-- > 0;) {
            if (++digits[p] < candidates[p].size())
                break;
            digits[p] = 0;
        }
    }
    result.candidates_examined = total;
    return result;
}

namespace {

// one defining equation instance, flattened to table-cell operands
struct PackedConstraint {
    std::uint8_t kind; // 0 pentagon, 1 hexagon-1, 2 hexagon-2
    std::uint32_t cell[6];
};

bool constraint_holds(const PackedConstraint& pc, const std::vector<std::uint32_t>& a,
                      const GroupTable& m) {
    switch (pc.kind) {
    case 0: // cocycle identity
        return m.add(a[pc.cell[0]], m.add(a[pc.cell[1]], a[pc.cell[2]])) ==
               m.add(a[pc.cell[3]], a[pc.cell[4]]);
    case 1: // -h(y,z,x) + c(x,y+z) - h(x,y,z) = c(x,z) - h(y,x,z) + c(x,y)
        return m.sub(m.sub(a[pc.cell[0]], a[pc.cell[1]]), a[pc.cell[2]]) ==
               m.add(m.sub(a[pc.cell[3]], a[pc.cell[4]]), a[pc.cell[5]]);
    default: // h(z,x,y) + c(x+y,z) + h(x,y,z) = c(x,z) + h(x,z,y) + c(y,z)
        return m.add(a[pc.cell[0]], m.add(a[pc.cell[1]], a[pc.cell[2]])) ==
               m.add(a[pc.cell[3]], m.add(a[pc.cell[4]], a[pc.cell[5]]));
    }
}

} // namespace

CocycleEnumeration enumerate_cocycles(const FgAbGroup& gg, const FgAbGroup& mm,
                                      const SearchBudget& budget) {
    const GroupTable g(gg);
    const GroupTable m(mm);
    const std::size_t n = g.size();
    const std::size_t msize = m.size();
    const std::size_t c_cells = n * n;
    const std::size_t ncells = c_cells + n * n * n;

    auto cc = [&](std::size_t x, std::size_t y) -> std::uint32_t {
        return static_cast<std::uint32_t>(x * n + y);
    };
    auto hc = [&](std::size_t x, std::size_t y, std::size_t z) -> std::uint32_t {
        return static_cast<std::uint32_t>(c_cells + (x * n + y) * n + z);
    };

    // bucket each instance under the last cell the DFS assigns
    std::vector<std::vector<PackedConstraint>> buckets(ncells);
    auto push = [&](PackedConstraint pc, int arity) {
        std::uint32_t last = 0;
        for (int i = 0; i < arity; ++i)
            last = std::max(last, pc.cell[i]);
        buckets[last].push_back(pc);
    };
    for (std::size_t g1 = 0; g1 < n; ++g1)
        for (std::size_t g2 = 0; g2 < n; ++g2)
            for (std::size_t g3 = 0; g3 < n; ++g3)
                for (std::size_t g4 = 0; g4 < n; ++g4)
                    push({0,
                          {hc(g1, g2, g3), hc(g1, g.add(g2, g3), g4), hc(g2, g3, g4),
                           hc(g.add(g1, g2), g3, g4), hc(g1, g2, g.add(g3, g4)), 0}},
                         5);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                push({1,
                      {cc(x, g.add(y, z)), hc(y, z, x), hc(x, y, z), cc(x, z), hc(y, x, z),
                       cc(x, y)}},
                     6);
                push({2,
                      {hc(z, x, y), cc(g.add(x, y), z), hc(x, y, z), cc(x, z), hc(x, z, y),
                       cc(y, z)}},
                     6);
            }

    const std::uint64_t cap = budget_cap(budget);
    CocycleEnumeration out;
    std::vector<std::uint32_t> assign(ncells, 0);

    std::function<void(std::size_t)> descend = [&](std::size_t pos) {
        if (pos == ncells) {
            TabulatedCocycle tc;
            tc.domain = gg;
            tc.coeffs = mm;
            tc.c.assign(assign.begin(), assign.begin() + static_cast<std::ptrdiff_t>(c_cells));
            tc.h.assign(assign.begin() + static_cast<std::ptrdiff_t>(c_cells), assign.end());
            out.cocycles.push_back(std::move(tc));
            return;
        }
        for (std::size_t v = 0; v < msize; ++v) {
            if (++out.nodes_explored > cap)
                throw BudgetExceededError("cocycle enumeration exceeded the node budget",
                                          out.nodes_explored, cap);
            assign[pos] = static_cast<std::uint32_t>(v);
            bool ok = true;
            for (const auto& pc : buckets[pos]) {
                if (!constraint_holds(pc, assign, m)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                descend(pos + 1);
        }
        assign[pos] = 0;
    };
    descend(0);
    return out;
}

ClassCountResult class_count(const FgAbGroup& gg, const FgAbGroup& mm,
                             const SearchBudget& budget) {
    auto enumeration = enumerate_cocycles(gg, mm, budget);
    const GroupTable g(gg);
    const GroupTable m(mm);
    const std::size_t n = g.size();
    const std::size_t msize = m.size();
    const std::size_t ncells = n * n;

    const std::uint64_t cap = budget_cap(budget);
    const std::uint64_t total = pow_capped(msize, ncells, cap);
    if (total > cap)
        throw BudgetExceededError("coboundary image enumeration exceeds the budget", total, cap);

    // precompute the image of every 2-cochain under the coboundary map
    std::set<std::vector<std::uint32_t>> image;
    Cochain2Table k = zero_cochain(gg, mm);
    for (std::uint64_t ordinal = 0; ordinal < total; ++ordinal) {
        const TabulatedCocycle b = coboundary(k);
        std::vector<std::uint32_t> key = b.h;
        key.insert(key.end(), b.c.begin(), b.c.end());
        image.insert(std::move(key));
        for (std::size_t p = ncells; p-- > 0;) {
            if (++k.values[p] < msize)
                break;
            k.values[p] = 0;
        }
    }

    // union-find: two cocycles are identified iff their difference is a coboundary
    const std::size_t z = enumeration.cocycles.size();
    std::vector<std::size_t> parent(z);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (std::size_t i = 0; i < z; ++i)
        for (std::size_t j = i + 1; j < z; ++j) {
            const TabulatedCocycle diff =
                subtract(enumeration.cocycles[i], enumeration.cocycles[j]);
            std::vector<std::uint32_t> key = diff.h;
            key.insert(key.end(), diff.c.begin(), diff.c.end());
            if (image.contains(key))
                parent[find(i)] = find(j);
        }

    ClassCountResult result;
    result.cocycles = z;
    result.coboundaries = image.size();
    result.dfs_nodes = enumeration.nodes_explored;
    result.flat_candidates = total;
    for (std::size_t i = 0; i < z; ++i)
        if (find(i) == i)
            ++result.classes;
    return result;
}

SeparationResult separate_all_quads(const FgAbGroup& g, const FgAbGroup& m,
                                    const SearchBudget& budget, unsigned threads) {
    const auto quads = enumerate_quads(g, m);
    std::vector<TabulatedCocycle> tables;
    tables.reserve(quads.size());
    for (const auto& q : quads)
        tables.push_back(tabulate(from_quad(q)));

    // fail fast and deterministically when a single pair would blow the budget
    const std::uint64_t cap = budget_cap(budget);
    const std::uint64_t per_pair =
        pow_capped(static_cast<std::uint64_t>(m.order()), static_cast<std::size_t>(g.order()) *
                                                              static_cast<std::size_t>(g.order()),
                   cap);
    if (per_pair > cap)
        throw BudgetExceededError("coboundary search space exceeds the budget", per_pair, cap);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = i + 1; j < tables.size(); ++j)
            pairs.emplace_back(i, j);

    std::vector<std::optional<Cochain2Table>> failures(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t p = next.fetch_add(1);
            if (p >= pairs.size())
                return;
            const auto [i, j] = pairs[p];
            CohomologyVerdict v = cohomologous(tables[i], tables[j], budget, 1);
            if (v.status == CohomologyVerdict::Status::CohomologousWithWitness)
                failures[p] = std::move(v.witness);
        }
    };
    const unsigned workers =
        std::max<std::size_t>(1, std::min<std::size_t>(threads, pairs.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    SeparationResult result;
    result.forms = quads.size();
    result.pairs_checked = pairs.size();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (failures[p]) {
            result.counterexample = SeparationCounterexample{pairs[p].first, pairs[p].second,
                                                             std::move(*failures[p])};
            break;
        }
    }
    return result;
}

bool elementwise_trace_criterion(const QuadraticFormParams& q) {
    for (const auto& x : q.domain.elements()) {
        const Coord ord = *q.domain.element_order(x);
        if ((ord & (ord - 1)) != 0)
            continue; // not in the 2-primary component
        if (!q.coeffs.is_zero(q.coeffs.scalar_mul(ord, eval_quad(q, x))))
            return false;
    }
    return true;
}

} // namespace emtrace
