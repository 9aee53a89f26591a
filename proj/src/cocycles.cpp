#include <emtrace/cocycles.hpp>

#include <sstream>
#include <thread>

namespace emtrace {

namespace {

std::string violations_message(const std::vector<ParamViolation>& violations) {
    std::ostringstream os;
    os << "invalid quadratic form parameters:";
    for (const auto& v : violations)
        os << " " << v.coefficient << "=" << format_element(v.value) << " not killed by "
           << v.annihilator << ";";
    return os.str();
}

} // namespace

StructuredCocycle base_cyclic(Coord n, const FgAbGroup& coeffs, const GroupElement& m) {
    if (n < 2)
        throw std::invalid_argument("cyclic modulus must be >= 2");
    if (!is_killed_by(coeffs, m, gcd_2n_n2(n)))
        throw std::invalid_argument("coefficient not annihilated by gcd(2n, n^2) = " +
                                    std::to_string(gcd_2n_n2(n)));
    QuadraticFormParams q = QuadraticFormParams::zero(FgAbGroup({n}), coeffs);
    q.diag_torsion[0] = coeffs.reduce(m);
    return from_quad(q);
}

StructuredCocycle from_quad(const QuadraticFormParams& q) {
    const auto violations = validate_params(q);
    if (!violations.empty())
        throw std::invalid_argument(violations_message(violations));

    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    StructuredCocycle sc;
    sc.domain = q.domain;
    sc.coeffs = q.coeffs;
    sc.c_matrix = BilinearFormMatrix::zero(q.domain, q.domain, q.coeffs);
    for (std::size_t i = 0; i < k; ++i)
        sc.c_matrix.at(i, i) = q.diag_torsion[i];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            sc.c_matrix.at(i, j) = q.cross_torsion_at(i, j);
    for (std::size_t j = 0; j < r; ++j)
        sc.c_matrix.at(k + j, k + j) = q.diag_free[j];
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            sc.c_matrix.at(k + j, k + l) = q.cross_free_at(j, l);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            sc.c_matrix.at(i, k + j) = q.mixed_at(i, j);

    sc.carry.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        sc.carry.push_back(q.coeffs.scalar_mul(q.domain.torsion()[i], q.diag_torsion[i]));
    return sc;
}

GroupElement eval_h(const StructuredCocycle& sc, const GroupElement& x, const GroupElement& y,
                    const GroupElement& z) {
    const FgAbGroup& g = sc.domain;
    const FgAbGroup& m = sc.coeffs;
    const GroupElement xr = g.reduce(x), yr = g.reduce(y), zr = g.reduce(z);
    GroupElement acc = m.zero();
    for (std::size_t i = 0; i < g.torsion_count(); ++i)
        if (yr[i] + zr[i] >= g.torsion()[i]) // carry in the i-th cyclic factor
            acc = m.add(acc, m.scalar_mul(xr[i], sc.carry[i]));
    return acc;
}

GroupElement eval_c(const StructuredCocycle& sc, const GroupElement& x, const GroupElement& y) {
    return eval_bilinear(sc.c_matrix, x, y);
}

QuadraticFormParams trace(const StructuredCocycle& sc) {
    const std::size_t k = sc.domain.torsion_count();
    const std::size_t r = sc.domain.free_rank();
    const FgAbGroup& m = sc.coeffs;
    QuadraticFormParams q = QuadraticFormParams::zero(sc.domain, sc.coeffs);
    for (std::size_t i = 0; i < k; ++i)
        q.diag_torsion[i] = sc.c_matrix.at(i, i);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            q.cross_torsion_at(i, j) = m.add(sc.c_matrix.at(i, j), sc.c_matrix.at(j, i));
    for (std::size_t j = 0; j < r; ++j)
        q.diag_free[j] = sc.c_matrix.at(k + j, k + j);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            q.cross_free_at(j, l) = m.add(sc.c_matrix.at(k + j, k + l), sc.c_matrix.at(k + l, k + j));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            q.mixed_at(i, j) = m.add(sc.c_matrix.at(i, k + j), sc.c_matrix.at(k + j, i));
    return q;
}

TabulatedCocycle tabulate(const StructuredCocycle& sc) {
    const GroupTable g(sc.domain);
    const GroupTable m(sc.coeffs);
    const std::size_t n = g.size();

    TabulatedCocycle tc;
    tc.domain = sc.domain;
    tc.coeffs = sc.coeffs;
    tc.h.resize(n * n * n);
    tc.c.resize(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            tc.c[x * n + y] = m.index_of(eval_c(sc, g.element(x), g.element(y)));
            for (std::size_t z = 0; z < n; ++z)
                tc.h[(x * n + y) * n + z] =
                    m.index_of(eval_h(sc, g.element(x), g.element(y), g.element(z)));
        }
    return tc;
}

QuadraticFormTable trace(const TabulatedCocycle& tc) {
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    QuadraticFormTable t;
    t.domain = tc.domain;
    t.coeffs = tc.coeffs;
    t.values.resize(n);
    for (std::size_t x = 0; x < n; ++x)
        t.values[x] = tc.c[x * n + x];
    return t;
}

Cochain2Table zero_cochain(const FgAbGroup& g, const FgAbGroup& m) {
    const std::size_t n = static_cast<std::size_t>(g.order());
    if (!m.is_finite())
        throw InfiniteGroupError("dense cochains need finite coefficients");
    return Cochain2Table{g, m, std::vector<std::uint32_t>(n * n, 0)};
}

Cochain2Table random_cochain(const FgAbGroup& g, const FgAbGroup& m, std::mt19937_64& rng) {
    Cochain2Table k = zero_cochain(g, m);
    const std::uint64_t msize = static_cast<std::uint64_t>(m.order());
    // plain modulo keeps draws reproducible across standard libraries
    for (auto& v : k.values)
        v = static_cast<std::uint32_t>(rng() % msize);
    return k;
}

TabulatedCocycle coboundary(const Cochain2Table& k) {
    const GroupTable g(k.domain);
    const GroupTable m(k.coeffs);
    const std::size_t n = g.size();
    if (k.values.size() != n * n)
        throw std::invalid_argument("cochain table has wrong size");

    TabulatedCocycle tc;
    tc.domain = k.domain;
    tc.coeffs = k.coeffs;
    tc.h.resize(n * n * n);
    tc.c.resize(n * n);
    auto kv = [&](std::size_t a, std::size_t b) { return k.values[a * n + b]; };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            tc.c[x * n + y] = m.sub(kv(x, y), kv(y, x)); // Alt(k)
            for (std::size_t z = 0; z < n; ++z) {
                // (delta k)(x,y,z) = k(y,z) - k(x+y,z) + k(x,y+z) - k(x,y)
                std::uint32_t v = m.sub(kv(y, z), kv(g.add(x, y), z));
                v = m.add(v, kv(x, g.add(y, z)));
                v = m.sub(v, kv(x, y));
                tc.h[(x * n + y) * n + z] = v;
            }
        }
    return tc;
}

TabulatedCocycle subtract(const TabulatedCocycle& a, const TabulatedCocycle& b) {
    if (a.domain != b.domain || a.coeffs != b.coeffs)
        throw std::invalid_argument("cocycle tables live on different groups");
    const GroupTable m(a.coeffs);
    TabulatedCocycle out;
    out.domain = a.domain;
    out.coeffs = a.coeffs;
    out.h.resize(a.h.size());
    out.c.resize(a.c.size());
    for (std::size_t i = 0; i < a.h.size(); ++i)
        out.h[i] = m.sub(a.h[i], b.h[i]);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        out.c[i] = m.sub(a.c[i], b.c[i]);
    return out;
}

namespace {

struct ChunkResult {
    std::uint64_t violations = 0;
    std::vector<IdentityViolation> reports;
};

// runs fn(chunk, begin, end) over contiguous chunks of [0, n); results land
// in per-chunk slots so merging preserves canonical order
template <typename Fn>
void run_chunked(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        fn(0, 0, n);
        return;
    }
    const unsigned workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    }
    for (auto& t : pool)
        t.join();
}

void merge_chunks(std::vector<ChunkResult>& chunks, VerifyReport& report,
                  std::size_t max_reports) {
    for (auto& ch : chunks) {
        report.violation_count += ch.violations;
        for (auto& v : ch.reports) {
            if (report.reports.size() >= max_reports)
                break;
            report.reports.push_back(v);
        }
    }
}

void record(ChunkResult& ch, std::size_t max_reports, IdentityKind kind,
            std::array<std::uint32_t, 4> at, std::uint32_t lhs, std::uint32_t rhs) {
    ++ch.violations;
    if (ch.reports.size() < max_reports)
        ch.reports.push_back({kind, at, lhs, rhs});
}

void check_verify_input(const TabulatedCocycle& tc, const GroupTable& g, const GroupTable& m,
                        const VerifyOptions& opts) {
    const std::size_t n = g.size();
    if (n > opts.max_group_order)
        throw BudgetExceededError("group order " + std::to_string(n) +
                                      " exceeds the verification cap",
                                  n, opts.max_group_order);
    if (tc.h.size() != n * n * n || tc.c.size() != n * n)
        throw std::invalid_argument("cocycle tables have wrong size");
    for (std::uint32_t v : tc.h)
        if (v >= m.size())
            throw std::invalid_argument("h value index out of range");
    for (std::uint32_t v : tc.c)
        if (v >= m.size())
            throw std::invalid_argument("c value index out of range");
}

} // namespace

VerifyReport verify(const TabulatedCocycle& tc, const VerifyOptions& opts) {
    const GroupTable g(tc.domain);
    const GroupTable m(tc.coeffs);
    check_verify_input(tc, g, m, opts);
    const std::size_t n = g.size();
    const auto* h = tc.h.data();
    const auto* c = tc.c.data();
    auto h3 = [&](std::size_t a, std::size_t b, std::size_t d) { return h[(a * n + b) * n + d]; };
    auto c2 = [&](std::size_t a, std::size_t b) { return c[a * n + b]; };

    VerifyReport report;
    report.instances_checked = n * n * n * n + 2 * n * n * n;

    const unsigned threads = opts.threads ? opts.threads : 1;
    std::vector<ChunkResult> chunks(std::min<std::size_t>(threads, n));

    // standard 3-cocycle identity on quadruples
    run_chunked(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
        ChunkResult& ch = chunks[w];
        for (std::size_t g1 = begin; g1 < end; ++g1)
            for (std::size_t g2 = 0; g2 < n; ++g2) {
                const std::size_t g12 = g.add(g1, g2);
                for (std::size_t g3 = 0; g3 < n; ++g3) {
                    const std::size_t g23 = g.add(g2, g3);
                    for (std::size_t g4 = 0; g4 < n; ++g4) {
                        const std::uint32_t lhs =
                            m.add(h3(g1, g2, g3), m.add(h3(g1, g23, g4), h3(g2, g3, g4)));
                        const std::uint32_t rhs =
                            m.add(h3(g12, g3, g4), h3(g1, g2, g.add(g3, g4)));
                        if (lhs != rhs)
                            record(ch, opts.max_reports, IdentityKind::CocycleIdentity,
                                   {static_cast<std::uint32_t>(g1), static_cast<std::uint32_t>(g2),
                                    static_cast<std::uint32_t>(g3), static_cast<std::uint32_t>(g4)},
                                   lhs, rhs);
                    }
                }
            }
    });
    merge_chunks(chunks, report, opts.max_reports);

    // hexagon conditions on triples; the h signs are the ones that make
    // (delta k, Alt k) a cocycle for every 2-cochain k
    chunks.assign(chunks.size(), {});
    run_chunked(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
        ChunkResult& ch = chunks[w];
        for (std::size_t x = begin; x < end; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) {
                    // -h(y,z,x) + c(x,y+z) - h(x,y,z) = c(x,z) - h(y,x,z) + c(x,y)
                    const std::uint32_t lhs =
                        m.sub(m.sub(c2(x, g.add(y, z)), h3(y, z, x)), h3(x, y, z));
                    const std::uint32_t rhs = m.add(m.sub(c2(x, z), h3(y, x, z)), c2(x, y));
                    if (lhs != rhs)
                        record(ch, opts.max_reports, IdentityKind::Compatibility1,
                               {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                static_cast<std::uint32_t>(z), 0},
                               lhs, rhs);
                }
    });
    merge_chunks(chunks, report, opts.max_reports);

    chunks.assign(chunks.size(), {});
    run_chunked(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
        ChunkResult& ch = chunks[w];
        for (std::size_t x = begin; x < end; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) {
                    // h(z,x,y) + c(x+y,z) + h(x,y,z) = c(x,z) + h(x,z,y) + c(y,z)
                    const std::uint32_t lhs =
                        m.add(h3(z, x, y), m.add(c2(g.add(x, y), z), h3(x, y, z)));
                    const std::uint32_t rhs = m.add(c2(x, z), m.add(h3(x, z, y), c2(y, z)));
                    if (lhs != rhs)
                        record(ch, opts.max_reports, IdentityKind::Compatibility2,
                               {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                static_cast<std::uint32_t>(z), 0},
                               lhs, rhs);
                }
    });
    merge_chunks(chunks, report, opts.max_reports);
    return report;
}

VerifyReport normal_form_check(const TabulatedCocycle& tc, const VerifyOptions& opts) {
    const GroupTable g(tc.domain);
    const GroupTable m(tc.coeffs);
    check_verify_input(tc, g, m, opts);
    const std::size_t n = g.size();
    auto h3 = [&](std::size_t a, std::size_t b, std::size_t d) {
        return tc.h[(a * n + b) * n + d];
    };
    auto c2 = [&](std::size_t a, std::size_t b) { return tc.c[a * n + b]; };

    VerifyReport report;
    report.instances_checked = 2 * n * n * n;
    const unsigned threads = opts.threads ? opts.threads : 1;
    std::vector<ChunkResult> chunks(std::min<std::size_t>(threads, n));

    run_chunked(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
        ChunkResult& ch = chunks[w];
        for (std::size_t x = begin; x < end; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) {
                    const std::uint32_t rhs =
                        m.sub(m.add(c2(x, y), c2(x, z)), c2(x, g.add(y, z)));
                    if (h3(x, y, z) != rhs)
                        record(ch, opts.max_reports, IdentityKind::NormalForm1,
                               {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                static_cast<std::uint32_t>(z), 0},
                               h3(x, y, z), rhs);
                }
    });
    merge_chunks(chunks, report, opts.max_reports);

    chunks.assign(chunks.size(), {});
    run_chunked(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
        ChunkResult& ch = chunks[w];
        for (std::size_t x = begin; x < end; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) {
                    const std::uint32_t rhs =
                        m.sub(m.sub(c2(g.add(x, y), z), c2(x, z)), c2(y, z));
                    if (h3(z, x, y) != rhs)
                        record(ch, opts.max_reports, IdentityKind::NormalForm2,
                               {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                static_cast<std::uint32_t>(z), 0},
                               h3(z, x, y), rhs);
                }
    });
    merge_chunks(chunks, report, opts.max_reports);
    return report;
}

bool polarization_identity_holds(const TabulatedCocycle& tc) {
    const GroupTable g(tc.domain);
    const GroupTable m(tc.coeffs);
    const std::size_t n = g.size();
    auto c2 = [&](std::size_t a, std::size_t b) { return tc.c[a * n + b]; };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            const std::size_t xy = g.add(x, y);
            const std::uint32_t pol = m.sub(m.sub(c2(xy, xy), c2(x, x)), c2(y, y));
            if (m.add(c2(x, y), c2(y, x)) != pol)
                return false;
        }
    return true;
}

std::string describe(const IdentityViolation& v, const GroupTable& g, const GroupTable& m) {
    static const char* names[] = {"cocycle identity", "compatibility condition 1",
                                  "compatibility condition 2", "normal form identity 1",
                                  "normal form identity 2"};
    std::ostringstream os;
    os << names[static_cast<int>(v.kind)] << " at (";
    const int arity = v.kind == IdentityKind::CocycleIdentity ? 4 : 3;
    for (int i = 0; i < arity; ++i) {
        if (i)
            os << ", ";
        os << format_element(g.element(v.at[i]));
    }
    os << "): lhs = " << format_element(m.element(v.lhs))
       << ", rhs = " << format_element(m.element(v.rhs));
    return os.str();
}

} // namespace emtrace
