#include <emtrace/represent.hpp>

#include <sstream>

namespace emtrace {

bool TwoTorsionCharacter::is_zero() const {
    for (const auto& v : values)
        if (!coeffs.is_zero(v))
            return false;
    return true;
}

TwoTorsionCharacter theta(const QuadraticFormParams& q) {
    if (!validate_params(q).empty())
        throw std::invalid_argument("theta needs valid quadratic form parameters");
    TwoTorsionCharacter ch;
    ch.coeffs = q.coeffs;
    ch.witnesses = two_primary_generators(q.domain);
    ch.values.reserve(ch.witnesses.size());
    for (const auto& w : ch.witnesses)
        ch.values.push_back(q.coeffs.scalar_mul(w.order, eval_quad(q, w.generator)));
    return ch;
}

bool is_trace_of_bilinear(const QuadraticFormParams& q) {
    return theta(q).is_zero();
}

BilinearFormMatrix bilinear_witness(const QuadraticFormParams& q) {
    TwoTorsionCharacter ch = theta(q);
    if (!ch.is_zero()) {
        std::ostringstream os;
        os << "quadratic form is not the trace of a bilinear form; theta =";
        for (const auto& v : ch.values)
            os << " " << format_element(v);
        throw NotRepresentableError(os.str(), std::move(ch));
    }

    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    BilinearFormMatrix c = BilinearFormMatrix::zero(q.domain, q.domain, q.coeffs);
    for (std::size_t i = 0; i < k; ++i)
        c.at(i, i) = q.diag_torsion[i];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            c.at(i, j) = q.cross_torsion_at(i, j);
    for (std::size_t j = 0; j < r; ++j)
        c.at(k + j, k + j) = q.diag_free[j];
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            c.at(k + j, k + l) = q.cross_free_at(j, l);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            c.at(i, k + j) = q.mixed_at(i, j);
    return c;
}

Coord forgetful_image_order(const FgAbGroup& g, const FgAbGroup& m) {
    Coord m2 = 1;
    for (Coord t : m.torsion())
        m2 *= std::gcd(t, Coord{2});
    std::size_t even_factors = 0;
    for (Coord t : canonicalize(g).torsion())
        if (t % 2 == 0)
            ++even_factors;
    Coord out = 1;
    for (std::size_t i = 0; i < even_factors; ++i)
        out *= m2;
    return out;
}

SymmetricClassification classify_symmetric(const QuadraticFormParams& q) {
    if (!validate_params(q).empty())
        throw std::invalid_argument("classify_symmetric needs valid parameters");
    const auto& torsion = q.domain.torsion();
    const std::size_t k = torsion.size();
    const std::size_t r = q.domain.free_rank();
    const FgAbGroup& m = q.coeffs;

    SymmetricClassification out;
    std::vector<std::string> bad;
    auto label = [](const char* name, std::size_t i, std::size_t j) {
        return std::string(name) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
    };

    for (std::size_t i = 0; i < k; ++i) {
        const GroupElement& v = q.diag_torsion[i];
        if (!is_killed_by(m, v, 2) || (torsion[i] % 2 != 0 && !m.is_zero(v)))
            bad.push_back("m[" + std::to_string(i + 1) + "]");
    }
    for (std::size_t j = 0; j < r; ++j)
        if (!is_killed_by(m, q.diag_free[j], 2))
            bad.push_back("l[" + std::to_string(j + 1) + "]");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (!m.is_zero(q.cross_torsion_at(i, j)))
                bad.push_back(label("b", i, j));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            if (!m.is_zero(q.cross_free_at(j, l)))
                bad.push_back(label("f", j, l));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (!m.is_zero(q.mixed_at(i, j)))
                bad.push_back(label("t", i, j));

    if (!bad.empty()) {
        out.offending = std::move(bad);
        return out;
    }
    SymmetricQuadSpec s;
    s.domain = q.domain;
    s.coeffs = q.coeffs;
    s.torsion_values = q.diag_torsion;
    s.free_values = q.diag_free;
    out.spec = std::move(s);
    return out;
}

std::vector<SymmetricQuadSpec> enumerate_symmetric(const FgAbGroup& g, const FgAbGroup& m) {
    const auto& torsion = g.torsion();
    const std::size_t k = torsion.size();
    const std::size_t r = g.free_rank();
    const std::vector<GroupElement> two_torsion = torsion_subgroup_elements(m, 2);
    const GroupElement zero = m.zero();

    // one free choice in M[2] per even torsion factor and per free slot
    std::vector<std::size_t> choice_slots;
    for (std::size_t i = 0; i < k; ++i)
        if (torsion[i] % 2 == 0)
            choice_slots.push_back(i);
    const std::size_t digits = choice_slots.size() + r;

    std::size_t total = 1;
    for (std::size_t i = 0; i < digits; ++i)
        total *= two_torsion.size();

    std::vector<SymmetricQuadSpec> out;
    out.reserve(total);
    std::vector<std::size_t> odo(digits, 0);
    for (std::size_t n = 0; n < total; ++n) {
        SymmetricQuadSpec s;
        s.domain = g;
        s.coeffs = m;
        s.torsion_values.assign(k, zero);
        s.free_values.assign(r, zero);
        for (std::size_t d = 0; d < choice_slots.size(); ++d)
            s.torsion_values[choice_slots[d]] = two_torsion[odo[d]];
        for (std::size_t j = 0; j < r; ++j)
            s.free_values[j] = two_torsion[odo[choice_slots.size() + j]];
        out.push_back(std::move(s));
        for (std::size_t d = digits; d-- > 0;) {
            if (++odo[d] < two_torsion.size())
                break;
            odo[d] = 0;
        }
    }
    return out;
}

StructuredCocycle symmetric_rep(const SymmetricQuadSpec& s) {
    const auto& torsion = s.domain.torsion();
    if (s.torsion_values.size() != torsion.size() || s.free_values.size() != s.domain.free_rank())
        throw std::invalid_argument("symmetric spec has wrong value counts");
    for (std::size_t i = 0; i < torsion.size(); ++i) {
        if (!is_killed_by(s.coeffs, s.torsion_values[i], 2))
            throw std::invalid_argument("symmetric spec value m[" + std::to_string(i + 1) +
                                        "] is not 2-torsion");
        if (torsion[i] % 2 != 0 && !s.coeffs.is_zero(s.torsion_values[i]))
            throw std::invalid_argument("symmetric spec value m[" + std::to_string(i + 1) +
                                        "] must vanish on an odd factor");
    }
    for (const auto& v : s.free_values)
        if (!is_killed_by(s.coeffs, v, 2))
            throw std::invalid_argument("symmetric spec free value is not 2-torsion");

    QuadraticFormParams q = QuadraticFormParams::zero(s.domain, s.coeffs);
    q.diag_torsion = s.torsion_values;
    q.diag_free = s.free_values;
    return from_quad(q); // every carry n_i * m_i vanishes, so h = 0
}

bool is_symmetric_cocycle(const TabulatedCocycle& tc) {
    const GroupTable m(tc.coeffs);
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (m.add(tc.c[x * n + y], tc.c[y * n + x]) != m.index_of(tc.coeffs.zero()))
                return false;
    return true;
}

} // namespace emtrace
