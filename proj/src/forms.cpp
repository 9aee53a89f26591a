#include <emtrace/forms.hpp>

#include <numeric>

namespace emtrace {

namespace {

// offset of (i, j), i < j, in a row-major strict upper triangle over n slots
std::size_t upper_index(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

void check_value_shape(const FgAbGroup& coeffs, const std::vector<GroupElement>& values,
                       std::size_t expected, const char* what) {
    if (values.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(expected) + " coefficients, got " +
                                    std::to_string(values.size()));
    for (const auto& v : values)
        if (v.size() != coeffs.coord_count())
            throw std::invalid_argument(std::string(what) +
                                        ": coefficient has wrong coordinate count");
}

void check_shape(const QuadraticFormParams& q) {
    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    check_value_shape(q.coeffs, q.diag_torsion, k, "diag_torsion");
    check_value_shape(q.coeffs, q.cross_torsion, k * (k - 1) / 2, "cross_torsion");
    check_value_shape(q.coeffs, q.diag_free, r, "diag_free");
    check_value_shape(q.coeffs, q.cross_free, r * (r - 1) / 2, "cross_free");
    check_value_shape(q.coeffs, q.mixed, k * r, "mixed");
}

std::string slot_label(const char* name, std::size_t i) {
    return std::string(name) + "[" + std::to_string(i + 1) + "]";
}

std::string slot_label(const char* name, std::size_t i, std::size_t j) {
    return std::string(name) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

} // namespace

QuadraticFormParams QuadraticFormParams::zero(const FgAbGroup& domain, const FgAbGroup& coeffs) {
    const std::size_t k = domain.torsion_count();
    const std::size_t r = domain.free_rank();
    QuadraticFormParams q;
    q.domain = domain;
    q.coeffs = coeffs;
    q.diag_torsion.assign(k, coeffs.zero());
    q.cross_torsion.assign(k * (k - 1) / 2, coeffs.zero());
    q.diag_free.assign(r, coeffs.zero());
    q.cross_free.assign(r * (r - 1) / 2, coeffs.zero());
    q.mixed.assign(k * r, coeffs.zero());
    return q;
}

GroupElement& QuadraticFormParams::cross_torsion_at(std::size_t i, std::size_t j) {
    return cross_torsion[upper_index(i, j, domain.torsion_count())];
}
const GroupElement& QuadraticFormParams::cross_torsion_at(std::size_t i, std::size_t j) const {
    return cross_torsion[upper_index(i, j, domain.torsion_count())];
}
GroupElement& QuadraticFormParams::cross_free_at(std::size_t j, std::size_t l) {
    return cross_free[upper_index(j, l, domain.free_rank())];
}
const GroupElement& QuadraticFormParams::cross_free_at(std::size_t j, std::size_t l) const {
    return cross_free[upper_index(j, l, domain.free_rank())];
}
GroupElement& QuadraticFormParams::mixed_at(std::size_t i, std::size_t j) {
    return mixed[i * domain.free_rank() + j];
}
const GroupElement& QuadraticFormParams::mixed_at(std::size_t i, std::size_t j) const {
    return mixed[i * domain.free_rank() + j];
}

QuadraticFormParams add(const QuadraticFormParams& a, const QuadraticFormParams& b) {
    if (a.domain != b.domain || a.coeffs != b.coeffs)
        throw std::invalid_argument("cannot add forms on different groups");
    auto add_all = [&](const std::vector<GroupElement>& x, const std::vector<GroupElement>& y) {
        std::vector<GroupElement> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = a.coeffs.add(x[i], y[i]);
        return out;
    };
    QuadraticFormParams q;
    q.domain = a.domain;
    q.coeffs = a.coeffs;
    q.diag_torsion = add_all(a.diag_torsion, b.diag_torsion);
    q.cross_torsion = add_all(a.cross_torsion, b.cross_torsion);
    q.diag_free = add_all(a.diag_free, b.diag_free);
    q.cross_free = add_all(a.cross_free, b.cross_free);
    q.mixed = add_all(a.mixed, b.mixed);
    return q;
}

std::vector<ParamViolation> validate_params(const QuadraticFormParams& q) {
    check_shape(q);
    const auto& torsion = q.domain.torsion();
    const std::size_t k = torsion.size();
    const std::size_t r = q.domain.free_rank();
    std::vector<ParamViolation> out;

    for (std::size_t i = 0; i < k; ++i) {
        Coord ann = gcd_2n_n2(torsion[i]);
        if (!is_killed_by(q.coeffs, q.diag_torsion[i], ann))
            out.push_back({slot_label("m", i), ann, q.diag_torsion[i]});
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            Coord ann = std::gcd(torsion[i], torsion[j]);
            if (!is_killed_by(q.coeffs, q.cross_torsion_at(i, j), ann))
                out.push_back({slot_label("b", i, j), ann, q.cross_torsion_at(i, j)});
        }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (!is_killed_by(q.coeffs, q.mixed_at(i, j), torsion[i]))
                out.push_back({slot_label("t", i, j), torsion[i], q.mixed_at(i, j)});
    return out;
}

GroupElement eval_quad(const QuadraticFormParams& q, const GroupElement& x) {
    check_shape(q);
    const GroupElement xr = q.domain.reduce(x);
    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    const FgAbGroup& m = q.coeffs;

    GroupElement acc = m.zero();
    for (std::size_t i = 0; i < k; ++i)
        acc = m.add(acc, m.scalar_mul(xr[i] * xr[i], q.diag_torsion[i]));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            acc = m.add(acc, m.scalar_mul(xr[i] * xr[j], q.cross_torsion_at(i, j)));
    for (std::size_t j = 0; j < r; ++j)
        acc = m.add(acc, m.scalar_mul(xr[k + j] * xr[k + j], q.diag_free[j]));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            acc = m.add(acc, m.scalar_mul(xr[k + j] * xr[k + l], q.cross_free_at(j, l)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            acc = m.add(acc, m.scalar_mul(xr[i] * xr[k + j], q.mixed_at(i, j)));
    return acc;
}

GroupElement assoc_bilinear(const QuadraticFormParams& q, const GroupElement& x,
                            const GroupElement& y) {
    const FgAbGroup& m = q.coeffs;
    return m.sub(m.sub(eval_quad(q, q.domain.add(x, y)), eval_quad(q, x)), eval_quad(q, y));
}

BilinearFormMatrix BilinearFormMatrix::zero(const FgAbGroup& left, const FgAbGroup& right,
                                            const FgAbGroup& coeffs) {
    BilinearFormMatrix c;
    c.left = left;
    c.right = right;
    c.coeffs = coeffs;
    c.entries.assign(left.coord_count() * right.coord_count(), coeffs.zero());
    return c;
}

GroupElement& BilinearFormMatrix::at(std::size_t a, std::size_t b) {
    return entries[a * right.coord_count() + b];
}
const GroupElement& BilinearFormMatrix::at(std::size_t a, std::size_t b) const {
    return entries[a * right.coord_count() + b];
}

namespace {

// torsion modulus of a coordinate slot; 0 for free slots (no constraint)
Coord slot_annihilator(const FgAbGroup& g, std::size_t slot) {
    return slot < g.torsion_count() ? g.torsion()[slot] : 0;
}

} // namespace

std::vector<ParamViolation> validate_bilinear(const BilinearFormMatrix& c) {
    if (c.entries.size() != c.left.coord_count() * c.right.coord_count())
        throw std::invalid_argument("bilinear matrix has wrong entry count");
    std::vector<ParamViolation> out;
    for (std::size_t a = 0; a < c.left.coord_count(); ++a)
        for (std::size_t b = 0; b < c.right.coord_count(); ++b) {
            const GroupElement& v = c.at(a, b);
            if (v.size() != c.coeffs.coord_count())
                throw std::invalid_argument("bilinear entry has wrong coordinate count");
            for (Coord ann : {slot_annihilator(c.left, a), slot_annihilator(c.right, b)}) {
                if (ann != 0 && !is_killed_by(c.coeffs, v, ann)) {
                    out.push_back({slot_label("C", a, b), ann, v});
                    break;
                }
            }
        }
    return out;
}

GroupElement eval_bilinear(const BilinearFormMatrix& c, const GroupElement& x,
                           const GroupElement& y) {
    const GroupElement xr = c.left.reduce(x);
    const GroupElement yr = c.right.reduce(y);
    GroupElement acc = c.coeffs.zero();
    for (std::size_t a = 0; a < xr.size(); ++a) {
        if (xr[a] == 0)
            continue;
        for (std::size_t b = 0; b < yr.size(); ++b) {
            if (yr[b] == 0)
                continue;
            acc = c.coeffs.add(acc, c.coeffs.scalar_mul(xr[a] * yr[b], c.at(a, b)));
        }
    }
    return acc;
}

QuadraticFormParams phi(const DirectSumSplit& split) {
    const QuadraticFormParams& q1 = split.left;
    const QuadraticFormParams& q2 = split.right;
    if (q1.coeffs != q2.coeffs || q1.coeffs != split.cross.coeffs)
        throw std::invalid_argument("phi: coefficient groups disagree");
    if (split.cross.left != q1.domain || split.cross.right != q2.domain)
        throw std::invalid_argument("phi: cross form domains disagree with the summands");
    check_shape(q1);
    check_shape(q2);

    const std::size_t k1 = q1.domain.torsion_count(), r1 = q1.domain.free_rank();
    const std::size_t k2 = q2.domain.torsion_count(), r2 = q2.domain.free_rank();
    QuadraticFormParams q = QuadraticFormParams::zero(direct_sum(q1.domain, q2.domain), q1.coeffs);

    for (std::size_t i = 0; i < k1; ++i)
        q.diag_torsion[i] = q1.diag_torsion[i];
    for (std::size_t i = 0; i < k2; ++i)
        q.diag_torsion[k1 + i] = q2.diag_torsion[i];
    for (std::size_t j = 0; j < r1; ++j)
        q.diag_free[j] = q1.diag_free[j];
    for (std::size_t j = 0; j < r2; ++j)
        q.diag_free[r1 + j] = q2.diag_free[j];

    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = i + 1; j < k1; ++j)
            q.cross_torsion_at(i, j) = q1.cross_torsion_at(i, j);
    for (std::size_t i = 0; i < k2; ++i)
        for (std::size_t j = i + 1; j < k2; ++j)
            q.cross_torsion_at(k1 + i, k1 + j) = q2.cross_torsion_at(i, j);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k2; ++j)
            q.cross_torsion_at(i, k1 + j) = split.cross.at(i, j);

    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t l = j + 1; l < r1; ++l)
            q.cross_free_at(j, l) = q1.cross_free_at(j, l);
    for (std::size_t j = 0; j < r2; ++j)
        for (std::size_t l = j + 1; l < r2; ++l)
            q.cross_free_at(r1 + j, r1 + l) = q2.cross_free_at(j, l);
    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t l = 0; l < r2; ++l)
            q.cross_free_at(j, r1 + l) = split.cross.at(k1 + j, k2 + l);

    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < r1; ++j)
            q.mixed_at(i, j) = q1.mixed_at(i, j);
    for (std::size_t i = 0; i < k2; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            q.mixed_at(k1 + i, r1 + j) = q2.mixed_at(i, j);
    // G_1 torsion against G_2 free, and G_1 free against G_2 torsion
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            q.mixed_at(i, r1 + j) = split.cross.at(i, k2 + j);
    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t i = 0; i < k2; ++i)
            q.mixed_at(k1 + i, j) = split.cross.at(k1 + j, i);
    return q;
}

DirectSumSplit psi(const QuadraticFormParams& q, SplitPoint at) {
    check_shape(q);
    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    if (at.torsion > k || at.free > r)
        throw std::invalid_argument("psi: split point outside the domain");

    const std::size_t k1 = at.torsion, r1 = at.free;
    const std::size_t k2 = k - k1, r2 = r - r1;
    std::vector<Coord> t1(q.domain.torsion().begin(), q.domain.torsion().begin() + k1);
    std::vector<Coord> t2(q.domain.torsion().begin() + k1, q.domain.torsion().end());
    const FgAbGroup g1(std::move(t1), static_cast<Coord>(r1));
    const FgAbGroup g2(std::move(t2), static_cast<Coord>(r2));

    DirectSumSplit s{BilinearFormMatrix::zero(g1, g2, q.coeffs),
                     QuadraticFormParams::zero(g1, q.coeffs),
                     QuadraticFormParams::zero(g2, q.coeffs)};

    for (std::size_t i = 0; i < k1; ++i)
        s.left.diag_torsion[i] = q.diag_torsion[i];
    for (std::size_t i = 0; i < k2; ++i)
        s.right.diag_torsion[i] = q.diag_torsion[k1 + i];
    for (std::size_t j = 0; j < r1; ++j)
        s.left.diag_free[j] = q.diag_free[j];
    for (std::size_t j = 0; j < r2; ++j)
        s.right.diag_free[j] = q.diag_free[r1 + j];

    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = i + 1; j < k1; ++j)
            s.left.cross_torsion_at(i, j) = q.cross_torsion_at(i, j);
    for (std::size_t i = 0; i < k2; ++i)
        for (std::size_t j = i + 1; j < k2; ++j)
            s.right.cross_torsion_at(i, j) = q.cross_torsion_at(k1 + i, k1 + j);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k2; ++j)
            s.cross.at(i, j) = q.cross_torsion_at(i, k1 + j);

    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t l = j + 1; l < r1; ++l)
            s.left.cross_free_at(j, l) = q.cross_free_at(j, l);
    for (std::size_t j = 0; j < r2; ++j)
        for (std::size_t l = j + 1; l < r2; ++l)
            s.right.cross_free_at(j, l) = q.cross_free_at(r1 + j, r1 + l);
    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t l = 0; l < r2; ++l)
            s.cross.at(k1 + j, k2 + l) = q.cross_free_at(j, r1 + l);

    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < r1; ++j)
            s.left.mixed_at(i, j) = q.mixed_at(i, j);
    for (std::size_t i = 0; i < k2; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            s.right.mixed_at(i, j) = q.mixed_at(k1 + i, r1 + j);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            s.cross.at(i, k2 + j) = q.mixed_at(i, r1 + j);
    for (std::size_t j = 0; j < r1; ++j)
        for (std::size_t i = 0; i < k2; ++i)
            s.cross.at(k1 + j, i) = q.mixed_at(k1 + i, j);
    return s;
}

std::vector<QuadraticFormParams> enumerate_quads(const FgAbGroup& g, const FgAbGroup& m) {
    if (!g.is_finite())
        throw InfiniteGroupError("enumerate_quads needs a finite domain: " + format_group(g));
    const auto& torsion = g.torsion();
    const std::size_t k = torsion.size();

    // candidate lists per coefficient slot: m_1..m_k then b_ij row-major
    std::vector<std::vector<GroupElement>> slots;
    for (std::size_t i = 0; i < k; ++i)
        slots.push_back(torsion_subgroup_elements(m, gcd_2n_n2(torsion[i])));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            slots.push_back(torsion_subgroup_elements(m, std::gcd(torsion[i], torsion[j])));

    std::size_t total = 1;
    for (const auto& s : slots)
        total *= s.size();

    std::vector<QuadraticFormParams> out;
    out.reserve(total);
    std::vector<std::size_t> digits(slots.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        QuadraticFormParams q = QuadraticFormParams::zero(g, m);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k; ++i)
            q.diag_torsion[i] = slots[pos][digits[pos]], ++pos;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                q.cross_torsion_at(i, j) = slots[pos][digits[pos]], ++pos;
        out.push_back(std::move(q));
        for (std::size_t p = slots.size(); p-- > 0;) {
            if (++digits[p] < slots[p].size())
                break;
            digits[p] = 0;
        }
    }
    return out;
}

QuadraticFormTable tabulate_quad(const QuadraticFormParams& q) {
    const GroupTable m(q.coeffs);
    QuadraticFormTable t;
    t.domain = q.domain;
    t.coeffs = q.coeffs;
    const auto elems = q.domain.elements();
    t.values.reserve(elems.size());
    for (const auto& x : elems)
        t.values.push_back(m.index_of(eval_quad(q, x)));
    return t;
}

QuadraticFormParams fit_params(const QuadraticFormTable& t) {
    const FgAbGroup& g = t.domain;
    const FgAbGroup& m = t.coeffs;
    const Coord n = g.order();
    if (t.values.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("table size does not match the group order");
    const GroupTable mt(m);

    auto value_at = [&](const GroupElement& x) -> GroupElement {
        return mt.element(t.values[static_cast<std::size_t>(g.index_of(x))]);
    };

    const std::size_t k = g.torsion_count();
    QuadraticFormParams q = QuadraticFormParams::zero(g, m);
    for (std::size_t i = 0; i < k; ++i)
        q.diag_torsion[i] = value_at(g.unit(i));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const GroupElement ei = g.unit(i), ej = g.unit(j);
            q.cross_torsion_at(i, j) =
                m.sub(m.sub(value_at(g.add(ei, ej)), value_at(ei)), value_at(ej));
        }

    if (!validate_params(q).empty())
        throw NotQuadraticError("fitted coefficients violate the torsion constraints");
    const auto elems = g.elements();
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (mt.index_of(eval_quad(q, elems[i])) != t.values[i])
            throw NotQuadraticError("table is not quadratic: mismatch at " +
                                    format_element(elems[i]));
    return q;
}

} // namespace emtrace
