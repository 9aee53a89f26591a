#include <emtrace/groups.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace emtrace {

namespace {

Coord mod_floor(Coord a, Coord n) {
    Coord r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace

FgAbGroup::FgAbGroup(std::vector<Coord> torsion, Coord free_rank) {
    if (free_rank < 0)
        throw std::invalid_argument("free rank must be non-negative");
    free_rank_ = static_cast<std::size_t>(free_rank);
    torsion_.reserve(torsion.size());
    for (Coord n : torsion) {
        if (n < 0)
            throw std::invalid_argument("negative torsion modulus");
        if (n == 0)
            ++free_rank_; // 0 denotes a Z factor
        else if (n >= 2)
            torsion_.push_back(n);
        // n == 1: trivial factor, dropped
    }
}

bool FgAbGroup::is_canonical() const {
    for (std::size_t i = 0; i + 1 < torsion_.size(); ++i)
        if (torsion_[i + 1] % torsion_[i] != 0)
            return false;
    return true;
}

Coord FgAbGroup::order() const {
    if (!is_finite())
        throw InfiniteGroupError("group has free rank " + std::to_string(free_rank_));
    Coord n = 1;
    for (Coord t : torsion_)
        n *= t;
    return n;
}

GroupElement FgAbGroup::unit(std::size_t slot, Coord value) const {
    if (slot >= coord_count())
        throw std::invalid_argument("coordinate slot out of range");
    GroupElement e = zero();
    e[slot] = value;
    return reduce(std::move(e));
}

void FgAbGroup::check_dimension(const GroupElement& x) const {
    if (x.size() != coord_count())
        throw std::invalid_argument("element has " + std::to_string(x.size()) +
                                    " coordinates, group needs " + std::to_string(coord_count()));
}

GroupElement FgAbGroup::reduce(GroupElement raw) const {
    check_dimension(raw);
    for (std::size_t i = 0; i < torsion_.size(); ++i)
        raw[i] = mod_floor(raw[i], torsion_[i]);
    return raw;
}

GroupElement FgAbGroup::add(const GroupElement& x, const GroupElement& y) const {
    check_dimension(x);
    check_dimension(y);
    GroupElement out(coord_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x[i] + y[i];
    return reduce(std::move(out));
}

GroupElement FgAbGroup::negate(const GroupElement& x) const {
    check_dimension(x);
    GroupElement out(coord_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = -x[i];
    return reduce(std::move(out));
}

GroupElement FgAbGroup::sub(const GroupElement& x, const GroupElement& y) const {
    return add(x, negate(y));
}

GroupElement FgAbGroup::scalar_mul(Coord s, const GroupElement& x) const {
    check_dimension(x);
    GroupElement out(coord_count());
    for (std::size_t i = 0; i < torsion_.size(); ++i)
        out[i] = mod_floor(mod_floor(s, torsion_[i]) * x[i], torsion_[i]);
    for (std::size_t i = torsion_.size(); i < out.size(); ++i)
        out[i] = s * x[i];
    return out;
}

bool FgAbGroup::is_zero(const GroupElement& x) const {
    check_dimension(x);
    return std::all_of(x.begin(), x.end(), [](Coord c) { return c == 0; });
}

std::optional<Coord> FgAbGroup::element_order(const GroupElement& x) const {
    check_dimension(x);
    for (std::size_t i = torsion_.size(); i < x.size(); ++i)
        if (x[i] != 0)
            return std::nullopt;
    Coord ord = 1;
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
        Coord xi = mod_floor(x[i], torsion_[i]);
        ord = std::lcm(ord, torsion_[i] / std::gcd(torsion_[i], xi));
    }
    return ord;
}

std::vector<GroupElement> FgAbGroup::elements() const {
    Coord n = order();
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(n));
    GroupElement cur = zero();
    for (Coord i = 0; i < n; ++i) {
        out.push_back(cur);
        // odometer: last coordinate fastest
        for (std::size_t j = torsion_.size(); j-- > 0;) {
            if (++cur[j] < torsion_[j])
                break;
            cur[j] = 0;
        }
    }
    return out;
}

GroupElement FgAbGroup::element_at(Coord index) const {
    Coord n = order();
    if (index < 0 || index >= n)
        throw std::invalid_argument("element index out of range");
    GroupElement out = zero();
    for (std::size_t j = torsion_.size(); j-- > 0;) {
        out[j] = index % torsion_[j];
        index /= torsion_[j];
    }
    return out;
}

Coord FgAbGroup::index_of(const GroupElement& x) const {
    if (!is_finite())
        throw InfiniteGroupError("cannot index elements of an infinite group");
    check_dimension(x);
    Coord idx = 0;
    for (std::size_t j = 0; j < torsion_.size(); ++j)
        idx = idx * torsion_[j] + mod_floor(x[j], torsion_[j]);
    return idx;
}

FgAbGroup canonicalize(const FgAbGroup& g) {
    std::vector<Coord> vals = g.torsion();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            for (std::size_t j = i + 1; j < vals.size(); ++j) {
                if (vals[j] % vals[i] != 0) {
                    Coord d = std::gcd(vals[i], vals[j]);
                    Coord l = std::lcm(vals[i], vals[j]);
                    vals[i] = d;
                    vals[j] = l;
                    changed = true;
                }
            }
        }
    }
    std::erase(vals, 1);
    std::sort(vals.begin(), vals.end());
    return FgAbGroup(std::move(vals), static_cast<Coord>(g.free_rank()));
}

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
    std::vector<Coord> torsion = a.torsion();
    torsion.insert(torsion.end(), b.torsion().begin(), b.torsion().end());
    return FgAbGroup(std::move(torsion), static_cast<Coord>(a.free_rank() + b.free_rank()));
}

Coord gcd_2n_n2(Coord n) {
    if (n < 1)
        throw std::domain_error("gcd_2n_n2 needs n >= 1");
    return n % 2 == 0 ? 2 * n : n;
}

bool is_killed_by(const FgAbGroup& m_group, const GroupElement& m, Coord d) {
    if (d <= 0)
        throw std::domain_error("annihilator must be positive");
    return m_group.is_zero(m_group.scalar_mul(d, m));
}

std::vector<GroupElement> torsion_subgroup_elements(const FgAbGroup& m_group, Coord d) {
    if (d <= 0)
        throw std::domain_error("annihilator must be positive");
    // In Z/n the solutions of d*y = 0 are the gcd(n, d) multiples of n/gcd(n, d).
    const auto& torsion = m_group.torsion();
    std::vector<Coord> counts(torsion.size());
    std::vector<Coord> steps(torsion.size());
    Coord total = 1;
    for (std::size_t j = 0; j < torsion.size(); ++j) {
        Coord gd = std::gcd(torsion[j], d);
        counts[j] = gd;
        steps[j] = torsion[j] / gd;
        total *= gd;
    }
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<Coord> digits(torsion.size(), 0);
    for (Coord i = 0; i < total; ++i) {
        GroupElement e(m_group.coord_count(), 0);
        for (std::size_t j = 0; j < torsion.size(); ++j)
            e[j] = digits[j] * steps[j];
        out.push_back(std::move(e));
        for (std::size_t j = torsion.size(); j-- > 0;) {
            if (++digits[j] < counts[j])
                break;
            digits[j] = 0;
        }
    }
    return out;
}

std::vector<TorsionWitness> two_primary_generators(const FgAbGroup& g) {
    std::vector<TorsionWitness> out;
    const auto& torsion = g.torsion();
    for (std::size_t i = 0; i < torsion.size(); ++i) {
        if (torsion[i] % 2 != 0)
            continue;
        Coord u = torsion[i];
        Coord two_part = 1;
        while (u % 2 == 0) {
            u /= 2;
            two_part *= 2;
        }
        out.push_back({i, g.unit(i, u), two_part});
    }
    return out;
}

GroupTable::GroupTable(const FgAbGroup& g) : group_(g) {
    if (!g.is_finite())
        throw InfiniteGroupError("dense tables need a finite group: " + format_group(g));
    size_ = static_cast<std::size_t>(g.order());
    elements_ = g.elements();
    add_.resize(size_ * size_);
    neg_.resize(size_);
    for (std::size_t a = 0; a < size_; ++a) {
        neg_[a] = static_cast<std::uint32_t>(g.index_of(g.negate(elements_[a])));
        for (std::size_t b = 0; b < size_; ++b)
            add_[a * size_ + b] =
                static_cast<std::uint32_t>(g.index_of(g.add(elements_[a], elements_[b])));
    }
}

std::uint32_t GroupTable::index_of(const GroupElement& x) const {
    return static_cast<std::uint32_t>(group_.index_of(x));
}

std::string format_group(const FgAbGroup& g) {
    if (g.is_trivial())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (Coord n : g.torsion()) {
        if (!first)
            os << " + ";
        os << "Z/" << n;
        first = false;
    }
    if (g.free_rank() > 0) {
        if (!first)
            os << " + ";
        if (g.free_rank() == 1)
            os << "Z";
        else
            os << "Z^" << g.free_rank();
    }
    return os.str();
}

std::string format_element(const GroupElement& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            os << ",";
        os << x[i];
    }
    os << ")";
    return os.str();
}

} // namespace emtrace
