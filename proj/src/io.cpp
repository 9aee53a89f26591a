#include <emtrace/io.hpp>

#include <fstream>
#include <sstream>

namespace emtrace::io {

namespace {

constexpr int kFormatVersion = 1;

[[noreturn]] void fail(const std::string& what) {
    throw ParseError(what);
}

Coord int_from_json(const json& j, const char* what) {
    if (!j.is_number_integer())
        fail(std::string(what) + " must be an integer");
    return j.get<Coord>();
}

std::vector<Coord> coords_from_json(const json& j, const char* what) {
    if (!j.is_array())
        fail(std::string(what) + " must be an array of integers");
    std::vector<Coord> out;
    out.reserve(j.size());
    for (const auto& v : j)
        out.push_back(int_from_json(v, what));
    return out;
}

void require_version(const json& j) {
    if (!j.is_object())
        fail("document root must be an object");
    if (!j.contains("format_version"))
        fail("document is missing format_version");
    if (int_from_json(j.at("format_version"), "format_version") != kFormatVersion)
        fail("unsupported format_version");
}

json element_to_json(const GroupElement& x) {
    return json(x);
}

/// element of g from a coordinate array; must already be reduced
GroupElement reduced_element_from_json(const FgAbGroup& g, const json& j, const char* what) {
    GroupElement x = coords_from_json(j, what);
    if (x.size() != g.coord_count())
        fail(std::string(what) + " has the wrong coordinate count");
    for (std::size_t i = 0; i < g.torsion_count(); ++i)
        if (x[i] < 0 || x[i] >= g.torsion()[i])
            fail(std::string(what) + " is not canonically reduced");
    return x;
}

std::vector<GroupElement> value_array_from_json(const FgAbGroup& coeffs, const json& form,
                                                const char* key, std::size_t expected) {
    if (!form.contains(key))
        return std::vector<GroupElement>(expected, coeffs.zero());
    const json& arr = form.at(key);
    if (!arr.is_array() || arr.size() != expected)
        fail(std::string("form.") + key + " must be an array of " + std::to_string(expected) +
             " coordinate vectors");
    std::vector<GroupElement> out;
    out.reserve(expected);
    for (const auto& v : arr) {
        GroupElement x = coords_from_json(v, key);
        if (x.size() != coeffs.coord_count())
            fail(std::string("form.") + key + " entry has the wrong coordinate count");
        out.push_back(coeffs.reduce(std::move(x)));
    }
    return out;
}

} // namespace

json group_to_json(const FgAbGroup& g) {
    return json{{"torsion", g.torsion()},
                {"free_rank", static_cast<Coord>(g.free_rank())}};
}

FgAbGroup group_from_json(const json& j) {
    if (!j.is_object())
        fail("group descriptor must be an object");
    std::vector<Coord> torsion;
    if (j.contains("torsion"))
        torsion = coords_from_json(j.at("torsion"), "torsion");
    Coord rank = 0;
    if (j.contains("free_rank"))
        rank = int_from_json(j.at("free_rank"), "free_rank");
    try {
        return FgAbGroup(std::move(torsion), rank);
    } catch (const std::invalid_argument& e) {
        fail(std::string("invalid group descriptor: ") + e.what());
    }
}

json spec_to_json(const QuadraticFormParams& q) {
    auto values = [](const std::vector<GroupElement>& vs) {
        json arr = json::array();
        for (const auto& v : vs)
            arr.push_back(element_to_json(v));
        return arr;
    };
    return json{{"format_version", kFormatVersion},
                {"type", "quadratic-form"},
                {"group", group_to_json(q.domain)},
                {"coefficients", group_to_json(q.coeffs)},
                {"form",
                 {{"diag_torsion", values(q.diag_torsion)},
                  {"cross_torsion", values(q.cross_torsion)},
                  {"diag_free", values(q.diag_free)},
                  {"cross_free", values(q.cross_free)},
                  {"mixed", values(q.mixed)}}}};
}

QuadraticFormParams spec_from_json(const json& j) {
    require_version(j);
    if (j.contains("type") && j.at("type") != "quadratic-form")
        fail("document type is not quadratic-form");
    if (!j.contains("group") || !j.contains("coefficients"))
        fail("quadratic-form document needs group and coefficients");
    QuadraticFormParams q;
    q.domain = group_from_json(j.at("group"));
    q.coeffs = group_from_json(j.at("coefficients"));
    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    const json form = j.contains("form") ? j.at("form") : json::object();
    if (!form.is_object())
        fail("form must be an object");
    q.diag_torsion = value_array_from_json(q.coeffs, form, "diag_torsion", k);
    q.cross_torsion = value_array_from_json(q.coeffs, form, "cross_torsion", k * (k - 1) / 2);
    q.diag_free = value_array_from_json(q.coeffs, form, "diag_free", r);
    q.cross_free = value_array_from_json(q.coeffs, form, "cross_free", r * (r - 1) / 2);
    q.mixed = value_array_from_json(q.coeffs, form, "mixed", k * r);
    return q;
}

namespace {

template <typename HValue, typename CValue>
json table_json_impl(const FgAbGroup& domain, const FgAbGroup& coeffs, HValue&& h_value,
                     CValue&& c_value) {
    const auto elems = domain.elements();
    const std::size_t n = elems.size();
    json h_rows = json::array();
    json c_rows = json::array();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            c_rows.push_back(json::array({element_to_json(elems[x]), element_to_json(elems[y]),
                                          element_to_json(c_value(x, y))}));
            for (std::size_t z = 0; z < n; ++z)
                h_rows.push_back(json::array({element_to_json(elems[x]), element_to_json(elems[y]),
                                              element_to_json(elems[z]),
                                              element_to_json(h_value(x, y, z))}));
        }
    return json{{"format_version", kFormatVersion},
                {"type", "cocycle-table"},
                {"group", group_to_json(domain)},
                {"coefficients", group_to_json(coeffs)},
                {"h", std::move(h_rows)},
                {"c", std::move(c_rows)}};
}

} // namespace

json table_to_json(const TabulatedCocycle& tc) {
    const GroupTable m(tc.coeffs);
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    return table_json_impl(
        tc.domain, tc.coeffs,
        [&](std::size_t x, std::size_t y, std::size_t z) {
            return m.element(tc.h[(x * n + y) * n + z]);
        },
        [&](std::size_t x, std::size_t y) { return m.element(tc.c[x * n + y]); });
}

json table_to_json(const StructuredCocycle& sc) {
    const auto elems = sc.domain.elements();
    return table_json_impl(
        sc.domain, sc.coeffs,
        [&](std::size_t x, std::size_t y, std::size_t z) {
            return eval_h(sc, elems[x], elems[y], elems[z]);
        },
        [&](std::size_t x, std::size_t y) { return eval_c(sc, elems[x], elems[y]); });
}

TabulatedCocycle table_from_json(const json& j) {
    require_version(j);
    if (j.contains("type") && j.at("type") != "cocycle-table")
        fail("document type is not cocycle-table");
    if (!j.contains("group") || !j.contains("coefficients"))
        fail("cocycle-table document needs group and coefficients");
    TabulatedCocycle tc;
    tc.domain = group_from_json(j.at("group"));
    tc.coeffs = group_from_json(j.at("coefficients"));
    if (!tc.domain.is_finite())
        fail("cocycle tables need a finite group");
    if (!tc.coeffs.is_finite())
        fail("cocycle tables need finite coefficients");
    const GroupTable m(tc.coeffs);
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    if (!j.contains("h") || !j.contains("c") || !j.at("h").is_array() || !j.at("c").is_array())
        fail("cocycle-table document needs h and c row arrays");
    const json& h_rows = j.at("h");
    const json& c_rows = j.at("c");
    if (h_rows.size() != n * n * n)
        fail("h must have |G|^3 rows");
    if (c_rows.size() != n * n)
        fail("c must have |G|^2 rows");

    tc.h.assign(n * n * n, 0);
    tc.c.assign(n * n, 0);
    std::vector<bool> h_seen(n * n * n, false), c_seen(n * n, false);
    for (const auto& row : h_rows) {
        if (!row.is_array() || row.size() != 4)
            fail("h rows must be [x, y, z, value]");
        const std::size_t x = tc.domain.index_of(reduced_element_from_json(tc.domain, row[0], "h row x"));
        const std::size_t y = tc.domain.index_of(reduced_element_from_json(tc.domain, row[1], "h row y"));
        const std::size_t z = tc.domain.index_of(reduced_element_from_json(tc.domain, row[2], "h row z"));
        const std::size_t at = (x * n + y) * n + z;
        if (h_seen[at])
            fail("duplicate h row");
        h_seen[at] = true;
        tc.h[at] = m.index_of(reduced_element_from_json(tc.coeffs, row[3], "h value"));
    }
    for (const auto& row : c_rows) {
        if (!row.is_array() || row.size() != 3)
            fail("c rows must be [x, y, value]");
        const std::size_t x = tc.domain.index_of(reduced_element_from_json(tc.domain, row[0], "c row x"));
        const std::size_t y = tc.domain.index_of(reduced_element_from_json(tc.domain, row[1], "c row y"));
        const std::size_t at = x * n + y;
        if (c_seen[at])
            fail("duplicate c row");
        c_seen[at] = true;
        tc.c[at] = m.index_of(reduced_element_from_json(tc.coeffs, row[2], "c value"));
    }
    return tc;
}

namespace {

std::string descriptor_csv(const FgAbGroup& g) {
    if (g.torsion().empty())
        return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < g.torsion().size(); ++i) {
        if (i)
            os << ",";
        os << g.torsion()[i];
    }
    return os.str();
}

void append_coords(std::ostringstream& os, const GroupElement& x) {
    for (Coord c : x)
        os << "," << c;
}

template <typename HValue, typename CValue>
std::string table_csv_impl(const FgAbGroup& domain, const FgAbGroup& coeffs, HValue&& h_value,
                           CValue&& c_value) {
    const auto elems = domain.elements();
    const std::size_t n = elems.size();
    std::ostringstream os;
    os << "# emtrace-table v" << kFormatVersion << "\n";
    os << "# group torsion=" << descriptor_csv(domain) << " rank=" << domain.free_rank() << "\n";
    os << "# coefficients torsion=" << descriptor_csv(coeffs) << " rank=" << coeffs.free_rank()
       << "\n";
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                os << "h";
                append_coords(os, elems[x]);
                append_coords(os, elems[y]);
                append_coords(os, elems[z]);
                append_coords(os, h_value(x, y, z));
                os << "\n";
            }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            os << "c";
            append_coords(os, elems[x]);
            append_coords(os, elems[y]);
            append_coords(os, c_value(x, y));
            os << "\n";
        }
    return os.str();
}

} // namespace

std::string table_to_csv(const TabulatedCocycle& tc) {
    const GroupTable m(tc.coeffs);
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    return table_csv_impl(
        tc.domain, tc.coeffs,
        [&](std::size_t x, std::size_t y, std::size_t z) {
            return m.element(tc.h[(x * n + y) * n + z]);
        },
        [&](std::size_t x, std::size_t y) { return m.element(tc.c[x * n + y]); });
}

std::string table_to_csv(const StructuredCocycle& sc) {
    const auto elems = sc.domain.elements();
    return table_csv_impl(
        sc.domain, sc.coeffs,
        [&](std::size_t x, std::size_t y, std::size_t z) {
            return eval_h(sc, elems[x], elems[y], elems[z]);
        },
        [&](std::size_t x, std::size_t y) { return eval_c(sc, elems[x], elems[y]); });
}

namespace {

std::vector<Coord> parse_int_list(const std::string& text, const char* what) {
    std::vector<Coord> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
        // tolerate surrounding whitespace
        const auto b = token.find_first_not_of(" \t");
        if (b == std::string::npos)
            fail(std::string(what) + ": empty entry in '" + text + "'");
        const auto e = token.find_last_not_of(" \t");
        try {
            std::size_t used = 0;
            const std::string body = token.substr(b, e - b + 1);
            out.push_back(std::stoll(body, &used));
            if (used != body.size())
                fail(std::string(what) + ": bad integer '" + body + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail(std::string(what) + ": bad integer in '" + text + "'");
        }
    }
    return out;
}

std::string header_field(const std::string& line, const std::string& key) {
    const auto at = line.find(key + "=");
    if (at == std::string::npos)
        fail("csv header is missing " + key);
    const auto start = at + key.size() + 1;
    const auto end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

FgAbGroup group_from_csv_header(const std::string& line) {
    const std::string torsion = header_field(line, "torsion");
    const std::string rank = header_field(line, "rank");
    std::vector<Coord> moduli;
    if (torsion != "-")
        moduli = parse_int_list(torsion, "csv torsion");
    const std::vector<Coord> ranks = parse_int_list(rank, "csv rank");
    if (ranks.size() != 1)
        fail("csv rank must be a single integer");
    try {
        return FgAbGroup(std::move(moduli), ranks[0]);
    } catch (const std::invalid_argument& e) {
        fail(std::string("invalid csv group descriptor: ") + e.what());
    }
}

} // namespace

TabulatedCocycle table_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# emtrace-table v", 0) != 0)
        fail("not an emtrace csv table");
    if (line != "# emtrace-table v" + std::to_string(kFormatVersion))
        fail("unsupported csv table version");
    std::string group_line, coeff_line;
    if (!std::getline(is, group_line) || group_line.rfind("# group ", 0) != 0)
        fail("csv table is missing the group header");
    if (!std::getline(is, coeff_line) || coeff_line.rfind("# coefficients ", 0) != 0)
        fail("csv table is missing the coefficients header");

    TabulatedCocycle tc;
    tc.domain = group_from_csv_header(group_line);
    tc.coeffs = group_from_csv_header(coeff_line);
    if (!tc.domain.is_finite() || !tc.coeffs.is_finite())
        fail("csv tables need finite group and coefficients");
    const GroupTable m(tc.coeffs);
    const std::size_t n = static_cast<std::size_t>(tc.domain.order());
    const std::size_t gw = tc.domain.coord_count();
    const std::size_t mw = tc.coeffs.coord_count();

    tc.h.assign(n * n * n, 0);
    tc.c.assign(n * n, 0);
    std::vector<bool> h_seen(n * n * n, false), c_seen(n * n, false);

    auto take = [&](const std::vector<Coord>& row, std::size_t at, std::size_t count,
                    const FgAbGroup& g) {
        GroupElement x(row.begin() + static_cast<std::ptrdiff_t>(at),
                       row.begin() + static_cast<std::ptrdiff_t>(at + count));
        for (std::size_t i = 0; i < g.torsion_count(); ++i)
            if (x[i] < 0 || x[i] >= g.torsion()[i])
                fail("csv element is not canonically reduced");
        return x;
    };

    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == 'h') {
            const std::vector<Coord> row = parse_int_list(line.substr(2), "h row");
            if (row.size() != 3 * gw + mw)
                fail("h row has the wrong field count");
            const std::size_t x = tc.domain.index_of(take(row, 0, gw, tc.domain));
            const std::size_t y = tc.domain.index_of(take(row, gw, gw, tc.domain));
            const std::size_t z = tc.domain.index_of(take(row, 2 * gw, gw, tc.domain));
            const std::size_t at = (x * n + y) * n + z;
            if (h_seen[at])
                fail("duplicate h row");
            h_seen[at] = true;
            tc.h[at] = m.index_of(take(row, 3 * gw, mw, tc.coeffs));
        } else if (line[0] == 'c') {
            const std::vector<Coord> row = parse_int_list(line.substr(2), "c row");
            if (row.size() != 2 * gw + mw)
                fail("c row has the wrong field count");
            const std::size_t x = tc.domain.index_of(take(row, 0, gw, tc.domain));
            const std::size_t y = tc.domain.index_of(take(row, gw, gw, tc.domain));
            const std::size_t at = x * n + y;
            if (c_seen[at])
                fail("duplicate c row");
            c_seen[at] = true;
            tc.c[at] = m.index_of(take(row, 2 * gw, mw, tc.coeffs));
        } else {
            fail("unexpected csv line: " + line);
        }
    }
    for (bool seen : h_seen)
        if (!seen)
            fail("csv table is missing h rows");
    for (bool seen : c_seen)
        if (!seen)
            fail("csv table is missing c rows");
    return tc;
}

std::string dump_document(const json& j) {
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

QuadraticFormParams load_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail(path + ": " + e.what());
    }
    return spec_from_json(j);
}

TabulatedCocycle load_table(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            fail(path + ": " + e.what());
        }
        return table_from_json(j);
    }
    return table_from_csv(text);
}

FgAbGroup parse_group_descriptor(const std::string& torsion_csv, Coord extra_rank) {
    std::vector<Coord> moduli;
    const auto body = torsion_csv.find_first_not_of(" \t");
    if (body != std::string::npos && torsion_csv != "-")
        moduli = parse_int_list(torsion_csv, "group descriptor");
    try {
        return FgAbGroup(std::move(moduli), extra_rank);
    } catch (const std::invalid_argument& e) {
        fail(std::string("invalid group descriptor: ") + e.what());
    }
}

GroupElement parse_element(const FgAbGroup& g, const std::string& coords_csv) {
    std::vector<Coord> coords;
    if (coords_csv.find_first_not_of(" \t") != std::string::npos)
        coords = parse_int_list(coords_csv, "element");
    if (coords.size() != g.coord_count())
        fail("element needs " + std::to_string(g.coord_count()) + " coordinates");
    return g.reduce(std::move(coords));
}

std::string format_params(const QuadraticFormParams& q) {
    const std::size_t k = q.domain.torsion_count();
    const std::size_t r = q.domain.free_rank();
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& label, const GroupElement& v) {
        if (!first)
            os << " ";
        os << label << "=" << format_element(v);
        first = false;
    };
    for (std::size_t i = 0; i < k; ++i)
        emit("m[" + std::to_string(i + 1) + "]", q.diag_torsion[i]);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            emit("b[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                 q.cross_torsion_at(i, j));
    for (std::size_t j = 0; j < r; ++j)
        emit("l[" + std::to_string(j + 1) + "]", q.diag_free[j]);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = j + 1; l < r; ++l)
            emit("f[" + std::to_string(j + 1) + "," + std::to_string(l + 1) + "]",
                 q.cross_free_at(j, l));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            emit("t[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                 q.mixed_at(i, j));
    if (first)
        os << "(zero form on the trivial group)";
    return os.str();
}

} // namespace emtrace::io
