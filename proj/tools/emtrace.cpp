// emtrace: build, evaluate and verify 2-abelian 3-cocycles and quadratic
// forms on finitely generated abelian groups, with brute-force cross-checks
// on small finite instances.
//
// Exit codes: 0 success, 1 mathematical failure or obstruction, 2 search
// budget exceeded, 3 malformed input.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <emtrace/cocycles.hpp>
#include <emtrace/forms.hpp>
#include <emtrace/groups.hpp>
#include <emtrace/io.hpp>
#include <emtrace/oracle.hpp>
#include <emtrace/represent.hpp>

namespace {

using namespace emtrace;

constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct GroupArgs {
    std::string torsion = "-";
    Coord rank = 0;

    FgAbGroup parse() const { return io::parse_group_descriptor(torsion, rank); }
};

void add_group_options(CLI::App* cmd, GroupArgs& g, GroupArgs& m) {
    cmd->add_option("--group", g.torsion, "domain torsion moduli, e.g. \"2,4\" (0 adds a Z factor)")
        ->required();
    cmd->add_option("--group-rank", g.rank, "extra free rank of the domain");
    cmd->add_option("--coeff", m.torsion, "coefficient torsion moduli")->required();
    cmd->add_option("--coeff-rank", m.rank, "extra free rank of the coefficients");
}

int report_violations(const std::vector<ParamViolation>& violations) {
    for (const auto& v : violations)
        std::cout << "violation: " << v.coefficient << " = " << format_element(v.value)
                  << " is not killed by " << v.annihilator << "\n";
    return violations.empty() ? 0 : 1;
}

std::string emit_table(const StructuredCocycle& sc, bool csv) {
    if (csv)
        return io::table_to_csv(sc);
    return io::dump_document(io::table_to_json(sc));
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file(out_path, text);
}

std::size_t verify_cap_from_budget(std::uint64_t budget) {
    std::size_t cap = 1;
    while (cap < 100000) {
        const std::uint64_t q = cap + 1;
        if (q * q * q * q + 2 * q * q * q > budget)
            break;
        ++cap;
    }
    return cap;
}

int run_group_canon(const std::string& descriptor, Coord rank) {
    const FgAbGroup g = canonicalize(io::parse_group_descriptor(descriptor, rank));
    std::cout << "canonical: " << format_group(g) << "\n";
    std::string torsion = "-";
    if (!g.torsion().empty()) {
        torsion.clear();
        for (std::size_t i = 0; i < g.torsion().size(); ++i)
            torsion += (i ? "," : "") + std::to_string(g.torsion()[i]);
    }
    std::cout << "torsion: " << torsion << "\n";
    std::cout << "free_rank: " << g.free_rank() << "\n";
    return 0;
}

int run_quad_list(const GroupArgs& ga, const GroupArgs& ma) {
    const FgAbGroup g = ga.parse();
    const FgAbGroup m = ma.parse();
    const auto quads = enumerate_quads(g, m);
    for (std::size_t i = 0; i < quads.size(); ++i)
        std::cout << "q[" << i << "]: " << io::format_params(quads[i]) << "\n";
    std::cout << "count: " << quads.size() << "\n";
    return 0;
}

int run_quad_eval(const std::string& spec_path, const std::string& at) {
    const QuadraticFormParams q = io::load_spec(spec_path);
    if (int rc = report_violations(validate_params(q)))
        return rc;
    const GroupElement x = io::parse_element(q.domain, at);
    std::cout << "q(" << format_element(x) << ") = " << format_element(eval_quad(q, x)) << "\n";
    return 0;
}

int run_quad_validate(const std::string& spec_path) {
    const QuadraticFormParams q = io::load_spec(spec_path);
    if (int rc = report_violations(validate_params(q)))
        return rc;
    std::cout << "ok\n";
    return 0;
}

int run_cocycle_build(const std::string& spec_path, const std::string& out_path, bool csv) {
    const QuadraticFormParams q = io::load_spec(spec_path);
    if (int rc = report_violations(validate_params(q)))
        return rc;
    const StructuredCocycle sc = from_quad(q);
    if (q.domain.is_finite()) {
        write_or_print(out_path, emit_table(sc, csv));
        return 0;
    }
    // infinite domains get the closed-form summary instead of a table
    std::ostringstream os;
    os << "closed-form cocycle (domain is infinite)\n";
    os << "domain: " << format_group(sc.domain) << "\n";
    os << "coefficients: " << format_group(sc.coeffs) << "\n";
    for (std::size_t i = 0; i < sc.carry.size(); ++i)
        os << "carry[" << i + 1 << "] = " << format_element(sc.carry[i]) << "\n";
    const std::size_t slots = sc.domain.coord_count();
    for (std::size_t a = 0; a < slots; ++a)
        for (std::size_t b = 0; b < slots; ++b)
            os << "c[" << a + 1 << "," << b + 1
               << "] = " << format_element(sc.c_matrix.at(a, b)) << "\n";
    write_or_print(out_path, os.str());
    return 0;
}

int run_cocycle_verify(const std::string& table_path, unsigned threads, std::uint64_t budget,
                       std::size_t max_reports) {
    const TabulatedCocycle tc = io::load_table(table_path);
    VerifyOptions opts;
    opts.threads = threads;
    opts.max_reports = max_reports;
    if (budget != 0)
        opts.max_group_order = verify_cap_from_budget(budget);
    const VerifyReport report = verify(tc, opts);
    if (report.ok()) {
        std::cout << "ok: " << report.instances_checked << " instances\n";
        return 0;
    }
    const GroupTable g(tc.domain);
    const GroupTable m(tc.coeffs);
    std::cout << "violations: " << report.violation_count << " of "
              << report.instances_checked << " instances\n";
    for (const auto& v : report.reports)
        std::cout << describe(v, g, m) << "\n";
    return 1;
}

int run_cocycle_trace(const std::string& table_path) {
    const TabulatedCocycle tc = io::load_table(table_path);
    const QuadraticFormTable t = trace(tc);
    const GroupTable m(t.coeffs);
    const auto elems = t.domain.elements();
    for (std::size_t i = 0; i < elems.size(); ++i)
        std::cout << "q(" << format_element(elems[i])
                  << ") = " << format_element(m.element(t.values[i])) << "\n";
    const QuadraticFormParams q = fit_params(t);
    std::cout << "params: " << io::format_params(q) << "\n";
    return 0;
}

int run_cocycle_normal_form(const std::string& table_path, unsigned threads) {
    const TabulatedCocycle tc = io::load_table(table_path);
    VerifyOptions opts;
    opts.threads = threads;
    const VerifyReport report = normal_form_check(tc, opts);
    if (report.ok()) {
        std::cout << "ok: " << report.instances_checked << " instances\n";
        return 0;
    }
    const GroupTable g(tc.domain);
    const GroupTable m(tc.coeffs);
    std::cout << "violations: " << report.violation_count << " of "
              << report.instances_checked << " instances\n";
    for (const auto& v : report.reports)
        std::cout << describe(v, g, m) << "\n";
    return 1;
}

int run_representable(const std::string& spec_path, bool witness) {
    const QuadraticFormParams q = io::load_spec(spec_path);
    if (int rc = report_violations(validate_params(q)))
        return rc;
    const TwoTorsionCharacter ch = theta(q);
    for (std::size_t i = 0; i < ch.witnesses.size(); ++i)
        std::cout << "generator " << format_element(ch.witnesses[i].generator) << " (order "
                  << ch.witnesses[i].order << "): theta = " << format_element(ch.values[i])
                  << "\n";
    if (!ch.is_zero()) {
        std::cout << "representable: no\n";
        return 1;
    }
    std::cout << "representable: yes\n";
    if (witness) {
        const BilinearFormMatrix c = bilinear_witness(q);
        const std::size_t slots = q.domain.coord_count();
        for (std::size_t a = 0; a < slots; ++a)
            for (std::size_t b = 0; b < slots; ++b)
                std::cout << "C[" << a + 1 << "," << b + 1
                          << "] = " << format_element(c.at(a, b)) << "\n";
    }
    return 0;
}

int run_oracle_classes(const GroupArgs& ga, const GroupArgs& ma, std::int64_t budget) {
    SearchBudget b;
    b.max_candidates = budget;
    const FgAbGroup g = ga.parse();
    const FgAbGroup m = ma.parse();
    const ClassCountResult r = class_count(g, m, b);
    const std::size_t quads = enumerate_quads(g, m).size();
    std::cout << "cocycles: " << r.cocycles << "\n";
    std::cout << "coboundaries: " << r.coboundaries << "\n";
    std::cout << "classes: " << r.classes << "\n";
    std::cout << "quadratic_forms: " << quads << "\n";
    std::cout << "dfs_nodes: " << r.dfs_nodes << "\n";
    std::cout << "flat_candidates: " << r.flat_candidates << "\n";
    const bool ok = static_cast<std::size_t>(r.classes) == quads;
    std::cout << r.classes << " = " << quads << (ok ? " (ok)" : " (MISMATCH)") << "\n";
    return ok ? 0 : 1;
}

int run_oracle_separate(const GroupArgs& ga, const GroupArgs& ma, std::int64_t budget,
                        unsigned threads) {
    SearchBudget b;
    b.max_candidates = budget;
    const FgAbGroup g = ga.parse();
    const FgAbGroup m = ma.parse();
    const SeparationResult r = separate_all_quads(g, m, b, threads);
    std::cout << "forms: " << r.forms << "\n";
    std::cout << "pairs: " << r.pairs_checked << "\n";
    if (r.ok()) {
        std::cout << "ok: no two distinct forms are cohomologous\n";
        return 0;
    }
    std::cout << "MISMATCH: forms " << r.counterexample->first_index << " and "
              << r.counterexample->second_index << " are cohomologous\n";
    return 1;
}

int run_oracle_represent_search(const std::string& spec_path, std::int64_t budget) {
    SearchBudget b;
    b.max_candidates = budget;
    const QuadraticFormParams q = io::load_spec(spec_path);
    if (int rc = report_violations(validate_params(q)))
        return rc;
    const bool criterion = is_trace_of_bilinear(q);
    const RepresentSearchResult r = exhaustive_representable(tabulate_quad(q), b);
    std::cout << "criterion: " << (criterion ? "representable" : "obstructed") << "\n";
    std::cout << "search: " << (r.witness ? "witness found" : "exhausted without witness")
              << "\n";
    std::cout << "candidates: " << r.candidates_examined << " of " << r.candidates_total
              << " examined\n";
    if (r.witness) {
        const std::size_t slots = q.domain.coord_count();
        for (std::size_t a = 0; a < slots; ++a)
            for (std::size_t bcol = 0; bcol < slots; ++bcol)
                std::cout << "C[" << a + 1 << "," << bcol + 1
                          << "] = " << format_element(r.witness->at(a, bcol)) << "\n";
    }
    const bool agree = criterion == r.witness.has_value();
    if (!agree) {
        std::cout << "agreement: MISMATCH between criterion and exhaustive search\n";
        return 1;
    }
    std::cout << "agreement: yes\n";
    return criterion ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Eilenberg-Mac Lane trace toolkit: quadratic forms and "
                 "2-abelian 3-cocycles on finitely generated abelian groups"};
    app.require_subcommand(1);

    unsigned threads = 1;
    std::uint64_t seed = kDefaultSeed;
    app.add_option("--threads", threads, "worker threads for verification and searches")
        ->check(CLI::Range(1u, 256u));
    app.add_option("--seed", seed,
                   "seed for randomized property commands (all current commands are "
                   "deterministic; accepted for interface stability)");

    int rc = 0;

    // group canon
    auto* group_cmd = app.add_subcommand("group", "group utilities");
    group_cmd->require_subcommand(1);
    auto* canon = group_cmd->add_subcommand("canon", "invariant-factor canonical form");
    canon->fallthrough();
    static std::string canon_descriptor;
    static Coord canon_rank = 0;
    canon->add_option("descriptor", canon_descriptor, "torsion moduli, e.g. \"4,6\"")->required();
    canon->add_option("--rank", canon_rank, "extra free rank");
    canon->callback([&] { rc = run_group_canon(canon_descriptor, canon_rank); });

    // quad {list, eval, validate}
    auto* quad_cmd = app.add_subcommand("quad", "quadratic forms");
    quad_cmd->require_subcommand(1);

    auto* quad_list = quad_cmd->add_subcommand("list", "enumerate all forms G -> M");
    quad_list->fallthrough();
    static GroupArgs ql_group, ql_coeff;
    add_group_options(quad_list, ql_group, ql_coeff);
    quad_list->callback([&] { rc = run_quad_list(ql_group, ql_coeff); });

    auto* quad_eval = quad_cmd->add_subcommand("eval", "evaluate a form at an element");
    quad_eval->fallthrough();
    static std::string qe_spec, qe_at;
    quad_eval->add_option("--spec", qe_spec, "quadratic-form document")->required();
    quad_eval->add_option("--at", qe_at, "element coordinates, e.g. \"1,1\"")->required();
    quad_eval->callback([&] { rc = run_quad_eval(qe_spec, qe_at); });

    auto* quad_validate = quad_cmd->add_subcommand("validate", "check the torsion constraints");
    quad_validate->fallthrough();
    static std::string qv_spec;
    quad_validate->add_option("--spec", qv_spec, "quadratic-form document")->required();
    quad_validate->callback([&] { rc = run_quad_validate(qv_spec); });

    // cocycle {build, verify, trace, normal-form}
    auto* cocycle_cmd = app.add_subcommand("cocycle", "2-abelian 3-cocycles");
    cocycle_cmd->require_subcommand(1);

    auto* cbuild = cocycle_cmd->add_subcommand("build", "construct the cocycle of a form");
    cbuild->fallthrough();
    static std::string cb_spec, cb_out;
    static bool cb_csv = false;
    cbuild->add_option("--spec", cb_spec, "quadratic-form document")->required();
    cbuild->add_option("--out", cb_out, "output path (stdout when omitted)");
    cbuild->add_flag("--csv", cb_csv, "emit the CSV table format");
    cbuild->callback([&] { rc = run_cocycle_build(cb_spec, cb_out, cb_csv); });

    auto* cverify = cocycle_cmd->add_subcommand("verify", "check all defining identities");
    cverify->fallthrough();
    static std::string cv_table;
    static std::uint64_t cv_budget = 0;
    static std::size_t cv_reports = 16;
    cverify->add_option("table", cv_table, "cocycle-table document")->required();
    cverify->add_option("--budget", cv_budget, "max identity instances (derives the group cap)");
    cverify->add_option("--max-reports", cv_reports, "violations to print");
    cverify->callback([&] { rc = run_cocycle_verify(cv_table, threads, cv_budget, cv_reports); });

    auto* ctrace = cocycle_cmd->add_subcommand("trace", "trace and fitted parameters");
    ctrace->fallthrough();
    static std::string ct_table;
    ctrace->add_option("table", ct_table, "cocycle-table document")->required();
    ctrace->callback([&] { rc = run_cocycle_trace(ct_table); });

    auto* cnormal = cocycle_cmd->add_subcommand("normal-form", "check the normal-form identities");
    cnormal->fallthrough();
    static std::string cn_table;
    cnormal->add_option("table", cn_table, "cocycle-table document")->required();
    cnormal->callback([&] { rc = run_cocycle_normal_form(cn_table, threads); });

    // representable
    auto* rep = app.add_subcommand("representable",
                                   "decide whether a form is the trace of a bilinear form");
    rep->fallthrough();
    static std::string rep_spec;
    static bool rep_witness = false;
    rep->add_option("--spec", rep_spec, "quadratic-form document")->required();
    rep->add_flag("--witness", rep_witness, "print the bilinear matrix when representable");
    rep->callback([&] { rc = run_representable(rep_spec, rep_witness); });

    // oracle {classes, separate, represent-search}
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth");
    oracle_cmd->require_subcommand(1);

    auto* oclasses = oracle_cmd->add_subcommand(
        "classes", "cohomology class count vs quadratic form count");
    oclasses->fallthrough();
    static GroupArgs oc_group, oc_coeff;
    static std::int64_t oc_budget = SearchBudget{}.max_candidates;
    add_group_options(oclasses, oc_group, oc_coeff);
    oclasses->add_option("--budget", oc_budget, "max candidates / DFS nodes");
    oclasses->callback([&] { rc = run_oracle_classes(oc_group, oc_coeff, oc_budget); });

    auto* oseparate = oracle_cmd->add_subcommand(
        "separate", "assert distinct forms give non-cohomologous cocycles");
    oseparate->fallthrough();
    static GroupArgs os_group, os_coeff;
    static std::int64_t os_budget = SearchBudget{}.max_candidates;
    add_group_options(oseparate, os_group, os_coeff);
    oseparate->add_option("--budget", os_budget, "max candidates per pair");
    oseparate->callback([&] { rc = run_oracle_separate(os_group, os_coeff, os_budget, threads); });

    auto* osearch = oracle_cmd->add_subcommand(
        "represent-search", "exhaustive bilinear search vs the generator criterion");
    osearch->fallthrough();
    static std::string or_spec;
    static std::int64_t or_budget = SearchBudget{}.max_candidates;
    osearch->add_option("--spec", or_spec, "quadratic-form document")->required();
    osearch->add_option("--budget", or_budget, "max candidate matrices");
    osearch->callback([&] { rc = run_oracle_represent_search(or_spec, or_budget); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const emtrace::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << " (required " << e.required
                  << ", budget " << e.limit << ")\n";
        return 2;
    } catch (const NotRepresentableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotQuadraticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
