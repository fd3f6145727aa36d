#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cumlab/acceptance.hpp"
#include "cumlab/clt.hpp"
#include "cumlab/cumulants.hpp"
#include "cumlab/edgeworth.hpp"
#include "cumlab/errors.hpp"
#include "cumlab/model_io.hpp"
#include "cumlab/product_space.hpp"
#include "cumlab/regular_graphs.hpp"

using namespace cumlab;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;

struct Caps {
    std::size_t max_lattice = kDefaultMaxLattice;
    std::size_t max_states = RgOptions{}.max_states;
};

// Doubles go through format_double so every number keeps 17 digits.
json num(double x)
{
    return json::parse(std::isfinite(x) ? format_double(x) : "null");
}

json complex_json(Complex z)
{
    return {{"re", num(z.real())}, {"im", num(z.imag())}};
}

// Writes to path, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + path);
    out << text;
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

Subset parse_subset(const std::string& text, int dim)
{
    Subset v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        int j = -1;
        try {
            j = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == item.size() && j >= 0 && j < dim,
                "--subset: '" + item + "' is not a coordinate in 0.." + std::to_string(dim - 1));
        v = v | Subset::single(j);
    }
    return v;
}

json subset_json(Subset v, int dim)
{
    json out = json::array();
    for (int j = 0; j < dim; ++j)
        if (Subset::single(j).subset_of(v))
            out.push_back(j);
    return out;
}

struct DeltaArgs {
    std::string model;
    std::string subset;
    std::string dump_decomposition;
    std::string json_out;
};

int run_delta(const DeltaArgs& a, const Caps& caps)
{
    const auto model = load_model(a.model, caps.max_lattice);
    const int dim = model.space->dim();
    json out{{"schema_version", kSchemaVersion}, {"n", dim}, {"kind", model.kind}};
    json s = json::array();
    for (double x : s_values(model.f))
        s.push_back(num(x));
    out["s_values"] = s;
    if (!a.subset.empty()) {
        const Subset v = parse_subset(a.subset, dim);
        out["subset"] = subset_json(v, dim);
        out["delta"] = num(delta(model.f, v));
        out["delta_bar"] = num(delta_bar(model.f, v));
    }
    if (!a.dump_decomposition.empty())
        emit(a.dump_decomposition, dump(decomposition_json(hoeffding(model.f))));
    emit(a.json_out, dump(out));
    return 0;
}

struct CertifyArgs {
    std::string model;
    int m = 3;
    double scale = 1.0;
    double imag_scale = 0.0;
    std::string variant = "complex";
    std::string json_out;
};

json certificate_json(const CumulantCertificate& c)
{
    auto nums = [](const std::vector<double>& xs) {
        json a = json::array();
        for (double x : xs)
            a.push_back(num(x));
        return a;
    };
    json kappa = json::array();
    for (const auto& k : c.kappa)
        kappa.push_back(complex_json(k));
    return {
        {"schema_version", kSchemaVersion},
        {"variant", c.variant},
        {"n", c.n},
        {"m", c.m},
        {"alpha", c.alpha ? num(*c.alpha) : json(nullptr)},
        {"gamma", num(c.gamma)},
        {"s_values", nums(c.s_values)},
        {"hypothesis_ok", c.hypothesis_ok},
        {"kappa", kappa},
        {"approx", complex_json(c.approx)},
        {"exact", complex_json(c.exact)},
        {"delta_actual", complex_json(c.delta_actual)},
        {"delta_bound", num(c.delta_bound)},
        {"delta_roundoff", num(c.delta_roundoff)},
        {"delta_ok", c.delta_ok},
        {"kappa_bound", nums(c.kappa_bound)},
        {"kappa_roundoff", nums(c.kappa_roundoff)},
        {"kappa_bounds_ok", c.kappa_bounds_ok},
        {"degenerate", c.degenerate},
        {"hypotheses_hold", c.hypotheses_hold()},
        {"consistent", c.consistent()},
    };
}

std::string pass_fail(bool b)
{
    return b ? "pass" : "fail";
}

int run_certify(const CertifyArgs& a, const Caps& caps)
{
    const auto model = load_model(a.model, caps.max_lattice);
    const TabFn f = model.f.scaled(Complex(a.scale, a.imag_scale));
    CumulantCertificate c;
    if (a.variant == "complex") {
        c = certify(f, a.m);
    } else {
        require(f.is_real(), "certify: the real variant needs a real function (drop --imag-scale)");
        c = certify_real(f, a.m);
    }

    std::ostringstream table;
    table << "check,status,value,bound\n";
    for (std::size_t t = 0; t < c.hypothesis_ok.size(); ++t)
        table << "hypothesis_" << t + 1 << "," << pass_fail(c.hypothesis_ok[t]) << ",,\n";
    table << "delta," << (c.hypotheses_hold() ? pass_fail(c.delta_ok) : "vacuous") << ","
          << format_double(std::abs(c.delta_actual)) << "," << format_double(c.delta_bound) << "\n";
    for (std::size_t i = 0; i < c.kappa_bound.size(); ++i)
        table << "kappa_" << i + 2 << ","
              << (c.hypotheses_hold() ? pass_fail(c.kappa_bounds_ok[i]) : "vacuous") << ","
              << format_double(std::abs(c.kappa[i + 1])) << "," << format_double(c.kappa_bound[i]) << "\n";
    table << "certificate," << (c.consistent() ? "consistent" : "VIOLATED") << ",,\n";
    std::cout << table.str();
    if (a.json_out.empty())
        std::cout << "\n";
    emit(a.json_out, dump(certificate_json(c)));
    return c.consistent() ? 0 : 1;
}

struct EdgeworthArgs {
    int n = 6;
    double p = 0.5;
    int m = 2;
    std::string csv_out;
    std::string json_out;
};

int run_edgeworth(const EdgeworthArgs& a)
{
    const auto rep = edgeworth_report(a.n, a.p, a.m);
    std::ostringstream csv;
    csv << "k,sigma_prob";
    for (int m = 0; m <= a.m; ++m)
        csv << ",E_" << m;
    csv << "\n";
    for (const auto& row : rep.rows) {
        if (!row.realized)
            continue;
        csv << row.k << "," << format_double(row.scaled_prob);
        for (double e : row.series)
            csv << "," << format_double(e);
        csv << "\n";
    }
    csv << "sup_error,";
    for (double e : rep.sup_error)
        csv << "," << format_double(e);
    csv << "\n";
    emit(a.csv_out, csv.str());

    json lambda = json::object();
    for (int r = 3; r <= rep.lambda.max_order(); ++r)
        lambda[std::to_string(r)] = num(rep.lambda.at(r));
    json kappa = json::array();
    for (double k : rep.kappa)
        kappa.push_back(num(k));
    json out{{"schema_version", kSchemaVersion}, {"n", rep.n},          {"p", num(rep.p)},
             {"m", rep.m_max},                  {"mu", num(rep.mu)},    {"sigma", num(rep.sigma)},
             {"kappa", kappa},                  {"lambda", lambda},     {"argmax_k", rep.argmax}};
    if (a.csv_out.empty() && a.json_out.empty())
        std::cout << "\n";
    emit(a.json_out, dump(out));
    return 0;
}

struct BerryEsseenArgs {
    std::string model;
    double w = 0.5;
    int tgrid = 256;
    std::string csv_out;
    std::string json_out;
};

int run_berry_esseen(const BerryEsseenArgs& a, const Caps& caps)
{
    const auto model = load_model(a.model, caps.max_lattice);
    require(model.f.is_real(), "berry-esseen: the model function must be real");
    const auto rep = be_report(model.f, a.w, a.tgrid);

    std::ostringstream csv;
    csv << "t,phi_re,phi_im,log_gap,comparator,ratio\n";
    for (const auto& row : rep.rows)
        csv << format_double(row.t) << "," << format_double(row.phi.real()) << "," << format_double(row.phi.imag())
            << "," << format_double(row.log_gap) << "," << format_double(row.comparator) << ","
            << format_double(row.ratio) << "\n";
    emit(a.csv_out, csv.str());

    json out{{"schema_version", kSchemaVersion}, {"n", rep.n}, {"w", num(rep.w)}, {"degenerate", rep.degenerate}};
    if (rep.degenerate) {
        out["marker"] = rep.marker;
    } else {
        double max_ratio = 0.0;
        for (const auto& row : rep.rows)
            max_ratio = std::max(max_ratio, row.ratio);
        out["a"] = num(rep.a);
        out["mean"] = num(rep.mean);
        out["sigma"] = num(rep.sigma);
        out["t_max"] = num(rep.t_max);
        out["max_log_gap_ratio"] = num(max_ratio);
        out["cdf_distance"] = num(rep.cdf_distance);
        out["cdf_comparator"] = num(rep.cdf_comparator);
        out["cdf_ratio"] = num(rep.cdf_ratio);
    }
    if (a.csv_out.empty() && a.json_out.empty())
        std::cout << "\n";
    emit(a.json_out, dump(out));
    return 0;
}

struct RgArgs {
    int n = 0;
    int d = 0;
    int m = 7;
    bool exact_only = false;
    std::string json_out;
};

int run_rg(const RgArgs& a, const Caps& caps)
{
    RgOptions opts;
    opts.max_states = caps.max_states;
    const BigCount count = rg_exact(a.n, a.d, opts);
    if (a.exact_only) {
        std::cout << count.str() << "\n";
        return 0;
    }
    json out{{"schema_version", kSchemaVersion}, {"n", a.n}, {"d", a.d}, {"exact_digits", count.str()}};
    if (count == 0) {
        out["note"] = (a.n * a.d) % 2 ? "dn is odd" : "no such graph";
        out["log_exact"] = nullptr;
    } else {
        out["log_exact"] = num(log_bigcount(count));
    }
    if (count > 0 && a.d >= 1 && a.d <= a.n - 2) {
        require(a.m >= 1 && a.m <= 7, "rg: --m must lie in 1..7");
        json approx = json::array();
        for (int m = 1; m <= a.m; ++m)
            approx.push_back(num(rg_asymptotic(a.n, a.d, m).log_approx));
        out["log_approx_by_m"] = approx;
        out["conjecture_gap"] = num(conjecture_gap(a.n, a.d, opts));
    } else {
        out["log_approx_by_m"] = json::array();
        out["conjecture_gap"] = nullptr;
    }
    std::cout << count.str() << "\n";
    emit(a.json_out, dump(out));
    return 0;
}

int run_selftest()
{
    const auto results = run_acceptance();
    int passed = 0;
    for (const auto& r : results) {
        std::cout << format_result(r) << "\n";
        passed += r.pass ? 1 : 0;
    }
    std::cout << "selftest: " << passed << "/" << results.size() << " criteria passed\n";
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cumulant expansions for functions of independent variables"};
    app.require_subcommand(1);
    app.fallthrough();
    Caps caps;
    app.add_option("--max-lattice", caps.max_lattice, "Cap on the outcome lattice size")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-states", caps.max_states, "Cap on the regular-graph DP state count")
        ->check(CLI::PositiveNumber);

    DeltaArgs delta_args;
    auto* delta_cmd = app.add_subcommand("delta", "Difference quantities and S_k for a model");
    delta_cmd->add_option("--model", delta_args.model, "Model JSON file")->required();
    delta_cmd->add_option("--subset", delta_args.subset, "Coordinates, comma separated (0-based)");
    delta_cmd->add_option("--dump-decomposition", delta_args.dump_decomposition,
                          "Write the Hoeffding decomposition as JSON to this file");
    delta_cmd->add_option("--json", delta_args.json_out, "Report file (default stdout)");

    CertifyArgs cert_args;
    auto* cert_cmd = app.add_subcommand("certify", "Check the truncated cumulant approximation against its bounds");
    cert_cmd->add_option("--model", cert_args.model, "Model JSON file")->required();
    cert_cmd->add_option("--m", cert_args.m, "Truncation order")->check(CLI::Range(1, 12));
    cert_cmd->add_option("--scale", cert_args.scale, "Real part of the multiplier applied to f");
    cert_cmd->add_option("--imag-scale", cert_args.imag_scale, "Imaginary part of the multiplier applied to f");
    cert_cmd->add_option("--variant", cert_args.variant, "complex or real")
        ->check(CLI::IsMember({"complex", "real"}));
    cert_cmd->add_option("--json", cert_args.json_out, "Certificate file (default stdout after the table)");

    EdgeworthArgs ew_args;
    auto* ew_cmd = app.add_subcommand("edgeworth-triangles", "Edgeworth series for triangle counts in G(n,p)");
    ew_cmd->add_option("--n", ew_args.n, "Vertices")->required();
    ew_cmd->add_option("--p", ew_args.p, "Edge probability")->required();
    ew_cmd->add_option("--m", ew_args.m, "Highest series order")->check(CLI::Range(0, 12));
    ew_cmd->add_option("--csv", ew_args.csv_out, "CSV file (default stdout)");
    ew_cmd->add_option("--json", ew_args.json_out, "Cumulant JSON file (default stdout after the CSV)");

    BerryEsseenArgs be_args;
    auto* be_cmd = app.add_subcommand("berry-esseen", "Characteristic function near zero and the CDF distance");
    be_cmd->add_option("--model", be_args.model, "Model JSON file")->required();
    be_cmd->add_option("--w", be_args.w, "Decay parameter in (0,1)");
    be_cmd->add_option("--tgrid", be_args.tgrid, "Grid points on (0, t_max]")->check(CLI::PositiveNumber);
    be_cmd->add_option("--csv", be_args.csv_out, "CSV file (default stdout)");
    be_cmd->add_option("--json", be_args.json_out, "Summary JSON file (default stdout after the CSV)");

    RgArgs rg_args;
    auto* rg_cmd = app.add_subcommand("rg", "Count labelled d-regular graphs on n vertices");
    rg_cmd->add_option("--n", rg_args.n, "Vertices")->required();
    rg_cmd->add_option("--d", rg_args.d, "Degree")->required();
    rg_cmd->add_option("--m", rg_args.m, "Terms of the asymptotic series (1..7)");
    rg_cmd->add_flag("--exact-only", rg_args.exact_only, "Print only the exact count");
    rg_cmd->add_option("--json", rg_args.json_out, "Report file (default stdout after the count)");

    auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (delta_cmd->parsed())
            return run_delta(delta_args, caps);
        if (cert_cmd->parsed())
            return run_certify(cert_args, caps);
        if (ew_cmd->parsed())
            return run_edgeworth(ew_args);
        if (be_cmd->parsed())
            return run_berry_esseen(be_args, caps);
        if (rg_cmd->parsed())
            return run_rg(rg_args, caps);
        if (self_cmd->parsed())
            return run_selftest();
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DegenerateModel& e) {
        std::cerr << "degenerate model: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
