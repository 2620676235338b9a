#include <cctype>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricb/curvlab.hpp"
#include "ricb/gysin.hpp"
#include "ricb/render.hpp"
#include "ricb/spacespec.hpp"
#include "ricb/suites.hpp"
#include "ricb/symcat.hpp"

using namespace ricb;
using nlohmann::json;

namespace {

// Exit status for a rejected argument that CLI11 cannot see (bad space spec, invalid p, q, ...).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string bounds_text(const BBounds& b)
{
    return b.exact() ? std::to_string(b.lo) : std::to_string(b.lo) + ".." + std::to_string(b.hi);
}

// Substitutes n into the catalog description of a main family ("W^{4n-1}_{p,q}" -> "W^{7}_{p,q}").
std::string instantiate(const std::string& text, int n)
{
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto at = [&](const char* s) { return text.compare(i, std::char_traits<char>::length(s), s) == 0; };
        bool letter_before = i > 0 && std::isalpha(static_cast<unsigned char>(text[i - 1]));
        if (!letter_before && at("4n-1")) {
            out += std::to_string(4 * n - 1);
            i += 3;
        } else if (!letter_before && at("n+1")) {
            out += std::to_string(n + 1);
            i += 2;
        } else if (text[i] == 'n' && !letter_before &&
                   (i + 1 == text.size() || !std::isalpha(static_cast<unsigned char>(text[i + 1])))) {
            out += std::to_string(n);
        } else {
            out += text[i];
        }
    }
    return out;
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::unique_ptr<CurvatureModel> make_model(const std::string& name, const std::string& triple, double t, double lambda)
{
    if (name == "w7") return std::make_unique<QuotientDeformation>(std::make_shared<const TripleModel>(triple_by_name("W(7;1,1)")), t);
    if (name == "qt") return std::make_unique<QuotientDeformation>(std::make_shared<const TripleModel>(triple_by_name(triple)), t);
    if (name == "group") {
        auto tr = triple.empty() ? triple_from_pair(realize_pair("su_so", {3})) : triple_by_name(triple);
        return std::make_unique<GroupDeformation>(std::make_shared<const TripleModel>(std::move(tr)), t);
    }
    if (name == "diag-s3s3") return std::make_unique<DiagonalCheeger>(su_algebra(2), lambda, "S^3");
    if (name == "product-s3s3") return std::make_unique<ProductGroupMetric>(su_algebra(2), "S^3");
    throw UsageError("unknown model " + name);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ric_k bounds for symmetric and homogeneous spaces"};
    app.require_subcommand(1);

    std::string spec;
    auto* b_cmd = app.add_subcommand("b", "print b(M) for a space spec");
    b_cmd->add_option("spec", spec, "space spec, e.g. \"G2[1,1]\" or \"product(S^3, SU3/SO3)\"")->required();

    std::string which = "1", format = "text";
    auto* table_cmd = app.add_subcommand("table", "regenerate a table");
    table_cmd->add_option("--which", which)->check(CLI::IsMember({"1", "2", "3", "main"}));
    table_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv", "latex"}));

    std::string suite = "all";
    std::uint64_t seed = 1;
    int jobs = 1;
    int budget = 100000;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--seed", seed);
    verify_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--budget", budget, "random flags per curvature minimization")->check(CLI::PositiveNumber);

    int n = 2;
    long long p = 1, q = 1;
    bool allow_nonpositive = false;
    std::string coh_format = "text";
    auto* coh_cmd = app.add_subcommand("cohomology", "integral cohomology of W^{4n-1}_{p,q} through degree 2n");
    coh_cmd->add_option("--n", n)->required()->check(CLI::Range(2, 1000));
    coh_cmd->add_option("--p", p)->required();
    coh_cmd->add_option("--q", q)->required();
    coh_cmd->add_option("--format", coh_format)->check(CLI::IsMember({"text", "json"}));
    coh_cmd->add_flag("--allow-nonpositive", allow_nonpositive);

    int max_sum = 50;
    auto* tau_cmd = app.add_subcommand("tau", "distinct values of tau_n(p,q) over coprime p, q >= 1, p + q <= B");
    tau_cmd->add_option("--n", n)->required()->check(CLI::Range(2, 1000));
    tau_cmd->add_option("--max-sum", max_sum)->required()->check(CLI::Range(2, 100000));

    std::string model = "w7", triple;
    double t = 1, lambda = 1;
    int k = 1, samples = 100000, restarts = 20;
    std::string curv_format = "text";
    auto* curv_cmd = app.add_subcommand("curvature", "minimize Ric_k over sampled and optimized flags");
    curv_cmd->add_option("--model", model)->check(CLI::IsMember({"w7", "qt", "group", "diag-s3s3", "product-s3s3"}));
    curv_cmd->add_option("--triple", triple, "triple for --model qt or group, e.g. \"W(11;1,2)\" or \"ptcp:3\"");
    curv_cmd->add_option("--t", t)->check(CLI::PositiveNumber);
    curv_cmd->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
    curv_cmd->add_option("--k", k)->check(CLI::PositiveNumber);
    curv_cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);
    curv_cmd->add_option("--restarts", restarts)->check(CLI::NonNegativeNumber);
    curv_cmd->add_option("--seed", seed);
    curv_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    curv_cmd->add_option("--format", curv_format)->check(CLI::IsMember({"text", "json"}));

    std::string fat_triple = "all";
    auto* fat_cmd = app.add_subcommand("fatness", "fatness margin of a triple H < K < G");
    fat_cmd->add_option("--triple", fat_triple, "triple name, or all");
    fat_cmd->add_option("--seed", seed);

    int dim = 7;
    auto* wit_cmd = app.add_subcommand("witness", "spaces of a given dimension from the main families");
    wit_cmd->add_option("--dim", dim)->required()->check(CLI::Range(7, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*b_cmd) {
            std::cout << bounds_text(b_of_spec(spec)) << "\n";
        } else if (*table_cmd) {
            std::cout << render_table(which, *parse_table_format(format));
        } else if (*verify_cmd) {
            SuiteOptions opts{seed, jobs, budget};
            std::cout << "# ricb verify suite=" << suite << " seed=" << seed << " jobs=" << jobs << " budget=" << budget << "\n";
            auto rep = run_suite(suite, opts);
            std::cout << format_report(rep);
            return rep.ok() ? 0 : 1;
        } else if (*coh_cmd) {
            AloffWallachCohomology c;
            try {
                c = aloff_wallach_cohomology(n, p, q, allow_nonpositive);
            } catch (const TopologyError& e) {
                throw UsageError(e.what());
            }
            if (coh_format == "json") {
                std::cout << c.groups.to_json() << "\n";
            } else {
                std::cout << "# W^" << 4 * n - 1 << "_{" << p << "," << q << "}";
                if (c.nonpositive) std::cout << " (pq <= 0)";
                std::cout << "\n";
                for (const auto& [deg, g] : c.groups.degree) std::cout << "H^" << deg << " = " << g.to_string() << "\n";
            }
        } else if (*tau_cmd) {
            auto en = distinct_tau_enumeration(n, max_sum);
            std::cout << "# n=" << n << " max_sum=" << max_sum << " pairs=" << en.entries.size()
                      << " distinct=" << en.distinct() << "\n";
            for (const auto& [value, pairs] : en.by_tau) {
                std::cout << value.str() << ":";
                for (const auto& [a, b] : pairs) std::cout << " (" << a << "," << b << ")";
                std::cout << "\n";
            }
        } else if (*curv_cmd) {
            if (model == "qt" && triple.empty()) throw UsageError("--model qt needs --triple");
            std::unique_ptr<CurvatureModel> m;
            try {
                m = make_model(model, triple, t, lambda);
            } catch (const CurvatureError& e) {
                throw UsageError(e.what());
            }
            if (k >= m->dim()) throw UsageError("--k must be below the dimension " + std::to_string(m->dim()));
            SamplerConfig cfg;
            cfg.samples = samples;
            cfg.restarts = restarts;
            cfg.seed = seed;
            cfg.jobs = jobs;
            std::vector<FlagSample> starts;
            if (m->mode() == MetricMode::product) starts.push_back(split_flag(*m, k));
            auto best = ric_k_min(*m, k, cfg, starts);
            if (curv_format == "json") {
                auto j = json::parse(best.to_json());
                j["seed"] = seed;
                j["samples"] = samples;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "# model=" << m->name() << " mode=" << to_string(m->mode()) << " k=" << k
                          << " samples=" << samples << " restarts=" << restarts << " seed=" << seed << "\n";
                std::cout << "min Ric_" << k << " = " << num(best.value) << " (" << best.origin << ")\n";
            }
        } else if (*fat_cmd) {
            std::vector<std::string> names = fat_triple == "all" ? first_set_triples(4) : std::vector<std::string>{fat_triple};
            if (fat_triple == "all") names.push_back("torus");
            std::cout << "# fatness seed=" << seed << "\n";
            for (const auto& name : names) {
                TripleModel tr;
                try {
                    tr = triple_by_name(name);
                } catch (const CurvatureError& e) {
                    throw UsageError(e.what());
                }
                auto r = fatness_margin(tr, 100, seed);
                std::cout << name << ": dim m=" << r.dim_m << " dim p=" << r.dim_p << " margin=" << num(r.margin)
                          << (r.degenerate ? " degenerate" : r.fat ? " fat" : " not fat") << "\n";
            }
        } else if (*wit_cmd) {
            auto ws = dimension_witnesses(dim);
            if (ws.empty()) std::cout << "none in dimension " << dim << "\n";
            for (const auto& w : ws)
                std::cout << instantiate(w.spaces, w.n) << " n=" << w.n << " d=" << w.d << " k=" << w.k << " (" << w.type
                          << ")\n";
        }
    } catch (const SpaceSpecError& e) {
        std::cerr << "error: " << e.what() << "\n" << b_cmd->help();
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
