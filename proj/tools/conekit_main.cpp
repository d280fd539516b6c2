#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "conekit/charfn.hpp"
#include "conekit/harness.hpp"
#include "conekit/report.hpp"
#include "conekit/sampling.hpp"
#include "conekit/starmap.hpp"
#include "selftest.hpp"

using nlohmann::json;
using namespace conekit;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
    ConeModel cone = ConeModel::orthant(1);
    bool has_cone = false;
    std::vector<InequalityCase> cases;
    std::vector<json> family_spec;
    McConfig mc;
    std::string out_dir = "conekit-out";
    int threads = 0;
    std::vector<double> alphas;
    std::vector<double> sweep_values;
    std::string sweep_param = "gamma";
};

InequalityCase parse_case(const json& j, const std::optional<ConeModel>& default_cone) {
    InequalityCase c;
    c.theorem = theorem_from_name(j.at("theorem").get<std::string>());
    if (j.contains("cone")) c.cone = ConeModel::from_json(j.at("cone"));
    else if (default_cone) c.cone = *default_cone;
    else throw std::invalid_argument("case needs a cone (inline or top-level)");
    c.p = j.value("p", 2.0);
    c.q = j.value("q", c.p);
    c.gamma = j.value("gamma", 0.0);
    c.delta = j.value("delta", 0.0);
    c.alpha = j.value("alpha", 0.0);
    c.r = j.value("r", 1.0);
    c.kernel = j.value("kernel", std::string());
    if (c.p < 1.0 || c.q < 1.0) throw std::invalid_argument("case: p and q must be >= 1");
    if (c.r < 1.0) throw std::invalid_argument("case: r must be >= 1");
    return c;
}

TestFunction parse_test_function(const ConeModel& cone, const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "delta_power") return tf_delta_power(cone, j.at("delta").get<double>());
    if (kind == "indicator_interval") {
        const auto& bj = j.at("b");
        Vec b(bj.size());
        for (size_t i = 0; i < bj.size(); ++i) b[i] = bj[i].get<double>();
        return tf_indicator(cone, b);
    }
    if (kind == "exp_damped_power")
        return tf_exp_damped(cone, j.at("delta").get<double>(), j.at("rate").get<double>());
    if (kind == "custom") {
        const bool declared = j.contains("decay_exponent");
        return tf_custom(cone, j.at("source").get<std::string>(),
                         declared ? j.at("decay_exponent").get<double>() : 0.0, declared);
    }
    throw std::invalid_argument("unknown test function kind '" + kind + "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    in >> j;
    const int ver = j.value("schema_version", 1);
    if (ver != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version " + std::to_string(ver));
    RunConfig cfg;
    if (j.contains("cone")) {
        cfg.cone = ConeModel::from_json(j.at("cone"));
        cfg.has_cone = true;
    }
    std::optional<ConeModel> dc;
    if (cfg.has_cone) dc = cfg.cone;
    if (j.contains("cases"))
        for (const auto& cj : j.at("cases")) cfg.cases.push_back(parse_case(cj, dc));
    if (j.contains("family"))
        for (const auto& fj : j.at("family")) cfg.family_spec.push_back(fj);
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.samples = m.value("samples", cfg.mc.samples);
        cfg.mc.seed = m.value("seed", cfg.mc.seed);
        cfg.mc.chunk = m.value("chunk", cfg.mc.chunk);
        cfg.mc.max_rejections = m.value("max_rejections", cfg.mc.max_rejections);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.threads = j.value("threads", 0);
    if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("sweep")) {
        cfg.sweep_param = j.at("sweep").value("param", "gamma");
        cfg.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
    }
    return cfg;
}

std::string fd(double v) { return format_double(v); }

void csv_add_case_row(CsvWriter& csv, const InequalityCase& c, const std::string& fid,
                      const McEstimate& lhs, const McEstimate& rhs, double ratio,
                      const std::string& verdict) {
    csv.add_row({theorem_name(c.theorem), c.cone.label(), fd(c.p), fd(c.q), fd(c.gamma),
                 fd(c.alpha), fd(c.r), fid, fd(lhs.value), fd(lhs.stderr_), fd(rhs.value),
                 fd(rhs.stderr_), fd(ratio), verdict});
}

std::vector<std::string> csv_header() {
    return {"theorem", "cone", "p",   "q",          "gamma", "alpha",      "r",
            "function_id", "lhs", "lhs_stderr", "rhs",  "rhs_stderr", "ratio", "verdict"};
}

int cmd_describe_cone(const RunConfig& cfg, Exec exec) {
    const ConeModel& cone = cfg.cone;
    const ConeModel dc = dual(cone);
    std::string md = "# cone report: " + cone.label() + "\n\n";
    md += "- dim: " + std::to_string(cone.dim()) + "\n";
    md += "- dual: " + dc.label() + "\n";

    const SigmaReport sr = sigma0_closed(cone);
    md += "- sigma0: " + fd(sr.sigma0) + ", sigma: " + fd(sr.sigma) + " (closed form)\n";
    const SigmaReport srd = sigma0_closed(dc);
    md += "- sigma0(dual): " + fd(srd.sigma0) + ", sigma(dual): " + fd(srd.sigma) + "\n";

    const Vec fp = fixed_point(cone, 1e-8);
    md += "- fixed point of the star map: [";
    for (int i = 0; i < cone.dim(); ++i) md += (i ? "," : "") + fd(fp[i]);
    md += "], |x*-x| = " + fd((star(cone, fp).x_star - fp).norm()) + "\n";

    // duality constants with spread bars over sampled points
    double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300, s1 = 0, s2 = 0;
    const int npts = 100;
    for (int i = 0; i < npts; ++i) {
        auto rng = RngStream::at(cfg.mc.seed, 0xDE5C, i);
        Vec x = sample_cone_point(cone, rng, 0.01);
        Vec xs = star(cone, x).x_star;
        const double c1 = std::exp(log_delta(cone, x) + log_delta(dc, xs));
        const double c2 = std::exp(log_phi(cone, x) + log_phi(dc, xs));
        lo1 = std::min(lo1, c1), hi1 = std::max(hi1, c1), s1 += c1;
        lo2 = std::min(lo2, c2), hi2 = std::max(hi2, c2), s2 += c2;
    }
    md += "- Delta(x)*Delta*(x*) = " + fd(s1 / npts) + " +- " + fd(0.5 * (hi1 - lo1)) + "\n";
    md += "- phi(x)*phi*(x*) = " + fd(s2 / npts) + " +- " + fd(0.5 * (hi2 - lo2)) + "\n";
    (void)exec;

    write_file(cfg.out_dir + "/describe-" + cone.label() + ".md", md);
    std::cout << md;
    return 0;
}

int cmd_selftest(const RunConfig& cfg, Exec exec) {
    McConfig mc = cfg.mc;
    auto cases = selftest::run(mc, exec);
    bool all_ok = true;
    for (const auto& c : cases) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) std::cout << "  [" << c.message << "]";
        std::cout << "\n";
        all_ok = all_ok && c.passed;
    }
    write_file(cfg.out_dir + "/selftest.xml", junit_xml("conekit-selftest", cases));
    return all_ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, Exec exec) {
    if (cfg.cases.empty()) {
        std::cerr << "verify: no cases in config\n";
        return 2;
    }
    CsvWriter csv(csv_header());
    std::string md = "# verification report\n\n";
    bool all_consistent = true;
    for (const auto& c : cfg.cases) {
        try {
            std::vector<TestFunction> family;
            for (const auto& fj : cfg.family_spec)
                family.push_back(parse_test_function(c.cone, fj));
            if (family.empty()) family = default_family(c);
            const VerificationReport rep = verify(c, family, cfg.mc, exec);
            md += "## " + theorem_name(c.theorem) + " on " + c.cone.label() + "\n";
            md += "- condition margin: " + fd(rep.conditions.margin) +
                  (rep.conditions.satisfied ? " (satisfied)" : " (not satisfied)") + "\n";
            if (rep.conditions.witness_delta)
                md += "- delta witness: " + fd(*rep.conditions.witness_delta) + "\n";
            if (!rep.conditions.notes.empty()) md += "- notes: " + rep.conditions.notes + "\n";
            md += "- verdict: " + verdict_name(rep.verdict) +
                  ", max ratio: " + fd(rep.max_ratio) + "\n\n";
            for (const auto& fr : rep.per_function)
                csv_add_case_row(csv, c, fr.id, fr.lhs, fr.rhs, fr.ratio,
                                 verdict_name(rep.verdict));
            all_consistent =
                all_consistent && rep.verdict == VerificationReport::Verdict::Consistent;
        } catch (const std::exception& ex) {
            McEstimate none;
            csv_add_case_row(csv, c, "-", none, none, 0.0, std::string("error: ") + ex.what());
            md += "## " + theorem_name(c.theorem) + " on " + c.cone.label() + "\n- error: " +
                  ex.what() + "\n\n";
            all_consistent = false;
        }
    }
    write_file(cfg.out_dir + "/verify.csv", csv.str());
    write_file(cfg.out_dir + "/verify.md", md);
    std::cout << md;
    return all_consistent ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, Exec exec) {
    if (cfg.cases.empty() || cfg.sweep_values.empty()) {
        std::cerr << "sweep: needs a case and sweep values\n";
        return 2;
    }
    CsvWriter csv(csv_header());
    std::string md = "# sweep report\n\n";
    for (const auto& base : cfg.cases) {
        for (double v : cfg.sweep_values) {
            InequalityCase c = base;
            if (cfg.sweep_param == "gamma") c.gamma = v;
            else if (cfg.sweep_param == "alpha") c.alpha = v;
            else throw std::invalid_argument("sweep: unknown param " + cfg.sweep_param);
            try {
                const ConditionReport cond = check_conditions(c);
                if (cond.satisfied) {
                    std::vector<TestFunction> family;
                    for (const auto& fj : cfg.family_spec)
                        family.push_back(parse_test_function(c.cone, fj));
                    if (family.empty()) family = default_family(c);
                    const VerificationReport rep = verify(c, family, cfg.mc, exec);
                    for (const auto& fr : rep.per_function)
                        csv_add_case_row(csv, c, fr.id, fr.lhs, fr.rhs, fr.ratio,
                                         verdict_name(rep.verdict));
                    md += "- " + cfg.sweep_param + "=" + fd(v) + ": margin " + fd(cond.margin) +
                          ", verdict " + verdict_name(rep.verdict) + ", max ratio " +
                          fd(rep.max_ratio) + "\n";
                } else {
                    const ProbeReport probe = probe_violation(c, cfg.mc, exec);
                    McEstimate lhs, rhs;
                    double ratio = 0;
                    if (!probe.rows.empty()) {
                        lhs.value = probe.rows.back().lhs;
                        rhs.value = probe.rows.back().rhs;
                        ratio = probe.rows.back().ratio;
                    }
                    const std::string verdict =
                        probe.violation_evidence ? "divergence-growth" : "probe-stable";
                    csv_add_case_row(csv, c, "probe", lhs, rhs, ratio, verdict);
                    md += "- " + cfg.sweep_param + "=" + fd(v) + ": margin " + fd(cond.margin) +
                          ", probe growth x" + fd(probe.total_growth) + " -> " + verdict + "\n";
                }
            } catch (const std::exception& ex) {
                McEstimate none;
                csv_add_case_row(csv, c, "-", none, none, 0.0,
                                 std::string("error: ") + ex.what());
            }
        }
    }
    write_file(cfg.out_dir + "/sweep.csv", csv.str());
    write_file(cfg.out_dir + "/sweep.md", md);
    std::cout << md;
    return 0;
}

int cmd_sigma(const RunConfig& cfg, Exec exec) {
    if (!cfg.has_cone) {
        std::cerr << "sigma: config needs a cone\n";
        return 2;
    }
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty())
        for (double a = -1.5; a <= -0.19; a += 0.1) alphas.push_back(a);
    const SigmaReport est = sigma0_estimate(cfg.cone, alphas, cfg.mc, exec);
    const SigmaReport closed = sigma0_closed(cfg.cone);
    CsvWriter csv({"alpha", "estimate_n", "estimate_4n", "growth", "divergent"});
    for (const auto& row : est.rows)
        csv.add_row({fd(row.alpha), fd(row.estimate_n), fd(row.estimate_4n), fd(row.growth),
                     row.divergent ? "1" : "0"});
    std::string md = "# sigma report: " + cfg.cone.label() + "\n\n";
    md += "- closed form sigma0: " + fd(closed.sigma0) + "\n";
    md += "- estimated bracket: [" + fd(est.bracket_low) + ", " + fd(est.bracket_high) + "]" +
          (est.one_sided ? " (one-sided)" : "") + "\n";
    md += "- boundary tail exponent estimate: " + fd(est.tail_exponent) + "\n";
    write_file(cfg.out_dir + "/sigma.csv", csv.str());
    write_file(cfg.out_dir + "/sigma.md", md);
    std::cout << md;
    const bool agrees = est.one_sided
                            ? !std::isfinite(closed.sigma0)
                            : closed.sigma0 >= est.bracket_low - 1e-9 &&
                                  closed.sigma0 <= est.bracket_high + 1e-9;
    return agrees ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conekit: geometry of homogeneous cones and weighted norm inequalities"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    std::string config_path, out_override;
    std::uint64_t seed_override = 0;
    std::uint64_t samples_override = 0;
    int threads = 0;
    bool serial = false;
    app.add_option("--config", config_path, "JSON config path");
    app.add_option("--seed", seed_override, "override mc.seed");
    app.add_option("--samples", samples_override, "override mc.samples");
    app.add_option("--out", out_override, "override out_dir");
    app.add_option("--threads", threads, "worker threads (0 = library default)");
    app.add_flag("--serial", serial, "use the serial reference kernels");

    auto* c_desc = app.add_subcommand("describe-cone", "geometry summary of a cone");
    auto* c_self = app.add_subcommand("selftest", "run the invariant suite");
    auto* c_verify = app.add_subcommand("verify", "verify the configured inequality cases");
    auto* c_sweep = app.add_subcommand("sweep", "sweep an exponent across its condition boundary");
    auto* c_sigma = app.add_subcommand("sigma", "estimate the section integrability threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        else if (c_self->parsed()) cfg = RunConfig{};  // selftest runs without a config
        else {
            std::cerr << "a --config file is required for this command\n";
            return 2;
        }
        if (seed_override) cfg.mc.seed = seed_override;
        if (samples_override) cfg.mc.samples = samples_override;
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (threads > 0) cfg.threads = threads;
#ifdef _OPENMP
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
        const Exec exec = serial ? Exec::Serial : Exec::OpenMP;

        if (c_desc->parsed()) return cmd_describe_cone(cfg, exec);
        if (c_self->parsed()) return cmd_selftest(cfg, exec);
        if (c_verify->parsed()) return cmd_verify(cfg, exec);
        if (c_sweep->parsed()) return cmd_sweep(cfg, exec);
        if (c_sigma->parsed()) return cmd_sigma(cfg, exec);
        std::cerr << "no command\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
