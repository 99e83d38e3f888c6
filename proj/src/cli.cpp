#include "lpq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpq/counterexample.hpp"
#include "lpq/decomposer.hpp"
#include "lpq/functionals.hpp"
#include "lpq/opnorms.hpp"
#include "lpq/seqio.hpp"

namespace lpq {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitUsage = 64;
constexpr int kExitBadInput = 65;

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitPass;
        case Verdict::Fail: return kExitFail;
        default: return kExitUndecided;
    }
}

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

CoupleParams parse_couple(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("couple must be \"p,q\" (q may be inf)");
    return CoupleParams(parse_exponent(s.substr(0, comma)), parse_exponent(s.substr(comma + 1)));
}

std::vector<double> parse_grid(const std::string& spec) {
    if (spec.rfind("dyadic:", 0) == 0) return dyadic_grid(std::stoi(spec.substr(7)));
    if (spec.rfind("list:", 0) == 0) {
        std::vector<double> g;
        std::string rest = spec.substr(5);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(',', pos);
            if (next == std::string::npos) next = rest.size();
            g.push_back(std::stod(rest.substr(pos, next - pos)));
            pos = next + 1;
        }
        return g;
    }
    throw std::invalid_argument("grid spec must be dyadic:K or list:t1,t2,...");
}

Seq load_seq(const std::string& path) {
    return seq_from_json(nlohmann::json::parse(read_text_file(path)));
}

void dump_json(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::string kcurve_csv(const KCurve& c) {
    std::string out = "t,K,method,lo,hi\n";
    char buf[160];
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g,%.17g\n", c.grid[i],
                      c.values[i].mid(), to_string(c.method), c.values[i].lo, c.values[i].hi);
        out += buf;
    }
    return out;
}

int cmd_kfun(const std::string& seq_path, const std::string& couple_s, const std::string& grid_s,
             const std::string& method, const std::string& out) {
    Seq s = load_seq(seq_path);
    CoupleParams couple = parse_couple(couple_s);
    std::vector<double> grid = parse_grid(grid_s);
    KCurve curve;
    for (double t : grid) {
        curve.grid.push_back(t);
        if (couple.p == 0.0) {
            curve.method = KMethod::FromE;
            curve.values.push_back(k_from_e(s, t, couple.q));
        } else if (method == "oracle") {
            curve.method = KMethod::ExactOracle;
            double v = k_exact_oracle(s, t, couple).value;
            curve.values.push_back(CertifiedValue::exact(v));
        } else {
            curve.method = KMethod::Holmstedt;
            curve.values.push_back(holmstedt(s, t, couple));
        }
    }
    if (!out.empty()) write_text_file(out, kcurve_csv(curve));
    std::printf("kfun: %zu grid points, method %s\n", curve.grid.size(), to_string(curve.method));
    return kExitPass;
}

int cmd_efun(const std::string& seq_path, double q, const std::string& grid_s,
             const std::string& out) {
    Seq s = load_seq(seq_path);
    std::vector<double> grid = parse_grid(grid_s);
    std::string csv = "t,E,lo,hi\n";
    char buf[160];
    for (double t : grid) {
        CertifiedValue e = e_functional(s, t, q);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", t, e.mid(), e.lo, e.hi);
        csv += buf;
    }
    if (!out.empty()) write_text_file(out, csv);
    std::printf("efun: %zu grid points\n", grid.size());
    return kExitPass;
}

int cmd_holmstedt(const std::string& seq_path, const std::string& couple_s,
                  const std::string& grid_s, const std::string& out) {
    Seq s = load_seq(seq_path);
    CoupleParams couple = parse_couple(couple_s);
    std::vector<double> grid = parse_grid(grid_s);
    KCurve curve;
    curve.method = KMethod::Holmstedt;
    for (double t : grid) {
        curve.grid.push_back(t);
        curve.values.push_back(holmstedt(s, t, couple));
    }
    if (!out.empty()) write_text_file(out, kcurve_csv(curve));
    std::printf("holmstedt: %zu grid points\n", grid.size());
    return kExitPass;
}

int cmd_majorize(const std::string& x_path, const std::string& y_path, const std::string& mode,
                 double p, double q, double C, std::uint64_t horizon) {
    Seq x = load_seq(x_path), y = load_seq(y_path);
    MajorizeReport rep;
    if (mode == "head") {
        rep = head_majorizes(x, y, p, horizon);
    } else if (mode == "tail") {
        rep = tail_majorizes_shifted(x, y, q, C, horizon);
    } else if (mode == "holmstedt") {
        rep = holmstedt_majorizes(x, y, CoupleParams(p, q), horizon);
    } else {
        throw std::invalid_argument("mode must be head|tail|holmstedt");
    }
    std::printf("majorize %s: %s (min margin %.6g%s)\n", mode.c_str(), to_string(rep.verdict),
                rep.min_margin,
                rep.first_violation ? (", first violation at n=" +
                                       std::to_string(rep.first_violation)).c_str()
                                    : "");
    return exit_for(rep.verdict);
}

int cmd_partition(const std::string& x_path, const std::string& y_path,
                  const std::string& couple_s, std::uint64_t horizon, const std::string& out,
                  const std::string& certs_out) {
    Seq x = load_seq(x_path), y = load_seq(y_path);
    CoupleParams couple = parse_couple(couple_s);
    IntervalPartition part = ab_partition(x, y, couple, horizon);
    if (!out.empty()) dump_json(out, partition_to_json(part));
    Verdict v = part.coverage;
    if (v == Verdict::Pass && !certs_out.empty()) {
        auto certs = block_certificates(x, y, part, couple);
        write_text_file(certs_out, certificates_csv(certs));
        for (const auto& c : certs) v = worst(v, c.verdict);
    }
    std::printf("partition: %zu A-blocks, %zu B-blocks, coverage %s\n", part.a_blocks.size(),
                part.b_blocks.size(), to_string(part.coverage));
    if (part.coverage != Verdict::Pass)
        std::printf("  uncovered index: %llu\n",
                    static_cast<unsigned long long>(part.uncovered_index));
    return exit_for(v);
}

int cmd_split(const std::string& x_path, const std::string& y_path, const std::string& couple_s,
              std::uint64_t horizon, const std::string& out_prefix) {
    Seq x = load_seq(x_path), y = load_seq(y_path);
    CoupleParams couple = parse_couple(couple_s);
    SplitResult res = split_operator(x, y, couple, horizon);
    if (!out_prefix.empty()) {
        dump_json(out_prefix + "_T.json", matrix_to_json(res.T));
        dump_json(out_prefix + "_S.json", matrix_to_json(res.S));
        nlohmann::json rep;
        rep["residual"] = res.residual;
        rep["partition"] = partition_to_json(res.partition);
        rep["t_norm_p"] = {{"lo", res.t_norm_p.lo}, {"hi", res.t_norm_p.hi}};
        rep["t_norm_inf"] = {{"lo", res.t_norm_inf.lo}, {"hi", res.t_norm_inf.hi}};
        rep["s_norm_0"] = {{"lo", res.s_norm_0.lo}, {"hi", res.s_norm_0.hi}};
        rep["s_norm_q"] = {{"lo", res.s_norm_q.lo}, {"hi", res.s_norm_q.hi}};
        rep["t_target_p"] = res.t_target_p;
        rep["t_target_inf"] = res.t_target_inf;
        rep["s_target_0"] = res.s_target_0;
        rep["s_target_q"] = res.s_target_q;
        dump_json(out_prefix + "_report.json", rep);
    }
    bool within = res.t_norm_p.hi <= res.t_target_p && res.s_norm_0.hi <= res.s_target_0;
    std::printf("split: residual %.3g; ||T||_p %.4g (target %.4g), ||S||_0 %.4g (target %.4g)%s\n",
                res.residual, res.t_norm_p.hi, res.t_target_p, res.s_norm_0.hi, res.s_target_0,
                within ? "" : "  [exceeds reference constants; informational]");
    return res.residual <= 1e-10 ? kExitPass : kExitFail;
}

int cmd_norms(const std::string& matrix_path, const std::string& spaces, const std::string& out) {
    OperatorMatrix M = matrix_from_json(nlohmann::json::parse(read_text_file(matrix_path)));
    std::vector<NormReport> reports;
    std::size_t pos = 0;
    while (pos < spaces.size()) {
        std::size_t next = spaces.find(',', pos);
        if (next == std::string::npos) next = spaces.size();
        std::string tag = spaces.substr(pos, next - pos);
        pos = next + 1;
        if (tag == "l0") {
            reports.push_back(norm_l0(M));
        } else if (tag == "l1") {
            reports.push_back(norm_l1(M));
        } else if (tag == "linf") {
            reports.push_back(norm_linf(M));
        } else if (tag.rfind("lq:", 0) == 0) {
            reports.push_back(norm_lq_exact(M, std::stod(tag.substr(3))));
        } else if (tag.rfind("lp:", 0) == 0) {
            reports.push_back(norm_lp_bounds(M, std::stod(tag.substr(3))));
        } else {
            throw std::invalid_argument("unknown space tag: " + tag);
        }
    }
    std::string csv = norm_reports_csv(reports);
    if (!out.empty()) write_text_file(out, csv);
    std::fputs(csv.c_str(), stdout);
    return kExitPass;
}

int cmd_tab(const std::string& seq_path, std::uint64_t a, std::uint64_t b, double q,
            std::size_t horizon, const std::string& out) {
    Seq h = load_seq(seq_path);
    Seq image = tail_stretch(h, StretchParams{a, b, q}, horizon);
    if (!out.empty()) dump_json(out, seq_to_json(image));
    std::printf("tab: image has %zu stored entries\n", image.prefix_len());
    return kExitPass;
}

int cmd_counterexample(double p, double q, double r, int steps, double sigma,
                       const std::string& out, const std::string& ratios_out,
                       const std::string& f_out, std::uint64_t horizon) {
    if (sigma <= 0) sigma = default_sigma(p, q);
    Seq g = Seq::power(1.0, sigma);
    GenResult gen = gen_counterexample(g, p, q, r, steps);
    VerifyReport rep = verify_counterexample(gen.f, g, p, q, r, gen.trace, horizon);
    if (!out.empty()) {
        nlohmann::json j = trace_to_json(gen.trace);
        j["sigma"] = sigma;
        j["f_norm_q"] = {{"lo", gen.f_norm_q.lo}, {"hi", gen.f_norm_q.hi}};
        j["g_norm_q"] = {{"lo", gen.g_norm_q.lo}, {"hi", gen.g_norm_q.hi}};
        dump_json(out, j);
    }
    if (!ratios_out.empty()) write_text_file(ratios_out, ratios_csv(gen.trace));
    if (!f_out.empty()) dump_json(f_out, seq_to_json(gen.f));
    Verdict v = worst(worst(rep.steps_certified, rep.mass_conserved),
                      worst(rep.tail_domination, rep.stabilization));
    std::printf(
        "counterexample [%s]: steps %s, mass %s (width %.3g), tails %s, least ratio %.4g\n",
        to_string(gen.trace.regime), to_string(rep.steps_certified),
        to_string(rep.mass_conserved), rep.mass_width, to_string(rep.tail_domination),
        rep.least_ratio);
    return exit_for(v);
}

int cmd_witness(double p, double q, double C, std::uint64_t seed, const std::string& out) {
    WitnessResult w = cm_witness(p, q, C, seed);
    if (!out.empty()) {
        nlohmann::json j;
        j["N"] = w.N;
        j["bound"] = w.bound;
        j["c_hat"] = w.c_hat;
        j["x"] = seq_to_json(w.x);
        j["y"] = seq_to_json(w.y);
        j["hypothesis"] = to_string(w.hypothesis);
        dump_json(out, j);
    }
    std::printf("witness: N = %llu, bound = %.17g, hypothesis %s\n",
                static_cast<unsigned long long>(w.N), w.bound, to_string(w.hypothesis));
    return exit_for(w.hypothesis);
}

int cmd_sqcheck(const std::string& x_path, const std::string& y_path, double q, double r,
                bool replay) {
    Seq x = load_seq(x_path), y = load_seq(y_path);
    SqReport rep = sq_check(x, y, q, r, replay);
    Verdict v = worst(rep.equal_mass, rep.head_condition);
    std::printf("sqcheck: equal mass %s, head condition %s, tail cross-check %s\n",
                to_string(rep.equal_mass), to_string(rep.head_condition), to_string(rep.lsz_tail));
    if (rep.replay_ran) {
        std::printf("  replay: hypothesis %s, head %s, norm %s\n",
                    to_string(rep.replay_hypothesis), to_string(rep.replay_head),
                    to_string(rep.replay_norm));
        v = worst(v, worst(rep.replay_hypothesis, worst(rep.replay_head, rep.replay_norm)));
    }
    return exit_for(v);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"K/E-functional toolkit for (l^p, l^q) sequence couples"};
    app.require_subcommand(1);

    std::string seq_path, x_path, y_path, matrix_path, couple_s = "0,1";
    std::string grid_s = "dyadic:10", method = "holmstedt", mode = "head";
    std::string out, out2, out3, spaces = "l0,l1,linf";
    double p = 0, q = 1, C = 1, sigma = -1;
    std::uint64_t horizon = 256, a = 1, b = 1, seed = 20250809;
    int steps = 20;

    auto* kfun = app.add_subcommand("kfun", "K-functional along a t-grid");
    kfun->add_option("--seq", seq_path)->required();
    kfun->add_option("--couple", couple_s);
    kfun->add_option("--grid", grid_s);
    kfun->add_option("--method", method)->check(CLI::IsMember({"holmstedt", "oracle"}));
    kfun->add_option("--out", out);

    auto* efun = app.add_subcommand("efun", "E-functional for (l^0, l^q)");
    efun->add_option("--seq", seq_path)->required();
    efun->add_option("--q", q);
    efun->add_option("--grid", grid_s);
    efun->add_option("--out", out);

    auto* holm = app.add_subcommand("holmstedt", "Holmstedt estimate along a t-grid");
    holm->add_option("--seq", seq_path)->required();
    holm->add_option("--couple", couple_s)->required();
    holm->add_option("--grid", grid_s);
    holm->add_option("--out", out);

    auto* maj = app.add_subcommand("majorize", "certified majorization checks");
    maj->add_option("--x", x_path)->required();
    maj->add_option("--y", y_path)->required();
    maj->add_option("--mode", mode)->check(CLI::IsMember({"head", "tail", "holmstedt"}));
    maj->add_option("--p", p);
    maj->add_option("--q", q);
    maj->add_option("--C", C);
    maj->add_option("--horizon", horizon);

    auto* part = app.add_subcommand("partition", "A/B interval partition");
    part->add_option("--x", x_path)->required();
    part->add_option("--y", y_path)->required();
    part->add_option("--couple", couple_s)->required();
    part->add_option("--horizon", horizon);
    part->add_option("--out", out);
    part->add_option("--certs", out2);

    auto* split = app.add_subcommand("split", "two-operator decomposition y = Tx + Sx");
    split->add_option("--x", x_path)->required();
    split->add_option("--y", y_path)->required();
    split->add_option("--couple", couple_s)->required();
    split->add_option("--horizon", horizon);
    split->add_option("--out-prefix", out);

    auto* norms = app.add_subcommand("norms", "induced norm reports");
    norms->add_option("--matrix", matrix_path)->required();
    norms->add_option("--spaces", spaces);
    norms->add_option("--out", out);

    auto* tab = app.add_subcommand("tab", "keep-head/stretch-tail transform");
    tab->add_option("--seq", seq_path)->required();
    tab->add_option("--a", a);
    tab->add_option("--b", b);
    tab->add_option("--q", q);
    tab->add_option("--horizon", horizon);
    tab->add_option("--out", out);

    std::string r_s = "inf";
    auto* cex = app.add_subcommand("counterexample", "iterative flattening construction");
    cex->add_option("--p", p);
    cex->add_option("--q", q);
    cex->add_option("--r", r_s);
    cex->add_option("--steps", steps);
    cex->add_option("--sigma", sigma);
    cex->add_option("--out", out);
    cex->add_option("--ratios", out2);
    cex->add_option("--fout", out3);
    cex->add_option("--horizon", horizon);

    auto* wit = app.add_subcommand("witness", "unbounded-norm witness pair (q < 1)");
    wit->add_option("--p", p);
    wit->add_option("--q", q);
    wit->add_option("--C", C);
    wit->add_option("--seed", seed);
    wit->add_option("--out", out);

    auto* sqc = app.add_subcommand("sqcheck", "equal-mass/head-domination checks");
    sqc->add_option("--x", x_path)->required();
    sqc->add_option("--y", y_path)->required();
    sqc->add_option("--q", q);
    sqc->add_option("--r", r_s);
    sqc->add_flag("--replay", "run the proof-replay construction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (kfun->parsed()) return cmd_kfun(seq_path, couple_s, grid_s, method, out);
        if (efun->parsed()) return cmd_efun(seq_path, q, grid_s, out);
        if (holm->parsed()) return cmd_holmstedt(seq_path, couple_s, grid_s, out);
        if (maj->parsed()) return cmd_majorize(x_path, y_path, mode, p, q, C, horizon);
        if (part->parsed()) return cmd_partition(x_path, y_path, couple_s, horizon, out, out2);
        if (split->parsed()) return cmd_split(x_path, y_path, couple_s, horizon, out);
        if (norms->parsed()) return cmd_norms(matrix_path, spaces, out);
        if (tab->parsed()) return cmd_tab(seq_path, a, b, q, horizon, out);
        if (cex->parsed())
            return cmd_counterexample(p, q, parse_exponent(r_s), steps, sigma, out, out2, out3,
                                      horizon);
        if (wit->parsed()) return cmd_witness(p, q, C, seed, out);
        if (sqc->parsed())
            return cmd_sqcheck(x_path, y_path, q, parse_exponent(r_s),
                               sqc->count("--replay") > 0);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "certified failure: %s\n", e.what());
        return kExitFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
    return kExitUsage;
}

}  // namespace lpq
