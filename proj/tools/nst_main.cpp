// Command line front end: closed-form evaluation, curve/table emission for
// the figure reproductions, Monte Carlo verification and SVG plotting.
//
// Exit codes: 0 success, 2 flag/domain error, 3 I/O error, 4 solver failure,
// 5 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nst/io.hpp"
#include "nst/models.hpp"
#include "nst/montecarlo.hpp"

using nlohmann::ordered_json;
using namespace nst;

namespace {

struct ModelFlags {
    std::string model = "exp";
    double K = 1.0;
    double a = 1.0;
    double mu = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "model family: exp|bhit|bessel")
            ->check(CLI::IsMember({"exp", "bhit", "bessel"}));
        cmd->add_option("--K", K, "level K in (0,1] (exp)");
        cmd->add_option("--a", a, "level a > 0 (bhit, bessel)");
        cmd->add_option("--mu", mu, "Bessel index mu > 0");
    }

    model::ModelSpec spec() const {
        if (model == "exp") return model::ModelSpec::exp_last_passage(K);
        if (model == "bhit") return model::ModelSpec::brownian_before_hit(a);
        return model::ModelSpec::bessel_last_passage(mu, a);
    }
};

std::string model_label(const model::ModelSpec& m) {
    switch (m.family) {
        case model::Family::ExpLastPassage:
            return "exp(K=" + io::format_double(m.K) + ")";
        case model::Family::BrownianBeforeHit:
            return "bhit(a=" + io::format_double(m.a) + ")";
        case model::Family::BesselLastPassage:
            return "bessel(mu=" + io::format_double(m.mu) +
                   ",a=" + io::format_double(m.a) + ")";
    }
    return "?";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw io::IoError("write failed: " + path);
}

int cmd_eval(const ModelFlags& mf, double t) {
    const double m = model::m_of(mf.spec(), t);
    std::cout << io::format_sig(m, 12) << "\n";
    return 0;
}

int cmd_curve(const ModelFlags& mf, double t_min, double t_max, int points,
              const std::string& out) {
    const auto curve = model::sample_curve(mf.spec(), t_min, t_max, points);
    io::Csv csv;
    csv.header = {"t", "m"};
    for (const auto& p : curve.points) csv.rows.push_back({p.t, p.m});
    io::write_csv(out, csv);
    return 0;
}

int cmd_curve_figure1(const std::string& out_dir) {
    for (int k = 1; k <= 10; ++k) {
        const double K = k / 10.0;
        const auto curve = model::sample_curve(
            model::ModelSpec::exp_last_passage(K), 0.0, 5.0, 500);
        io::Csv csv;
        csv.header = {"t", "m"};
        for (const auto& p : curve.points) csv.rows.push_back({p.t, p.m});
        char name[64];
        std::snprintf(name, sizeof name, "/m_K_0.%d.csv", k);
        io::write_csv(out_dir + (k == 10 ? "/m_K_1.0.csv" : name), csv);
    }
    return 0;
}

int cmd_table(std::vector<double> mus, const std::string& out) {
    if (mus.empty())
        mus = {0.5, 1.0, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5};
    io::Csv csv;
    csv.header = {"mu", "z_mu", "m_mu", "m_prime_mu"};
    for (double mu : mus) {
        const auto c = model::bessel_characteristics(mu);
        csv.rows.push_back({c.mu, c.z_mu, c.m_mu, c.m_prime_mu});
    }
    io::write_csv(out, csv);
    return 0;
}

int cmd_sup(const ModelFlags& mf) {
    const auto s = model::sup_m(mf.spec());
    std::cout << "t_star " << io::format_sig(s.t_star, 12) << "\n"
              << "m_star " << io::format_sig(s.m_star, 12) << "\n";
    if (s.on_edge) std::cout << "warning: maximum at scan-window edge\n";
    return 0;
}

int cmd_verify(const ModelFlags& mf, double t, long paths, std::uint64_t seed,
               double dt, const std::string& out) {
    const auto spec = mf.spec();
    const double closed = model::m_of(spec, t);

    mc::SimConfig cfg;
    cfg.seed = seed;
    cfg.n_paths = paths;
    cfg.dt = dt;

    ordered_json rep;
    rep["model"] = model_label(spec);
    rep["t"] = t;
    rep["closed_form"] = closed;
    bool pass = true;

    if (spec.family != model::Family::BrownianBeforeHit) {
        const auto m = mc::estimate_m_marginal(spec, t, paths, seed);
        const double z = (m.mean - closed) / std::max(m.std_error, 1e-300);
        rep["mc_marginal"] = m.mean;
        rep["mc_marginal_se"] = m.std_error;
        rep["mc_marginal_z"] = z;
        pass = pass && std::fabs(m.mean - closed) <= 3.0 * m.std_error;
    }

    bool path_ok = true;
    if (spec.family == model::Family::BesselLastPassage) {
        const double d = 2.0 * (spec.mu + 1.0);
        path_ok = std::fabs(d - std::nearbyint(d)) < 1e-9;
    }
    if (path_ok) {
        const auto m = mc::estimate_m_path(spec, t, cfg);
        const double z = (m.mean - closed) / std::max(m.std_error, 1e-300);
        rep["mc_path"] = m.mean;
        rep["mc_path_se"] = m.std_error;
        rep["mc_path_z"] = z;
        pass = pass &&
               std::fabs(m.mean - closed) <= 3.0 * m.std_error + 0.002;
    }
    rep["pass"] = pass;

    const std::string text = rep.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
    return pass ? 0 : 5;
}

int cmd_experiment_kstar(double k_min, double k_max, double k_step,
                         const std::string& out) {
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double K = k_min + i * k_step;
        if (K > k_max + 1e-12) break;
        grid.push_back(std::min(K, 1.0));
    }
    const auto rep = model::kstar_experiment(grid);
    io::Csv csv;
    csv.header = {"K", "t_star", "m_star"};
    for (const auto& r : rep.rows) csv.rows.push_back({r.K, r.t_star, r.m_star});
    csv.comments.push_back(std::string("monotone_nondecreasing=") +
                           (rep.monotone_nondecreasing ? "true" : "false"));
    io::write_csv(out, csv);
    return 0;
}

int cmd_quarter_checks(long paths, std::uint64_t seed, double dt,
                       const std::string& out) {
    mc::SimConfig cfg;
    cfg.seed = seed;
    cfg.n_paths = paths;
    cfg.dt = dt;
    const auto spec = model::ModelSpec::exp_last_passage(0.5);
    const auto sup = mc::estimate_sup_zz(spec, cfg);
    const auto hit = mc::estimate_at_level_hit(spec, 0.5, cfg);
    const bool sup_ok = sup.mean >= 0.2490 && sup.mean <= 0.25;
    const bool hit_ok = hit.mean >= 0.2490 && hit.mean <= 0.25;

    ordered_json rep;
    rep["model"] = model_label(spec);
    rep["dt"] = dt;
    rep["n_paths"] = paths;
    rep["sup_zz"] = sup.mean;
    rep["sup_zz_se"] = sup.std_error;
    rep["sup_zz_in_window"] = sup_ok;
    rep["level_hit_half"] = hit.mean;
    rep["level_hit_half_se"] = hit.std_error;
    rep["level_hit_half_in_window"] = hit_ok;
    rep["window"] = {0.2490, 0.25};
    rep["pass"] = sup_ok && hit_ok;

    const std::string text = rep.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
    return (sup_ok && hit_ok) ? 0 : 5;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<io::Series> series;
    for (const auto& path : inputs) {
        const auto csv = io::read_csv(path);
        if (csv.header.size() != 2)
            throw io::CsvError("expected two columns in " + path, 1);
        io::Series s;
        auto base = path.find_last_of('/');
        s.label = base == std::string::npos ? path : path.substr(base + 1);
        for (const auto& row : csv.rows) s.points.emplace_back(row[0], row[1]);
        series.push_back(std::move(s));
    }
    write_text(out, io::render_svg(series));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-stopping-timeness of last passage times: closed forms, "
                 "optimization and Monte Carlo validation"};
    app.require_subcommand(1);

    ModelFlags mf_eval, mf_curve, mf_sup, mf_verify;
    double t = 1.0, t_min = 0.0, t_max = 5.0;
    int points = 500;
    long paths = 100000;
    std::uint64_t seed = 1;
    double dt = 1e-3;
    std::string out, out_dir, preset;
    std::vector<double> mus;
    double k_min = 0.1, k_max = 1.0, k_step = 0.1;
    std::vector<std::string> plot_inputs;

    auto* c_eval = app.add_subcommand("eval", "print m(t)");
    mf_eval.attach(c_eval);
    c_eval->add_option("--t", t, "time t >= 0")->required();

    auto* c_curve = app.add_subcommand("curve", "emit a (t,m) CSV curve");
    mf_curve.attach(c_curve);
    c_curve->add_option("--t-min", t_min);
    c_curve->add_option("--t-max", t_max);
    c_curve->add_option("--points", points);
    c_curve->add_option("--out", out, "output CSV path");
    c_curve->add_option("--preset", preset, "figure1: the ten K curves")
        ->check(CLI::IsMember({"figure1"}));
    c_curve->add_option("--out-dir", out_dir, "output directory for presets");

    auto* c_table =
        app.add_subcommand("table", "per-mu table: z_mu, m_mu, m_prime_mu");
    c_table->add_option("--mu", mus, "mu values (default: the eight figure ones)");
    c_table->add_option("--out", out, "output CSV path")->required();

    auto* c_sup = app.add_subcommand("sup", "print sup_t m(t)");
    mf_sup.attach(c_sup);

    auto* c_verify =
        app.add_subcommand("verify", "Monte Carlo check against the closed form");
    mf_verify.attach(c_verify);
    c_verify->add_option("--t", t)->required();
    c_verify->add_option("--paths", paths)->check(CLI::Range(1000l, 1000000000l));
    c_verify->add_option("--seed", seed);
    c_verify->add_option("--dt", dt);
    c_verify->add_option("--out", out, "JSON report path (default: stdout)");

    auto* c_kstar = app.add_subcommand(
        "experiment-kstar", "m*(K) across a K grid plus monotonicity note");
    c_kstar->add_option("--k-min", k_min);
    c_kstar->add_option("--k-max", k_max);
    c_kstar->add_option("--k-step", k_step);
    c_kstar->add_option("--out", out, "output CSV path")->required();

    auto* c_quarter = app.add_subcommand(
        "quarter-checks", "pathwise sup and stopped-value 1/4 laws");
    c_quarter->add_option("--paths", paths);
    c_quarter->add_option("--seed", seed);
    c_quarter->add_option("--dt", dt);
    c_quarter->add_option("--out", out, "JSON report path (default: stdout)");

    auto* c_plot = app.add_subcommand("plot", "render CSV curves as one SVG");
    c_plot->add_option("--in", plot_inputs, "input CSV files")->required();
    c_plot->add_option("--out", out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_eval->parsed()) return cmd_eval(mf_eval, t);
        if (c_curve->parsed()) {
            if (preset == "figure1") {
                if (out_dir.empty())
                    throw std::domain_error("--preset figure1 needs --out-dir");
                return cmd_curve_figure1(out_dir);
            }
            if (out.empty()) throw std::domain_error("curve needs --out");
            return cmd_curve(mf_curve, t_min, t_max, points, out);
        }
        if (c_table->parsed()) return cmd_table(mus, out);
        if (c_sup->parsed()) return cmd_sup(mf_sup);
        if (c_verify->parsed())
            return cmd_verify(mf_verify, t, paths, seed, dt, out);
        if (c_kstar->parsed())
            return cmd_experiment_kstar(k_min, k_max, k_step, out);
        if (c_quarter->parsed())
            return cmd_quarter_checks(paths, seed, dt, out);
        if (c_plot->parsed()) return cmd_plot(plot_inputs, out);
    } catch (const io::CsvError& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return 3;
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
