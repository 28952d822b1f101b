// eqweyl: desk-scale verification runs for equivariant spectral asymptotics.
//
// Subcommands: weyl-verify, statphase, blowup-demo, spectrum-dump,
// reduced-volume.  All outputs are deterministic for a fixed config and
// seed; every artifact is listed in manifest.json with its SHA-256.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "eqweyl/blowup.hpp"
#include "eqweyl/io.hpp"
#include "eqweyl/oscquad.hpp"
#include "eqweyl/parallel.hpp"
#include "eqweyl/weyl.hpp"
#include "phase_catalog.hpp"

namespace fs = std::filesystem;
using namespace eqweyl;
using io::Json;

namespace {

struct CommonOpts {
    std::string out_dir = "eqweyl-out";
    uint64_t seed = 1;
    int threads = 0;
    double tolerance = 0.0;  // 0 = per-command default
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "deterministic seed");
    cmd->add_option("--threads", c.threads, "worker cap (0 = hardware)");
    cmd->add_option("--tolerance", c.tolerance, "override the default pass tolerance");
    cmd->set_config("--config", "", "key = value config for this command");
}

fs::path prepare_out(const CommonOpts& c) {
    fs::create_directories(c.out_dir);
    par::set_worker_count(c.threads);
    return fs::path(c.out_dir);
}

std::vector<long long> parse_weights(const std::string& s) {
    std::vector<long long> w;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        w.push_back(std::stoll(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (w.empty()) throw ConfigError("no weights given");
    return w;
}

std::vector<double> parse_mu_grid(const std::string& range, int points) {
    const auto dots = range.find("..");
    if (dots == std::string::npos)
        throw ConfigError("mu range must look like 1e-2..1e-4");
    const double a = std::stod(range.substr(0, dots));
    const double b = std::stod(range.substr(dots + 2));
    if (points < 2) throw ConfigError("need at least two mu points");
    std::vector<double> mus;
    for (int i = 0; i < points; ++i)
        mus.push_back(a * std::pow(b / a, static_cast<double>(i) / (points - 1)));
    return mus;
}

Json volume_json(const symplectic::ReducedVolumeEstimate& v) {
    Json j;
    j["value"] = v.value;
    j["stderr"] = v.standard_error;
    j["samples"] = v.sample_count;
    j["skipped_singular"] = v.skipped_singular;
    j["converged"] = v.converged;
    return j;
}

// ---------------------------------------------------------------------------
// weyl-verify
// ---------------------------------------------------------------------------

int cmd_weyl_verify(const CommonOpts& common, const std::string& action,
                    const std::string& weights_str, double lambda_max, int64_t volume_samples) {
    const fs::path out = prepare_out(common);
    const auto spec = actions::make_action(action);
    const auto weights = parse_weights(weights_str);

    double coeff_tol = common.tolerance;
    if (coeff_tol <= 0.0)
        coeff_tol = spec->manifold_id() == actions::ManifoldId::Torus ? 0.02 : 0.05;

    spectral::SpectrumBuildConfig scfg;
    scfg.weight_filter = weights;
    const spectral::SpectrumTable table = spectral::build_spectrum(spec, lambda_max, scfg);
    io::spectrum_csv(table, out / "spectrum.csv");

    symplectic::ReducedVolumeConfig vcfg;
    vcfg.samples = volume_samples;
    vcfg.seed = common.seed;
    const auto volume = symplectic::reduced_volume(spec, vcfg);

    Json config;
    config["command"] = "weyl-verify";
    config["action"] = action;
    config["weights"] = weights;
    config["lambda_max"] = lambda_max;
    config["volume_samples"] = volume_samples;
    config["seed"] = common.seed;
    config["tolerance"] = coeff_tol;
    io::Manifest manifest(config);
    manifest.add(out / "spectrum.csv");

    Json verdict;
    verdict["action"] = action;
    verdict["lambda_max"] = lambda_max;
    verdict["reduced_volume"] = volume_json(volume);

    bool all_pass = volume.converged;
    Json per_weight = Json::object();
    for (long long m : weights) {
        const auto chi = actions::CharacterLabel::circle(m);
        const auto pred = weyl::predict(spec, chi, volume);
        weyl::VerifyOptions vo;
        vo.coefficient_tolerance = coeff_tol;
        const auto diag = weyl::verify(table, chi, pred, vo);

        spectral::CountingResult counting = spectral::count_reduced(table, chi, diag.lambda_grid);
        const std::string fname = "counting_w" + std::to_string(m) + ".csv";
        io::counting_csv(counting, out / fname);
        manifest.add(out / fname);

        Json w;
        w["predicted"] = pred.leading_coefficient;
        w["predicted_stderr"] = pred.coefficient_stderr;
        w["restriction_mult"] = pred.restriction_mult;
        w["growth_exponent"] = pred.growth_exponent.value();
        w["log_power_bound"] = pred.log_power_bound;
        w["log_power_bound_refined"] = pred.log_power_bound_refined;
        w["empirical"] = diag.empirical_coefficient;
        w["stderr"] = pred.coefficient_stderr;
        w["exponent_fit"] = diag.growth_exponent_fit;
        w["envelope_exponent"] = diag.envelope_exponent;
        w["envelope_log_power"] = diag.envelope_log_power;
        w["pass"] = diag.pass;
        per_weight["w" + std::to_string(m)] = w;
        all_pass = all_pass && diag.pass;
    }
    verdict["weights"] = per_weight;

    const auto baseline = weyl::full_law_check(spec, table, lambda_max, 0.02);
    Json base;
    base["predicted_coefficient"] = baseline.predicted_coefficient;
    base["empirical_ratio"] = baseline.empirical_ratio;
    base["sufficient_range"] = baseline.sufficient_range;
    verdict["baseline_full_law"] = base;
    verdict["pass"] = all_pass;

    io::write_json(out / "verdict.json", verdict);
    manifest.add(out / "verdict.json");
    manifest.save(out / "manifest.json");

    std::cout << (all_pass ? "PASS" : "FAIL") << " weyl-verify " << action << "\n";
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// statphase
// ---------------------------------------------------------------------------

int cmd_statphase(const CommonOpts& common, const std::string& phase_name,
                  std::vector<double> mus, double amp_scale) {
    const fs::path out = prepare_out(common);
    cli::BuiltinPhase builtin = cli::make_builtin_phase(phase_name, amp_scale);
    if (mus.empty()) mus = builtin.default_mus;

    Json config;
    config["command"] = "statphase";
    config["phase"] = phase_name;
    config["amp_scale"] = amp_scale;
    config["mu"] = mus;
    config["seed"] = common.seed;
    io::Manifest manifest(config);

    Json result;
    result["phase"] = phase_name;
    double reference = 0.0;
    Complex q0_value{0.0, 0.0};
    double order = 0.0;
    if (builtin.equivariant) {
        statphase::L0Options lo;
        lo.epsilons = builtin.epsilons;
        const auto l0 =
            statphase::l0_equivariant(builtin.problem, lo, builtin.distance_to_singular);
        result["l0"] = l0.value;
        result["epsilon_values"] = l0.epsilon_values;
        result["epsilon_converged"] = l0.converged;
        reference = l0.value;
        q0_value = Complex{l0.value, 0.0};
        order = builtin.comparison_order;
        result["order"] = order;
        result["signature"] = 0;
    } else {
        const auto r = statphase::q0(builtin.problem);
        result["q0_re"] = r.q0.real();
        result["q0_im"] = r.q0.imag();
        result["signature"] = r.signature;
        result["order"] = r.order.value();
        result["transversal_det_samples"] = r.transversal_det_samples;
        result["error_model"] = r.error_model;
        reference = std::abs(r.q0);
        q0_value = r.q0;
        order = r.order.value();
    }

    if (builtin.direct_comparison && reference != 0.0) {
        io::CsvWriter csv({"mu", "re", "im", "ratio_re", "ratio_im"});
        Json ratios = Json::array();
        for (double mu : mus) {
            oscquad::QuadratureSpec qs;
            qs.dim = builtin.problem.dim;
            qs.box = builtin.problem.support;
            qs.mu = mu;
            qs.convention = oscquad::Convention::large_mu;
            auto& prob = builtin.problem;
            const auto r = oscquad::integrate([&prob](const Vec& x) { return prob.phase(x); },
                                              [&prob](const Vec& x) { return prob.amplitude(x); },
                                              qs);
            const Complex ratio =
                r.value * std::pow(mu / (2.0 * num::PI), order) / q0_value;
            csv.row({io::field(mu), io::field(r.value.real()), io::field(r.value.imag()),
                     io::field(ratio.real()), io::field(ratio.imag())});
            ratios.push_back(std::abs(ratio));
        }
        csv.save(out / "statphase_samples.csv");
        manifest.add(out / "statphase_samples.csv");
        result["comparison_abs_ratio"] = ratios;
    }

    io::write_json(out / "statphase.json", result);
    manifest.add(out / "statphase.json");
    manifest.save(out / "manifest.json");
    std::cout << "statphase " << phase_name << " done\n";
    return 0;
}

// ---------------------------------------------------------------------------
// blowup-demo
// ---------------------------------------------------------------------------

std::vector<oscquad::FitTerm> parse_terms(const std::string& custom_terms) {
    std::vector<oscquad::FitTerm> terms;
    size_t pos = 0;
    while (pos < custom_terms.size()) {
        size_t comma = custom_terms.find(',', pos);
        if (comma == std::string::npos) comma = custom_terms.size();
        const std::string item = custom_terms.substr(pos, comma - pos);
        const size_t colon = item.find(':');
        const size_t slash = item.find('/');
        long long nu = std::stoll(item.substr(0, slash == std::string::npos ? colon : slash));
        long long de =
            slash == std::string::npos ? 1 : std::stoll(item.substr(slash + 1, colon - slash - 1));
        const int k = colon == std::string::npos ? 0 : std::stoi(item.substr(colon + 1));
        terms.push_back({num::Rational(nu, de), k});
        pos = comma + 1;
    }
    return terms;
}

int cmd_fit_csv(const CommonOpts& common, const std::string& csv_path,
                const std::string& custom_terms) {
    const fs::path out = prepare_out(common);
    const auto samples = io::read_mu_samples(csv_path);
    std::vector<oscquad::FitTerm> terms =
        custom_terms.empty() ? std::vector<oscquad::FitTerm>{{num::Rational(1, 2), 1},
                                                             {num::Rational(1, 2), 0},
                                                             {num::Rational(3, 2), 1},
                                                             {num::Rational(3, 2), 0}}
                             : parse_terms(custom_terms);
    const auto fit = oscquad::fit_asymptotics(samples, terms, oscquad::Convention::small_mu);
    Json j;
    j["source"] = csv_path;
    Json jterms = Json::array();
    for (size_t i = 0; i < fit.terms.size(); ++i) {
        Json t;
        t["alpha"] = fit.terms[i].alpha.str();
        t["log_power"] = fit.terms[i].log_power;
        t["re"] = fit.coefficients[i].real();
        t["im"] = fit.coefficients[i].imag();
        t["stderr"] = fit.coefficient_stderr[i];
        jterms.push_back(t);
    }
    j["fit"] = jterms;
    j["fit_condition_number"] = fit.condition_number;
    j["fit_residual_norm"] = fit.residual_norm;
    io::write_json(out / "offline_fit.json", j);
    Json config;
    config["command"] = "blowup-demo";
    config["fit_csv"] = csv_path;
    io::Manifest manifest(config);
    manifest.add(out / "offline_fit.json");
    manifest.save(out / "manifest.json");
    std::cout << "fitted " << samples.size() << " offline samples\n";
    return 0;
}

int cmd_blowup_demo(const CommonOpts& common, const std::string& phase_name,
                    const std::string& mu_range, int points, const std::string& custom_terms) {
    const fs::path out = prepare_out(common);
    const std::vector<double> mus = parse_mu_grid(mu_range, points);

    blowup::SingularProblem sp;
    if (phase_name == "xy2")
        sp = blowup::xy2_singular_problem(false);
    else if (phase_name == "xy2-perturbed")
        sp = blowup::xy2_singular_problem(true);
    else if (phase_name == "clean") {
        sp.base = cli::make_builtin_phase("quad2d").problem;
    } else {
        throw ConfigError("blowup-demo phase must be xy2, xy2-perturbed, or clean");
    }

    const auto sa = blowup::singular_asymptotics(sp, mus);

    // Direct-quadrature samples and their fit over the same model.
    std::vector<std::pair<double, Complex>> direct;
    for (double mu : mus) {
        oscquad::QuadratureSpec qs;
        qs.dim = sp.base.dim;
        qs.box = sp.base.support;
        qs.mu = mu;
        qs.convention = oscquad::Convention::small_mu;
        auto& prob = sp.base;
        const auto r = oscquad::integrate([&prob](const Vec& x) { return prob.phase(x); },
                                          [&prob](const Vec& x) { return prob.amplitude(x); }, qs);
        direct.push_back({mu, r.value});
    }
    std::vector<oscquad::FitTerm> terms =
        custom_terms.empty() ? sa.predicted_terms : parse_terms(custom_terms);
    const auto fit = oscquad::fit_asymptotics(direct, terms, oscquad::Convention::small_mu);

    const Complex c1 = fit.coefficients.at(0);
    const Complex c2 = fit.coefficients.size() > 1 ? fit.coefficients[1] : Complex{0, 0};
    io::CsvWriter csv({"mu", "re", "im", "fit_c1_re", "fit_c1_im", "fit_c2_re", "fit_c2_im"});
    for (const auto& [mu, v] : direct)
        csv.row({io::field(mu), io::field(v.real()), io::field(v.imag()), io::field(c1.real()),
                 io::field(c1.imag()), io::field(c2.real()), io::field(c2.imag())});
    csv.save(out / "blowup_samples.csv");
    io::write_mu_samples(direct, out / "mu_samples.csv");

    Json config;
    config["command"] = "blowup-demo";
    config["phase"] = phase_name;
    config["mu_range"] = mu_range;
    config["points"] = points;
    config["seed"] = common.seed;
    io::Manifest manifest(config);
    manifest.add(out / "blowup_samples.csv");
    manifest.add(out / "mu_samples.csv");

    Json j;
    j["phase"] = phase_name;
    Json jterms = Json::array();
    for (size_t i = 0; i < fit.terms.size(); ++i) {
        Json t;
        t["alpha"] = fit.terms[i].alpha.str();
        t["log_power"] = fit.terms[i].log_power;
        t["re"] = fit.coefficients[i].real();
        t["im"] = fit.coefficients[i].imag();
        t["stderr"] = fit.coefficient_stderr[i];
        jterms.push_back(t);
    }
    j["direct_fit"] = jterms;
    j["fit_condition_number"] = fit.condition_number;
    j["fit_residual_norm"] = fit.residual_norm;
    j["pipeline_predicted_c1_re"] = sa.predicted_leading.real();
    j["pipeline_predicted_c1_im"] = sa.predicted_leading.imag();
    Json model = Json::array();
    for (const auto& [mu, v] : sa.samples) {
        Json s;
        s["mu"] = mu;
        s["re"] = v.real();
        s["im"] = v.imag();
        model.push_back(s);
    }
    j["pipeline_samples"] = model;
    io::write_json(out / "blowup_fit.json", j);
    manifest.add(out / "blowup_fit.json");
    manifest.save(out / "manifest.json");

    std::cout << "blowup-demo " << phase_name << ": |c1| = " << std::abs(c1)
              << " (stderr " << fit.coefficient_stderr.at(0) << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum-dump and reduced-volume
// ---------------------------------------------------------------------------

int cmd_spectrum_dump(const CommonOpts& common, const std::string& action, double lambda_max,
                      const std::string& weights_str) {
    const fs::path out = prepare_out(common);
    const auto spec = actions::make_action(action);
    spectral::SpectrumBuildConfig scfg;
    if (!weights_str.empty()) scfg.weight_filter = parse_weights(weights_str);
    const auto table = spectral::build_spectrum(spec, lambda_max, scfg);
    io::spectrum_csv(table, out / "spectrum.csv");

    Json config;
    config["command"] = "spectrum-dump";
    config["action"] = action;
    config["lambda_max"] = lambda_max;
    if (!weights_str.empty()) config["weights"] = weights_str;
    io::Manifest manifest(config);
    manifest.add(out / "spectrum.csv");
    manifest.save(out / "manifest.json");
    std::cout << "spectrum-dump " << action << ": " << table.entries.size() << " eigenvalues\n";
    return 0;
}

int cmd_reduced_volume(const CommonOpts& common, const std::string& action, int64_t samples,
                       const std::string& method) {
    const fs::path out = prepare_out(common);
    const auto spec = actions::make_action(action);
    symplectic::ReducedVolumeConfig cfg;
    cfg.samples = samples;
    cfg.seed = common.seed;
    const auto est = method == "grid" ? symplectic::reduced_volume_grid(spec, cfg)
                                      : symplectic::reduced_volume(spec, cfg);

    Json j;
    j["action"] = action;
    j["samples"] = est.sample_count;
    j["value"] = est.value;
    j["stderr"] = est.standard_error;
    j["skipped_singular"] = est.skipped_singular;
    j["converged"] = est.converged;
    j["method"] = method;
    io::write_json(out / "reduced_volume.json", j);

    Json config;
    config["command"] = "reduced-volume";
    config["action"] = action;
    config["samples"] = samples;
    config["seed"] = common.seed;
    config["method"] = method;
    io::Manifest manifest(config);
    manifest.add(out / "reduced_volume.json");
    manifest.save(out / "manifest.json");
    std::cout << "reduced-volume " << action << " = " << est.value << " +- "
              << est.standard_error << "\n";
    return est.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eqweyl: numerical checks of equivariant spectral asymptotics"};
    app.set_config("--config", "", "declarative config file (key = value sections)");
    app.require_subcommand(1);

    CommonOpts c_weyl, c_stat, c_blow, c_dump, c_vol;

    auto* weyl_cmd = app.add_subcommand("weyl-verify", "reduced Weyl law verification");
    std::string w_action = "torus2-rot1", w_weights = "0,1,5";
    double w_lambda = 1e6;
    int64_t w_volsamples = 200000;
    weyl_cmd->add_option("--action", w_action, "catalog action key");
    weyl_cmd->add_option("--weights", w_weights, "comma-separated character weights");
    weyl_cmd->add_option("--lambda-max", w_lambda, "spectrum completeness bound");
    weyl_cmd->add_option("--volume-samples", w_volsamples, "reduced-volume Monte Carlo samples");
    add_common(weyl_cmd, c_weyl);

    auto* stat_cmd = app.add_subcommand("statphase", "stationary-phase coefficients");
    std::string s_phase = "fresnel";
    std::vector<double> s_mus;
    double s_amp_scale = 1.0;
    stat_cmd->add_option("--phase", s_phase, "builtin phase name");
    stat_cmd->add_option("--mu", s_mus, "comparison mu values");
    stat_cmd->add_option("--amp-scale", s_amp_scale, "amplitude support scale (model phases)");
    add_common(stat_cmd, c_stat);

    auto* blow_cmd = app.add_subcommand("blowup-demo", "singular asymptotics demo");
    std::string b_phase = "xy2", b_range = "1e-2..1e-4", b_terms, b_fit_csv;
    int b_points = 9;
    blow_cmd->add_option("phase", b_phase, "xy2, xy2-perturbed, or clean");
    blow_cmd->add_option("--mu", b_range, "geometric mu range, e.g. 1e-2..1e-4");
    blow_cmd->add_option("--points", b_points, "number of mu samples");
    blow_cmd->add_option("--terms", b_terms, "custom model terms num/den:k,...");
    blow_cmd->add_option("--fit-csv", b_fit_csv, "fit an existing (mu, re, im) sample file");
    add_common(blow_cmd, c_blow);

    auto* dump_cmd = app.add_subcommand("spectrum-dump", "exact spectrum table export");
    std::string d_action = "s2-rot", d_weights;
    double d_lambda = 100.0;
    dump_cmd->add_option("--action", d_action, "catalog action key");
    dump_cmd->add_option("--lambda-max", d_lambda, "completeness bound");
    dump_cmd->add_option("--weights", d_weights, "optional weight filter");
    add_common(dump_cmd, c_dump);

    auto* vol_cmd = app.add_subcommand("reduced-volume", "reduced cosphere volume estimate");
    std::string v_action = "torus2-rot1", v_method = "monte_carlo";
    int64_t v_samples = 100000;
    vol_cmd->add_option("--action", v_action, "catalog action key");
    vol_cmd->add_option("--samples", v_samples, "sample count");
    vol_cmd->add_option("--method", v_method, "monte_carlo or grid");
    add_common(vol_cmd, c_vol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (weyl_cmd->parsed())
            return cmd_weyl_verify(c_weyl, w_action, w_weights, w_lambda, w_volsamples);
        if (stat_cmd->parsed()) return cmd_statphase(c_stat, s_phase, s_mus, s_amp_scale);
        if (blow_cmd->parsed())
            return b_fit_csv.empty()
                       ? cmd_blowup_demo(c_blow, b_phase, b_range, b_points, b_terms)
                       : cmd_fit_csv(c_blow, b_fit_csv, b_terms);
        if (dump_cmd->parsed()) return cmd_spectrum_dump(c_dump, d_action, d_lambda, d_weights);
        if (vol_cmd->parsed()) return cmd_reduced_volume(c_vol, v_action, v_samples, v_method);
    } catch (const statphase::CleanlinessViolation& e) {
        std::cerr << "error: " << e.what()
                  << "\nthis phase has a singular critical set; use `eqweyl blowup-demo` for the "
                     "resolved pipeline\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
