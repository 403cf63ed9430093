// waveheat: phase-space rate verification for the 3x3 wave-heat coupled
// system. Subcommands run one experiment each, write a CSV table plus a JSON
// report with every quantitative gate, and exit nonzero when a gate fails.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "waveheat/runner.hpp"

namespace {

struct FlagSet {
    CLI::App* app = nullptr;
    std::string config_path;
    waveheat::ExperimentConfig raw;

    // options registered so overrides can be detected via count()
    void add_common(CLI::App& sub) {
        app = &sub;
        sub.add_option("--config", config_path, "JSON config file; flags override its values");
        sub.add_option("--out", raw.out, "CSV output path");
        sub.add_option("--report", raw.report, "JSON report path");
        sub.add_option("--threads", raw.threads, "worker threads (env WAVEHEAT_THREADS as fallback)");
        sub.add_option("--seed", raw.seed, "seed for randomized cross-checks");
        sub.add_option("--eps", raw.eps, "small/bounded zone threshold");
        sub.add_option("--big-n", raw.big_n, "bounded/large zone threshold");
    }
    void add_zgrid(CLI::App& sub) {
        sub.add_option("--z-min", raw.z_min, "lower end of the z grid");
        sub.add_option("--z-max", raw.z_max, "upper end of the z grid");
        sub.add_option("--z-points", raw.z_points, "number of z samples");
    }
    void add_rate(CLI::App& sub) {
        sub.add_option("--n", raw.n, "spatial dimension");
        sub.add_option("--s", raw.s, "regularity order");
        sub.add_option("--t-min", raw.t_min, "fit window start");
        sub.add_option("--t-max", raw.t_max, "fit window end");
        sub.add_option("--t-points", raw.t_points, "time samples");
    }
    void add_lambda(CLI::App& sub) {
        sub.add_option("--lambda-min", raw.lambda_min, "lambda window lower cap");
        sub.add_option("--lambda-max", raw.lambda_max, "lambda window upper cap");
        sub.add_option("--ppd", raw.ppd, "quadrature points per decade");
        sub.add_option("--kmax", raw.kmax, "level truncation (0 = auto from the tail bound)");
    }

    // start from subcommand defaults, apply config file, then explicit flags
    waveheat::ExperimentConfig resolve(const std::string& name) const {
        waveheat::ExperimentConfig cfg = waveheat::defaults_for(name);
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw CLI::ValidationError("--config", "cannot open " + config_path);
            waveheat::json j = waveheat::json::parse(f);
            waveheat::from_json(j, cfg);
            cfg.subcommand = name;
        }
        auto take = [&](const char* flag, auto member) {
            if (app->count(flag) > 0) cfg.*member = raw.*member;
        };
        take("--out", &waveheat::ExperimentConfig::out);
        take("--report", &waveheat::ExperimentConfig::report);
        take("--seed", &waveheat::ExperimentConfig::seed);
        take("--eps", &waveheat::ExperimentConfig::eps);
        take("--big-n", &waveheat::ExperimentConfig::big_n);
        if (app->count("--threads") > 0) {
            cfg.threads = raw.threads;
        } else if (const char* env = std::getenv("WAVEHEAT_THREADS")) {
            cfg.threads = std::max(1, std::atoi(env));
        }
        auto maybe = [&](const char* flag, auto member) {
            if (app->get_option_no_throw(flag) && app->count(flag) > 0) cfg.*member = raw.*member;
        };
        maybe("--n", &waveheat::ExperimentConfig::n);
        maybe("--s", &waveheat::ExperimentConfig::s);
        maybe("--r", &waveheat::ExperimentConfig::r);
        maybe("--zone", &waveheat::ExperimentConfig::zone);
        maybe("--t-min", &waveheat::ExperimentConfig::t_min);
        maybe("--t-max", &waveheat::ExperimentConfig::t_max);
        maybe("--t-points", &waveheat::ExperimentConfig::t_points);
        maybe("--lambda-min", &waveheat::ExperimentConfig::lambda_min);
        maybe("--lambda-max", &waveheat::ExperimentConfig::lambda_max);
        maybe("--ppd", &waveheat::ExperimentConfig::ppd);
        maybe("--kmax", &waveheat::ExperimentConfig::kmax);
        maybe("--z-min", &waveheat::ExperimentConfig::z_min);
        maybe("--z-max", &waveheat::ExperimentConfig::z_max);
        maybe("--z-points", &waveheat::ExperimentConfig::z_points);
        maybe("--xi-min", &waveheat::ExperimentConfig::xi_min);
        maybe("--xi-max", &waveheat::ExperimentConfig::xi_max);
        // the cascade z-window follows the zone when not set explicitly
        if (name == "cascade" && cfg.zone == "large" && app->count("--z-min") == 0 &&
            app->count("--z-max") == 0 && config_path.empty()) {
            cfg.z_min = 1e2;
            cfg.z_max = 1e4;
        }
        return cfg;
    }
};

int execute(const waveheat::ExperimentConfig& cfg) {
    auto res = waveheat::run_experiment(cfg);
    for (const auto& c : res.checks) {
        std::printf("[%s] %s: measured %.6g", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured);
        if (c.comparison == "abs")
            std::printf(" (expected %.6g +- %.3g)", c.expected, c.tolerance);
        else
            std::printf(" (threshold %.6g, %s)", c.expected, c.comparison.c_str());
        if (!c.note.empty()) std::printf(" [%s]", c.note.c_str());
        std::printf("\n");
    }
    if (!cfg.out.empty()) std::printf("csv: %s\n", cfg.out.c_str());
    if (!cfg.report.empty()) std::printf("report: %s\n", cfg.report.c_str());
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space decay rates for the wave-heat coupled system"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(waveheat::kVersion));

    FlagSet eigen, cascade, pointwise, decay, profiles, euclid;

    auto* sub_eigen = app.add_subcommand("eigen", "eigenvalue branches, Vieta identities, positivity");
    eigen.add_common(*sub_eigen);
    eigen.add_zgrid(*sub_eigen);

    auto* sub_cascade = app.add_subcommand("cascade", "diagonalization residual and step identities");
    cascade.add_common(*sub_cascade);
    cascade.add_zgrid(*sub_cascade);
    sub_cascade->add_option("--zone", cascade.raw.zone, "small | large")
        ->check(CLI::IsMember({"small", "large"}));

    auto* sub_pointwise = app.add_subcommand("pointwise", "key-function rate and operator bound");
    pointwise.add_common(*sub_pointwise);
    pointwise.add_zgrid(*sub_pointwise);

    auto* sub_decay = app.add_subcommand("decay", "three-zone energy decay rates");
    decay.add_common(*sub_decay);
    decay.add_rate(*sub_decay);
    decay.add_lambda(*sub_decay);
    sub_decay->add_option("--zone", decay.raw.zone, "small | bounded | large | all")
        ->check(CLI::IsMember({"small", "bounded", "large", "all"}));

    auto* sub_profiles = app.add_subcommand("profiles", "asymptotic-profile difference rates");
    profiles.add_common(*sub_profiles);
    profiles.add_rate(*sub_profiles);
    profiles.add_lambda(*sub_profiles);
    sub_profiles->add_option("--zone", profiles.raw.zone, "small | bounded | large | all")
        ->check(CLI::IsMember({"small", "bounded", "large", "all"}));

    auto* sub_euclid = app.add_subcommand("euclid", "Euclidean radial cross-check");
    euclid.add_common(*sub_euclid);
    euclid.add_rate(*sub_euclid);
    sub_euclid->add_option("--r", euclid.raw.r, "derivative weight order");
    sub_euclid->add_option("--xi-min", euclid.raw.xi_min, "radial grid lower end");
    sub_euclid->add_option("--xi-max", euclid.raw.xi_max, "radial grid upper end");
    sub_euclid->add_option("--ppd", euclid.raw.ppd, "quadrature points per decade");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sub_eigen->parsed()) return execute(eigen.resolve("eigen"));
        if (sub_cascade->parsed()) return execute(cascade.resolve("cascade"));
        if (sub_pointwise->parsed()) return execute(pointwise.resolve("pointwise"));
        if (sub_decay->parsed()) return execute(decay.resolve("decay"));
        if (sub_profiles->parsed()) return execute(profiles.resolve("profiles"));
        if (sub_euclid->parsed()) return execute(euclid.resolve("euclid"));
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
