// Command-line runner for the spectral experiments. Every experiment is
// a pure function of its config: same config, same output bytes.
//
// Exit codes: 0 success, 2 config error, 3 acceptance-gate failure in
// selftest.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "esdlab/acceptance.hpp"
#include "esdlab/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_file;
    std::string n_list;
    std::string b_rule;
    std::string gamma;
    std::string ensembles;
    std::string z_grid;
    int seeds = -1;
    std::optional<uint64_t> seed_base;
    std::string out_dir;
    int jobs = -1;
    std::string dump_matrix;
};

void add_common_options(CLI::App* sub, CommonFlags& fl) {
    sub->add_option("--config", fl.config_file, "flat key=value config file");
    sub->add_option("--n", fl.n_list, "dimension or comma-separated strictly increasing ladder");
    sub->add_option("--b", fl.b_rule, "block rule: n-minus-1 | sqrt-n | loglog-n | fixed:<k>");
    sub->add_option("--gamma", fl.gamma, "noise exponent (real, or 'inf' to disable noise)");
    sub->add_option("--ensemble", fl.ensembles, "ensemble name(s): cgauss|rgauss|bern|cbern4|usym");
    sub->add_option("--z-grid", fl.z_grid, "comma-separated re+imi tokens overriding the z grid");
    sub->add_option("--seeds", fl.seeds, "number of seeds");
    sub->add_option("--seed-base", fl.seed_base, "first seed value");
    sub->add_option("--out", fl.out_dir, "output directory");
    sub->add_option("--jobs", fl.jobs, "max concurrent trials (default: hardware)");
    sub->add_option("--dump-matrix", fl.dump_matrix, "write the base matrix to this path (text format)");
}

esdlab::ExperimentConfig defaults_for(const std::string& verb) {
    esdlab::ExperimentConfig cfg;
    cfg.experiment = verb;
    if (verb == "figure1") {
        cfg.n_ladder = {50, 500};
        cfg.gamma = 10.0;
        cfg.ensembles = {"cgauss"};
        cfg.seed_count = 5;
        cfg.b_rule = "n-minus-1";
    } else if (verb == "small-blocks") {
        cfg.n_ladder = {128, 256, 512};
        cfg.ensembles = {"cgauss"};
    } else if (verb == "large-blocks") {
        cfg.n_ladder = {128, 256, 512};
        cfg.ensembles = {"cgauss"};
    } else if (verb == "stability") {
        cfg.n_ladder = {40};
        cfg.seed_count = 1;
    } else if (verb == "replacement") {
        cfg.n_ladder = {100, 200, 400};
        cfg.ensembles = {"cgauss", "bern"};
    } else if (verb == "manystable") {
        cfg.n_ladder = {256};
        cfg.ensembles = {"cgauss"};
    }
    return cfg;
}

esdlab::ExperimentConfig build_config(const std::string& verb, const CommonFlags& fl) {
    esdlab::ExperimentConfig cfg = defaults_for(verb);
    if (!fl.config_file.empty()) {
        for (const auto& [key, value] : esdlab::parse_config_file(fl.config_file)) {
            if (key == "experiment" && value != verb) {
                throw esdlab::ConfigError("config file names experiment '" + value +
                                          "' but the subcommand is '" + verb + "'");
            }
            esdlab::apply_config_entry(cfg, key, value);
        }
    }
    if (!fl.n_list.empty()) cfg.n_ladder = esdlab::parse_int_list(fl.n_list);
    if (!fl.b_rule.empty()) cfg.b_rule = fl.b_rule;
    if (!fl.gamma.empty()) cfg.gamma = esdlab::parse_gamma(fl.gamma);
    if (!fl.ensembles.empty()) cfg.ensembles = esdlab::parse_name_list(fl.ensembles);
    if (!fl.z_grid.empty()) cfg.z_grid = esdlab::parse_z_list(fl.z_grid);
    if (fl.seeds >= 0) cfg.seed_count = fl.seeds;
    if (fl.seed_base) cfg.seed_base = *fl.seed_base;
    if (!fl.out_dir.empty()) cfg.out_dir = fl.out_dir;
    if (fl.jobs >= 0) cfg.jobs = fl.jobs;
    if (!fl.dump_matrix.empty()) cfg.dump_matrix_path = fl.dump_matrix;
    cfg.experiment = verb;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"esdlab: spectral experiments on structured matrices under small random noise"};
    app.require_subcommand(1);

    CommonFlags fl;
    CLI::App* figure1 = app.add_subcommand("figure1", "eigenvalue scatters of T_n plus tiny noise");
    CLI::App* small_blocks =
        app.add_subcommand("small-blocks", "ESD distance to the point mass for small diagonal blocks");
    CLI::App* large_blocks =
        app.add_subcommand("large-blocks", "ESD distance to the unit circle for large diagonal blocks");
    CLI::App* stability =
        app.add_subcommand("stability", "numeric vs closed-form row-set stability reports");
    CLI::App* replacement =
        app.add_subcommand("replacement", "log-determinant gap diagnostic between two ensembles");
    CLI::App* manystable =
        app.add_subcommand("manystable", "stable-row count checks for random matrices");
    CLI::App* selftest = app.add_subcommand("selftest", "run the full acceptance gate (slow)");
    for (CLI::App* sub : {figure1, small_blocks, large_blocks, stability, replacement, manystable}) {
        add_common_options(sub, fl);
    }
    int selftest_jobs = 0;
    selftest->add_option("--jobs", selftest_jobs, "max concurrent trials (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest->parsed()) {
            const int failures = esdlab::acceptance::run_all(selftest_jobs, std::cout);
            return failures == 0 ? 0 : 3;
        }
        const std::string verb = app.get_subcommands().front()->get_name();
        const esdlab::ExperimentConfig cfg = build_config(verb, fl);
        if (verb == "figure1") esdlab::run_figure1(cfg);
        else if (verb == "small-blocks") esdlab::run_small_blocks(cfg);
        else if (verb == "large-blocks") esdlab::run_large_blocks(cfg);
        else if (verb == "stability") esdlab::run_stability_report(cfg);
        else if (verb == "replacement") esdlab::run_replacement(cfg);
        else if (verb == "manystable") esdlab::run_manystable(cfg);
        std::cout << "wrote outputs to " << cfg.out_dir << '\n';
        return 0;
    } catch (const esdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
