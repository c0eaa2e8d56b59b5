// Command-line front end: bound-state tables, coherent-state statistics,
// thermal tables and the self-verification suite.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 numeric failure,
// 4 computed with warnings (e.g. non-converged P-function rows).

#include <clocale>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "morse/tables.hpp"
#include "morse/thermal.hpp"
#include "morse/verify.hpp"

namespace {

struct CommonFlags {
    int l = 0;
    std::string molecule;
    std::string preset_file;
    std::string format = "csv";
    std::string out_path;
};

void add_space_flags(CLI::App* cmd, CommonFlags& flags) {
    auto* l_opt = cmd->add_option("--l", flags.l, "Potential depth parameter l (>= 1)");
    auto* mol_opt = cmd->add_option("--molecule", flags.molecule, "Molecule preset name");
    cmd->add_option("--preset-file", flags.preset_file,
                    "Extra molecule presets: `name 2(l+1)-value` per line, '#' comments");
    l_opt->excludes(mol_opt);
    mol_opt->excludes(l_opt);
}

void add_output_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", flags.out_path, "Write output to a file instead of stdout");
}

morse::MorseSpace resolve_space(const CommonFlags& flags) {
    if (!flags.molecule.empty()) {
        morse::PresetTable table = morse::default_presets();
        if (!flags.preset_file.empty()) morse::load_presets(table, flags.preset_file);
        return morse::molecule_preset(flags.molecule, table);
    }
    if (flags.l == 0) throw std::invalid_argument("one of --l or --molecule is required");
    return morse::make_space(flags.l);
}

void emit(const CommonFlags& flags, const morse::TableResult& result, const std::string& echo) {
    std::vector<morse::Table> tables = result.tables;
    for (auto& t : tables) t.meta.emplace_back("command", echo);
    const std::string text =
        flags.format == "json" ? morse::render_json(tables) : morse::render_csv(tables);
    if (flags.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(flags.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file '" + flags.out_path + "'");
        out << text;
    }
}

std::string space_echo(const CommonFlags& flags) {
    if (!flags.molecule.empty()) return "--molecule " + flags.molecule;
    return "--l " + std::to_string(flags.l);
}

std::vector<int> parse_l_list(const std::string& text) {
    std::vector<int> ls;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int l = std::stoi(item, &used);
            if (used != item.size() || l < 1) throw std::invalid_argument("");
            ls.push_back(l);
        } catch (const std::exception&) {
            throw std::invalid_argument("--l list: malformed entry '" + item + "'");
        }
    }
    if (ls.empty()) throw std::invalid_argument("--l list: empty");
    return ls;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"Klauder-Perelomov coherent states of the Morse oscillator: "
                 "tables, statistics and verification"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonFlags flags;
    double hbar_omega = 1.0;
    double alpha = 0.0;
    double z_re = 0.0, z_im = 0.0;
    std::string x_grid_text, a_grid_text, beta_grid_text;
    double tol = 1e-10;
    int k_max = 60;
    int quad_order = 200;

    auto* spectrum = app.add_subcommand("spectrum", "Bound-state energies E_n and eps_n");
    add_space_flags(spectrum, flags);
    add_output_flags(spectrum, flags);
    spectrum->add_option("--hbar-omega", hbar_omega, "Level spacing scale")->capture_default_str();

    auto* coherent = app.add_subcommand("coherent", "Coefficients of one coherent state");
    add_space_flags(coherent, flags);
    add_output_flags(coherent, flags);
    coherent->add_option("--z-re", z_re, "Re Z")->capture_default_str();
    coherent->add_option("--z-im", z_im, "Im Z")->capture_default_str();
    coherent->add_option("--alpha", alpha, "Phase parameter")->capture_default_str();

    auto* stats = app.add_subcommand("stats", "Label statistics: <N>, <N^2>, g2, Q, <H>, f(x)");
    add_space_flags(stats, flags);
    add_output_flags(stats, flags);
    stats->add_option("--x-grid", x_grid_text, "x grid `a:b:n[:log]`")->required();
    stats->add_option("--alpha", alpha, "Phase parameter (results are alpha independent)")
        ->capture_default_str();

    auto add_temperature_grid = [&](CLI::App* cmd) {
        auto* ag = cmd->add_option("--A-grid", a_grid_text, "Grid over A = beta*hbar*omega");
        auto* bg = cmd->add_option("--beta-grid", beta_grid_text, "Grid over beta (scaled by --hbar-omega)");
        ag->excludes(bg);
        bg->excludes(ag);
        cmd->add_option("--hbar-omega", hbar_omega, "Level spacing scale")->capture_default_str();
    };

    auto* husimi = app.add_subcommand("husimi", "Husimi function over (A, x)");
    add_space_flags(husimi, flags);
    add_output_flags(husimi, flags);
    add_temperature_grid(husimi);
    husimi->add_option("--x-grid", x_grid_text, "x grid `a:b:n[:log]`")->required();

    auto* pfunction = app.add_subcommand("pfunction", "P-function over (A, x) with k_used/converged");
    add_space_flags(pfunction, flags);
    add_output_flags(pfunction, flags);
    add_temperature_grid(pfunction);
    pfunction->add_option("--x-grid", x_grid_text, "x grid `a:b:n[:log]`")->required();
    pfunction->add_option("--tol", tol, "Series truncation tolerance")->capture_default_str();
    pfunction->add_option("--kmax", k_max, "Series order cap")->capture_default_str();

    bool include_husimi = false, include_pfunction = false;
    auto* thermal = app.add_subcommand("thermal", "Partition function, thermal statistics, thermodynamics");
    add_space_flags(thermal, flags);
    add_output_flags(thermal, flags);
    add_temperature_grid(thermal);
    thermal->add_flag("--include-husimi", include_husimi, "Append a Husimi table (needs --x-grid)");
    thermal->add_flag("--include-pfunction", include_pfunction, "Append a P-function table (needs --x-grid)");
    thermal->add_option("--x-grid", x_grid_text, "x grid for the include flags");
    thermal->add_option("--tol", tol, "P-series truncation tolerance")->capture_default_str();
    thermal->add_option("--kmax", k_max, "P-series order cap")->capture_default_str();

    std::string scope = "all";
    std::string l_list_text = "2,5,8";
    double tol_override = 0.0;
    double verify_A = 1.0;
    double p_tol = 1e-8;
    auto* verify = app.add_subcommand("verify", "Run the invariant checks and emit a structured report");
    verify->add_option("--scope", scope, "Check scope")
        ->check(CLI::IsMember({"all", "coherent", "statistics", "thermal", "ladder"}))
        ->capture_default_str();
    verify->add_option("--l", l_list_text, "Comma-separated l values")->capture_default_str();
    verify->add_option("--tol", tol_override, "Override every hard/warn tolerance");
    verify->add_option("--quad-order", quad_order, "Radial quadrature order")->capture_default_str();
    verify->add_option("--ptol", p_tol, "P-series truncation tolerance")->capture_default_str();
    verify->add_option("--kmax", k_max, "P-series order cap")->capture_default_str();
    verify->add_option("--A", verify_A, "Temperature parameter for thermal checks")->capture_default_str();
    verify->add_option("--hbar-omega", hbar_omega, "Level spacing scale")->capture_default_str();
    verify->add_option("--out", flags.out_path, "Write the report to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (spectrum->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const std::string echo = "morsecs spectrum " + space_echo(flags) +
                                     " --hbar-omega " + morse::fmt_num(hbar_omega);
            emit(flags, morse::spectrum_table(space, hbar_omega), echo);
            return 0;
        }
        if (coherent->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const std::string echo = "morsecs coherent " + space_echo(flags) + " --z-re " +
                                     morse::fmt_num(z_re) + " --z-im " + morse::fmt_num(z_im) +
                                     " --alpha " + morse::fmt_num(alpha);
            emit(flags, morse::coherent_table(space, z_re, z_im, alpha), echo);
            return 0;
        }
        if (stats->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const morse::GridSpec grid = morse::parse_grid(x_grid_text);
            const std::string echo = "morsecs stats " + space_echo(flags) + " --x-grid " +
                                     x_grid_text + " --alpha " + morse::fmt_num(alpha);
            emit(flags, morse::stats_table(space, grid, alpha), echo);
            return 0;
        }

        auto temperature_grid = [&]() {
            if (!a_grid_text.empty()) return morse::parse_grid(a_grid_text);
            if (beta_grid_text.empty())
                throw std::invalid_argument("one of --A-grid or --beta-grid is required");
            morse::GridSpec g = morse::parse_grid(beta_grid_text);
            g.start *= hbar_omega;
            g.stop *= hbar_omega;
            return g;
        };

        if (husimi->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const morse::GridSpec a_grid = temperature_grid();
            const morse::GridSpec x_grid = morse::parse_grid(x_grid_text);
            const std::string echo = "morsecs husimi " + space_echo(flags);
            emit(flags, morse::husimi_table(space, a_grid, x_grid), echo);
            return 0;
        }
        if (pfunction->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const morse::GridSpec a_grid = temperature_grid();
            const morse::GridSpec x_grid = morse::parse_grid(x_grid_text);
            const std::string echo = "morsecs pfunction " + space_echo(flags);
            const morse::TableResult result =
                morse::pfunction_table(space, a_grid, x_grid, tol, k_max);
            emit(flags, result, echo);
            if (result.warnings > 0) {
                std::cerr << "warning: " << result.warnings << " non-converged P-function rows\n";
                return 4;
            }
            return 0;
        }
        if (thermal->parsed()) {
            const morse::MorseSpace space = resolve_space(flags);
            const morse::GridSpec a_grid = temperature_grid();
            morse::ThermalTableOptions options;
            options.hbar_omega = hbar_omega;
            options.include_husimi = include_husimi;
            options.include_pfunction = include_pfunction;
            options.tol = tol;
            options.k_max = k_max;
            if (include_husimi || include_pfunction) {
                if (x_grid_text.empty())
                    throw std::invalid_argument("--include-husimi/--include-pfunction need --x-grid");
                options.x_grid = morse::parse_grid(x_grid_text);
            }
            const std::string echo = "morsecs thermal " + space_echo(flags);
            const morse::TableResult result = morse::thermal_table(space, a_grid, options);
            emit(flags, result, echo);
            if (result.warnings > 0) {
                std::cerr << "warning: " << result.warnings << " non-converged P-function rows\n";
                return 4;
            }
            return 0;
        }
        if (verify->parsed()) {
            morse::VerifyOptions options;
            options.scope = scope;
            options.ls = parse_l_list(l_list_text);
            options.tol_override = tol_override;
            options.quad_order = quad_order;
            options.p_tol = p_tol;
            options.k_max = k_max;
            options.thermal_A = verify_A;
            options.hbar_omega = hbar_omega;
            options.command_echo = "morsecs verify --scope " + scope + " --l " + l_list_text;
            const morse::RunReport report = morse::verify_run(options);
            const std::string text = morse::report_to_text(report);
            if (flags.out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(flags.out_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open output file '" + flags.out_path + "'");
                out << text;
            }
            std::cerr << (report.failures == 0 ? "verify: PASS" : "verify: FAIL") << " ("
                      << report.checks.size() << " checks, " << report.failures << " failures, "
                      << report.warnings << " warnings, " << morse::fmt_num(report.wall_seconds)
                      << " s)\n";
            return report.failures == 0 ? 0 : 1;
        }
    } catch (const morse::consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 1;
    } catch (const morse::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
