#include "morse/tables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "morse/thermal.hpp"

namespace morse {

GridSpec parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("grid: expected `start:stop:count[:log]`, got '" + text + "'");

    GridSpec grid;
    try {
        std::size_t used = 0;
        grid.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("");
        grid.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("");
        grid.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("grid: malformed number in '" + text + "'");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log")
            grid.log_scale = true;
        else if (parts[3] != "lin")
            throw std::invalid_argument("grid: scale must be `log` or `lin` in '" + text + "'");
    }
    if (!(grid.start < grid.stop)) throw std::invalid_argument("grid: need start < stop");
    if (grid.count < 1) throw std::invalid_argument("grid: need count >= 1");
    if (grid.log_scale && !(grid.start > 0.0))
        throw std::invalid_argument("grid: log scale needs start > 0");
    return grid;
}

std::vector<double> grid_points(const GridSpec& grid) {
    std::vector<double> pts(static_cast<std::size_t>(grid.count));
    if (grid.count == 1) {
        pts[0] = grid.start;
        return pts;
    }
    if (grid.log_scale) {
        const double la = std::log(grid.start), lb = std::log(grid.stop);
        for (int i = 0; i < grid.count; ++i)
            pts[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (grid.count - 1));
    } else {
        for (int i = 0; i < grid.count; ++i)
            pts[static_cast<std::size_t>(i)] = grid.start + (grid.stop - grid.start) * i / (grid.count - 1);
    }
    pts.front() = grid.start;
    pts.back() = grid.stop;
    return pts;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

std::string cell_csv(const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::number: return fmt_num(c.num);
        case Cell::Kind::integer: return std::to_string(c.inum);
        case Cell::Kind::boolean: return c.flag ? "true" : "false";
        case Cell::Kind::null: return "nan";
        case Cell::Kind::text: return c.text;
    }
    return {};
}

nlohmann::ordered_json cell_json(const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::number: return c.num;
        case Cell::Kind::integer: return c.inum;
        case Cell::Kind::boolean: return c.flag;
        case Cell::Kind::null: return nullptr;
        case Cell::Kind::text: return c.text;
    }
    return nullptr;
}

}  // namespace

std::string render_csv(const std::vector<Table>& tables) {
    std::string out;
    bool first = true;
    for (const Table& t : tables) {
        if (!first) out += "\n";
        first = false;
        out += "# table: " + t.name + "\n";
        out += std::string("# version: ") + kVersion + "\n";
        for (const auto& [k, v] : t.meta) out += "# " + k + ": " + v + "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out += (i ? "," : "") + t.columns[i];
        out += "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out += (i ? "," : "") + cell_csv(row[i]);
            out += "\n";
        }
    }
    return out;
}

std::string render_json(const std::vector<Table>& tables) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["tables"] = nlohmann::ordered_json::array();
    for (const Table& t : tables) {
        nlohmann::ordered_json jt;
        jt["table"] = t.name;
        for (const auto& [k, v] : t.meta) jt["params"][k] = v;
        jt["columns"] = t.columns;
        jt["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const Cell& c : row) jr.push_back(cell_json(c));
            jt["rows"].push_back(jr);
        }
        doc["tables"].push_back(jt);
    }
    return doc.dump(2) + "\n";
}

void parallel_rows(int count, const std::function<void(int)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = static_cast<int>(std::min<unsigned>(hw ? hw : 1, static_cast<unsigned>(count)));
    if (workers <= 1 || count <= 2) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mtx;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mtx);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

void add_space_meta(Table& t, const MorseSpace& space) {
    t.meta.emplace_back("l", std::to_string(space.l));
    if (space.from_preset) {
        t.meta.emplace_back("molecule", space.preset_name);
        t.meta.emplace_back("tabulated-2(l+1)", fmt_num(space.preset_value));
        t.meta.emplace_back("rounding-residual", fmt_num(space.preset_residual));
    }
}

std::string grid_echo(const GridSpec& g) {
    return fmt_num(g.start) + ":" + fmt_num(g.stop) + ":" + std::to_string(g.count) +
           (g.log_scale ? ":log" : "");
}

}  // namespace

TableResult spectrum_table(const MorseSpace& space, double hbar_omega) {
    Table t;
    t.name = "spectrum";
    add_space_meta(t, space);
    t.meta.emplace_back("hbar-omega", fmt_num(hbar_omega));
    t.columns = {"n", "E", "eps"};
    for (int n = 0; n <= space.l; ++n)
        t.rows.push_back({Cell::integer(n), Cell::integer(space.energy(n)),
                          Cell::number(dimensional_energy(space, n, hbar_omega))});
    return {{t}, 0};
}

TableResult coherent_table(const MorseSpace& space, double z_re, double z_im, double alpha) {
    const std::complex<double> Z{z_re, z_im};
    const CoherentState state = closed_form_state(space, Z, alpha);

    double norm2 = 0.0;
    for (const auto& c : state.coeffs) norm2 += std::norm(c);
    const std::complex<double> self = overlap(state, state);
    const std::complex<double> kernel = overlap_kernel(space, Z, Z);

    Table t;
    t.name = "coherent";
    add_space_meta(t, space);
    t.meta.emplace_back("Z", fmt_num(z_re) + (z_im < 0 ? "" : "+") + fmt_num(z_im) + "i");
    t.meta.emplace_back("alpha", fmt_num(alpha));
    t.meta.emplace_back("norm-residual", fmt_num(std::abs(std::sqrt(norm2) - 1.0)));
    t.meta.emplace_back("kernel-self-residual", fmt_num(std::abs(self - kernel)));
    t.columns = {"n", "re_c", "im_c", "abs2_c"};
    for (int n = 0; n <= space.l; ++n) {
        const auto c = state.coeffs[static_cast<std::size_t>(n)];
        t.rows.push_back({Cell::integer(n), Cell::number(c.real()), Cell::number(c.imag()),
                          Cell::number(std::norm(c))});
    }
    return {{t}, 0};
}

TableResult stats_table(const MorseSpace& space, const GridSpec& x_grid, double alpha) {
    const std::vector<double> xs = grid_points(x_grid);

    Table t;
    t.name = "stats";
    add_space_meta(t, space);
    t.meta.emplace_back("alpha", fmt_num(alpha));
    t.meta.emplace_back("x-grid", grid_echo(x_grid));
    t.columns = {"x", "N_mean", "N2_mean", "g2", "Q", "H_mean", "f"};
    t.rows.resize(xs.size());

    parallel_rows(static_cast<int>(xs.size()), [&](int i) {
        const double x = xs[static_cast<std::size_t>(i)];
        const CoherentState state =
            closed_form_state(space, std::sqrt(x), alpha);  // real label, x = |Z|^2
        const ActionIdentity action = action_identity(state);
        std::vector<Cell> row{Cell::number(x),
                              Cell::number(moment_n(state, 1)),
                              Cell::number(moment_n(state, 2)),
                              Cell::null(),
                              Cell::null(),
                              Cell::number(action.mean_energy),
                              Cell::number(action.f_of_x)};
        if (x > 0.0) {
            row[3] = Cell::number(g2(state));
            row[4] = Cell::number(mandel_q(state));
        }
        t.rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    return {{t}, 0};
}

TableResult husimi_table(const MorseSpace& space, const GridSpec& a_grid, const GridSpec& x_grid) {
    const std::vector<double> as = grid_points(a_grid);
    const std::vector<double> xs = grid_points(x_grid);

    Table t;
    t.name = "husimi";
    add_space_meta(t, space);
    t.meta.emplace_back("A-grid", grid_echo(a_grid));
    t.meta.emplace_back("x-grid", grid_echo(x_grid));
    t.columns = {"A", "x", "husimi"};
    const int total = static_cast<int>(as.size() * xs.size());
    t.rows.resize(static_cast<std::size_t>(total));

    parallel_rows(total, [&](int i) {
        const double A = as[static_cast<std::size_t>(i) / xs.size()];
        const double x = xs[static_cast<std::size_t>(i) % xs.size()];
        const ThermalState thermal = make_thermal(space, A);
        t.rows[static_cast<std::size_t>(i)] = {Cell::number(A), Cell::number(x),
                                               Cell::number(husimi(thermal, x).direct)};
    });
    return {{t}, 0};
}

TableResult pfunction_table(const MorseSpace& space, const GridSpec& a_grid, const GridSpec& x_grid,
                            double tol, int k_max) {
    const std::vector<double> as = grid_points(a_grid);
    const std::vector<double> xs = grid_points(x_grid);

    Table t;
    t.name = "pfunction";
    add_space_meta(t, space);
    t.meta.emplace_back("A-grid", grid_echo(a_grid));
    t.meta.emplace_back("x-grid", grid_echo(x_grid));
    t.meta.emplace_back("tol", fmt_num(tol));
    t.meta.emplace_back("kmax", std::to_string(k_max));
    t.columns = {"A", "x", "P", "k_used", "converged"};
    const int total = static_cast<int>(as.size() * xs.size());
    t.rows.resize(static_cast<std::size_t>(total));
    std::atomic<int> warnings{0};

    parallel_rows(total, [&](int i) {
        const double A = as[static_cast<std::size_t>(i) / xs.size()];
        const double x = xs[static_cast<std::size_t>(i) % xs.size()];
        const ThermalState thermal = make_thermal(space, A);
        const PValue p = p_function(thermal, x, tol, k_max);
        if (!p.converged) warnings.fetch_add(1);
        t.rows[static_cast<std::size_t>(i)] = {Cell::number(A), Cell::number(x), Cell::number(p.value),
                                               Cell::integer(p.k_used), Cell::boolean(p.converged)};
    });
    return {{t}, warnings.load()};
}

TableResult thermal_table(const MorseSpace& space, const GridSpec& a_grid,
                          const ThermalTableOptions& options) {
    const std::vector<double> as = grid_points(a_grid);

    Table t;
    t.name = "thermal";
    add_space_meta(t, space);
    t.meta.emplace_back("A-grid", grid_echo(a_grid));
    t.meta.emplace_back("hbar-omega", fmt_num(options.hbar_omega));
    t.columns = {"A", "B", "Z_l", "N_mean", "N2_mean", "g2", "Q", "F", "U", "S", "Cv"};
    t.rows.resize(as.size());

    parallel_rows(static_cast<int>(as.size()), [&](int i) {
        const double A = as[static_cast<std::size_t>(i)];
        const ThermalState thermal = make_thermal(space, A);
        std::vector<Cell> row{Cell::number(A),
                              Cell::number(thermal.params.B),
                              Cell::number(thermal.partition),
                              Cell::number(thermal_moment(thermal, 1)),
                              Cell::number(thermal_moment(thermal, 2)),
                              Cell::number(thermal_g2(thermal)),
                              Cell::number(thermal_mandel(thermal)),
                              Cell::null(),
                              Cell::number(internal_energy(thermal, options.hbar_omega)),
                              Cell::number(entropy_kb(thermal)),
                              Cell::number(heat_capacity_kb(thermal))};
        if (A > 0.0) {
            const Thermodynamics td = thermodynamics(thermal.params, options.hbar_omega);
            row[7] = Cell::number(td.free_energy);
        }
        t.rows[static_cast<std::size_t>(i)] = std::move(row);
    });

    TableResult result{{t}, 0};
    if (options.include_husimi) {
        TableResult sub = husimi_table(space, a_grid, options.x_grid);
        result.tables.push_back(std::move(sub.tables.front()));
        result.warnings += sub.warnings;
    }
    if (options.include_pfunction) {
        TableResult sub = pfunction_table(space, a_grid, options.x_grid, options.tol, options.k_max);
        result.tables.push_back(std::move(sub.tables.front()));
        result.warnings += sub.warnings;
    }
    return result;
}

}  // namespace morse
