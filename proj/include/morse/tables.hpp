#ifndef MORSE_TABLES_HPP
#define MORSE_TABLES_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "morse/spectrum.hpp"

namespace morse {

inline constexpr const char* kVersion = "0.1.0";

/// Evaluation grid parsed from `a:b:n[:log]`.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log_scale = false;
};

GridSpec parse_grid(const std::string& text);
std::vector<double> grid_points(const GridSpec& grid);

/// Fixed decimal formatting: 15 significant digits, '.' separator.  The CLI
/// output contract is byte-identical tables for identical flags.
std::string fmt_num(double v);

/// One table cell; `null` renders as `nan` in CSV and `null` in JSON.
struct Cell {
    enum class Kind { number, integer, boolean, null, text };
    Kind kind = Kind::null;
    double num = 0.0;
    long long inum = 0;
    bool flag = false;
    std::string text;

    static Cell number(double v) { return {Kind::number, v, 0, false, {}}; }
    static Cell integer(long long v) { return {Kind::integer, 0.0, v, false, {}}; }
    static Cell boolean(bool v) { return {Kind::boolean, 0.0, 0, v, {}}; }
    static Cell null() { return {}; }
    static Cell str(std::string v) { return {Kind::text, 0.0, 0, false, std::move(v)}; }
};

struct Table {
    std::string name;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const std::vector<Table>& tables);
std::string render_json(const std::vector<Table>& tables);

struct TableResult {
    std::vector<Table> tables;
    int warnings = 0;  // e.g. non-converged P-function rows
};

// Table builders.  The CLI performs no arithmetic of its own: every number
// in a row comes from a library call.

TableResult spectrum_table(const MorseSpace& space, double hbar_omega);

TableResult coherent_table(const MorseSpace& space, double z_re, double z_im, double alpha);

TableResult stats_table(const MorseSpace& space, const GridSpec& x_grid, double alpha);

TableResult husimi_table(const MorseSpace& space, const GridSpec& a_grid, const GridSpec& x_grid);

TableResult pfunction_table(const MorseSpace& space, const GridSpec& a_grid, const GridSpec& x_grid,
                            double tol, int k_max);

struct ThermalTableOptions {
    double hbar_omega = 1.0;
    bool include_husimi = false;
    bool include_pfunction = false;
    GridSpec x_grid;  // used by the include flags
    double tol = 1e-10;
    int k_max = 60;
};

TableResult thermal_table(const MorseSpace& space, const GridSpec& a_grid,
                          const ThermalTableOptions& options);

/// Deterministic worker pool: evaluates fn(i) for i in [0, count) on a few
/// threads and keeps results in input order.
void parallel_rows(int count, const std::function<void(int)>& fn);

}  // namespace morse

#endif
