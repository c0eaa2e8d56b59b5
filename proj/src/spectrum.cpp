#include "morse/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace morse {

std::int64_t MorseSpace::energy(int n) const {
    if (n < 0 || n > l) throw std::invalid_argument("MorseSpace: level index out of range");
    return energies[static_cast<std::size_t>(n)];
}

MorseSpace make_space(int l) {
    if (l < 1) throw std::invalid_argument("make_space: depth parameter l must be >= 1");
    MorseSpace space;
    space.l = l;
    space.energies.resize(static_cast<std::size_t>(l) + 1);
    const std::int64_t lp1 = static_cast<std::int64_t>(l) + 1;
    for (std::int64_t n = 0; n <= l; ++n)
        space.energies[static_cast<std::size_t>(n)] = lp1 * lp1 - (lp1 - n) * (lp1 - n);
    return space;
}

double dimensional_energy(const MorseSpace& space, int n, double hbar_omega) {
    if (!(hbar_omega > 0.0)) throw std::invalid_argument("dimensional_energy: need hbar_omega > 0");
    if (n < 0 || n > space.l) throw std::invalid_argument("dimensional_energy: level index out of range");
    return hbar_omega / (2.0 * (space.l + 1)) * space.energy_d(n);
}

ThermalParams thermal_params(const MorseSpace& space, double beta_hbar_omega) {
    if (!(beta_hbar_omega >= 0.0))
        throw std::invalid_argument("thermal_params: temperature parameter must be >= 0");
    ThermalParams p;
    p.l = space.l;
    p.A = beta_hbar_omega;
    p.B = beta_hbar_omega / (2.0 * (space.l + 1));
    return p;
}

const PresetTable& default_presets() {
    static const PresetTable table = {
        {"H2", 37.1586},
        {"I2", 348.78},
    };
    return table;
}

void load_presets(PresetTable& table, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_presets: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string name;
        if (!(ss >> name)) continue;  // blank line
        double value = 0.0;
        std::string rest;
        if (!(ss >> value) || (ss >> rest) || !(value > 2.0))
            throw std::runtime_error("load_presets: malformed line " + std::to_string(lineno) +
                                     " in '" + path + "' (expected `name 2(l+1)-value`)");
        table[name] = value;
    }
}

MorseSpace molecule_preset(const std::string& name, const PresetTable& table) {
    auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, v] : table) {
            if (!known.empty()) known += ", ";
            known += k;
        }
        throw std::invalid_argument("molecule_preset: unknown molecule '" + name +
                                    "' (available: " + known + ")");
    }
    // Tabulated 2(l+1) is generally not an even integer; the number-basis
    // combinatorics require integer l, so round and surface the residual.
    const double value = it->second;
    const int l = static_cast<int>(std::lround(value / 2.0 - 1.0));
    if (l < 1) throw std::invalid_argument("molecule_preset: tabulated value too small for '" + name + "'");
    MorseSpace space = make_space(l);
    space.from_preset = true;
    space.preset_name = name;
    space.preset_value = value;
    space.preset_residual = 2.0 * (l + 1) - value;
    return space;
}

}  // namespace morse
