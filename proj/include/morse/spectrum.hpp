#ifndef MORSE_SPECTRUM_HPP
#define MORSE_SPECTRUM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace morse {

/// The finite bound-state ladder of a Morse well with integer depth
/// parameter l: levels n = 0..l with dimensionless energies
/// E_n = (l+1)^2 - (l+1-n)^2, stored as exact integers.
struct MorseSpace {
    int l = 0;
    std::vector<std::int64_t> energies;

    // Set when the space was built from a molecule preset whose tabulated
    // 2(l+1) had to be rounded to an integer l.
    std::string preset_name;
    double preset_value = 0.0;     // tabulated 2(l+1)
    double preset_residual = 0.0;  // 2(l+1) - tabulated value
    bool from_preset = false;

    int dim() const { return l + 1; }
    std::int64_t energy(int n) const;
    double energy_d(int n) const { return static_cast<double>(energy(n)); }
};

MorseSpace make_space(int l);

/// Dimensional level energy: hbar_omega * n - hbar_omega/(2(l+1)) * n^2,
/// identically hbar_omega/(2(l+1)) * E_n.
double dimensional_energy(const MorseSpace& space, int n, double hbar_omega);

/// Dimensionless temperature parameters: A = beta*hbar*omega and the
/// anharmonicity B = A / (2(l+1)), so the Boltzmann exponent at level n
/// is A*n - B*n^2.
struct ThermalParams {
    double A = 0.0;
    double B = 0.0;
    int l = 0;
};

ThermalParams thermal_params(const MorseSpace& space, double beta_hbar_omega);

/// Molecule presets: tabulated values of 2(l+1).
using PresetTable = std::map<std::string, double>;

const PresetTable& default_presets();

/// Parse a flat preset file: one `name value` pair per line, '#' comments.
/// Entries override existing keys.
void load_presets(PresetTable& table, const std::string& path);

/// Build the space for a named molecule, rounding its tabulated 2(l+1)
/// to the nearest integer l and recording the residual on the result.
MorseSpace molecule_preset(const std::string& name, const PresetTable& table = default_presets());

}  // namespace morse

#endif
