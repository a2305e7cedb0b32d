#include "flexsat/modal_basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flexsat/errors.hpp"

namespace flexsat {
namespace {

constexpr double kPi = std::numbers::pi;

double sign_alternating(int m) { return (m % 2 == 0) ? 1.0 : -1.0; } // (-1)^m

// integral over [0, l] of sin(k pi x / l)
double sine_integral(double l, int k) { return l * (1.0 - sign_alternating(k)) / (k * kPi); }

// integral over [0, l] of x sin(k pi x / l)
double sine_first_moment(double l, int k) { return -l * l * sign_alternating(k) / (k * kPi); }

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

int parse_index(std::string_view s, std::string_view whole) {
    s = trim(s);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParameterError("bad mode grid '" + std::string(whole) + "': expected 'm,n;m,n;...'");
    return value;
}

} // namespace

double ModalBasis::shape(std::size_t i, double x1, double x2) const {
    const auto& mode = modes[i];
    return std::sin(mode.m * kPi * x1 / plate.length_x1) * std::sin(mode.n * kPi * x2 / plate.length_x2);
}

std::vector<ModeIndex> rectangular_grid(int m_max, int n_max) {
    if (m_max < 1 || n_max < 1) throw ParameterError("mode grid bounds must be >= 1");
    std::vector<ModeIndex> grid;
    grid.reserve(static_cast<std::size_t>(m_max * n_max));
    for (int m = 1; m <= m_max; ++m)
        for (int n = 1; n <= n_max; ++n) grid.push_back({m, n});
    return grid;
}

std::vector<ModeIndex> parse_mode_grid(std::string_view text) {
    std::vector<ModeIndex> grid;
    std::string_view rest = text;
    while (true) {
        const auto semi = rest.find(';');
        const std::string_view item = trim(rest.substr(0, semi));
        if (!item.empty()) {
            const auto comma = item.find(',');
            if (comma == std::string_view::npos)
                throw ParameterError("bad mode grid '" + std::string(text) + "': expected 'm,n;m,n;...'");
            grid.push_back({parse_index(item.substr(0, comma), text), parse_index(item.substr(comma + 1), text)});
        }
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
    }
    if (grid.empty()) throw ParameterError("mode grid is empty");
    return grid;
}

std::string format_mode_grid(std::span<const ModeIndex> grid) {
    std::ostringstream os;
    for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? ";" : "") << grid[i].m << ',' << grid[i].n;
    return os.str();
}

ModalBasis build_basis(const PlateSpec& plate, std::vector<ModeIndex> mode_grid) {
    validate(plate);
    if (mode_grid.empty()) throw ParameterError("mode grid must not be empty");
    for (const auto& mode : mode_grid)
        if (mode.m < 1 || mode.n < 1) throw ParameterError("mode indices must be >= 1");
    std::sort(mode_grid.begin(), mode_grid.end());
    if (std::adjacent_find(mode_grid.begin(), mode_grid.end()) != mode_grid.end())
        throw ParameterError("duplicate mode in grid '" + format_mode_grid(mode_grid) + "'");

    ModalBasis basis;
    basis.plate = plate;
    basis.modes = std::move(mode_grid);
    basis.norm_factor = plate.norm_factor();
    const double l1 = plate.length_x1, l2 = plate.length_x2;
    const double d1 = plate.offset[0], d2 = plate.offset[1];
    for (const auto& [m, n] : basis.modes) {
        const double k1 = m * kPi / l1, k2 = n * kPi / l2;
        basis.laplace_eigenvalue.push_back(k1 * k1 + k2 * k2);
        const double int1 = sine_integral(l1, m), int2 = sine_integral(l2, n);
        basis.p1.push_back((sine_first_moment(l1, m) + d1 * int1) * int2);
        basis.p2.push_back((sine_first_moment(l2, n) + d2 * int2) * int1);
    }
    return basis;
}

double eval_displacement(const ModalBasis& basis, std::span<const double> amplitudes, double x1, double x2) {
    if (amplitudes.size() != basis.size()) throw ShapeError("amplitude count does not match mode count");
    const double l1 = basis.plate.length_x1, l2 = basis.plate.length_x2;
    if (!(x1 >= 0.0 && x1 <= l1 && x2 >= 0.0 && x2 <= l2)) {
        std::ostringstream os;
        os << "point (" << x1 << ", " << x2 << ") outside plate [0," << l1 << "]x[0," << l2 << "]";
        throw DomainError(os.str());
    }
    if (x1 == 0.0 || x1 == l1 || x2 == 0.0 || x2 == l2) return 0.0;
    double w = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) w += amplitudes[i] * basis.shape(i, x1, x2);
    return w;
}

} // namespace flexsat
