#include "chsq/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chsq {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("csv: cannot open " + path);
    return os;
}

}  // namespace

void write_complex_spectrum_csv(const ComplexSpectrum& phi, const std::string& path) {
    phi.validate();
    auto os = open_out(path);
    os << "omega_over_gamma,re,im\n";
    for (std::size_t i = 0; i < phi.size(); ++i)
        os << fmt(phi.grid.omega[i]) << ',' << fmt(phi.values[i].real()) << ','
           << fmt(phi.values[i].imag()) << '\n';
    if (!os) throw std::runtime_error("csv: write failed for " + path);
}

void write_squeezing_csv(const SqueezingSpectrum& spec, const std::string& path) {
    spec.validate();
    auto os = open_out(path);
    os << "omega_over_gamma,s_value,theta\n";
    for (std::size_t i = 0; i < spec.size(); ++i)
        os << fmt(spec.grid.omega[i]) << ',' << fmt(spec.values[i]) << ',' << fmt(spec.theta)
           << '\n';
    if (!os) throw std::runtime_error("csv: write failed for " + path);
}

void write_table_csv(const std::vector<std::string>& columns,
                     const std::vector<const std::vector<double>*>& data, const std::string& path) {
    if (columns.size() != data.size() || data.empty())
        throw std::invalid_argument("write_table_csv: column/data mismatch");
    const std::size_t n = data.front()->size();
    for (const auto* col : data)
        if (col->size() != n) throw std::invalid_argument("write_table_csv: ragged columns");
    auto os = open_out(path);
    for (std::size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < data.size(); ++c)
            os << fmt((*data[c])[i]) << (c + 1 < data.size() ? ',' : '\n');
    if (!os) throw std::runtime_error("csv: write failed for " + path);
}

std::vector<TransmissionPoint> read_transmission_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty file " + path);
    // header row is mandatory; accept power_w or power_pw for the first column
    bool picowatt = line.find("power_pw") != std::string::npos;
    if (!picowatt && line.find("power_w") == std::string::npos)
        throw std::runtime_error("csv: expected power_w/power_pw,transmission header in " + path);

    std::vector<TransmissionPoint> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        TransmissionPoint p;
        if (!std::getline(ss, cell, ',')) continue;
        p.power_w = std::stod(cell) * (picowatt ? 1e-12 : 1.0);
        if (!std::getline(ss, cell, ','))
            throw std::runtime_error("csv: missing transmission column in " + path);
        p.transmission = std::stod(cell);
        if (std::getline(ss, cell, ',')) p.sigma = std::stod(cell);
        out.push_back(p);
    }
    return out;
}

}  // namespace chsq
