#pragma once

#include <string>
#include <vector>

#include "chsq/estimator.hpp"
#include "chsq/types.hpp"

// CSV export/import. All files carry a mandatory header row, '.' decimal
// separator, UTF-8.

namespace chsq {

// columns: omega_over_gamma, re, im
void write_complex_spectrum_csv(const ComplexSpectrum& phi, const std::string& path);

// columns: omega_over_gamma, s_value, theta
void write_squeezing_csv(const SqueezingSpectrum& spec, const std::string& path);

// generic table writer: header names + column vectors (equal length)
void write_table_csv(const std::vector<std::string>& columns,
                     const std::vector<const std::vector<double>*>& data, const std::string& path);

// columns: power_w, transmission [, sigma]
std::vector<TransmissionPoint> read_transmission_csv(const std::string& path);

}  // namespace chsq
