#pragma once

#include <complex>
#include <vector>

#include "homsim/jsa.hpp"

namespace homsim::schmidt {

// Schmidt spectrum of a joint amplitude: coefficients lambda_n are the
// normalized squared singular values, descending, sum 1. The reduced
// single-photon state has spectrum {lambda_n}, so
//   purity gamma = sum lambda_n^2 = 1/K.
struct SchmidtResult {
    std::vector<double> coefficients;
    double schmidt_number = 0;  // K
    double purity = 0;          // gamma
};

SchmidtResult schmidt_decompose(const jsa::JsaMatrix& m);

double purity(const SchmidtResult& r);

// Singular vectors (Schmidt modes), on request only.
struct SchmidtModes {
    std::vector<std::vector<std::complex<double>>> signal_modes;  // per mode, length n_signal
    std::vector<std::vector<std::complex<double>>> idler_modes;
};
SchmidtModes schmidt_modes(const jsa::JsaMatrix& m, int count);

}  // namespace homsim::schmidt
