#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sonar/field.hpp"
#include "sonar/microlocal.hpp"

namespace sonar {

std::uint32_t crc32(const void* data, std::size_t n, std::uint32_t seed = 0);

/// Signal CSV: header "x,value", then one "x,value" row per sample.
void write_signal_csv(const std::string& path, const BackscatterSignal& sig);
BackscatterSignal read_signal_csv(const std::string& path);

/// Binary field dump: dims, spacings, and origin as 64-bit little-endian
/// values followed by row-major (re, im) float64 pairs.
void write_field(const std::string& path, const ComplexField& field);
ComplexField read_field(const std::string& path);

/// Polar decomposition CSV: header "angle,amplitude", one row per direction.
void write_polar_csv(const std::string& path, const RayDecomposition& dec);

}  // namespace sonar
