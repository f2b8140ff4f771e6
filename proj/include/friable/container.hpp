#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "friable/sieves.hpp"
#include "friable/special_functions.hpp"

namespace friable {

// Little-endian binary cache files: 8-byte magic, u32 format version, u32
// payload kind, kind-specific header, raw payload.  Readers return nullopt
// on any mismatch (magic, version, kind, or parameter disagreement) so
// callers rebuild instead of trusting stale data.

void write_rho_table(const std::filesystem::path& p, const RhoTable& t);
std::optional<RhoTable> read_rho_table(const std::filesystem::path& p,
                                       double expect_max_v, int expect_steps);

void write_factor_tables(const std::filesystem::path& p, const FactorTables& t);
std::optional<FactorTables> read_factor_tables(const std::filesystem::path& p,
                                               uint64_t expect_limit);

void write_primes(const std::filesystem::path& p, uint64_t limit,
                  const std::vector<uint32_t>& primes);
std::optional<std::vector<uint32_t>> read_primes(const std::filesystem::path& p,
                                                 uint64_t expect_limit);

}  // namespace friable
