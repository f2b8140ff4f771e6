#include "friable/container.hpp"

#include <cstring>
#include <fstream>

#include "friable/util.hpp"

namespace friable {

namespace {

constexpr char kMagic[8] = {'F', 'R', 'I', 'A', 'B', 'L', 'E', '\0'};
constexpr uint32_t kVersion = 1;
enum : uint32_t { kKindRho = 1, kKindFactors = 2, kKindPrimes = 3 };

bool little_endian_host() {
    const uint16_t probe = 1;
    char c;
    std::memcpy(&c, &probe, 1);
    return c == 1;
}

template <class T>
void put(std::ofstream& f, const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::ifstream& f, T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    return bool(f.read(reinterpret_cast<char*>(&v), sizeof v));
}

template <class T>
void put_vec(std::ofstream& f, const std::vector<T>& v) {
    put(f, uint64_t(v.size()));
    f.write(reinterpret_cast<const char*>(v.data()),
            std::streamsize(v.size() * sizeof(T)));
}

template <class T>
bool get_vec(std::ifstream& f, std::vector<T>& v, uint64_t expect_count) {
    uint64_t n = 0;
    if (!get(f, n) || n != expect_count) return false;
    v.resize(size_t(n));
    return bool(f.read(reinterpret_cast<char*>(v.data()),
                       std::streamsize(n * sizeof(T))));
}

std::ofstream open_write(const std::filesystem::path& p, uint32_t kind) {
    if (!little_endian_host())
        throw resource_error("cache files require a little-endian host");
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f)
        throw resource_error("cannot open cache file for writing: " +
                             p.string());
    f.write(kMagic, sizeof kMagic);
    put(f, kVersion);
    put(f, kind);
    return f;
}

// Returns an open stream positioned after the common header, or nothing if
// the file is absent or the header disagrees.
std::optional<std::ifstream> open_read(const std::filesystem::path& p,
                                       uint32_t kind) {
    if (!little_endian_host()) return std::nullopt;
    std::ifstream f(p, std::ios::binary);
    if (!f) return std::nullopt;
    char magic[8];
    uint32_t version = 0, got_kind = 0;
    if (!f.read(magic, sizeof magic) || std::memcmp(magic, kMagic, 8) != 0)
        return std::nullopt;
    if (!get(f, version) || version != kVersion) return std::nullopt;
    if (!get(f, got_kind) || got_kind != kind) return std::nullopt;
    return f;
}

}  // namespace

void write_rho_table(const std::filesystem::path& p, const RhoTable& t) {
    auto f = open_write(p, kKindRho);
    put(f, t.max_v);
    put(f, int64_t(t.steps_per_unit));
    put_vec(f, t.log_values);
    if (!f) throw resource_error("short write: " + p.string());
}

std::optional<RhoTable> read_rho_table(const std::filesystem::path& p,
                                       double expect_max_v, int expect_steps) {
    auto fo = open_read(p, kKindRho);
    if (!fo) return std::nullopt;
    auto& f = *fo;
    double max_v = 0.0;
    int64_t steps = 0;
    if (!get(f, max_v) || !get(f, steps)) return std::nullopt;
    if (max_v != expect_max_v || steps != expect_steps) return std::nullopt;
    RhoTable t;
    t.max_v = max_v;
    t.steps_per_unit = int(steps);
    t.grid_step = 1.0 / double(steps);
    const uint64_t count = uint64_t(max_v) * uint64_t(steps) + 1;
    if (!get_vec(f, t.log_values, count)) return std::nullopt;
    return t;
}

void write_factor_tables(const std::filesystem::path& p, const FactorTables& t) {
    auto f = open_write(p, kKindFactors);
    put(f, t.limit);
    put_vec(f, t.lpf);
    put_vec(f, t.radical);
    if (!f) throw resource_error("short write: " + p.string());
}

std::optional<FactorTables> read_factor_tables(const std::filesystem::path& p,
                                               uint64_t expect_limit) {
    auto fo = open_read(p, kKindFactors);
    if (!fo) return std::nullopt;
    auto& f = *fo;
    uint64_t limit = 0;
    if (!get(f, limit) || limit != expect_limit) return std::nullopt;
    FactorTables t;
    t.limit = limit;
    if (!get_vec(f, t.lpf, limit + 1)) return std::nullopt;
    if (!get_vec(f, t.radical, limit + 1)) return std::nullopt;
    return t;
}

void write_primes(const std::filesystem::path& p, uint64_t limit,
                  const std::vector<uint32_t>& primes) {
    auto f = open_write(p, kKindPrimes);
    put(f, limit);
    put_vec(f, primes);
    if (!f) throw resource_error("short write: " + p.string());
}

std::optional<std::vector<uint32_t>> read_primes(const std::filesystem::path& p,
                                                 uint64_t expect_limit) {
    auto fo = open_read(p, kKindPrimes);
    if (!fo) return std::nullopt;
    auto& f = *fo;
    uint64_t limit = 0;
    if (!get(f, limit) || limit != expect_limit) return std::nullopt;
    uint64_t n = 0;
    if (!get(f, n)) return std::nullopt;
    if (n > limit) return std::nullopt;
    std::vector<uint32_t> primes(static_cast<size_t>(n));
    if (!f.read(reinterpret_cast<char*>(primes.data()),
                std::streamsize(n * sizeof(uint32_t))))
        return std::nullopt;
    return primes;
}

}  // namespace friable
