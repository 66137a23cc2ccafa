#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Homodyne trace container ("HMDT0001"):
//   8 magic bytes, uint32 little-endian header length, UTF-8 JSON header
//   { sample_rate_hz, n_samples, seed, records: [ {kind, theta_true?} ... ] },
//   then the record payloads concatenated as little-endian float64.

namespace chsq {

enum class TraceKind { probe, beat, vacuum };

std::string to_string(TraceKind k);
TraceKind trace_kind_from_string(const std::string& s);

struct TraceRecord {
    TraceKind kind = TraceKind::vacuum;
    double theta_true = 0.0;  // meaningful for probe/beat only (NaN for vacuum)
    std::vector<double> data;

    // NaN theta_true (vacuum records) compares equal to itself
    bool operator==(const TraceRecord& o) const {
        const bool theta_eq =
            (theta_true == o.theta_true) || (theta_true != theta_true && o.theta_true != o.theta_true);
        return kind == o.kind && theta_eq && data == o.data;
    }
};

struct TraceSet {
    double sample_rate_hz = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<TraceRecord> records;

    bool operator==(const TraceSet&) const = default;

    // record lengths match n_samples; a vacuum reference accompanies any probe
    void validate() const;
};

void write_traces(const TraceSet& ts, const std::string& path);
TraceSet read_traces(const std::string& path);

// Sequential reader for files too large to hold in memory. Header metadata is
// available after construction; records stream in file order.
class TraceFileReader {
public:
    explicit TraceFileReader(const std::string& path);
    ~TraceFileReader();
    TraceFileReader(const TraceFileReader&) = delete;
    TraceFileReader& operator=(const TraceFileReader&) = delete;

    double sample_rate_hz() const { return sample_rate_hz_; }
    std::uint64_t n_samples() const { return n_samples_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t n_records() const { return kinds_.size(); }
    TraceKind kind(std::size_t i) const { return kinds_.at(i); }
    double theta_true(std::size_t i) const { return thetas_.at(i); }

    // reads record i (sequential access is fastest; random access seeks)
    std::vector<double> read_record(std::size_t i);

private:
    struct Impl;
    Impl* impl_;
    double sample_rate_hz_ = 0.0;
    std::uint64_t n_samples_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<TraceKind> kinds_;
    std::vector<double> thetas_;
};

}  // namespace chsq
