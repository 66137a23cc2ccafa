#include "chsq/traces.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace chsq {

namespace {

constexpr char kMagic[8] = {'H', 'M', 'D', 'T', '0', '0', '0', '1'};

static_assert(sizeof(double) == 8, "need 64-bit IEEE doubles");

inline std::uint64_t to_le64(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xff);
        return r;
    }
    return v;
}

void write_f64_le(std::ostream& os, const double* p, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(count * 8));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t bits;
            std::memcpy(&bits, p + i, 8);
            bits = to_le64(bits);
            os.write(reinterpret_cast<const char*>(&bits), 8);
        }
    }
}

void read_f64_le(std::istream& is, double* p, std::size_t count) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(count * 8));
    if (!is) throw std::runtime_error("trace file: truncated payload");
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t bits;
            std::memcpy(&bits, p + i, 8);
            bits = to_le64(bits);
            std::memcpy(p + i, &bits, 8);
        }
    }
}

nlohmann::json header_json(const TraceSet& ts) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : ts.records) {
        nlohmann::json j{{"kind", to_string(r.kind)}};
        if (r.kind != TraceKind::vacuum) j["theta_true"] = r.theta_true;
        recs.push_back(std::move(j));
    }
    return nlohmann::json{{"sample_rate_hz", ts.sample_rate_hz},
                          {"n_samples", ts.n_samples},
                          {"seed", ts.seed},
                          {"records", std::move(recs)}};
}

struct ParsedHeader {
    double sample_rate_hz;
    std::uint64_t n_samples;
    std::uint64_t seed;
    std::vector<TraceKind> kinds;
    std::vector<double> thetas;
    std::uint64_t payload_start;
};

ParsedHeader read_header(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("trace file: bad magic");
    std::uint8_t lenb[4];
    is.read(reinterpret_cast<char*>(lenb), 4);
    if (!is) throw std::runtime_error("trace file: truncated header length");
    const std::uint32_t hlen = static_cast<std::uint32_t>(lenb[0]) |
                               (static_cast<std::uint32_t>(lenb[1]) << 8) |
                               (static_cast<std::uint32_t>(lenb[2]) << 16) |
                               (static_cast<std::uint32_t>(lenb[3]) << 24);
    std::string htext(hlen, '\0');
    is.read(htext.data(), hlen);
    if (!is) throw std::runtime_error("trace file: truncated header");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(htext);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("trace file: malformed header: ") + e.what());
    }
    ParsedHeader h;
    h.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    h.n_samples = j.at("n_samples").get<std::uint64_t>();
    h.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("records")) {
        h.kinds.push_back(trace_kind_from_string(r.at("kind").get<std::string>()));
        h.thetas.push_back(r.contains("theta_true") ? r.at("theta_true").get<double>()
                                                    : std::nan(""));
    }
    h.payload_start = 12u + hlen;
    return h;
}

}  // namespace

std::string to_string(TraceKind k) {
    switch (k) {
        case TraceKind::probe: return "probe";
        case TraceKind::beat: return "beat";
        case TraceKind::vacuum: return "vacuum";
    }
    throw std::logic_error("unknown TraceKind");
}

TraceKind trace_kind_from_string(const std::string& s) {
    if (s == "probe") return TraceKind::probe;
    if (s == "beat") return TraceKind::beat;
    if (s == "vacuum") return TraceKind::vacuum;
    throw std::runtime_error("trace file: unknown record kind '" + s + "'");
}

void TraceSet::validate() const {
    bool has_probe = false, has_vacuum = false;
    for (const auto& r : records) {
        if (r.data.size() != n_samples)
            throw std::invalid_argument("TraceSet: record length != n_samples");
        has_probe = has_probe || r.kind == TraceKind::probe;
        has_vacuum = has_vacuum || r.kind == TraceKind::vacuum;
    }
    if (has_probe && !has_vacuum)
        throw std::invalid_argument("TraceSet: probe records require a vacuum reference");
}

void write_traces(const TraceSet& ts, const std::string& path) {
    ts.validate();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_traces: cannot open " + path);
    os.write(kMagic, 8);
    const std::string header = header_json(ts).dump();
    const std::uint32_t hlen = static_cast<std::uint32_t>(header.size());
    const std::uint8_t lenb[4] = {static_cast<std::uint8_t>(hlen & 0xff),
                                  static_cast<std::uint8_t>((hlen >> 8) & 0xff),
                                  static_cast<std::uint8_t>((hlen >> 16) & 0xff),
                                  static_cast<std::uint8_t>((hlen >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(lenb), 4);
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& r : ts.records) write_f64_le(os, r.data.data(), r.data.size());
    if (!os) throw std::runtime_error("write_traces: write failed for " + path);
}

TraceSet read_traces(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_traces: cannot open " + path);
    const ParsedHeader h = read_header(is);

    TraceSet ts;
    ts.sample_rate_hz = h.sample_rate_hz;
    ts.n_samples = h.n_samples;
    ts.seed = h.seed;
    ts.records.resize(h.kinds.size());
    for (std::size_t i = 0; i < h.kinds.size(); ++i) {
        ts.records[i].kind = h.kinds[i];
        ts.records[i].theta_true = h.thetas[i];
        ts.records[i].data.resize(h.n_samples);
        read_f64_le(is, ts.records[i].data.data(), h.n_samples);
    }
    // header/payload length agreement: nothing may remain
    is.peek();
    if (!is.eof()) throw std::runtime_error("read_traces: trailing bytes after declared payload");
    return ts;
}

struct TraceFileReader::Impl {
    std::ifstream is;
    std::uint64_t payload_start = 0;
    std::size_t next = 0;
};

TraceFileReader::TraceFileReader(const std::string& path) : impl_(new Impl) {
    impl_->is.open(path, std::ios::binary);
    if (!impl_->is) {
        delete impl_;
        throw std::runtime_error("TraceFileReader: cannot open " + path);
    }
    try {
        const ParsedHeader h = read_header(impl_->is);
        sample_rate_hz_ = h.sample_rate_hz;
        n_samples_ = h.n_samples;
        seed_ = h.seed;
        kinds_ = h.kinds;
        thetas_ = h.thetas;
        impl_->payload_start = h.payload_start;
    } catch (...) {
        delete impl_;
        throw;
    }
}

TraceFileReader::~TraceFileReader() { delete impl_; }

std::vector<double> TraceFileReader::read_record(std::size_t i) {
    if (i >= kinds_.size()) throw std::out_of_range("TraceFileReader: record index");
    if (i != impl_->next) {
        const std::uint64_t off = impl_->payload_start + i * n_samples_ * 8ull;
        impl_->is.clear();
        impl_->is.seekg(static_cast<std::streamoff>(off));
    }
    std::vector<double> data(n_samples_);
    read_f64_le(impl_->is, data.data(), data.size());
    impl_->next = i + 1;
    return data;
}

}  // namespace chsq
