#include "agla/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace agla::io {

// ---------------------------------------------------------------------------
// Random numbers

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller, one variate per call.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// ---------------------------------------------------------------------------
// WAV

namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | p[1] << 8); }

void put32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put16(std::ostream& os, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.empty()) throw EmptyFile(path.string() + " is empty");
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw UnsupportedFormat(path.string() + " is not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t avail = std::min(size, bytes.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && avail >= 16) {
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == 0xFFFE && avail >= 26) format = le16(chunk + 8 + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos += 8 + size + (size & 1);
  }
  if (channels == 0) throw UnsupportedFormat(path.string() + ": missing fmt chunk");
  if (data == nullptr) throw UnsupportedFormat(path.string() + ": missing data chunk");

  const bool pcm = format == 1 && (bits == 16 || bits == 24);
  const bool ieee = format == 3 && bits == 32;
  if (!pcm && !ieee)
    throw UnsupportedFormat(path.string() + ": format " + std::to_string(format) + " with " +
                            std::to_string(bits) + " bits per sample");

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  if (frames == 0) throw EmptyFile(path.string() + " holds no samples");

  WavData wav;
  wav.sample_rate = rate;
  wav.channels = channels;
  wav.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const unsigned char* p = data + (f * channels + ch) * width;
      double v = 0.0;
      if (ieee) {
        const std::uint32_t raw = le32(p);
        float fv;
        std::memcpy(&fv, &raw, sizeof fv);
        v = fv;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else {
        std::int32_t iv = std::int32_t(p[0]) | std::int32_t(p[1]) << 8 | std::int32_t(p[2]) << 16;
        if (iv & 0x800000) iv -= 0x1000000;
        v = iv / 8388608.0;
      }
      acc += v;
    }
    wav.samples[f] = acc / channels;
  }
  return wav;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 3);
  put16(out, 1);
  put32(out, sample_rate);
  put32(out, sample_rate * 4);
  put16(out, 4);
  put16(out, 32);
  out.write("data", 4);
  put32(out, data_bytes);
  for (double v : samples) {
    const auto fv = static_cast<float>(v);
    std::uint32_t raw;
    std::memcpy(&raw, &fv, sizeof raw);
    put32(out, raw);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Signals

RealVec fit_length(std::span<const double> x, std::size_t length) {
  RealVec out(length, 0.0);
  std::copy_n(x.begin(), std::min(length, x.size()), out.begin());
  return out;
}

RealVec generate_signal(const std::string& name, std::uint64_t seed, std::size_t length) {
  Rng rng(seed);
  RealVec x(length, 0.0);
  const double L = static_cast<double>(length);
  const double two_pi = 2.0 * std::numbers::pi;
  if (name == "chirp") {
    const double f0 = 0.01 + 0.04 * rng.uniform();
    const double f1 = 0.2 + 0.2 * rng.uniform();
    const double phase = two_pi * rng.uniform();
    for (std::size_t l = 0; l < length; ++l) {
      const double t = static_cast<double>(l);
      x[l] = std::sin(two_pi * (f0 * t + (f1 - f0) * t * t / (2.0 * L)) + phase);
    }
  } else if (name == "multitone") {
    const int tones = 3 + static_cast<int>(rng.next() % 4);
    for (int k = 0; k < tones; ++k) {
      const double f = 0.01 + 0.44 * rng.uniform();
      const double amp = 0.2 + 0.8 * rng.uniform();
      const double phase = two_pi * rng.uniform();
      for (std::size_t l = 0; l < length; ++l)
        x[l] += amp * std::cos(two_pi * f * static_cast<double>(l) + phase);
    }
  } else if (name == "noise-burst") {
    const double center = L * (0.25 + 0.5 * rng.uniform());
    const double width = L * (0.06 + 0.06 * rng.uniform());
    for (std::size_t l = 0; l < length; ++l) {
      const double d = (static_cast<double>(l) - center) / width;
      x[l] = rng.normal() * std::exp(-0.5 * d * d);
    }
  } else {
    throw InvalidParameter("unknown generator '" + name + "' (chirp, multitone, noise-burst)");
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x) v *= 0.9 / peak;
  return x;
}

SignalVec ingest_signal(const std::string& source, std::size_t length,
                        std::optional<std::uint64_t> default_seed) {
  const std::string head = source.substr(0, source.find(','));
  if (head == "chirp" || head == "multitone" || head == "noise-burst") {
    std::uint64_t seed = default_seed.value_or(0);
    std::size_t gen_length = length;
    std::stringstream ss(source);
    std::string field;
    std::getline(ss, field, ',');
    while (std::getline(ss, field, ',')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw InvalidParameter("generator option '" + field + "' lacks '='");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "seed")
        seed = std::stoull(value);
      else if (key == "L")
        gen_length = std::stoull(value);
      else
        throw InvalidParameter("unknown generator option '" + key + "'");
    }
    return to_complex(fit_length(generate_signal(head, seed, gen_length), length));
  }
  const WavData wav = read_wav(source);
  return to_complex(fit_length(wav.samples, length));
}

MagnitudeSpec make_target(const LinearTransform& t, std::span<const cplx> x) {
  const CoefVec c = t.analyze(x);
  RealVec s(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) s[i] = std::abs(c[i]);
  return MagnitudeSpec(std::move(s));
}

CoefVec init_coeffs(InitMode mode, const MagnitudeSpec& s, std::uint64_t seed,
                    std::span<const cplx> provided) {
  CoefVec c(s.size());
  switch (mode) {
    case InitMode::zero_phase:
      for (std::size_t i = 0; i < s.size(); ++i) c[i] = cplx(s[i], 0.0);
      break;
    case InitMode::random_phase: {
      Rng rng(seed);
      for (std::size_t i = 0; i < s.size(); ++i)
        c[i] = std::polar(s[i], 2.0 * std::numbers::pi * rng.uniform());
      break;
    }
    case InitMode::provided:
      require_length("init_coeffs: provided coefficients", s.size(), provided.size());
      c.assign(provided.begin(), provided.end());
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Traces

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> records) {
  os << kTraceHeader << '\n';
  for (const auto& r : records) {
    os << r.n << ',' << fmt_double(r.d2) << ',' << fmt_double(r.delta_t) << ','
       << fmt_double(r.lyapunov) << ',' << fmt_double(r.residual) << ',' << fmt_double(r.ssnr_c)
       << ',' << fmt_double(r.ssnr_y) << ',' << (r.pole_hit ? 1 : 0) << '\n';
  }
}

void write_trace_json(std::ostream& os, std::span<const TraceRecord> records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"n", r.n},
                    {"d2", r.d2},
                    {"delta_t", r.delta_t},
                    {"lyapunov", r.lyapunov},
                    {"residual", r.residual},
                    {"ssnr_c", r.ssnr_c},
                    {"ssnr_y", r.ssnr_y},
                    {"pole_hit", r.pole_hit}});
  }
  os << rows.dump(1) << '\n';
}

void export_trace(std::span<const TraceRecord> records, const std::filesystem::path& path,
                  TraceFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == TraceFormat::csv)
    write_trace_csv(out, records);
  else
    write_trace_json(out, records);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw EmptyFile("trace: no header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw UnsupportedFormat("trace: unexpected header '" + line + "'");
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    TraceRecord r;
    int pole = 0;
    unsigned long long n = 0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%lf,%lf,%lf,%d", &n, &r.d2, &r.delta_t,
                    &r.lyapunov, &r.residual, &r.ssnr_c, &r.ssnr_y, &pole) != 8)
      throw UnsupportedFormat("trace: malformed row '" + line + "'");
    r.n = static_cast<std::size_t>(n);
    r.pole_hit = pole != 0;
    out.push_back(r);
  }
  return out;
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  if (path.extension() == ".json") {
    const auto j = nlohmann::json::parse(in);
    std::vector<TraceRecord> out;
    for (const auto& row : j) {
      TraceRecord r;
      r.n = row.at("n").get<std::size_t>();
      r.d2 = row.at("d2").get<double>();
      r.delta_t = row.at("delta_t").get<double>();
      r.lyapunov = row.at("lyapunov").get<double>();
      r.residual = row.at("residual").get<double>();
      r.ssnr_c = row.at("ssnr_c").get<double>();
      r.ssnr_y = row.at("ssnr_y").get<double>();
      r.pole_hit = row.at("pole_hit").get<bool>();
      out.push_back(r);
    }
    return out;
  }
  return read_trace_csv(in);
}

// ---------------------------------------------------------------------------
// Numeric files

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& origin) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
      ++pos;
    if (pos >= text.size()) break;
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw UnsupportedFormat(origin + ": cannot parse number at offset " + std::to_string(pos));
    out.push_back(v);
    pos += static_cast<std::size_t>(end - begin);
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<double> read_numbers(const std::filesystem::path& path) {
  return parse_numbers(read_text(path), path.string());
}

MagnitudeSpec load_magnitudes(const std::filesystem::path& path) {
  auto values = read_numbers(path);
  if (values.empty()) throw EmptyFile(path.string() + " holds no magnitudes");
  return MagnitudeSpec(std::move(values));
}

CoefVec load_complex_vector(const std::filesystem::path& path) {
  const auto values = read_numbers(path);
  if (values.empty()) throw EmptyFile(path.string() + " holds no coefficients");
  if (values.size() % 2 != 0) throw UnsupportedFormat(path.string() + ": odd count of re,im values");
  CoefVec out(values.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(values[2 * i], values[2 * i + 1]);
  return out;
}

LinearTransform load_dense_transform(const std::filesystem::path& path) {
  std::istringstream text(read_text(path));
  std::vector<cplx> entries;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(text, line)) {
    const auto values = parse_numbers(line, path.string());
    if (values.empty()) continue;
    if (values.size() % 2 != 0)
      throw UnsupportedFormat(path.string() + ": row " + std::to_string(rows) + " has an odd value count");
    if (rows == 0) cols = values.size() / 2;
    if (values.size() / 2 != cols)
      throw BadShape(path.string() + ": ragged row " + std::to_string(rows));
    for (std::size_t k = 0; k < cols; ++k) entries.emplace_back(values[2 * k], values[2 * k + 1]);
    ++rows;
  }
  if (rows == 0) throw EmptyFile(path.string() + " holds no matrix");
  return make_dense(entries, rows, cols);
}

void write_dense_transform(const std::filesystem::path& path, std::span<const cplx> row_major,
                           std::size_t rows, std::size_t cols) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const cplx z = row_major[r * cols + c];
      out << (c ? "," : "") << fmt_double(z.real()) << ',' << fmt_double(z.imag());
    }
    out << '\n';
  }
}

}  // namespace agla::io
