#pragma once

// Signal ingestion, target construction, initialization and trace export
// for the command-line front end.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "agla/linops.hpp"
#include "agla/magproj.hpp"
#include "agla/trace.hpp"
#include "agla/types.hpp"

namespace agla::io {

class UnsupportedFormat : public Error {
public:
  using Error::Error;
};

class EmptyFile : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Seeded generator with platform-independent uniform and normal variates
/// (the std distributions differ between standard libraries).
class Rng {
public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();
  double normal();

private:
  std::mt19937_64 engine_;
};

struct WavData {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  /// Mono samples; multichannel input is averaged across channels.
  std::vector<double> samples;
};

/// Reads PCM 16/24-bit or IEEE float32 WAV. PCM is scaled to [-1, 1].
WavData read_wav(const std::filesystem::path& path);
/// Writes mono IEEE float32 WAV.
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate);

/// Trims or zero-pads to `length` samples.
RealVec fit_length(std::span<const double> x, std::size_t length);

/// Synthetic test signals: "chirp", "multitone", "noise-burst".
RealVec generate_signal(const std::string& name, std::uint64_t seed, std::size_t length);

/// Reads a WAV file or a generator spec "name[,seed=S][,L=N]" into a real
/// signal of the given length.
SignalVec ingest_signal(const std::string& source, std::size_t length,
                        std::optional<std::uint64_t> default_seed = std::nullopt);

/// s = |T x| component-wise.
MagnitudeSpec make_target(const LinearTransform& t, std::span<const cplx> x);

enum class InitMode { zero_phase, random_phase, provided };

/// zero_phase: c_0 = s; random_phase: c_0 = s exp(i theta) with theta uniform
/// from the seeded generator; provided: `provided` checked for length.
CoefVec init_coeffs(InitMode mode, const MagnitudeSpec& s, std::uint64_t seed = 0,
                    std::span<const cplx> provided = {});

enum class TraceFormat { csv, json };

inline constexpr const char* kTraceHeader = "n,d2,delta_t,lyapunov,residual,ssnr_c,ssnr_y,pole_hit";

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> records);
void write_trace_json(std::ostream& os, std::span<const TraceRecord> records);
void export_trace(std::span<const TraceRecord> records, const std::filesystem::path& path,
                  TraceFormat format);
/// Inverse of write_trace_csv (d2_y is not exported and reads back as 0).
std::vector<TraceRecord> read_trace_csv(std::istream& is);
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);

/// Every number in the file, separated by commas, whitespace or newlines.
std::vector<double> read_numbers(const std::filesystem::path& path);
MagnitudeSpec load_magnitudes(const std::filesystem::path& path);
/// Complex vector stored as re,im pairs.
CoefVec load_complex_vector(const std::filesystem::path& path);
/// Dense transform from a CSV with one matrix row per line, each line holding
/// re,im pairs (row-major).
LinearTransform load_dense_transform(const std::filesystem::path& path);
void write_dense_transform(const std::filesystem::path& path, std::span<const cplx> row_major,
                           std::size_t rows, std::size_t cols);

}  // namespace agla::io
