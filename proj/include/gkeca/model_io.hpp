#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "gkeca/pipeline.hpp"

namespace gkeca {

/// Model file layout (all integers and doubles little-endian, 64-bit unless
/// noted):
///
///   "GKECAMDL"  8-byte magic
///   u32         format version (kModelFormatVersion)
///   pipeline    image size, Gabor params, block size, kernel spec,
///               KECA options, class regularization
///   u64 N, u64 D, N labels (u64 length + UTF-8 bytes), N x D features
///   u64 k, k axis indices, k eigenvalues, N x k eigenvectors (row-major)
///   N eigenvalues (full spectrum), N gammas, N alignments, N rank indices
///   u64 requested k + 1 (0 when chosen by energy)
///   "END\n"     4-byte trailer
///
/// The class model is not stored; it is refitted from the training
/// embeddings on load, which reproduces it bit for bit.
inline constexpr std::uint32_t kModelFormatVersion = 1;

enum class ModelErrorKind { io, bad_magic, unsupported_version, truncated, corrupt };

class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ModelErrorKind kind() const { return kind_; }

private:
    ModelErrorKind kind_;
};

std::string encode_model(const TrainedPipeline& pipeline);
TrainedPipeline decode_model(const std::string& bytes);

void save_model(const TrainedPipeline& pipeline, const std::filesystem::path& path);
TrainedPipeline load_model(const std::filesystem::path& path);

}  // namespace gkeca
