#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkeca/image.hpp"

namespace gkeca {

enum class Role { train, positive_test, negative_test };

std::string to_string(Role role);
/// Accepts "train", "positive-test", "negative-test".
std::optional<Role> parse_role(const std::string& token);

struct DatasetEntry {
    std::string path;
    std::string label;
    Role role = Role::train;
    GrayImage image;
};

struct LabeledDataset {
    std::vector<DatasetEntry> entries;

    std::vector<const DatasetEntry*> with_role(Role role) const;
};

enum class ManifestErrorKind { missing_file, bad_header, malformed_row, unknown_role, unreadable_image, duplicate_row };

class ManifestError : public std::runtime_error {
public:
    ManifestError(ManifestErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ManifestErrorKind kind() const { return kind_; }

private:
    ManifestErrorKind kind_;
};

/// CSV manifest with header `path,label,role`. Relative image paths resolve
/// against the manifest's directory. Every image is resized to `size`.
LabeledDataset load_manifest(const std::filesystem::path& path, ImageSize size = {});

}  // namespace gkeca
