#include "gkeca/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace gkeca {

std::string to_string(Role role) {
    switch (role) {
        case Role::train: return "train";
        case Role::positive_test: return "positive-test";
        case Role::negative_test: return "negative-test";
    }
    return "unknown";
}

std::optional<Role> parse_role(const std::string& token) {
    if (token == "train") return Role::train;
    if (token == "positive-test") return Role::positive_test;
    if (token == "negative-test") return Role::negative_test;
    return std::nullopt;
}

std::vector<const DatasetEntry*> LabeledDataset::with_role(Role role) const {
    std::vector<const DatasetEntry*> out;
    for (const auto& e : entries) {
        if (e.role == role) out.push_back(&e);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

LabeledDataset load_manifest(const std::filesystem::path& path, ImageSize size) {
    std::ifstream in(path);
    if (!in) throw ManifestError(ManifestErrorKind::missing_file, path.string() + ": cannot open manifest");

    std::string line;
    std::getline(in, line);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (split_commas(trim(line)) != std::vector<std::string>{"path", "label", "role"}) {
        throw ManifestError(ManifestErrorKind::bad_header, path.string() + ": header must be `path,label,role`");
    }

    const auto base = path.parent_path();
    LabeledDataset dataset;
    std::set<std::pair<std::string, Role>> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(line_no);
        auto fields = split_commas(trim(line));
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw ManifestError(ManifestErrorKind::malformed_row, where + ": expected `path,label,role`");
        }
        auto role = parse_role(fields[2]);
        if (!role) {
            throw ManifestError(ManifestErrorKind::unknown_role, where + ": unknown role '" + fields[2] + "'");
        }
        if (!seen.emplace(fields[0], *role).second) {
            throw ManifestError(ManifestErrorKind::duplicate_row,
                                where + ": duplicate row for '" + fields[0] + "' with role " + fields[2]);
        }
        std::filesystem::path image_path = fields[0];
        if (image_path.is_relative()) image_path = base / image_path;

        GrayImage image;
        try {
            image = load_pgm(image_path);
        } catch (const PgmError& err) {
            throw ManifestError(ManifestErrorKind::unreadable_image, where + ": " + err.what());
        }
        dataset.entries.push_back(DatasetEntry{fields[0], fields[1], *role,
                                               resize_bilinear(image, size.width, size.height)});
    }
    return dataset;
}

}  // namespace gkeca
