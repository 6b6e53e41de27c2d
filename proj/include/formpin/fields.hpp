#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "formpin/image.hpp"

namespace formpin {

enum class FieldKind { Printed, Handwritten, Unknown };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view s);  // throws InputError

/// A user-marked region of the template that should be cut out of every
/// aligned document.
struct FieldAnnotation {
  std::string name;
  Rect region;  // template coordinates
  FieldKind kind = FieldKind::Unknown;

  friend bool operator==(const FieldAnnotation&, const FieldAnnotation&) = default;
};

/// `{"fields":[{"name","x","y","w","h","kind"}]}`; kind defaults to unknown.
std::vector<FieldAnnotation> parse_fields(std::string_view json_text);
std::string format_fields(const std::vector<FieldAnnotation>& fields);
std::vector<FieldAnnotation> load_fields(const std::filesystem::path& path);
void save_fields(const std::vector<FieldAnnotation>& fields, const std::filesystem::path& path);

}  // namespace formpin
