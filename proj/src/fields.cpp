#include "formpin/fields.hpp"

#include <fstream>
#include <sstream>

#include "formpin/error.hpp"
#include "json.hpp"

namespace formpin {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Printed:
      return "printed";
    case FieldKind::Handwritten:
      return "handwritten";
    case FieldKind::Unknown:
      break;
  }
  return "unknown";
}

FieldKind parse_field_kind(std::string_view s) {
  if (s == "printed") return FieldKind::Printed;
  if (s == "handwritten") return FieldKind::Handwritten;
  if (s == "unknown") return FieldKind::Unknown;
  throw InputError("unknown field kind '" + std::string(s) + "'");
}

std::vector<FieldAnnotation> parse_fields(std::string_view json_text) {
  std::vector<FieldAnnotation> out;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& f : j.at("fields")) {
      FieldAnnotation a;
      a.name = f.at("name").get<std::string>();
      a.region = {f.at("x").get<int>(), f.at("y").get<int>(), f.at("w").get<int>(),
                  f.at("h").get<int>()};
      a.kind = parse_field_kind(f.value("kind", std::string("unknown")));
      if (a.region.w < 1 || a.region.h < 1) {
        throw InputError("field '" + a.name + "' has an empty region");
      }
      out.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed fields file: ") + e.what());
  }
  return out;
}

std::string format_fields(const std::vector<FieldAnnotation>& fields) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fields) {
    arr.push_back({{"name", f.name},
                   {"x", f.region.x},
                   {"y", f.region.y},
                   {"w", f.region.w},
                   {"h", f.region.h},
                   {"kind", std::string(to_string(f.kind))}});
  }
  return nlohmann::json{{"fields", arr}}.dump(1) + "\n";
}

std::vector<FieldAnnotation> load_fields(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fields(ss.str());
}

void save_fields(const std::vector<FieldAnnotation>& fields, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_fields(fields);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace formpin
