#include "dsplit/methods.hpp"

#include <algorithm>
#include <filesystem>

namespace dsplit {

MethodSpec resolve_method(std::string_view name_or_path) {
  const auto& schemes = builtin_scheme_names();
  if (std::find(schemes.begin(), schemes.end(), name_or_path) != schemes.end()) return load_scheme(name_or_path);
  const auto& tableaux = builtin_tableau_names();
  if (std::find(tableaux.begin(), tableaux.end(), name_or_path) != tableaux.end())
    return builtin_tableau(name_or_path);
  const std::filesystem::path path{std::string(name_or_path)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) {
    auto contents = load_scheme_file(path);
    return std::visit([](auto&& x) -> MethodSpec { return std::move(x); }, std::move(contents));
  }
  throw LookupError("unknown method '" + std::string(name_or_path) +
                    "' (not a bundled scheme, bundled tableau, or readable scheme file)");
}

std::string method_name(const MethodSpec& spec) {
  return std::visit([](const auto& m) { return m.name; }, spec);
}

int method_evals_per_step(const MethodSpec& spec) {
  if (const auto* s = std::get_if<SplittingScheme>(&spec)) return s->evals_per_step();
  if (const auto* t = std::get_if<ButcherTableau>(&spec)) return static_cast<int>(t->stages);
  return static_cast<int>(std::get<LowStorageScheme>(spec).stages());
}

bool method_is_complex(const MethodSpec& spec) {
  if (const auto* s = std::get_if<SplittingScheme>(&spec)) return s->complex_coeffs;
  if (const auto* t = std::get_if<ButcherTableau>(&spec)) return t->is_complex();
  return to_butcher(std::get<LowStorageScheme>(spec)).is_complex();
}

}  // namespace dsplit
