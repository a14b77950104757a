#pragma once

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace skewpnn::cli {

// JSON config files for CLI11. A file holds either flat keys for the
// command being run or one object per command:
//   {"sigma": 0.5}   or   {"fit": {"sigma": 0.5}, "tune": {...}}
// to_config() writes the nested form, so a resolved-config echo can be fed
// straight back through --config.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string default_section = {}) : section_(std::move(default_section)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return to_json(*app, default_also).dump();
  }

  static nlohmann::json to_json(const CLI::App& app, bool default_also) {
    nlohmann::json opts = nlohmann::json::object();
    for (const CLI::Option* opt : app.get_options()) {
      if (!opt->get_configurable()) continue;
      const std::string key = key_of(*opt);
      if (key.empty() || key == "help" || key == "config") continue;
      if (opt->count() > 0) {
        if (opt->get_expected_min() == 0) {
          opts[key] = opt->as<bool>();
        } else if (opt->get_items_expected_max() > 1) {
          nlohmann::json arr = nlohmann::json::array();
          for (const auto& r : opt->results()) arr.push_back(typed(r));
          opts[key] = std::move(arr);
        } else {
          opts[key] = typed(opt->results().back());
        }
      } else if (default_also) {
        const std::string d = opt->get_default_str();
        if (opt->get_expected_min() == 0) {
          opts[key] = d == "true" || d == "1";
        } else {
          opts[key] = d.empty() ? nlohmann::json(nullptr) : typed(d);
        }
      }
    }
    if (app.get_parent() == nullptr) return opts;
    return nlohmann::json{{app.get_name(), std::move(opts)}};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      // null means "left at its default", as written by the echo.
      if (value.is_object()) {
        for (const auto& [inner, v] : value.items()) {
          if (!v.is_null()) items.push_back(item({key}, inner, v));
        }
      } else if (!value.is_null()) {
        items.push_back(item(section_.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{section_},
                             key, value));
      }
    }
    return items;
  }

 private:
  static std::string key_of(const CLI::Option& opt) {
    if (!opt.get_lnames().empty()) return opt.get_lnames().front();
    return opt.get_name(true, false);
  }

  // Numbers and booleans keep their JSON type in the echo.
  static nlohmann::json typed(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) {
        const auto as_int = static_cast<long long>(v);
        if (static_cast<double>(as_int) == v && s.find_first_of(".eE") == std::string::npos) {
          return as_int;
        }
        return v;
      }
    } catch (const std::exception&) {
    }
    return s;
  }

  static std::string cell(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config value for '" + where + "' must be a scalar or a list");
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name,
                              const nlohmann::json& value) {
    CLI::ConfigItem it;
    it.parents = std::move(parents);
    it.name = name;
    if (value.is_array()) {
      for (const auto& v : value) it.inputs.push_back(cell(v, name));
    } else {
      it.inputs.push_back(cell(value, name));
    }
    return it;
  }

  std::string section_;
};

}  // namespace skewpnn::cli
