#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace coulgas {

// Flat sectioned text configuration:
//   [section]
//   key = value        # comment
// Unknown sections or keys are rejected against the schema below.
class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;
    std::vector<long> get_long_list(const std::string& section, const std::string& key,
                                    const std::vector<long>& fallback) const;

    // canonical "section.key = value" lines, sorted; basis of the config hash
    std::string canonical() const;
    std::uint64_t hash() const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    void validate_schema() const;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace coulgas
