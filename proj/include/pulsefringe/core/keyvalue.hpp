#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pf {

// Flat "key = value" text. '#' starts a comment. Keys are unique.
class KeyValue {
public:
    static KeyValue parse(std::istream& in, const std::string& source = "<stream>");
    static KeyValue load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    // Throws InvalidArgument naming the key on a malformed number.
    std::optional<double> number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }
    std::vector<std::string> keys() const;
    const std::string& source() const { return source_; }

private:
    std::map<std::string, std::string> values_;
    std::string source_;
};

} // namespace pf
