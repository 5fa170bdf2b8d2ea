#include "pulsefringe/core/keyvalue.hpp"
#include "pulsefringe/core/errors.hpp"

#include <charconv>
#include <fstream>

namespace pf {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValue KeyValue::parse(std::istream& in, const std::string& source)
{
    KeyValue kv;
    kv.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.values_[key] = val;
    }
    return kv;
}

KeyValue KeyValue::load(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw InvalidArgument("cannot open " + path);
    return parse(f, path);
}

std::optional<std::string> KeyValue::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

std::optional<double> KeyValue::number(const std::string& key) const
{
    auto v = get(key);
    if (!v)
        return std::nullopt;
    double out = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
        throw InvalidArgument(source_ + ": key '" + key + "': not a number: '" + *v + "'");
    return out;
}

double KeyValue::number_or(const std::string& key, double fallback) const
{
    auto v = number(key);
    return v ? *v : fallback;
}

std::vector<std::string> KeyValue::keys() const
{
    std::vector<std::string> out;
    for (auto& [k, v] : values_)
        out.push_back(k);
    return out;
}

} // namespace pf
