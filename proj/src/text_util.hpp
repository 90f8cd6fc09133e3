#ifndef CEISCHED_TEXT_UTIL_HPP
#define CEISCHED_TEXT_UTIL_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ceisched::detail {

inline std::string_view trim(std::string_view s)
{
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return out;
}

inline std::runtime_error line_error(std::size_t line_no, const std::string& what)
{
    return std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    s = trim(s);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<long long> parse_int_fields(std::string_view line, std::size_t expected, std::size_t line_no)
{
    auto parts = split(line, ',');
    if (parts.size() != expected)
        throw line_error(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                      std::to_string(parts.size()));
    std::vector<long long> values(expected);
    for (std::size_t i = 0; i < expected; ++i)
        if (!parse_number(parts[i], values[i]))
            throw line_error(line_no, "malformed integer '" + std::string(parts[i]) + "'");
    return values;
}

/// Shortest representation that round-trips to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace ceisched::detail

#endif
