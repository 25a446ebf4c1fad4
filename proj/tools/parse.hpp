#pragma once

// Comma-separated number lists for the command-line tools.

#include <cctype>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman::cli {

inline std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t;
        for (char c : item)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline double parse_real(const std::string& t) {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("not a number: " + t);
    return v;
}

inline std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    for (const auto& t : split_commas(text)) out.push_back(parse_real(t));
    return out;
}

/// Accepts 0.5, -0.2i, i, 0.3+0.2i, 1e-3-4i.
inline std::complex<double> parse_complex(const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty complex number");
    if (t.back() != 'i') return parse_real(t);
    const std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

inline std::vector<std::complex<double>> parse_complexes(const std::string& text) {
    std::vector<std::complex<double>> out;
    for (const auto& t : split_commas(text)) out.push_back(parse_complex(t));
    return out;
}

}  // namespace bergman::cli
