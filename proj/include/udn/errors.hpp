#pragma once

#include <stdexcept>
#include <string>

namespace udn {

enum class Errc {
    parse_error,
    unknown_key,
    exponent_out_of_range,
    ratio_out_of_range,
    negative_density,
    domain_error,
    infeasible,
    no_solution,
    invalid_argument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::parse_error: return "ParseError";
        case Errc::unknown_key: return "UnknownKey";
        case Errc::exponent_out_of_range: return "ExponentOutOfRange";
        case Errc::ratio_out_of_range: return "RatioOutOfRange";
        case Errc::negative_density: return "NegativeDensity";
        case Errc::domain_error: return "DomainError";
        case Errc::infeasible: return "Infeasible";
        case Errc::no_solution: return "NoSolution";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace udn
