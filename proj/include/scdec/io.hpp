#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

#include "scdec/hamiltonian.hpp"
#include "scdec/lattice.hpp"
#include "scdec/noise.hpp"

namespace scdec {

// Parse failure with the offending 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Line-oriented syndrome format: header (magic, d, layers) followed by the
// time-differenced +1/-1 layers, one line per layer per sector.
std::string write_syndrome(const CodeLayout& layout, const SyndromeTensor& tensor);
SyndromeTensor read_syndrome(std::istream& in, int& d_out);

// Line-oriented error-history format (frames as IXZY strings, measurement
// flips as 0/1 bits).
std::string write_history(const ErrorHistory& history);
ErrorHistory read_history(std::istream& in);

// Detected-error listing emitted by the decode command: sparse per-layer data
// events and per-gap measurement events for each decoded sector.
std::string write_events(const DetectedErrors& detected);

// Key-value config text: `key = value` lines, '#' comments, blank lines
// ignored. Returns key -> (line, value); duplicate keys are an error.
std::map<std::string, std::pair<int, std::string>> parse_key_values(std::istream& in);

}  // namespace scdec
