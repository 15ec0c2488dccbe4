#ifndef TOPSTMIN_INSTANCE_IO_HPP
#define TOPSTMIN_INSTANCE_IO_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "topstmin/instance.hpp"

namespace topstmin {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string &what) : std::runtime_error(what) {}
};

struct ParseOptions {
    /// Reject a PHYSICAL section where some (i,j) lacks its reverse (j,i).
    bool require_symmetric_physical = false;
};

/// Line-oriented text format:
///
///   n <int>
///   m <int>
///   tmax <real>
///   <x> <y> <profit> <service>      (n lines; node 1 and node n carry 0 0)
///   MANDATORY
///   <ids...>                        (single line, may be empty)
///   PHYSICAL
///   <i> <j>                         (one line per removed arc)
///   LOGICAL
///   <i> <j>                         (one line per pair, i < j)
///   VARIANT
///   P | PL
///
/// A bare header plus node block (three-column node lines are accepted, the
/// service defaults to 0) parses as variant P with empty feature sections.
Instance parse_instance(std::string_view text, const ParseOptions &opts = {});

/// Canonical serialization; parse(write(x)) == x. Requires coordinates.
std::string write_instance(const Instance &inst);

Instance read_instance_file(const std::string &path, const ParseOptions &opts = {});
void write_instance_file(const Instance &inst, const std::string &path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace topstmin

#endif
