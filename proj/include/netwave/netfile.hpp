#ifndef NETWAVE_NETFILE_HPP
#define NETWAVE_NETFILE_HPP

#include <string>

#include "netwave/network.hpp"

namespace netwave {

/// Parses the line-oriented network format:
///   # comment
///   alpha <number>
///   vertex id=<id>
///   edge id=<id> tail=<id> head=<id> length=<num> a=<num> b=<num> c=<num>
/// Errors carry line numbers and the offending field.
NetworkSpec parse_network_text(const std::string& text);
NetworkSpec parse_network_file(const std::string& path);

std::string serialize_network(const NetworkSpec& spec);

/// Number formatting for CSV output: '.' decimal point, 17 significant
/// digits.
std::string format_number(double x);

}  // namespace netwave

#endif
