#ifndef NETWAVE_TESTS_HELPERS_HPP
#define NETWAVE_TESTS_HELPERS_HPP

#include <string>

#include "netwave/netfile.hpp"
#include "netwave/network.hpp"

#ifndef NETWAVE_DATA_DIR
#error "NETWAVE_DATA_DIR must point at the bundled network files"
#endif

namespace testnets {

inline std::string data_path(const std::string& name) {
    return std::string(NETWAVE_DATA_DIR) + "/" + name;
}

/// One unit pipe between two boundary ends, a=b=c=1.
inline netwave::Network single_edge() {
    netwave::NetworkSpec s;
    s.vertices = {"v1", "v2"};
    s.edges = {{"e1", "v1", "v2", 1.0, 1.0, 1.0, 1.0}};
    return build_network(s);
}

/// Star with one interior vertex v2 and three boundary legs.
inline netwave::Network star3() {
    netwave::NetworkSpec s;
    s.vertices = {"v1", "v2", "v3", "v4"};
    s.edges = {{"e1", "v1", "v2", 1.0, 1.0, 1.0, 1.0},
               {"e2", "v2", "v3", 1.0, 1.0, 1.0, 1.0},
               {"e3", "v2", "v4", 1.0, 1.0, 1.0, 1.0}};
    return build_network(s);
}

/// The seven-pipe test network bundled with the project.
inline netwave::Network seven_pipe() {
    return build_network(netwave::parse_network_file(data_path("seven_pipe.net")));
}

}  // namespace testnets

#endif
