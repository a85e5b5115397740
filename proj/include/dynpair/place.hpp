#pragma once

#include <dynpair/rational.hpp>

#include <string>

namespace dynpair {

/// A place of the rationals: the archimedean absolute value or a p-adic one.
struct Place {
    bool arch = true;
    Int prime = 0;

    static Place archimedean() { return Place{}; }

    static Place finite(Int p) {
        if (p < 2)
            throw std::invalid_argument("finite place needs a prime >= 2");
        return Place{false, std::move(p)};
    }

    bool operator==(const Place& o) const {
        return arch == o.arch && (arch || prime == o.prime);
    }

    std::string name() const { return arch ? "arch" : prime.get_str(); }
};

}  // namespace dynpair
