#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anfsat {

using Var = std::uint32_t; // variables are 1-based; 0 is never a valid index

enum class Tri : std::int8_t { False = 0, True = 1, Unassigned = -1 };

/// A variable together with the value it is (to be) assigned.
struct Literal {
    Var var = 0;
    bool value = true;

    friend bool operator==(const Literal&, const Literal&) = default;
};

using LitVec = std::vector<Literal>;

inline Literal pos(Var v) { return {v, true}; }
inline Literal neg(Var v) { return {v, false}; }

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace anfsat
