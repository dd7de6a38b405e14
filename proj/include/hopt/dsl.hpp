#pragma once

// The .hopt language: models, objects, morphism declarations, towers and
// check statements.
//
//   model finset;
//   object A = {0,1};
//   morphism f : A -> A = {0->1, 1->0};
//   morphism g : A -> A = f ; f;
//   check enriched max_size=2;
//
// ';' inside a morphism expression is sequential composition (f ; g is g
// after f) and binds looser than '*'.

#include "hopt/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hopt::dsl {

struct Pos {
    int line = 1;
    int column = 1;
};

struct ObjAst {
    enum class Kind { name, unit, tensor, hom };
    Kind kind = Kind::unit;
    std::string name;
    std::vector<ObjAst> parts;
    Pos pos;
};

struct Literal {
    bool matrix = false;
    std::vector<std::pair<std::string, std::string>> pairs; // x -> y
    std::vector<std::vector<std::string>> rows;             // rationals as text
};

struct MorAst {
    enum class Kind { name, then, tensor, id, braid, kappa, seq, par, curry, eval, literal };
    Kind kind = Kind::name;
    std::string name;
    std::vector<ObjAst> objects;
    std::vector<MorAst> parts;
    Literal literal;
    Pos pos;
};

struct Stmt {
    enum class Kind { model, object, morphism, tower, check };
    Kind kind = Kind::model;
    std::string name; // model, object, morphism or tower name; suite for check
    Pos pos;
    // object
    std::vector<std::string> elements;
    std::optional<std::uint64_t> dim;
    // morphism
    std::optional<ObjAst> dom;
    std::optional<ObjAst> cod;
    std::optional<MorAst> body;
    // tower
    std::vector<std::string> layers;
    // check
    std::vector<std::pair<std::string, std::string>> options;
};

struct Program {
    std::vector<Stmt> stmts;
};

/// Throws ParseError with the position and the expected tokens.
Program parse(const std::string& source);

std::string render(const ObjAst& o);
std::string render(const MorAst& m);

} // namespace hopt::dsl
