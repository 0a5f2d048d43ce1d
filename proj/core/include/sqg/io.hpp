#pragma once

#include "sqg/sg.hpp"

#include <string>

namespace sqg {

// Text formats: line-oriented key/value data in bracketed sections, specified
// in docs/format.md. Parsers accept sections in any order and raise InputError
// with a line number; serializers emit the canonical section order so output
// is byte-stable.

PreSquareGroup parse_psg(const std::string& text);
std::string format_psg(const PreSquareGroup& m);

SquareGroup parse_sg(const std::string& text);
std::string format_sg(const SquareGroup& q);

// A homomorphism with an optional involution on its target.
struct MapDoc {
  AbHom map;
  bool has_involution = false;
  AbHom involution;
};
MapDoc parse_map(const std::string& text);
std::string format_map(const AbHom& f, const AbHom* involution = nullptr);

KTriple parse_target(const std::string& text);
std::string format_target(const KTriple& t);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sqg
