/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_IO_HH
#define FPP_IO_HH

#include <fpp/problem.hh>
#include <fpp/structure.hh>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fpp
{
    using Json = nlohmann::json;

    // Colour tokens seen while reading. A frozen palette rejects new tokens.
    struct PaletteContext
    {
        Palette vertex, edge;
        bool frozen = false;
    };

    auto signature_from_json(const Json & j) -> Signature;
    auto signature_to_json(const Signature & sig) -> Json;

    // Without a context, colour keys are rejected.
    auto structure_from_json(const Json & j, PaletteContext * palettes = nullptr) -> Structure;
    auto structure_from_json(const Json & j, const Signature & sig, PaletteContext * palettes) -> Structure;

    // Colours are written only when palettes are given, and only for
    // palettes with more than one colour.
    auto structure_to_json(const Structure & s, const PaletteContext * palettes = nullptr) -> Json;

    // Files list relation names in sorted order; this reorders the symbols
    // of s to match sig, which must hold the same names and arities.
    auto align_signature(const Structure & s, const Signature & sig) -> Structure;

    auto problem_from_json(const Json & j) -> Problem;
    auto problem_to_json(const Problem & p) -> Json;

    // Either a builtin name or a path to a problem file.
    auto load_problem(const std::string & name_or_path) -> Problem;

    // Part indices are 1-based in files and 0-based in memory.
    auto partition_from_json(const Json & j, const Structure & s) -> std::vector<std::size_t>;
    auto partition_to_json(const std::vector<std::size_t> & parts, const Structure & s) -> Json;

    auto read_json_file(const std::filesystem::path & p) -> Json;
    void write_json_file(const std::filesystem::path & p, const Json & j);
    auto read_text_file(const std::filesystem::path & p) -> std::string;
    void write_text_file(const std::filesystem::path & p, const std::string & text);

    // The exact text a canonical file holds.
    auto dump_canonical(const Json & j) -> std::string;
}

#endif
