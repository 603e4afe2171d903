#include "flowseg/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace flowseg {

namespace {

// Whitespace-delimited token; '#' starts a comment running to end of line.
std::string next_token(std::istream& in) {
    std::string token;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(c);
    }
    return token;
}

long parse_number(const std::string& token, const char* what) {
    if (token.empty()) throw CountMismatch(std::string("unexpected end of file reading ") + what);
    size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(token, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != token.size())
        throw ParseError(std::string("bad ") + what + " '" + token + "'");
    return value;
}

}  // namespace

LabelMap read_pgm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    const std::string magic = next_token(in);
    if (magic != "P2")
        throw HeaderError("'" + path + "': expected ASCII PGM magic 'P2', got '" + magic + "'");
    const long width = parse_number(next_token(in), "width");
    const long height = parse_number(next_token(in), "height");
    const long maxval = parse_number(next_token(in), "maxval");
    if (width < 1 || height < 1) throw HeaderError("'" + path + "': dimensions must be positive");
    if (maxval < 1 || maxval > 65535)
        throw HeaderError("'" + path + "': maxval must be in 1..65535");

    LabelMap map(static_cast<int>(width), static_cast<int>(height), 0);
    for (int i = 0; i < map.size(); ++i) {
        const long value = parse_number(next_token(in), "pixel value");
        if (value < 0 || value > maxval)
            throw ParseError("pixel " + std::to_string(i) + " value " + std::to_string(value) +
                             " outside 0.." + std::to_string(maxval));
        map.at(i) = static_cast<int>(value);
    }
    if (!next_token(in).empty())
        throw CountMismatch("'" + path + "': data beyond the declared " +
                            std::to_string(map.size()) + " pixels");
    return map;
}

void write_pgm(const LabelMap& map, const std::string& path) {
    const int maxval = std::max(1, map.max_label());
    if (maxval > 65535) throw Error("labels exceed the PGM maxval limit of 65535");

    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "P2\n" << map.width() << " " << map.height() << "\n" << maxval << "\n";
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (x > 0) out << ' ';
            out << map.at(x, y);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace flowseg
