#include "flowseg/motion_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flowseg/angles.hpp"

namespace flowseg {

namespace {

bool legal_extent(int e) { return e == 1 || e == 2 || e == 4; }

std::string describe(const BlockMotionRecord& r) {
    std::ostringstream os;
    os << "record frame=" << r.frame << " block=(" << r.block_x << "," << r.block_y
       << ") extent=" << r.block_w << "x" << r.block_h;
    return os.str();
}

// Reads the next line that contains more than whitespace; returns false at EOF.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

double parse_real(const std::string& token, const char* what, int line_no) {
    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != token.size() || !std::isfinite(value))
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + token + "'");
    return value;
}

long parse_int(const std::string& token, const char* what, int line_no) {
    size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(token, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != token.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + token + "'");
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) fields.push_back(tok);
    return fields;
}

}  // namespace

MotionField::MotionField(int width, int height, std::vector<MotionVec> vectors)
    : width_(width), height_(height), vectors_(std::move(vectors)) {
    if (width < 1 || height < 1)
        throw DimensionMismatch("motion field dimensions must be positive");
    if (vectors_.size() != static_cast<size_t>(width) * height)
        throw DimensionMismatch("motion field has " + std::to_string(vectors_.size()) +
                                " vectors for a " + std::to_string(width) + "x" +
                                std::to_string(height) + " grid");
    magnitude_.resize(vectors_.size());
    orientation_.resize(vectors_.size());
    for (size_t i = 0; i < vectors_.size(); ++i) {
        const MotionVec& v = vectors_[i];
        magnitude_[i] = std::hypot(v.dx, v.dy);
        orientation_[i] =
            magnitude_[i] == 0.0 ? 0.0 : wrap_degrees(rad_to_deg(std::atan2(v.dy, v.dx)));
    }
}

MotionField MotionField::zero(int width, int height) {
    if (width < 1 || height < 1)
        throw DimensionMismatch("motion field dimensions must be positive");
    return MotionField(width, height,
                       std::vector<MotionVec>(static_cast<size_t>(width) * height));
}

std::vector<FrameGrid> replicate(std::span<const BlockMotionRecord> records, int width,
                                 int height, int frame_count) {
    if (width < 1 || height < 1)
        throw DimensionMismatch("grid dimensions must be positive");
    if (frame_count < 1) throw DimensionMismatch("frame count must be positive");

    const size_t cells = static_cast<size_t>(width) * height;
    std::vector<FrameGrid> frames(frame_count, FrameGrid(cells));
    std::vector<std::vector<char>> covered(frame_count, std::vector<char>(cells, 0));

    for (const BlockMotionRecord& r : records) {
        if (r.frame < 0 || r.frame >= frame_count)
            throw OutOfBounds(describe(r) + ": frame outside 0.." + std::to_string(frame_count - 1));
        if (!legal_extent(r.block_w) || !legal_extent(r.block_h))
            throw OutOfBounds(describe(r) + ": extent must be 1, 2, or 4 blocks");
        if (r.block_x < 0 || r.block_y < 0 || r.block_x + r.block_w > width ||
            r.block_y + r.block_h > height)
            throw OutOfBounds(describe(r) + ": exceeds " + std::to_string(width) + "x" +
                              std::to_string(height) + " grid");
        for (int y = r.block_y; y < r.block_y + r.block_h; ++y)
            for (int x = r.block_x; x < r.block_x + r.block_w; ++x) {
                const size_t i = static_cast<size_t>(y) * width + x;
                if (covered[r.frame][i])
                    throw OverlapError(describe(r) + ": cell (" + std::to_string(x) + "," +
                                       std::to_string(y) + ") already covered");
                covered[r.frame][i] = 1;
                frames[r.frame][i] = {r.dx, r.dy};
            }
    }
    return frames;
}

MotionField temporal_mean(std::span<const FrameGrid> frames, int width, int height) {
    if (frames.empty()) throw DimensionMismatch("temporal mean needs at least one frame");
    const size_t cells = static_cast<size_t>(width) * height;
    for (const FrameGrid& f : frames)
        if (f.size() != cells)
            throw DimensionMismatch("frame has " + std::to_string(f.size()) + " cells, expected " +
                                    std::to_string(cells));
    std::vector<MotionVec> mean(cells);
    for (const FrameGrid& f : frames)
        for (size_t i = 0; i < cells; ++i) {
            mean[i].dx += f[i].dx;
            mean[i].dy += f[i].dy;
        }
    const double inv = 1.0 / static_cast<double>(frames.size());
    for (MotionVec& v : mean) {
        v.dx *= inv;
        v.dy *= inv;
    }
    return MotionField(width, height, std::move(mean));
}

MotionField load_mean_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    int line_no = 0;
    if (!next_content_line(in, line, line_no)) throw HeaderError("'" + path + "' is empty");
    const auto header = split_fields(line);
    if (header.size() != 3 || header[0] != "MVF1")
        throw HeaderError("line " + std::to_string(line_no) +
                          ": expected 'MVF1 <width> <height>', got '" + line + "'");
    const long w = parse_int(header[1], "width", line_no);
    const long h = parse_int(header[2], "height", line_no);
    if (w < 1 || h < 1)
        throw HeaderError("line " + std::to_string(line_no) + ": dimensions must be positive");

    const size_t cells = static_cast<size_t>(w) * static_cast<size_t>(h);
    std::vector<MotionVec> vectors;
    vectors.reserve(cells);
    for (size_t i = 0; i < cells; ++i) {
        if (!next_content_line(in, line, line_no))
            throw CountMismatch("'" + path + "': " + std::to_string(i) + " data lines, expected " +
                                std::to_string(cells));
        const auto fields = split_fields(line);
        if (fields.size() != 2)
            throw ParseError("line " + std::to_string(line_no) + ": expected '<dx> <dy>', got '" +
                             line + "'");
        vectors.push_back(
            {parse_real(fields[0], "dx", line_no), parse_real(fields[1], "dy", line_no)});
    }
    if (next_content_line(in, line, line_no))
        throw CountMismatch("'" + path + "': data beyond the declared " + std::to_string(cells) +
                            " cells at line " + std::to_string(line_no));
    return MotionField(static_cast<int>(w), static_cast<int>(h), std::move(vectors));
}

void save_mean_field(const MotionField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "MVF1 " << field.width() << " " << field.height() << "\n";
    char buf[80];
    for (const MotionVec& v : field.vectors()) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.dx, v.dy);
        out << buf;
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

FrameRecords load_frame_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    int line_no = 0;
    if (!next_content_line(in, line, line_no)) throw HeaderError("'" + path + "' is empty");
    const auto header = split_fields(line);
    if (header.size() != 4 || header[0] != "FMV1")
        throw HeaderError("line " + std::to_string(line_no) +
                          ": expected 'FMV1 <width> <height> <frames>', got '" + line + "'");
    FrameRecords result;
    result.width = static_cast<int>(parse_int(header[1], "width", line_no));
    result.height = static_cast<int>(parse_int(header[2], "height", line_no));
    result.frame_count = static_cast<int>(parse_int(header[3], "frame count", line_no));
    if (result.width < 1 || result.height < 1 || result.frame_count < 1)
        throw HeaderError("line " + std::to_string(line_no) +
                          ": dimensions and frame count must be positive");

    while (next_content_line(in, line, line_no)) {
        const auto fields = split_fields(line);
        if (fields.size() != 7)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected '<frame> <bx> <by> <bw> <bh> <dx> <dy>', got '" + line +
                             "'");
        BlockMotionRecord r;
        r.frame = static_cast<int>(parse_int(fields[0], "frame", line_no));
        r.block_x = static_cast<int>(parse_int(fields[1], "block x", line_no));
        r.block_y = static_cast<int>(parse_int(fields[2], "block y", line_no));
        r.block_w = static_cast<int>(parse_int(fields[3], "block width", line_no));
        r.block_h = static_cast<int>(parse_int(fields[4], "block height", line_no));
        r.dx = parse_real(fields[5], "dx", line_no);
        r.dy = parse_real(fields[6], "dy", line_no);
        if (r.frame < 0 || r.frame >= result.frame_count)
            throw ParseError("line " + std::to_string(line_no) + ": frame outside 0.." +
                             std::to_string(result.frame_count - 1));
        if (!legal_extent(r.block_w) || !legal_extent(r.block_h))
            throw ParseError("line " + std::to_string(line_no) +
                             ": block extent must be 1, 2, or 4");
        if (r.block_x < 0 || r.block_y < 0 || r.block_x + r.block_w > result.width ||
            r.block_y + r.block_h > result.height)
            throw ParseError("line " + std::to_string(line_no) + ": record exceeds the " +
                             std::to_string(result.width) + "x" + std::to_string(result.height) +
                             " grid");
        result.records.push_back(r);
    }
    return result;
}

MotionField mean_field_from_records(const FrameRecords& input) {
    const auto frames = replicate(input.records, input.width, input.height, input.frame_count);
    return temporal_mean(frames, input.width, input.height);
}

}  // namespace flowseg
