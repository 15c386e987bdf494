#include "sdeqr/render.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "sdeqr/qrencode.hpp"

namespace sdeqr::render {

namespace {

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string &what) {
    throw Error(Errc::MalformedInput, what + " at line " + std::to_string(line) +
                                          ", column " + std::to_string(column));
}

// Dark/light grid with the quiet zone stripped off and verified light, and
// function annotations restored from the version's pattern template.
qr::ModuleMatrix from_grid(const std::vector<std::vector<bool>> &grid, int quiet_zone) {
    int total = static_cast<int>(grid.size());
    int side = total - 2 * quiet_zone;
    if (side < 21)
        throw Error(Errc::MalformedInput,
                    "grid too small for a symbol with a " +
                        std::to_string(quiet_zone) + "-module quiet zone");
    int version = qr::version_from_side(side);

    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c) {
            bool border = r < quiet_zone || r >= quiet_zone + side || c < quiet_zone ||
                          c >= quiet_zone + side;
            if (border && grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])
                fail_at(static_cast<std::size_t>(r + 1), static_cast<std::size_t>(c + 1),
                        "dark module inside the quiet zone");
        }

    qr::ModuleMatrix reference = qr::build_function_patterns(version);
    qr::ModuleMatrix matrix(side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            bool dark = grid[static_cast<std::size_t>(r + quiet_zone)]
                            [static_cast<std::size_t>(c + quiet_zone)];
            if (reference.is_function(r, c))
                matrix.set_function(r, c, dark);
            else
                matrix.set_dark(r, c, dark);
        }
    return matrix;
}

std::string render_pbm(const qr::ModuleMatrix &m, int quiet_zone) {
    int total = m.size() + 2 * quiet_zone;
    std::string out = "P1\n" + std::to_string(total) + " " + std::to_string(total) + "\n";
    out.reserve(out.size() + static_cast<std::size_t>(total) * (total + 1));
    for (int r = 0; r < total; ++r) {
        for (int c = 0; c < total; ++c) {
            int row = r - quiet_zone;
            int col = c - quiet_zone;
            bool dark = row >= 0 && row < m.size() && col >= 0 && col < m.size() &&
                        m.dark(row, col);
            out += dark ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

std::string render_txt(const qr::ModuleMatrix &m, int quiet_zone) {
    int total = m.size() + 2 * quiet_zone;
    std::string out;
    out.reserve(static_cast<std::size_t>(total) * (total + 1));
    for (int r = 0; r < total; ++r) {
        for (int c = 0; c < total; ++c) {
            int row = r - quiet_zone;
            int col = c - quiet_zone;
            bool dark = row >= 0 && row < m.size() && col >= 0 && col < m.size() &&
                        m.dark(row, col);
            out += dark ? '#' : '.';
        }
        out += '\n';
    }
    return out;
}

std::string render_svg(const qr::ModuleMatrix &m, int quiet_zone) {
    int total = m.size() + 2 * quiet_zone;
    std::string path;
    for (int r = 0; r < m.size(); ++r)
        for (int c = 0; c < m.size(); ++c)
            if (m.dark(r, c))
                path += "M" + std::to_string(c + quiet_zone) + " " +
                        std::to_string(r + quiet_zone) + "h1v1h-1z";
    std::string t = std::to_string(total);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
           t + " " + t +
           "\" shape-rendering=\"crispEdges\">\n"
           "<rect width=\"" +
           t + "\" height=\"" + t +
           "\" fill=\"#ffffff\"/>\n"
           "<path d=\"" +
           path + "\" fill=\"#000000\"/>\n</svg>\n";
}

std::string render_json(const qr::ModuleMatrix &m) {
    nlohmann::json modules = nlohmann::json::array();
    for (int r = 0; r < m.size(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.size(); ++c)
            row.push_back(m.dark(r, c) ? 1 : 0);
        modules.push_back(std::move(row));
    }
    nlohmann::json j;
    j["version"] = qr::version_from_side(m.size());
    j["size"] = m.size();
    j["modules"] = std::move(modules);
    return j.dump(2) + "\n";
}

qr::ModuleMatrix parse_pbm(std::string_view data, int quiet_zone) {
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    auto advance = [&]() {
        if (data[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    };
    auto skip_space = [&]() {
        while (pos < data.size()) {
            if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                advance();
            } else if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n')
                    advance();
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() {
        skip_space();
        if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
            fail_at(line, column, "expected an integer");
        long value = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            value = value * 10 + (data[pos] - '0');
            if (value > 1000000)
                fail_at(line, column, "dimension out of range");
            advance();
        }
        return static_cast<int>(value);
    };

    skip_space();
    if (data.size() - pos < 2 || data[pos] != 'P' || data[pos + 1] != '1')
        fail_at(line, column, "missing P1 magic");
    advance();
    advance();

    int width = read_int();
    int height = read_int();
    if (width != height)
        fail_at(line, column, "non-square bitmap");

    std::vector<std::vector<bool>> grid(static_cast<std::size_t>(height));
    for (auto &row : grid)
        row.resize(static_cast<std::size_t>(width));
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            skip_space();
            if (pos >= data.size())
                fail_at(line, column, "truncated pixel data");
            char ch = data[pos];
            if (ch != '0' && ch != '1')
                fail_at(line, column, std::string("invalid pixel '") + ch + "'");
            grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = ch == '1';
            advance();
        }
    skip_space();
    if (pos != data.size())
        fail_at(line, column, "trailing data after the bitmap");
    return from_grid(grid, quiet_zone);
}

qr::ModuleMatrix parse_txt(std::string_view data, int quiet_zone) {
    std::vector<std::vector<bool>> grid;
    std::size_t line_start = 0;
    std::size_t line_no = 1;
    while (line_start < data.size()) {
        std::size_t eol = data.find('\n', line_start);
        std::string_view row_text = data.substr(
            line_start, eol == std::string_view::npos ? std::string_view::npos
                                                      : eol - line_start);
        if (!row_text.empty()) {
            std::vector<bool> row;
            row.reserve(row_text.size());
            for (std::size_t i = 0; i < row_text.size(); ++i) {
                char ch = row_text[i];
                if (ch == '#')
                    row.push_back(true);
                else if (ch == '.')
                    row.push_back(false);
                else
                    fail_at(line_no, i + 1, std::string("invalid module '") + ch + "'");
            }
            grid.push_back(std::move(row));
        }
        if (eol == std::string_view::npos)
            break;
        line_start = eol + 1;
        ++line_no;
    }
    if (grid.empty())
        throw Error(Errc::MalformedInput, "empty module grid");
    for (std::size_t r = 0; r < grid.size(); ++r)
        if (grid[r].size() != grid.size())
            fail_at(r + 1, grid[r].size() + 1, "non-square module grid");
    return from_grid(grid, quiet_zone);
}

qr::ModuleMatrix parse_json(std::string_view data) {
    nlohmann::json j = nlohmann::json::parse(data, nullptr, false);
    if (j.is_discarded())
        throw Error(Errc::MalformedInput, "symbol file is not valid JSON");
    int size;
    int version;
    try {
        size = j.at("size").get<int>();
        version = j.at("version").get<int>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::MalformedInput, std::string("symbol field error: ") + e.what());
    }
    if (size != qr::side_of_version(version))
        throw Error(Errc::MalformedInput, "size and version fields disagree");
    if (!j.contains("modules"))
        throw Error(Errc::MalformedInput, "modules must be a size x size array");
    const auto &modules = j["modules"];
    if (!modules.is_array() || modules.size() != static_cast<std::size_t>(size))
        throw Error(Errc::MalformedInput, "modules must be a size x size array");

    std::vector<std::vector<bool>> grid(static_cast<std::size_t>(size));
    for (int r = 0; r < size; ++r) {
        const auto &row = modules[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(size))
            fail_at(static_cast<std::size_t>(r + 1), 1, "modules must be a size x size array");
        grid[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(size));
        for (int c = 0; c < size; ++c) {
            const auto &cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number_integer() || (cell.get<int>() != 0 && cell.get<int>() != 1))
                fail_at(static_cast<std::size_t>(r + 1), static_cast<std::size_t>(c + 1),
                        "module values must be 0 or 1");
            grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                cell.get<int>() == 1;
        }
    }
    return from_grid(grid, 0);
}

}  // namespace

Format format_from_name(const std::string &name) {
    if (name == "pbm") return Format::Pbm;
    if (name == "svg") return Format::Svg;
    if (name == "txt") return Format::Txt;
    if (name == "json") return Format::Json;
    throw Error(Errc::MalformedInput, "unknown format '" + name + "'");
}

const char *format_extension(Format format) {
    switch (format) {
        case Format::Pbm: return "pbm";
        case Format::Svg: return "svg";
        case Format::Txt: return "txt";
        case Format::Json: return "json";
    }
    return "bin";
}

std::string render(const qr::ModuleMatrix &matrix, Format format, int quiet_zone) {
    if (matrix.size() <= 0)
        throw std::invalid_argument("cannot render an empty matrix");
    if (quiet_zone < 0)
        throw std::invalid_argument("quiet zone must be non-negative");
    switch (format) {
        case Format::Pbm: return render_pbm(matrix, quiet_zone);
        case Format::Txt: return render_txt(matrix, quiet_zone);
        case Format::Svg: return render_svg(matrix, quiet_zone);
        case Format::Json: return render_json(matrix);
    }
    throw std::invalid_argument("unknown render format");
}

qr::ModuleMatrix parse_matrix(std::string_view data, Format format, int quiet_zone) {
    if (quiet_zone < 0)
        throw std::invalid_argument("quiet zone must be non-negative");
    switch (format) {
        case Format::Pbm: return parse_pbm(data, quiet_zone);
        case Format::Txt: return parse_txt(data, quiet_zone);
        case Format::Json: return parse_json(data);
        case Format::Svg:
            throw Error(Errc::MalformedInput, "SVG symbols are render-only");
    }
    throw std::invalid_argument("unknown render format");
}

}  // namespace sdeqr::render
