#include "sdeqr/qr.hpp"

#include <array>

namespace sdeqr::qr {

namespace {

// Index 0 unused. Total codewords per version (data + error correction).
constexpr int kTotalCodewords[41] = {
    0,    26,   44,   70,   100,  134,  172,  196,  242,  292,  346,
    404,  466,  532,  581,  655,  733,  815,  901,  991,  1085, 1156,
    1258, 1364, 1474, 1588, 1706, 1828, 1921, 2051, 2185, 2323, 2465,
    2611, 2761, 2876, 3034, 3196, 3362, 3532, 3706};

// Filler bits after the last codeword in the symbol.
constexpr int kRemainderBits[41] = {
    0, 0, 7, 7, 7, 7, 7, 0, 0, 0, 0, 0, 0, 0, 3, 3, 3, 3, 3, 3, 3,
    4, 4, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 3, 0, 0, 0, 0, 0, 0};

// Rows indexed by EcLevel (L, M, Q, H), columns by version (0 unused).
constexpr int kEcPerBlock[4][41] = {
    {0, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28,
     28, 28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {0, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26,
     26, 26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28},
    {0, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26,
     30, 28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {0, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26,
     28, 30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
};

constexpr int kNumBlocks[4][41] = {
    {0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7,
     8, 8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25},
    {0, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14,
     16, 17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49},
    {0, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21,
     20, 23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68},
    {0, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25,
     25, 25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81},
};

const std::array<std::vector<int>, 41> kAlignmentPositions = {{
    {},
    {},
    {6, 18},
    {6, 22},
    {6, 26},
    {6, 30},
    {6, 34},
    {6, 22, 38},
    {6, 24, 42},
    {6, 26, 46},
    {6, 28, 50},
    {6, 30, 54},
    {6, 32, 58},
    {6, 34, 62},
    {6, 26, 46, 66},
    {6, 26, 48, 70},
    {6, 26, 50, 74},
    {6, 30, 54, 78},
    {6, 30, 56, 82},
    {6, 30, 58, 86},
    {6, 34, 62, 90},
    {6, 28, 50, 72, 94},
    {6, 26, 50, 74, 98},
    {6, 30, 54, 78, 102},
    {6, 28, 54, 80, 106},
    {6, 32, 58, 84, 110},
    {6, 30, 58, 86, 114},
    {6, 34, 62, 90, 118},
    {6, 26, 50, 74, 98, 122},
    {6, 30, 54, 78, 102, 126},
    {6, 26, 52, 78, 104, 130},
    {6, 30, 56, 82, 108, 134},
    {6, 34, 60, 86, 112, 138},
    {6, 30, 58, 86, 114, 142},
    {6, 34, 62, 90, 118, 146},
    {6, 30, 54, 78, 102, 126, 150},
    {6, 24, 50, 76, 102, 128, 154},
    {6, 28, 54, 80, 106, 132, 158},
    {6, 32, 58, 84, 110, 136, 162},
    {6, 26, 54, 82, 110, 138, 166},
    {6, 30, 58, 86, 114, 142, 170},
}};

}  // namespace

const char kAlphanumericCharset[46] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ $%*+-./:";

int alphanumeric_value(char c) {
    for (int i = 0; i < 45; ++i) {
        if (kAlphanumericCharset[i] == c)
            return i;
    }
    return -1;
}

const char *ec_name(EcLevel ec) {
    switch (ec) {
        case EcLevel::L: return "L";
        case EcLevel::M: return "M";
        case EcLevel::Q: return "Q";
        case EcLevel::H: return "H";
    }
    return "?";
}

EcLevel ec_from_name(const std::string &name) {
    if (name == "L") return EcLevel::L;
    if (name == "M") return EcLevel::M;
    if (name == "Q") return EcLevel::Q;
    if (name == "H") return EcLevel::H;
    throw Error(Errc::MalformedInput, "unknown EC level '" + name + "'");
}

void check_version(int version) {
    if (version < kMinVersion || version > kMaxVersion)
        throw Error(Errc::InvalidVersion,
                    "version " + std::to_string(version) + " outside 1..40");
}

int version_from_side(int side) {
    if (side >= 21 && side <= 177 && (side - 17) % 4 == 0)
        return (side - 17) / 4;
    throw Error(Errc::MalformedInput,
                "side length " + std::to_string(side) + " is not a symbol size");
}

int char_count_bits(int version, Mode mode) {
    check_version(version);
    static constexpr int kBits[3][4] = {
        // Numeric, Alphanumeric, Byte, Kanji
        {10, 9, 8, 8},    // versions 1-9
        {12, 11, 16, 10}, // versions 10-26
        {14, 13, 16, 12}, // versions 27-40
    };
    int band = version <= 9 ? 0 : version <= 26 ? 1 : 2;
    return kBits[band][static_cast<int>(mode)];
}

int total_codewords(int version) {
    check_version(version);
    return kTotalCodewords[version];
}

int remainder_bits(int version) {
    check_version(version);
    return kRemainderBits[version];
}

BlockStructure block_structure(int version, EcLevel ec) {
    check_version(version);
    BlockStructure bs;
    bs.num_blocks = kNumBlocks[static_cast<int>(ec)][version];
    bs.ec_per_block = kEcPerBlock[static_cast<int>(ec)][version];
    int total_data = kTotalCodewords[version] - bs.num_blocks * bs.ec_per_block;
    bs.short_block_data = total_data / bs.num_blocks;
    bs.num_short_blocks = bs.num_blocks - total_data % bs.num_blocks;
    return bs;
}

int data_codewords(int version, EcLevel ec) {
    return block_structure(version, ec).data_codewords();
}

const std::vector<int> &alignment_positions(int version) {
    check_version(version);
    return kAlignmentPositions[static_cast<std::size_t>(version)];
}

}  // namespace sdeqr::qr
