#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "sdeqr/pipeline.hpp"
#include "sdeqr/qrdecode.hpp"
#include "sdeqr/render.hpp"

namespace fs = std::filesystem;
using namespace sdeqr;

namespace {

// Command-line misuse, as opposed to bad data: exits with status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::MalformedInput, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string read_stdin() {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
}

void write_file(const fs::path &path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::MalformedInput, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw Error(Errc::MalformedInput, "short write to " + path.string());
}

// Echo-off prompt on the controlling terminal; never reads argv.
std::string prompt_password() {
    FILE *tty = std::fopen("/dev/tty", "r+");
    if (tty == nullptr)
        throw UsageError("no password source: pass --password-env or run interactively");
    std::fputs("Password: ", tty);
    std::fflush(tty);

    termios before{};
    bool raw_ok = tcgetattr(fileno(tty), &before) == 0;
    if (raw_ok) {
        termios hidden = before;
        hidden.c_lflag &= ~static_cast<tcflag_t>(ECHO);
        tcsetattr(fileno(tty), TCSAFLUSH, &hidden);
    }
    std::string line;
    int ch;
    while ((ch = std::fgetc(tty)) != EOF && ch != '\n')
        line.push_back(static_cast<char>(ch));
    if (raw_ok) {
        tcsetattr(fileno(tty), TCSAFLUSH, &before);
        std::fputc('\n', tty);
    }
    std::fclose(tty);
    return line;
}

std::vector<uint8_t> obtain_password(const std::string &env_name) {
    if (!env_name.empty()) {
        const char *value = std::getenv(env_name.c_str());
        if (value == nullptr)
            throw UsageError("environment variable " + env_name + " is not set");
        return cipher::password_from_text(value);
    }
    return cipher::password_from_text(prompt_password());
}

int parse_mask_flag(const std::string &text) {
    if (text == "auto")
        return -1;
    if (text.size() == 1 && text[0] >= '0' && text[0] <= '7')
        return text[0] - '0';
    throw UsageError("--mask expects auto or 0..7");
}

int parse_version_flag(const std::string &text) {
    if (text == "auto")
        return 0;
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw UsageError("--version expects auto or 1..40");
        value = value * 10 + (c - '0');
    }
    if (value < 1 || value > 40)
        throw UsageError("--version expects auto or 1..40");
    return value;
}

cipher::Serialization parse_serialization_flag(const std::string &text) {
    if (text == "entity")
        return cipher::Serialization::Entity;
    if (text == "raw16")
        return cipher::Serialization::Raw16;
    throw UsageError("--serialization expects entity or raw16");
}

qr::EcLevel parse_ec_flag(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    try {
        return qr::ec_from_name(text);
    } catch (const Error &) {
        throw UsageError("--ec expects L, M, Q or H");
    }
}

render::Format format_of_file(const fs::path &path, const std::string &override_name) {
    if (!override_name.empty())
        return render::format_from_name(override_name);
    std::string ext = path.extension().string();
    if (!ext.empty() && ext.front() == '.')
        ext.erase(ext.begin());
    try {
        return render::format_from_name(ext);
    } catch (const Error &) {
        throw UsageError("cannot infer format of " + path.string() + "; pass --format");
    }
}

std::string symbol_file_name(int index, render::Format format) {
    char name[32];
    std::snprintf(name, sizeof name, "symbol-%03d.%s", index,
                  render::format_extension(format));
    return name;
}

ExecPolicy policy_from(bool serial) {
#ifdef SDEQR_HAVE_OPENMP
    return serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
#else
    (void)serial;
    return ExecPolicy::Serial;
#endif
}

struct CommonFlags {
    std::string password_env;
    std::string in;
    std::string out;
    std::string out_dir;
    std::string format = "pbm";
    std::string format_override;
    std::string ec = "H";
    std::string serialization = "entity";
    std::string mask = "auto";
    std::string version = "auto";
    std::size_t limit = pipeline::kDefaultLimit;
    int quiet_zone = 4;
    bool to_stdout = false;
    bool serial = false;
    std::vector<std::string> inputs;
};

int run_encrypt(const CommonFlags &flags) {
    std::string message = flags.in.empty() ? read_stdin() : read_file(flags.in);
    std::vector<uint8_t> password = obtain_password(flags.password_env);

    pipeline::PipelineOptions options;
    options.ec = parse_ec_flag(flags.ec);
    options.serialization = parse_serialization_flag(flags.serialization);
    options.forced_mask = parse_mask_flag(flags.mask);
    options.forced_version = parse_version_flag(flags.version);
    options.limit = flags.limit;
    options.policy = policy_from(flags.serial);

    pipeline::SymbolSet set = pipeline::encrypt_to_symbols(message, password, options);

    render::Format format = render::format_from_name(flags.format);
    fs::path dir = flags.out_dir.empty() ? fs::path(".") : fs::path(flags.out_dir);
    fs::create_directories(dir);
    for (std::size_t i = 0; i < set.symbols.size(); ++i) {
        fs::path file = dir / symbol_file_name(static_cast<int>(i) + 1, format);
        write_file(file, render::render(set.symbols[i].matrix, format, flags.quiet_zone));
        std::cout << file.string() << "\n";
    }
    fs::path manifest_path = dir / "manifest.json";
    write_file(manifest_path, pipeline::manifest_to_json(set.manifest));
    std::cout << manifest_path.string() << "\n";
    return 0;
}

// Directory arguments expand to their symbol files (sorted) and manifest.
void collect_symbol_inputs(const std::vector<std::string> &args,
                           std::vector<fs::path> &files,
                           std::optional<fs::path> &manifest_path) {
    for (const std::string &arg : args) {
        fs::path path(arg);
        if (fs::is_directory(path)) {
            std::vector<fs::path> found;
            for (const auto &entry : fs::directory_iterator(path)) {
                std::string name = entry.path().filename().string();
                if (name == "manifest.json") {
                    if (!manifest_path)
                        manifest_path = entry.path();
                } else if (name.starts_with("symbol-")) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            if (found.empty())
                throw Error(Errc::EmptyInput, "no symbol files in " + path.string());
            files.insert(files.end(), found.begin(), found.end());
        } else if (path.filename() == "manifest.json") {
            if (!manifest_path)
                manifest_path = path;
        } else {
            files.push_back(path);
        }
    }
}

int run_decrypt(const CommonFlags &flags, const std::string &manifest_flag) {
    if (flags.inputs.empty())
        throw UsageError("decrypt needs symbol files or a symbol directory");
    if (!flags.to_stdout && flags.out.empty())
        throw UsageError("decrypt needs --out FILE (or --stdout, explicitly)");

    std::vector<fs::path> files;
    std::optional<fs::path> manifest_path;
    collect_symbol_inputs(flags.inputs, files, manifest_path);
    if (!manifest_flag.empty())
        manifest_path = fs::path(manifest_flag);

    std::optional<pipeline::Manifest> manifest;
    if (manifest_path)
        manifest = pipeline::manifest_from_json(read_file(*manifest_path));

    std::vector<qr::ModuleMatrix> matrices;
    matrices.reserve(files.size());
    for (const fs::path &file : files)
        matrices.push_back(render::parse_matrix(
            read_file(file), format_of_file(file, flags.format_override),
            flags.quiet_zone));

    std::vector<uint8_t> password = obtain_password(flags.password_env);
    std::string plaintext = pipeline::decrypt_from_symbols(
        matrices, manifest, password, parse_serialization_flag(flags.serialization),
        policy_from(flags.serial));

    if (flags.to_stdout)
        std::cout << plaintext;
    else
        write_file(flags.out, plaintext);
    return 0;
}

int run_encode(const CommonFlags &flags) {
    std::string payload = flags.in.empty() ? read_stdin() : read_file(flags.in);

    qr::EncodeOptions options;
    options.ec = parse_ec_flag(flags.ec);
    options.forced_mask = parse_mask_flag(flags.mask);
    options.forced_version = parse_version_flag(flags.version);
    options.policy = policy_from(flags.serial);

    qr::EncodedSymbol symbol = qr::encode_symbol(
        std::span(reinterpret_cast<const uint8_t *>(payload.data()), payload.size()),
        options);

    render::Format format = render::format_from_name(flags.format);
    std::string rendered = render::render(symbol.matrix, format, flags.quiet_zone);
    std::cerr << "version=" << symbol.version << " ec=" << qr::ec_name(symbol.ec)
              << " mask=" << symbol.mask << "\n";
    if (flags.out.empty())
        std::cout << rendered;
    else
        write_file(flags.out, rendered);
    return 0;
}

qr::ModuleMatrix load_symbol(const CommonFlags &flags) {
    if (flags.inputs.size() != 1)
        throw UsageError("expected exactly one symbol file");
    fs::path file(flags.inputs.front());
    return render::parse_matrix(read_file(file),
                                format_of_file(file, flags.format_override),
                                flags.quiet_zone);
}

int run_decode(const CommonFlags &flags) {
    if (!flags.to_stdout && flags.out.empty())
        throw UsageError("decode needs --out FILE (or --stdout, explicitly)");
    qr::DecodedSymbol decoded = qr::decode_symbol(load_symbol(flags),
                                                  policy_from(flags.serial));
    std::cerr << "version=" << decoded.version << " ec=" << qr::ec_name(decoded.ec)
              << " mask=" << decoded.mask << " errors_corrected="
              << decoded.errors_corrected << " payload_length="
              << decoded.payload.size() << "\n";
    std::string_view payload(reinterpret_cast<const char *>(decoded.payload.data()),
                             decoded.payload.size());
    if (flags.to_stdout)
        std::cout << payload;
    else
        write_file(flags.out, payload);
    return 0;
}

int run_inspect(const CommonFlags &flags) {
    qr::DecodedSymbol decoded = qr::decode_symbol(load_symbol(flags),
                                                  policy_from(flags.serial));
    std::cout << "version=" << decoded.version << " ec=" << qr::ec_name(decoded.ec)
              << " mask=" << decoded.mask << " errors_corrected="
              << decoded.errors_corrected << " payload_length="
              << decoded.payload.size() << "\n";
    return 0;
}

int run_roundtrip(const CommonFlags &flags) {
    std::string message = flags.in.empty()
                              ? std::string("The quick brown fox jumps over the lazy dog "
                                            "0123456789 \xC3\xBF\xC3\xBE\xC3\xBD")
                              : read_file(flags.in);
    std::vector<uint8_t> password =
        flags.password_env.empty() ? cipher::password_from_text("Hello World")
                                   : obtain_password(flags.password_env);

    for (cipher::Serialization serialization :
         {cipher::Serialization::Entity, cipher::Serialization::Raw16}) {
        pipeline::PipelineOptions options;
        options.ec = parse_ec_flag(flags.ec);
        options.serialization = serialization;
        options.limit = flags.limit;
        options.policy = policy_from(flags.serial);

        pipeline::SymbolSet set = pipeline::encrypt_to_symbols(message, password, options);

        // Run the symbols through a render/parse cycle as well.
        std::vector<qr::ModuleMatrix> matrices;
        for (const auto &symbol : set.symbols)
            matrices.push_back(render::parse_matrix(
                render::render(symbol.matrix, render::Format::Txt, flags.quiet_zone),
                render::Format::Txt, flags.quiet_zone));

        std::string back = pipeline::decrypt_from_symbols(
            matrices, set.manifest, password, serialization, policy_from(flags.serial));
        if (back != message) {
            std::cerr << "roundtrip FAILED ("
                      << (serialization == cipher::Serialization::Entity ? "entity"
                                                                         : "raw16")
                      << ")\n";
            return 1;
        }
        std::cout << "roundtrip ok: "
                  << (serialization == cipher::Serialization::Entity ? "entity" : "raw16")
                  << ", " << set.symbols.size() << " symbol(s), version "
                  << set.symbols.front().version << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"SD-EQR: password-keyed cipher with QR symbol carriage"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string manifest_flag;

    auto add_password = [&](CLI::App *cmd, bool required) {
        auto *opt = cmd->add_option("--password-env", flags.password_env,
                                    "Environment variable holding the password "
                                    "(omit for an interactive prompt)");
        (void)required;
        return opt;
    };
    auto add_render_flags = [&](CLI::App *cmd) {
        cmd->add_option("--format", flags.format, "Symbol file format")
            ->check(CLI::IsMember({"pbm", "svg", "txt", "json"}))
            ->capture_default_str();
        cmd->add_option("--quiet-zone", flags.quiet_zone, "Quiet zone width in modules")
            ->check(CLI::Range(0, 32))
            ->capture_default_str();
    };
    auto add_parse_flags = [&](CLI::App *cmd) {
        cmd->add_option("--format", flags.format_override,
                        "Input format (default: by file extension)")
            ->check(CLI::IsMember({"pbm", "txt", "json"}));
        cmd->add_option("--quiet-zone", flags.quiet_zone,
                        "Quiet zone width around the input symbols")
            ->check(CLI::Range(0, 32))
            ->capture_default_str();
    };
    auto add_encode_flags = [&](CLI::App *cmd) {
        cmd->add_option("--ec", flags.ec, "Error correction level")
            ->check(CLI::IsMember({"L", "M", "Q", "H", "l", "m", "q", "h"}))
            ->capture_default_str();
        cmd->add_option("--mask", flags.mask, "Mask pattern: auto or 0..7")
            ->capture_default_str();
        cmd->add_option("--version", flags.version, "Symbol version: auto or 1..40")
            ->capture_default_str();
    };
    auto add_serial = [&](CLI::App *cmd) {
        cmd->add_flag("--serial", flags.serial,
                      "Use the serial reference path instead of the parallel kernels");
    };

    CLI::App *enc = app.add_subcommand(
        "encrypt", "Encrypt a message and write QR symbols plus manifest.json");
    add_password(enc, true);
    enc->add_option("--in", flags.in, "Message file (default: stdin)");
    enc->add_option("--out-dir", flags.out_dir, "Output directory (default: .)");
    enc->add_option("--serialization", flags.serialization,
                    "Ciphertext serialization")
        ->check(CLI::IsMember({"entity", "raw16"}))
        ->capture_default_str();
    enc->add_option("--limit", flags.limit, "Max serialized bytes per symbol")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    add_encode_flags(enc);
    add_render_flags(enc);
    add_serial(enc);

    CLI::App *dec = app.add_subcommand(
        "decrypt", "Decode QR symbols and decrypt the message");
    add_password(dec, true);
    dec->add_option("symbols", flags.inputs,
                    "Symbol files, or a directory containing them");
    dec->add_option("--manifest", manifest_flag, "Manifest file");
    dec->add_option("--serialization", flags.serialization,
                    "Serialization when no manifest is given")
        ->check(CLI::IsMember({"entity", "raw16"}))
        ->capture_default_str();
    dec->add_option("--out", flags.out, "Plaintext output file");
    dec->add_flag("--stdout", flags.to_stdout,
                  "Write the plaintext to standard output");
    add_parse_flags(dec);
    add_serial(dec);

    CLI::App *qenc = app.add_subcommand(
        "encode", "Encode a plain payload as one QR symbol (no cipher)");
    qenc->add_option("--in", flags.in, "Payload file (default: stdin)");
    qenc->add_option("--out", flags.out, "Symbol output file (default: stdout)");
    add_encode_flags(qenc);
    add_render_flags(qenc);
    add_serial(qenc);

    CLI::App *qdec = app.add_subcommand(
        "decode", "Decode one QR symbol to its raw payload (no cipher)");
    qdec->add_option("symbol", flags.inputs, "Symbol file");
    qdec->add_option("--out", flags.out, "Payload output file");
    qdec->add_flag("--stdout", flags.to_stdout,
                   "Write the payload to standard output");
    add_parse_flags(qdec);
    add_serial(qdec);

    CLI::App *ins = app.add_subcommand("inspect", "Report symbol metadata");
    ins->add_option("symbol", flags.inputs, "Symbol file");
    add_parse_flags(ins);
    add_serial(ins);

    CLI::App *rt = app.add_subcommand(
        "roundtrip", "Self-test: encrypt, render, parse, decode, decrypt");
    add_password(rt, false);
    rt->add_option("--in", flags.in, "Message file (default: built-in sample)");
    rt->add_option("--ec", flags.ec, "Error correction level")
        ->check(CLI::IsMember({"L", "M", "Q", "H", "l", "m", "q", "h"}))
        ->capture_default_str();
    rt->add_option("--limit", flags.limit, "Max serialized bytes per symbol")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    rt->add_option("--quiet-zone", flags.quiet_zone, "Quiet zone width in modules")
        ->check(CLI::Range(0, 32))
        ->capture_default_str();
    add_serial(rt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(enc))
            return run_encrypt(flags);
        if (app.got_subcommand(dec))
            return run_decrypt(flags, manifest_flag);
        if (app.got_subcommand(qenc))
            return run_encode(flags);
        if (app.got_subcommand(qdec))
            return run_decode(flags);
        if (app.got_subcommand(ins))
            return run_inspect(flags);
        if (app.got_subcommand(rt))
            return run_roundtrip(flags);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
