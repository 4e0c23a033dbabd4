#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "ringeit/errors.hpp"

namespace ringeit {

// 17 significant digits round-trips an IEEE double exactly; -0 is folded to
// +0 so byte-identical output does not depend on sign quirks of intermediate
// arithmetic.
inline std::string format_number(double value) {
    if (value == 0.0) value = 0.0;
    char buffer[64];
    const auto [ptr, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific, 16);
    if (ec != std::errc{}) throw NumericalError("number formatting failed");
    return std::string(buffer, ptr);
}

inline std::string format_integer(long long value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw NumericalError("integer formatting failed");
    return std::string(buffer, ptr);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::string render_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

// Minimal JSON emitter with insertion-ordered keys and the same number
// formatting as the CSV path, so reruns are byte-identical.
class JsonWriter {
  public:
    JsonWriter() { out_.reserve(4096); }

    void begin_object() {
        prefix();
        mark_value();  // the opener fills the slot its key reserved
        out_ += '{';
        stack_.push_back(State{true, true});
    }
    void end_object() { out_ += '}'; stack_.pop_back(); mark_value(); }
    void begin_array() {
        prefix();
        mark_value();
        out_ += '[';
        stack_.push_back(State{false, true});
    }
    void end_array() { out_ += ']'; stack_.pop_back(); mark_value(); }

    void key(std::string_view name) {
        separate();
        out_ += quote(name);
        out_ += ':';
        pending_key_ = true;
    }

    void value(double v) { prefix(); out_ += format_number(v); mark_value(); }
    void value(long long v) { prefix(); out_ += format_integer(v); mark_value(); }
    void value(int v) { value(static_cast<long long>(v)); }
    void value(bool v) { prefix(); out_ += v ? "true" : "false"; mark_value(); }
    void value(std::string_view v) { prefix(); out_ += quote(v); mark_value(); }
    void value(const char* v) { value(std::string_view(v)); }
    void null() { prefix(); out_ += "null"; mark_value(); }

    const std::string& str() const { return out_; }

  private:
    struct State {
        bool is_object;
        bool first;
    };

    static std::string quote(std::string_view s) {
        std::string q = "\"";
        for (char c : s) {
            switch (c) {
                case '"': q += "\\\""; break;
                case '\\': q += "\\\\"; break;
                case '\n': q += "\\n"; break;
                case '\t': q += "\\t"; break;
                case '\r': q += "\\r"; break;
                default: q += c;
            }
        }
        q += '"';
        return q;
    }

    void separate() {
        if (!stack_.empty()) {
            if (!stack_.back().first) out_ += ',';
            stack_.back().first = false;
        }
    }

    void prefix() {
        if (pending_key_) return;  // value follows its key directly
        separate();
    }

    void mark_value() { pending_key_ = false; }

    std::string out_;
    std::vector<State> stack_;
    bool pending_key_ = false;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr))
        throw NumericalError("sha256 digest failed");
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + path.string());
}

// Timestamp for the manifest. Honouring SOURCE_DATE_EPOCH keeps repeated
// runs byte-identical when the caller pins it.
inline long long manifest_timestamp() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        long long value = 0;
        const std::string_view sv(epoch);
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
        if (ec == std::errc{} && ptr == sv.data() + sv.size()) return value;
    }
    return static_cast<long long>(std::time(nullptr));
}

// name -> sha256 of every artifact written by a command, emitted last. The
// config snapshot re-parses to an equivalent RunConfig.
inline std::string render_manifest(const std::map<std::string, std::string>& hashes,
                                   std::string_view command, std::string_view version,
                                   std::string_view config_snapshot) {
    JsonWriter w;
    w.begin_object();
    w.key("command");
    w.value(command);
    w.key("version");
    w.value(version);
    w.key("timestamp");
    w.value(manifest_timestamp());
    w.key("config");
    w.value(config_snapshot);
    w.key("artifacts");
    w.begin_object();
    for (const auto& [name, hash] : hashes) {
        w.key(name);
        w.value(hash);
    }
    w.end_object();
    w.end_object();
    std::string out = w.str();
    out += '\n';
    return out;
}

}  // namespace ringeit
