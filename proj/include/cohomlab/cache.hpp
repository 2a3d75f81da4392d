#pragma once

// Binary cache for enumerated groups and their Cayley presentations:
// 8-byte magic, version, FNV-1a checksum over the payload. A corrupt or
// stale file is reported and rebuilt, never silently reused.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohomlab/matgroup.hpp"
#include "cohomlab/presentation.hpp"

namespace cohomlab {

inline GroupAtlas atlas_from_cache_data(FieldTable field, GroupKind kind, std::vector<Mat2> elements,
                                        std::vector<std::uint32_t> gen_index,
                                        std::vector<std::uint32_t> gen_images,
                                        std::vector<std::int32_t> bfs_parent,
                                        std::vector<std::uint8_t> bfs_letter) {
    GroupAtlas g;
    g.kind_ = kind;
    g.field_ = std::move(field);
    g.elements_ = std::move(elements);
    g.gen_index_ = std::move(gen_index);
    g.gen_images_ = std::move(gen_images);
    g.bfs_parent_ = std::move(bfs_parent);
    g.bfs_letter_ = std::move(bfs_letter);
    if (g.elements_.empty() || !(g.elements_[0] == mat_identity()))
        throw std::invalid_argument("cache: element 0 is not the identity");
    std::size_t n = g.elements_.size(), k = g.gen_index_.size();
    if (g.gen_images_.size() != n * k || g.bfs_parent_.size() != n || g.bfs_letter_.size() != n)
        throw std::invalid_argument("cache: inconsistent table sizes");
    for (std::size_t i = 0; i < n; ++i) {
        if (mat_det(g.field_, g.elements_[i]) != 1)
            throw std::invalid_argument("cache: element determinant != 1");
        g.index_.emplace(mat_key(g.elements_[i]), static_cast<std::uint32_t>(i));
    }
    if (g.index_.size() != n) throw std::invalid_argument("cache: duplicate elements");
    return g;
}

namespace cachedetail {

constexpr char kMagic[8] = {'c', 'o', 'h', 'o', 'm', 'l', 'a', 'b'};
constexpr std::uint32_t kVersion = 1;
inline const std::string kHeader = "cohomlab-cache v1";

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string data) : buf_(std::move(data)) {}
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint16_t u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(u8()) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::string str() {
        std::uint32_t len = u32();
        need(len);
        std::string s = buf_.substr(pos_, len);
        pos_ += len;
        return s;
    }
    bool exhausted() const { return pos_ == buf_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) throw std::invalid_argument("cache: truncated payload");
    }
    std::string buf_;
    std::size_t pos_ = 0;
};

}  // namespace cachedetail

struct CachedGroup {
    std::unique_ptr<GroupAtlas> atlas;
    std::unique_ptr<Presentation> pres;
};

inline std::string encode_cache(const GroupAtlas& atlas, const Presentation& pres) {
    using namespace cachedetail;
    Writer w;
    w.str(kHeader);
    w.u32(atlas.q());
    w.u8(atlas.kind() == GroupKind::PSL ? 1 : 0);

    w.u64(atlas.size());
    for (const auto& m : atlas.elements()) {
        w.u16(static_cast<std::uint16_t>(m.a));
        w.u16(static_cast<std::uint16_t>(m.b));
        w.u16(static_cast<std::uint16_t>(m.c));
        w.u16(static_cast<std::uint16_t>(m.d));
    }
    w.u32(static_cast<std::uint32_t>(atlas.generator_count()));
    for (std::size_t j = 0; j < atlas.generator_count(); ++j) w.u32(atlas.generator(j));
    for (std::uint32_t i = 0; i < atlas.size(); ++i)
        for (std::size_t j = 0; j < atlas.generator_count(); ++j) w.u32(atlas.gen_image(i, j));
    for (std::uint32_t i = 0; i < atlas.size(); ++i) w.i32(atlas.bfs_parent(i));
    for (std::uint32_t i = 0; i < atlas.size(); ++i) w.u8(atlas.bfs_letter(i));

    w.u64(pres.relators().size());
    for (const auto& r : pres.relators()) {
        w.u32(static_cast<std::uint32_t>(r.size()));
        for (auto l : r) w.u8(static_cast<std::uint8_t>(l.gen | (l.inverted ? 0x80 : 0)));
    }

    Writer file;
    file.u32(kVersion);
    file.u64(fnv1a(w.bytes()));
    file.u64(w.bytes().size());
    std::string out(kMagic, sizeof kMagic);
    out += file.bytes();
    out += w.bytes();
    return out;
}

inline CachedGroup decode_cache(const std::string& data) {
    using namespace cachedetail;
    if (data.size() < sizeof kMagic + 20 || data.compare(0, sizeof kMagic, kMagic, sizeof kMagic) != 0)
        throw std::invalid_argument("cache: bad magic");
    Reader head(data.substr(sizeof kMagic, 20));
    std::uint32_t version = head.u32();
    std::uint64_t checksum = head.u64();
    std::uint64_t size = head.u64();
    if (version != kVersion) throw std::invalid_argument("cache: unsupported version");
    std::string payload = data.substr(sizeof kMagic + 20);
    if (payload.size() != size || fnv1a(payload) != checksum)
        throw std::invalid_argument("cache: checksum mismatch");

    Reader r(std::move(payload));
    if (r.str() != kHeader) throw std::invalid_argument("cache: bad header string");
    std::uint32_t q = r.u32();
    GroupKind kind = r.u8() ? GroupKind::PSL : GroupKind::SL;

    std::uint64_t n = r.u64();
    std::vector<Mat2> elements;
    elements.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Mat2 m;
        m.a = r.u16();
        m.b = r.u16();
        m.c = r.u16();
        m.d = r.u16();
        elements.push_back(m);
    }
    std::uint32_t k = r.u32();
    std::vector<std::uint32_t> gen_index(k);
    for (auto& g : gen_index) g = r.u32();
    std::vector<std::uint32_t> gen_images(n * k);
    for (auto& g : gen_images) g = r.u32();
    std::vector<std::int32_t> parents(n);
    for (auto& p : parents) p = r.i32();
    std::vector<std::uint8_t> letters(n);
    for (auto& l : letters) l = r.u8();

    std::uint64_t rel_count = r.u64();
    std::vector<Word> relators;
    relators.reserve(rel_count);
    for (std::uint64_t i = 0; i < rel_count; ++i) {
        std::uint32_t len = r.u32();
        Word word;
        word.reserve(len);
        for (std::uint32_t j = 0; j < len; ++j) {
            std::uint8_t b = r.u8();
            word.push_back({static_cast<std::uint8_t>(b & 0x7f), (b & 0x80) != 0});
        }
        relators.push_back(std::move(word));
    }
    if (!r.exhausted()) throw std::invalid_argument("cache: trailing bytes");

    CachedGroup out;
    out.atlas = std::make_unique<GroupAtlas>(
        atlas_from_cache_data(make_field(q), kind, std::move(elements), std::move(gen_index),
                              std::move(gen_images), std::move(parents), std::move(letters)));
    // The presentation constructor re-verifies every relator against the atlas.
    out.pres = std::make_unique<Presentation>(*out.atlas, std::move(relators));
    return out;
}

class CacheDir {
public:
    explicit CacheDir(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path file_for(std::uint32_t q, GroupKind kind) const {
        return dir_ / ((kind == GroupKind::PSL ? "psl2_" : "sl2_") + std::to_string(q) + ".cache");
    }

    void save(const GroupAtlas& atlas, const Presentation& pres) const {
        std::filesystem::create_directories(dir_);
        auto path = file_for(atlas.q(), atlas.kind());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache: cannot write " + path.string());
        std::string bytes = encode_cache(atlas, pres);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }

    // nullopt when missing or invalid; invalid files warn and are removed so
    // the caller rebuilds.
    std::optional<CachedGroup> try_load(std::uint32_t q, GroupKind kind) const {
        auto path = file_for(q, kind);
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        try {
            CachedGroup g = decode_cache(data);
            if (g.atlas->q() != q || g.atlas->kind() != kind)
                throw std::invalid_argument("cache: file describes a different group");
            return g;
        } catch (const std::exception& e) {
            std::cerr << "cohomlab: warning: cache file " << path.string() << " rejected ("
                      << e.what() << "); rebuilding\n";
            std::error_code ec;
            std::filesystem::remove(path, ec);
            return std::nullopt;
        }
    }

    void clear() const {
        if (!std::filesystem::exists(dir_)) return;
        for (const auto& entry : std::filesystem::directory_iterator(dir_))
            if (entry.path().extension() == ".cache") std::filesystem::remove(entry.path());
    }

private:
    std::filesystem::path dir_;
};

}  // namespace cohomlab
