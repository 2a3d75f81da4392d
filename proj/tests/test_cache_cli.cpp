#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cohomlab/cache.hpp"
#include "cohomlab/report.hpp"

using namespace cohomlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cohomlab_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("cache encode/decode round trip preserves the atlas and relators") {
    auto atlas = build_group(7, GroupKind::PSL);
    Presentation pres(atlas);

    std::string bytes = encode_cache(atlas, pres);
    CachedGroup loaded = decode_cache(bytes);

    REQUIRE(loaded.atlas->size() == atlas.size());
    REQUIRE(loaded.atlas->kind() == GroupKind::PSL);
    REQUIRE(loaded.atlas->q() == 7);
    REQUIRE(loaded.atlas->generator_count() == atlas.generator_count());
    for (std::uint32_t i = 0; i < atlas.size(); ++i) {
        REQUIRE(loaded.atlas->element(i) == atlas.element(i));
        REQUIRE(loaded.atlas->word_of(i) == atlas.word_of(i));
        for (std::size_t j = 0; j < atlas.generator_count(); ++j)
            REQUIRE(loaded.atlas->gen_image(i, j) == atlas.gen_image(i, j));
    }
    REQUIRE(loaded.pres->relators() == pres.relators());

    // The rebuilt atlas multiplies identically.
    for (std::uint32_t i = 0; i < 50; ++i)
        REQUIRE(loaded.atlas->mul(i, i + 1) == atlas.mul(i, i + 1));
}

TEST_CASE("cache rejects corruption, truncation and bad magic") {
    auto atlas = build_group(5, GroupKind::PSL);
    Presentation pres(atlas);
    std::string bytes = encode_cache(atlas, pres);

    REQUIRE_THROWS_AS(decode_cache(bytes.substr(0, bytes.size() / 2)), std::invalid_argument);
    REQUIRE_THROWS_AS(decode_cache(std::string("garbage")), std::invalid_argument);

    std::string flipped = bytes;
    flipped[bytes.size() - 3] ^= 0x40;  // payload corruption -> checksum mismatch
    REQUIRE_THROWS_AS(decode_cache(flipped), std::invalid_argument);

    std::string badmagic = bytes;
    badmagic[0] = 'X';
    REQUIRE_THROWS_AS(decode_cache(badmagic), std::invalid_argument);
}

TEST_CASE("CacheDir save, load, reject-and-remove, clear") {
    TempDir tmp;
    CacheDir cache(tmp.path);

    REQUIRE(!cache.try_load(5, GroupKind::PSL).has_value());

    auto atlas = build_group(5, GroupKind::PSL);
    Presentation pres(atlas);
    cache.save(atlas, pres);
    REQUIRE(fs::exists(tmp.path / "psl2_5.cache"));

    auto loaded = cache.try_load(5, GroupKind::PSL);
    REQUIRE(loaded.has_value());
    REQUIRE(loaded->atlas->size() == 60);
    REQUIRE(loaded->pres->relators().size() == 61);

    // Truncate the file: loading must warn, drop it, and report a miss.
    fs::resize_file(tmp.path / "psl2_5.cache", 64);
    REQUIRE(!cache.try_load(5, GroupKind::PSL).has_value());
    REQUIRE(!fs::exists(tmp.path / "psl2_5.cache"));

    cache.save(atlas, pres);
    auto sl = build_group(5, GroupKind::SL);
    Presentation sl_pres(sl);
    cache.save(sl, sl_pres);
    REQUIRE(fs::exists(tmp.path / "sl2_5.cache"));
    cache.clear();
    REQUIRE(!fs::exists(tmp.path / "psl2_5.cache"));
    REQUIRE(!fs::exists(tmp.path / "sl2_5.cache"));
}

TEST_CASE("cache transparency: warm and cold runs produce identical results") {
    TempDir tmp;
    CacheDir cache(tmp.path);

    GroupContext cold(7);
    auto ev_cold = decide_embedding(cold);

    GroupContext warm_build(7, {}, &cache);  // builds and saves
    auto ev_build = decide_embedding(warm_build);
    REQUIRE(fs::exists(tmp.path / "psl2_7.cache"));

    GroupContext warm(7, {}, &cache);  // loads from the file
    auto ev_warm = decide_embedding(warm);

    REQUIRE(ev_cold.embeds);
    REQUIRE(ev_cold.witness == ev_build.witness);
    REQUIRE(ev_cold.witness == ev_warm.witness);
    REQUIRE(ev_cold.eps == ev_warm.eps);

    auto rep_cold = make_paper_report(cold);
    auto rep_warm = make_paper_report(warm);
    REQUIRE(rep_cold.dims == rep_warm.dims);
    REQUIRE(rep_cold.witness_digest == rep_warm.witness_digest);
}

TEST_CASE("fnv digest is stable and hex shaped") {
    REQUIRE(fnv_digest("") == fnv_digest(""));
    REQUIRE(fnv_digest("a") != fnv_digest("b"));
    std::string d = fnv_digest("cohomlab");
    REQUIRE(d.size() == 16);
    for (char c : d) REQUIRE(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
}

TEST_CASE("is_odd_prime_power classifies the CLI domain") {
    for (std::uint32_t q : {3u, 5u, 7u, 9u, 11u, 13u, 17u, 19u, 23u, 25u, 27u, 29u, 31u, 81u})
        REQUIRE(is_odd_prime_power(q));
    for (std::uint32_t q : {0u, 1u, 2u, 4u, 6u, 8u, 12u, 15u, 16u, 21u, 33u, 45u})
        REQUIRE(!is_odd_prime_power(q));
}

TEST_CASE("GroupContext rejects invalid q") {
    REQUIRE_THROWS_AS(GroupContext(4), std::invalid_argument);
    REQUIRE_THROWS_AS(GroupContext(15), std::invalid_argument);
}
