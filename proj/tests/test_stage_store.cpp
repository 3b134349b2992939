#include <doctest.h>

#include <random>

#include "keyclust/records.hpp"
#include "keyclust/stage_store.hpp"
#include "temp_dir.hpp"

using namespace keyclust;

namespace {

std::vector<Chunk> sample_chunks(std::size_t n) {
    std::vector<Chunk> out;
    for (std::size_t i = 0; i < n; ++i) {
        Chunk c;
        c.chunk_id = "doc" + std::to_string(i) + "#0000";
        c.doc_id = "doc" + std::to_string(i);
        c.corpus_label = "lbl";
        c.raw_text = "Text \"quoted\" \xc3\xa9 line " + std::to_string(i) + ".";
        c.sentence_count = 1 + i % 3;
        c.tokens = {"text", "quoted", "line"};
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_SUITE("stage_store") {

TEST_CASE("five chunks round trip") {
    TempDir dir;
    StageStore store(dir.path());
    const auto chunks = sample_chunks(5);
    store.save("chunks", chunks, {{"note", "x"}});
    nlohmann::json meta;
    CHECK(store.load<Chunk>("chunks", &meta) == chunks);
    CHECK(meta.at("note") == "x");
    CHECK(store.header("chunks").record_count == 5);
}

TEST_CASE("empty stage round trip") {
    TempDir dir;
    StageStore store(dir.path());
    store.save("chunks", std::vector<Chunk>{});
    CHECK(store.load<Chunk>("chunks").empty());
}

TEST_CASE("missing stage throws and returns nothing") {
    TempDir dir;
    StageStore store(dir.path());
    CHECK_FALSE(store.exists("nope"));
    CHECK_THROWS_AS(store.load<Chunk>("nope"), MissingStage);
    CHECK_THROWS_WITH(store.load<Chunk>("nope"), doctest::Contains("missing stage"));
}

TEST_CASE("record type is checked") {
    TempDir dir;
    StageStore store(dir.path());
    store.save("chunks", sample_chunks(2));
    CHECK_THROWS_AS(store.load<WeightRecord>("chunks"), SchemaMismatch);
}

TEST_CASE("truncated and foreign files are rejected") {
    TempDir dir;
    StageStore store(dir.path());
    store.save("chunks", sample_chunks(3));
    auto text = slurp(store.stage_path("chunks"));
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    dir.write("chunks.jsonl", text);
    CHECK_THROWS_AS(store.load<Chunk>("chunks"), IoError);

    dir.write("other.jsonl", "{\"hello\":1}\n");
    CHECK_THROWS_AS(store.load<Chunk>("other"), SchemaMismatch);
}

TEST_CASE("an uncommitted writer leaves the previous stage intact") {
    TempDir dir;
    StageStore store(dir.path());
    store.save("chunks", sample_chunks(2));
    {
        auto w = store.writer<Chunk>("chunks");
        w.append(sample_chunks(1).front());
    }
    CHECK(store.load<Chunk>("chunks").size() == 2);
    CHECK_FALSE(std::filesystem::exists(store.stage_path("chunks").string() + ".body.tmp"));
}

TEST_CASE("doubles survive bit-exactly") {
    TempDir dir;
    StageStore store(dir.path());
    std::mt19937_64 rng(3);
    std::vector<WeightRecord> weights;
    for (int i = 0; i < 200; ++i) {
        const double v = std::ldexp(static_cast<double>(rng() >> 11), -53 + static_cast<int>(rng() % 40) - 20);
        weights.push_back({"c" + std::to_string(i), v});
    }
    weights.push_back({"tiny", 5e-324});
    weights.push_back({"third", 1.0 / 3.0});
    store.save("weights", weights);
    CHECK(store.load<WeightRecord>("weights") == weights);

    PcaModel<double> model;
    model.mean = Vector<double>::Random(7);
    model.components = Matrix<double>::Random(7, 3);
    model.explained_variance = Vector<double>::Random(3);
    store.save("pca", std::vector<PcaModel<double>>{model});
    const auto back = store.load<PcaModel<double>>("pca").at(0);
    CHECK(back.mean == model.mean);
    CHECK(back.components == model.components);
    CHECK(back.explained_variance == model.explained_variance);
}

TEST_CASE("saving is byte-identical across runs") {
    TempDir dir;
    StageStore a(dir / "a"), b(dir / "b");
    a.save("chunks", sample_chunks(4), {{"k", 1}});
    b.save("chunks", sample_chunks(4), {{"k", 1}});
    CHECK(slurp(a.stage_path("chunks")) == slurp(b.stage_path("chunks")));
}

TEST_CASE("vocabulary and tf-idf records convert both ways") {
    const Vocabulary vocab({"alpha", "beta", "gamma"}, {1, 2, 3}, 4);
    const auto terms = to_records(vocab);
    REQUIRE(terms.size() == 3);
    CHECK(terms[1] == VocabularyTerm{"beta", 1, 2});
    CHECK(vocabulary_from_records(terms, 4) == vocab);

    TfIdfVector v(3);
    v.insert(0) = 0.6;
    v.insert(2) = 0.8;
    const auto rec = to_record("c", v);
    CHECK(rec.indices == std::vector<Index>{0, 2});
    const auto back = from_record(rec, 3);
    CHECK(back.coeff(0) == 0.6);
    CHECK(back.coeff(1) == 0.0);
    CHECK(back.coeff(2) == 0.8);
    CHECK_THROWS_AS(from_record(TfIdfRecord{"c", {5}, {1.0}}, 3), SchemaMismatch);
}

}  // TEST_SUITE
