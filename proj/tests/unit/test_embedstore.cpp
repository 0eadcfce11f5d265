#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "intentbench/embedstore.hpp"
#include "error_kind.hpp"
#include "intentbench/error.hpp"
#include "oracles.hpp"

using namespace intentbench;
using namespace intentbench::embed;

namespace {

EmbeddingMatrix make(std::vector<std::string> ids, RowMatrix data) {
  EmbeddingMatrix m;
  m.ids = std::move(ids);
  m.data = std::move(data);
  return m;
}

EmbeddingMatrix read(const std::string& text) {
  std::istringstream in(text);
  return read_embeddings(in, "emb");
}


std::string write(const EmbeddingMatrix& m) {
  std::ostringstream out;
  write_embeddings(m, out);
  return out.str();
}

}  // namespace

TEST_CASE("load two 2-d rows") {
  const auto m = read("{\"dim\": 2, \"count\": 2}\n{\"id\": \"u1\", \"vector\": [1, 0]}\n{\"id\": \"u2\", \"vector\": [0, 1]}\n");
  CHECK(m.rows() == 2);
  CHECK(m.dim() == 2);
  CHECK(m.ids == std::vector<std::string>{"u1", "u2"});
  CHECK(m.data(1, 1) == 1.0);
  CHECK_FALSE(m.normalized);
}

TEST_CASE("format errors") {
  CHECK(kind_of([] { read("{\"dim\": 2, \"count\": 2}\n{\"id\": \"u1\", \"vector\": [1, 0]}\n{\"id\": \"u2\", \"vector\": [0, 1, 2]}\n"); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] { read("{\"dim\": 1, \"count\": 1}\n{\"id\": \"u1\", \"vector\": [null]}\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { read("{\"dim\": 1, \"count\": 1}\n{\"id\": \"u1\", \"vector\": [1e999]}\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { read("{\"dim\": 1, \"count\": 2}\n{\"id\": \"u1\", \"vector\": [1]}\n{\"id\": \"u1\", \"vector\": [2]}\n"); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([] { read("{\"dim\": 1, \"count\": 2}\n{\"id\": \"u1\", \"vector\": [1]}\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { read(""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { load_embeddings("/nonexistent/e.jsonl"); }) == ErrorKind::Io);

  try {
    read("{\"dim\": 2, \"count\": 2}\n{\"id\": \"u1\", \"vector\": [1, 0]}\n{\"id\": \"u2\", \"vector\": [0]}\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("emb:3") != std::string::npos);
  }
}

TEST_CASE("empty matrix writes only the header") {
  const auto m = make({}, RowMatrix(0, 4));
  const auto text = write(m);
  CHECK(text == "{\"count\":0,\"dim\":4}\n");
  const auto back = read(text);
  CHECK(back.rows() == 0);
  CHECK(back.dim() == 4);
}

TEST_CASE("1x3 matrix writes one data line with three coordinates") {
  RowMatrix data(1, 3);
  data << 0.1, -2.5, 3.0;
  const auto text = write(make({"a"}, data));
  CHECK(text == "{\"count\":1,\"dim\":3}\n{\"id\":\"a\",\"vector\":[0.10000000000000001,-2.5,3]}\n");
}

TEST_CASE("save then load is bit exact on random 50x8 data") {
  auto m = make({}, oracle::random_points(50, 8, 99, 1e3));
  for (int i = 0; i < 50; ++i) m.ids.push_back("row \"" + std::to_string(i) + "\"");
  m.data(3, 4) = 5e-324;  // denormal
  m.data(7, 1) = -1.7976931348623157e308;
  const auto path = std::filesystem::temp_directory_path() / "intentbench_roundtrip.jsonl";
  save_embeddings(m, path);
  const auto back = load_embeddings(path);
  std::filesystem::remove(path);
  CHECK(back.ids == m.ids);
  REQUIRE(back.data.rows() == 50);
  for (Index i = 0; i < 50; ++i)
    for (Index j = 0; j < 8; ++j) CHECK(back.data(i, j) == m.data(i, j));
}

TEST_CASE("unwritable path is an io error") {
  const auto m = make({"a"}, RowMatrix::Ones(1, 2));
  CHECK(kind_of([&] { save_embeddings(m, "/nonexistent/dir/out.jsonl"); }) == ErrorKind::Io);
}

TEST_CASE("l2 normalization") {
  RowMatrix data(1, 2);
  data << 3, 4;
  const auto unit = l2_normalize(make({"t"}, data));
  CHECK(unit.normalized);
  CHECK(unit.data(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(unit.data(0, 1) == doctest::Approx(0.8).epsilon(1e-15));

  SUBCASE("random rows land on the unit sphere, idempotent, cosines kept") {
    auto m = make({}, oracle::random_points(40, 6, 5, 3.0));
    for (int i = 0; i < 40; ++i) m.ids.push_back(std::to_string(i));
    const auto once = l2_normalize(m);
    const auto twice = l2_normalize(once);
    once.validate();
    for (Index i = 0; i < 40; ++i) {
      CHECK(std::abs(once.data.row(i).norm() - 1.0) <= 1e-9);
      CHECK((twice.data.row(i) - once.data.row(i)).cwiseAbs().maxCoeff() <= 1e-12);
      for (Index j = 0; j < 40; j += 7) {
        const double cos_raw = m.data.row(i).dot(m.data.row(j)) / (m.data.row(i).norm() * m.data.row(j).norm());
        CHECK(once.data.row(i).dot(once.data.row(j)) == doctest::Approx(cos_raw).epsilon(1e-12));
      }
    }
  }
  SUBCASE("zero row is a numeric error naming the row") {
    RowMatrix z = RowMatrix::Zero(2, 2);
    z(0, 0) = 1.0;
    try {
      l2_normalize(make({"ok", "zero"}, z));
      FAIL("should throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Numeric);
      CHECK(std::string(e.what()).find("zero") != std::string::npos);
    }
  }
}

TEST_CASE("align reorders and restricts rows") {
  RowMatrix data(3, 1);
  data << 1, 2, 3;
  const auto m = make({"a", "b", "c"}, data);

  const std::vector<std::string> same{"a", "b", "c"};
  CHECK(align(m, same).data == m.data);
  const std::vector<std::string> reversed{"c", "b", "a"};
  const auto r = align(m, reversed);
  CHECK(r.ids == reversed);
  CHECK(r.data(0, 0) == 3.0);
  CHECK(r.data(2, 0) == 1.0);
  const std::vector<std::string> subset{"b"};
  const auto once = align(m, subset);
  CHECK(align(once, subset).data == once.data);

  const std::vector<std::string> missing{"a", "zz", "yy"};
  try {
    align(m, missing);
    FAIL("should throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
    CHECK(std::string(e.what()).find("yy") != std::string::npos);
  }
}

TEST_CASE("validate rejects broken invariants") {
  CHECK(kind_of([] { make({"a"}, RowMatrix::Ones(2, 2)).validate(); }) == ErrorKind::Validation);
  CHECK(kind_of([] { make({"a", "a"}, RowMatrix::Ones(2, 2)).validate(); }) == ErrorKind::Validation);
  CHECK(kind_of([] {
          auto m = make({"a"}, RowMatrix::Ones(1, 2));
          m.normalized = true;
          m.validate();
        }) == ErrorKind::Validation);
}
