#include <doctest.h>

#include <random>
#include <set>

#include "tryon/curation.hpp"
#include "tryon/png_io.hpp"

using namespace tryon;

namespace {

CurationRecord shop_frontal(const std::string& id) {
  CurationRecord r;
  r.id = id;
  r.viewpoint = "frontal";
  r.zoom = "none";
  r.occlusion = "slight";
  r.source = "shop";
  return r;
}

}  // namespace

TEST_CASE("stage1_filter") {
  CHECK(stage1_filter(shop_frontal("a")).keep);

  CurationRecord r = shop_frontal("a");
  r.viewpoint = "side";
  CHECK(stage1_filter(r).reason == "viewpoint");
  r = shop_frontal("a");
  r.zoom = "medium";
  CHECK(stage1_filter(r).reason == "zoom");
  r = shop_frontal("a");
  r.occlusion = "heavy";
  CHECK(stage1_filter(r).reason == "occlusion");
  r = shop_frontal("a");
  r.source = "customer";
  CHECK(stage1_filter(r).reason == "customer_source");
  r = shop_frontal("a");
  r.occlusion.reset();
  CHECK(stage1_filter(r).reason == "missing_annotation");
}

TEST_CASE("stage2_geometry") {
  CurationRecord r = shop_frontal("a");
  r.image_width = 640;
  r.image_height = 960;

  SUBCASE("absent bbox rejects") {
    CHECK(stage2_geometry(r).reason == "no_detection");
  }
  SUBCASE("vertical bbox within 5:8 is padded to the exact aspect") {
    r.bbox = BBox{200, 300, 100, 200};
    const GeometryDecision d = stage2_geometry(r);
    REQUIRE(d.crop.has_value());
    const BBox& p = d.crop->padded;
    CHECK(p.w * 8 == p.h * 5);
    CHECK(p.w >= 100);
    CHECK(p.h >= 200);
    // stays inside the image and still covers the bbox
    CHECK(p.x >= 0);
    CHECK(p.y >= 0);
    CHECK(p.x + p.w <= r.image_width);
    CHECK(p.y + p.h <= r.image_height);
    CHECK(p.x <= 200);
    CHECK(p.y <= 300);
    CHECK(p.x + p.w >= 300);
    CHECK(p.y + p.h >= 500);
  }
  SUBCASE("wide boxes reject") {
    r.bbox = BBox{0, 0, 200, 100};
    CHECK(stage2_geometry(r).reason == "horizontal");
    r.bbox = BBox{0, 0, 200, 200};  // square: 8w > 5h
    CHECK(stage2_geometry(r).reason == "aspect");
    r.bbox = BBox{0, 0, 126, 200};  // just over 5:8
    CHECK(stage2_geometry(r).reason == "aspect");
    r.bbox = BBox{0, 0, 125, 200};  // exactly 5:8 is allowed
    CHECK(stage2_geometry(r).crop.has_value());
  }
  SUBCASE("bbox at the image edge is clamped inside") {
    r.bbox = BBox{620, 0, 20, 900};
    const GeometryDecision d = stage2_geometry(r);
    REQUIRE(d.crop.has_value());
    const BBox& p = d.crop->padded;
    CHECK(p.w * 8 == p.h * 5);
    CHECK(p.x + p.w <= 640);
    CHECK(p.x >= 0);
  }
  SUBCASE("degenerate inputs reject") {
    r.bbox = BBox{0, 0, 0, 100};
    CHECK(stage2_geometry(r).reason == "degenerate");
    r.bbox = BBox{600, 900, 100, 200};  // pokes outside the image
    CHECK(stage2_geometry(r).reason == "degenerate");
    r.bbox = BBox{0, 0, 10, 100};
    r.image_width = 0;
    CHECK(stage2_geometry(r).reason == "degenerate");
  }
}

TEST_CASE("apply_crop") {
  SUBCASE("output is always 320x512") {
    const ImageBuffer img(400, 640, 3, 0.25f);
    const CropSpec spec{{10, 20, 50, 80}};
    const ImageBuffer out = apply_crop(img, spec);
    CHECK(out.width() == kCropTargetWidth);
    CHECK(out.height() == kCropTargetHeight);
    CHECK(out.channels() == 3);
  }
  SUBCASE("constant images stay constant") {
    const ImageBuffer img(400, 640, 1, 0.625f);
    const ImageBuffer out = apply_crop(img, CropSpec{{7, 3, 300, 480}});
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) CHECK(out.at(x, y, 0) == 0.625f);
  }
  SUBCASE("1:1 crop of a ramp copies pixels bitwise") {
    ImageBuffer img(400, 640, 1);
    for (int y = 0; y < 640; ++y)
      for (int x = 0; x < 400; ++x) img.set(x, y, 0, ((x * 7 + y * 3) % 256) / 255.0f);
    const CropSpec spec{{40, 60, 320, 512}};
    const ImageBuffer out = apply_crop(img, spec);
    for (int y = 0; y < 512; ++y)
      for (int x = 0; x < 320; ++x) CHECK(out.at(x, y, 0) == img.at(40 + x, 60 + y, 0));
  }
  SUBCASE("horizontal ramp stays monotone under upscaling") {
    ImageBuffer img(200, 320, 1);
    for (int y = 0; y < 320; ++y)
      for (int x = 0; x < 200; ++x) img.set(x, y, 0, x / 199.0f);
    const ImageBuffer out = apply_crop(img, CropSpec{{0, 0, 160, 256}});
    for (int y = 0; y < 512; ++y)
      for (int x = 1; x < 320; ++x) CHECK(out.at(x, y, 0) >= out.at(x - 1, y, 0));
  }
  SUBCASE("spec outside the image throws") {
    const ImageBuffer img(100, 100, 1);
    CHECK_THROWS_AS(apply_crop(img, CropSpec{{90, 0, 50, 80}}), std::invalid_argument);
  }
}

TEST_CASE("make_test_tuples") {
  SUBCASE("derangement over benchmark-sized lists") {
    for (const size_t n : {size_t{909}, size_t{1190}}) {
      std::vector<std::string> ids;
      for (size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
      const auto tuples = make_test_tuples(ids, "top", 7);
      REQUIRE(tuples.size() == n);
      std::set<std::string> garments;
      for (size_t i = 0; i < n; ++i) {
        CHECK(tuples[i].person_id == ids[i]);
        CHECK(tuples[i].garment_id != tuples[i].person_id);
        CHECK(tuples[i].category == "top");
        garments.insert(tuples[i].garment_id);
      }
      CHECK(garments.size() == n);  // permutation, not just sampling
    }
  }
  SUBCASE("deterministic per seed, different across seeds") {
    std::vector<std::string> ids;
    for (int i = 0; i < 50; ++i) ids.push_back(std::to_string(i));
    const auto a = make_test_tuples(ids, "dress", 11);
    const auto b = make_test_tuples(ids, "dress", 11);
    const auto c = make_test_tuples(ids, "dress", 12);
    REQUIRE(a.size() == b.size());
    bool same = true, differs = false;
    for (size_t i = 0; i < a.size(); ++i) {
      same = same && a[i].garment_id == b[i].garment_id;
      differs = differs || a[i].garment_id != c[i].garment_id;
    }
    CHECK(same);
    CHECK(differs);
  }
  SUBCASE("two ids swap; fewer throw") {
    const auto t = make_test_tuples({"a", "b"}, "top", 0);
    CHECK(t[0].garment_id == "b");
    CHECK(t[1].garment_id == "a");
    CHECK_THROWS_AS(make_test_tuples({"solo"}, "top", 0), std::invalid_argument);
  }
}

TEST_CASE("curate pipeline and manifest text") {
  const std::string records_text =
      "# fixture\n"
      "id=keepme viewpoint=frontal zoom=none occlusion=slight source=shop "
      "bbox=10,10,100,200 width=640 height=960\n"
      "id=sideways viewpoint=side zoom=none occlusion=slight source=shop "
      "bbox=10,10,100,200 width=640 height=960\n"
      "id=wide viewpoint=frontal zoom=none occlusion=slight source=shop "
      "bbox=10,10,300,200 width=640 height=960\n"
      "id=nobox viewpoint=frontal zoom=none occlusion=slight source=shop "
      "width=640 height=960\n";
  const auto records = parse_records(records_text);
  REQUIRE(records.size() == 4);
  CHECK(records[0].bbox->w == 100);
  CHECK(records[3].bbox == std::nullopt);

  const auto manifest = curate(records);
  REQUIRE(manifest.size() == 4);
  CHECK(manifest[0].keep);
  REQUIRE(manifest[0].crop.has_value());
  CHECK(manifest[0].crop->padded.w * 8 == manifest[0].crop->padded.h * 5);
  CHECK_FALSE(manifest[1].keep);
  CHECK(manifest[1].reason == "viewpoint");
  CHECK_FALSE(manifest[2].keep);
  CHECK(manifest[2].reason == "horizontal");
  CHECK_FALSE(manifest[3].keep);
  CHECK(manifest[3].reason == "no_detection");

  SUBCASE("manifest text round-trips") {
    const std::string text = manifest_to_text(manifest);
    const auto back = parse_manifest(text);
    REQUIRE(back.size() == manifest.size());
    for (size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].id == manifest[i].id);
      CHECK(back[i].keep == manifest[i].keep);
      CHECK(back[i].reason == manifest[i].reason);
      CHECK(back[i].crop.has_value() == manifest[i].crop.has_value());
      if (back[i].crop) {
        CHECK(back[i].crop->padded.x == manifest[i].crop->padded.x);
        CHECK(back[i].crop->padded.y == manifest[i].crop->padded.y);
        CHECK(back[i].crop->padded.w == manifest[i].crop->padded.w);
        CHECK(back[i].crop->padded.h == manifest[i].crop->padded.h);
        CHECK(back[i].crop->target_width == manifest[i].crop->target_width);
        CHECK(back[i].crop->target_height == manifest[i].crop->target_height);
      }
    }
  }
  SUBCASE("malformed record lines throw") {
    CHECK_THROWS_AS(parse_records("id=x unknown=1\n"), FormatError);
    CHECK_THROWS_AS(parse_records("viewpoint=frontal\n"), FormatError);
    CHECK_THROWS_AS(parse_records("id=x bbox=1,2,3\n"), FormatError);
    CHECK_THROWS_AS(parse_manifest("decision=keep\n"), FormatError);
  }
}
