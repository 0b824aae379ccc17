#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <string>

#include "lesam/lesam.h"

namespace {

const char kQuickConfig[] =
    "problem.kind = quadratic\n"
    "problem.dim = 2\n"
    "problem.diag_a = 3, 1\n"
    "optimizer.kind = sgd\n"
    "optimizer.lr = 0.1\n"
    "run.epochs = 1\n"
    "run.steps_per_epoch = 5\n"
    "diagnostics.final_spectrum = false\n"
    "diagnostics.final_trace = false\n";

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  lesam_string_free(s);
  return out;
}

lesam_config* must_parse(const char* text) {
  lesam_config* cfg = nullptr;
  EXPECT_EQ(lesam_config_parse_text(text, &cfg), LESAM_OK) << lesam_last_error();
  return cfg;
}

TEST(CApi, StatusNamesAreStable) {
  EXPECT_STREQ(lesam_status_name(LESAM_OK), "Ok");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_ZERO_DIRECTION), "ZeroDirection");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_DIM_MISMATCH), "DimMismatch");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_CAPABILITY_MISSING), "CapabilityMissing");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_NO_CONVERGENCE), "NoConvergence");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_PARSE), "ParseError");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_VALIDATION), "ValidationError");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_DIVERGENCE), "DivergenceError");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_IO), "IoError");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_INVALID_ARGUMENT), "InvalidArgument");
  EXPECT_STREQ(lesam_status_name(LESAM_ERR_INTERNAL), "InternalError");
}

TEST(CApi, ParseRunAndReadResults) {
  lesam_config* cfg = must_parse(kQuickConfig);
  ASSERT_NE(cfg, nullptr);

  lesam_result* res = nullptr;
  ASSERT_EQ(lesam_run(cfg, &res), LESAM_OK) << lesam_last_error();

  char* json = nullptr;
  ASSERT_EQ(lesam_result_summary_json(res, &json), LESAM_OK);
  const std::string summary = take_string(json);
  EXPECT_NE(summary.find("\"algo\""), std::string::npos);
  EXPECT_NE(summary.find("\"sgd\""), std::string::npos);
  EXPECT_NE(summary.find("\"steps_total\": 5"), std::string::npos);

  char* csv = nullptr;
  ASSERT_EQ(lesam_result_metrics_text(res, 0, &csv), LESAM_OK);
  const std::string metrics = take_string(csv);
  EXPECT_EQ(metrics.rfind("step,epoch,loss_center,", 0), 0u);

  char* jsonl = nullptr;
  ASSERT_EQ(lesam_result_metrics_text(res, 1, &jsonl), LESAM_OK);
  const std::string lines = take_string(jsonl);
  EXPECT_EQ(lines.rfind("{\"step\":0,", 0), 0u);
  EXPECT_NE(lines.find("\"sigma_t\":null"), std::string::npos);

  lesam_result_free(res);
  lesam_config_free(cfg);
}

TEST(CApi, ConfigSetAppliesOrRejectsAtomically) {
  lesam_config* cfg = must_parse(kQuickConfig);

  ASSERT_EQ(lesam_config_set(cfg, "optimizer.lr", "0.25"), LESAM_OK);
  char* text = nullptr;
  ASSERT_EQ(lesam_config_serialize(cfg, &text), LESAM_OK);
  const std::string before = take_string(text);
  EXPECT_NE(before.find("optimizer.lr = 0.25"), std::string::npos);

  // A failing set leaves the config untouched.
  EXPECT_EQ(lesam_config_set(cfg, "optimizer.lr", "quick"), LESAM_ERR_PARSE);
  EXPECT_EQ(lesam_config_set(cfg, "run.switch_epoch", "99"), LESAM_ERR_VALIDATION);
  EXPECT_EQ(lesam_config_set(cfg, "nope.key", "1"), LESAM_ERR_PARSE);
  EXPECT_NE(std::strlen(lesam_last_error()), 0u);

  ASSERT_EQ(lesam_config_serialize(cfg, &text), LESAM_OK);
  EXPECT_EQ(take_string(text), before);
  lesam_config_free(cfg);
}

TEST(CApi, SerializeRoundTripsThroughParse) {
  lesam_config* cfg = must_parse(kQuickConfig);
  char* s = nullptr;
  ASSERT_EQ(lesam_config_serialize(cfg, &s), LESAM_OK);
  const std::string first = take_string(s);

  lesam_config* cfg2 = must_parse(first.c_str());
  ASSERT_EQ(lesam_config_serialize(cfg2, &s), LESAM_OK);
  EXPECT_EQ(take_string(s), first);
  lesam_config_free(cfg2);
  lesam_config_free(cfg);
}

TEST(CApi, ErrorsMapAcrossTheBoundary) {
  lesam_config* cfg = nullptr;
  EXPECT_EQ(lesam_config_parse_text("problem.kind =\n", &cfg), LESAM_ERR_PARSE);
  EXPECT_NE(std::string(lesam_last_error()).find("line 1"), std::string::npos);

  EXPECT_EQ(lesam_config_parse_text("run.epochs = 2\nrun.switch_epoch = 3\n", &cfg),
            LESAM_ERR_VALIDATION);

  EXPECT_EQ(lesam_config_parse_file("/no/such/dir/a.cfg", &cfg), LESAM_ERR_IO);

  lesam_config* diverging = must_parse(
      "problem.kind = quadratic\n"
      "optimizer.kind = sgd\n"
      "optimizer.lr = 1e150\n"
      "run.epochs = 1\n"
      "run.steps_per_epoch = 4\n"
      "diagnostics.final_spectrum = false\n"
      "diagnostics.final_trace = false\n");
  lesam_result* res = nullptr;
  EXPECT_EQ(lesam_run(diverging, &res), LESAM_ERR_DIVERGENCE);
  EXPECT_NE(std::string(lesam_last_error()).find("step"), std::string::npos);
  lesam_config_free(diverging);
}

TEST(CApi, NullArgumentsAreRejectedNotCrashed) {
  lesam_config* cfg = nullptr;
  lesam_result* res = nullptr;
  char* s = nullptr;
  EXPECT_EQ(lesam_config_parse_text(nullptr, &cfg), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_config_parse_text(kQuickConfig, nullptr), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_run(nullptr, &res), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_result_summary_json(nullptr, &s), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_config_set(nullptr, "a", "b"), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_sweep(nullptr, nullptr), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lesam_spectrum(nullptr, 1, &s), LESAM_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::strlen(lesam_last_error()), 0u);
  lesam_config_free(nullptr);
  lesam_result_free(nullptr);
  lesam_sweep_free(nullptr);
}

TEST(CApi, SweepCountsTablesAndJson) {
  const std::string text = std::string(kQuickConfig) +
                           "sweep.param = optimizer.lr\n"
                           "sweep.values = 0.05, 0.2\n";
  lesam_config* cfg = must_parse(text.c_str());

  lesam_sweep_result* sw = nullptr;
  ASSERT_EQ(lesam_sweep(cfg, &sw), LESAM_OK) << lesam_last_error();
  EXPECT_EQ(lesam_sweep_count(sw), 2);
  EXPECT_EQ(lesam_sweep_count(nullptr), 0);

  char* table = nullptr;
  ASSERT_EQ(lesam_sweep_table(sw, &table), LESAM_OK);
  const std::string t = take_string(table);
  EXPECT_EQ(t.rfind("optimizer.lr\t", 0), 0u);
  EXPECT_NE(t.find("\tok"), std::string::npos);

  char* json = nullptr;
  ASSERT_EQ(lesam_sweep_json(sw, &json), LESAM_OK);
  const std::string j = take_string(json);
  EXPECT_NE(j.find("\"param\": \"optimizer.lr\""), std::string::npos);

  lesam_sweep_free(sw);
  lesam_config_free(cfg);
}

TEST(CApi, CurvatureProbesAndTiming) {
  lesam_config* cfg = must_parse(kQuickConfig);
  ASSERT_EQ(lesam_config_set(cfg, "run.epochs", "0"), LESAM_OK);

  char* json = nullptr;
  ASSERT_EQ(lesam_spectrum(cfg, 1, &json), LESAM_OK) << lesam_last_error();
  const std::string spec = take_string(json);
  EXPECT_NE(spec.find("\"eigenvalues\""), std::string::npos);
  EXPECT_NE(spec.find("\"converged\""), std::string::npos);

  char* csv = nullptr;
  ASSERT_EQ(lesam_landscape(cfg, 1, 5, 1.0, &csv), LESAM_OK);
  const std::string slice = take_string(csv);
  EXPECT_EQ(slice.rfind("alpha,loss", 0), 0u);

  EXPECT_EQ(lesam_landscape(cfg, 3, 5, 1.0, &csv), LESAM_ERR_INVALID_ARGUMENT);

  lesam_config* quick = must_parse(kQuickConfig);
  ASSERT_EQ(lesam_time_compare(quick, quick, 3, &json), LESAM_OK);
  const std::string tc = take_string(json);
  EXPECT_NE(tc.find("\"ratio\""), std::string::npos);
  lesam_config_free(quick);
  lesam_config_free(cfg);
}

TEST(CApi, WritesMetricsFiles) {
  lesam_config* cfg = must_parse(kQuickConfig);
  lesam_result* res = nullptr;
  ASSERT_EQ(lesam_run(cfg, &res), LESAM_OK);

  const std::string path = ::testing::TempDir() + "capi_metrics.csv";
  ASSERT_EQ(lesam_result_write_metrics(res, path.c_str(), 0), LESAM_OK);
  std::ifstream in(path);
  std::string header;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header.rfind("step,epoch,loss_center,", 0), 0u);

  EXPECT_EQ(lesam_result_write_metrics(res, "/no/such/dir/m.csv", 0), LESAM_ERR_IO);

  lesam_result_free(res);
  lesam_config_free(cfg);
}

}  // namespace
